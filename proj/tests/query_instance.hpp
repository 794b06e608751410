#pragma once

// Shared test fixture: a self-contained query-protocol instance
// (commitments, shares, permutations, keys) built directly, without
// running the full mixnet pipeline.

#include "tracemix/setmembership.hpp"

namespace tracemix::testing {

// Plaintext oracle for both query directions: set intersection on scalar
// encodings, independent of all protocol code.
inline IndexSet oracle_trace(const std::vector<Scalar>& from, const IndexSet& from_set,
                             const std::vector<Scalar>& to, const IndexSet& to_set) {
    std::set<Bytes> target;
    for (size_t j : to_set) target.insert(to[j].to_bytes());
    IndexSet out;
    for (size_t i : from_set) {
        if (target.count(from[i].to_bytes())) out.insert(i);
    }
    return out;
}

inline IndexSet all_indices(size_t n) {
    IndexSet s;
    for (size_t i = 0; i < n; ++i) s.insert(i);
    return s;
}

struct QueryInstance {
    SetupParams params;
    Rng rng;
    size_t n, m;
    std::vector<Scalar> values, rands;
    std::vector<Commitment> gammas;
    std::vector<OpeningProof> rhos;
    std::vector<Scalar> v_out;
    std::vector<size_t> sigma;  // composed permutation: v_out[j] = values[sigma[j]]
    G1 eg_pk;
    std::vector<Scalar> eg_sks;
    PaillierKeyMaterial pai;
    std::vector<PaillierCiphertext> eps_r;
    std::vector<std::vector<size_t>> perms;
    std::vector<std::vector<Scalar>> v_shares, r_shares;  // [server][index]
    std::vector<Rng> server_rngs;
    Rng querier_rng;

    QueryInstance(uint64_t seed, size_t n_, size_t m_, size_t paillier_bits = 1024)
        : params(setup(to_bytes("query-instance"), m_, n_)),
          rng(seed),
          n(n_),
          m(m_),
          pai(pai_keygen_dealer(paillier_bits, m_, rng)),
          querier_rng(rng.fork("querier")) {
        std::vector<G1> pk_shares;
        for (size_t k = 0; k < m; ++k) {
            eg_sks.push_back(random_nonzero_scalar(rng));
            pk_shares.push_back(eg_pk_share(params, eg_sks[k]));
            server_rngs.push_back(rng.fork("server", k));
        }
        eg_pk = eg_combine_pk(pk_shares);

        v_shares.assign(m, {});
        r_shares.assign(m, {});
        for (size_t i = 0; i < n; ++i) {
            values.push_back(random_scalar(rng));
            rands.push_back(random_scalar(rng));
            gammas.push_back(commit(params, values[i], rands[i]));
            rhos.push_back(prove_opening(params, gammas[i], {values[i], rands[i]}, rng));
            eps_r.push_back(pai_enc(pai.pk, scalar_to_mpz(rands[i]), rng));
            auto vs = share_mm(values[i], m, rng);
            auto rs = share_mm(rands[i], m, rng);
            for (size_t k = 0; k < m; ++k) {
                v_shares[k].push_back(vs[k]);
                r_shares[k].push_back(rs[k]);
            }
        }
        for (size_t k = 0; k < m; ++k) perms.push_back(rng.permutation(n));
        sigma = compose_hops(perms);
        for (size_t j = 0; j < n; ++j) v_out.push_back(values[sigma[j]]);
    }

    std::vector<QueryServerInput> server_inputs(std::vector<TripleStore>* stores = nullptr) {
        std::vector<QueryServerInput> out;
        for (size_t k = 0; k < m; ++k) {
            QueryServerInput in;
            in.eg_sk = eg_sks[k];
            in.pai_sk = &pai.sk_shares[k];
            in.perm = perms[k];
            in.v_shares = v_shares[k];
            in.r_shares = r_shares[k];
            if (stores) in.triples = &(*stores)[k];
            in.rng = &server_rngs[k];
            out.push_back(std::move(in));
        }
        return out;
    }

    std::vector<TripleStore> deal_stores(size_t count) {
        std::vector<TripleStore> stores(m);
        auto dealt = deal_triples(m, count, rng);
        for (const auto& t : dealt) {
            for (size_t k = 0; k < m; ++k) stores[k].put(t[k]);
        }
        return stores;
    }

    IndexSet run_db_sm(const IndexSet& I, const IndexSet& J, DbSmRecord* rec = nullptr,
                       DbSmWhiteBox* wb = nullptr) {
        auto inputs = server_inputs();
        Bus bus(1);
        TamperPlan tamper;
        return db_sm(params, eg_pk, gammas, v_out, I, J, inputs, querier_rng, bus, tamper,
                     to_bytes("sid-sm"), rec, wb);
    }

    IndexSet run_db_rsm(const IndexSet& I, const IndexSet& J, DbRsmRecord* rec = nullptr,
                        DbRsmWhiteBox* wb = nullptr) {
        auto stores = deal_stores(2 * J.size());
        auto inputs = server_inputs(&stores);
        Bus bus(2);
        TamperPlan tamper;
        return db_rsm(params, eg_pk, pai.pk, gammas, rhos, eps_r, v_out, I, J, inputs,
                      querier_rng, bus, tamper, to_bytes("sid-rsm"), rec, wb);
    }

    IndexSet random_subset(Rng& r) {
        IndexSet out;
        for (size_t i = 0; i < n; ++i) {
            if (r.coin()) out.insert(i);
        }
        return out;
    }
};

}  // namespace tracemix::testing
