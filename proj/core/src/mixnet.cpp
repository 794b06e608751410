#include "tracemix/mixnet.hpp"

#include "tracemix/parallel.hpp"

namespace tracemix {

namespace {

std::string server_role(size_t k) { return "server:" + std::to_string(k); }

std::vector<QueryServerInput> make_query_inputs(QueryEnv& env, bool with_paillier,
                                                std::vector<TripleStore>* triples) {
    std::vector<QueryServerInput> out;
    size_t m = env.msks->size();
    for (size_t k = 0; k < m; ++k) {
        QueryServerInput in;
        in.eg_sk = (*env.msks)[k].eg_sk;
        if (with_paillier) in.pai_sk = &(*env.msks)[k].pai_sk;
        in.perm = (*env.witnesses)[k].perm;
        in.v_shares = (*env.witnesses)[k].v_shares;
        in.r_shares = (*env.witnesses)[k].r_shares;
        if (triples) in.triples = &(*triples)[k];
        in.rng = &(*env.server_rngs)[k];
        out.push_back(std::move(in));
    }
    return out;
}

Bytes sub_session(const Bytes& session_id, const std::string& label) {
    Bytes out = session_id;
    append_framed(out, label);
    return out;
}

}  // namespace

std::pair<MixnetPublicKey, std::vector<MixServerSecret>> keygen(const SetupParams& params,
                                                                size_t paillier_bits,
                                                                std::vector<Rng>& server_rngs,
                                                                Rng& dealer_rng) {
    size_t m = params.m;
    if (server_rngs.size() != m) throw ProtocolError("keygen: need one rng per mix-server");

    MixnetPublicKey mpk;
    std::vector<MixServerSecret> msks(m);
    std::vector<G1> eg_shares;
    for (size_t k = 0; k < m; ++k) {
        PkeKeyPair pke = pke_keygen(params, server_rngs[k]);
        msks[k].pke_sk = pke.sk;
        mpk.pke_pks.push_back(pke.pk);
        msks[k].eg_sk = random_nonzero_scalar(server_rngs[k]);
        eg_shares.push_back(eg_pk_share(params, msks[k].eg_sk));
    }
    mpk.eg_pk = eg_combine_pk(eg_shares);

    PaillierKeyMaterial pai = pai_keygen_dealer(paillier_bits, m, dealer_rng);
    mpk.pai_pk = pai.pk;
    for (size_t k = 0; k < m; ++k) msks[k].pai_sk = pai.sk_shares[k];
    return {mpk, msks};
}

SenderCiphertext enc(const SetupParams& params, const MixnetPublicKey& mpk, const Scalar& v,
                     Rng& rng) {
    size_t m = mpk.pke_pks.size();
    SenderCiphertext ct;
    ct.eps = pai_enc(mpk.pai_pk, scalar_to_mpz(v), rng);
    Scalar r = random_scalar(rng);
    ct.gamma = commit(params, v, r);
    ct.rho_gamma = prove_opening(params, ct.gamma, {v, r}, rng);
    ct.eps_r = pai_enc(mpk.pai_pk, scalar_to_mpz(r), rng);
    std::vector<Scalar> v_sh = share_mm(v, m, rng);
    std::vector<Scalar> r_sh = share_mm(r, m, rng);
    for (size_t k = 0; k < m; ++k) {
        ct.ev.push_back(pke_enc(params, mpk.pke_pks[k], v_sh[k].to_bytes(), rng));
        ct.er.push_back(pke_enc(params, mpk.pke_pks[k], r_sh[k].to_bytes(), rng));
    }
    return ct;
}

MixOutput mix(const SetupParams& params, const MixnetPublicKey& mpk,
              const std::vector<SenderCiphertext>& cts, std::vector<MixServerSecret>& msks,
              std::vector<Rng>& server_rngs, Bus& bus, const TamperPlan& tamper) {
    size_t n = cts.size();
    size_t m = msks.size();
    if (n == 0) throw ProtocolError("mix: empty ciphertext list");

    for (size_t i = 0; i < n; ++i) {
        if (!verify_opening(params, cts[i].gamma, cts[i].rho_gamma)) {
            throw ProtocolError("mix: malformed ciphertext, opening proof fails at index " +
                                std::to_string(i));
        }
        if (cts[i].ev.size() != m || cts[i].er.size() != m) {
            throw ProtocolError("mix: ciphertext lacks a share for every server");
        }
    }

    MixOutput out;
    out.witnesses.resize(m);
    for (size_t k = 0; k < m; ++k) {
        out.witnesses[k].perm = server_rngs[k].permutation(n);
    }

    // Re-encryption mixnet over the value ciphertexts.
    std::vector<PaillierCiphertext> cur;
    cur.reserve(n);
    for (const auto& ct : cts) cur.push_back(ct.eps);
    for (size_t k = 0; k < m; ++k) {
        const auto& perm = out.witnesses[k].perm;
        std::vector<mpz_class> rho(n);
        for (size_t j = 0; j < n; ++j) rho[j] = pai_random_rho(server_rngs[k]);
        std::vector<PaillierCiphertext> next(n);
        parallel_for(n, [&](size_t j) {
            next[j] = pai_add(mpk.pai_pk, cur[perm[j]], pai_enc_with(mpk.pai_pk, 0, rho[j]));
        });
        cur = std::move(next);
        Bytes payload;
        for (const auto& ct : cur) append(payload, pai_ct_to_bytes(mpk.pai_pk, ct));
        bus.publish("mix.shuffle", server_role(k), payload);
    }

    out.v_out.assign(n, Scalar::zero());
    parallel_for(n, [&](size_t j) {
        std::vector<mpz_class> shares;
        for (size_t k = 0; k < m; ++k) {
            shares.push_back(pai_dec_share(mpk.pai_pk, cur[j], msks[k].pai_sk));
        }
        mpz_class value = pai_tdec_combine(mpk.pai_pk, shares, m);
        if (value >= scalar_modulus()) {
            throw ProtocolError("mix: decrypted value outside the scalar field at slot " +
                                std::to_string(j));
        }
        out.v_out[j] = mpz_to_scalar(value);
    });
    Bytes tdec_payload;
    for (const Scalar& v : out.v_out) v.to_bytes(tdec_payload);
    bus.publish("mix.tdec", "server:0", tdec_payload);

    // Every server decrypts its own share vectors.
    for (size_t k = 0; k < m; ++k) {
        for (size_t i = 0; i < n; ++i) {
            Bytes v_raw = pke_dec(params, msks[k].pke_sk, cts[i].ev[k]);
            Bytes r_raw = pke_dec(params, msks[k].pke_sk, cts[i].er[k]);
            auto v_sh = Fr::from_bytes(v_raw);
            auto r_sh = Fr::from_bytes(r_raw);
            if (!v_sh || !r_sh) {
                throw ProtocolError("mix: share decryption failed at index " + std::to_string(i));
            }
            Scalar v_val = *v_sh;
            if (tamper.active("mix.vshare", k, i)) v_val = v_val + Scalar::from_u64(1);
            out.witnesses[k].v_shares.push_back(v_val);
            out.witnesses[k].r_shares.push_back(*r_sh);
        }
    }
    return out;
}

QueryResult btrace_in(const SetupParams& params, const MixnetPublicKey& mpk,
                      const std::vector<SenderCiphertext>& cts,
                      const std::vector<Scalar>& v_out, const IndexSet& I, const IndexSet& J,
                      QueryEnv& env, const Bytes& session_id, bool interleaved) {
    size_t n = cts.size();
    std::vector<Commitment> gammas;
    gammas.reserve(n);
    for (const auto& ct : cts) gammas.push_back(ct.gamma);

    QueryResult res;
    res.kind = QueryResult::Kind::TraceIn;
    res.requested = I;
    try {
        if (interleaved) {
            auto inputs = make_query_inputs(env, false, nullptr);
            auto [acc, acc_c] = db_sm_interleaved(params, mpk.eg_pk, gammas, v_out, I, J, inputs,
                                                  *env.querier_rng, *env.bus, *env.tamper,
                                                  sub_session(session_id, "sm-interleaved"),
                                                  &res.sm_main, &res.sm_comp);
            res.accepted = acc;
            res.accepted_complement = acc_c;
        } else {
            auto inputs_main = make_query_inputs(env, false, nullptr);
            res.accepted = db_sm(params, mpk.eg_pk, gammas, v_out, I, J, inputs_main,
                                 *env.querier_rng, *env.bus, *env.tamper,
                                 sub_session(session_id, "sm-main"), &res.sm_main);
            auto inputs_comp = make_query_inputs(env, false, nullptr);
            res.accepted_complement =
                db_sm(params, mpk.eg_pk, gammas, v_out, I, complement_set(J, n), inputs_comp,
                      *env.querier_rng, *env.bus, *env.tamper,
                      sub_session(session_id, "sm-comp"), &res.sm_comp);
        }
    } catch (const ProtocolAbort& abort) {
        res.aborted = true;
        res.stage1_abort = true;
        res.abort_reason = abort.what();
        return res;
    }

    IndexSet unioned = res.accepted;
    unioned.insert(res.accepted_complement.begin(), res.accepted_complement.end());
    res.aborted = unioned != I;
    if (res.aborted) res.abort_reason = "complement union differs from the requested set";
    return res;
}

QueryResult btrace_out(const SetupParams& params, const MixnetPublicKey& mpk,
                       const std::vector<SenderCiphertext>& cts,
                       const std::vector<Scalar>& v_out, const IndexSet& I, const IndexSet& J,
                       QueryEnv& env, const Bytes& session_id) {
    size_t n = cts.size();
    size_t m = env.msks->size();
    std::vector<Commitment> gammas;
    std::vector<OpeningProof> rhos;
    std::vector<PaillierCiphertext> eps_r;
    for (const auto& ct : cts) {
        gammas.push_back(ct.gamma);
        rhos.push_back(ct.rho_gamma);
        eps_r.push_back(ct.eps_r);
    }

    QueryResult res;
    res.kind = QueryResult::Kind::TraceOut;
    res.requested = J;

    // Input-independent precomputation: two multiplications per requested
    // index per run.
    auto deal_stores = [&]() {
        auto dealt = deal_triples(m, 2 * J.size(), *env.dealer_rng);
        std::vector<TripleStore> stores(m);
        for (const auto& t : dealt) {
            for (size_t k = 0; k < m; ++k) stores[k].put(t[k]);
        }
        return stores;
    };

    try {
        auto stores_main = deal_stores();
        auto inputs_main = make_query_inputs(env, true, &stores_main);
        res.accepted = db_rsm(params, mpk.eg_pk, mpk.pai_pk, gammas, rhos, eps_r, v_out, I, J,
                              inputs_main, *env.querier_rng, *env.bus, *env.tamper,
                              sub_session(session_id, "rsm-main"), &res.rsm_main);
        auto stores_comp = deal_stores();
        auto inputs_comp = make_query_inputs(env, true, &stores_comp);
        res.accepted_complement =
            db_rsm(params, mpk.eg_pk, mpk.pai_pk, gammas, rhos, eps_r, v_out,
                   complement_set(I, n), J, inputs_comp, *env.querier_rng, *env.bus, *env.tamper,
                   sub_session(session_id, "rsm-comp"), &res.rsm_comp);
    } catch (const ProtocolAbort& abort) {
        res.aborted = true;
        res.stage1_abort = true;
        res.abort_reason = abort.what();
        return res;
    }

    IndexSet unioned = res.accepted;
    unioned.insert(res.accepted_complement.begin(), res.accepted_complement.end());
    res.aborted = unioned != J;
    if (res.aborted) res.abort_reason = "complement union differs from the requested set";
    return res;
}

Bytes MixnetPublicKey::to_bytes() const {
    Bytes out;
    append_u32(out, static_cast<uint32_t>(pke_pks.size()));
    for (const auto& pk : pke_pks) pk.to_bytes(out);
    eg_pk.to_bytes(out);
    append_framed(out, pai_pk.to_bytes());
    return out;
}

std::optional<MixnetPublicKey> MixnetPublicKey::from_bytes(BytesView in) {
    try {
        ByteReader r(in);
        uint32_t m = r.read_u32();
        if (m == 0 || m > 4096) return std::nullopt;
        MixnetPublicKey mpk;
        for (uint32_t k = 0; k < m; ++k) {
            auto pk = G1::from_bytes(r.read_raw(32));
            if (!pk) return std::nullopt;
            mpk.pke_pks.push_back(*pk);
        }
        auto eg = G1::from_bytes(r.read_raw(32));
        if (!eg) return std::nullopt;
        mpk.eg_pk = *eg;
        auto pai = PaillierPublicKey::from_bytes(r.read_framed());
        if (!pai) return std::nullopt;
        mpk.pai_pk = *pai;
        if (!r.done()) return std::nullopt;
        return mpk;
    } catch (const std::runtime_error&) {
        return std::nullopt;
    }
}

Bytes SenderCiphertext::to_bytes(const PaillierPublicKey& pk) const {
    Bytes out;
    append(out, pai_ct_to_bytes(pk, eps));
    gamma.gamma.to_bytes(out);
    append_u32(out, static_cast<uint32_t>(ev.size()));
    for (const auto& b : ev) append_framed(out, b);
    for (const auto& b : er) append_framed(out, b);
    append(out, rho_gamma.to_bytes());
    append(out, pai_ct_to_bytes(pk, eps_r));
    return out;
}

std::optional<SenderCiphertext> SenderCiphertext::from_bytes(const PaillierPublicKey& pk,
                                                             size_t m, BytesView in) {
    try {
        ByteReader r(in);
        SenderCiphertext ct;
        auto eps = pai_ct_from_bytes(pk, r.read_raw(2 * pk.n_bytes));
        if (!eps) return std::nullopt;
        ct.eps = *eps;
        auto gamma = G1::from_bytes(r.read_raw(32));
        if (!gamma) return std::nullopt;
        ct.gamma = Commitment{*gamma};
        uint32_t shares = r.read_u32();
        if (shares != m) return std::nullopt;
        for (uint32_t k = 0; k < shares; ++k) ct.ev.push_back(r.read_framed());
        for (uint32_t k = 0; k < shares; ++k) ct.er.push_back(r.read_framed());
        auto rho = OpeningProof::from_bytes(r.read_raw(128));
        if (!rho) return std::nullopt;
        ct.rho_gamma = *rho;
        auto eps_r = pai_ct_from_bytes(pk, r.read_raw(2 * pk.n_bytes));
        if (!eps_r) return std::nullopt;
        ct.eps_r = *eps_r;
        if (!r.done()) return std::nullopt;
        return ct;
    } catch (const std::runtime_error&) {
        return std::nullopt;
    }
}

}  // namespace tracemix
