#include <gtest/gtest.h>

#include <algorithm>

#include "tracemix/mixnet.hpp"

using namespace tracemix;

namespace {

IndexSet oracle_trace(const std::vector<Scalar>& from, const IndexSet& from_set,
                      const std::vector<Scalar>& to, const IndexSet& to_set) {
    std::set<Bytes> target;
    for (size_t j : to_set) target.insert(to[j].to_bytes());
    IndexSet out;
    for (size_t i : from_set) {
        if (target.count(from[i].to_bytes())) out.insert(i);
    }
    return out;
}

struct Deployment {
    SetupParams params;
    Rng root;
    MixnetPublicKey mpk;
    std::vector<MixServerSecret> msks;
    std::vector<Rng> server_rngs;
    Rng querier_rng, dealer_rng;
    Bus bus{7};
    TamperPlan tamper;
    std::vector<Scalar> values;
    std::vector<SenderCiphertext> cts;
    MixOutput mixed;

    explicit Deployment(uint64_t seed, size_t n, size_t m, bool do_mix = true)
        : params(setup(to_bytes("mixnet-test"), m, n)),
          root(seed),
          querier_rng(root.fork("querier")),
          dealer_rng(root.fork("dealer")) {
        for (size_t k = 0; k < m; ++k) server_rngs.push_back(root.fork("server", k));
        std::tie(mpk, msks) = keygen(params, 1024, server_rngs, dealer_rng);
        for (size_t i = 0; i < n; ++i) {
            values.push_back(random_scalar(root));
            Rng srng = root.fork("sender", i);
            cts.push_back(enc(params, mpk, values[i], srng));
        }
        if (do_mix) mixed = mix(params, mpk, cts, msks, server_rngs, bus, tamper);
    }

    QueryEnv env() {
        QueryEnv e;
        e.msks = &msks;
        e.witnesses = &mixed.witnesses;
        e.server_rngs = &server_rngs;
        e.querier_rng = &querier_rng;
        e.dealer_rng = &dealer_rng;
        e.bus = &bus;
        e.tamper = &tamper;
        return e;
    }

    IndexSet random_subset(Rng& r) {
        IndexSet out;
        for (size_t i = 0; i < cts.size(); ++i) {
            if (r.coin()) out.insert(i);
        }
        return out;
    }
};

TEST(KeygenTest, SingleServerRoundTrips) {
    Deployment d(1101, 2, 1);
    EXPECT_EQ(d.mixed.v_out.size(), 2u);
}

TEST(KeygenTest, DeterministicUnderFixedSeed) {
    Deployment a(1102, 2, 2, false);
    Deployment b(1102, 2, 2, false);
    EXPECT_EQ(a.mpk.to_bytes(), b.mpk.to_bytes());
    Deployment c(1103, 2, 2, false);
    EXPECT_NE(a.mpk.to_bytes(), c.mpk.to_bytes());
}

TEST(KeygenTest, ComponentKeysPassSchemeRoundTrips) {
    Deployment d(1104, 2, 3, false);
    Rng rng(42);
    // ElGamal round trip under the combined key.
    G1 msg = d.params.g1 * random_scalar(rng);
    EgCiphertext ct = eg_enc(d.params, d.mpk.eg_pk, msg, rng);
    std::vector<G1> shares;
    for (const auto& msk : d.msks) shares.push_back(eg_dec_share(ct, msk.eg_sk));
    EXPECT_TRUE(eg_tdec_combine(ct, shares, 3) == msg);
    // Paillier round trip.
    PaillierCiphertext pct = pai_enc(d.mpk.pai_pk, 12345, rng);
    std::vector<mpz_class> pshares;
    for (const auto& msk : d.msks) pshares.push_back(pai_dec_share(d.mpk.pai_pk, pct, msk.pai_sk));
    EXPECT_EQ(pai_tdec_combine(d.mpk.pai_pk, pshares, 3), 12345);
    // Share channel round trip.
    Bytes m = rng.bytes(32);
    EXPECT_EQ(pke_dec(d.params, d.msks[1].pke_sk, pke_enc(d.params, d.mpk.pke_pks[1], m, rng)),
              m);
}

TEST(EncTest, CiphertextComponentsAreConsistent) {
    Deployment d(1105, 3, 2, false);
    const SenderCiphertext& ct = d.cts[0];
    EXPECT_TRUE(verify_opening(d.params, ct.gamma, ct.rho_gamma));

    // Decrypting the per-server shares reconstructs v and the commitment
    // randomness; eps and eps_r decrypt to the same values.
    std::vector<Scalar> v_sh, r_sh;
    for (size_t k = 0; k < 2; ++k) {
        auto v = Fr::from_bytes(pke_dec(d.params, d.msks[k].pke_sk, ct.ev[k]));
        auto r = Fr::from_bytes(pke_dec(d.params, d.msks[k].pke_sk, ct.er[k]));
        ASSERT_TRUE(v && r);
        v_sh.push_back(*v);
        r_sh.push_back(*r);
    }
    Scalar v = recons(v_sh), r = recons(r_sh);
    EXPECT_TRUE(v == d.values[0]);
    EXPECT_TRUE(commit(d.params, v, r) == ct.gamma);

    auto tdec = [&](const PaillierCiphertext& c) {
        std::vector<mpz_class> shares;
        for (const auto& msk : d.msks) shares.push_back(pai_dec_share(d.mpk.pai_pk, c, msk.pai_sk));
        return pai_tdec_combine(d.mpk.pai_pk, shares, 2);
    };
    EXPECT_EQ(tdec(ct.eps), scalar_to_mpz(v));
    EXPECT_EQ(tdec(ct.eps_r), scalar_to_mpz(r));
}

TEST(MixTest, SingleCiphertextPassesThrough) {
    Deployment d(1106, 1, 2);
    ASSERT_EQ(d.mixed.v_out.size(), 1u);
    EXPECT_TRUE(d.mixed.v_out[0] == d.values[0]);
}

TEST(MixTest, MultisetPreservedAndPositionalLawHolds) {
    Deployment d(1107, 8, 3);
    std::vector<Bytes> in, out;
    for (const auto& v : d.values) in.push_back(v.to_bytes());
    for (const auto& v : d.mixed.v_out) out.push_back(v.to_bytes());
    std::sort(in.begin(), in.end());
    std::sort(out.begin(), out.end());
    EXPECT_EQ(in, out);

    // White-box: v'_j = v_{pi(j)} under the composed permutation.
    std::vector<std::vector<size_t>> perms;
    for (const auto& w : d.mixed.witnesses) perms.push_back(w.perm);
    auto sigma = compose_hops(perms);
    for (size_t j = 0; j < 8; ++j) {
        EXPECT_TRUE(d.mixed.v_out[j] == d.values[sigma[j]]);
    }
    // Witness shares reconstruct the sender values.
    for (size_t i = 0; i < 8; ++i) {
        std::vector<Scalar> sh;
        for (const auto& w : d.mixed.witnesses) sh.push_back(w.v_shares[i]);
        EXPECT_TRUE(recons(sh) == d.values[i]);
    }
}

TEST(MixTest, MalformedOpeningProofRejected) {
    Deployment d(1108, 3, 2, false);
    d.cts[1].rho_gamma.c = d.cts[1].rho_gamma.c + Scalar::from_u64(1);
    EXPECT_THROW(mix(d.params, d.mpk, d.cts, d.msks, d.server_rngs, d.bus, d.tamper),
                 ProtocolError);
}

TEST(BTraceInTest, EmptyRequestGivesEmptyResult) {
    Deployment d(1109, 4, 2);
    QueryEnv env = d.env();
    QueryResult res = btrace_in(d.params, d.mpk, d.cts, d.mixed.v_out, {}, {0, 1}, env,
                                to_bytes("q0"));
    EXPECT_TRUE(res.accepted.empty());
    EXPECT_FALSE(res.aborted);
}

TEST(BTraceInTest, FullOutputSetAcceptsAllRequested) {
    Deployment d(1110, 4, 2);
    QueryEnv env = d.env();
    IndexSet I{0, 2};
    IndexSet J{0, 1, 2, 3};
    QueryResult res = btrace_in(d.params, d.mpk, d.cts, d.mixed.v_out, I, J, env, to_bytes("q1"));
    EXPECT_EQ(res.accepted, I);
    EXPECT_FALSE(res.aborted);
}

TEST(BTraceInTest, MatchesOracleNeverAborts) {
    Rng meta(1111);
    for (int trial = 0; trial < 3; ++trial) {
        Deployment d(meta.u64(), 5 + meta.u64_below(4), 1 + meta.u64_below(3));
        QueryEnv env = d.env();
        IndexSet I = d.random_subset(meta), J = d.random_subset(meta);
        QueryResult res =
            btrace_in(d.params, d.mpk, d.cts, d.mixed.v_out, I, J, env, to_bytes("q2"));
        EXPECT_EQ(res.accepted, oracle_trace(d.values, I, d.mixed.v_out, J));
        EXPECT_FALSE(res.aborted);
        // Structural invariant: accepted sets live inside the request.
        for (size_t i : res.accepted) EXPECT_TRUE(I.count(i));
    }
}

TEST(BTraceInTest, InterleavedModeAgrees) {
    Rng meta(1112);
    Deployment d(meta.u64(), 6, 2);
    IndexSet I = d.random_subset(meta), J = d.random_subset(meta);
    QueryEnv env = d.env();
    QueryResult two_run =
        btrace_in(d.params, d.mpk, d.cts, d.mixed.v_out, I, J, env, to_bytes("q3"), false);
    QueryResult one_run =
        btrace_in(d.params, d.mpk, d.cts, d.mixed.v_out, I, J, env, to_bytes("q4"), true);
    EXPECT_EQ(two_run.accepted, one_run.accepted);
    EXPECT_FALSE(one_run.aborted);
}

TEST(BTraceOutTest, EmptyAndFullRequests) {
    Deployment d(1113, 4, 2);
    QueryEnv env = d.env();
    QueryResult res =
        btrace_out(d.params, d.mpk, d.cts, d.mixed.v_out, {0, 1}, {}, env, to_bytes("q5"));
    EXPECT_TRUE(res.accepted.empty());
    EXPECT_FALSE(res.aborted);

    IndexSet all{0, 1, 2, 3};
    IndexSet J{1, 3};
    QueryResult res2 =
        btrace_out(d.params, d.mpk, d.cts, d.mixed.v_out, all, J, env, to_bytes("q6"));
    EXPECT_EQ(res2.accepted, J);
    EXPECT_FALSE(res2.aborted);
}

TEST(BTraceOutTest, MatchesOracleNeverAborts) {
    Rng meta(1114);
    for (int trial = 0; trial < 2; ++trial) {
        Deployment d(meta.u64(), 4 + meta.u64_below(3), 1 + meta.u64_below(2));
        QueryEnv env = d.env();
        IndexSet I = d.random_subset(meta), J = d.random_subset(meta);
        QueryResult res =
            btrace_out(d.params, d.mpk, d.cts, d.mixed.v_out, I, J, env, to_bytes("q7"));
        EXPECT_EQ(res.accepted, oracle_trace(d.mixed.v_out, J, d.values, I));
        EXPECT_FALSE(res.aborted);
        for (size_t j : res.accepted) EXPECT_TRUE(J.count(j));
    }
}

TEST(SerializationTest, MpkAndCiphertextRoundTrip) {
    Deployment d(1115, 2, 2, false);
    auto mpk2 = MixnetPublicKey::from_bytes(d.mpk.to_bytes());
    ASSERT_TRUE(mpk2.has_value());
    EXPECT_EQ(mpk2->to_bytes(), d.mpk.to_bytes());

    Bytes ct = d.cts[0].to_bytes(d.mpk.pai_pk);
    auto ct2 = SenderCiphertext::from_bytes(d.mpk.pai_pk, 2, ct);
    ASSERT_TRUE(ct2.has_value());
    EXPECT_EQ(ct2->to_bytes(d.mpk.pai_pk), ct);
    EXPECT_FALSE(SenderCiphertext::from_bytes(d.mpk.pai_pk, 2, Bytes(10, 0)).has_value());
}

}  // namespace
