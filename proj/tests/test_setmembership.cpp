#include <gtest/gtest.h>

#include "query_instance.hpp"

using namespace tracemix;

namespace {

using tracemix::testing::QueryInstance;
using tracemix::testing::all_indices;
using tracemix::testing::oracle_trace;


TEST(DbSmTest, FullSetsAccept) {
    QueryInstance inst(9001, 6, 2);
    IndexSet all = all_indices(inst.n);
    EXPECT_EQ(inst.run_db_sm(all, all), all);
}

TEST(DbSmTest, EmptyQuerySetRejectsAll) {
    QueryInstance inst(9002, 5, 2);
    EXPECT_TRUE(inst.run_db_sm(all_indices(inst.n), {}).empty());
    EXPECT_TRUE(inst.run_db_sm({}, all_indices(inst.n)).empty());
}

TEST(DbSmTest, MatchesOracleOnRandomInstances) {
    Rng meta(9003);
    for (int trial = 0; trial < 6; ++trial) {
        size_t n = 4 + meta.u64_below(5);
        size_t m = 1 + meta.u64_below(3);
        QueryInstance inst(meta.u64(), n, m);
        IndexSet I = inst.random_subset(meta), J = inst.random_subset(meta);
        IndexSet expect = oracle_trace(inst.values, I, inst.v_out, J);
        EXPECT_EQ(inst.run_db_sm(I, J), expect);
    }
}

// Lemma-level check: for member indices the published blinded signature
// equals g1^{b/(x+v)}; for non-members it is g1^b.
TEST(DbSmTest, BlindedSignatureAlgebra) {
    QueryInstance inst(9004, 6, 3);
    IndexSet I = all_indices(inst.n);
    IndexSet J{0, 2, 4};
    DbSmRecord rec;
    DbSmWhiteBox wb;
    inst.run_db_sm(I, J, &rec, &wb);

    std::vector<size_t> sigma_inv = invert_permutation(inst.sigma);
    for (size_t i = 0; i < inst.n; ++i) {
        Scalar b = Scalar::zero();
        for (size_t k = 0; k < inst.m; ++k) b = b + wb.b_shares[k][i];
        bool member = J.count(sigma_inv[i]) != 0;
        if (member) {
            Scalar exp = b * (wb.querier_key.x + inst.values[i]).inverse();
            EXPECT_TRUE(rec.sigma_tilde[i] == inst.params.g1 * exp);
        } else {
            EXPECT_TRUE(rec.sigma_tilde[i] == inst.params.g1 * b);
        }
    }
}

TEST(DbSmTest, InterleavedMatchesTwoRunMode) {
    Rng meta(9005);
    for (int trial = 0; trial < 3; ++trial) {
        QueryInstance inst(meta.u64(), 6, 2);
        IndexSet I = inst.random_subset(meta), J = inst.random_subset(meta);

        auto inputs = inst.server_inputs();
        Bus bus(3);
        TamperPlan tamper;
        DbSmRecord rec_main, rec_comp;
        auto [acc, acc_c] =
            db_sm_interleaved(inst.params, inst.eg_pk, inst.gammas, inst.v_out, I, J, inputs,
                              inst.querier_rng, bus, tamper, to_bytes("sid-il"), &rec_main,
                              &rec_comp);
        IndexSet expect = oracle_trace(inst.values, I, inst.v_out, J);
        IndexSet expect_c =
            oracle_trace(inst.values, I, inst.v_out, complement_set(J, inst.n));
        EXPECT_EQ(acc, expect);
        EXPECT_EQ(acc_c, expect_c);
        // The two accepted sets partition I.
        IndexSet unioned = acc;
        unioned.insert(acc_c.begin(), acc_c.end());
        EXPECT_EQ(unioned, I);
    }
}

TEST(DbRsmTest, FullSetsAccept) {
    QueryInstance inst(9006, 5, 2);
    IndexSet all = all_indices(inst.n);
    EXPECT_EQ(inst.run_db_rsm(all, all), all);
}

TEST(DbRsmTest, EmptyCommitmentSetRejectsAll) {
    QueryInstance inst(9007, 5, 2);
    EXPECT_TRUE(inst.run_db_rsm({}, all_indices(inst.n)).empty());
}

TEST(DbRsmTest, MatchesOracleOnRandomInstances) {
    Rng meta(9008);
    for (int trial = 0; trial < 4; ++trial) {
        size_t n = 4 + meta.u64_below(4);
        size_t m = 1 + meta.u64_below(3);
        QueryInstance inst(meta.u64(), n, m);
        IndexSet I = inst.random_subset(meta), J = inst.random_subset(meta);
        IndexSet expect = oracle_trace(inst.v_out, J, inst.values, I);
        EXPECT_EQ(inst.run_db_rsm(I, J), expect);
    }
}

// Lemma-level check: unblinding the published triple with the summed
// blinding factors yields a BBS+ signature exactly on member indices, and
// the mod-q identities on c~ and r~ hold everywhere.
TEST(DbRsmTest, UnblindedTripleVerifiesForMembers) {
    QueryInstance inst(9009, 6, 2);
    IndexSet I{0, 1, 3};
    IndexSet J = all_indices(inst.n);
    DbRsmRecord rec;
    DbRsmWhiteBox wb;
    inst.run_db_rsm(I, J, &rec, &wb);

    for (size_t j = 0; j < inst.n; ++j) {
        Scalar bs = Scalar::zero(), bc = Scalar::zero(), br = Scalar::zero();
        for (size_t k = 0; k < inst.m; ++k) {
            bs = bs + wb.bs_shares[k][j];
            bc = bc + wb.bc_shares[k][j];
            br = br + wb.br_shares[k][j];
        }
        size_t src = inst.sigma[j];
        // mod-q unblinding identities.
        EXPECT_TRUE(rec.c_tilde[j] - bc == rec.quasi_c[src]);
        EXPECT_TRUE(rec.r_tilde[j] - br == rec.quasi_rhat[src] + inst.rands[src]);

        BBSPlusSignature sig{rec.c_tilde[j] - bc, rec.r_tilde[j] - br,
                             rec.s_tilde[j] - inst.params.g1 * bs};
        bool member = I.count(src) != 0;
        EXPECT_EQ(bbsplus_verify(inst.params, wb.querier_key.y, inst.v_out[j], sig), member);
    }
}

TEST(DbRsmTest, DeltaSharesStayConsistent) {
    QueryInstance inst(9010, 4, 3);
    IndexSet J = all_indices(inst.n);
    DbRsmWhiteBox wb;
    inst.run_db_rsm({0, 2}, J, nullptr, &wb);
    size_t row = 0;
    for (size_t j : J) {
        Scalar bs = recons(std::vector<Scalar>{wb.bs_shares[0][j], wb.bs_shares[1][j],
                                               wb.bs_shares[2][j]});
        Scalar bc = recons(std::vector<Scalar>{wb.bc_shares[0][j], wb.bc_shares[1][j],
                                               wb.bc_shares[2][j]});
        Scalar d0 = recons(wb.d0_shares[row]);
        EXPECT_TRUE(recons(wb.d1_shares[row]) == bs * bc);
        EXPECT_TRUE(recons(wb.d2_shares[row]) == d0 * bc);
        ++row;
    }
}

TEST(DbRsmTest, InvalidOpeningProofAborts) {
    QueryInstance inst(9011, 4, 2);
    inst.rhos[1].z_v = inst.rhos[1].z_v + Scalar::from_u64(1);
    EXPECT_THROW(inst.run_db_rsm({0, 1}, {0}), ProtocolAbort);
}

TEST(DbRsmTest, TripleExhaustionIsAnError) {
    QueryInstance inst(9012, 4, 2);
    auto stores = inst.deal_stores(1);  // too few for |J| = 2
    auto inputs = inst.server_inputs(&stores);
    Bus bus(4);
    TamperPlan tamper;
    EXPECT_THROW(db_rsm(inst.params, inst.eg_pk, inst.pai.pk, inst.gammas, inst.rhos,
                        inst.eps_r, inst.v_out, all_indices(inst.n), {0, 1}, inputs,
                        inst.querier_rng, bus, tamper, to_bytes("sid"), nullptr),
                 std::runtime_error);
}

TEST(SingleProverSmTest, MatchesMembership) {
    SetupParams params = setup(to_bytes("sp-sm"), 1, 1);
    Rng rng(9013);
    Rng vr = rng.fork("verifier");
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Scalar> phi;
        size_t size = 1 + rng.u64_below(16);
        for (size_t t = 0; t < size; ++t) phi.push_back(random_scalar(rng));
        bool member = rng.coin();
        Scalar v = member ? phi[rng.u64_below(phi.size())] : random_scalar(rng);
        Scalar r = random_scalar(rng);
        Commitment gamma = commit(params, v, r);
        EXPECT_EQ(single_prover_sm(params, gamma, phi, {v, r}, rng, vr), member);
    }
}

TEST(SingleProverSmTest, SingletonSet) {
    SetupParams params = setup(to_bytes("sp-sm"), 1, 1);
    Rng rng(9014);
    Rng vr = rng.fork("verifier");
    Scalar v = random_scalar(rng), r = random_scalar(rng);
    Commitment gamma = commit(params, v, r);
    EXPECT_TRUE(single_prover_sm(params, gamma, {v}, {v, r}, rng, vr));
    EXPECT_FALSE(single_prover_sm(params, gamma, {v + Scalar::from_u64(1)}, {v, r}, rng, vr));
}

TEST(SingleProverRsmTest, MatchesMembership) {
    SetupParams params = setup(to_bytes("sp-rsm"), 1, 1);
    Rng rng(9015);
    Rng vr = rng.fork("verifier");
    for (int trial = 0; trial < 10; ++trial) {
        size_t size = 1 + rng.u64_below(8);
        std::vector<Commitment> commits;
        std::vector<Opening> openings;
        for (size_t t = 0; t < size; ++t) {
            Opening o{random_scalar(rng), random_scalar(rng)};
            commits.push_back(commit(params, o.v, o.r));
            openings.push_back(o);
        }
        bool member = rng.coin();
        Scalar v = member ? openings[rng.u64_below(size)].v : random_scalar(rng);
        EXPECT_EQ(single_prover_rsm(params, commits, openings, v, rng, vr), member);
    }
}

TEST(SingleProverRsmTest, SingletonSet) {
    SetupParams params = setup(to_bytes("sp-rsm"), 1, 1);
    Rng rng(9016);
    Rng vr = rng.fork("verifier");
    Opening o{random_scalar(rng), random_scalar(rng)};
    std::vector<Commitment> commits{commit(params, o.v, o.r)};
    std::vector<Opening> openings{o};
    EXPECT_TRUE(single_prover_rsm(params, commits, openings, o.v, rng, vr));
    EXPECT_FALSE(
        single_prover_rsm(params, commits, openings, o.v + Scalar::from_u64(1), rng, vr));
}

}  // namespace
