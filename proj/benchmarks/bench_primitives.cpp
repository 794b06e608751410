// Microbenchmarks for the primitives underneath the query protocols.

#include <benchmark/benchmark.h>

#include "tracemix/commitments.hpp"
#include "tracemix/paillier.hpp"
#include "tracemix/setmembership.hpp"
#include "tracemix/sharing.hpp"

using namespace tracemix;

namespace {

const SetupParams& params() {
    static const SetupParams p = setup(to_bytes("bench"), 2, 16);
    return p;
}

void BM_Pairing(benchmark::State& state) {
    Rng rng(1);
    G1 p = params().g1 * random_scalar(rng);
    G2 q = params().g2 * random_scalar(rng);
    for (auto _ : state) benchmark::DoNotOptimize(pairing(p, q));
}
BENCHMARK(BM_Pairing);

void BM_G1ScalarMul(benchmark::State& state) {
    Rng rng(2);
    G1 p = params().g1;
    Scalar k = random_scalar(rng);
    for (auto _ : state) benchmark::DoNotOptimize(p * k);
}
BENCHMARK(BM_G1ScalarMul);

void BM_GtPow(benchmark::State& state) {
    Rng rng(3);
    Gt e = params().e_g1_g2;
    Scalar k = random_scalar(rng);
    for (auto _ : state) benchmark::DoNotOptimize(e.pow(k));
}
BENCHMARK(BM_GtPow);

void BM_BbSign(benchmark::State& state) {
    Rng rng(4);
    BBKeyPair key = bb_keygen(params(), rng);
    Scalar v = random_scalar(rng);
    for (auto _ : state) benchmark::DoNotOptimize(bb_sign(params(), key, v));
}
BENCHMARK(BM_BbSign);

void BM_BbVerify(benchmark::State& state) {
    Rng rng(5);
    BBKeyPair key = bb_keygen(params(), rng);
    Scalar v = random_scalar(rng);
    G1 sig = bb_sign(params(), key, v);
    for (auto _ : state) benchmark::DoNotOptimize(bb_verify(params(), key.y, v, sig));
}
BENCHMARK(BM_BbVerify);

void BM_QuasiSign(benchmark::State& state) {
    Rng rng(6);
    BBSPlusKeyPair key = bbsplus_keygen(params(), rng);
    Commitment gamma = commit(params(), random_scalar(rng), random_scalar(rng));
    for (auto _ : state) benchmark::DoNotOptimize(quasi_sign(params(), key, gamma, rng));
}
BENCHMARK(BM_QuasiSign);

void BM_OpeningProve(benchmark::State& state) {
    Rng rng(7);
    Opening o{random_scalar(rng), random_scalar(rng)};
    Commitment gamma = commit(params(), o.v, o.r);
    for (auto _ : state) benchmark::DoNotOptimize(prove_opening(params(), gamma, o, rng));
}
BENCHMARK(BM_OpeningProve);

void BM_PaillierEnc(benchmark::State& state) {
    Rng rng(8);
    static const PaillierKeyMaterial km = pai_keygen_dealer(2048, 2, rng);
    mpz_class x = 123456789;
    for (auto _ : state) benchmark::DoNotOptimize(pai_enc(km.pk, x, rng));
}
BENCHMARK(BM_PaillierEnc);

void BM_PaillierDecShare(benchmark::State& state) {
    Rng rng(9);
    static const PaillierKeyMaterial km = pai_keygen_dealer(2048, 2, rng);
    PaillierCiphertext ct = pai_enc(km.pk, 42, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(pai_dec_share(km.pk, ct, km.sk_shares[0]));
    }
}
BENCHMARK(BM_PaillierDecShare);

void BM_DpkBbProveVerify(benchmark::State& state) {
    // One p_BB proof end to end at the given server count.
    size_t m = state.range(0);
    Rng rng(10);
    Scalar v = random_scalar(rng), r = random_scalar(rng), b = random_scalar(rng);
    Commitment gamma = commit(params(), v, r);
    BBKeyPair key = bb_keygen(params(), rng);
    G1 st = bb_sign(params(), key, v) * b;
    DpkPredicate pred = bb_membership_predicate(params(), gamma.gamma, st, key.y);
    DpkContext ctx{"bench", to_bytes("bench"), 0};
    auto share = [&](const Scalar& x) { return share_mm(x, m, rng); };
    for (auto _ : state) {
        auto vs = share(v), rs = share(r), bs = share(b);
        DpkTranscript t;
        std::vector<DpkProverSession> sessions;
        for (size_t k = 0; k < m; ++k) {
            sessions.emplace_back(pred, std::vector<Scalar>{vs[k], rs[k], bs[k]}, rng);
            t.a_shares.push_back(sessions[k].first_messages());
        }
        t.c = dpk_challenge(pred, ctx, dpk_combine_first(pred, t.a_shares));
        for (size_t k = 0; k < m; ++k) t.z_shares.push_back(sessions[k].respond(t.c));
        benchmark::DoNotOptimize(dpk_verify(pred, ctx, t));
    }
}
BENCHMARK(BM_DpkBbProveVerify)->Arg(1)->Arg(2)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
