#include "tracemix/commitments.hpp"

namespace tracemix {

namespace {

// The challenge binds the domain tag, every setup generator and the
// statement, so opening proofs cannot be replayed across protocols or
// parameter sets.
Scalar opening_challenge(const SetupParams& params, const Commitment& gamma, const G1& a) {
    Bytes t;
    params.f1.to_bytes(t);
    params.g1.to_bytes(t);
    params.h1.to_bytes(t);
    params.f2.to_bytes(t);
    params.g2.to_bytes(t);
    params.fT.to_bytes(t);
    gamma.gamma.to_bytes(t);
    a.to_bytes(t);
    return hash_to_challenge("pok-opening", t);
}

}  // namespace

Commitment commit(const SetupParams& params, const Scalar& v, const Scalar& r) {
    return {params.g1 * v + params.h1 * r};
}

OpeningProof prove_opening(const SetupParams& params, const Commitment& gamma,
                           const Opening& opening, Rng& rng) {
    if (!(commit(params, opening.v, opening.r) == gamma)) {
        throw std::invalid_argument("prove_opening: opening does not match commitment");
    }
    Scalar rv = random_scalar(rng);
    Scalar rr = random_scalar(rng);
    G1 a = params.g1 * rv + params.h1 * rr;
    Scalar c = opening_challenge(params, gamma, a);
    return {a, c, rv - c * opening.v, rr - c * opening.r};
}

bool verify_opening(const SetupParams& params, const Commitment& gamma,
                    const OpeningProof& proof) {
    if (!gamma.gamma.on_curve() || !proof.a.on_curve()) return false;
    if (proof.c != opening_challenge(params, gamma, proof.a)) return false;
    return proof.a == gamma.gamma * proof.c + params.g1 * proof.z_v + params.h1 * proof.z_r;
}

Bytes OpeningProof::to_bytes() const {
    Bytes out;
    a.to_bytes(out);
    c.to_bytes(out);
    z_v.to_bytes(out);
    z_r.to_bytes(out);
    return out;
}

std::optional<OpeningProof> OpeningProof::from_bytes(BytesView in) {
    if (in.size() != 32 * 4) return std::nullopt;
    auto a = G1::from_bytes(in.subspan(0, 32));
    auto c = Fr::from_bytes(in.subspan(32, 32));
    auto zv = Fr::from_bytes(in.subspan(64, 32));
    auto zr = Fr::from_bytes(in.subspan(96, 32));
    if (!a || !c || !zv || !zr) return std::nullopt;
    return OpeningProof{*a, *c, *zv, *zr};
}

}  // namespace tracemix
