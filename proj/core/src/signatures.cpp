#include "tracemix/signatures.hpp"

namespace tracemix {

BBKeyPair bb_keygen(const SetupParams& params, Rng& rng) {
    Scalar x = random_nonzero_scalar(rng);
    return {x, params.g2 * x};
}

G1 bb_sign(const SetupParams& params, const BBKeyPair& key, const Scalar& v) {
    Scalar denom = v + key.x;
    if (denom.is_zero()) throw DegenerateMessageError();
    return params.g1 * denom.inverse();
}

bool bb_verify(const SetupParams& params, const G2& y, const Scalar& v, const G1& sigma) {
    if (!sigma.on_curve() || sigma.is_infinity()) return false;
    return pairing(sigma, y + params.g2 * v) == params.e_g1_g2;
}

BBSPlusKeyPair bbsplus_keygen(const SetupParams& params, Rng& rng) {
    Scalar x = random_nonzero_scalar(rng);
    return {x, params.f2 * x};
}

BBSPlusSignature bbsplus_sign(const SetupParams& params, const BBSPlusKeyPair& key,
                              const Scalar& v, Rng& rng) {
    Scalar r = random_scalar(rng);
    Scalar c = random_scalar(rng);
    while ((c + key.x).is_zero()) c = random_scalar(rng);
    G1 base = params.f1 + params.g1 * v + params.h1 * r;
    return {c, r, base * (c + key.x).inverse()};
}

bool bbsplus_verify(const SetupParams& params, const G2& y, const Scalar& v,
                    const BBSPlusSignature& sig) {
    if (!sig.s.on_curve() || sig.s.is_infinity()) return false;
    G1 base = params.f1 + params.g1 * v + params.h1 * sig.r;
    return pairing(sig.s, y + params.f2 * sig.c) == pairing(base, params.f2);
}

QuasiBBSPlusSignature quasi_sign(const SetupParams& params, const BBSPlusKeyPair& key,
                                 const Commitment& gamma, Rng& rng) {
    Scalar r_hat = random_scalar(rng);
    Scalar c = random_scalar(rng);
    while ((c + key.x).is_zero()) c = random_scalar(rng);
    G1 base = params.f1 + params.h1 * r_hat + gamma.gamma;
    return {c, r_hat, base * (c + key.x).inverse()};
}

bool verq(const SetupParams& params, const QuasiBBSPlusSignature& quasi,
          const Commitment& gamma, const G2& y) {
    if (!quasi.s.on_curve() || quasi.s.is_infinity()) return false;
    G1 base = params.f1 + params.h1 * quasi.r_hat + gamma.gamma;
    return pairing(quasi.s, y + params.f2 * quasi.c) == pairing(base, params.f2);
}

BBSPlusSignature derive_from_quasi(const QuasiBBSPlusSignature& quasi, const Scalar& r) {
    return {quasi.c, quasi.r_hat + r, quasi.s};
}

G1 fake_bb_signature(const SetupParams& params) { return params.g1; }

G1 fake_quasi_s_component() { return G1::infinity(); }

Bytes QuasiBBSPlusSignature::to_bytes() const {
    Bytes out;
    s.to_bytes(out);
    c.to_bytes(out);
    r_hat.to_bytes(out);
    return out;
}

std::optional<QuasiBBSPlusSignature> QuasiBBSPlusSignature::from_bytes(BytesView in) {
    if (in.size() != 96) return std::nullopt;
    auto s = G1::from_bytes(in.subspan(0, 32));
    auto c = Fr::from_bytes(in.subspan(32, 32));
    auto rh = Fr::from_bytes(in.subspan(64, 32));
    if (!s || !c || !rh) return std::nullopt;
    return QuasiBBSPlusSignature{*c, *rh, *s};
}

}  // namespace tracemix
