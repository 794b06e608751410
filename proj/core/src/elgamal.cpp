#include "tracemix/elgamal.hpp"

namespace tracemix {

G1 eg_pk_share(const SetupParams& params, const Scalar& sk_share) {
    return params.g1 * sk_share;
}

G1 eg_combine_pk(std::span<const G1> pk_shares) {
    if (pk_shares.empty()) throw std::invalid_argument("eg_combine_pk: no shares");
    G1 pk = G1::infinity();
    for (const G1& s : pk_shares) pk = pk + s;
    return pk;
}

EgCiphertext eg_enc(const SetupParams& params, const G1& pk, const G1& msg, Rng& rng) {
    return eg_enc_with(params, pk, msg, random_scalar(rng));
}

EgCiphertext eg_enc_with(const SetupParams& params, const G1& pk, const G1& msg,
                         const Scalar& rho) {
    return {params.g1 * rho, msg + pk * rho};
}

EgCiphertext eg_renc(const SetupParams& params, const G1& pk, const EgCiphertext& ct, Rng& rng) {
    Scalar rho = random_scalar(rng);
    return {ct.c0 + params.g1 * rho, ct.c1 + pk * rho};
}

EgCiphertext eg_exp(const EgCiphertext& ct, const Scalar& b) {
    return {ct.c0 * b, ct.c1 * b};
}

EgCiphertext eg_mul(const EgCiphertext& a, const EgCiphertext& b) {
    return {a.c0 + b.c0, a.c1 + b.c1};
}

G1 eg_dec_share(const EgCiphertext& ct, const Scalar& sk_share) {
    return ct.c0 * sk_share;
}

G1 eg_tdec_combine(const EgCiphertext& ct, std::span<const G1> dec_shares, size_t m) {
    if (dec_shares.size() != m) {
        throw std::runtime_error("eg_tdec_combine: need a decryption share from every server");
    }
    G1 denom = G1::infinity();
    for (const G1& s : dec_shares) denom = denom + s;
    return ct.c1 - denom;
}

Bytes EgCiphertext::to_bytes() const {
    Bytes out;
    c0.to_bytes(out);
    c1.to_bytes(out);
    return out;
}

std::optional<EgCiphertext> EgCiphertext::from_bytes(BytesView in) {
    if (in.size() != 64) return std::nullopt;
    auto a = G1::from_bytes(in.subspan(0, 32));
    auto b = G1::from_bytes(in.subspan(32, 32));
    if (!a || !b) return std::nullopt;
    return EgCiphertext{*a, *b};
}

}  // namespace tracemix
