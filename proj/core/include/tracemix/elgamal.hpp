#pragma once

// (m,m) threshold ElGamal over G1: every server holds an additive key
// share; decryption needs all m shares.

#include "tracemix/algebra.hpp"

namespace tracemix {

struct EgCiphertext {
    G1 c0, c1;  // (g1^rho, M * pk^rho)

    Bytes to_bytes() const;
    static std::optional<EgCiphertext> from_bytes(BytesView in);
};

G1 eg_pk_share(const SetupParams& params, const Scalar& sk_share);
G1 eg_combine_pk(std::span<const G1> pk_shares);

EgCiphertext eg_enc(const SetupParams& params, const G1& pk, const G1& msg, Rng& rng);
// Deterministic variant; the querier publishes rho so mix-servers can
// re-derive and compare its encryptions.
EgCiphertext eg_enc_with(const SetupParams& params, const G1& pk, const G1& msg,
                         const Scalar& rho);

EgCiphertext eg_renc(const SetupParams& params, const G1& pk, const EgCiphertext& ct, Rng& rng);
EgCiphertext eg_exp(const EgCiphertext& ct, const Scalar& b);
EgCiphertext eg_mul(const EgCiphertext& a, const EgCiphertext& b);

G1 eg_dec_share(const EgCiphertext& ct, const Scalar& sk_share);

// Needs exactly one share per server; fails loudly rather than producing
// a wrong plaintext from a partial set.
G1 eg_tdec_combine(const EgCiphertext& ct, std::span<const G1> dec_shares, size_t m);

}  // namespace tracemix
