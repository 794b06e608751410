#pragma once

// The per-server share channel: a standard IND-CPA public-key scheme used
// as a black box by senders to deliver (v, r) shares. Hashed-ElGamal KEM
// over G1 with a hash-counter stream cipher; chosen at build time behind
// this interface.

#include "tracemix/algebra.hpp"

namespace tracemix {

struct PkeKeyPair {
    Scalar sk;
    G1 pk;
};

PkeKeyPair pke_keygen(const SetupParams& params, Rng& rng);

Bytes pke_enc(const SetupParams& params, const G1& pk, BytesView msg, Rng& rng);

// Throws on truncated ciphertexts; garbage otherwise decrypts to garbage
// (no authentication, matching the IND-CPA contract).
Bytes pke_dec(const SetupParams& params, const Scalar& sk, BytesView ct);

}  // namespace tracemix
