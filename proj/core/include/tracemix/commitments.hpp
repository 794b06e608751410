#pragma once

// Pedersen commitments on G1 with Fiat-Shamir proofs of knowledge of
// opening (the sender-side rho_gamma attached to every ciphertext).

#include "tracemix/algebra.hpp"

namespace tracemix {

struct Commitment {
    G1 gamma;

    bool operator==(const Commitment& o) const { return gamma == o.gamma; }
};

struct Opening {
    Scalar v;  // committed value
    Scalar r;  // randomness
};

struct OpeningProof {
    G1 a;
    Scalar c;
    Scalar z_v;
    Scalar z_r;

    Bytes to_bytes() const;
    static std::optional<OpeningProof> from_bytes(BytesView in);
};

Commitment commit(const SetupParams& params, const Scalar& v, const Scalar& r);

// Requires commit(opening) == gamma.
OpeningProof prove_opening(const SetupParams& params, const Commitment& gamma,
                           const Opening& opening, Rng& rng);

bool verify_opening(const SetupParams& params, const Commitment& gamma,
                    const OpeningProof& proof);

}  // namespace tracemix
