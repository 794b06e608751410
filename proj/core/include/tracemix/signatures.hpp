#pragma once

// Boneh-Boyen signatures on scalars, BBS+ signatures, and BBS+
// quasi-signatures issued against Pedersen commitments. This module only
// defines keying, signing and verification equations; blinded-signature
// arithmetic belongs to the query protocols.

#include "tracemix/commitments.hpp"

namespace tracemix {

// Signing a message that collides with the secret key (v = -x mod q) has
// no defined signature; the message is caller-chosen, so surface it.
class DegenerateMessageError : public std::runtime_error {
public:
    DegenerateMessageError() : std::runtime_error("message equals negated signing key") {}
};

struct BBKeyPair {
    Scalar x;
    G2 y;  // g2^x
};

struct BBSPlusKeyPair {
    Scalar x;  // nonzero
    G2 y;      // f2^x
};

struct BBSPlusSignature {
    Scalar c;
    Scalar r;
    G1 s;
};

struct QuasiBBSPlusSignature {
    Scalar c;
    Scalar r_hat;
    G1 s;

    Bytes to_bytes() const;
    static std::optional<QuasiBBSPlusSignature> from_bytes(BytesView in);
};

BBKeyPair bb_keygen(const SetupParams& params, Rng& rng);
G1 bb_sign(const SetupParams& params, const BBKeyPair& key, const Scalar& v);
bool bb_verify(const SetupParams& params, const G2& y, const Scalar& v, const G1& sigma);

BBSPlusKeyPair bbsplus_keygen(const SetupParams& params, Rng& rng);
BBSPlusSignature bbsplus_sign(const SetupParams& params, const BBSPlusKeyPair& key,
                              const Scalar& v, Rng& rng);
bool bbsplus_verify(const SetupParams& params, const G2& y, const Scalar& v,
                    const BBSPlusSignature& sig);

// Issues (S, c, r_hat) with S = (f1 h1^r_hat gamma)^{1/(c+x)}; the caller
// must have checked a proof of knowledge of gamma's opening first.
QuasiBBSPlusSignature quasi_sign(const SetupParams& params, const BBSPlusKeyPair& key,
                                 const Commitment& gamma, Rng& rng);

bool verq(const SetupParams& params, const QuasiBBSPlusSignature& quasi,
          const Commitment& gamma, const G2& y);

// Adding the commitment randomness turns a quasi-signature on gamma =
// comm(v; r) into a plain BBS+ signature on v.
BBSPlusSignature derive_from_quasi(const QuasiBBSPlusSignature& quasi, const Scalar& r);

// The designated fake values published for indices outside a query set: a
// fixed G1 generator for Boneh-Boyen, the identity for the BBS+
// S-component. Both fail verification on every message.
G1 fake_bb_signature(const SetupParams& params);
G1 fake_quasi_s_component();

}  // namespace tracemix
