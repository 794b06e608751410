#pragma once

// Distributed (m,m) non-interactive proofs of knowledge for predicates
//   AND_i  y_i = prod_j g_ij^{w_j}
// where every prover holds an additive share of each witness slot w_j.
// Nonces are per-slot and shared across equations; negative exponents are
// expressed by inverting the base so slots stay plain scalars.

#include "tracemix/algebra.hpp"

namespace tracemix {

struct DpkBase {
    GroupElement base;
    size_t slot;
};

struct DpkEquation {
    GroupElement target;
    std::vector<DpkBase> bases;
};

struct DpkPredicate {
    size_t witness_count = 0;
    std::vector<DpkEquation> equations;

    // Throws when an equation mixes groups or references a bad slot.
    void validate() const;

    // Canonical serialization hashed into the challenge: equation count,
    // then per equation the group id, target and length-prefixed base
    // list with slot indices.
    Bytes to_bytes() const;
};

// Binds challenges to one protocol execution so transcripts cannot be
// spliced between runs (or between the main and complement queries).
struct DpkContext {
    std::string protocol;
    Bytes session_id;
    uint64_t statement_index = 0;
};

struct DpkTranscript {
    // a_shares[k][i]: party k's first message for equation i.
    std::vector<std::vector<GroupElement>> a_shares;
    Scalar c;
    // z_shares[k][j]: party k's response for witness slot j.
    std::vector<std::vector<Scalar>> z_shares;

    Bytes to_bytes() const;
    static std::optional<DpkTranscript> from_bytes(BytesView in);
};

// One prover's state across the two rounds. Nonces are generated at
// construction and consumed by respond(); a second respond() throws, so
// nonces cannot be reused under a different challenge.
class DpkProverSession {
public:
    DpkProverSession(const DpkPredicate& predicate, std::vector<Scalar> witness_shares,
                     Rng& rng);

    const std::vector<GroupElement>& first_messages() const { return a_; }

    std::vector<Scalar> respond(const Scalar& challenge);

private:
    std::vector<Scalar> witness_;
    std::vector<Scalar> nonces_;
    std::vector<GroupElement> a_;
    bool responded_ = false;
};

// Sigma response formula, factored so tests can instantiate it over a toy
// field.
template <typename F>
F sigma_response(const F& nonce, const F& challenge, const F& witness) {
    return nonce - challenge * witness;
}

std::vector<GroupElement> dpk_combine_first(const DpkPredicate& predicate,
                                            std::span<const std::vector<GroupElement>> a_shares);

Scalar dpk_challenge(const DpkPredicate& predicate, const DpkContext& ctx,
                     std::span<const GroupElement> combined_a);

// Accepts iff the challenge recomputation and every equation
// a_i = y_i^c * prod_j g_ij^{z_j} hold for the combined transcript.
// Malformed transcripts (wrong shapes, bad elements) verify false.
bool dpk_verify(const DpkPredicate& predicate, const DpkContext& ctx,
                const DpkTranscript& transcript);

}  // namespace tracemix
