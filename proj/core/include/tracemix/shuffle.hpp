#pragma once

// Sequential re-encryption shuffle: party k re-encrypts every list and
// moves entry pi_k(j) to position j. Applying parties 1..m composes the
// per-party permutations so that output slot j holds a re-encryption of
// input slot pi(j), with pi(j) = pi_1(pi_2(...pi_m(j)...)).

#include "tracemix/elgamal.hpp"
#include "tracemix/paillier.hpp"

namespace tracemix {

void validate_permutation(std::span<const size_t> perm, size_t n);

std::vector<size_t> invert_permutation(std::span<const size_t> perm);

// The composed permutation realized by hops for parties 1..m, matching
// the positional law above.
std::vector<size_t> compose_hops(const std::vector<std::vector<size_t>>& party_perms);

// One party's hop over a single list.
std::vector<EgCiphertext> shuffle_hop(const SetupParams& params, const G1& pk,
                                      std::span<const EgCiphertext> list,
                                      std::span<const size_t> perm, Rng& rng);

std::vector<PaillierCiphertext> shuffle_hop(const PaillierPublicKey& pk,
                                            std::span<const PaillierCiphertext> list,
                                            std::span<const size_t> perm, Rng& rng);

// Whole-protocol helpers (all hops in sequence, party 1 first).
std::vector<EgCiphertext> shuffle_all(const SetupParams& params, const G1& pk,
                                      std::span<const EgCiphertext> input,
                                      const std::vector<std::vector<size_t>>& party_perms,
                                      std::vector<Rng>& party_rngs);

std::vector<PaillierCiphertext> shuffle_all(const PaillierPublicKey& pk,
                                            std::span<const PaillierCiphertext> input,
                                            const std::vector<std::vector<size_t>>& party_perms,
                                            std::vector<Rng>& party_rngs);

}  // namespace tracemix
