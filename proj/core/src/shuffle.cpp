#include "tracemix/shuffle.hpp"

namespace tracemix {

void validate_permutation(std::span<const size_t> perm, size_t n) {
    if (perm.size() != n) throw std::invalid_argument("permutation has wrong length");
    std::vector<bool> seen(n, false);
    for (size_t v : perm) {
        if (v >= n || seen[v]) throw std::invalid_argument("not a permutation of [n]");
        seen[v] = true;
    }
}

std::vector<size_t> invert_permutation(std::span<const size_t> perm) {
    std::vector<size_t> inv(perm.size());
    for (size_t j = 0; j < perm.size(); ++j) inv[perm[j]] = j;
    return inv;
}

std::vector<size_t> compose_hops(const std::vector<std::vector<size_t>>& party_perms) {
    if (party_perms.empty()) throw std::invalid_argument("compose_hops: no permutations");
    size_t n = party_perms[0].size();
    std::vector<size_t> sigma(n);
    for (size_t j = 0; j < n; ++j) sigma[j] = j;
    // Applying hops 1..m in order leaves out[j] = in[p1[p2[...pm[j]]]],
    // i.e. sigma_k = sigma_{k-1} o p_k positionally.
    for (const auto& p : party_perms) {
        validate_permutation(p, n);
        std::vector<size_t> next(n);
        for (size_t j = 0; j < n; ++j) next[j] = sigma[p[j]];
        std::swap(sigma, next);
    }
    return sigma;
}

std::vector<EgCiphertext> shuffle_hop(const SetupParams& params, const G1& pk,
                                      std::span<const EgCiphertext> list,
                                      std::span<const size_t> perm, Rng& rng) {
    validate_permutation(perm, list.size());
    std::vector<EgCiphertext> out;
    out.reserve(list.size());
    for (size_t j = 0; j < list.size(); ++j) {
        out.push_back(eg_renc(params, pk, list[perm[j]], rng));
    }
    return out;
}

std::vector<PaillierCiphertext> shuffle_hop(const PaillierPublicKey& pk,
                                            std::span<const PaillierCiphertext> list,
                                            std::span<const size_t> perm, Rng& rng) {
    validate_permutation(perm, list.size());
    std::vector<PaillierCiphertext> out;
    out.reserve(list.size());
    for (size_t j = 0; j < list.size(); ++j) {
        out.push_back(pai_renc(pk, list[perm[j]], rng));
    }
    return out;
}

std::vector<EgCiphertext> shuffle_all(const SetupParams& params, const G1& pk,
                                      std::span<const EgCiphertext> input,
                                      const std::vector<std::vector<size_t>>& party_perms,
                                      std::vector<Rng>& party_rngs) {
    std::vector<EgCiphertext> cur(input.begin(), input.end());
    for (size_t k = 0; k < party_perms.size(); ++k) {
        cur = shuffle_hop(params, pk, cur, party_perms[k], party_rngs[k]);
    }
    return cur;
}

std::vector<PaillierCiphertext> shuffle_all(const PaillierPublicKey& pk,
                                            std::span<const PaillierCiphertext> input,
                                            const std::vector<std::vector<size_t>>& party_perms,
                                            std::vector<Rng>& party_rngs) {
    std::vector<PaillierCiphertext> cur(input.begin(), input.end());
    for (size_t k = 0; k < party_perms.size(); ++k) {
        cur = shuffle_hop(pk, cur, party_perms[k], party_rngs[k]);
    }
    return cur;
}

}  // namespace tracemix
