#pragma once

// m-of-m threshold Paillier over Z_{N^2}. A dealer generates the modulus
// and additively shares the decryption exponent d (d ≡ 0 mod lambda,
// d ≡ 1 mod N), so combining all m partial exponentiations recovers the
// plaintext; fewer shares give nothing.

#include <gmpxx.h>

#include "tracemix/algebra.hpp"

namespace tracemix {

struct PaillierPublicKey {
    mpz_class n;
    mpz_class n2;
    // h^n mod n^2 for a random unit h; encryption randomizes with short
    // exponents of this base instead of full-width n-th powers.
    mpz_class h_n;
    size_t n_bytes = 0;  // fixed serialization width of n

    Bytes to_bytes() const;
    static std::optional<PaillierPublicKey> from_bytes(BytesView in);
};

struct PaillierCiphertext {
    mpz_class c;  // element of Z_{n^2}^*

    bool operator==(const PaillierCiphertext& o) const { return c == o.c; }
};

struct PaillierKeyMaterial {
    PaillierPublicKey pk;
    std::vector<mpz_class> sk_shares;  // additive shares of d, one per server
};

// bits is the size of N; shares are dealt for m servers.
PaillierKeyMaterial pai_keygen_dealer(size_t bits, size_t m, Rng& rng);

// Plaintexts are nonnegative integers < N.
PaillierCiphertext pai_enc(const PaillierPublicKey& pk, const mpz_class& x, Rng& rng);
PaillierCiphertext pai_enc_with(const PaillierPublicKey& pk, const mpz_class& x,
                                const mpz_class& rho);

PaillierCiphertext pai_renc(const PaillierPublicKey& pk, const PaillierCiphertext& ct, Rng& rng);
PaillierCiphertext pai_add(const PaillierPublicKey& pk, const PaillierCiphertext& a,
                           const PaillierCiphertext& b);

mpz_class pai_dec_share(const PaillierPublicKey& pk, const PaillierCiphertext& ct,
                        const mpz_class& sk_share);

// Combines exactly m partial decryptions c^{d_k}.
mpz_class pai_tdec_combine(const PaillierPublicKey& pk, std::span<const mpz_class> dec_shares,
                           size_t m);

// Fixed-width ciphertext serialization: 2 * n_bytes big-endian.
Bytes pai_ct_to_bytes(const PaillierPublicKey& pk, const PaillierCiphertext& ct);
std::optional<PaillierCiphertext> pai_ct_from_bytes(const PaillierPublicKey& pk, BytesView in);

// Random element of Z_n^*.
mpz_class random_unit_mod(const mpz_class& n, Rng& rng);
// Encryption randomness: a short exponent for the h_n base.
mpz_class pai_random_rho(Rng& rng);
// Uniform integer in [0, bound).
mpz_class random_mpz_below(const mpz_class& bound, Rng& rng);

// Scalar <-> integer embedding used when Z_q values ride in Z_N.
mpz_class scalar_to_mpz(const Scalar& s);
Scalar mpz_to_scalar(const mpz_class& x);  // reduces mod q
const mpz_class& scalar_modulus();         // q as an integer

Bytes mpz_to_bytes_fixed(const mpz_class& x, size_t width);
mpz_class mpz_from_bytes(BytesView in);

}  // namespace tracemix
