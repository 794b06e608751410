#include "tracemix/paillier.hpp"

namespace tracemix {

namespace {

mpz_class random_mpz_bits(size_t bits, Rng& rng) {
    size_t nbytes = (bits + 7) / 8;
    Bytes raw = rng.bytes(nbytes);
    mpz_class x;
    mpz_import(x.get_mpz_t(), raw.size(), 1, 1, 1, 0, raw.data());
    mpz_tdiv_r_2exp(x.get_mpz_t(), x.get_mpz_t(), bits);
    return x;
}

mpz_class random_prime(size_t bits, Rng& rng) {
    for (;;) {
        mpz_class cand = random_mpz_bits(bits, rng);
        mpz_setbit(cand.get_mpz_t(), bits - 1);  // exact bit length
        mpz_setbit(cand.get_mpz_t(), 0);         // odd
        if (mpz_probab_prime_p(cand.get_mpz_t(), 30) >= 1) return cand;
    }
}

size_t rho_bits() { return 448; }

}  // namespace

mpz_class random_mpz_below(const mpz_class& bound, Rng& rng) {
    if (bound <= 0) throw std::invalid_argument("random_mpz_below: empty range");
    size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
    for (;;) {
        mpz_class x = random_mpz_bits(bits, rng);
        if (x < bound) return x;
    }
}

mpz_class random_unit_mod(const mpz_class& n, Rng& rng) {
    for (;;) {
        mpz_class x = random_mpz_below(n, rng);
        if (x == 0) continue;
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), x.get_mpz_t(), n.get_mpz_t());
        if (g == 1) return x;
    }
}

mpz_class pai_random_rho(Rng& rng) { return random_mpz_bits(rho_bits(), rng); }

PaillierKeyMaterial pai_keygen_dealer(size_t bits, size_t m, Rng& rng) {
    if (m == 0) throw std::invalid_argument("pai_keygen_dealer: zero servers");
    if (bits < 512) throw std::invalid_argument("pai_keygen_dealer: modulus too small");

    mpz_class p = random_prime(bits / 2, rng);
    mpz_class q = random_prime(bits / 2, rng);
    while (q == p) q = random_prime(bits / 2, rng);

    PaillierKeyMaterial km;
    km.pk.n = p * q;
    km.pk.n2 = km.pk.n * km.pk.n;
    km.pk.n_bytes = (mpz_sizeinbase(km.pk.n.get_mpz_t(), 2) + 7) / 8;
    mpz_class h = random_unit_mod(km.pk.n, rng);
    mpz_powm(km.pk.h_n.get_mpz_t(), h.get_mpz_t(), km.pk.n.get_mpz_t(), km.pk.n2.get_mpz_t());

    mpz_class lambda;
    mpz_class p1 = p - 1, q1 = q - 1;
    mpz_lcm(lambda.get_mpz_t(), p1.get_mpz_t(), q1.get_mpz_t());

    // d ≡ 0 (mod lambda), d ≡ 1 (mod N); group exponents live mod N*lambda.
    mpz_class lambda_inv;
    if (mpz_invert(lambda_inv.get_mpz_t(), lambda.get_mpz_t(), km.pk.n.get_mpz_t()) == 0) {
        throw std::logic_error("pai_keygen_dealer: lambda not invertible mod n");
    }
    mpz_class group_order = km.pk.n * lambda;
    mpz_class d = (lambda * lambda_inv) % group_order;

    mpz_class acc = 0;
    for (size_t k = 0; k + 1 < m; ++k) {
        mpz_class share = random_mpz_below(group_order, rng);
        acc += share;
        km.sk_shares.push_back(share);
    }
    mpz_class last = ((d - acc) % group_order + group_order) % group_order;
    km.sk_shares.push_back(last);
    return km;
}

PaillierCiphertext pai_enc(const PaillierPublicKey& pk, const mpz_class& x, Rng& rng) {
    return pai_enc_with(pk, x, pai_random_rho(rng));
}

PaillierCiphertext pai_enc_with(const PaillierPublicKey& pk, const mpz_class& x,
                                const mpz_class& rho) {
    if (x < 0 || x >= pk.n) throw std::invalid_argument("pai_enc: plaintext outside [0, N)");
    // (1+N)^x * h_n^rho; (1+N)^x = 1 + xN (mod N^2).
    mpz_class gx = (1 + x * pk.n) % pk.n2;
    mpz_class rn;
    mpz_powm(rn.get_mpz_t(), pk.h_n.get_mpz_t(), rho.get_mpz_t(), pk.n2.get_mpz_t());
    return {(gx * rn) % pk.n2};
}

PaillierCiphertext pai_renc(const PaillierPublicKey& pk, const PaillierCiphertext& ct, Rng& rng) {
    PaillierCiphertext zero = pai_enc(pk, 0, rng);
    return pai_add(pk, ct, zero);
}

PaillierCiphertext pai_add(const PaillierPublicKey& pk, const PaillierCiphertext& a,
                           const PaillierCiphertext& b) {
    return {(a.c * b.c) % pk.n2};
}

mpz_class pai_dec_share(const PaillierPublicKey& pk, const PaillierCiphertext& ct,
                        const mpz_class& sk_share) {
    mpz_class out;
    mpz_powm(out.get_mpz_t(), ct.c.get_mpz_t(), sk_share.get_mpz_t(), pk.n2.get_mpz_t());
    return out;
}

mpz_class pai_tdec_combine(const PaillierPublicKey& pk, std::span<const mpz_class> dec_shares,
                           size_t m) {
    if (dec_shares.size() != m) {
        throw std::runtime_error("pai_tdec_combine: need a decryption share from every server");
    }
    mpz_class prod = 1;
    for (const mpz_class& s : dec_shares) prod = (prod * s) % pk.n2;
    // prod = (1+N)^x = 1 + xN for a well-formed ciphertext.
    mpz_class shifted = prod - 1;
    if (shifted % pk.n != 0) {
        throw std::runtime_error("pai_tdec_combine: combined value is not a valid decryption");
    }
    return shifted / pk.n;
}

Bytes pai_ct_to_bytes(const PaillierPublicKey& pk, const PaillierCiphertext& ct) {
    return mpz_to_bytes_fixed(ct.c, 2 * pk.n_bytes);
}

std::optional<PaillierCiphertext> pai_ct_from_bytes(const PaillierPublicKey& pk, BytesView in) {
    if (in.size() != 2 * pk.n_bytes) return std::nullopt;
    mpz_class c = mpz_from_bytes(in);
    if (c <= 0 || c >= pk.n2) return std::nullopt;
    return PaillierCiphertext{c};
}

Bytes PaillierPublicKey::to_bytes() const {
    Bytes out;
    append_u32(out, static_cast<uint32_t>(n_bytes));
    append(out, mpz_to_bytes_fixed(n, n_bytes));
    append(out, mpz_to_bytes_fixed(h_n, 2 * n_bytes));
    return out;
}

std::optional<PaillierPublicKey> PaillierPublicKey::from_bytes(BytesView in) {
    if (in.size() < 4) return std::nullopt;
    uint32_t width = ((uint32_t)in[0] << 24) | ((uint32_t)in[1] << 16) | ((uint32_t)in[2] << 8) |
                     (uint32_t)in[3];
    if (in.size() != 4 + 3 * (size_t)width) return std::nullopt;
    PaillierPublicKey pk;
    pk.n = mpz_from_bytes(in.subspan(4, width));
    if (pk.n <= 1) return std::nullopt;
    pk.n2 = pk.n * pk.n;
    pk.h_n = mpz_from_bytes(in.subspan(4 + width));
    if (pk.h_n <= 1 || pk.h_n >= pk.n2) return std::nullopt;
    pk.n_bytes = width;
    return pk;
}

mpz_class scalar_to_mpz(const Scalar& s) {
    Limbs p = s.plain();
    mpz_class x = 0;
    for (int i = 3; i >= 0; --i) {
        x <<= 64;
        x += mpz_class(p[i]);
    }
    return x;
}

const mpz_class& scalar_modulus() {
    static const mpz_class q = [] {
        mpz_class x = 0;
        for (int i = 3; i >= 0; --i) {
            x <<= 64;
            x += mpz_class(Fr::MOD[i]);
        }
        return x;
    }();
    return q;
}

Scalar mpz_to_scalar(const mpz_class& x) {
    mpz_class r = x % scalar_modulus();
    if (r < 0) r += scalar_modulus();
    Bytes be = mpz_to_bytes_fixed(r, 32);
    auto s = Fr::from_bytes(be);
    if (!s) throw std::logic_error("mpz_to_scalar: reduction failed");
    return *s;
}

Bytes mpz_to_bytes_fixed(const mpz_class& x, size_t width) {
    if (x < 0) throw std::invalid_argument("mpz_to_bytes_fixed: negative value");
    size_t need = (mpz_sizeinbase(x.get_mpz_t(), 2) + 7) / 8;
    if (x == 0) need = 0;
    if (need > width) throw std::invalid_argument("mpz_to_bytes_fixed: value too wide");
    Bytes out(width, 0);
    if (need > 0) {
        size_t written = 0;
        mpz_export(out.data() + (width - need), &written, 1, 1, 1, 0, x.get_mpz_t());
    }
    return out;
}

mpz_class mpz_from_bytes(BytesView in) {
    mpz_class x;
    if (!in.empty()) mpz_import(x.get_mpz_t(), in.size(), 1, 1, 1, 0, in.data());
    return x;
}

}  // namespace tracemix
