#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "tracemix/bytes.hpp"

namespace tracemix {

using Limbs = std::array<uint64_t, 4>;

namespace limb_ops {

constexpr bool is_zero(const Limbs& a) {
    return (a[0] | a[1] | a[2] | a[3]) == 0;
}

// -1 / 0 / +1 comparison of plain 256-bit values.
constexpr int cmp(const Limbs& a, const Limbs& b) {
    for (int i = 3; i >= 0; --i) {
        if (a[i] < b[i]) return -1;
        if (a[i] > b[i]) return 1;
    }
    return 0;
}

constexpr uint64_t add(Limbs& a, const Limbs& b) {
    unsigned __int128 carry = 0;
    for (int i = 0; i < 4; ++i) {
        unsigned __int128 s = (unsigned __int128)a[i] + b[i] + carry;
        a[i] = (uint64_t)s;
        carry = s >> 64;
    }
    return (uint64_t)carry;
}

constexpr uint64_t sub(Limbs& a, const Limbs& b) {
    unsigned __int128 borrow = 0;
    for (int i = 0; i < 4; ++i) {
        unsigned __int128 d = (unsigned __int128)a[i] - b[i] - borrow;
        a[i] = (uint64_t)d;
        borrow = (d >> 64) & 1;
    }
    return (uint64_t)borrow;
}

constexpr void shr1(Limbs& a, uint64_t top_bit = 0) {
    for (int i = 0; i < 3; ++i) a[i] = (a[i] >> 1) | (a[i + 1] << 63);
    a[3] = (a[3] >> 1) | (top_bit << 63);
}

constexpr bool is_even(const Limbs& a) { return (a[0] & 1) == 0; }

constexpr bool bit(const Limbs& a, size_t i) {
    return ((a[i / 64] >> (i % 64)) & 1) != 0;
}

constexpr size_t bit_length(const Limbs& a) {
    for (int i = 3; i >= 0; --i) {
        if (a[i] == 0) continue;
        size_t top = 63;
        while (!((a[i] >> top) & 1)) --top;
        return (size_t)i * 64 + top + 1;
    }
    return 0;
}

}  // namespace limb_ops

// Prime field with 4x64-bit Montgomery representation. Params supplies the
// modulus (< 2^255, odd); all derived constants are computed at compile
// time so nothing curve-specific beyond the modulus is transcribed by hand.
template <typename Params>
class PrimeField {
public:
    static constexpr Limbs MOD = Params::MODULUS;

    // -MOD^{-1} mod 2^64 via Newton iteration.
    static constexpr uint64_t mont_inv() {
        uint64_t inv = 1;
        for (int i = 0; i < 63; ++i) inv *= 2 - MOD[0] * inv;
        return ~inv + 1;
    }
    static constexpr uint64_t INV = mont_inv();

    // 2^256 mod MOD, by doubling.
    static constexpr Limbs compute_r() {
        Limbs x{1, 0, 0, 0};
        for (int i = 0; i < 256; ++i) {
            Limbs d = x;
            uint64_t carry = limb_ops::add(d, x);
            if (carry || limb_ops::cmp(d, MOD) >= 0) limb_ops::sub(d, MOD);
            x = d;
        }
        return x;
    }
    static constexpr Limbs R = compute_r();

    // 2^512 mod MOD = R^2.
    static constexpr Limbs compute_r2() {
        Limbs x = R;
        for (int i = 0; i < 256; ++i) {
            Limbs d = x;
            uint64_t carry = limb_ops::add(d, x);
            if (carry || limb_ops::cmp(d, MOD) >= 0) limb_ops::sub(d, MOD);
            x = d;
        }
        return x;
    }
    static constexpr Limbs R2 = compute_r2();

    constexpr PrimeField() : v_{0, 0, 0, 0} {}

    static constexpr PrimeField zero() { return PrimeField(); }
    static constexpr PrimeField one() {
        PrimeField x;
        x.v_ = R;
        return x;
    }

    static constexpr PrimeField from_u64(uint64_t x) {
        PrimeField out;
        out.v_ = mont_mul({x, 0, 0, 0}, R2);
        return out;
    }

    // Plain (non-Montgomery) little-endian limbs, must be < MOD.
    static constexpr PrimeField from_plain(const Limbs& x) {
        PrimeField out;
        out.v_ = mont_mul(x, R2);
        return out;
    }

    constexpr Limbs plain() const { return mont_mul(v_, {1, 0, 0, 0}); }

    // Raw Montgomery limbs, for internal constant tables only.
    constexpr const Limbs& raw() const { return v_; }
    static constexpr PrimeField from_raw(const Limbs& m) {
        PrimeField out;
        out.v_ = m;
        return out;
    }

    constexpr bool is_zero() const { return limb_ops::is_zero(v_); }
    constexpr bool operator==(const PrimeField& o) const { return v_ == o.v_; }
    constexpr bool operator!=(const PrimeField& o) const { return v_ != o.v_; }

    constexpr PrimeField operator+(const PrimeField& o) const {
        PrimeField out = *this;
        uint64_t carry = limb_ops::add(out.v_, o.v_);
        if (carry || limb_ops::cmp(out.v_, MOD) >= 0) limb_ops::sub(out.v_, MOD);
        return out;
    }

    constexpr PrimeField operator-(const PrimeField& o) const {
        PrimeField out = *this;
        if (limb_ops::sub(out.v_, o.v_)) limb_ops::add(out.v_, MOD);
        return out;
    }

    constexpr PrimeField operator-() const {
        if (is_zero()) return *this;
        PrimeField out;
        out.v_ = MOD;
        limb_ops::sub(out.v_, v_);
        return out;
    }

    constexpr PrimeField operator*(const PrimeField& o) const {
        PrimeField out;
        out.v_ = mont_mul(v_, o.v_);
        return out;
    }

    constexpr PrimeField square() const { return *this * *this; }

    constexpr PrimeField dbl() const { return *this + *this; }

    // Binary extended GCD; requires nonzero input.
    PrimeField inverse() const {
        if (is_zero()) throw std::domain_error("field inverse of zero");
        Limbs u = v_, v = MOD;
        Limbs b = {1, 0, 0, 0}, c = {0, 0, 0, 0};
        auto halve_mod = [](Limbs& x) {
            if (limb_ops::is_even(x)) {
                limb_ops::shr1(x);
            } else {
                uint64_t carry = limb_ops::add(x, MOD);
                limb_ops::shr1(x, carry);
            }
        };
        auto sub_mod = [](Limbs& x, const Limbs& y) {
            if (limb_ops::sub(x, y)) limb_ops::add(x, MOD);
        };
        while (!limb_ops::is_zero(u)) {
            while (limb_ops::is_even(u)) {
                limb_ops::shr1(u);
                halve_mod(b);
            }
            while (limb_ops::is_even(v)) {
                limb_ops::shr1(v);
                halve_mod(c);
            }
            if (limb_ops::cmp(u, v) >= 0) {
                limb_ops::sub(u, v);
                sub_mod(b, c);
            } else {
                limb_ops::sub(v, u);
                sub_mod(c, b);
            }
        }
        // Here v = gcd = 1 and c ≡ (raw value)^{-1}. The raw value is
        // x*R, so c = x^{-1}*R^{-1}; two Montgomery muls by R^2 restore
        // the Montgomery form of x^{-1}.
        Limbs t = mont_mul(c, R2);
        PrimeField out;
        out.v_ = mont_mul(t, R2);
        return out;
    }

    // Exponent given as plain little-endian limbs.
    constexpr PrimeField pow(const Limbs& e) const {
        PrimeField acc = one();
        size_t n = limb_ops::bit_length(e);
        for (size_t i = n; i-- > 0;) {
            acc = acc.square();
            if (limb_ops::bit(e, i)) acc = acc * *this;
        }
        return acc;
    }

    static constexpr Limbs exp_p_minus_1_div_2() {
        Limbs e = MOD;
        limb_ops::sub(e, {1, 0, 0, 0});
        limb_ops::shr1(e);
        return e;
    }
    static constexpr Limbs exp_p_plus_1_div_4() {
        Limbs e = MOD;
        limb_ops::add(e, {1, 0, 0, 0});
        limb_ops::shr1(e);
        limb_ops::shr1(e);
        return e;
    }

    bool is_square() const {
        if (is_zero()) return true;
        return pow(exp_p_minus_1_div_2()) == one();
    }

    // Square root for p ≡ 3 (mod 4).
    std::optional<PrimeField> sqrt() const {
        static_assert((Params::MODULUS[0] & 3) == 3, "modulus must be 3 mod 4");
        PrimeField cand = pow(exp_p_plus_1_div_4());
        if (cand.square() == *this) return cand;
        return std::nullopt;
    }

    // Canonical 32-byte big-endian encoding.
    void to_bytes(Bytes& out) const {
        Limbs p = plain();
        for (int i = 3; i >= 0; --i) {
            for (int b = 7; b >= 0; --b) out.push_back((uint8_t)(p[i] >> (8 * b)));
        }
    }
    Bytes to_bytes() const {
        Bytes out;
        out.reserve(32);
        to_bytes(out);
        return out;
    }

    // Strict: rejects non-canonical (>= MOD) encodings.
    static std::optional<PrimeField> from_bytes(BytesView in) {
        if (in.size() != 32) return std::nullopt;
        Limbs x{0, 0, 0, 0};
        for (int i = 0; i < 32; ++i) {
            x[3 - i / 8] |= (uint64_t)in[i] << (8 * (7 - i % 8));
        }
        if (limb_ops::cmp(x, MOD) >= 0) return std::nullopt;
        return from_plain(x);
    }

    // 32-byte big-endian value reduced mod MOD (the challenge-derivation
    // rule: accept the small bias of a 256-bit hash against a ~254-bit
    // modulus).
    static PrimeField from_bytes_mod(BytesView in) {
        Limbs x{0, 0, 0, 0};
        for (size_t i = 0; i < 32 && i < in.size(); ++i) {
            x[3 - i / 8] |= (uint64_t)in[i] << (8 * (7 - i % 8));
        }
        while (limb_ops::cmp(x, MOD) >= 0) limb_ops::sub(x, MOD);
        return from_plain(x);
    }

    // 64 uniform bytes -> field element; bias below 2^-256.
    static PrimeField from_bytes_wide(BytesView in) {
        if (in.size() != 64) throw std::invalid_argument("from_bytes_wide needs 64 bytes");
        PrimeField hi = from_bytes_mod(in.subspan(0, 32));
        PrimeField lo = from_bytes_mod(in.subspan(32, 32));
        // value = hi*2^256 + lo, and 2^256 mod p is the constant R.
        return hi * from_plain(R) + lo;
    }

private:
    // CIOS Montgomery multiplication, result < MOD.
    static constexpr Limbs mont_mul(const Limbs& a, const Limbs& b) {
        uint64_t t[6] = {0, 0, 0, 0, 0, 0};
        for (int i = 0; i < 4; ++i) {
            unsigned __int128 carry = 0;
            for (int j = 0; j < 4; ++j) {
                unsigned __int128 cur = (unsigned __int128)a[j] * b[i] + t[j] + carry;
                t[j] = (uint64_t)cur;
                carry = cur >> 64;
            }
            unsigned __int128 cur = (unsigned __int128)t[4] + carry;
            t[4] = (uint64_t)cur;
            t[5] = (uint64_t)(cur >> 64);

            uint64_t mfac = t[0] * INV;
            carry = 0;
            {
                unsigned __int128 c0 = (unsigned __int128)mfac * MOD[0] + t[0];
                carry = c0 >> 64;
            }
            for (int j = 1; j < 4; ++j) {
                unsigned __int128 cur2 = (unsigned __int128)mfac * MOD[j] + t[j] + carry;
                t[j - 1] = (uint64_t)cur2;
                carry = cur2 >> 64;
            }
            unsigned __int128 c4 = (unsigned __int128)t[4] + carry;
            t[3] = (uint64_t)c4;
            t[4] = t[5] + (uint64_t)(c4 >> 64);
            t[5] = 0;
        }
        Limbs out{t[0], t[1], t[2], t[3]};
        if (t[4] || limb_ops::cmp(out, MOD) >= 0) limb_ops::sub(out, MOD);
        return out;
    }

    Limbs v_;
};

// BN254 base field (the curve y^2 = x^3 + 3 lives over this prime).
struct BnBaseParams {
    static constexpr Limbs MODULUS = {0x3c208c16d87cfd47ULL, 0x97816a916871ca8dULL,
                                      0xb85045b68181585dULL, 0x30644e72e131a029ULL};
};

// BN254 scalar field: the prime group order q shared by G1, G2, GT.
struct BnScalarParams {
    static constexpr Limbs MODULUS = {0x43e1f593f0000001ULL, 0x2833e84879b97091ULL,
                                      0xb85045b68181585dULL, 0x30644e72e131a029ULL};
};

using Fp = PrimeField<BnBaseParams>;
using Fr = PrimeField<BnScalarParams>;

}  // namespace tracemix
