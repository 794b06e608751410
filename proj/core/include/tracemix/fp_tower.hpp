#pragma once

// Extension tower for the BN254 pairing:
//   Fp2  = Fp[i]  / (i^2 + 1)
//   Fp6  = Fp2[v] / (v^3 - xi),  xi = 9 + i
//   Fp12 = Fp6[w] / (w^2 - v)

#include "tracemix/fp.hpp"
#include "tracemix/rng.hpp"

namespace tracemix {

namespace limb_ops {

// Schoolbook division of a 256-bit value by a small divisor.
constexpr Limbs div_small(const Limbs& a, uint64_t d) {
    Limbs out{0, 0, 0, 0};
    unsigned __int128 rem = 0;
    for (int i = 3; i >= 0; --i) {
        unsigned __int128 cur = (rem << 64) | a[i];
        out[i] = (uint64_t)(cur / d);
        rem = cur % d;
    }
    return out;
}

constexpr Limbs sub_small(const Limbs& a, uint64_t d) {
    Limbs out = a;
    sub(out, {d, 0, 0, 0});
    return out;
}

}  // namespace limb_ops

class Fp2 {
public:
    Fp c0, c1;

    constexpr Fp2() = default;
    constexpr Fp2(const Fp& a, const Fp& b) : c0(a), c1(b) {}

    static constexpr Fp2 zero() { return Fp2(); }
    static constexpr Fp2 one() { return Fp2(Fp::one(), Fp::zero()); }
    static constexpr Fp2 xi() { return Fp2(Fp::from_u64(9), Fp::one()); }

    static Fp2 random(Rng& rng) {
        Fp a = Fp::from_bytes_wide(rng.bytes(64));
        Fp b = Fp::from_bytes_wide(rng.bytes(64));
        return Fp2(a, b);
    }

    constexpr bool is_zero() const { return c0.is_zero() && c1.is_zero(); }
    constexpr bool operator==(const Fp2& o) const = default;

    constexpr Fp2 operator+(const Fp2& o) const { return {c0 + o.c0, c1 + o.c1}; }
    constexpr Fp2 operator-(const Fp2& o) const { return {c0 - o.c0, c1 - o.c1}; }
    constexpr Fp2 operator-() const { return {-c0, -c1}; }

    constexpr Fp2 operator*(const Fp2& o) const {
        // Karatsuba with i^2 = -1.
        Fp aa = c0 * o.c0;
        Fp bb = c1 * o.c1;
        Fp cross = (c0 + c1) * (o.c0 + o.c1);
        return {aa - bb, cross - aa - bb};
    }

    constexpr Fp2 mul_fp(const Fp& s) const { return {c0 * s, c1 * s}; }

    constexpr Fp2 square() const {
        // (a+bi)^2 = (a+b)(a-b) + 2ab i.
        Fp t0 = (c0 + c1) * (c0 - c1);
        Fp t1 = (c0 * c1).dbl();
        return {t0, t1};
    }

    constexpr Fp2 dbl() const { return {c0.dbl(), c1.dbl()}; }

    // (9 + i) * (a + bi) = (9a - b) + (9b + a)i.
    constexpr Fp2 mul_by_xi() const {
        Fp nine_a = c0.dbl().dbl().dbl() + c0;
        Fp nine_b = c1.dbl().dbl().dbl() + c1;
        return {nine_a - c1, nine_b + c0};
    }

    constexpr Fp2 conjugate() const { return {c0, -c1}; }

    // x^p: for p ≡ 3 (mod 4), Frobenius on Fp2 is conjugation.
    constexpr Fp2 frobenius() const { return conjugate(); }

    Fp2 inverse() const {
        Fp norm = c0.square() + c1.square();
        Fp inv = norm.inverse();
        return {c0 * inv, -(c1 * inv)};
    }

    Fp2 pow(const Limbs& e) const {
        Fp2 acc = one();
        size_t n = limb_ops::bit_length(e);
        for (size_t i = n; i-- > 0;) {
            acc = acc.square();
            if (limb_ops::bit(e, i)) acc = acc * *this;
        }
        return acc;
    }

    // Square root in Fp2 for p ≡ 3 (mod 4); the candidate is always
    // verified, so a nullopt return reliably means "not a square".
    std::optional<Fp2> sqrt() const {
        if (is_zero()) return Fp2::zero();
        Limbs c1exp = limb_ops::div_small(limb_ops::sub_small(Fp::MOD, 3), 4);  // (p-3)/4
        Fp2 tv1 = pow(c1exp);
        Fp2 x0 = tv1 * *this;       // a^{(p+1)/4}
        Fp2 alpha = tv1 * x0;       // a^{(p-1)/2}
        Fp2 cand;
        if (alpha == -Fp2::one()) {
            cand = Fp2(Fp::zero(), Fp::one()) * x0;  // i * x0
        } else {
            Limbs half = limb_ops::div_small(limb_ops::sub_small(Fp::MOD, 1), 2);  // (p-1)/2
            Fp2 b = (Fp2::one() + alpha).pow(half);
            cand = b * x0;
        }
        if (cand.square() == *this) return cand;
        return std::nullopt;
    }

    void to_bytes(Bytes& out) const {
        c0.to_bytes(out);
        c1.to_bytes(out);
    }
    static std::optional<Fp2> from_bytes(BytesView in) {
        if (in.size() != 64) return std::nullopt;
        auto a = Fp::from_bytes(in.subspan(0, 32));
        auto b = Fp::from_bytes(in.subspan(32, 32));
        if (!a || !b) return std::nullopt;
        return Fp2(*a, *b);
    }
};

class Fp6 {
public:
    Fp2 c0, c1, c2;  // c0 + c1 v + c2 v^2

    constexpr Fp6() = default;
    constexpr Fp6(const Fp2& a, const Fp2& b, const Fp2& c) : c0(a), c1(b), c2(c) {}

    static constexpr Fp6 zero() { return Fp6(); }
    static constexpr Fp6 one() { return Fp6(Fp2::one(), Fp2::zero(), Fp2::zero()); }

    static Fp6 random(Rng& rng) {
        return Fp6(Fp2::random(rng), Fp2::random(rng), Fp2::random(rng));
    }

    constexpr bool is_zero() const { return c0.is_zero() && c1.is_zero() && c2.is_zero(); }
    constexpr bool operator==(const Fp6& o) const = default;

    constexpr Fp6 operator+(const Fp6& o) const { return {c0 + o.c0, c1 + o.c1, c2 + o.c2}; }
    constexpr Fp6 operator-(const Fp6& o) const { return {c0 - o.c0, c1 - o.c1, c2 - o.c2}; }
    constexpr Fp6 operator-() const { return {-c0, -c1, -c2}; }

    Fp6 operator*(const Fp6& o) const {
        // Toom-style interpolation (Devegili et al.).
        Fp2 aa = c0 * o.c0;
        Fp2 bb = c1 * o.c1;
        Fp2 cc = c2 * o.c2;
        Fp2 t0 = ((c1 + c2) * (o.c1 + o.c2) - bb - cc).mul_by_xi() + aa;
        Fp2 t1 = (c0 + c1) * (o.c0 + o.c1) - aa - bb + cc.mul_by_xi();
        Fp2 t2 = (c0 + c2) * (o.c0 + o.c2) - aa - cc + bb;
        return {t0, t1, t2};
    }

    Fp6 square() const { return *this * *this; }

    constexpr Fp6 dbl() const { return {c0.dbl(), c1.dbl(), c2.dbl()}; }

    constexpr Fp6 mul_fp2(const Fp2& s) const { return {c0 * s, c1 * s, c2 * s}; }

    // Multiplication by v: (c0, c1, c2) -> (xi*c2, c0, c1).
    constexpr Fp6 mul_by_v() const { return {c2.mul_by_xi(), c0, c1}; }

    Fp6 inverse() const {
        Fp2 t0 = c0.square() - (c1 * c2).mul_by_xi();
        Fp2 t1 = c2.square().mul_by_xi() - c0 * c1;
        Fp2 t2 = c1.square() - c0 * c2;
        Fp2 norm = c0 * t0 + (c2 * t1).mul_by_xi() + (c1 * t2).mul_by_xi();
        Fp2 inv = norm.inverse();
        return {t0 * inv, t1 * inv, t2 * inv};
    }

    // Frobenius coefficients gamma1 = xi^{(p-1)/3}, gamma2 = gamma1^2.
    static const Fp2& frob_gamma1() {
        static const Fp2 g = Fp2::xi().pow(limb_ops::div_small(limb_ops::sub_small(Fp::MOD, 1), 3));
        return g;
    }
    static const Fp2& frob_gamma2() {
        static const Fp2 g = frob_gamma1().square();
        return g;
    }

    Fp6 frobenius() const {
        return {c0.frobenius(), c1.frobenius() * frob_gamma1(), c2.frobenius() * frob_gamma2()};
    }

    Fp6 pow_by_limbs(const Limbs& e) const {
        Fp6 acc = one();
        size_t n = limb_ops::bit_length(e);
        for (size_t i = n; i-- > 0;) {
            acc = acc.square();
            if (limb_ops::bit(e, i)) acc = acc * *this;
        }
        return acc;
    }

    void to_bytes(Bytes& out) const {
        c0.to_bytes(out);
        c1.to_bytes(out);
        c2.to_bytes(out);
    }
    static std::optional<Fp6> from_bytes(BytesView in) {
        if (in.size() != 192) return std::nullopt;
        auto a = Fp2::from_bytes(in.subspan(0, 64));
        auto b = Fp2::from_bytes(in.subspan(64, 64));
        auto c = Fp2::from_bytes(in.subspan(128, 64));
        if (!a || !b || !c) return std::nullopt;
        return Fp6(*a, *b, *c);
    }
};

class Fp12 {
public:
    Fp6 c0, c1;  // c0 + c1 w

    constexpr Fp12() = default;
    constexpr Fp12(const Fp6& a, const Fp6& b) : c0(a), c1(b) {}

    static constexpr Fp12 zero() { return Fp12(); }
    static constexpr Fp12 one() { return Fp12(Fp6::one(), Fp6::zero()); }

    static Fp12 random(Rng& rng) { return Fp12(Fp6::random(rng), Fp6::random(rng)); }

    constexpr bool is_zero() const { return c0.is_zero() && c1.is_zero(); }
    constexpr bool is_one() const { return *this == one(); }
    constexpr bool operator==(const Fp12& o) const = default;

    constexpr Fp12 operator+(const Fp12& o) const { return {c0 + o.c0, c1 + o.c1}; }
    constexpr Fp12 operator-(const Fp12& o) const { return {c0 - o.c0, c1 - o.c1}; }

    Fp12 operator*(const Fp12& o) const {
        Fp6 aa = c0 * o.c0;
        Fp6 bb = c1 * o.c1;
        Fp6 cross = (c0 + c1) * (o.c0 + o.c1);
        return {aa + bb.mul_by_v(), cross - aa - bb};
    }

    Fp12 square() const {
        // Complex squaring over the quadratic extension.
        Fp6 t0 = c0 * c1;
        Fp6 a = (c0 + c1) * (c0 + c1.mul_by_v());
        return {a - t0 - t0.mul_by_v(), t0.dbl()};
    }

    Fp12 inverse() const {
        Fp6 t = (c0.square() - c1.square().mul_by_v()).inverse();
        return {c0 * t, -(c1 * t)};
    }

    // For elements of the cyclotomic subgroup (pairing outputs) the
    // conjugate equals the inverse.
    constexpr Fp12 conjugate() const { return {c0, -c1}; }

    // Granger-Scott squaring, valid only inside the cyclotomic subgroup.
    // Decompose over Fp4 = Fp2[w^3] ((w^3)^2 = xi): the six Fp2
    // coefficients pair up as alpha_i = A_i + A_{i+3} w^3 along w^i.
    Fp12 cyclotomic_square() const {
        const Fp2& a0 = c0.c0;  // w^0
        const Fp2& a1 = c1.c0;  // w^1
        const Fp2& a2 = c0.c1;  // w^2
        const Fp2& a3 = c1.c1;  // w^3
        const Fp2& a4 = c0.c2;  // w^4
        const Fp2& a5 = c1.c2;  // w^5

        // Fp4 squares (x + y u)^2 = (x^2 + xi y^2) + (2xy) u.
        auto fp4_sq = [](const Fp2& x, const Fp2& y) {
            return std::pair<Fp2, Fp2>{x.square() + y.square().mul_by_xi(), (x * y).dbl()};
        };
        auto [s0x, s0y] = fp4_sq(a0, a3);
        auto [s1x, s1y] = fp4_sq(a1, a4);
        auto [s2x, s2y] = fp4_sq(a2, a5);

        auto triple = [](const Fp2& x) { return x.dbl() + x; };
        Fp12 r;
        r.c0.c0 = triple(s0x) - a0.dbl();                // w^0
        r.c1.c1 = triple(s0y) + a3.dbl();                // w^3
        r.c1.c0 = triple(s2y.mul_by_xi()) + a1.dbl();    // w^1
        r.c0.c2 = triple(s2x) - a4.dbl();                // w^4
        r.c0.c1 = triple(s1x) - a2.dbl();                // w^2
        r.c1.c2 = triple(s1y) + a5.dbl();                // w^5
        return r;
    }

    // Square-and-multiply with cyclotomic squarings and a 4-bit window;
    // only sound for cyclotomic-subgroup elements.
    Fp12 pow_unitary(const Limbs& e) const {
        std::array<Fp12, 16> table;
        table[0] = one();
        table[1] = *this;
        for (int i = 2; i < 16; ++i) table[i] = table[i - 1] * *this;
        Fp12 acc = one();
        bool started = false;
        size_t n = limb_ops::bit_length(e);
        size_t nibbles = (n + 3) / 4;
        for (size_t t = nibbles; t-- > 0;) {
            uint8_t nib = 0;
            for (int b = 3; b >= 0; --b) {
                size_t bit = t * 4 + b;
                nib = (uint8_t)((nib << 1) | (bit < n && limb_ops::bit(e, bit) ? 1 : 0));
            }
            if (started) {
                acc = acc.cyclotomic_square().cyclotomic_square();
                acc = acc.cyclotomic_square().cyclotomic_square();
            }
            if (nib != 0) {
                acc = started ? acc * table[nib] : table[nib];
                started = true;
            } else if (!started) {
                continue;
            }
        }
        return started ? acc : one();
    }

    // gamma12 = xi^{(p-1)/6}.
    static const Fp2& frob_gamma12() {
        static const Fp2 g = Fp2::xi().pow(limb_ops::div_small(limb_ops::sub_small(Fp::MOD, 1), 6));
        return g;
    }

    Fp12 frobenius() const {
        return {c0.frobenius(), c1.frobenius().mul_fp2(frob_gamma12())};
    }
    Fp12 frobenius_sq() const { return frobenius().frobenius(); }

    Fp12 pow_by_limbs(const Limbs& e) const {
        Fp12 acc = one();
        size_t n = limb_ops::bit_length(e);
        for (size_t i = n; i-- > 0;) {
            acc = acc.square();
            if (limb_ops::bit(e, i)) acc = acc * *this;
        }
        return acc;
    }

    // Arbitrary-length big-endian exponent (final-exponentiation hard part).
    Fp12 pow_be(BytesView exp) const {
        Fp12 acc = one();
        bool started = false;
        for (uint8_t byte : exp) {
            for (int b = 7; b >= 0; --b) {
                if (started) acc = acc.square();
                if ((byte >> b) & 1) {
                    acc = started ? acc * *this : *this;
                    started = true;
                }
            }
        }
        return started ? acc : one();
    }

    void to_bytes(Bytes& out) const {
        c0.to_bytes(out);
        c1.to_bytes(out);
    }
    Bytes to_bytes() const {
        Bytes out;
        out.reserve(384);
        to_bytes(out);
        return out;
    }
    static std::optional<Fp12> from_bytes(BytesView in) {
        if (in.size() != 384) return std::nullopt;
        auto a = Fp6::from_bytes(in.subspan(0, 192));
        auto b = Fp6::from_bytes(in.subspan(192, 192));
        if (!a || !b) return std::nullopt;
        return Fp12(*a, *b);
    }
};

}  // namespace tracemix
