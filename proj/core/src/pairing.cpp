#include "tracemix/pairing.hpp"

#include <gmpxx.h>

namespace tracemix {

namespace {

constexpr uint64_t BN_U = 4965661367192848881ULL;

mpz_class mpz_from_be(const Bytes& b) {
    mpz_class x;
    if (!b.empty()) mpz_import(x.get_mpz_t(), b.size(), 1, 1, 1, 0, b.data());
    return x;
}

// Ate loop count 6u + 2 (65 bits).
Limbs ate_loop_count() {
    Limbs l{BN_U, 0, 0, 0};
    Limbs u{BN_U, 0, 0, 0};
    for (int i = 0; i < 5; ++i) limb_ops::add(l, u);
    limb_ops::add(l, {2, 0, 0, 0});
    return l;
}

struct TwistPoint {
    Fp2 x, y;
    bool inf = false;
};

TwistPoint to_twist_affine(const G2& q) {
    auto [ax, ay] = q.to_affine();
    return {ax, ay, false};
}

// Untwist-Frobenius-twist endomorphism on E'(Fp2):
// (x, y) -> (conj(x) * xi^{(p-1)/3}, conj(y) * xi^{(p-1)/2}).
const Fp2& frob_twist_x() {
    static const Fp2 g =
        Fp2::xi().pow(limb_ops::div_small(limb_ops::sub_small(Fp::MOD, 1), 3));
    return g;
}
const Fp2& frob_twist_y() {
    static const Fp2 g =
        Fp2::xi().pow(limb_ops::div_small(limb_ops::sub_small(Fp::MOD, 1), 2));
    return g;
}

TwistPoint twist_frobenius(const TwistPoint& t) {
    return {t.x.conjugate() * frob_twist_x(), t.y.conjugate() * frob_twist_y(), t.inf};
}

// Line through psi(a), psi(b) (tangent when a == b) evaluated at P, plus
// the sum a + b on the twist. The line lives sparsely in Fp12 as
// l = y_P - lambda*x_P*w + (lambda*x_a - y_a)*w^3 with lambda in Fp2; a
// vertical line degenerates to x_P - x_a*w^2.
struct LineStep {
    Fp12 line;
    TwistPoint next;
};

Fp12 vertical_line(const TwistPoint& a, const Fp& px) {
    Fp12 out = Fp12::zero();
    out.c0.c0 = Fp2(px, Fp::zero());
    out.c0.c1 = -a.x;
    return out;
}

LineStep line_and_add(const TwistPoint& a, const TwistPoint& b, const Fp& px, const Fp& py) {
    if (a.inf) return {vertical_line(b, px), b};
    if (b.inf) return {vertical_line(a, px), a};

    Fp2 lambda;
    if (a.x == b.x) {
        if (a.y == b.y) {
            // Tangent: lambda = 3x^2 / 2y.
            Fp2 x2 = a.x.square();
            lambda = (x2 + x2 + x2) * a.y.dbl().inverse();
        } else {
            return {vertical_line(a, px), TwistPoint{Fp2::zero(), Fp2::zero(), true}};
        }
    } else {
        lambda = (b.y - a.y) * (b.x - a.x).inverse();
    }

    Fp12 line = Fp12::zero();
    line.c0.c0 = Fp2(py, Fp::zero());
    line.c1.c0 = -lambda.mul_fp(px);
    line.c1.c1 = lambda * a.x - a.y;

    TwistPoint sum;
    sum.x = lambda.square() - a.x - b.x;
    sum.y = lambda * (a.x - sum.x) - a.y;
    return {line, sum};
}

// Homogeneous projective point on the twist; Z == 0 is the identity.
struct ProjTwist {
    Fp2 x, y, z;
    bool inf() const { return z.is_zero(); }
};

Fp2 small_mul(const Fp2& a, uint64_t k) { return a.mul_fp(Fp::from_u64(k)); }

// Lines are computed up to nonzero Fp2 factors, which the final
// exponentiation kills. Nonzero coefficients sit at w^0, w^1, w^3 (w^2
// for verticals).
Fp12 line_elem(const Fp2& w0, const Fp2& w1, const Fp2& w3) {
    Fp12 out = Fp12::zero();
    out.c0.c0 = w0;
    out.c1.c0 = w1;
    out.c1.c1 = w3;
    return out;
}

Fp12 vertical_line_proj(const ProjTwist& t, const Fp& px) {
    // (x_P - x_T w^2), scaled by Z.
    Fp12 out = Fp12::zero();
    out.c0.c0 = t.z.mul_fp(px);
    out.c0.c1 = -t.x;
    return out;
}

struct ProjStep {
    Fp12 line;
    ProjTwist next;
};

// Tangent line at T scaled by 2YZ^2:
//   l = 2YZ^2 y_P - 3X^2 Z x_P w + (3X^3 - 2Y^2 Z) w^3
// and 2T = (2YZ(9X^4 - 8XY^2Z), 36X^3Y^2Z - 27X^6 - 8Y^4Z^2, 8Y^3Z^3).
ProjStep dbl_step(const ProjTwist& t, const Fp& px, const Fp& py) {
    Fp2 x2 = t.x.square();
    Fp2 y2 = t.y.square();
    Fp2 yz = t.y * t.z;
    Fp2 y2z = y2 * t.z;
    Fp2 x4 = x2.square();
    Fp2 three_x2 = x2.dbl() + x2;

    Fp2 w0 = (yz * t.z).dbl().mul_fp(py);
    Fp2 w1 = -(three_x2 * t.z).mul_fp(px);
    Fp2 w3 = three_x2 * t.x - y2z.dbl();

    Fp2 xy2z = t.x * y2z;
    ProjTwist next;
    next.x = yz.dbl() * (small_mul(x4, 9) - small_mul(xy2z, 8));
    Fp2 x3y2z = (t.x * x2) * y2z;
    next.y = small_mul(x3y2z, 36) - small_mul(x4 * x2, 27) - small_mul(y2.square() * t.z.square(), 8);
    next.z = small_mul((y2 * t.y) * (t.z.square() * t.z), 8);
    return {line_elem(w0, w1, w3), next};
}

// Chord through T and the affine base Q = (x2, y2), scaled by LZ where
// L = x2 Z - X and theta = y2 Z - Y:
//   l = LZ y_P - theta Z x_P w + (theta X - Y L) w^3
// and T + Q = (LA, theta(XL^2 - A) - YL^3, L^3 Z) with
// A = theta^2 Z - L^2 (X + x2 Z).
ProjStep add_step(const ProjTwist& t, const TwistPoint& q, const Fp& px, const Fp& py) {
    Fp2 l = q.x * t.z - t.x;
    Fp2 theta = q.y * t.z - t.y;
    if (l.is_zero() && theta.is_zero()) return dbl_step(t, px, py);
    if (l.is_zero()) {
        // Vertical chord: T + Q is the identity.
        return {vertical_line_proj(t, px), ProjTwist{Fp2::one(), Fp2::one(), Fp2::zero()}};
    }
    Fp2 w0 = (l * t.z).mul_fp(py);
    Fp2 w1 = -(theta * t.z).mul_fp(px);
    Fp2 w3 = theta * t.x - t.y * l;

    Fp2 l2 = l.square();
    Fp2 l3 = l2 * l;
    Fp2 a = theta.square() * t.z - l2 * (t.x + q.x * t.z);
    ProjTwist next;
    next.x = l * a;
    next.y = theta * (t.x * l2 - a) - t.y * l3;
    next.z = l3 * t.z;
    return {line_elem(w0, w1, w3), next};
}

ProjStep step(const ProjTwist& t, const TwistPoint& q, const Fp& px, const Fp& py) {
    if (t.inf()) {
        // Line through the identity and Q: the vertical at Q, scaled by 1.
        Fp12 line = Fp12::zero();
        line.c0.c0 = Fp2(px, Fp::zero());
        line.c0.c1 = -q.x;
        return {line, ProjTwist{q.x, q.y, Fp2::one()}};
    }
    return add_step(t, q, px, py);
}

Fp12 miller_loop(const G1& p, const G2& q) {
    auto [px, py] = p.to_affine();
    TwistPoint base = to_twist_affine(q);
    ProjTwist t{base.x, base.y, Fp2::one()};

    static const Limbs LOOP = ate_loop_count();
    Fp12 f = Fp12::one();
    size_t nbits = limb_ops::bit_length(LOOP);
    for (size_t i = nbits - 1; i-- > 0;) {
        f = f.square();
        ProjStep d = dbl_step(t, px, py);
        f = f * d.line;
        t = d.next;
        if (limb_ops::bit(LOOP, i)) {
            ProjStep s = step(t, base, px, py);
            f = f * s.line;
            t = s.next;
        }
    }

    TwistPoint q1 = twist_frobenius(base);
    TwistPoint q2 = twist_frobenius(q1);
    q2.y = -q2.y;

    ProjStep s1 = step(t, q1, px, py);
    f = f * s1.line;
    t = s1.next;
    ProjStep s2 = step(t, q2, px, py);
    f = f * s2.line;
    return f;
}

// Reference Miller loop with affine arithmetic, kept as the independent
// route for tests (line values differ by Fp2 factors only).
Fp12 miller_loop_affine(const G1& p, const G2& q) {
    auto [px, py] = p.to_affine();
    TwistPoint base = to_twist_affine(q);
    TwistPoint t = base;

    static const Limbs LOOP = ate_loop_count();
    Fp12 f = Fp12::one();
    size_t nbits = limb_ops::bit_length(LOOP);
    for (size_t i = nbits - 1; i-- > 0;) {
        f = f.square();
        LineStep d = line_and_add(t, t, px, py);
        f = f * d.line;
        t = d.next;
        if (limb_ops::bit(LOOP, i)) {
            LineStep s = line_and_add(t, base, px, py);
            f = f * s.line;
            t = s.next;
        }
    }

    TwistPoint q1 = twist_frobenius(base);
    TwistPoint q2 = twist_frobenius(q1);
    q2.y = -q2.y;

    LineStep s1 = line_and_add(t, q1, px, py);
    f = f * s1.line;
    t = s1.next;
    LineStep s2 = line_and_add(t, q2, px, py);
    f = f * s2.line;
    return f;
}

// (p^4 - p^2 + 1) / q as big-endian bytes; the exact divisibility doubles
// as a consistency check between the curve and group-order constants.
const Bytes& hard_part_exponent() {
    static const Bytes exp = [] {
        mpz_class p = 0, r = 0;
        for (int i = 3; i >= 0; --i) {
            p <<= 64;
            p += mpz_class(Fp::MOD[i]);
            r <<= 64;
            r += mpz_class(Fr::MOD[i]);
        }
        mpz_class num = p * p * p * p - p * p + 1;
        mpz_class e, rem;
        mpz_tdiv_qr(e.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), r.get_mpz_t());
        if (rem != 0) throw std::logic_error("group order does not divide the cyclotomic exponent");
        size_t count = (mpz_sizeinbase(e.get_mpz_t(), 2) + 7) / 8;
        Bytes out(count);
        size_t written = 0;
        mpz_export(out.data(), &written, 1, 1, 1, 0, e.get_mpz_t());
        out.resize(written);
        return out;
    }();
    return exp;
}

// Base-p digits of the hard-part exponent: lambda = d3 p^3 + d2 p^2 +
// d1 p + d0 with 0 <= d_i < p, so the hard part becomes a four-way
// multi-exponentiation over Frobenius twists.
const std::array<Limbs, 4>& hard_part_digits() {
    static const std::array<Limbs, 4> digits = [] {
        mpz_class p = 0;
        for (int i = 3; i >= 0; --i) {
            p <<= 64;
            p += mpz_class(Fp::MOD[i]);
        }
        mpz_class lambda = mpz_from_be(hard_part_exponent());
        std::array<Limbs, 4> out{};
        mpz_class rem = lambda;
        for (int d = 0; d < 4; ++d) {
            mpz_class digit = rem % p;
            rem /= p;
            for (int i = 0; i < 4; ++i) {
                uint64_t limb = 0;
                for (int b = 0; b < 64; ++b) {
                    if (mpz_tstbit(digit.get_mpz_t(), i * 64 + b)) limb |= (uint64_t)1 << b;
                }
                out[d][i] = limb;
            }
        }
        if (rem != 0) throw std::logic_error("hard-part exponent out of digit range");
        return out;
    }();
    return digits;
}

Fp12 easy_part(const Fp12& f) {
    // f^{(p^6-1)(p^2+1)} lands in the cyclotomic subgroup.
    Fp12 t = f.conjugate() * f.inverse();
    return t.frobenius_sq() * t;
}

// Shamir multi-exponentiation of prod_i (t^{p^i})^{d_i} with cyclotomic
// squarings.
Fp12 hard_part(const Fp12& t) {
    const auto& digits = hard_part_digits();
    std::array<Fp12, 4> base;
    base[0] = t;
    for (int i = 1; i < 4; ++i) base[i] = base[i - 1].frobenius();

    std::array<Fp12, 16> table;
    table[0] = Fp12::one();
    for (uint32_t mask = 1; mask < 16; ++mask) {
        uint32_t low = mask & (~mask + 1);
        uint32_t idx = low == 1 ? 0 : low == 2 ? 1 : low == 4 ? 2 : 3;
        table[mask] = mask == low ? base[idx] : table[mask ^ low] * base[idx];
    }

    size_t nbits = 0;
    for (const Limbs& d : digits) nbits = std::max(nbits, limb_ops::bit_length(d));
    Fp12 acc = Fp12::one();
    bool started = false;
    for (size_t bit = nbits; bit-- > 0;) {
        if (started) acc = acc.cyclotomic_square();
        uint32_t mask = 0;
        for (int i = 0; i < 4; ++i) {
            if (limb_ops::bit(digits[i], bit)) mask |= 1u << i;
        }
        if (mask != 0) {
            acc = started ? acc * table[mask] : table[mask];
            started = true;
        }
    }
    return started ? acc : Fp12::one();
}

}  // namespace

namespace pairing_detail {

Fp12 miller(const G1& p, const G2& q) { return miller_loop(p, q); }

Fp12 miller_affine(const G1& p, const G2& q) { return miller_loop_affine(p, q); }

Fp12 final_exp_naive(const Fp12& miller_out) {
    Fp12 t = easy_part(miller_out);
    // Plain square-and-multiply by the full hard-part exponent.
    Fp12 acc = Fp12::one();
    bool started = false;
    for (uint8_t byte : hard_part_exponent()) {
        for (int b = 7; b >= 0; --b) {
            if (started) acc = acc.square();
            if ((byte >> b) & 1) {
                acc = started ? acc * t : t;
                started = true;
            }
        }
    }
    return acc;
}

Fp12 final_exp_fast(const Fp12& miller_out) { return hard_part(easy_part(miller_out)); }

}  // namespace pairing_detail

Gt pairing(const G1& p, const G2& q) {
    if (p.is_infinity() || q.is_infinity()) return Gt::one();
    return Gt(pairing_detail::final_exp_fast(miller_loop(p, q)));
}

std::optional<Gt> Gt::from_bytes(BytesView in) {
    auto v = Fp12::from_bytes(in);
    if (!v) return std::nullopt;
    if (v->is_zero()) return std::nullopt;
    if (!v->pow_by_limbs(Fr::MOD).is_one()) return std::nullopt;
    return Gt(*v);
}

}  // namespace tracemix
