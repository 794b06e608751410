#pragma once

// BN254 groups: G1 on y^2 = x^3 + 3 over Fp (prime order, cofactor 1) and
// G2 on the sextic twist y^2 = x^3 + 3/xi over Fp2 (cofactor 2p - q).

#include "tracemix/fp_tower.hpp"
#include "tracemix/sha256.hpp"

namespace tracemix {

struct G1Tag {
    using Field = Fp;
    static Field coeff_b() { return Fp::from_u64(3); }
    static constexpr uint8_t group_id = 1;
    static constexpr size_t compressed_size = 32;
};

struct G2Tag {
    using Field = Fp2;
    static Field coeff_b() {
        static const Fp2 b = Fp2::xi().inverse().mul_fp(Fp::from_u64(3));
        return b;
    }
    static constexpr uint8_t group_id = 2;
    static constexpr size_t compressed_size = 64;
};

// Jacobian point; z == 0 encodes the identity.
template <typename Tag>
class CurvePoint {
public:
    using Field = typename Tag::Field;

    Field x, y, z;

    CurvePoint() : x(Field::one()), y(Field::one()), z(Field::zero()) {}
    CurvePoint(const Field& ax, const Field& ay)
        : x(ax), y(ay), z(Field::one()) {}

    static CurvePoint infinity() { return CurvePoint(); }
    bool is_infinity() const { return z.is_zero(); }

    static CurvePoint generator();

    bool on_curve() const {
        if (is_infinity()) return true;
        // Jacobian: y^2 = x^3 + b z^6.
        Field z2 = z.square();
        Field z6 = z2.square() * z2;
        return y.square() == x.square() * x + z6 * Tag::coeff_b();
    }

    CurvePoint dbl() const {
        if (is_infinity()) return *this;
        // dbl-2009-l, a = 0.
        Field a = x.square();
        Field b = y.square();
        Field c = b.square();
        Field d = ((x + b).square() - a - c).dbl();
        Field e = a + a.dbl();
        Field f = e.square();
        CurvePoint r;
        r.x = f - d.dbl();
        r.y = e * (d - r.x) - c.dbl().dbl().dbl();
        r.z = (y * z).dbl();
        return r;
    }

    CurvePoint operator+(const CurvePoint& o) const {
        if (is_infinity()) return o;
        if (o.is_infinity()) return *this;
        // add-2007-bl.
        Field z1z1 = z.square();
        Field z2z2 = o.z.square();
        Field u1 = x * z2z2;
        Field u2 = o.x * z1z1;
        Field s1 = y * o.z * z2z2;
        Field s2 = o.y * z * z1z1;
        if (u1 == u2) {
            if (s1 == s2) return dbl();
            return infinity();
        }
        Field h = u2 - u1;
        Field i = h.dbl().square();
        Field j = h * i;
        Field rr = (s2 - s1).dbl();
        Field v = u1 * i;
        CurvePoint r;
        r.x = rr.square() - j - v.dbl();
        r.y = rr * (v - r.x) - (s1 * j).dbl();
        r.z = ((z + o.z).square() - z1z1 - z2z2) * h;
        return r;
    }

    CurvePoint operator-() const {
        CurvePoint r = *this;
        r.y = -r.y;
        return r;
    }
    CurvePoint operator-(const CurvePoint& o) const { return *this + (-o); }

    CurvePoint mul_limbs(const Limbs& k) const {
        CurvePoint acc = infinity();
        size_t n = limb_ops::bit_length(k);
        for (size_t i = n; i-- > 0;) {
            acc = acc.dbl();
            if (limb_ops::bit(k, i)) acc = acc + *this;
        }
        return acc;
    }

    CurvePoint operator*(const Fr& k) const { return mul_limbs(k.plain()); }

    bool operator==(const CurvePoint& o) const {
        bool inf_a = is_infinity(), inf_b = o.is_infinity();
        if (inf_a || inf_b) return inf_a == inf_b;
        // Cross-multiplied Jacobian equality.
        Field z1z1 = z.square();
        Field z2z2 = o.z.square();
        if (x * z2z2 != o.x * z1z1) return false;
        return y * o.z * z2z2 == o.y * z * z1z1;
    }
    bool operator!=(const CurvePoint& o) const { return !(*this == o); }

    std::pair<Field, Field> to_affine() const {
        if (is_infinity()) throw std::domain_error("affine coordinates of infinity");
        Field zi = z.inverse();
        Field zi2 = zi.square();
        return {x * zi2, y * zi2 * zi};
    }

    bool in_subgroup() const {
        return mul_limbs(Fr::MOD).is_infinity();
    }

    // Compressed encoding: big-endian x with flag bits in the top byte
    // (bit7 infinity, bit6 odd-y). x < p < 2^254 keeps both bits free.
    Bytes to_bytes() const {
        Bytes out;
        if (is_infinity()) {
            out.assign(Tag::compressed_size, 0);
            out[0] = 0x80;
            return out;
        }
        auto [ax, ay] = to_affine();
        field_to_bytes(ax, out);
        if (y_is_odd(ay)) out[0] |= 0x40;
        return out;
    }
    void to_bytes(Bytes& out) const {
        Bytes b = to_bytes();
        append(out, b);
    }

    static std::optional<CurvePoint> from_bytes(BytesView in) {
        if (in.size() != Tag::compressed_size) return std::nullopt;
        uint8_t flags = in[0] & 0xc0;
        if (flags & 0x80) {
            for (size_t i = 1; i < in.size(); ++i) {
                if (in[i] != 0) return std::nullopt;
            }
            if ((in[0] & 0x7f) != 0) return std::nullopt;
            return infinity();
        }
        Bytes raw(in.begin(), in.end());
        raw[0] &= 0x3f;
        auto ax = field_from_bytes(raw);
        if (!ax) return std::nullopt;
        Field rhs = ax->square() * *ax + Tag::coeff_b();
        auto ay = rhs.sqrt();
        if (!ay) return std::nullopt;
        Field yy = *ay;
        if (y_is_odd(yy) != ((flags & 0x40) != 0)) yy = -yy;
        CurvePoint p(*ax, yy);
        if constexpr (std::is_same_v<Tag, G2Tag>) {
            if (!p.in_subgroup()) return std::nullopt;
        }
        return p;
    }

    // Deterministic hash onto the prime-order subgroup (try-and-increment,
    // then cofactor clearing for G2).
    static CurvePoint hash_to_point(const std::string& domain, BytesView msg);

private:
    static bool y_is_odd(const Fp& v) { return (v.plain()[0] & 1) != 0; }
    static bool y_is_odd(const Fp2& v) {
        // Parity of c0, tie-broken by c1 if c0 == 0.
        if (!v.c0.is_zero()) return (v.c0.plain()[0] & 1) != 0;
        return (v.c1.plain()[0] & 1) != 0;
    }

    static void field_to_bytes(const Fp& v, Bytes& out) { v.to_bytes(out); }
    static void field_to_bytes(const Fp2& v, Bytes& out) {
        // c1 first so the flag bits land in c1's (always < 2^254) top byte.
        v.c1.to_bytes(out);
        v.c0.to_bytes(out);
    }
    static std::optional<Fp> field_from_bytes_impl(BytesView in, const Fp*) {
        return Fp::from_bytes(in);
    }
    static std::optional<Fp2> field_from_bytes_impl(BytesView in, const Fp2*) {
        auto c1 = Fp::from_bytes(in.subspan(0, 32));
        auto c0 = Fp::from_bytes(in.subspan(32, 32));
        if (!c0 || !c1) return std::nullopt;
        return Fp2(*c0, *c1);
    }
    static std::optional<Field> field_from_bytes(BytesView in) {
        return field_from_bytes_impl(in, static_cast<const Field*>(nullptr));
    }
};

using G1 = CurvePoint<G1Tag>;
using G2 = CurvePoint<G2Tag>;

// G2 cofactor 2p - q (the twist order is q * (2p - q)).
Limbs g2_cofactor();

}  // namespace tracemix
