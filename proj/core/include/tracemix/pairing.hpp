#pragma once

#include "tracemix/curve.hpp"

namespace tracemix {

// Element of the order-q subgroup GT of Fp12* (a pairing output or a
// power of one). Inverses are conjugates there.
class Gt {
public:
    Gt() : v_(Fp12::one()) {}
    explicit Gt(const Fp12& v) : v_(v) {}

    static Gt one() { return Gt(); }

    bool is_one() const { return v_.is_one(); }
    bool operator==(const Gt& o) const { return v_ == o.v_; }
    bool operator!=(const Gt& o) const { return v_ != o.v_; }

    Gt operator*(const Gt& o) const { return Gt(v_ * o.v_); }
    Gt inverse() const { return Gt(v_.conjugate()); }

    Gt pow(const Fr& k) const { return Gt(v_.pow_unitary(k.plain())); }

    const Fp12& value() const { return v_; }

    Bytes to_bytes() const { return v_.to_bytes(); }
    void to_bytes(Bytes& out) const { v_.to_bytes(out); }

    // Rejects encodings outside the order-q subgroup.
    static std::optional<Gt> from_bytes(BytesView in);

private:
    Fp12 v_;
};

// Optimal ate pairing e: G1 x G2 -> GT.
Gt pairing(const G1& p, const G2& q);

namespace pairing_detail {
// Both final-exponentiation routes, exposed so tests can hold the fast
// path against plain exponentiation by (p^4 - p^2 + 1) / q.
Fp12 final_exp_naive(const Fp12& miller_out);
Fp12 final_exp_fast(const Fp12& miller_out);
Fp12 miller(const G1& p, const G2& q);
Fp12 miller_affine(const G1& p, const G2& q);
}  // namespace pairing_detail

}  // namespace tracemix
