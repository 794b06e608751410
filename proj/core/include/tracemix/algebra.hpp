#pragma once

#include <variant>

#include "tracemix/pairing.hpp"
#include "tracemix/rng.hpp"

namespace tracemix {

using Scalar = Fr;

// Tagged union over the three pairing groups, written multiplicatively so
// predicate machinery can treat targets and bases uniformly. Wire format:
// group id byte || compressed point bytes.
class GroupElement {
public:
    enum class Group : uint8_t { G1Grp = 1, G2Grp = 2, GtGrp = 3 };

    GroupElement() : v_(G1::infinity()) {}
    explicit GroupElement(const G1& p) : v_(p) {}
    explicit GroupElement(const G2& p) : v_(p) {}
    explicit GroupElement(const Gt& p) : v_(p) {}

    Group group() const {
        if (std::holds_alternative<G1>(v_)) return Group::G1Grp;
        if (std::holds_alternative<G2>(v_)) return Group::G2Grp;
        return Group::GtGrp;
    }

    static GroupElement identity(Group g) {
        switch (g) {
            case Group::G1Grp: return GroupElement(G1::infinity());
            case Group::G2Grp: return GroupElement(G2::infinity());
            default: return GroupElement(Gt::one());
        }
    }

    bool is_identity() const {
        return std::visit(
            [](const auto& p) {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, Gt>) return p.is_one();
                else return p.is_infinity();
            },
            v_);
    }

    GroupElement op(const GroupElement& o) const {
        if (group() != o.group()) throw std::invalid_argument("group mismatch");
        if (auto* a = std::get_if<G1>(&v_)) return GroupElement(*a + std::get<G1>(o.v_));
        if (auto* a = std::get_if<G2>(&v_)) return GroupElement(*a + std::get<G2>(o.v_));
        return GroupElement(std::get<Gt>(v_) * std::get<Gt>(o.v_));
    }

    GroupElement pow(const Scalar& k) const {
        if (auto* a = std::get_if<G1>(&v_)) return GroupElement(*a * k);
        if (auto* a = std::get_if<G2>(&v_)) return GroupElement(*a * k);
        return GroupElement(std::get<Gt>(v_).pow(k));
    }

    GroupElement inverse() const {
        if (auto* a = std::get_if<G1>(&v_)) return GroupElement(-*a);
        if (auto* a = std::get_if<G2>(&v_)) return GroupElement(-*a);
        return GroupElement(std::get<Gt>(v_).inverse());
    }

    bool operator==(const GroupElement& o) const {
        if (group() != o.group()) return false;
        if (auto* a = std::get_if<G1>(&v_)) return *a == std::get<G1>(o.v_);
        if (auto* a = std::get_if<G2>(&v_)) return *a == std::get<G2>(o.v_);
        return std::get<Gt>(v_) == std::get<Gt>(o.v_);
    }
    bool operator!=(const GroupElement& o) const { return !(*this == o); }

    const G1& as_g1() const { return std::get<G1>(v_); }
    const G2& as_g2() const { return std::get<G2>(v_); }
    const Gt& as_gt() const { return std::get<Gt>(v_); }

    void to_bytes(Bytes& out) const {
        append_u8(out, static_cast<uint8_t>(group()));
        std::visit([&](const auto& p) { p.to_bytes(out); }, v_);
    }
    Bytes to_bytes() const {
        Bytes out;
        to_bytes(out);
        return out;
    }

    static std::optional<GroupElement> from_bytes(BytesView in);

private:
    std::variant<G1, G2, Gt> v_;
};

// Pairing-group context shared by all parties: prime order q, the seven
// generators, and the party/list sizes. Two setups from the same seed are
// byte-identical.
struct SetupParams {
    Bytes seed;
    size_t m = 0;  // mix-servers
    size_t n = 0;  // ciphertexts

    G1 f1, g1, h1;
    G2 f2, g2;
    Gt fT;

    // Pairing constants used throughout the query protocols.
    Gt e_g1_g2;      // e(g1, g2)
    Gt e_g1_f2_inv;  // e(g1, f2)^{-1}
    Gt e_h1_f2_inv;  // e(h1, f2)^{-1}

    Bytes to_bytes() const;
};

// Deterministic public setup; rejects m == 0 or n == 0 and verifies
// non-degeneracy e(g1, g2) != 1.
SetupParams setup(BytesView seed, size_t m, size_t n);

// Random-oracle challenge: sha256 over the framed tag and transcript,
// interpreted as a big-endian integer mod q.
Scalar hash_to_challenge(const std::string& domain_tag, BytesView transcript);

Scalar random_scalar(Rng& rng);
Scalar random_nonzero_scalar(Rng& rng);

}  // namespace tracemix
