#include "tracemix/dpk.hpp"

namespace tracemix {

void DpkPredicate::validate() const {
    if (witness_count == 0) throw std::invalid_argument("predicate has no witness slots");
    if (equations.empty()) throw std::invalid_argument("predicate has no equations");
    for (const auto& eq : equations) {
        if (eq.bases.empty()) throw std::invalid_argument("equation has no bases");
        for (const auto& b : eq.bases) {
            if (b.slot >= witness_count) throw std::invalid_argument("witness slot out of range");
            if (b.base.group() != eq.target.group()) {
                throw std::invalid_argument("equation mixes groups");
            }
        }
    }
}

Bytes DpkPredicate::to_bytes() const {
    Bytes out;
    append_u32(out, static_cast<uint32_t>(witness_count));
    append_u32(out, static_cast<uint32_t>(equations.size()));
    for (const auto& eq : equations) {
        append_u8(out, static_cast<uint8_t>(eq.target.group()));
        append_framed(out, eq.target.to_bytes());
        append_u32(out, static_cast<uint32_t>(eq.bases.size()));
        for (const auto& b : eq.bases) {
            append_u32(out, static_cast<uint32_t>(b.slot));
            append_framed(out, b.base.to_bytes());
        }
    }
    return out;
}

DpkProverSession::DpkProverSession(const DpkPredicate& predicate,
                                   std::vector<Scalar> witness_shares, Rng& rng)
    : witness_(std::move(witness_shares)) {
    predicate.validate();
    if (witness_.size() != predicate.witness_count) {
        throw std::invalid_argument("witness share vector has wrong length");
    }
    nonces_.reserve(predicate.witness_count);
    for (size_t j = 0; j < predicate.witness_count; ++j) nonces_.push_back(random_scalar(rng));

    a_.reserve(predicate.equations.size());
    for (const auto& eq : predicate.equations) {
        GroupElement acc = GroupElement::identity(eq.target.group());
        for (const auto& b : eq.bases) acc = acc.op(b.base.pow(nonces_[b.slot]));
        a_.push_back(acc);
    }
}

std::vector<Scalar> DpkProverSession::respond(const Scalar& challenge) {
    if (responded_) throw std::runtime_error("sigma nonces already consumed for this proof");
    responded_ = true;
    std::vector<Scalar> z;
    z.reserve(witness_.size());
    for (size_t j = 0; j < witness_.size(); ++j) {
        z.push_back(sigma_response(nonces_[j], challenge, witness_[j]));
    }
    return z;
}

std::vector<GroupElement> dpk_combine_first(const DpkPredicate& predicate,
                                            std::span<const std::vector<GroupElement>> a_shares) {
    std::vector<GroupElement> combined;
    combined.reserve(predicate.equations.size());
    for (size_t i = 0; i < predicate.equations.size(); ++i) {
        GroupElement acc = GroupElement::identity(predicate.equations[i].target.group());
        for (const auto& per_party : a_shares) {
            if (per_party.size() != predicate.equations.size()) {
                throw std::invalid_argument("first-message vector has wrong length");
            }
            acc = acc.op(per_party[i]);
        }
        combined.push_back(acc);
    }
    return combined;
}

Scalar dpk_challenge(const DpkPredicate& predicate, const DpkContext& ctx,
                     std::span<const GroupElement> combined_a) {
    Bytes t;
    append_framed(t, ctx.protocol);
    append_framed(t, ctx.session_id);
    append_u64(t, ctx.statement_index);
    append_framed(t, predicate.to_bytes());
    append_u32(t, static_cast<uint32_t>(combined_a.size()));
    for (const auto& a : combined_a) append_framed(t, a.to_bytes());
    return hash_to_challenge("dpk", t);
}

bool dpk_verify(const DpkPredicate& predicate, const DpkContext& ctx,
                const DpkTranscript& transcript) {
    size_t m = transcript.a_shares.size();
    if (m == 0 || transcript.z_shares.size() != m) return false;
    size_t eqs = predicate.equations.size();
    for (size_t k = 0; k < m; ++k) {
        if (transcript.a_shares[k].size() != eqs) return false;
        if (transcript.z_shares[k].size() != predicate.witness_count) return false;
        for (size_t i = 0; i < eqs; ++i) {
            if (transcript.a_shares[k][i].group() != predicate.equations[i].target.group()) {
                return false;
            }
        }
    }

    std::vector<GroupElement> a = dpk_combine_first(predicate, transcript.a_shares);
    if (transcript.c != dpk_challenge(predicate, ctx, a)) return false;

    std::vector<Scalar> z(predicate.witness_count, Scalar::zero());
    for (size_t k = 0; k < m; ++k) {
        for (size_t j = 0; j < predicate.witness_count; ++j) {
            z[j] = z[j] + transcript.z_shares[k][j];
        }
    }
    for (size_t i = 0; i < eqs; ++i) {
        const auto& eq = predicate.equations[i];
        GroupElement rhs = eq.target.pow(transcript.c);
        for (const auto& b : eq.bases) rhs = rhs.op(b.base.pow(z[b.slot]));
        if (a[i] != rhs) return false;
    }
    return true;
}

Bytes DpkTranscript::to_bytes() const {
    Bytes out;
    append_u32(out, static_cast<uint32_t>(a_shares.size()));
    append_u32(out, a_shares.empty() ? 0 : static_cast<uint32_t>(a_shares[0].size()));
    append_u32(out, z_shares.empty() ? 0 : static_cast<uint32_t>(z_shares[0].size()));
    for (const auto& per_party : a_shares) {
        for (const auto& a : per_party) append_framed(out, a.to_bytes());
    }
    c.to_bytes(out);
    for (const auto& per_party : z_shares) {
        for (const auto& zv : per_party) zv.to_bytes(out);
    }
    return out;
}

std::optional<DpkTranscript> DpkTranscript::from_bytes(BytesView in) {
    try {
        ByteReader r(in);
        uint32_t m = r.read_u32();
        uint32_t eqs = r.read_u32();
        uint32_t slots = r.read_u32();
        if (m == 0 || m > 1024 || eqs > 1024 || slots > 1024) return std::nullopt;
        DpkTranscript t;
        t.a_shares.resize(m);
        for (uint32_t k = 0; k < m; ++k) {
            for (uint32_t i = 0; i < eqs; ++i) {
                auto g = GroupElement::from_bytes(r.read_framed());
                if (!g) return std::nullopt;
                t.a_shares[k].push_back(*g);
            }
        }
        auto c = Fr::from_bytes(r.read_raw(32));
        if (!c) return std::nullopt;
        t.c = *c;
        t.z_shares.resize(m);
        for (uint32_t k = 0; k < m; ++k) {
            for (uint32_t j = 0; j < slots; ++j) {
                auto z = Fr::from_bytes(r.read_raw(32));
                if (!z) return std::nullopt;
                t.z_shares[k].push_back(*z);
            }
        }
        if (!r.done()) return std::nullopt;
        return t;
    } catch (const std::runtime_error&) {
        return std::nullopt;
    }
}

}  // namespace tracemix
