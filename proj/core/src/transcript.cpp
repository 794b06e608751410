#include "tracemix/transcript.hpp"

#include <fstream>

namespace tracemix {

namespace {

constexpr char kMagic[4] = {'T', 'M', 'I', 'X'};

// ---- serialization helpers ----

void write_index_set(Bytes& out, const IndexSet& s) {
    append_u32(out, static_cast<uint32_t>(s.size()));
    for (size_t i : s) append_u64(out, i);
}

IndexSet read_index_set(ByteReader& r) {
    uint32_t count = r.read_u32();
    IndexSet s;
    for (uint32_t i = 0; i < count; ++i) s.insert(r.read_u64());
    return s;
}

void write_scalars(Bytes& out, const std::vector<Scalar>& v) {
    append_u32(out, static_cast<uint32_t>(v.size()));
    for (const Scalar& s : v) s.to_bytes(out);
}

std::vector<Scalar> read_scalars(ByteReader& r) {
    uint32_t count = r.read_u32();
    std::vector<Scalar> out;
    out.reserve(count);
    for (uint32_t i = 0; i < count; ++i) {
        auto s = Fr::from_bytes(r.read_raw(32));
        if (!s) throw std::runtime_error("bad scalar at byte offset " + std::to_string(r.offset()));
        out.push_back(*s);
    }
    return out;
}

template <typename G>
void write_points(Bytes& out, const std::vector<G>& v) {
    append_u32(out, static_cast<uint32_t>(v.size()));
    for (const G& p : v) p.to_bytes(out);
}

template <typename G>
std::vector<G> read_points(ByteReader& r) {
    uint32_t count = r.read_u32();
    std::vector<G> out;
    out.reserve(count);
    for (uint32_t i = 0; i < count; ++i) {
        auto p = G::from_bytes(r.read_raw(G{}.to_bytes().size()));
        if (!p) throw std::runtime_error("bad point at byte offset " + std::to_string(r.offset()));
        out.push_back(*p);
    }
    return out;
}

void write_dpks(Bytes& out, const std::vector<DpkRecord>& dpks) {
    append_u32(out, static_cast<uint32_t>(dpks.size()));
    for (const auto& d : dpks) {
        append_u64(out, d.index);
        append_u8(out, d.accepted ? 1 : 0);
        append_framed(out, d.transcript.to_bytes());
    }
}

std::vector<DpkRecord> read_dpks(ByteReader& r) {
    uint32_t count = r.read_u32();
    std::vector<DpkRecord> out;
    for (uint32_t i = 0; i < count; ++i) {
        DpkRecord d;
        d.index = r.read_u64();
        d.accepted = r.read_u8() != 0;
        auto t = DpkTranscript::from_bytes(r.read_framed());
        if (!t) {
            throw std::runtime_error("bad dpk transcript at byte offset " +
                                     std::to_string(r.offset()));
        }
        d.transcript = *t;
        out.push_back(std::move(d));
    }
    return out;
}

void write_sm_record(Bytes& out, const DbSmRecord& rec) {
    append_framed(out, rec.session_id);
    append_u8(out, rec.interleaved ? 1 : 0);
    rec.y.to_bytes(out);
    rec.y_partner.to_bytes(out);
    write_index_set(out, rec.I);
    write_index_set(out, rec.J);
    write_points(out, rec.sigma_prime);
    append_u32(out, static_cast<uint32_t>(rec.enc_sigma.size()));
    for (const auto& ct : rec.enc_sigma) append(out, ct.to_bytes());
    write_scalars(out, rec.enc_rand);
    write_points(out, rec.sigma_tilde);
    write_dpks(out, rec.dpks);
}

DbSmRecord read_sm_record(ByteReader& r) {
    DbSmRecord rec;
    rec.session_id = r.read_framed();
    rec.interleaved = r.read_u8() != 0;
    auto y = G2::from_bytes(r.read_raw(64));
    auto yp = G2::from_bytes(r.read_raw(64));
    if (!y || !yp) throw std::runtime_error("bad key at byte offset " + std::to_string(r.offset()));
    rec.y = *y;
    rec.y_partner = *yp;
    rec.I = read_index_set(r);
    rec.J = read_index_set(r);
    rec.sigma_prime = read_points<G1>(r);
    uint32_t encs = r.read_u32();
    for (uint32_t i = 0; i < encs; ++i) {
        auto ct = EgCiphertext::from_bytes(r.read_raw(64));
        if (!ct) {
            throw std::runtime_error("bad elgamal ciphertext at byte offset " +
                                     std::to_string(r.offset()));
        }
        rec.enc_sigma.push_back(*ct);
    }
    rec.enc_rand = read_scalars(r);
    rec.sigma_tilde = read_points<G1>(r);
    rec.dpks = read_dpks(r);
    return rec;
}

void write_mpz_vec(Bytes& out, const std::vector<mpz_class>& v) {
    append_u32(out, static_cast<uint32_t>(v.size()));
    for (const auto& x : v) {
        size_t width = (mpz_sizeinbase(x.get_mpz_t(), 2) + 7) / 8;
        append_framed(out, mpz_to_bytes_fixed(x, width));
    }
}

std::vector<mpz_class> read_mpz_vec(ByteReader& r) {
    uint32_t count = r.read_u32();
    std::vector<mpz_class> out;
    for (uint32_t i = 0; i < count; ++i) out.push_back(mpz_from_bytes(r.read_framed()));
    return out;
}

void write_pai_vec(Bytes& out, const PaillierPublicKey& pk,
                   const std::vector<PaillierCiphertext>& v) {
    append_u32(out, static_cast<uint32_t>(v.size()));
    for (const auto& ct : v) append(out, pai_ct_to_bytes(pk, ct));
}

std::vector<PaillierCiphertext> read_pai_vec(ByteReader& r, const PaillierPublicKey& pk) {
    uint32_t count = r.read_u32();
    std::vector<PaillierCiphertext> out;
    for (uint32_t i = 0; i < count; ++i) {
        auto ct = pai_ct_from_bytes(pk, r.read_raw(2 * pk.n_bytes));
        if (!ct) {
            throw std::runtime_error("bad paillier ciphertext at byte offset " +
                                     std::to_string(r.offset()));
        }
        out.push_back(*ct);
    }
    return out;
}

void write_rsm_record(Bytes& out, const PaillierPublicKey& pk, const DbRsmRecord& rec) {
    append_framed(out, rec.session_id);
    rec.y.to_bytes(out);
    write_index_set(out, rec.I);
    write_index_set(out, rec.J);
    write_points(out, rec.quasi_s);
    write_scalars(out, rec.quasi_c);
    write_scalars(out, rec.quasi_rhat);
    append_u32(out, static_cast<uint32_t>(rec.enc_s.size()));
    for (const auto& ct : rec.enc_s) append(out, ct.to_bytes());
    write_scalars(out, rec.enc_s_rand);
    write_pai_vec(out, pk, rec.enc_c);
    write_pai_vec(out, pk, rec.enc_rhat);
    write_mpz_vec(out, rec.enc_c_rand);
    write_mpz_vec(out, rec.enc_rhat_rand);
    write_points(out, rec.s_tilde);
    write_scalars(out, rec.c_tilde);
    write_scalars(out, rec.r_tilde);
    append_u32(out, static_cast<uint32_t>(rec.z1.size()));
    for (const auto& z : rec.z1) z.to_bytes(out);
    write_dpks(out, rec.dpks);
}

DbRsmRecord read_rsm_record(ByteReader& r, const PaillierPublicKey& pk) {
    DbRsmRecord rec;
    rec.session_id = r.read_framed();
    auto y = G2::from_bytes(r.read_raw(64));
    if (!y) throw std::runtime_error("bad key at byte offset " + std::to_string(r.offset()));
    rec.y = *y;
    rec.I = read_index_set(r);
    rec.J = read_index_set(r);
    rec.quasi_s = read_points<G1>(r);
    rec.quasi_c = read_scalars(r);
    rec.quasi_rhat = read_scalars(r);
    uint32_t encs = r.read_u32();
    for (uint32_t i = 0; i < encs; ++i) {
        auto ct = EgCiphertext::from_bytes(r.read_raw(64));
        if (!ct) {
            throw std::runtime_error("bad elgamal ciphertext at byte offset " +
                                     std::to_string(r.offset()));
        }
        rec.enc_s.push_back(*ct);
    }
    rec.enc_s_rand = read_scalars(r);
    rec.enc_c = read_pai_vec(r, pk);
    rec.enc_rhat = read_pai_vec(r, pk);
    rec.enc_c_rand = read_mpz_vec(r);
    rec.enc_rhat_rand = read_mpz_vec(r);
    rec.s_tilde = read_points<G1>(r);
    rec.c_tilde = read_scalars(r);
    rec.r_tilde = read_scalars(r);
    uint32_t z1s = r.read_u32();
    for (uint32_t i = 0; i < z1s; ++i) {
        auto z = Gt::from_bytes(r.read_raw(384));
        if (!z) {
            throw std::runtime_error("bad GT element at byte offset " + std::to_string(r.offset()));
        }
        rec.z1.push_back(*z);
    }
    rec.dpks = read_dpks(r);
    return rec;
}

// ---- offline verification ----

VerifyOutcome verify_sm_record(const SetupParams& params, const MixnetPublicKey& mpk,
                               const std::vector<Commitment>& gammas,
                               const std::vector<Scalar>& v_out, const DbSmRecord& rec,
                               const std::string& where) {
    size_t n = v_out.size();
    if (rec.sigma_prime.size() != n || rec.enc_sigma.size() != n || rec.enc_rand.size() != n ||
        rec.sigma_tilde.size() != n) {
        return VerifyOutcome::fail(where + ": published signature lists have wrong length");
    }
    for (size_t j = 0; j < n; ++j) {
        bool member = rec.J.count(j) != 0;
        if (member) {
            if (!bb_verify(params, rec.y, v_out[j], rec.sigma_prime[j])) {
                return VerifyOutcome::fail(where + ": signature check fails at output index " +
                                           std::to_string(j));
            }
        } else if (rec.interleaved) {
            if (!bb_verify(params, rec.y_partner, v_out[j], rec.sigma_prime[j])) {
                return VerifyOutcome::fail(where +
                                           ": complement signature check fails at output index " +
                                           std::to_string(j));
            }
        } else if (!(rec.sigma_prime[j] == fake_bb_signature(params))) {
            return VerifyOutcome::fail(where + ": fake-signature check fails at output index " +
                                       std::to_string(j));
        }
        EgCiphertext expect =
            eg_enc_with(params, mpk.eg_pk, rec.sigma_prime[j], rec.enc_rand[j]);
        if (!(expect.c0 == rec.enc_sigma[j].c0 && expect.c1 == rec.enc_sigma[j].c1)) {
            return VerifyOutcome::fail(where + ": encryption consistency fails at output index " +
                                       std::to_string(j));
        }
    }
    IndexSet verified;
    for (const auto& d : rec.dpks) {
        if (d.index >= n || !rec.I.count(d.index)) {
            return VerifyOutcome::fail(where + ": dpk record for an index outside I");
        }
        DpkPredicate pred = bb_membership_predicate(params, gammas[d.index].gamma,
                                                    rec.sigma_tilde[d.index], rec.y);
        DpkContext ctx{"db-sm", rec.session_id, d.index};
        bool ok = dpk_verify(pred, ctx, d.transcript);
        if (ok != d.accepted) {
            return VerifyOutcome::fail(where + ": recorded outcome mismatches dpk at index " +
                                       std::to_string(d.index));
        }
        if (ok) verified.insert(d.index);
    }
    if (rec.dpks.size() != rec.I.size()) {
        return VerifyOutcome::fail(where + ": missing dpk for a requested index");
    }
    return VerifyOutcome::pass();
}

VerifyOutcome verify_rsm_record(const SetupParams& params, const MixnetPublicKey& mpk,
                                const std::vector<Commitment>& gammas,
                                const std::vector<Scalar>& v_out, const DbRsmRecord& rec,
                                const std::string& where) {
    size_t n = v_out.size();
    if (rec.quasi_s.size() != n || rec.quasi_c.size() != n || rec.quasi_rhat.size() != n ||
        rec.s_tilde.size() != n || rec.c_tilde.size() != n || rec.r_tilde.size() != n) {
        return VerifyOutcome::fail(where + ": published lists have wrong length");
    }
    for (size_t i = 0; i < n; ++i) {
        if (rec.I.count(i)) {
            QuasiBBSPlusSignature quasi{rec.quasi_c[i], rec.quasi_rhat[i], rec.quasi_s[i]};
            if (!verq(params, quasi, gammas[i], rec.y)) {
                return VerifyOutcome::fail(where + ": quasi-signature check fails at input index " +
                                           std::to_string(i));
            }
        } else if (!(rec.quasi_s[i] == fake_quasi_s_component())) {
            return VerifyOutcome::fail(where + ": fake quasi-signature check fails at input index " +
                                       std::to_string(i));
        }
        EgCiphertext expect = eg_enc_with(params, mpk.eg_pk, rec.quasi_s[i], rec.enc_s_rand[i]);
        bool enc_ok = expect.c0 == rec.enc_s[i].c0 && expect.c1 == rec.enc_s[i].c1;
        enc_ok = enc_ok && pai_enc_with(mpk.pai_pk, scalar_to_mpz(rec.quasi_c[i]),
                                        rec.enc_c_rand[i]).c == rec.enc_c[i].c;
        enc_ok = enc_ok && pai_enc_with(mpk.pai_pk, scalar_to_mpz(rec.quasi_rhat[i]),
                                        rec.enc_rhat_rand[i]).c == rec.enc_rhat[i].c;
        if (!enc_ok) {
            return VerifyOutcome::fail(where + ": encryption consistency fails at input index " +
                                       std::to_string(i));
        }
    }
    if (rec.dpks.size() != rec.J.size() || rec.z1.size() != rec.dpks.size()) {
        return VerifyOutcome::fail(where + ": missing dpk for a requested index");
    }
    for (size_t t = 0; t < rec.dpks.size(); ++t) {
        const auto& d = rec.dpks[t];
        if (d.index >= n || !rec.J.count(d.index)) {
            return VerifyOutcome::fail(where + ": dpk record for an index outside J");
        }
        RsmPublicBases pub = rsm_public_bases(params, rec.y, v_out[d.index], rec.s_tilde[d.index],
                                              rec.c_tilde[d.index], rec.r_tilde[d.index],
                                              rec.z1[t]);
        DpkPredicate pred = bbsplus_membership_predicate(params, pub);
        DpkContext ctx{"db-rsm", rec.session_id, d.index};
        bool ok = dpk_verify(pred, ctx, d.transcript);
        if (ok != d.accepted) {
            return VerifyOutcome::fail(where + ": recorded outcome mismatches dpk at index " +
                                       std::to_string(d.index));
        }
    }
    return VerifyOutcome::pass();
}

IndexSet accepted_of(const std::vector<DpkRecord>& dpks) {
    IndexSet out;
    for (const auto& d : dpks) {
        if (d.accepted) out.insert(d.index);
    }
    return out;
}

}  // namespace

Bytes SessionTranscript::to_bytes() const {
    Bytes out;
    out.insert(out.end(), kMagic, kMagic + 4);
    append_u32(out, version);
    append_framed(out, setup_seed);
    append_u64(out, m);
    append_u64(out, n);
    append_framed(out, mpk.to_bytes());
    append_u32(out, static_cast<uint32_t>(ciphertexts.size()));
    for (const auto& ct : ciphertexts) append_framed(out, ct.to_bytes(mpk.pai_pk));
    write_scalars(out, v_out);
    append_u32(out, static_cast<uint32_t>(queries.size()));
    for (const auto& q : queries) {
        append_u8(out, static_cast<uint8_t>(q.kind));
        append_u8(out, q.aborted ? 1 : 0);
        append_u8(out, q.stage1_abort ? 1 : 0);
        append_framed(out, q.abort_reason);
        write_index_set(out, q.requested);
        write_index_set(out, q.accepted);
        write_index_set(out, q.accepted_complement);
        Bytes body;
        if (q.kind == QueryResult::Kind::TraceIn) {
            write_sm_record(body, q.sm_main);
            write_sm_record(body, q.sm_comp);
        } else {
            write_rsm_record(body, mpk.pai_pk, q.rsm_main);
            write_rsm_record(body, mpk.pai_pk, q.rsm_comp);
        }
        append_framed(out, body);
    }
    return out;
}

SessionTranscript SessionTranscript::from_bytes(BytesView in) {
    ByteReader r(in);
    Bytes magic = r.read_raw(4);
    if (!std::equal(magic.begin(), magic.end(), kMagic)) {
        throw std::runtime_error("not a transcript file (bad magic at byte offset 0)");
    }
    SessionTranscript t;
    t.version = r.read_u32();
    if (t.version != 1) {
        throw std::runtime_error("unsupported transcript version " + std::to_string(t.version));
    }
    t.setup_seed = r.read_framed();
    t.m = r.read_u64();
    t.n = r.read_u64();
    if (t.m == 0 || t.m > 4096 || t.n == 0 || t.n > (1u << 24)) {
        throw std::runtime_error("implausible transcript dimensions");
    }
    auto mpk = MixnetPublicKey::from_bytes(r.read_framed());
    if (!mpk) throw std::runtime_error("bad mixnet public key at byte offset " +
                                       std::to_string(r.offset()));
    t.mpk = *mpk;
    uint32_t cts = r.read_u32();
    for (uint32_t i = 0; i < cts; ++i) {
        auto ct = SenderCiphertext::from_bytes(t.mpk.pai_pk, t.m, r.read_framed());
        if (!ct) throw std::runtime_error("bad sender ciphertext at byte offset " +
                                          std::to_string(r.offset()));
        t.ciphertexts.push_back(*ct);
    }
    t.v_out = read_scalars(r);
    uint32_t queries = r.read_u32();
    for (uint32_t qi = 0; qi < queries; ++qi) {
        QueryResult q;
        uint8_t kind = r.read_u8();
        if (kind != 1 && kind != 2) {
            throw std::runtime_error("bad query kind at byte offset " + std::to_string(r.offset()));
        }
        q.kind = static_cast<QueryResult::Kind>(kind);
        q.aborted = r.read_u8() != 0;
        q.stage1_abort = r.read_u8() != 0;
        Bytes reason = r.read_framed();
        q.abort_reason.assign(reason.begin(), reason.end());
        q.requested = read_index_set(r);
        q.accepted = read_index_set(r);
        q.accepted_complement = read_index_set(r);
        Bytes body_bytes = r.read_framed();
        ByteReader body(body_bytes);
        // Body offsets are relative; re-raise with the query number.
        try {
            if (q.kind == QueryResult::Kind::TraceIn) {
                q.sm_main = read_sm_record(body);
                q.sm_comp = read_sm_record(body);
            } else {
                q.rsm_main = read_rsm_record(body, t.mpk.pai_pk);
                q.rsm_comp = read_rsm_record(body, t.mpk.pai_pk);
            }
            if (!body.done()) throw std::runtime_error("trailing bytes");
        } catch (const std::runtime_error& e) {
            throw std::runtime_error("query " + std::to_string(qi) + ": " + e.what());
        }
        t.queries.push_back(std::move(q));
    }
    if (!r.done()) throw std::runtime_error("trailing bytes after transcript");
    return t;
}

VerifyOutcome verify_transcript(const SessionTranscript& t) {
    SetupParams params = setup(t.setup_seed, t.m, t.n);
    if (t.ciphertexts.size() != t.n || t.v_out.size() != t.n) {
        return VerifyOutcome::fail("header: list lengths disagree with n");
    }
    std::vector<Commitment> gammas;
    for (size_t i = 0; i < t.n; ++i) {
        if (!verify_opening(params, t.ciphertexts[i].gamma, t.ciphertexts[i].rho_gamma)) {
            return VerifyOutcome::fail("ciphertext " + std::to_string(i) +
                                       ": opening proof fails");
        }
        gammas.push_back(t.ciphertexts[i].gamma);
    }

    for (size_t qi = 0; qi < t.queries.size(); ++qi) {
        const QueryResult& q = t.queries[qi];
        std::string where = "query " + std::to_string(qi);
        if (q.aborted || q.stage1_abort) {
            return VerifyOutcome::fail(where + ": session aborted (" + q.abort_reason + ")");
        }
        if (q.kind == QueryResult::Kind::TraceIn) {
            if (auto r = verify_sm_record(params, t.mpk, gammas, t.v_out, q.sm_main,
                                          where + " (trace-in main)");
                !r.ok) {
                return r;
            }
            if (auto r = verify_sm_record(params, t.mpk, gammas, t.v_out, q.sm_comp,
                                          where + " (trace-in complement)");
                !r.ok) {
                return r;
            }
            if (accepted_of(q.sm_main.dpks) != q.accepted ||
                accepted_of(q.sm_comp.dpks) != q.accepted_complement) {
                return VerifyOutcome::fail(where + ": accepted sets mismatch the dpk outcomes");
            }
        } else {
            if (auto r = verify_rsm_record(params, t.mpk, gammas, t.v_out, q.rsm_main,
                                           where + " (trace-out main)");
                !r.ok) {
                return r;
            }
            if (auto r = verify_rsm_record(params, t.mpk, gammas, t.v_out, q.rsm_comp,
                                           where + " (trace-out complement)");
                !r.ok) {
                return r;
            }
            if (accepted_of(q.rsm_main.dpks) != q.accepted ||
                accepted_of(q.rsm_comp.dpks) != q.accepted_complement) {
                return VerifyOutcome::fail(where + ": accepted sets mismatch the dpk outcomes");
            }
        }
        // The union-abort rule must hold for a non-aborted query.
        IndexSet unioned = q.accepted;
        unioned.insert(q.accepted_complement.begin(), q.accepted_complement.end());
        if (unioned != q.requested) {
            return VerifyOutcome::fail(where + ": accepted sets do not partition the request");
        }
    }
    return VerifyOutcome::pass();
}

void write_transcript_file(const std::string& path, const SessionTranscript& t) {
    Bytes data = t.to_bytes();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open transcript file for writing: " + path);
    out.write(reinterpret_cast<const char*>(data.data()), (std::streamsize)data.size());
    if (!out) throw std::runtime_error("short write to transcript file: " + path);
}

SessionTranscript read_transcript_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open transcript file: " + path);
    Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return SessionTranscript::from_bytes(data);
}

VerifyOutcome verify_transcript_file(const std::string& path) {
    try {
        SessionTranscript t = read_transcript_file(path);
        return verify_transcript(t);
    } catch (const std::runtime_error& e) {
        return VerifyOutcome::fail(std::string("parse error: ") + e.what());
    }
}

}  // namespace tracemix
