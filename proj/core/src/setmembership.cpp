#include "tracemix/setmembership.hpp"

#include "tracemix/parallel.hpp"

namespace tracemix {

namespace {

std::string server_role(size_t k) { return "server:" + std::to_string(k); }

Scalar flip(const Scalar& s) { return s + Scalar::from_u64(1); }

// Deferred bus traffic from parallel sections, flushed in index order.
struct PendingMessage {
    std::string phase, sender, recipient;
    Bytes payload;
};

void flush_messages(Bus& bus, std::vector<PendingMessage>& msgs) {
    for (auto& m : msgs) {
        if (m.recipient == "*") {
            bus.publish(m.phase, m.sender, m.payload);
        } else {
            bus.send(m.phase, m.sender, m.recipient, m.payload);
        }
    }
    msgs.clear();
}

// -------- generic DPK conduction --------

struct DpkRun {
    bool accepted = false;
    DpkTranscript transcript;
};

// prover_preds lets a tampered server prove against a substituted
// statement; honest verification always uses true_pred, whose hash also
// fixes the Fiat-Shamir challenge. Safe inside parallel sections: rngs
// must be per-call forks and messages go to the sink.
DpkRun conduct_dpk(const DpkPredicate& true_pred, const std::vector<DpkPredicate>& prover_preds,
                   const std::vector<std::vector<Scalar>>& witnesses, std::vector<Rng>& rngs,
                   const DpkContext& ctx, const TamperPlan& tamper,
                   const std::string& zshare_phase, size_t index, const std::string& a_phase,
                   const std::string& z_phase, std::vector<PendingMessage>& sink,
                   PhaseClock* clock, const std::string& phase_prefix) {
    size_t m = rngs.size();
    DpkRun run;
    std::vector<DpkProverSession> sessions;
    sessions.reserve(m);
    {
        PhaseScope prove(clock, phase_prefix + "dpk-prove", "server");
        for (size_t k = 0; k < m; ++k) {
            sessions.emplace_back(prover_preds[k], witnesses[k], rngs[k]);
            run.transcript.a_shares.push_back(sessions[k].first_messages());
            Bytes payload;
            for (const auto& a : sessions[k].first_messages()) append_framed(payload, a.to_bytes());
            sink.push_back({a_phase, server_role(k), "*", std::move(payload)});
        }
        std::vector<GroupElement> combined = dpk_combine_first(true_pred, run.transcript.a_shares);
        run.transcript.c = dpk_challenge(true_pred, ctx, combined);
        for (size_t k = 0; k < m; ++k) {
            std::vector<Scalar> z = sessions[k].respond(run.transcript.c);
            if (tamper.active(zshare_phase, k, index)) z[0] = flip(z[0]);
            Bytes payload;
            for (const Scalar& zv : z) zv.to_bytes(payload);
            // Responses go to the querier only: other provers never learn
            // whether the proof verified.
            sink.push_back({z_phase, server_role(k), "querier", std::move(payload)});
            run.transcript.z_shares.push_back(std::move(z));
        }
    }
    PhaseScope verify(clock, phase_prefix + "dpk-verify", "querier");
    run.accepted = dpk_verify(true_pred, ctx, run.transcript);
    return run;
}

// -------- DB-SM stage 1 --------

struct BbSigBundle {
    BBKeyPair key;
    std::vector<G1> sigs;
    std::vector<EgCiphertext> encs;
    std::vector<Scalar> rands;
};

// member(j) selects which output indices get real signatures; fake_key,
// when set, signs the non-members instead of the fixed fake element
// (the interleaved complement optimisation).
BbSigBundle bb_generate_signatures(const SetupParams& params, const G1& eg_pk,
                                   const std::vector<Scalar>& v_out,
                                   const std::function<bool(size_t)>& member, Rng& rng,
                                   const TamperPlan& tamper, const BBKeyPair* fake_key) {
    size_t n = v_out.size();
    BbSigBundle out;
    for (;;) {
        out.key = bb_keygen(params, rng);
        bool degenerate = false;
        for (size_t j = 0; j < n && !degenerate; ++j) {
            degenerate = (out.key.x + v_out[j]).is_zero() ||
                         (fake_key && (fake_key->x + v_out[j]).is_zero());
        }
        if (!degenerate) break;
    }
    out.sigs.assign(n, G1::infinity());
    out.rands.reserve(n);
    for (size_t j = 0; j < n; ++j) out.rands.push_back(random_scalar(rng));
    out.encs.assign(n, EgCiphertext{});
    parallel_for(n, [&](size_t j) {
        bool real = member(j) && !tamper.active("dbsm.fake-sig", 0, j);
        if (real) {
            out.sigs[j] = bb_sign(params, out.key, v_out[j]);
        } else if (fake_key) {
            out.sigs[j] = bb_sign(params, *fake_key, v_out[j]);
        } else {
            out.sigs[j] = fake_bb_signature(params);
        }
        out.encs[j] = eg_enc_with(params, eg_pk, out.sigs[j], out.rands[j]);
    });
    return out;
}

// Mix-server validation of the querier's published signatures, run before
// anything is shuffled: real members must verify, non-members must carry
// the fake element (or the partner key's signature when interleaved), and
// every encryption must reproduce from the revealed randomness. The check
// is deterministic and identical at every server, so the harness computes
// it once on behalf of all of them.
void bb_validate_signatures(const SetupParams& params, const G1& eg_pk,
                            const std::vector<Scalar>& v_out, const IndexSet& J, const G2& y,
                            const G2* partner_y, const BbSigBundle& bundle) {
    parallel_for(v_out.size(), [&](size_t j) {
        bool is_member = J.count(j) != 0;
        if (is_member) {
            if (!bb_verify(params, y, v_out[j], bundle.sigs[j])) {
                throw ProtocolAbort("db-sm: querier signature invalid at output index " +
                                    std::to_string(j));
            }
        } else if (partner_y) {
            if (!bb_verify(params, *partner_y, v_out[j], bundle.sigs[j])) {
                throw ProtocolAbort("db-sm: complement signature invalid at output index " +
                                    std::to_string(j));
            }
        } else if (!(bundle.sigs[j] == fake_bb_signature(params))) {
            throw ProtocolAbort("db-sm: non-member slot does not carry the fake signature at " +
                                std::to_string(j));
        }
        EgCiphertext expect = eg_enc_with(params, eg_pk, bundle.sigs[j], bundle.rands[j]);
        if (!(expect.c0 == bundle.encs[j].c0 && expect.c1 == bundle.encs[j].c1)) {
            throw ProtocolAbort("db-sm: published encryption inconsistent at output index " +
                                std::to_string(j));
        }
    });
}

struct SmStage1Out {
    std::vector<std::vector<Scalar>> b_shares;  // [server][input index]
    std::vector<G1> sigma_tilde;                // input order
};

// Reverse shuffle (servers m..1 with inverted permutations), homomorphic
// blinding and threshold decryption. Randomness is drawn sequentially per
// server; the group arithmetic runs in parallel across indices.
SmStage1Out sm_stage1(const SetupParams& params, const G1& eg_pk,
                      const std::vector<EgCiphertext>& enc_sigs,
                      std::vector<QueryServerInput>& servers, Bus& bus, const TamperPlan& tamper,
                      PhaseClock* clock) {
    size_t n = enc_sigs.size();
    size_t m = servers.size();

    std::vector<EgCiphertext> cur = enc_sigs;
    {
        PhaseScope scope(clock, "dbsm/shuffle", "server");
        for (size_t k = m; k-- > 0;) {
            std::vector<size_t> inv = invert_permutation(servers[k].perm);
            std::vector<Scalar> rho;
            rho.reserve(n);
            for (size_t i = 0; i < n; ++i) rho.push_back(random_scalar(*servers[k].rng));
            std::vector<EgCiphertext> next(n);
            parallel_for(n, [&](size_t j) {
                const EgCiphertext& src = cur[inv[j]];
                next[j] = {src.c0 + params.g1 * rho[j], src.c1 + eg_pk * rho[j]};
            });
            cur = std::move(next);
            Bytes payload;
            for (const auto& ct : cur) append(payload, ct.to_bytes());
            bus.publish("dbsm.shuffle", server_role(k), payload);
        }
    }

    SmStage1Out out;
    out.b_shares.assign(m, std::vector<Scalar>());
    std::vector<std::vector<EgCiphertext>> blinded(m, std::vector<EgCiphertext>(n));
    {
        PhaseScope scope(clock, "dbsm/blinding", "server");
        for (size_t k = 0; k < m; ++k) {
            std::vector<Scalar> rho;
            rho.reserve(n);
            for (size_t i = 0; i < n; ++i) {
                out.b_shares[k].push_back(random_scalar(*servers[k].rng));
                rho.push_back(random_scalar(*servers[k].rng));
            }
            parallel_for(n, [&](size_t i) {
                EgCiphertext powed = eg_exp(cur[i], out.b_shares[k][i]);
                blinded[k][i] = {powed.c0 + params.g1 * rho[i], powed.c1 + eg_pk * rho[i]};
            });
            Bytes payload;
            for (const auto& ct : blinded[k]) append(payload, ct.to_bytes());
            bus.publish("dbsm.blind", server_role(k), payload);
        }
    }

    PhaseScope scope(clock, "dbsm/decryption", "server");
    out.sigma_tilde.assign(n, G1::infinity());
    parallel_for(n, [&](size_t i) {
        EgCiphertext acc = blinded[0][i];
        for (size_t k = 1; k < m; ++k) acc = eg_mul(acc, blinded[k][i]);
        std::vector<G1> shares;
        shares.reserve(m);
        for (size_t k = 0; k < m; ++k) shares.push_back(eg_dec_share(acc, servers[k].eg_sk));
        G1 st = eg_tdec_combine(acc, shares, m);
        for (size_t k = 0; k < m; ++k) {
            if (tamper.active("dbsm.sigma-tilde", k, i)) st = st + params.g1;
        }
        out.sigma_tilde[i] = st;
    });
    Bytes tdec_payload;
    for (const G1& st : out.sigma_tilde) st.to_bytes(tdec_payload);
    bus.publish("dbsm.tdec", "server:0", tdec_payload);
    return out;
}

// Stage 2 of DB-SM for one key: a DPK of p_BB per requested index, all
// indices independent and processed in parallel with per-index rng forks.
IndexSet sm_stage2(const SetupParams& params, const std::vector<Commitment>& gammas,
                   const SmStage1Out& st1, const IndexSet& I, const G2& y,
                   std::vector<QueryServerInput>& servers, Bus& bus, const TamperPlan& tamper,
                   const Bytes& session_id, std::vector<DpkRecord>& dpk_records,
                   PhaseClock* clock) {
    size_t m = servers.size();
    std::vector<size_t> order(I.begin(), I.end());
    std::vector<DpkRun> runs(order.size());
    std::vector<std::vector<PendingMessage>> sinks(order.size());

    parallel_for(order.size(), [&](size_t t) {
        size_t i = order[t];
        DpkPredicate pred =
            bb_membership_predicate(params, gammas[i].gamma, st1.sigma_tilde[i], y);
        std::vector<DpkPredicate> prover_preds;
        std::vector<std::vector<Scalar>> witnesses;
        std::vector<Rng> rngs;
        for (size_t k = 0; k < m; ++k) {
            Scalar v = servers[k].v_shares[i];
            Scalar r = servers[k].r_shares[i];
            Scalar b = st1.b_shares[k][i];
            if (tamper.active("dbsm.vshare", k, i)) v = flip(v);
            if (tamper.active("dbsm.bshare", k, i)) b = flip(b);
            witnesses.push_back({v, r, b});
            if (tamper.active("dbsm.statement", k, i)) {
                prover_preds.push_back(bb_membership_predicate(
                    params, gammas[i].gamma, st1.sigma_tilde[i] + params.g1, y));
            } else {
                prover_preds.push_back(pred);
            }
            rngs.push_back(servers[k].rng->fork("dbsm-dpk", i));
        }
        DpkContext ctx{"db-sm", session_id, i};
        runs[t] = conduct_dpk(pred, prover_preds, witnesses, rngs, ctx, tamper, "dbsm.zshare", i,
                              "dbsm.dpk.a", "dbsm.dpk.z", sinks[t], clock, "dbsm/");
    });

    IndexSet accepted;
    for (size_t t = 0; t < order.size(); ++t) {
        flush_messages(bus, sinks[t]);
        if (runs[t].accepted) accepted.insert(order[t]);
        dpk_records.push_back({order[t], runs[t].accepted, std::move(runs[t].transcript)});
    }
    return accepted;
}

void check_query_inputs(const std::vector<Scalar>& v_out, const IndexSet& I, const IndexSet& J,
                        const std::vector<QueryServerInput>& servers, size_t n) {
    if (v_out.size() != n) throw ProtocolError("query: list length mismatch");
    if (servers.empty()) throw ProtocolError("query: no mix-servers");
    for (size_t i : I) {
        if (i >= n) throw ProtocolError("query: I contains an out-of-range index");
    }
    for (size_t j : J) {
        if (j >= n) throw ProtocolError("query: J contains an out-of-range index");
    }
    for (const auto& s : servers) {
        if (s.perm.size() != n || s.v_shares.size() != n || s.r_shares.size() != n) {
            throw ProtocolError("query: server witness has wrong length");
        }
        if (s.rng == nullptr) throw ProtocolError("query: server rng missing");
    }
}

}  // namespace

IndexSet complement_set(const IndexSet& s, size_t n) {
    IndexSet out;
    for (size_t i = 0; i < n; ++i) {
        if (!s.count(i)) out.insert(i);
    }
    return out;
}

DpkPredicate bb_membership_predicate(const SetupParams& params, const G1& gamma,
                                     const G1& sigma_tilde, const G2& y) {
    // slots: 0 = v, 1 = r, 2 = b
    DpkPredicate pred;
    pred.witness_count = 3;

    DpkEquation commit_eq;
    commit_eq.target = GroupElement(gamma);
    commit_eq.bases.push_back({GroupElement(params.g1), 0});
    commit_eq.bases.push_back({GroupElement(params.h1), 1});
    pred.equations.push_back(std::move(commit_eq));

    DpkEquation sig_eq;
    sig_eq.target = GroupElement(pairing(sigma_tilde, y));
    sig_eq.bases.push_back({GroupElement(params.e_g1_g2), 2});
    // e(st, g2)^{-v}, with the inversion folded into the base.
    sig_eq.bases.push_back({GroupElement(pairing(sigma_tilde, params.g2).inverse()), 0});
    pred.equations.push_back(std::move(sig_eq));
    return pred;
}

RsmPublicBases rsm_public_bases(const SetupParams& params, const G2& y, const Scalar& v,
                                const G1& s_tilde, const Scalar& c_tilde, const Scalar& r_tilde,
                                const Gt& z1) {
    RsmPublicBases pub;
    pub.z1 = z1;
    G2 y_fc = y + params.f2 * c_tilde;
    G1 base = params.f1 + params.g1 * v + params.h1 * r_tilde;
    pub.z2 = pairing(s_tilde, y_fc) * pairing(base, params.f2).inverse();
    pub.g1e = pairing(s_tilde, params.f2);
    pub.g2e = pairing(params.g1, y_fc);
    return pub;
}

DpkPredicate bbsplus_membership_predicate(const SetupParams& params, const RsmPublicBases& pub) {
    // slots: 0 = bS, 1 = bc, 2 = br, 3 = d0, 4 = d1, 5 = d2
    const Gt& h1e = params.e_h1_f2_inv;
    const Gt& h2e = params.e_g1_f2_inv;
    const Gt& h3e = params.fT;

    DpkPredicate pred;
    pred.witness_count = 6;

    DpkEquation open_eq;  // z1 = h2^bS h3^d0
    open_eq.target = GroupElement(pub.z1);
    open_eq.bases.push_back({GroupElement(h2e), 0});
    open_eq.bases.push_back({GroupElement(h3e), 3});
    pred.equations.push_back(std::move(open_eq));

    DpkEquation product_eq;  // 1 = z1^{-bc} h2^d1 h3^d2
    product_eq.target = GroupElement(Gt::one());
    product_eq.bases.push_back({GroupElement(pub.z1.inverse()), 1});
    product_eq.bases.push_back({GroupElement(h2e), 4});
    product_eq.bases.push_back({GroupElement(h3e), 5});
    pred.equations.push_back(std::move(product_eq));

    DpkEquation verify_eq;  // z2 = g1e^bc g2e^bS h1e^br h2^d1
    verify_eq.target = GroupElement(pub.z2);
    verify_eq.bases.push_back({GroupElement(pub.g1e), 1});
    verify_eq.bases.push_back({GroupElement(pub.g2e), 0});
    verify_eq.bases.push_back({GroupElement(h1e), 2});
    verify_eq.bases.push_back({GroupElement(h2e), 4});
    pred.equations.push_back(std::move(verify_eq));
    return pred;
}

IndexSet db_sm(const SetupParams& params, const G1& eg_pk, const std::vector<Commitment>& gammas,
               const std::vector<Scalar>& v_out, const IndexSet& I, const IndexSet& J,
               std::vector<QueryServerInput>& servers, Rng& querier_rng, Bus& bus,
               const TamperPlan& tamper, const Bytes& session_id, DbSmRecord* record,
               DbSmWhiteBox* whitebox, PhaseClock* clock) {
    size_t n = gammas.size();
    check_query_inputs(v_out, I, J, servers, n);

    BbSigBundle bundle;
    {
        PhaseScope scope(clock, "dbsm/signing", "querier");
        bundle = bb_generate_signatures(
            params, eg_pk, v_out, [&](size_t j) { return J.count(j) != 0; }, querier_rng, tamper,
            nullptr);
    }
    Bytes siggen;
    bundle.key.y.to_bytes(siggen);
    for (const auto& s : bundle.sigs) s.to_bytes(siggen);
    bus.publish("dbsm.siggen", "querier", siggen);

    {
        PhaseScope scope(clock, "dbsm/verifying", "server");
        bb_validate_signatures(params, eg_pk, v_out, J, bundle.key.y, nullptr, bundle);
    }

    SmStage1Out st1 = sm_stage1(params, eg_pk, bundle.encs, servers, bus, tamper, clock);

    if (record) {
        record->I = I;
        record->J = J;
        record->session_id = session_id;
        record->y = bundle.key.y;
        record->sigma_prime = bundle.sigs;
        record->enc_sigma = bundle.encs;
        record->enc_rand = bundle.rands;
        record->sigma_tilde = st1.sigma_tilde;
    }
    if (whitebox) {
        whitebox->b_shares = st1.b_shares;
        whitebox->querier_key = bundle.key;
    }

    std::vector<DpkRecord> dpks;
    IndexSet accepted = sm_stage2(params, gammas, st1, I, bundle.key.y, servers, bus, tamper,
                                  session_id, dpks, clock);
    if (record) record->dpks = std::move(dpks);
    return accepted;
}

std::pair<IndexSet, IndexSet> db_sm_interleaved(
    const SetupParams& params, const G1& eg_pk, const std::vector<Commitment>& gammas,
    const std::vector<Scalar>& v_out, const IndexSet& I, const IndexSet& J,
    std::vector<QueryServerInput>& servers, Rng& querier_rng, Bus& bus,
    const TamperPlan& tamper, const Bytes& session_id, DbSmRecord* record_main,
    DbSmRecord* record_comp) {
    size_t n = gammas.size();
    check_query_inputs(v_out, I, J, servers, n);
    IndexSet Jc = complement_set(J, n);

    // One signature list: key x signs J, key x_c signs the complement.
    BBKeyPair comp_key = bb_keygen(params, querier_rng);
    BbSigBundle bundle = bb_generate_signatures(
        params, eg_pk, v_out, [&](size_t j) { return J.count(j) != 0; }, querier_rng, tamper,
        &comp_key);
    Bytes siggen;
    bundle.key.y.to_bytes(siggen);
    comp_key.y.to_bytes(siggen);
    for (const auto& s : bundle.sigs) s.to_bytes(siggen);
    bus.publish("dbsm.siggen", "querier", siggen);

    bb_validate_signatures(params, eg_pk, v_out, J, bundle.key.y, &comp_key.y, bundle);

    SmStage1Out st1 = sm_stage1(params, eg_pk, bundle.encs, servers, bus, tamper, nullptr);

    Bytes main_sid = session_id;
    append_framed(main_sid, std::string("interleaved-main"));
    Bytes comp_sid = session_id;
    append_framed(comp_sid, std::string("interleaved-comp"));

    auto fill_record = [&](DbSmRecord* rec, const IndexSet& jset, const G2& y, const G2& other,
                           const Bytes& sid) {
        if (!rec) return;
        rec->I = I;
        rec->J = jset;
        rec->session_id = sid;
        rec->interleaved = true;
        rec->y = y;
        rec->y_partner = other;
        rec->sigma_prime = bundle.sigs;
        rec->enc_sigma = bundle.encs;
        rec->enc_rand = bundle.rands;
        rec->sigma_tilde = st1.sigma_tilde;
    };
    fill_record(record_main, J, bundle.key.y, comp_key.y, main_sid);
    fill_record(record_comp, Jc, comp_key.y, bundle.key.y, comp_sid);

    std::vector<DpkRecord> dpks_main, dpks_comp;
    IndexSet acc_main = sm_stage2(params, gammas, st1, I, bundle.key.y, servers, bus, tamper,
                                  main_sid, dpks_main, nullptr);
    IndexSet acc_comp = sm_stage2(params, gammas, st1, I, comp_key.y, servers, bus, tamper,
                                  comp_sid, dpks_comp, nullptr);
    if (record_main) record_main->dpks = std::move(dpks_main);
    if (record_comp) record_comp->dpks = std::move(dpks_comp);
    return {acc_main, acc_comp};
}

IndexSet db_rsm(const SetupParams& params, const G1& eg_pk, const PaillierPublicKey& pai_pk,
                const std::vector<Commitment>& gammas,
                const std::vector<OpeningProof>& rho_gammas,
                const std::vector<PaillierCiphertext>& eps_r, const std::vector<Scalar>& v_out,
                const IndexSet& I, const IndexSet& J, std::vector<QueryServerInput>& servers,
                Rng& querier_rng, Bus& bus, const TamperPlan& tamper, const Bytes& session_id,
                DbRsmRecord* record, DbRsmWhiteBox* whitebox, PhaseClock* clock) {
    size_t n = gammas.size();
    size_t m = servers.size();
    check_query_inputs(v_out, I, J, servers, n);
    if (rho_gammas.size() != n || eps_r.size() != n) {
        throw ProtocolError("db-rsm: common input lists have mismatched lengths");
    }
    const mpz_class& q = scalar_modulus();
    // All homomorphic sums stay below (m+2) q^2; they must fit under N.
    if (mpz_class((m + 2) * q * q) >= pai_pk.n) {
        throw ProtocolError("db-rsm: modulus too small for padded blinding");
    }

    // --- Stage 1: quasi-signature generation by the querier ---
    PhaseScope sign_scope(clock, "dbrsm/signing", "querier");
    for (size_t i : I) {
        if (!verify_opening(params, gammas[i], rho_gammas[i])) {
            throw ProtocolAbort("db-rsm: opening proof invalid at input index " +
                                std::to_string(i));
        }
    }
    BBSPlusKeyPair key = bbsplus_keygen(params, querier_rng);
    std::vector<G1> s_list(n);
    std::vector<Scalar> c_list(n), rhat_list(n);
    std::vector<EgCiphertext> enc_s(n);
    std::vector<Scalar> enc_s_rand(n);
    std::vector<PaillierCiphertext> enc_c(n), enc_rhat(n);
    std::vector<mpz_class> enc_c_rand(n), enc_rhat_rand(n);
    for (size_t i = 0; i < n; ++i) {
        Scalar c = random_scalar(querier_rng);
        while ((c + key.x).is_zero()) c = random_scalar(querier_rng);
        c_list[i] = c;
        rhat_list[i] = random_scalar(querier_rng);
        enc_s_rand[i] = random_scalar(querier_rng);
        enc_c_rand[i] = pai_random_rho(querier_rng);
        enc_rhat_rand[i] = pai_random_rho(querier_rng);
    }
    parallel_for(n, [&](size_t i) {
        bool real = I.count(i) != 0 && !tamper.active("dbrsm.fake-quasi", 0, i);
        if (real) {
            G1 base = params.f1 + params.h1 * rhat_list[i] + gammas[i].gamma;
            s_list[i] = base * (c_list[i] + key.x).inverse();
        } else {
            s_list[i] = fake_quasi_s_component();
        }
        enc_s[i] = eg_enc_with(params, eg_pk, s_list[i], enc_s_rand[i]);
        enc_c[i] = pai_enc_with(pai_pk, scalar_to_mpz(c_list[i]), enc_c_rand[i]);
        enc_rhat[i] = pai_enc_with(pai_pk, scalar_to_mpz(rhat_list[i]), enc_rhat_rand[i]);
    });
    Bytes siggen;
    key.y.to_bytes(siggen);
    for (size_t i = 0; i < n; ++i) s_list[i].to_bytes(siggen);
    bus.publish("dbrsm.siggen", "querier", siggen);
    sign_scope.stop();

    // --- Mix-server validation of the querier's stage-1 output (one
    // deterministic pass on behalf of all servers) ---
    PhaseScope verify_scope(clock, "dbrsm/verifying", "server");
    parallel_for(n, [&](size_t i) {
        if (I.count(i)) {
            QuasiBBSPlusSignature quasi{c_list[i], rhat_list[i], s_list[i]};
            if (!verq(params, quasi, gammas[i], key.y)) {
                throw ProtocolAbort("db-rsm: quasi-signature invalid at input index " +
                                    std::to_string(i));
            }
        } else if (!(s_list[i] == fake_quasi_s_component())) {
            throw ProtocolAbort("db-rsm: non-member slot is not the fake quasi-signature at " +
                                std::to_string(i));
        }
        EgCiphertext es = eg_enc_with(params, eg_pk, s_list[i], enc_s_rand[i]);
        bool enc_ok =
            es.c0 == enc_s[i].c0 && es.c1 == enc_s[i].c1 &&
            pai_enc_with(pai_pk, scalar_to_mpz(c_list[i]), enc_c_rand[i]).c == enc_c[i].c &&
            pai_enc_with(pai_pk, scalar_to_mpz(rhat_list[i]), enc_rhat_rand[i]).c ==
                enc_rhat[i].c;
        if (!enc_ok) {
            throw ProtocolAbort("db-rsm: published encryption inconsistent at input index " +
                                std::to_string(i));
        }
    });
    verify_scope.stop();

    // Homomorphic addition of the commitment randomness: enc(rhat + r).
    std::vector<PaillierCiphertext> enc_rr(n);
    for (size_t i = 0; i < n; ++i) enc_rr[i] = pai_add(pai_pk, enc_rhat[i], eps_r[i]);
    {
        Bytes payload;
        for (const auto& ct : enc_rr) append(payload, pai_ct_to_bytes(pai_pk, ct));
        bus.publish("dbrsm.radd", "server:0", payload);
    }

    // --- Forward triple shuffle (parties 1..m with their Mix permutations) ---
    PhaseScope shuffle_scope(clock, "dbrsm/shuffle", "server");
    std::vector<EgCiphertext> cur_s = enc_s;
    std::vector<PaillierCiphertext> cur_c = enc_c, cur_r = enc_rr;
    for (size_t k = 0; k < m; ++k) {
        const auto& perm = servers[k].perm;
        validate_permutation(perm, n);
        std::vector<Scalar> rho_s(n);
        std::vector<mpz_class> rho_c(n), rho_r(n);
        for (size_t j = 0; j < n; ++j) {
            rho_s[j] = random_scalar(*servers[k].rng);
            rho_c[j] = pai_random_rho(*servers[k].rng);
            rho_r[j] = pai_random_rho(*servers[k].rng);
        }
        std::vector<EgCiphertext> next_s(n);
        std::vector<PaillierCiphertext> next_c(n), next_r(n);
        parallel_for(n, [&](size_t j) {
            const EgCiphertext& src = cur_s[perm[j]];
            next_s[j] = {src.c0 + params.g1 * rho_s[j], src.c1 + eg_pk * rho_s[j]};
            next_c[j] = pai_add(pai_pk, cur_c[perm[j]], pai_enc_with(pai_pk, 0, rho_c[j]));
            next_r[j] = pai_add(pai_pk, cur_r[perm[j]], pai_enc_with(pai_pk, 0, rho_r[j]));
        });
        cur_s = std::move(next_s);
        cur_c = std::move(next_c);
        cur_r = std::move(next_r);
        Bytes payload;
        for (const auto& ct : cur_s) append(payload, ct.to_bytes());
        for (const auto& ct : cur_c) append(payload, pai_ct_to_bytes(pai_pk, ct));
        for (const auto& ct : cur_r) append(payload, pai_ct_to_bytes(pai_pk, ct));
        bus.publish("dbrsm.shuffle", server_role(k), payload);
    }
    shuffle_scope.stop();

    // --- Homomorphic blinding with mod-q pads ---
    PhaseScope blind_scope(clock, "dbrsm/blinding", "server");
    std::vector<std::vector<Scalar>> bs(m), bc(m), br(m);
    for (size_t k = 0; k < m; ++k) {
        std::vector<Scalar> rho_s(n);
        std::vector<mpz_class> pad_c(n), pad_r(n), rho_c(n), rho_r(n);
        for (size_t j = 0; j < n; ++j) {
            bs[k].push_back(random_scalar(*servers[k].rng));
            bc[k].push_back(random_scalar(*servers[k].rng));
            br[k].push_back(random_scalar(*servers[k].rng));
            mpz_class chi_c = random_mpz_below(q - 1, *servers[k].rng);
            mpz_class chi_r = random_mpz_below(q - 1, *servers[k].rng);
            pad_c[j] = scalar_to_mpz(bc[k][j]) + q * chi_c;
            pad_r[j] = scalar_to_mpz(br[k][j]) + q * chi_r;
            rho_s[j] = random_scalar(*servers[k].rng);
            rho_c[j] = pai_random_rho(*servers[k].rng);
            rho_r[j] = pai_random_rho(*servers[k].rng);
        }
        std::vector<Bytes> chunks(n);
        parallel_for(n, [&](size_t j) {
            EgCiphertext ebs = eg_enc_with(params, eg_pk, params.g1 * bs[k][j], rho_s[j]);
            PaillierCiphertext ebc = pai_enc_with(pai_pk, pad_c[j], rho_c[j]);
            PaillierCiphertext ebr = pai_enc_with(pai_pk, pad_r[j], rho_r[j]);
            cur_s[j] = eg_mul(cur_s[j], ebs);
            cur_c[j] = pai_add(pai_pk, cur_c[j], ebc);
            cur_r[j] = pai_add(pai_pk, cur_r[j], ebr);
            Bytes chunk;
            append(chunk, ebs.to_bytes());
            append(chunk, pai_ct_to_bytes(pai_pk, ebc));
            append(chunk, pai_ct_to_bytes(pai_pk, ebr));
            chunks[j] = std::move(chunk);
        });
        Bytes payload;
        for (const auto& chunk : chunks) append(payload, chunk);
        bus.publish("dbrsm.blind", server_role(k), payload);
    }
    blind_scope.stop();

    // --- Threshold decryption and mod-q reduction ---
    PhaseScope tdec_scope(clock, "dbrsm/decryption", "server");
    std::vector<G1> s_tilde(n);
    std::vector<Scalar> c_tilde(n), r_tilde(n);
    mpz_class wrap_bound = mpz_class(m + 2) * q * q;
    parallel_for(n, [&](size_t j) {
        std::vector<G1> eg_shares;
        for (size_t k = 0; k < m; ++k) eg_shares.push_back(eg_dec_share(cur_s[j], servers[k].eg_sk));
        s_tilde[j] = eg_tdec_combine(cur_s[j], eg_shares, m);

        auto tdec_int = [&](const PaillierCiphertext& ct) {
            std::vector<mpz_class> shares;
            for (size_t k = 0; k < m; ++k) {
                shares.push_back(pai_dec_share(pai_pk, ct, *servers[k].pai_sk));
            }
            return pai_tdec_combine(pai_pk, shares, m);
        };
        mpz_class c_int = tdec_int(cur_c[j]);
        mpz_class r_int = tdec_int(cur_r[j]);
        if (c_int >= wrap_bound || r_int >= wrap_bound) {
            throw ProtocolError("db-rsm: homomorphic sum escaped the no-wraparound bound");
        }
        c_tilde[j] = mpz_to_scalar(c_int);
        r_tilde[j] = mpz_to_scalar(r_int);
        for (size_t k = 0; k < m; ++k) {
            if (tamper.active("dbrsm.rtilde", k, j)) r_tilde[j] = flip(r_tilde[j]);
        }
    });
    Bytes tdec_payload;
    for (size_t j = 0; j < n; ++j) {
        s_tilde[j].to_bytes(tdec_payload);
        c_tilde[j].to_bytes(tdec_payload);
        r_tilde[j].to_bytes(tdec_payload);
    }
    bus.publish("dbrsm.tdec", "server:0", tdec_payload);
    tdec_scope.stop();

    if (record) {
        record->I = I;
        record->J = J;
        record->session_id = session_id;
        record->y = key.y;
        record->quasi_s = s_list;
        record->quasi_c = c_list;
        record->quasi_rhat = rhat_list;
        record->enc_s = enc_s;
        record->enc_s_rand = enc_s_rand;
        record->enc_c = enc_c;
        record->enc_rhat = enc_rhat;
        record->enc_c_rand = enc_c_rand;
        record->enc_rhat_rand = enc_rhat_rand;
        record->s_tilde = s_tilde;
        record->c_tilde = c_tilde;
        record->r_tilde = r_tilde;
    }
    if (whitebox) {
        whitebox->bs_shares = bs;
        whitebox->bc_shares = bc;
        whitebox->br_shares = br;
        whitebox->querier_key = key;
    }

    // --- Stage 2: one DPK of p_BBS+ per requested output index ---
    // Sequential pre-pass consumes the stateful resources (Beaver triples);
    // the per-index proofs then run in parallel on rng forks.
    std::vector<size_t> order(J.begin(), J.end());
    struct IndexJob {
        std::vector<BeaverTriple> t1, t2;  // per server
    };
    std::vector<IndexJob> jobs(order.size());
    for (size_t t = 0; t < order.size(); ++t) {
        for (size_t k = 0; k < m; ++k) {
            if (!servers[k].triples) throw ProtocolError("db-rsm: missing beaver triples");
            jobs[t].t1.push_back(servers[k].triples->take());
            jobs[t].t2.push_back(servers[k].triples->take());
        }
    }

    struct IndexResult {
        DpkRun run;
        Gt z1;
        std::vector<Scalar> d0, d1, d2;
        std::vector<PendingMessage> msgs;
    };
    std::vector<IndexResult> results(order.size());

    parallel_for(order.size(), [&](size_t t) {
        size_t j = order[t];
        IndexResult& res = results[t];
        std::vector<Rng> rngs;
        for (size_t k = 0; k < m; ++k) rngs.push_back(servers[k].rng->fork("dbrsm-dpk", j));

        PhaseScope mult_scope(clock, "dbrsm/dpk-prove", "server");
        res.d0.resize(m);
        for (size_t k = 0; k < m; ++k) res.d0[k] = random_scalar(rngs[k]);

        std::vector<Scalar> bs_j(m), bc_j(m), br_j(m);
        for (size_t k = 0; k < m; ++k) {
            bs_j[k] = bs[k][j];
            bc_j[k] = bc[k][j];
            br_j[k] = br[k][j];
        }
        auto beaver = [&](const std::vector<Scalar>& xs, const std::vector<Scalar>& ys,
                          const std::vector<BeaverTriple>& ts) {
            Scalar d = Scalar::zero(), e = Scalar::zero();
            Bytes payload;
            std::vector<MultOpening> opens;
            for (size_t k = 0; k < m; ++k) {
                opens.push_back(mult_open(xs[k], ys[k], ts[k]));
                d = d + opens[k].d;
                e = e + opens[k].e;
                opens[k].d.to_bytes(payload);
                opens[k].e.to_bytes(payload);
            }
            res.msgs.push_back({"dbrsm.beaver", "server:0", "*", std::move(payload)});
            std::vector<Scalar> z(m);
            for (size_t k = 0; k < m; ++k) z[k] = mult_finish(k, ts[k], d, e);
            return z;
        };
        res.d1 = beaver(bs_j, bc_j, jobs[t].t1);
        res.d2 = beaver(res.d0, bc_j, jobs[t].t2);

        Gt z1 = Gt::one();
        Bytes z1_payload;
        for (size_t k = 0; k < m; ++k) {
            Gt share = params.e_g1_f2_inv.pow(bs_j[k]) * params.fT.pow(res.d0[k]);
            z1 = z1 * share;
            share.to_bytes(z1_payload);
        }
        res.z1 = z1;
        res.msgs.push_back({"dbrsm.z1share", "server:0", "*", std::move(z1_payload)});
        mult_scope.stop();

        RsmPublicBases pub =
            rsm_public_bases(params, key.y, v_out[j], s_tilde[j], c_tilde[j], r_tilde[j], z1);
        DpkPredicate pred = bbsplus_membership_predicate(params, pub);

        std::vector<std::vector<Scalar>> witnesses;
        std::vector<DpkPredicate> prover_preds(m, pred);
        for (size_t k = 0; k < m; ++k) {
            Scalar bck = bc_j[k];
            if (tamper.active("dbrsm.bcshare", k, j)) bck = flip(bck);
            witnesses.push_back({bs_j[k], bck, br_j[k], res.d0[k], res.d1[k], res.d2[k]});
        }
        DpkContext ctx{"db-rsm", session_id, j};
        res.run = conduct_dpk(pred, prover_preds, witnesses, rngs, ctx, tamper, "dbrsm.zshare",
                              j, "dbrsm.dpk.a", "dbrsm.dpk.z", res.msgs, clock, "dbrsm/");
    });

    IndexSet accepted;
    for (size_t t = 0; t < order.size(); ++t) {
        flush_messages(bus, results[t].msgs);
        if (results[t].run.accepted) accepted.insert(order[t]);
        if (record) {
            record->z1.push_back(results[t].z1);
            record->dpks.push_back({order[t], results[t].run.accepted,
                                    std::move(results[t].run.transcript)});
        }
        if (whitebox) {
            whitebox->d0_shares.push_back(results[t].d0);
            whitebox->d1_shares.push_back(results[t].d1);
            whitebox->d2_shares.push_back(results[t].d2);
        }
    }
    return accepted;
}

bool single_prover_sm(const SetupParams& params, const Commitment& gamma,
                      const std::vector<Scalar>& phi, const Opening& opening, Rng& prover_rng,
                      Rng& verifier_rng) {
    // Verifier: fresh key and one signature per set element.
    BBKeyPair key;
    for (;;) {
        key = bb_keygen(params, verifier_rng);
        bool degenerate = false;
        for (const Scalar& w : phi) degenerate = degenerate || (key.x + w).is_zero();
        if (!degenerate) break;
    }
    std::vector<G1> sigs;
    sigs.reserve(phi.size());
    for (const Scalar& w : phi) sigs.push_back(bb_sign(params, key, w));

    // Prover: blind the matching signature, or a fake when there is none.
    Scalar b = random_nonzero_scalar(prover_rng);
    G1 sigma_tilde = fake_bb_signature(params) * b;
    for (size_t t = 0; t < phi.size(); ++t) {
        if (phi[t] == opening.v) {
            sigma_tilde = sigs[t] * b;
            break;
        }
    }

    DpkPredicate pred = bb_membership_predicate(params, gamma.gamma, sigma_tilde, key.y);
    DpkContext ctx{"sm-single", to_bytes("single-prover"), 0};
    DpkProverSession session(pred, {opening.v, opening.r, b}, prover_rng);
    DpkTranscript t;
    t.a_shares.push_back(session.first_messages());
    t.c = dpk_challenge(pred, ctx, dpk_combine_first(pred, t.a_shares));
    t.z_shares.push_back(session.respond(t.c));
    return dpk_verify(pred, ctx, t);
}

bool single_prover_rsm(const SetupParams& params, const std::vector<Commitment>& phi_commits,
                       const std::vector<Opening>& openings, const Scalar& v, Rng& prover_rng,
                       Rng& verifier_rng) {
    if (phi_commits.size() != openings.size()) {
        throw std::invalid_argument("single_prover_rsm: openings must match commitments");
    }
    // Prover shows knowledge of every opening; verifier checks, then
    // issues one quasi-signature per commitment.
    for (size_t t = 0; t < phi_commits.size(); ++t) {
        OpeningProof rho = prove_opening(params, phi_commits[t], openings[t], prover_rng);
        if (!verify_opening(params, phi_commits[t], rho)) return false;
    }
    BBSPlusKeyPair key = bbsplus_keygen(params, verifier_rng);
    std::vector<QuasiBBSPlusSignature> quasi;
    quasi.reserve(phi_commits.size());
    for (const Commitment& gamma : phi_commits) {
        quasi.push_back(quasi_sign(params, key, gamma, verifier_rng));
    }

    // Prover: derive and blind the signature for v, or fake components.
    Scalar b_s = random_scalar(prover_rng);
    Scalar b_c = random_scalar(prover_rng);
    Scalar b_r = random_scalar(prover_rng);
    G1 s_tilde = fake_quasi_s_component() + params.g1 * b_s;
    Scalar c_tilde = b_c;
    Scalar r_tilde = b_r;
    for (size_t t = 0; t < openings.size(); ++t) {
        if (openings[t].v == v) {
            BBSPlusSignature sig = derive_from_quasi(quasi[t], openings[t].r);
            s_tilde = sig.s + params.g1 * b_s;
            c_tilde = sig.c + b_c;
            r_tilde = sig.r + b_r;
            break;
        }
    }

    Scalar d0 = random_scalar(prover_rng);
    Scalar d1 = b_s * b_c;
    Scalar d2 = d0 * b_c;
    Gt z1 = params.e_g1_f2_inv.pow(b_s) * params.fT.pow(d0);

    RsmPublicBases pub = rsm_public_bases(params, key.y, v, s_tilde, c_tilde, r_tilde, z1);
    DpkPredicate pred = bbsplus_membership_predicate(params, pub);
    DpkContext ctx{"rsm-single", to_bytes("single-prover"), 0};
    DpkProverSession session(pred, {b_s, b_c, b_r, d0, d1, d2}, prover_rng);
    DpkTranscript t;
    t.a_shares.push_back(session.first_messages());
    t.c = dpk_challenge(pred, ctx, dpk_combine_first(pred, t.a_shares));
    t.z_shares.push_back(session.respond(t.c));
    return dpk_verify(pred, ctx, t);
}

}  // namespace tracemix
