#pragma once

// The distributed set-membership (DB-SM) and reverse set-membership
// (DB-RSM) query protocols, plus single-prover reference versions of
// both. Stage 1 obtains blinded (quasi-)signatures aligned with the
// queried list; stage 2 proves each requested index with a DPK.

#include <set>

#include "tracemix/bus.hpp"
#include "tracemix/dpk.hpp"
#include "tracemix/elgamal.hpp"
#include "tracemix/paillier.hpp"
#include "tracemix/sharing.hpp"
#include "tracemix/shuffle.hpp"
#include "tracemix/signatures.hpp"
#include "tracemix/timing.hpp"

namespace tracemix {

using IndexSet = std::set<size_t>;

IndexSet complement_set(const IndexSet& s, size_t n);

// One mix-server's secret inputs to a query protocol.
struct QueryServerInput {
    Scalar eg_sk;                        // ElGamal key share
    const mpz_class* pai_sk = nullptr;   // Paillier key share (DB-RSM)
    std::vector<size_t> perm;            // permutation applied during Mix
    std::vector<Scalar> v_shares;        // value shares, input order
    std::vector<Scalar> r_shares;        // commitment-randomness shares
    TripleStore* triples = nullptr;      // Beaver triples (DB-RSM)
    Rng* rng = nullptr;
};

struct DpkRecord {
    uint64_t index = 0;
    bool accepted = false;
    DpkTranscript transcript;
};

// Published artifacts of one DB-SM run, sufficient for offline
// re-verification of everything that does not require shuffle proofs.
struct DbSmRecord {
    IndexSet I, J;
    Bytes session_id;
    bool interleaved = false;
    G2 y;
    G2 y_partner;  // interleaved mode: the complement run's key
    std::vector<G1> sigma_prime;
    std::vector<EgCiphertext> enc_sigma;
    std::vector<Scalar> enc_rand;
    std::vector<G1> sigma_tilde;
    std::vector<DpkRecord> dpks;  // ascending index over I
};

struct DbRsmRecord {
    IndexSet I, J;
    Bytes session_id;
    G2 y;
    std::vector<G1> quasi_s;
    std::vector<Scalar> quasi_c;
    std::vector<Scalar> quasi_rhat;
    std::vector<EgCiphertext> enc_s;
    std::vector<Scalar> enc_s_rand;
    std::vector<PaillierCiphertext> enc_c, enc_rhat;
    std::vector<mpz_class> enc_c_rand, enc_rhat_rand;
    std::vector<G1> s_tilde;
    std::vector<Scalar> c_tilde, r_tilde;
    std::vector<Gt> z1;           // combined first-stage commitments, per dpk
    std::vector<DpkRecord> dpks;  // ascending index over J
};

// White-box taps for the lemma-level algebra checks; filled only when a
// test passes them in.
struct DbSmWhiteBox {
    std::vector<std::vector<Scalar>> b_shares;  // [server][input index]
    BBKeyPair querier_key;
};
struct DbRsmWhiteBox {
    std::vector<std::vector<Scalar>> bs_shares, bc_shares, br_shares;  // [server][output index]
    // Stage-2 delta shares, [server] per processed index (ascending J).
    std::vector<std::vector<Scalar>> d0_shares, d1_shares, d2_shares;
    BBSPlusKeyPair querier_key;
};

// Predicate p_BB: gamma = g1^v h1^r  AND  e(st, y) = e(g1,g2)^b * e(st,g2)^{-v}.
// Witness slots: 0 = v, 1 = r, 2 = b.
DpkPredicate bb_membership_predicate(const SetupParams& params, const G1& gamma,
                                     const G1& sigma_tilde, const G2& y);

// Pairing bases for p_BBS+, recomputable by any verifier from public data.
struct RsmPublicBases {
    Gt z1;   // published prover commitment h2^{bS} h3^{d0}
    Gt z2;   // e(S~, y f2^{c~}) / e(f1 g1^v h1^{r~}, f2)
    Gt g1e;  // e(S~, f2)
    Gt g2e;  // e(g1, y f2^{c~})
};
RsmPublicBases rsm_public_bases(const SetupParams& params, const G2& y, const Scalar& v,
                                const G1& s_tilde, const Scalar& c_tilde, const Scalar& r_tilde,
                                const Gt& z1);

// Predicate p_BBS+ over slots 0=bS, 1=bc, 2=br, 3=d0, 4=d1, 5=d2:
//   z1 = h2^bS h3^d0  AND  1 = z1^{-bc} h2^d1 h3^d2  AND
//   z2 = g1e^bc g2e^bS h1e^br h2^d1.
DpkPredicate bbsplus_membership_predicate(const SetupParams& params, const RsmPublicBases& pub);

// Querier output: I* = { i in I | v_i appears in v'_J }.
IndexSet db_sm(const SetupParams& params, const G1& eg_pk, const std::vector<Commitment>& gammas,
               const std::vector<Scalar>& v_out, const IndexSet& I, const IndexSet& J,
               std::vector<QueryServerInput>& servers, Rng& querier_rng, Bus& bus,
               const TamperPlan& tamper, const Bytes& session_id, DbSmRecord* record,
               DbSmWhiteBox* whitebox = nullptr, PhaseClock* clock = nullptr);

// Single-run variant answering J and its complement together: the
// complement's signatures ride in the fake slots under a second key.
// Returns (I*, I*_complement).
std::pair<IndexSet, IndexSet> db_sm_interleaved(
    const SetupParams& params, const G1& eg_pk, const std::vector<Commitment>& gammas,
    const std::vector<Scalar>& v_out, const IndexSet& I, const IndexSet& J,
    std::vector<QueryServerInput>& servers, Rng& querier_rng, Bus& bus,
    const TamperPlan& tamper, const Bytes& session_id, DbSmRecord* record_main,
    DbSmRecord* record_comp);

// Querier output: J* = { j in J | v'_j appears in v_I }.
IndexSet db_rsm(const SetupParams& params, const G1& eg_pk, const PaillierPublicKey& pai_pk,
                const std::vector<Commitment>& gammas,
                const std::vector<OpeningProof>& rho_gammas,
                const std::vector<PaillierCiphertext>& eps_r, const std::vector<Scalar>& v_out,
                const IndexSet& I, const IndexSet& J, std::vector<QueryServerInput>& servers,
                Rng& querier_rng, Bus& bus, const TamperPlan& tamper, const Bytes& session_id,
                DbRsmRecord* record, DbRsmWhiteBox* whitebox = nullptr,
                PhaseClock* clock = nullptr);

// Single-prover set membership: accept iff the value committed by gamma
// lies in phi.
bool single_prover_sm(const SetupParams& params, const Commitment& gamma,
                      const std::vector<Scalar>& phi, const Opening& opening, Rng& prover_rng,
                      Rng& verifier_rng);

// Single-prover reverse set membership: accept iff some commitment in Phi
// (whose openings the prover knows) commits v.
bool single_prover_rsm(const SetupParams& params, const std::vector<Commitment>& phi_commits,
                       const std::vector<Opening>& openings, const Scalar& v, Rng& prover_rng,
                       Rng& verifier_rng);

}  // namespace tracemix
