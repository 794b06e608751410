#pragma once

// The traceable mixnet: senders encrypt values, mix-servers jointly mix
// and decrypt them, and batched TraceIn/TraceOut queries are answered
// through the distributed membership protocols with a complement rerun
// guarding against suppressed proofs.

#include "tracemix/pke.hpp"
#include "tracemix/setmembership.hpp"

namespace tracemix {

struct MixnetPublicKey {
    std::vector<G1> pke_pks;  // per-server share-channel keys
    G1 eg_pk;
    PaillierPublicKey pai_pk;

    Bytes to_bytes() const;
    static std::optional<MixnetPublicKey> from_bytes(BytesView in);
};

struct MixServerSecret {
    Scalar pke_sk;
    Scalar eg_sk;
    mpz_class pai_sk;
};

// The Paillier modulus comes from a dealer (its own rng fork); ElGamal
// and share-channel keys are sampled per server.
std::pair<MixnetPublicKey, std::vector<MixServerSecret>> keygen(const SetupParams& params,
                                                                size_t paillier_bits,
                                                                std::vector<Rng>& server_rngs,
                                                                Rng& dealer_rng);

struct SenderCiphertext {
    PaillierCiphertext eps;    // enc(v) under the threshold Paillier key
    Commitment gamma;          // g1^v h1^r
    std::vector<Bytes> ev;     // per-server encrypted v-shares
    std::vector<Bytes> er;     // per-server encrypted r-shares
    OpeningProof rho_gamma;
    PaillierCiphertext eps_r;  // enc(r)

    Bytes to_bytes(const PaillierPublicKey& pk) const;
    static std::optional<SenderCiphertext> from_bytes(const PaillierPublicKey& pk, size_t m,
                                                      BytesView in);
};

SenderCiphertext enc(const SetupParams& params, const MixnetPublicKey& mpk, const Scalar& v,
                     Rng& rng);

struct MixWitness {
    std::vector<size_t> perm;
    std::vector<Scalar> v_shares;  // input order
    std::vector<Scalar> r_shares;
};

struct MixOutput {
    std::vector<Scalar> v_out;
    std::vector<MixWitness> witnesses;  // per server, secret
};

// Verifies every rho_gamma, shuffles and threshold-decrypts the value
// list, and hands each server its decrypted share vectors.
MixOutput mix(const SetupParams& params, const MixnetPublicKey& mpk,
              const std::vector<SenderCiphertext>& cts, std::vector<MixServerSecret>& msks,
              std::vector<Rng>& server_rngs, Bus& bus, const TamperPlan& tamper);

struct QueryResult {
    enum class Kind : uint8_t { TraceIn = 1, TraceOut = 2 };

    Kind kind = Kind::TraceIn;
    IndexSet requested;              // I for TraceIn, J for TraceOut
    IndexSet accepted;               // I* or J*
    IndexSet accepted_complement;    // I*_c or J*_c
    bool aborted = false;            // complement-union test failed
    bool stage1_abort = false;       // validity check stopped a run
    std::string abort_reason;

    // Full stage-1 publications + DPK transcripts for offline checking.
    DbSmRecord sm_main, sm_comp;     // TraceIn
    DbRsmRecord rsm_main, rsm_comp;  // TraceOut
};

struct QueryEnv {
    std::vector<MixServerSecret>* msks = nullptr;
    std::vector<MixWitness>* witnesses = nullptr;
    std::vector<Rng>* server_rngs = nullptr;
    Rng* querier_rng = nullptr;
    Rng* dealer_rng = nullptr;  // Beaver triples for TraceOut
    Bus* bus = nullptr;
    const TamperPlan* tamper = nullptr;
};

// Runs DB-SM on J and on its complement (or one interleaved pass) and
// applies the union-abort rule.
QueryResult btrace_in(const SetupParams& params, const MixnetPublicKey& mpk,
                      const std::vector<SenderCiphertext>& cts,
                      const std::vector<Scalar>& v_out, const IndexSet& I, const IndexSet& J,
                      QueryEnv& env, const Bytes& session_id, bool interleaved = false);

// Runs DB-RSM on I and on its complement.
QueryResult btrace_out(const SetupParams& params, const MixnetPublicKey& mpk,
                       const std::vector<SenderCiphertext>& cts,
                       const std::vector<Scalar>& v_out, const IndexSet& I, const IndexSet& J,
                       QueryEnv& env, const Bytes& session_id);

}  // namespace tracemix
