#pragma once

// Session transcript: a versioned binary file carrying the public view of
// one session (setup, mpk, ciphertexts, mixed output, query records with
// full DPK transcripts). verify_transcript re-runs every offline check:
// opening proofs, querier signature validity and encryption consistency,
// DPK verification, and the complement-union abort rule. It accepts
// exactly the transcripts of fully successful honest sessions and reports
// a located cause otherwise.

#include "tracemix/mixnet.hpp"

namespace tracemix {

struct SessionTranscript {
    uint32_t version = 1;
    Bytes setup_seed;
    uint64_t m = 0;
    uint64_t n = 0;
    MixnetPublicKey mpk;
    std::vector<SenderCiphertext> ciphertexts;
    std::vector<Scalar> v_out;
    std::vector<QueryResult> queries;

    Bytes to_bytes() const;
    // Throws std::runtime_error naming the byte offset on parse failure.
    static SessionTranscript from_bytes(BytesView in);
};

struct VerifyOutcome {
    bool ok = false;
    std::string location;  // empty when ok

    static VerifyOutcome pass() { return {true, ""}; }
    static VerifyOutcome fail(std::string where) { return {false, std::move(where)}; }
};

VerifyOutcome verify_transcript(const SessionTranscript& t);

void write_transcript_file(const std::string& path, const SessionTranscript& t);
SessionTranscript read_transcript_file(const std::string& path);
VerifyOutcome verify_transcript_file(const std::string& path);

}  // namespace tracemix
