#pragma once

// Desk-scale experiment driver: one seeded generator forked per role,
// senders with nonce-padded distinct values, the full protocol pipeline,
// tamper injection, and transcript persistence. Also the protocol
// benchmark used for the scaling check.

#include "tracemix/timing.hpp"
#include "tracemix/transcript.hpp"

namespace tracemix {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct QuerySpec {
    QueryResult::Kind kind = QueryResult::Kind::TraceIn;
    IndexSet I, J;
};

struct SessionConfig {
    size_t n = 8;
    size_t m = 2;
    uint64_t seed = 1;
    size_t paillier_bits = 2048;
    bool interleaved_tracein = false;
    std::vector<QuerySpec> queries;
    std::vector<TamperDirective> tampers;
    std::string transcript_path;

    void validate() const;

    // Key-value text format; see the README for the grammar.
    static SessionConfig parse(const std::string& text);
    static SessionConfig from_file(const std::string& path);
};

struct SessionOutcome {
    SessionTranscript transcript;
    std::vector<Scalar> values;         // sender inputs, nonce-padded
    std::vector<IndexSet> oracle;       // expected accepted set per query
    std::vector<TamperDirective> fired;
};

SessionOutcome run_session(const SessionConfig& cfg);

// Brute-force plaintext oracle: a set intersection over (v, v'),
// independent of the protocol implementation.
IndexSet oracle_expected(const QuerySpec& q, const std::vector<Scalar>& values,
                         const std::vector<Scalar>& v_out);

struct BenchRow {
    size_t n = 0;
    size_t m = 0;
    std::string phase;  // "<protocol>/<category>"
    std::string role;   // "querier" or "server"
    double seconds = 0;
};

// Runs DB-SM and DB-RSM directly at I = J = [n] (the worst case) for each
// list size and reports per-phase wall-clock times.
std::vector<BenchRow> bench_protocols(const std::vector<size_t>& n_list, size_t m, uint64_t seed,
                                      size_t paillier_bits = 2048);

std::string bench_to_csv(const std::vector<BenchRow>& rows);

}  // namespace tracemix
