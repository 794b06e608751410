// Command-line harness: run seeded sessions from a config file, verify
// transcripts offline, and benchmark the query protocols.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "tracemix/session.hpp"

using namespace tracemix;

namespace {

std::string set_to_string(const IndexSet& s) {
    if (s.empty()) return "{}";
    std::ostringstream out;
    out << "{";
    bool first = true;
    for (size_t i : s) {
        if (!first) out << ",";
        out << i;
        first = false;
    }
    out << "}";
    return out.str();
}

TamperDirective parse_tamper_arg(const std::string& text) {
    std::stringstream ss(text);
    std::string phase;
    ss >> phase;
    TamperDirective d;
    d.phase = phase;
    std::string tok;
    while (ss >> tok) {
        size_t eq = tok.find('=');
        if (eq == std::string::npos) throw ConfigError("bad tamper spec token: " + tok);
        std::string key = tok.substr(0, eq);
        size_t value = std::stoull(tok.substr(eq + 1));
        if (key == "party") {
            d.party = value;
        } else if (key == "index") {
            d.index = value;
        } else {
            throw ConfigError("unknown tamper spec key: " + key);
        }
    }
    return d;
}

int cmd_run(const std::string& config_path, std::optional<uint64_t> seed,
            const std::vector<std::string>& tampers, const std::string& out_path) {
    SessionConfig cfg = SessionConfig::from_file(config_path);
    if (seed) cfg.seed = *seed;
    for (const std::string& t : tampers) cfg.tampers.push_back(parse_tamper_arg(t));
    if (!out_path.empty()) cfg.transcript_path = out_path;
    cfg.validate();

    SessionOutcome out = run_session(cfg);
    std::cout << "session: n=" << cfg.n << " m=" << cfg.m << " seed=" << cfg.seed << "\n";
    for (size_t qi = 0; qi < out.transcript.queries.size(); ++qi) {
        const QueryResult& q = out.transcript.queries[qi];
        const char* kind = q.kind == QueryResult::Kind::TraceIn ? "tracein" : "traceout";
        std::cout << "query " << qi << " (" << kind << "): ";
        if (q.aborted) {
            std::cout << "ABORT (" << q.abort_reason << ")";
        } else {
            std::cout << "accepted=" << set_to_string(q.accepted);
        }
        std::cout << "  [oracle=" << set_to_string(out.oracle[qi]) << "]\n";
    }
    if (!out.fired.empty()) {
        std::cout << "tamper directives fired:\n";
        for (const auto& d : out.fired) std::cout << "  " << d.describe() << "\n";
    }
    if (!cfg.transcript_path.empty()) {
        std::cout << "transcript written to " << cfg.transcript_path << "\n";
    }
    return 0;
}

int cmd_verify(const std::string& path) {
    VerifyOutcome v = verify_transcript_file(path);
    if (v.ok) {
        std::cout << "transcript verifies\n";
        return 0;
    }
    std::cout << "transcript REJECTED: " << v.location << "\n";
    return 1;
}

int cmd_bench(const std::string& n_list_arg, size_t m, uint64_t seed, size_t paillier_bits,
              const std::string& out_path) {
    std::vector<size_t> n_list;
    std::stringstream ss(n_list_arg);
    std::string item;
    while (std::getline(ss, item, ',')) n_list.push_back(std::stoull(item));
    if (n_list.empty()) {
        std::cerr << "bench: empty n list\n";
        return 2;
    }
    auto rows = bench_protocols(n_list, m, seed, paillier_bits);
    std::string csv = bench_to_csv(rows);
    if (out_path.empty()) {
        std::cout << csv;
    } else {
        std::ofstream out(out_path, std::ios::trunc);
        if (!out) {
            std::cerr << "bench: cannot open " << out_path << "\n";
            return 2;
        }
        out << csv;
        std::cout << "wrote " << rows.size() << " rows to " << out_path << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"traceable mixnet harness"};
    app.require_subcommand(1);

    std::string config_path, transcript_path, out_path;
    std::vector<std::string> tamper_args;
    std::optional<uint64_t> seed_override;
    uint64_t bench_seed = 1;
    std::string n_list = "256,512";
    size_t bench_m = 2;
    size_t paillier_bits = 2048;

    CLI::App* run = app.add_subcommand("run", "run a session from a config file");
    run->add_option("--config", config_path, "session config file")->required();
    run->add_option("--seed", seed_override, "override the config seed");
    run->add_option("--tamper", tamper_args,
                    "tamper directive, e.g. 'dbsm.zshare party=0 index=3' (repeatable)");
    run->add_option("--out", out_path, "transcript output path (overrides config)");

    CLI::App* verify = app.add_subcommand("verify", "re-verify a transcript offline");
    verify->add_option("transcript", transcript_path, "transcript file")->required();

    CLI::App* bench = app.add_subcommand("bench", "benchmark DB-SM / DB-RSM");
    bench->add_option("--n-list", n_list, "comma-separated list sizes (default 256,512)");
    bench->add_option("--m", bench_m, "number of mix-servers (default 2)");
    bench->add_option("--seed", bench_seed, "rng seed");
    bench->add_option("--paillier-bits", paillier_bits, "Paillier modulus size (default 2048)");
    bench->add_option("--out", out_path, "CSV output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, seed_override, tamper_args, out_path);
        if (verify->parsed()) return cmd_verify(transcript_path);
        if (bench->parsed()) return cmd_bench(n_list, bench_m, bench_seed, paillier_bits, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
