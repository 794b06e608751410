#include "tracemix/session.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace tracemix {

namespace {

Bytes session_setup_seed(uint64_t seed) {
    Bytes s;
    append_framed(s, std::string("session-setup"));
    append_u64(s, seed);
    return s;
}

// "0,2,5", "0..7", "0..3,9", or "none".
IndexSet parse_index_set(const std::string& text) {
    IndexSet out;
    if (text == "none" || text.empty()) return out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        size_t dots = item.find("..");
        try {
            if (dots != std::string::npos) {
                size_t lo = std::stoull(item.substr(0, dots));
                size_t hi = std::stoull(item.substr(dots + 2));
                if (hi < lo) throw ConfigError("empty range: " + item);
                for (size_t v = lo; v <= hi; ++v) out.insert(v);
            } else {
                out.insert(std::stoull(item));
            }
        } catch (const std::invalid_argument&) {
            throw ConfigError("bad index in set: " + item);
        }
    }
    return out;
}

std::map<std::string, std::string> parse_kv_args(std::stringstream& ss) {
    std::map<std::string, std::string> out;
    std::string tok;
    while (ss >> tok) {
        size_t eq = tok.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key=value, got: " + tok);
        out[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    return out;
}

}  // namespace

void SessionConfig::validate() const {
    if (n == 0) throw ConfigError("n must be positive");
    if (m == 0) throw ConfigError("m must be positive");
    if (paillier_bits < 512) throw ConfigError("paillier_bits must be at least 512");
    for (const auto& q : queries) {
        for (size_t i : q.I) {
            if (i >= n) throw ConfigError("query set I references index beyond n");
        }
        for (size_t j : q.J) {
            if (j >= n) throw ConfigError("query set J references index beyond n");
        }
    }
    for (const auto& t : tampers) {
        if (!is_known_phase(t.phase)) throw ConfigError("unknown tamper phase: " + t.phase);
        if (t.party >= m) throw ConfigError("tamper directive references missing party");
        if (t.index >= n) throw ConfigError("tamper directive references missing index");
    }
}

SessionConfig SessionConfig::parse(const std::string& text) {
    SessionConfig cfg;
    std::stringstream in(text);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        // Trim.
        auto notspace = [](unsigned char c) { return !std::isspace(c); };
        line.erase(line.begin(), std::find_if(line.begin(), line.end(), notspace));
        line.erase(std::find_if(line.rbegin(), line.rend(), notspace).base(), line.end());
        if (line.empty()) continue;

        size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        }
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        key.erase(std::find_if(key.rbegin(), key.rend(), notspace).base(), key.end());
        value.erase(value.begin(), std::find_if(value.begin(), value.end(), notspace));

        try {
            if (key == "n") {
                cfg.n = std::stoull(value);
            } else if (key == "m") {
                cfg.m = std::stoull(value);
            } else if (key == "seed") {
                cfg.seed = std::stoull(value);
            } else if (key == "paillier_bits") {
                cfg.paillier_bits = std::stoull(value);
            } else if (key == "interleaved") {
                cfg.interleaved_tracein = (value == "1" || value == "true");
            } else if (key == "transcript") {
                cfg.transcript_path = value;
            } else if (key == "query") {
                std::stringstream qs(value);
                std::string kind;
                qs >> kind;
                QuerySpec spec;
                if (kind == "tracein") {
                    spec.kind = QueryResult::Kind::TraceIn;
                } else if (kind == "traceout") {
                    spec.kind = QueryResult::Kind::TraceOut;
                } else {
                    throw ConfigError("query kind must be tracein or traceout, got: " + kind);
                }
                auto args = parse_kv_args(qs);
                if (args.count("I")) spec.I = parse_index_set(args["I"]);
                if (args.count("J")) spec.J = parse_index_set(args["J"]);
                cfg.queries.push_back(std::move(spec));
            } else if (key == "tamper") {
                std::stringstream ts(value);
                std::string phase;
                ts >> phase;
                TamperDirective d;
                d.phase = phase;
                auto args = parse_kv_args(ts);
                if (args.count("party")) d.party = std::stoull(args["party"]);
                if (args.count("index")) d.index = std::stoull(args["index"]);
                cfg.tampers.push_back(std::move(d));
            } else {
                throw ConfigError("unknown config key: " + key);
            }
        } catch (const std::invalid_argument&) {
            throw ConfigError("line " + std::to_string(lineno) + ": bad number in value");
        }
    }
    return cfg;
}

SessionConfig SessionConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

IndexSet oracle_expected(const QuerySpec& q, const std::vector<Scalar>& values,
                         const std::vector<Scalar>& v_out) {
    std::set<Bytes> target;
    IndexSet out;
    if (q.kind == QueryResult::Kind::TraceIn) {
        for (size_t j : q.J) target.insert(v_out[j].to_bytes());
        for (size_t i : q.I) {
            if (target.count(values[i].to_bytes())) out.insert(i);
        }
    } else {
        for (size_t i : q.I) target.insert(values[i].to_bytes());
        for (size_t j : q.J) {
            if (target.count(v_out[j].to_bytes())) out.insert(j);
        }
    }
    return out;
}

SessionOutcome run_session(const SessionConfig& cfg) {
    cfg.validate();

    SetupParams params = setup(session_setup_seed(cfg.seed), cfg.m, cfg.n);
    Rng root(cfg.seed);
    Rng dealer_rng = root.fork("dealer");
    Rng querier_rng = root.fork("querier");
    Rng values_rng = root.fork("values");
    std::vector<Rng> server_rngs;
    for (size_t k = 0; k < cfg.m; ++k) server_rngs.push_back(root.fork("server", k));

    TamperPlan tamper;
    for (const auto& d : cfg.tampers) tamper.add(d);
    Bus bus(cfg.seed);

    auto [mpk, msks] = keygen(params, cfg.paillier_bits, server_rngs, dealer_rng);

    // Distinct sender values: payload (i+1) padded with a 64-bit nonce.
    Scalar two64 = Scalar::from_u64(1ULL << 32).square();
    std::vector<Scalar> values;
    std::vector<SenderCiphertext> cts;
    for (size_t i = 0; i < cfg.n; ++i) {
        Scalar v = Scalar::from_u64(i + 1) * two64 + Scalar::from_u64(values_rng.u64());
        values.push_back(v);
        Rng sender_rng = root.fork("sender", i);
        cts.push_back(enc(params, mpk, v, sender_rng));
    }

    MixOutput mixed = mix(params, mpk, cts, msks, server_rngs, bus, tamper);

    SessionOutcome outcome;
    outcome.values = values;
    outcome.transcript.setup_seed = session_setup_seed(cfg.seed);
    outcome.transcript.m = cfg.m;
    outcome.transcript.n = cfg.n;
    outcome.transcript.mpk = mpk;
    outcome.transcript.ciphertexts = cts;
    outcome.transcript.v_out = mixed.v_out;

    QueryEnv env;
    env.msks = &msks;
    env.witnesses = &mixed.witnesses;
    env.server_rngs = &server_rngs;
    env.querier_rng = &querier_rng;
    env.dealer_rng = &dealer_rng;
    env.bus = &bus;
    env.tamper = &tamper;

    for (size_t qi = 0; qi < cfg.queries.size(); ++qi) {
        const QuerySpec& spec = cfg.queries[qi];
        Bytes sid;
        append_framed(sid, std::string("query"));
        append_u64(sid, cfg.seed);
        append_u64(sid, qi);
        QueryResult res;
        if (spec.kind == QueryResult::Kind::TraceIn) {
            res = btrace_in(params, mpk, cts, mixed.v_out, spec.I, spec.J, env, sid,
                            cfg.interleaved_tracein);
        } else {
            res = btrace_out(params, mpk, cts, mixed.v_out, spec.I, spec.J, env, sid);
        }
        outcome.transcript.queries.push_back(std::move(res));
        outcome.oracle.push_back(oracle_expected(spec, values, mixed.v_out));
    }

    outcome.fired = tamper.fired();
    if (!cfg.transcript_path.empty()) {
        write_transcript_file(cfg.transcript_path, outcome.transcript);
    }
    return outcome;
}

std::vector<BenchRow> bench_protocols(const std::vector<size_t>& n_list, size_t m, uint64_t seed,
                                      size_t paillier_bits) {
    std::vector<BenchRow> rows;
    for (size_t n : n_list) {
        SetupParams params = setup(session_setup_seed(seed), m, n);
        Rng root(seed ^ n);
        Rng querier_rng = root.fork("querier");
        std::vector<Rng> server_rngs;
        for (size_t k = 0; k < m; ++k) server_rngs.push_back(root.fork("server", k));

        // Keys and witnesses built directly; the bench measures the query
        // protocols, not Mix.
        PaillierKeyMaterial pai = pai_keygen_dealer(paillier_bits, m, root);
        std::vector<Scalar> eg_sks;
        std::vector<G1> pk_shares;
        for (size_t k = 0; k < m; ++k) {
            eg_sks.push_back(random_nonzero_scalar(root));
            pk_shares.push_back(eg_pk_share(params, eg_sks[k]));
        }
        G1 eg_pk = eg_combine_pk(pk_shares);

        std::vector<Scalar> values, rands;
        std::vector<Commitment> gammas;
        std::vector<OpeningProof> rhos;
        std::vector<PaillierCiphertext> eps_r;
        std::vector<std::vector<Scalar>> v_shares(m), r_shares(m);
        for (size_t i = 0; i < n; ++i) {
            values.push_back(random_scalar(root));
            rands.push_back(random_scalar(root));
            gammas.push_back(commit(params, values[i], rands[i]));
            rhos.push_back(prove_opening(params, gammas[i], {values[i], rands[i]}, root));
            eps_r.push_back(pai_enc(pai.pk, scalar_to_mpz(rands[i]), root));
            auto vs = share_mm(values[i], m, root);
            auto rs = share_mm(rands[i], m, root);
            for (size_t k = 0; k < m; ++k) {
                v_shares[k].push_back(vs[k]);
                r_shares[k].push_back(rs[k]);
            }
        }
        std::vector<std::vector<size_t>> perms;
        for (size_t k = 0; k < m; ++k) perms.push_back(root.permutation(n));
        auto sigma = compose_hops(perms);
        std::vector<Scalar> v_out;
        for (size_t j = 0; j < n; ++j) v_out.push_back(values[sigma[j]]);

        IndexSet all;
        for (size_t i = 0; i < n; ++i) all.insert(i);

        auto make_inputs = [&](std::vector<TripleStore>* stores) {
            std::vector<QueryServerInput> inputs;
            for (size_t k = 0; k < m; ++k) {
                QueryServerInput in;
                in.eg_sk = eg_sks[k];
                in.pai_sk = &pai.sk_shares[k];
                in.perm = perms[k];
                in.v_shares = v_shares[k];
                in.r_shares = r_shares[k];
                if (stores) in.triples = &(*stores)[k];
                in.rng = &server_rngs[k];
                inputs.push_back(std::move(in));
            }
            return inputs;
        };

        PhaseClock clock;
        Bus bus(seed);
        TamperPlan no_tamper;
        {
            auto inputs = make_inputs(nullptr);
            db_sm(params, eg_pk, gammas, v_out, all, all, inputs, querier_rng, bus, no_tamper,
                  to_bytes("bench-sm"), nullptr, nullptr, &clock);
        }
        {
            std::vector<TripleStore> stores(m);
            auto dealt = deal_triples(m, 2 * n, root);
            for (const auto& t : dealt) {
                for (size_t k = 0; k < m; ++k) stores[k].put(t[k]);
            }
            auto inputs = make_inputs(&stores);
            db_rsm(params, eg_pk, pai.pk, gammas, rhos, eps_r, v_out, all, all, inputs,
                   querier_rng, bus, no_tamper, to_bytes("bench-rsm"), nullptr, nullptr, &clock);
        }
        auto totals = clock.totals();
        for (const auto& [key, seconds] : totals) {
            rows.push_back({n, m, key.first, key.second, seconds});
        }
    }
    return rows;
}

std::string bench_to_csv(const std::vector<BenchRow>& rows) {
    std::ostringstream out;
    out << "n,m,phase,role,seconds\n";
    for (const auto& r : rows) {
        out << r.n << ',' << r.m << ',' << r.phase << ',' << r.role << ','
            << std::fixed << std::setprecision(6) << r.seconds << '\n';
    }
    return out.str();
}

}  // namespace tracemix
