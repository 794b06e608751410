#pragma once

// In-process broadcast channel. Parties run sequentially under a
// conductor; every published value is logged as a tagged, length-prefixed
// record (the model of the authenticated broadcast channel), and tamper
// directives mutate values at named protocol sites for soundness tests.

#include <functional>
#include <map>
#include <mutex>

#include "tracemix/bytes.hpp"

namespace tracemix {

class ProtocolError : public std::runtime_error {
public:
    explicit ProtocolError(const std::string& what) : std::runtime_error(what) {}
};

// A validity check failed and the protocol stopped without an output.
class ProtocolAbort : public std::runtime_error {
public:
    explicit ProtocolAbort(const std::string& what) : std::runtime_error(what) {}
};

struct BusMessage {
    uint64_t session = 0;
    uint16_t tag = 0;        // stable numeric phase tag
    std::string phase;       // symbolic name of the tag
    std::string sender;      // "querier", "server:k", "dealer"
    std::string recipient;   // "*" for broadcast
    Bytes payload;
};

// Phase registry: symbolic name -> stable numeric tag. Tamper directives
// and bus records must reference registered phases.
const std::map<std::string, uint16_t>& phase_registry();
bool is_known_phase(const std::string& phase);

// Mutation site for soundness experiments: at protocol site `phase`,
// party `party` misbehaves for list index `index`.
struct TamperDirective {
    std::string phase;
    size_t party = 0;
    size_t index = 0;

    std::string describe() const;
};

class TamperPlan {
public:
    TamperPlan() = default;

    void add(const TamperDirective& d);
    bool empty() const { return directives_.empty(); }
    const std::vector<TamperDirective>& directives() const { return directives_; }

    // True when a directive matches; matched directives are recorded so
    // the harness can assert that every directive actually fired. Safe to
    // call from parallel protocol sections.
    bool active(const std::string& phase, size_t party, size_t index) const;
    std::vector<TamperDirective> fired() const {
        std::lock_guard<std::mutex> lock(mu_);
        return fired_;
    }

private:
    std::vector<TamperDirective> directives_;
    mutable std::mutex mu_;
    mutable std::vector<TamperDirective> fired_;
};

class Bus {
public:
    explicit Bus(uint64_t session_id) : session_(session_id) {}

    void publish(const std::string& phase, const std::string& sender, BytesView payload) {
        deliver(phase, sender, "*", payload);
    }
    void send(const std::string& phase, const std::string& sender, const std::string& recipient,
              BytesView payload) {
        deliver(phase, sender, recipient, payload);
    }

    uint64_t session_id() const { return session_; }
    const std::vector<BusMessage>& log() const { return log_; }

private:
    void deliver(const std::string& phase, const std::string& sender,
                 const std::string& recipient, BytesView payload);

    uint64_t session_;
    std::vector<BusMessage> log_;
};

}  // namespace tracemix
