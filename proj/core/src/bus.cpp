#include "tracemix/bus.hpp"

namespace tracemix {

const std::map<std::string, uint16_t>& phase_registry() {
    static const std::map<std::string, uint16_t> reg = {
        // Mix protocol
        {"mix.shuffle", 10},
        {"mix.tdec", 11},
        {"mix.vshare", 12},
        // Set membership (DB-SM)
        {"dbsm.siggen", 20},
        {"dbsm.fake-sig", 21},
        {"dbsm.shuffle", 22},
        {"dbsm.blind", 23},
        {"dbsm.bshare", 24},
        {"dbsm.tdec", 25},
        {"dbsm.sigma-tilde", 26},
        {"dbsm.dpk.a", 27},
        {"dbsm.dpk.z", 28},
        {"dbsm.vshare", 29},
        {"dbsm.zshare", 30},
        {"dbsm.statement", 31},
        // Reverse set membership (DB-RSM)
        {"dbrsm.siggen", 40},
        {"dbrsm.fake-quasi", 41},
        {"dbrsm.radd", 42},
        {"dbrsm.shuffle", 43},
        {"dbrsm.blind", 44},
        {"dbrsm.bcshare", 45},
        {"dbrsm.tdec", 46},
        {"dbrsm.rtilde", 47},
        {"dbrsm.beaver", 48},
        {"dbrsm.z1share", 49},
        {"dbrsm.dpk.a", 50},
        {"dbrsm.dpk.z", 51},
        {"dbrsm.zshare", 52},
    };
    return reg;
}

bool is_known_phase(const std::string& phase) {
    return phase_registry().count(phase) != 0;
}

std::string TamperDirective::describe() const {
    return phase + " party=" + std::to_string(party) + " index=" + std::to_string(index);
}

void TamperPlan::add(const TamperDirective& d) {
    if (!is_known_phase(d.phase)) {
        throw std::invalid_argument("unknown tamper phase: " + d.phase);
    }
    directives_.push_back(d);
}

bool TamperPlan::active(const std::string& phase, size_t party, size_t index) const {
    bool hit = false;
    for (const auto& d : directives_) {
        if (d.phase == phase && d.party == party && d.index == index) {
            std::lock_guard<std::mutex> lock(mu_);
            fired_.push_back(d);
            hit = true;
        }
    }
    return hit;
}

void Bus::deliver(const std::string& phase, const std::string& sender,
                  const std::string& recipient, BytesView payload) {
    auto it = phase_registry().find(phase);
    if (it == phase_registry().end()) {
        throw std::logic_error("bus: unregistered phase " + phase);
    }
    BusMessage msg;
    msg.session = session_;
    msg.tag = it->second;
    msg.phase = phase;
    msg.sender = sender;
    msg.recipient = recipient;
    msg.payload.assign(payload.begin(), payload.end());
    log_.push_back(std::move(msg));
}

}  // namespace tracemix
