#pragma once

#include <chrono>
#include <map>
#include <mutex>
#include <string>

namespace tracemix {

// Wall-clock accumulator keyed by (phase, role); protocols report their
// stage timings through an optional pointer to one of these.
class PhaseClock {
public:
    using Key = std::pair<std::string, std::string>;

    // Safe to call from parallel sections; accumulated time then counts
    // thread time rather than wall time.
    void add(const std::string& phase, const std::string& role, double seconds) {
        std::lock_guard<std::mutex> lock(mu_);
        totals_[{phase, role}] += seconds;
    }
    std::map<Key, double> totals() const {
        std::lock_guard<std::mutex> lock(mu_);
        return totals_;
    }

private:
    mutable std::mutex mu_;
    std::map<Key, double> totals_;
};

class PhaseScope {
public:
    PhaseScope(PhaseClock* clock, std::string phase, std::string role)
        : clock_(clock), phase_(std::move(phase)), role_(std::move(role)) {
        if (clock_) start_ = std::chrono::steady_clock::now();
    }
    ~PhaseScope() { stop(); }

    void stop() {
        if (!clock_) return;
        auto end = std::chrono::steady_clock::now();
        clock_->add(phase_, role_, std::chrono::duration<double>(end - start_).count());
        clock_ = nullptr;
    }

    PhaseScope(const PhaseScope&) = delete;
    PhaseScope& operator=(const PhaseScope&) = delete;

private:
    PhaseClock* clock_;
    std::string phase_, role_;
    std::chrono::steady_clock::time_point start_;
};

}  // namespace tracemix
