#pragma once

#include <chrono>
#include <cstdint>
#include <string>

namespace mapf {

enum class Verdict { sat, unsat, limit };

const char* to_string(Verdict v);

struct Limits {
    std::uint64_t nodes = 0;   // 0 = unlimited
    double seconds = 0.0;      // 0 = unlimited
};

struct SearchStats {
    std::uint64_t nodes = 0;
    std::uint64_t backtracks = 0;
    double wall_ms = 0.0;
};

// Node and wall-clock budget shared by the searches.
class Budget {
public:
    explicit Budget(const Limits& limits)
        : limits_(limits), start_(std::chrono::steady_clock::now()) {}

    // Counts one node; false once a limit is hit.
    bool tick() {
        ++nodes_;
        if (exhausted_) return false;
        if (limits_.nodes && nodes_ > limits_.nodes) exhausted_ = true;
        if (limits_.seconds > 0 && (nodes_ & 255) == 0 && elapsed_ms() > limits_.seconds * 1000.0) exhausted_ = true;
        return !exhausted_;
    }
    bool exhausted() const { return exhausted_; }
    void exhaust() { exhausted_ = true; }
    std::uint64_t nodes() const { return nodes_; }
    double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    Limits limits_;
    std::chrono::steady_clock::time_point start_;
    std::uint64_t nodes_ = 0;
    bool exhausted_ = false;
};

}  // namespace mapf
