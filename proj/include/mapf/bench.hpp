#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mapf/model.hpp"
#include "mapf/search.hpp"
#include "mapf/solver_order.hpp"

namespace mapf {

enum class Mode { timed, order_ac, order_dl };

const char* to_string(Mode m);
Mode parse_mode(std::string_view text);

struct SolveOptions {
    Mode mode = Mode::order_dl;
    bool follow = true;                 // unweighted conflict setting: vsf (true) or vs
    SigmaMode sigma = SigmaMode::vf();  // weighted instances only
    std::optional<int> horizon;         // timed: fixed horizon instead of deepening
    int max_horizon = 0;                // timed deepening bound; 0 picks one from the instance
    Limits limits;
    std::uint64_t seed = 0;
};

struct SolveOutcome {
    Verdict verdict = Verdict::limit;
    std::optional<Plan> plan;
    std::optional<OrderSolution> solution;  // order modes
    std::optional<int> makespan;             // plan length, or the last horizon tried by timed search
    SearchStats stats;
};

// Empty when the mode supports the instance, otherwise the reason.
std::string unsupported_reason(const Instance& inst, const SolveOptions& opt);

// Throws std::invalid_argument for unsupported combinations.
SolveOutcome run_solver(const Instance& inst, const SolveOptions& opt);

// Checks a plan against the instance's conflict semantics.
ConflictReport verify_instance_plan(const Instance& inst, const Plan& plan, bool follow, SigmaMode sigma);

struct BenchRow {
    std::string instance;
    std::string family;
    std::string mode;
    std::string conflicts;
    std::string sigma;
    std::string verdict;
    std::string makespan;
    double wall_ms = 0;
    std::uint64_t nodes = 0;
    std::uint64_t backtracks = 0;
};

extern const char* const kBenchHeader;

void write_csv(std::ostream& out, const std::vector<BenchRow>& rows);
// Throws std::runtime_error on a header mismatch or malformed row.
std::vector<BenchRow> read_csv(std::istream& in);

struct BenchConfig {
    std::vector<Mode> modes{Mode::timed, Mode::order_ac, Mode::order_dl};
    std::vector<bool> follow{true, false};
    SigmaMode sigma = SigmaMode::vf();
    Limits limits;
    unsigned workers = 1;
    std::uint64_t seed = 0;
};

// Runs every supported (instance, mode, conflicts) combination. Rows come
// out ordered by instance id, then configuration order.
std::vector<BenchRow> run_bench(const std::vector<std::string>& instance_paths, const BenchConfig& cfg);

// Cactus plot: one step curve per mode/conflicts/sigma column value,
// solved count (sat or unsat) against time.
std::string cactus_svg(const std::vector<BenchRow>& rows);

}  // namespace mapf
