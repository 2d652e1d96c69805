#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "mapf/bench.hpp"
#include "mapf/instance_gen.hpp"
#include "mapf/io.hpp"

namespace {

constexpr int kExitUsage = 2;

int exit_code(mapf::Verdict v) {
    switch (v) {
        case mapf::Verdict::sat: return 10;
        case mapf::Verdict::unsat: return 20;
        case mapf::Verdict::limit: return 30;
    }
    return kExitUsage;
}

std::uint64_t effective_seed(std::uint64_t flag) {
    if (const char* env = std::getenv("MAPF_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw std::invalid_argument("MAPF_SEED is not an unsigned integer");
        }
    }
    return flag;
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") std::cout << text;
    else mapf::write_file(path, text);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-agent path finding with partial-order and time-expanded solvers"};
    app.require_subcommand(1);

    std::string instance_path, plan_path, out_path, mode = "order-dl", conflicts = "vsf", sigma = "vf";
    int horizon = 0, max_horizon = 0;
    double time_limit = 0;
    std::uint64_t seed = 0;

    auto* solve = app.add_subcommand("solve", "Solve an instance; exit 10 sat, 20 unsat, 30 limit");
    solve->add_option("instance", instance_path, "Instance file")->required();
    solve->add_option("--mode", mode, "timed | order-ac | order-dl")
        ->check(CLI::IsMember({"timed", "order-ac", "order-dl"}));
    solve->add_option("--conflicts", conflicts, "vs | vsf (unweighted instances)")
        ->check(CLI::IsMember({"vs", "vsf"}));
    solve->add_option("--sigma", sigma, "vf | ef | sf:D (weighted instances)");
    solve->add_option("--horizon", horizon, "Timed mode: solve this horizon only")->check(CLI::NonNegativeNumber);
    solve->add_option("--max-horizon", max_horizon, "Timed mode: deepening bound")->check(CLI::PositiveNumber);
    solve->add_option("--time-limit", time_limit, "Seconds, 0 for none")->check(CLI::NonNegativeNumber);
    solve->add_option("--seed", seed, "Agent tie-break shuffle for the order solvers");
    solve->add_option("-o,--output", out_path, "Plan output file (default stdout)");

    std::string verify_conflicts = "vsf", verify_sigma = "vf";
    auto* verify = app.add_subcommand("verify", "Check a plan; exit 0 iff conflict-free");
    verify->add_option("instance", instance_path, "Instance file")->required();
    verify->add_option("plan", plan_path, "Plan file")->required();
    verify->add_option("--conflicts", verify_conflicts, "vs | vsf")->check(CLI::IsMember({"vs", "vsf"}));
    verify->add_option("--sigma", verify_sigma, "vf | ef | sf:D");

    mapf::GenSpec spec;
    std::string family = "grid";
    int max_duration = 0;
    auto* gen = app.add_subcommand("gen", "Generate an instance");
    gen->add_option("--family", family, "grid | maze | room | random")
        ->check(CLI::IsMember({"grid", "maze", "room", "random"}));
    gen->add_option("--size", spec.size, "Grid side")->check(CLI::PositiveNumber);
    gen->add_option("--agents", spec.agents, "Number of agents")->check(CLI::NonNegativeNumber);
    gen->add_option("--room-size", spec.room_size, "Room side")->check(CLI::PositiveNumber);
    gen->add_option("--density", spec.density, "Cell probability (random family)")->check(CLI::Range(0.0, 1.0));
    gen->add_option("--seed", spec.seed, "Generator seed");
    gen->add_option("--max-duration", max_duration, "Weighted: durations in [1, D]")->check(CLI::PositiveNumber);
    gen->add_option("-o,--output", out_path, "Output file (default stdout)");

    std::vector<std::string> bench_inputs, bench_modes{"timed", "order-ac", "order-dl"}, bench_conflicts{"vsf", "vs"};
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    auto* bench = app.add_subcommand("bench", "Run the solver matrix over instances and write CSV");
    bench->add_option("inputs", bench_inputs, "Instance files or directories (*.lp)")->required();
    bench->add_option("--modes", bench_modes, "Solver modes")->delimiter(',')
        ->check(CLI::IsMember({"timed", "order-ac", "order-dl"}));
    bench->add_option("--conflicts", bench_conflicts, "Conflict settings")->delimiter(',')
        ->check(CLI::IsMember({"vs", "vsf"}));
    bench->add_option("--sigma", sigma, "Sigma mode for weighted instances");
    bench->add_option("--time-limit", time_limit, "Seconds per run, 0 for none")->check(CLI::NonNegativeNumber);
    bench->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
    bench->add_option("--seed", seed, "Agent tie-break shuffle for the order solvers");
    bench->add_option("-o,--output", out_path, "CSV output file (default stdout)");

    std::string csv_path;
    auto* plot = app.add_subcommand("plot", "Render a cactus plot from bench CSV");
    plot->add_option("csv", csv_path, "Bench CSV")->required();
    plot->add_option("-o,--output", out_path, "SVG output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*solve) {
            auto inst = mapf::parse_instance(mapf::read_file(instance_path));
            mapf::SolveOptions opt;
            opt.mode = mapf::parse_mode(mode);
            opt.follow = conflicts == "vsf";
            opt.sigma = mapf::SigmaMode::parse(sigma);
            if (solve->count("--horizon")) opt.horizon = horizon;
            opt.max_horizon = max_horizon;
            opt.limits.seconds = time_limit;
            opt.seed = effective_seed(seed);
            auto out = mapf::run_solver(inst, opt);
            std::string text = "% verdict=" + std::string(mapf::to_string(out.verdict)) + "\n";
            if (out.solution) text += mapf::emit_solution(inst.problem, *out.solution);
            else if (out.plan) text += mapf::emit_plan(inst.problem, *out.plan);
            emit(out_path, text);
            std::cerr << mapf::to_string(out.verdict) << " nodes=" << out.stats.nodes
                      << " backtracks=" << out.stats.backtracks << " wall_ms=" << out.stats.wall_ms << "\n";
            return exit_code(out.verdict);
        }
        if (*verify) {
            auto inst = mapf::parse_instance(mapf::read_file(instance_path));
            auto plan = mapf::parse_plan(mapf::read_file(plan_path), inst);
            auto report = mapf::verify_instance_plan(inst, plan, verify_conflicts == "vsf",
                                                     mapf::SigmaMode::parse(verify_sigma));
            for (const auto& c : report.conflicts) std::cout << mapf::describe(inst.problem, c) << "\n";
            if (report.empty()) std::cout << "conflict-free, length " << plan.length() << "\n";
            return report.empty() ? 0 : 1;
        }
        if (*gen) {
            spec.family = mapf::parse_family(family);
            spec.seed = effective_seed(spec.seed);
            if (max_duration > 0) spec.max_duration = max_duration;
            emit(out_path, mapf::serialize_instance(mapf::gen(spec)));
            return 0;
        }
        if (*bench) {
            std::vector<std::string> paths;
            for (const auto& in : bench_inputs) {
                if (std::filesystem::is_directory(in)) {
                    for (const auto& entry : std::filesystem::directory_iterator(in))
                        if (entry.path().extension() == ".lp") paths.push_back(entry.path().string());
                } else {
                    paths.push_back(in);
                }
            }
            mapf::BenchConfig cfg;
            cfg.modes.clear();
            for (const auto& m : bench_modes) cfg.modes.push_back(mapf::parse_mode(m));
            cfg.follow.clear();
            for (const auto& c : bench_conflicts) cfg.follow.push_back(c == "vsf");
            cfg.sigma = mapf::SigmaMode::parse(sigma);
            cfg.limits.seconds = time_limit;
            cfg.workers = workers;
            cfg.seed = effective_seed(seed);
            std::ostringstream csv;
            mapf::write_csv(csv, mapf::run_bench(paths, cfg));
            emit(out_path, csv.str());
            return 0;
        }
        if (*plot) {
            std::ifstream in(csv_path);
            if (!in) throw std::runtime_error("cannot read " + csv_path);
            emit(out_path, mapf::cactus_svg(mapf::read_csv(in)));
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
