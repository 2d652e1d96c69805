#include "mapf/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "mapf/io.hpp"
#include "mapf/solver_timed.hpp"

namespace mapf {

const char* to_string(Mode m) {
    switch (m) {
        case Mode::timed: return "timed";
        case Mode::order_ac: return "order-ac";
        case Mode::order_dl: return "order-dl";
    }
    return "?";
}

Mode parse_mode(std::string_view text) {
    for (auto m : {Mode::timed, Mode::order_ac, Mode::order_dl})
        if (text == to_string(m)) return m;
    throw std::invalid_argument("unknown mode '" + std::string(text) + "'");
}

std::string unsupported_reason(const Instance& inst, const SolveOptions& opt) {
    if (opt.mode != Mode::order_ac) return {};
    if (inst.weighted()) return "order-ac handles unweighted instances only";
    if (!opt.follow) return "order-ac requires --conflicts vsf";
    return {};
}

ConflictReport verify_instance_plan(const Instance& inst, const Plan& plan, bool follow, SigmaMode sigma) {
    if (inst.weighted()) return verify_wplan(inst.with_sigma(sigma), plan);
    return verify_plan(inst.problem, plan, follow);
}

namespace {

int default_max_horizon(const Instance& inst) {
    int longest = 1;
    if (inst.delta)
        for (int d : *inst.delta) longest = std::max(longest, d);
    auto k = std::max<std::size_t>(1, inst.problem.num_agents());
    return static_cast<int>(std::min<std::size_t>(k * inst.problem.graph.num_vertices() * longest, 1 << 20));
}

}  // namespace

SolveOutcome run_solver(const Instance& inst, const SolveOptions& opt) {
    if (auto why = unsupported_reason(inst, opt); !why.empty()) throw std::invalid_argument(why);
    SolveOutcome out;
    if (opt.mode == Mode::timed) {
        TimedConfig cfg{opt.horizon.value_or(0), opt.follow, opt.limits};
        TimedResult r;
        int max_n = opt.max_horizon > 0 ? opt.max_horizon : default_max_horizon(inst);
        if (inst.weighted()) {
            auto wp = inst.with_sigma(opt.sigma);
            r = opt.horizon ? solve_wtimed(wp, cfg) : solve_wtimed_id(wp, max_n, cfg);
        } else {
            r = opt.horizon ? solve_timed(inst.problem, cfg) : solve_timed_id(inst.problem, max_n, cfg);
        }
        out.verdict = r.verdict;
        out.plan = std::move(r.plan);
        out.makespan = r.horizon;
        out.stats = r.stats;
        return out;
    }
    OrderConfig cfg;
    cfg.limits = opt.limits;
    cfg.seed = opt.seed;
    OrderResult r;
    if (opt.mode == Mode::order_ac) r = solve_order_ac(inst.problem, cfg);
    else if (inst.weighted()) r = solve_order_dl(inst.with_sigma(opt.sigma), cfg);
    else r = solve_order_dl_unweighted(inst.problem, opt.follow, cfg);
    out.verdict = r.verdict;
    out.stats = r.stats;
    if (r.solution) {
        out.plan = r.solution->plan;
        out.makespan = static_cast<int>(out.plan->length());
        out.solution = std::move(r.solution);
    }
    return out;
}

const char* const kBenchHeader = "instance,family,mode,conflicts,sigma,verdict,makespan,wall_ms,nodes,backtracks";

void write_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
    out << kBenchHeader << "\n";
    for (const auto& r : rows) {
        char ms[32];
        std::snprintf(ms, sizeof ms, "%.3f", r.wall_ms);
        out << r.instance << "," << r.family << "," << r.mode << "," << r.conflicts << "," << r.sigma << ","
            << r.verdict << "," << r.makespan << "," << ms << "," << r.nodes << "," << r.backtracks << "\n";
    }
}

std::vector<BenchRow> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kBenchHeader) throw std::runtime_error("unexpected CSV header");
    std::vector<BenchRow> rows;
    for (int number = 2; std::getline(in, line); ++number) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        auto bad = [&] { return std::runtime_error("malformed CSV row at line " + std::to_string(number)); };
        if (cells.size() != 10) throw bad();
        BenchRow r{cells[0], cells[1], cells[2], cells[3], cells[4], cells[5], cells[6]};
        try {
            std::size_t used = 0;
            r.wall_ms = std::stod(cells[7], &used);
            if (used != cells[7].size()) throw bad();
            r.nodes = std::stoull(cells[8], &used);
            if (used != cells[8].size()) throw bad();
            r.backtracks = std::stoull(cells[9], &used);
            if (used != cells[9].size()) throw bad();
        } catch (const std::logic_error&) {
            throw bad();
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<BenchRow> run_bench(const std::vector<std::string>& instance_paths, const BenchConfig& cfg) {
    struct Job {
        const Instance* inst;
        std::string id;
        SolveOptions opt;
    };
    std::vector<std::pair<std::string, Instance>> instances;
    for (const auto& path : instance_paths)
        instances.emplace_back(std::filesystem::path(path).stem().string(), parse_instance(read_file(path)));
    std::sort(instances.begin(), instances.end(), [](auto& l, auto& r) { return l.first < r.first; });

    std::vector<Job> jobs;
    for (const auto& [id, inst] : instances) {
        for (auto mode : cfg.modes) {
            // Weighted instances take their conflict semantics from sigma alone.
            std::vector<bool> settings = inst.weighted() ? std::vector<bool>{true} : cfg.follow;
            for (bool follow : settings) {
                SolveOptions opt;
                opt.mode = mode;
                opt.follow = follow;
                opt.sigma = cfg.sigma;
                opt.limits = cfg.limits;
                opt.seed = cfg.seed;
                if (unsupported_reason(inst, opt).empty()) jobs.push_back({&inst, id, opt});
            }
        }
    }

    std::vector<BenchRow> rows(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < jobs.size();) {
            const auto& job = jobs[i];
            auto& row = rows[i];
            row.instance = job.id;
            auto fam = job.inst->meta.find("family");
            row.family = fam == job.inst->meta.end() ? "unknown" : fam->second;
            row.mode = to_string(job.opt.mode);
            row.conflicts = job.inst->weighted() ? "-" : (job.opt.follow ? "vsf" : "vs");
            row.sigma = job.inst->weighted() ? job.opt.sigma.to_string() : "-";
            auto out = run_solver(*job.inst, job.opt);
            if (out.verdict == Verdict::sat &&
                !verify_instance_plan(*job.inst, *out.plan, job.opt.follow, job.opt.sigma).empty())
                row.verdict = "unsound";
            else
                row.verdict = to_string(out.verdict);
            row.makespan = out.makespan ? std::to_string(*out.makespan) : "-";
            row.wall_ms = out.stats.wall_ms;
            row.nodes = out.stats.nodes;
            row.backtracks = out.stats.backtracks;
        }
    };
    unsigned n = std::max(1u, std::min<unsigned>(cfg.workers, static_cast<unsigned>(jobs.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return rows;
}

std::string cactus_svg(const std::vector<BenchRow>& rows) {
    std::map<std::string, std::vector<double>> curves;
    std::size_t total = 0;
    for (const auto& r : rows) {
        std::string label = r.mode;
        if (r.conflicts != "-") label += " " + r.conflicts;
        if (r.sigma != "-") label += " " + r.sigma;
        auto& times = curves[label];
        if (r.verdict == "sat" || r.verdict == "unsat") times.push_back(r.wall_ms);
    }
    double max_time = 1;
    for (auto& [label, times] : curves) {
        std::sort(times.begin(), times.end());
        total = std::max(total, times.size());
        if (!times.empty()) max_time = std::max(max_time, times.back());
    }
    total = std::max<std::size_t>(total, 1);

    const double w = 640, h = 400, left = 60, right = 180, top = 20, bottom = 50;
    const double pw = w - left - right, ph = h - top - bottom;
    auto px = [&](double t) { return left + pw * t / max_time; };
    auto py = [&](double count) { return top + ph * (1 - count / static_cast<double>(total)); };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2"};

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\"" << top + ph
        << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph
        << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        double t = max_time * i / 4;
        char tick[32];
        std::snprintf(tick, sizeof tick, "%.0f", t);
        svg << "<text x=\"" << px(t) << "\" y=\"" << top + ph + 16 << "\" text-anchor=\"middle\">" << tick
            << "</text>\n";
        double c = static_cast<double>(total) * i / 4;
        std::snprintf(tick, sizeof tick, "%.0f", c);
        svg << "<text x=\"" << left - 6 << "\" y=\"" << py(c) + 4 << "\" text-anchor=\"end\">" << tick
            << "</text>\n";
    }
    svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << h - 12 << "\" text-anchor=\"middle\">time (ms)</text>\n";
    svg << "<text transform=\"translate(16," << top + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">solved</text>\n";

    std::size_t i = 0;
    for (const auto& [label, times] : curves) {
        const char* color = colors[i % std::size(colors)];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"" << px(0) << ","
            << py(0);
        for (std::size_t k = 0; k < times.size(); ++k)
            svg << " " << px(times[k]) << "," << py(static_cast<double>(k)) << " " << px(times[k]) << ","
                << py(static_cast<double>(k + 1));
        svg << " " << px(max_time) << "," << py(static_cast<double>(times.size())) << "\"/>\n";
        double ly = top + 14 + 18 * static_cast<double>(i);
        svg << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << ly - 4 << "\" x2=\"" << left + pw + 32 << "\" y2=\""
            << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << left + pw + 38 << "\" y=\"" << ly << "\">" << label << "</text>\n";
        ++i;
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace mapf
