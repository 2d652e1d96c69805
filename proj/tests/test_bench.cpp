#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "fixtures.hpp"
#include "mapf/bench.hpp"
#include "mapf/instance_gen.hpp"

using namespace mapf;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("mapf_bench_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("CSV header and round trip") {
    CHECK(std::string(kBenchHeader) == "instance,family,mode,conflicts,sigma,verdict,makespan,wall_ms,nodes,backtracks");
    std::vector<BenchRow> rows{{"tree", "-", "timed", "vsf", "-", "sat", "6", 1.25, 40, 3},
                               {"w1", "grid", "order-dl", "-", "sf:2", "limit", "-", 1000, 7, 0}};
    std::ostringstream out;
    write_csv(out, rows);
    auto text = out.str();
    CHECK(text.rfind(std::string(kBenchHeader) + "\n", 0) == 0);
    CHECK(text.find("tree,-,timed,vsf,-,sat,6,1.250,40,3\n") != std::string::npos);
    std::istringstream in(text);
    auto back = read_csv(in);
    REQUIRE(back.size() == 2);
    CHECK(back[1].sigma == "sf:2");
    CHECK(back[1].wall_ms == doctest::Approx(1000));
    CHECK(back[0].nodes == 40);

    std::istringstream bad_header("instance,mode\nx,y\n");
    CHECK_THROWS_AS(read_csv(bad_header), std::runtime_error);
    std::istringstream short_row(std::string(kBenchHeader) + "\ntree,-,timed\n");
    CHECK_THROWS_AS(read_csv(short_row), std::runtime_error);
    std::istringstream bad_number(std::string(kBenchHeader) + "\ntree,-,timed,vsf,-,sat,6,abc,40,3\n");
    CHECK_THROWS_AS(read_csv(bad_number), std::runtime_error);
}

TEST_CASE("modes") {
    CHECK(parse_mode("order-ac") == Mode::order_ac);
    CHECK(std::string(to_string(Mode::order_dl)) == "order-dl");
    CHECK_THROWS_AS(parse_mode("sat"), std::invalid_argument);
}

TEST_CASE("run_solver on the tree instance") {
    const auto& i = fx::tree();
    for (auto mode : {Mode::timed, Mode::order_ac, Mode::order_dl})
        for (bool follow : {true, false}) {
            SolveOptions opt;
            opt.mode = mode;
            opt.follow = follow;
            if (!unsupported_reason(i, opt).empty()) {
                CHECK(mode == Mode::order_ac);
                CHECK_FALSE(follow);
                CHECK_THROWS_AS(run_solver(i, opt), std::invalid_argument);
                continue;
            }
            auto out = run_solver(i, opt);
            REQUIRE(out.verdict == Verdict::sat);
            CHECK(verify_instance_plan(i, *out.plan, follow, opt.sigma).empty());
            CHECK(*out.makespan == static_cast<int>(out.plan->length()));
            if (mode == Mode::timed) CHECK(*out.makespan == (follow ? 6 : 5));
            else CHECK(out.solution);
        }
    SolveOptions fixed;
    fixed.mode = Mode::timed;
    fixed.horizon = 5;
    CHECK(run_solver(i, fixed).verdict == Verdict::unsat);
}

TEST_CASE("run_solver on weighted instances") {
    auto i = gen({Family::grid, 4, 3, 3, 0.5, 5, 3});
    SolveOptions ac;
    ac.mode = Mode::order_ac;
    CHECK_FALSE(unsupported_reason(i, ac).empty());
    for (auto sigma : {SigmaMode::vf(), SigmaMode::ef(), SigmaMode::sf(2)}) {
        SolveOptions opt;
        opt.mode = Mode::order_dl;
        opt.sigma = sigma;
        auto out = run_solver(i, opt);
        REQUIRE(out.verdict == Verdict::sat);
        CHECK(verify_instance_plan(i, *out.plan, true, sigma).empty());
    }
}

TEST_CASE("run_bench rows and plot") {
    auto dir = scratch("rows");
    write_file((dir / "b.lp").string(), serialize_instance(gen({Family::grid, 3, 2, 3, 0.5, 2, {}})));
    write_file((dir / "a.lp").string(), serialize_instance(fx::tree()));
    write_file((dir / "c.lp").string(), serialize_instance(gen({Family::grid, 3, 2, 3, 0.5, 2, 2})));
    BenchConfig cfg;
    cfg.limits.seconds = 20;
    cfg.workers = 3;
    std::vector<std::string> paths{(dir / "c.lp").string(), (dir / "a.lp").string(), (dir / "b.lp").string()};
    auto rows = run_bench(paths, cfg);
    // Unweighted: timed x2, order-ac x1, order-dl x2. Weighted: timed, order-dl.
    REQUIRE(rows.size() == 12);
    CHECK(rows[0].instance == "a");
    CHECK(rows[0].mode == "timed");
    CHECK(rows[0].conflicts == "vsf");
    CHECK(rows[0].makespan == "6");
    CHECK(rows[5].instance == "b");
    CHECK(rows[10].instance == "c");
    CHECK(rows[10].conflicts == "-");
    CHECK(rows[10].sigma == "vf");
    for (const auto& r : rows) {
        CHECK(r.verdict != "unsound");
        CHECK(r.verdict == "sat");
    }
    cfg.workers = 1;
    auto serial = run_bench(paths, cfg);
    REQUIRE(serial.size() == rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        CHECK(serial[k].instance == rows[k].instance);
        CHECK(serial[k].mode == rows[k].mode);
        CHECK(serial[k].makespan == rows[k].makespan);
    }

    auto svg = cactus_svg(rows);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find(">timed vsf<") != std::string::npos);
    CHECK(svg.find(">order-dl vf<") != std::string::npos);
    CHECK(cactus_svg({}).find("</svg>") != std::string::npos);
    fs::remove_all(dir);
}
