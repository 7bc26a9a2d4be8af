#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "forage/experiment.hpp"

using namespace forage;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "forage_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    REQUIRE(out.good());
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(FORAGE_SIM_BIN) + " " + args + " 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

bool any_error_contains(const std::vector<std::string>& errors, const std::string& what) {
    for (const auto& e : errors)
        if (e.find(what) != std::string::npos) return true;
    return false;
}

} // namespace

TEST_CASE("an empty spec parses to all defaults") {
    const ParseOutcome out = parse_spec("");
    REQUIRE(out.ok());
    CHECK(out.spec.kind == ControllerKind::Adaptive);
    CHECK(out.spec.runs == 1);
    CHECK(out.spec.master_seed == 1);
    CHECK(out.spec.sweeps.empty());
    CHECK(out.spec.sweep_points() == 1);
    CHECK(out.spec.world.arena_width == 120.0);
    CHECK(out.spec.ctrl.p0 == 0.2);
}

TEST_CASE("keys accept dotted paths, bare leaves, comments and blanks") {
    const ParseOutcome out = parse_spec(
        "# a comment line\n"
        "world.food_spawn_rate = 1.25\n"
        "num_robots = 12           # trailing comment\n"
        "controller = fixed_ratio\n"
        "fixed_ratio = 0.75\n"
        "\n"
        "p0 = 0.3\n"
        "local_stimulus = true\n"
        "master_seed = 99\n"
        "runs = 4\n"
        "out_dir = results/batch1\n"
        "activity.high_cost = 1.4\n");
    REQUIRE(out.ok());
    CHECK(out.spec.world.food_spawn_rate == 1.25);
    CHECK(out.spec.world.num_robots == 12);
    CHECK(out.spec.kind == ControllerKind::FixedRatio);
    CHECK(out.spec.fixed_ratio == 0.75);
    CHECK(out.spec.ctrl.p0 == 0.3);
    CHECK(out.spec.ctrl.local_stimulus);
    CHECK(out.spec.master_seed == 99);
    CHECK(out.spec.runs == 4);
    CHECK(out.spec.out_dir == "results/batch1");
    CHECK(out.spec.activity.high.cost_mult == 1.4);
}

TEST_CASE("every spec problem is reported at once, with line numbers") {
    const ParseOutcome out = parse_spec(
        "bogus_key = 1\n"
        "p0 = 1.5\n"
        "no equals sign here\n"
        "runs = many\n"
        "controller = sometimes\n"
        "num_robots =\n");
    REQUIRE_FALSE(out.ok());
    CHECK(any_error_contains(out.errors, "line 1"));
    CHECK(any_error_contains(out.errors, "bogus_key"));
    CHECK(any_error_contains(out.errors, "p0"));  // range violation
    CHECK(any_error_contains(out.errors, "line 3"));
    CHECK(any_error_contains(out.errors, "line 4"));
    CHECK(any_error_contains(out.errors, "sometimes"));
    CHECK(any_error_contains(out.errors, "line 6"));
    CHECK(out.errors.size() >= 6);
}

TEST_CASE("type mismatches are caught per key") {
    const ParseOutcome out = parse_spec(
        "food_spawn_rate = fast\n"
        "giveup_steps = 3.7\n"
        "local_stimulus = maybe\n");
    REQUIRE_FALSE(out.ok());
    CHECK(any_error_contains(out.errors, "food_spawn_rate"));
    CHECK(any_error_contains(out.errors, "giveup_steps"));
    CHECK(any_error_contains(out.errors, "local_stimulus"));
}

TEST_CASE("world invariant violations surface as spec errors") {
    const ParseOutcome out = parse_spec("world.forage_max_x = 500\n");
    REQUIRE_FALSE(out.ok());
    CHECK(any_error_contains(out.errors, "forage_area"));
}

TEST_CASE("sweep directives build axes in declaration order") {
    const ParseOutcome out = parse_spec(
        "sweep phi1 = 0.0,0.1,0.2\n"
        "sweep world.num_robots = 10, 20\n");
    REQUIRE(out.ok());
    REQUIRE(out.spec.sweeps.size() == 2);
    CHECK(out.spec.sweeps[0].path == "controller.phi1");
    CHECK(out.spec.sweeps[0].values == std::vector<double>{0.0, 0.1, 0.2});
    CHECK(out.spec.sweeps[1].path == "world.num_robots");
    CHECK(out.spec.sweeps[1].values == std::vector<double>{10.0, 20.0});
    CHECK(out.spec.sweep_points() == 6);
}

TEST_CASE("bad sweep directives are rejected") {
    CHECK(any_error_contains(parse_spec("sweep nothing = 1,2\n").errors, "nothing"));
    CHECK(any_error_contains(parse_spec("sweep local_stimulus = 0,1\n").errors,
                             "not numeric"));
    CHECK(any_error_contains(parse_spec("sweep num_robots = 10,2.5\n").errors,
                             "integers"));
    CHECK(any_error_contains(parse_spec("sweep p0 = \n").errors, "sweep"));
    CHECK(any_error_contains(
        parse_spec("sweep p0 = 0.1\nsweep controller.p0 = 0.2\n").errors, "duplicate"));
    CHECK(any_error_contains(parse_spec("sweep p0 = 0.1,,0.2\n").errors, "sweep value"));
}

TEST_CASE("spec_at_point walks the cross-product with the last axis fastest") {
    ParseOutcome out = parse_spec(
        "sweep delta1 = 0.1,0.2,0.3\n"
        "sweep delta2 = 0.5,0.6\n");
    REQUIRE(out.ok());
    const ExperimentSpec& spec = out.spec;
    CHECK(spec.sweep_points() == 6);

    const double expect[6][2] = {{0.1, 0.5}, {0.1, 0.6}, {0.2, 0.5},
                                 {0.2, 0.6}, {0.3, 0.5}, {0.3, 0.6}};
    for (std::size_t p = 0; p < 6; ++p) {
        const ExperimentSpec ps = spec_at_point(spec, p);
        CHECK(ps.ctrl.delta1 == expect[p][0]);
        CHECK(ps.ctrl.delta2 == expect[p][1]);
    }
    CHECK_THROWS_AS(spec_at_point(spec, 6), std::out_of_range);
}

TEST_CASE("format_double renders twelve significant digits") {
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(2.5) == "2.5");
    CHECK(format_double(1.0 / 3.0) == "0.333333333333");
    CHECK(format_double(-1234.5) == "-1234.5");
    CHECK(format_double(1e20) == "1e+20");
}

TEST_CASE("timeseries and summary rendering") {
    StepSample s;
    s.step = 3;
    s.active_foragers = 2;
    s.stimulus = 1.5;
    s.mean_threshold = 2.25;
    s.food_available = 7;
    s.cum_collected = 80.0;
    s.cum_move = 12.5;
    s.cum_comm = 0.5;
    s.cum_idle = 0.0;
    s.cum_net = 67.0;
    const std::string csv = timeseries_csv(std::vector<StepSample>{s});
    CHECK(csv ==
          "step,active_foragers,stimulus,mean_threshold,food_available,"
          "cum_collected,cum_move,cum_comm,cum_idle,cum_net\n"
          "3,2,1.5,2.25,7,80,12.5,0.5,0,67\n");

    ParseOutcome parsed = parse_spec("sweep p0 = 0.1,0.3\n");
    REQUIRE(parsed.ok());
    CHECK(summary_header(parsed.spec) ==
          "run_id,seed,controller,controller.p0,"
          "trips,successes,failures,collected,spent_total,net_energy,efficiency\n");

    RunResult r;
    r.run_id = "1_0";
    r.seed = 42;
    r.controller = "adaptive";
    r.trips = 5;
    r.successes = 3;
    r.failures = 2;
    r.collected = 160.0;
    r.move_spent = 50.0;
    r.comm_spent = 10.0;
    r.idle_spent = 0.0;
    r.net_energy = 100.0;
    r.efficiency = 160.0 / 60.0;
    CHECK(summary_row(parsed.spec, 1, r) ==
          "1_0,42,adaptive,0.3,5,3,2,160,60,100,2.66666666667\n");
}

TEST_CASE("execute writes one time series per run plus a summary") {
    const fs::path dir = fresh_dir("single");
    ParseOutcome parsed = parse_spec("max_steps = 20\nnum_robots = 3\n");
    REQUIRE(parsed.ok());
    parsed.spec.out_dir = dir.string();

    CHECK(execute(parsed.spec) == 0);

    int files = 0;
    for ([[maybe_unused]] const auto& entry : fs::directory_iterator(dir)) ++files;
    CHECK(files == 2); // timeseries_0_0.csv + summary.csv
    CHECK(fs::exists(dir / "timeseries_0_0.csv"));

    const std::string summary = read_file(dir / "summary.csv");
    CHECK(summary.rfind("run_id,seed,controller,trips,", 0) == 0);
    int lines = 0;
    for (const char c : summary)
        if (c == '\n') ++lines;
    CHECK(lines == 2); // header + one row

    const std::string series = read_file(dir / "timeseries_0_0.csv");
    int srows = 0;
    for (const char c : series)
        if (c == '\n') ++srows;
    CHECK(srows == 21); // header + max_steps samples
}

TEST_CASE("a 3x4 sweep with five runs yields sixty of everything") {
    const fs::path dir = fresh_dir("cross");
    ParseOutcome parsed = parse_spec(
        "max_steps = 10\n"
        "num_robots = 2\n"
        "runs = 5\n"
        "sweep delta1 = 0.1,0.2,0.3\n"
        "sweep delta2 = 0.1,0.2,0.3,0.4\n");
    REQUIRE(parsed.ok());
    parsed.spec.out_dir = dir.string();

    CHECK(execute(parsed.spec) == 0);

    int series_files = 0;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("timeseries_", 0) == 0) ++series_files;
    }
    CHECK(series_files == 60);

    const std::string summary = read_file(dir / "summary.csv");
    int lines = 0;
    for (const char c : summary)
        if (c == '\n') ++lines;
    CHECK(lines == 61); // header + 12 points x 5 runs
}

TEST_CASE("worker count never changes the bytes on disk") {
    const std::string spec_text =
        "max_steps = 120\n"
        "num_robots = 6\n"
        "runs = 3\n"
        "food_spawn_rate = 1.0\n"
        "sweep phi1 = 0.2,0.5\n";
    ParseOutcome parsed = parse_spec(spec_text);
    REQUIRE(parsed.ok());

    const fs::path serial = fresh_dir("serial");
    parsed.spec.out_dir = serial.string();
    CHECK(execute(parsed.spec, 1) == 0);

    const fs::path pooled = fresh_dir("pooled");
    parsed.spec.out_dir = pooled.string();
    CHECK(execute(parsed.spec, 8) == 0);

    CHECK(read_file(serial / "summary.csv") == read_file(pooled / "summary.csv"));
    CHECK(read_file(serial / "timeseries_0_0.csv") ==
          read_file(pooled / "timeseries_0_0.csv"));
    CHECK(read_file(serial / "timeseries_1_2.csv") ==
          read_file(pooled / "timeseries_1_2.csv"));

    // Re-running in place overwrites with identical bytes.
    CHECK(execute(parsed.spec, 3) == 0);
    CHECK(read_file(serial / "summary.csv") == read_file(pooled / "summary.csv"));
}

TEST_CASE("a faulting point aborts with status 2 after flushing finished rows") {
    const fs::path dir = fresh_dir("fault");
    ParseOutcome parsed = parse_spec(
        "max_steps = 10\n"
        "num_robots = 2\n"
        "sweep th_init = 2.0,500.0\n"); // 500 violates th_init <= th_max at run time
    REQUIRE(parsed.ok());
    parsed.spec.out_dir = dir.string();

    CHECK(execute(parsed.spec) == 2);
    CHECK(fs::exists(dir / "timeseries_0_0.csv"));
    CHECK_FALSE(fs::exists(dir / "timeseries_1_0.csv"));
    const std::string summary = read_file(dir / "summary.csv");
    int lines = 0;
    for (const char c : summary)
        if (c == '\n') ++lines;
    CHECK(lines == 2); // header + the completed first point
}

TEST_CASE("emit_plot_data groups, sorts and aggregates") {
    const std::string summary =
        "run_id,seed,controller,world.num_robots,trips,successes,failures,"
        "collected,spent_total,net_energy,efficiency\n"
        "1_0,5,adaptive,20,4,2,2,100,50,50,2\n"
        "0_0,3,adaptive,10,2,1,1,40,40,0,1\n"
        "0_1,4,adaptive,10,3,2,1,90,30,60,3\n";

    const PlotResult plot = emit_plot_data(summary, "world.num_robots", "efficiency");
    REQUIRE(plot.ok());
    CHECK(plot.text ==
          "# world.num_robots mean_efficiency std_efficiency\n"
          "10 2 1.41421356237\n" // mean of {1,3}, sample std sqrt(2)
          "20 2 0\n");           // single row: std 0

    const PlotResult bad = emit_plot_data(summary, "foo", "efficiency");
    REQUIRE_FALSE(bad.ok());
    CHECK(any_error_contains(bad.errors, "foo"));

    const PlotResult bad2 = emit_plot_data(summary, "world.num_robots", "bar");
    CHECK(any_error_contains(bad2.errors, "bar"));
}

TEST_CASE("command line: run and plot round-trip with documented exit codes") {
    const fs::path dir = fresh_dir("cli");
    const fs::path spec_path = dir / "exp.forage";
    write_file(spec_path,
               "max_steps = 40\n"
               "num_robots = 4\n"
               "runs = 2\n"
               "food_spawn_rate = 1.0\n"
               "sweep world.num_robots = 4,8\n");

    const fs::path out = dir / "out";
    CHECK(run_cli("run --spec " + spec_path.string() + " --out " + out.string() +
                  " --workers 4") == 0);
    CHECK(fs::exists(out / "summary.csv"));
    CHECK(fs::exists(out / "timeseries_1_1.csv"));

    const fs::path plot_path = dir / "plot.txt";
    CHECK(run_cli("plot --summary " + (out / "summary.csv").string() +
                  " --axis world.num_robots --value efficiency --out " +
                  plot_path.string()) == 0);
    const std::string plot = read_file(plot_path);
    CHECK(plot.rfind("# world.num_robots", 0) == 0);

    // Spec problems exit 1.
    CHECK(run_cli("run --spec " + (dir / "missing.forage").string() + " --out " +
                  out.string()) == 1);
    const fs::path bad_spec = dir / "bad.forage";
    write_file(bad_spec, "p0 = 1.5\n");
    CHECK(run_cli("run --spec " + bad_spec.string() + " --out " + out.string()) == 1);
    CHECK(run_cli("plot --summary " + (out / "summary.csv").string() +
                  " --axis nope --value efficiency --out " + plot_path.string()) == 1);
    CHECK(run_cli("run") == 1); // missing required options
}
