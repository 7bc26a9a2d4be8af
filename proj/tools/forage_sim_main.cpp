#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "forage/experiment.hpp"

namespace {

bool read_file(const std::string& path, std::string& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::ostringstream buf;
    buf << in.rdbuf();
    out = buf.str();
    return true;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Collective-foraging simulator and experiment harness"};
    app.require_subcommand(1);

    std::string spec_path, out_dir;
    int workers = 1;
    std::uint64_t master_seed = 0;
    CLI::App* run_cmd = app.add_subcommand("run", "Execute an experiment spec");
    run_cmd->add_option("--spec", spec_path, "Experiment spec file")->required();
    run_cmd->add_option("--out", out_dir, "Output directory")->required();
    run_cmd->add_option("--workers", workers, "Concurrent run workers (default 1)");
    CLI::Option* seed_opt =
        run_cmd->add_option("--master-seed", master_seed, "Override the spec's master seed");

    std::string summary_path, axis_field, value_field, plot_out;
    CLI::App* plot_cmd =
        app.add_subcommand("plot", "Aggregate a summary.csv into plot-ready columns");
    plot_cmd->add_option("--summary", summary_path, "summary.csv from a run")->required();
    plot_cmd->add_option("--axis", axis_field, "Summary column for the x axis")->required();
    plot_cmd->add_option("--value", value_field, "Summary column to aggregate")->required();
    plot_cmd->add_option("--out", plot_out, "Output text file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1; // usage problems are spec errors
    }

    if (run_cmd->parsed()) {
        std::string text;
        if (!read_file(spec_path, text)) {
            std::cerr << "cannot read spec file '" << spec_path << "'\n";
            return 1;
        }
        forage::ParseOutcome parsed = forage::parse_spec(text);
        if (!parsed.ok()) {
            for (const auto& e : parsed.errors) std::cerr << spec_path << ": " << e << "\n";
            return 1;
        }
        parsed.spec.out_dir = out_dir;
        if (seed_opt->count() > 0) parsed.spec.master_seed = master_seed;
        return forage::execute(parsed.spec, workers < 1 ? 1 : workers);
    }

    std::string text;
    if (!read_file(summary_path, text)) {
        std::cerr << "cannot read summary file '" << summary_path << "'\n";
        return 1;
    }
    forage::PlotResult plot = forage::emit_plot_data(text, axis_field, value_field);
    if (!plot.ok()) {
        for (const auto& e : plot.errors) std::cerr << e << "\n";
        return 1;
    }
    std::ofstream out(plot_out, std::ios::binary | std::ios::trunc);
    out << plot.text;
    out.flush();
    if (!out) {
        std::cerr << "cannot write '" << plot_out << "'\n";
        return 2;
    }
    return 0;
}
