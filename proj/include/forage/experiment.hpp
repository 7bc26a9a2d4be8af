#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "forage/engine.hpp"

namespace forage {

/// One sweep dimension: a parameter path and the values it takes.
struct SweepAxis {
    std::string path;
    std::vector<double> values;
};

/// A parsed experiment: base configuration, controller choice, seeding and
/// sweep axes. The sweep cross-product enumerates points with the last axis
/// varying fastest.
struct ExperimentSpec {
    WorldConfig world;
    ControllerParams ctrl;
    ActivityProfile activity;
    ControllerKind kind = ControllerKind::Adaptive;
    int fixed_target = 0;
    double fixed_ratio = 0.0;
    std::uint64_t master_seed = 1;
    int runs = 1;
    std::vector<SweepAxis> sweeps;
    std::string out_dir = "out";

    Controller controller() const;
    std::size_t sweep_points() const;
};

struct ParseOutcome {
    ExperimentSpec spec;
    std::vector<std::string> errors; // empty iff the spec parsed and validated

    bool ok() const { return errors.empty(); }
};

/// Parses the line-oriented "key = value" format (see README). Unknown keys,
/// syntax errors, type mismatches and config violations are all reported at
/// once, each with its line number where applicable.
ParseOutcome parse_spec(std::string_view text);

/// Applies the sweep values of the given point to a copy of the spec.
/// point_index must be < sweep_points().
ExperimentSpec spec_at_point(const ExperimentSpec& spec, std::size_t point_index);

/// Runs every (sweep point, run index) job, optionally on a worker pool, and
/// writes timeseries_<point>_<run>.csv per run plus one summary.csv into
/// spec.out_dir. Outputs are committed in (point, run) order whatever the
/// worker count, so the artifact set is byte-identical for any concurrency.
/// Returns 0 on success, 2 on a runtime fault (completed rows are flushed).
int execute(const ExperimentSpec& spec, int workers = 1);

/// CSV rendering used by execute(); exposed for tests and tools.
std::string timeseries_csv(std::span<const StepSample> series);
std::string summary_header(const ExperimentSpec& spec);
std::string summary_row(const ExperimentSpec& spec, std::size_t point_index,
                        const RunResult& result);

struct PlotResult {
    std::string text;
    std::vector<std::string> errors;

    bool ok() const { return errors.empty(); }
};

/// Groups summary rows by the axis field and emits "axis mean std" lines
/// sorted ascending by axis value. Unknown fields are reported by name.
PlotResult emit_plot_data(std::string_view summary_csv, const std::string& axis_field,
                          const std::string& value_field);

/// %.12g rendering used for every floating-point value written to disk.
std::string format_double(double v);

} // namespace forage
