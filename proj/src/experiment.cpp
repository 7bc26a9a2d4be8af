#include "forage/experiment.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <stdexcept>
#include <thread>

namespace forage {

namespace {

enum class FieldType { Double, Int, Bool };

// One settable experiment parameter: canonical dotted path, type, and
// accessors. Every numeric entry is sweepable; bare leaf names double as
// aliases because all leaves are unique.
struct ParamEntry {
    const char* path;
    FieldType type;
    double (*get)(const ExperimentSpec&);
    void (*set)(ExperimentSpec&, double);
};

#define FIELD_D(PATH, EXPR)                                        \
    {PATH, FieldType::Double,                                      \
     [](const ExperimentSpec& s) -> double { return s.EXPR; },     \
     [](ExperimentSpec& s, double v) { s.EXPR = v; }}
#define FIELD_I(PATH, EXPR)                                                    \
    {PATH, FieldType::Int,                                                     \
     [](const ExperimentSpec& s) -> double { return static_cast<double>(s.EXPR); }, \
     [](ExperimentSpec& s, double v) { s.EXPR = static_cast<int>(std::llround(v)); }}

const ParamEntry kRegistry[] = {
    FIELD_D("world.arena_width", world.arena_width),
    FIELD_D("world.arena_height", world.arena_height),
    FIELD_D("world.home_center_x", world.home_center.x),
    FIELD_D("world.home_center_y", world.home_center.y),
    FIELD_D("world.home_radius", world.home_radius),
    FIELD_D("world.forage_min_x", world.forage_area.min.x),
    FIELD_D("world.forage_min_y", world.forage_area.min.y),
    FIELD_D("world.forage_max_x", world.forage_area.max.x),
    FIELD_D("world.forage_max_y", world.forage_area.max.y),
    FIELD_D("world.food_spawn_rate", world.food_spawn_rate),
    FIELD_D("world.food_spawn_rate_alt", world.food_spawn_rate_alt),
    FIELD_I("world.food_alternate_period", world.food_alternate_period),
    FIELD_I("world.initial_food", world.initial_food),
    FIELD_D("world.food_energy", world.food_energy),
    FIELD_D("world.move_cost", world.move_cost),
    FIELD_D("world.comm_cost", world.comm_cost),
    FIELD_D("world.idle_cost", world.idle_cost),
    FIELD_D("world.encounter_radius", world.encounter_radius),
    FIELD_D("world.sense_radius", world.sense_radius),
    FIELD_D("world.robot_speed", world.robot_speed),
    FIELD_D("world.max_turn", world.max_turn),
    FIELD_I("world.giveup_steps", world.giveup_steps),
    FIELD_I("world.max_steps", world.max_steps),
    FIELD_I("world.num_robots", world.num_robots),

    FIELD_D("controller.delta1", ctrl.delta1),
    FIELD_D("controller.delta2", ctrl.delta2),
    FIELD_D("controller.phi1", ctrl.phi1),
    FIELD_D("controller.phi2", ctrl.phi2),
    FIELD_D("controller.p0", ctrl.p0),
    FIELD_D("controller.th_init", ctrl.th_init),
    FIELD_D("controller.s_init", ctrl.s_init),
    FIELD_D("controller.th_min", ctrl.th_min),
    FIELD_D("controller.th_max", ctrl.th_max),
    FIELD_D("controller.s_min", ctrl.s_min),
    FIELD_D("controller.s_max", ctrl.s_max),
    FIELD_D("controller.s_low", ctrl.s_low),
    FIELD_D("controller.s_high", ctrl.s_high),
    {"controller.local_stimulus", FieldType::Bool,
     [](const ExperimentSpec& s) -> double { return s.ctrl.local_stimulus ? 1.0 : 0.0; },
     [](ExperimentSpec& s, double v) { s.ctrl.local_stimulus = v != 0.0; }},

    FIELD_D("activity.low_speed", activity.low.speed_mult),
    FIELD_D("activity.low_sense", activity.low.sense_mult),
    FIELD_D("activity.low_cost", activity.low.cost_mult),
    FIELD_D("activity.normal_speed", activity.normal.speed_mult),
    FIELD_D("activity.normal_sense", activity.normal.sense_mult),
    FIELD_D("activity.normal_cost", activity.normal.cost_mult),
    FIELD_D("activity.high_speed", activity.high.speed_mult),
    FIELD_D("activity.high_sense", activity.high.sense_mult),
    FIELD_D("activity.high_cost", activity.high.cost_mult),

    FIELD_I("fixed_target", fixed_target),
    FIELD_D("fixed_ratio", fixed_ratio),
};

#undef FIELD_D
#undef FIELD_I

std::string_view leaf_of(std::string_view path) {
    const auto dot = path.rfind('.');
    return dot == std::string_view::npos ? path : path.substr(dot + 1);
}

const ParamEntry* find_entry(std::string_view key) {
    for (const auto& e : kRegistry)
        if (key == e.path) return &e;
    if (key.find('.') == std::string_view::npos) {
        for (const auto& e : kRegistry) // leaves are unique across the registry
            if (key == leaf_of(e.path)) return &e;
    }
    return nullptr;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

bool parse_double(std::string_view s, double& out) {
    const char* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc{} && p == end && !s.empty();
}

bool parse_u64(std::string_view s, std::uint64_t& out) {
    const char* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc{} && p == end && !s.empty();
}

bool parse_int(std::string_view s, int& out) {
    const char* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc{} && p == end && !s.empty();
}

bool parse_bool(std::string_view s, bool& out) {
    if (s == "true" || s == "1") return out = true, true;
    if (s == "false" || s == "0") return out = false, true;
    return false;
}

// Applies "key = value" for a registry entry; returns an error message or "".
std::string apply_entry(ExperimentSpec& spec, const ParamEntry& e, std::string_view value) {
    switch (e.type) {
    case FieldType::Double: {
        double v;
        if (!parse_double(value, v)) return "expected a number";
        e.set(spec, v);
        return "";
    }
    case FieldType::Int: {
        int v;
        if (!parse_int(value, v)) return "expected an integer";
        e.set(spec, static_cast<double>(v));
        return "";
    }
    case FieldType::Bool: {
        bool v;
        if (!parse_bool(value, v)) return "expected true/false/1/0";
        e.set(spec, v ? 1.0 : 0.0);
        return "";
    }
    }
    return "unreachable";
}

} // namespace

Controller ExperimentSpec::controller() const {
    Controller c;
    c.kind = kind;
    c.params = ctrl;
    c.activity = activity;
    c.fixed_target = fixed_target;
    c.fixed_ratio = fixed_ratio;
    return c;
}

std::size_t ExperimentSpec::sweep_points() const {
    std::size_t n = 1;
    for (const auto& ax : sweeps) n *= ax.values.size();
    return n;
}

ParseOutcome parse_spec(std::string_view text) {
    ParseOutcome out;
    ExperimentSpec& spec = out.spec;
    auto err = [&](int line, std::string msg) {
        out.errors.push_back("line " + std::to_string(line) + ": " + std::move(msg));
    };

    int lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++lineno;

        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        // Sweep directive: "sweep <path> = v1,v2,..."
        if (line.substr(0, 5) == "sweep" &&
            (line.size() == 5 || line[5] == ' ' || line[5] == '\t')) {
            const auto rest = trim(line.substr(5));
            const auto eq = rest.find('=');
            if (eq == std::string_view::npos) {
                err(lineno, "expected 'sweep <parameter> = v1,v2,...'");
                continue;
            }
            const auto path = trim(rest.substr(0, eq));
            const auto values_text = trim(rest.substr(eq + 1));
            const ParamEntry* entry = find_entry(path);
            if (!entry) {
                err(lineno, "unknown sweep parameter '" + std::string(path) + "'");
                continue;
            }
            if (entry->type == FieldType::Bool) {
                err(lineno, "parameter '" + std::string(entry->path) + "' is not numeric");
                continue;
            }
            bool duplicate = false;
            for (const auto& ax : spec.sweeps)
                if (ax.path == entry->path) duplicate = true;
            if (duplicate) {
                err(lineno, "duplicate sweep axis '" + std::string(entry->path) + "'");
                continue;
            }

            SweepAxis axis;
            axis.path = entry->path;
            std::size_t vp = 0;
            bool bad = false;
            while (vp <= values_text.size()) {
                const auto comma = values_text.find(',', vp);
                const auto tok = trim(values_text.substr(
                    vp, comma == std::string_view::npos ? values_text.size() - vp
                                                        : comma - vp));
                vp = comma == std::string_view::npos ? values_text.size() + 1 : comma + 1;
                double v;
                if (!parse_double(tok, v)) {
                    err(lineno, "bad sweep value '" + std::string(tok) + "'");
                    bad = true;
                    break;
                }
                if (entry->type == FieldType::Int && v != std::floor(v)) {
                    err(lineno, "parameter '" + std::string(entry->path) +
                                    "' takes integers, got '" + std::string(tok) + "'");
                    bad = true;
                    break;
                }
                axis.values.push_back(v);
            }
            if (!bad && axis.values.empty()) {
                err(lineno, "empty sweep value list");
                bad = true;
            }
            if (!bad) spec.sweeps.push_back(std::move(axis));
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            err(lineno, "expected 'key = value'");
            continue;
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty()) {
            err(lineno, "missing key");
            continue;
        }
        if (value.empty()) {
            err(lineno, "missing value for '" + std::string(key) + "'");
            continue;
        }

        if (key == "controller") {
            if (value == "adaptive")
                spec.kind = ControllerKind::Adaptive;
            else if (value == "fixed_number")
                spec.kind = ControllerKind::FixedNumber;
            else if (value == "fixed_ratio")
                spec.kind = ControllerKind::FixedRatio;
            else if (value == "adaptive_multilevel")
                spec.kind = ControllerKind::AdaptiveMultilevel;
            else
                err(lineno, "unknown controller '" + std::string(value) +
                                "' (adaptive, fixed_number, fixed_ratio, adaptive_multilevel)");
        } else if (key == "master_seed") {
            if (!parse_u64(value, spec.master_seed))
                err(lineno, "master_seed expects an unsigned 64-bit integer");
        } else if (key == "runs") {
            if (!parse_int(value, spec.runs))
                err(lineno, "runs expects an integer");
        } else if (key == "out_dir") {
            spec.out_dir = std::string(value);
        } else if (const ParamEntry* entry = find_entry(key)) {
            if (auto msg = apply_entry(spec, *entry, value); !msg.empty())
                err(lineno, "'" + std::string(key) + "': " + msg);
        } else {
            err(lineno, "unknown key '" + std::string(key) + "'");
        }
    }

    for (const auto& v : validate_config(spec.world))
        out.errors.push_back(v.field + ": " + v.message);
    for (const auto& v : validate_params(spec.ctrl))
        out.errors.push_back(v.field + ": " + v.message);
    for (const auto& v : validate_profile(spec.activity))
        out.errors.push_back(v.field + ": " + v.message);
    if (spec.runs < 1) out.errors.push_back("runs: must be >= 1");
    if (spec.kind == ControllerKind::FixedNumber && spec.fixed_target < 0)
        out.errors.push_back("fixed_target: must be >= 0");
    if (spec.kind == ControllerKind::FixedRatio &&
        !(spec.fixed_ratio >= 0.0 && spec.fixed_ratio <= 1.0))
        out.errors.push_back("fixed_ratio: must be in [0, 1]");
    return out;
}

ExperimentSpec spec_at_point(const ExperimentSpec& spec, std::size_t point_index) {
    if (point_index >= spec.sweep_points())
        throw std::out_of_range("spec_at_point: point index out of range");
    ExperimentSpec ps = spec;
    std::size_t rem = point_index;
    for (std::size_t a = spec.sweeps.size(); a-- > 0;) { // last axis fastest
        const SweepAxis& ax = spec.sweeps[a];
        const std::size_t idx = rem % ax.values.size();
        rem /= ax.values.size();
        find_entry(ax.path)->set(ps, ax.values[idx]);
    }
    return ps;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string timeseries_csv(std::span<const StepSample> series) {
    std::string out = "step,active_foragers,stimulus,mean_threshold,food_available,"
                      "cum_collected,cum_move,cum_comm,cum_idle,cum_net\n";
    for (const auto& s : series) {
        out += std::to_string(s.step);
        out += ',';
        out += std::to_string(s.active_foragers);
        out += ',';
        out += format_double(s.stimulus);
        out += ',';
        out += format_double(s.mean_threshold);
        out += ',';
        out += std::to_string(s.food_available);
        out += ',';
        out += format_double(s.cum_collected);
        out += ',';
        out += format_double(s.cum_move);
        out += ',';
        out += format_double(s.cum_comm);
        out += ',';
        out += format_double(s.cum_idle);
        out += ',';
        out += format_double(s.cum_net);
        out += '\n';
    }
    return out;
}

std::string summary_header(const ExperimentSpec& spec) {
    std::string h = "run_id,seed,controller";
    for (const auto& ax : spec.sweeps) {
        h += ',';
        h += ax.path;
    }
    h += ",trips,successes,failures,collected,spent_total,net_energy,efficiency\n";
    return h;
}

std::string summary_row(const ExperimentSpec& spec, std::size_t point_index,
                        const RunResult& result) {
    std::string r = result.run_id;
    r += ',';
    r += std::to_string(result.seed);
    r += ',';
    r += result.controller;
    const ExperimentSpec ps = spec_at_point(spec, point_index);
    for (const auto& ax : spec.sweeps) {
        r += ',';
        r += format_double(find_entry(ax.path)->get(ps));
    }
    r += ',';
    r += std::to_string(result.trips);
    r += ',';
    r += std::to_string(result.successes);
    r += ',';
    r += std::to_string(result.failures);
    r += ',';
    r += format_double(result.collected);
    r += ',';
    r += format_double(result.spent_total());
    r += ',';
    r += format_double(result.net_energy);
    r += ',';
    r += format_double(result.efficiency);
    r += '\n';
    return r;
}

namespace {

struct JobOutput {
    bool ok = false;
    std::string error;
    std::string timeseries;
    std::string summary_line;
};

JobOutput run_job(const ExperimentSpec& spec, std::size_t point, std::size_t run_idx) {
    JobOutput out;
    try {
        const ExperimentSpec ps = spec_at_point(spec, point);
        const std::uint64_t seed = derive_run_seed(spec.master_seed, point, run_idx);
        RunOutput ro = run(ps.world, ps.controller(), seed, ps.world.max_steps);
        ro.result.run_id = std::to_string(point) + "_" + std::to_string(run_idx);
        out.timeseries = timeseries_csv(ro.series);
        out.summary_line = summary_row(spec, point, ro.result);
        out.ok = true;
    } catch (const std::exception& e) {
        out.error = "run " + std::to_string(point) + "_" + std::to_string(run_idx) +
                    " failed: " + e.what();
    }
    return out;
}

} // namespace

int execute(const ExperimentSpec& spec, int workers) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(spec.out_dir, ec);
    if (ec) {
        std::cerr << "cannot create output directory '" << spec.out_dir
                  << "': " << ec.message() << "\n";
        return 2;
    }

    const std::size_t points = spec.sweep_points();
    const std::size_t runs = static_cast<std::size_t>(spec.runs);
    const std::size_t total = points * runs;
    std::vector<JobOutput> jobs(total);

    // Jobs are independent; results are buffered and committed in (point, run)
    // order below so the files are byte-identical for any worker count.
    if (workers <= 1 || total <= 1) {
        for (std::size_t j = 0; j < total; ++j)
            jobs[j] = run_job(spec, j / runs, j % runs);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                const std::size_t j = next.fetch_add(1);
                if (j >= total) return;
                jobs[j] = run_job(spec, j / runs, j % runs);
            }
        };
        std::vector<std::thread> pool;
        const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(workers), total);
        pool.reserve(n);
        for (std::size_t i = 0; i < n; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    const fs::path dir(spec.out_dir);
    std::ofstream summary(dir / "summary.csv", std::ios::binary | std::ios::trunc);
    summary << summary_header(spec);
    for (std::size_t j = 0; j < total; ++j) {
        if (!jobs[j].ok) { // commit the completed prefix, then abort
            summary.flush();
            std::cerr << jobs[j].error << "\n";
            return 2;
        }
        const std::size_t point = j / runs, run_idx = j % runs;
        const fs::path ts_path = dir / ("timeseries_" + std::to_string(point) + "_" +
                                        std::to_string(run_idx) + ".csv");
        std::ofstream ts(ts_path, std::ios::binary | std::ios::trunc);
        ts << jobs[j].timeseries;
        ts.flush();
        if (!ts) {
            std::cerr << "cannot write '" << ts_path.string() << "'\n";
            return 2;
        }
        summary << jobs[j].summary_line;
    }
    summary.flush();
    if (!summary) {
        std::cerr << "cannot write '" << (dir / "summary.csv").string() << "'\n";
        return 2;
    }
    return 0;
}

PlotResult emit_plot_data(std::string_view summary_csv, const std::string& axis_field,
                          const std::string& value_field) {
    PlotResult out;

    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos <= summary_csv.size()) {
        const auto nl = summary_csv.find('\n', pos);
        const auto line = summary_csv.substr(
            pos, nl == std::string_view::npos ? summary_csv.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? summary_csv.size() + 1 : nl + 1;
        if (!trim(line).empty()) lines.push_back(line);
    }
    if (lines.empty()) {
        out.errors.push_back("summary is empty");
        return out;
    }

    auto split = [](std::string_view line) {
        std::vector<std::string_view> cells;
        std::size_t p = 0;
        while (p <= line.size()) {
            const auto c = line.find(',', p);
            cells.push_back(trim(line.substr(
                p, c == std::string_view::npos ? line.size() - p : c - p)));
            p = c == std::string_view::npos ? line.size() + 1 : c + 1;
        }
        return cells;
    };

    const auto header = split(lines[0]);
    std::size_t axis_col = header.size(), value_col = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == axis_field) axis_col = i;
        if (header[i] == value_field) value_col = i;
    }
    if (axis_col == header.size())
        out.errors.push_back("unknown field '" + axis_field + "'");
    if (value_col == header.size())
        out.errors.push_back("unknown field '" + value_field + "'");
    if (!out.errors.empty()) return out;

    std::map<double, std::vector<double>> groups; // ascending by axis value
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split(lines[i]);
        if (cells.size() != header.size()) {
            out.errors.push_back("row " + std::to_string(i) + ": wrong column count");
            continue;
        }
        double axis, value;
        if (!parse_double(cells[axis_col], axis) || !parse_double(cells[value_col], value)) {
            out.errors.push_back("row " + std::to_string(i) + ": non-numeric cell");
            continue;
        }
        groups[axis].push_back(value);
    }
    if (!out.errors.empty()) return out;

    out.text = "# " + axis_field + " mean_" + value_field + " std_" + value_field + "\n";
    for (const auto& [axis, values] : groups) {
        const Aggregate a = aggregate(values);
        out.text += format_double(axis);
        out.text += ' ';
        out.text += format_double(a.mean);
        out.text += ' ';
        out.text += format_double(a.std_dev);
        out.text += '\n';
    }
    return out;
}

} // namespace forage
