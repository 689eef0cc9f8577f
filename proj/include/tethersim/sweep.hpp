#pragma once

// Sweep experiments over tether length or controller configuration sets, with
// per-cell seed repetition and median aggregation, plus the CSV writers for
// run and sweep outputs. Cells run concurrently; aggregation is keyed by cell
// index, so results do not depend on completion order.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include "tethersim/engine.hpp"
#include "tethersim/scenario.hpp"

namespace tethersim::scenario {

enum class SweepAxis { TetherLength, ConfigSet };

struct SweepCell {
    std::string cell_id;
    std::string axis_value;
    int seed_count = 0;  // successful seeds
    double median_combined_err = std::nan("");
    double median_asv_err = std::nan("");
    double median_auv_err = std::nan("");
    double max_link_dev_pct = std::nan("");
    std::vector<std::string> errors;  // one message per failed seed
};

struct SweepResult {
    SweepAxis axis = SweepAxis::TetherLength;
    std::vector<SweepCell> cells;
    std::vector<long> seeds;
};

namespace detail {

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    if (n == 0) return std::nan("");
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline Scenario cell_scenario(const Scenario& base, SweepAxis axis, const std::string& value) {
    Scenario s = base;
    if (axis == SweepAxis::TetherLength) {
        try {
            s.tether_params.length = std::stod(value);
        } catch (const std::exception&) {
            throw ValidationError("sweep: tether-length value '" + value + "' is not a number");
        }
        s.tether_params.segments = tether::default_segment_count(s.tether_params.length);
        validate(s);
    } else {
        auto [mode, sea] = control::configuration_set(value);
        s.controller.mode = mode;
        s.controller.label = value;
        s.sea = sea;
        s.sea_preset = sea.label == environment::SeaStateLabel::Moderate ? "moderate" : "rough";
    }
    return s;
}

inline int worker_count(size_t jobs) {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (const char* env = std::getenv("TETHERSIM_WORKERS")) {
        const int capped = std::atoi(env);
        if (capped > 0) n = capped;
    }
    if (n < 1) n = 1;
    return static_cast<int>(std::min<size_t>(static_cast<size_t>(n), jobs));
}

}  // namespace detail

/// Runs |values| x |seeds| simulations and aggregates per-value medians.
/// A failing run marks its seed in the cell's error list; remaining cells
/// continue.
inline SweepResult run_sweep(const Scenario& base, SweepAxis axis,
                             const std::vector<std::string>& values,
                             const std::vector<long>& seeds) {
    if (values.empty()) throw ValidationError("sweep: need at least one axis value");
    if (seeds.empty()) throw ValidationError("sweep: need at least one seed");

    struct Job {
        size_t value_index;
        long seed;
        RunMetrics metrics;
        bool ok = false;
        std::string error;
    };
    std::vector<Job> jobs;
    for (size_t vi = 0; vi < values.size(); ++vi)
        for (long seed : seeds) jobs.push_back({vi, seed, {}, false, {}});

    // A cell whose scenario cannot be constructed (bad value, infeasible
    // geometry) is marked failed; the remaining cells still run.
    std::vector<Scenario> cell_bases(values.size());
    std::vector<std::string> cell_errors(values.size());
    for (size_t vi = 0; vi < values.size(); ++vi) {
        try {
            cell_bases[vi] = detail::cell_scenario(base, axis, values[vi]);
        } catch (const Error& e) {
            cell_errors[vi] = e.what();
        }
    }

    std::atomic<size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            Job& job = jobs[i];
            if (!cell_errors[job.value_index].empty()) {
                job.error = cell_errors[job.value_index];
                continue;
            }
            Scenario s = cell_bases[job.value_index];
            s.sim.seed = job.seed;
            try {
                job.metrics = engine::run(s).metrics;
                job.ok = true;
            } catch (const std::exception& e) {
                job.error = e.what();
            }
        }
    };
    const int workers = detail::worker_count(jobs.size());
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(workers));
        for (int i = 0; i < workers; ++i) pool.emplace_back(work);
        for (std::thread& th : pool) th.join();
    }

    SweepResult result;
    result.axis = axis;
    result.seeds = seeds;
    for (size_t vi = 0; vi < values.size(); ++vi) {
        SweepCell cell;
        cell.axis_value = values[vi];
        cell.cell_id = (axis == SweepAxis::TetherLength)
                           ? "tether-length-" + values[vi]
                           : values[vi];
        std::vector<double> combined, asv, auv;
        double dev = 0.0;
        for (const Job& job : jobs) {
            if (job.value_index != vi) continue;
            if (!job.ok) {
                cell.errors.push_back("seed " + std::to_string(job.seed) + ": " + job.error);
                continue;
            }
            combined.push_back(job.metrics.combined_err);
            asv.push_back(job.metrics.asv_mean_err);
            auv.push_back(job.metrics.auv_mean_err);
            dev = std::max(dev, job.metrics.link_dev_max_pct);
        }
        cell.seed_count = static_cast<int>(combined.size());
        if (!combined.empty()) {
            cell.median_combined_err = detail::median(combined);
            cell.median_asv_err = detail::median(asv);
            cell.median_auv_err = detail::median(auv);
            cell.max_link_dev_pct = dev;
        }
        result.cells.push_back(std::move(cell));
    }
    return result;
}

// ---------------------------------------------------------------------------
// Output files. Floating point uses 9 significant digits in the CSVs.

namespace detail {

inline std::string csv9(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace detail

inline constexpr const char* kTimeseriesHeader =
    "t,asv_x,asv_y,asv_z,asv_yaw,auv_x,auv_y,auv_z,auv_yaw,"
    "asv_err,auv_err,tether_tension_proxy,wave_force_x,wave_force_y";

inline std::string timeseries_csv(const std::vector<engine::Row>& rows) {
    std::string out = kTimeseriesHeader;
    out += "\n";
    for (const engine::Row& r : rows) {
        using detail::csv9;
        out += csv9(r.t) + "," + csv9(r.asv_pos.x) + "," + csv9(r.asv_pos.y) + "," +
               csv9(r.asv_pos.z) + "," + csv9(r.asv_yaw) + "," + csv9(r.auv_pos.x) + "," +
               csv9(r.auv_pos.y) + "," + csv9(r.auv_pos.z) + "," + csv9(r.auv_yaw) + "," +
               csv9(r.asv_err) + "," + csv9(r.auv_err) + "," + csv9(r.tension_proxy) + "," +
               csv9(r.wave_force_x) + "," + csv9(r.wave_force_y) + "\n";
    }
    return out;
}

inline std::string metrics_csv(const RunMetrics& m) {
    using detail::csv9;
    std::string out =
        "asv_mean_err,asv_max_err,auv_mean_err,auv_max_err,combined_err,"
        "link_dev_min_pct,link_dev_max_pct,peak_tension\n";
    out += csv9(m.asv_mean_err) + "," + csv9(m.asv_max_err) + "," + csv9(m.auv_mean_err) +
           "," + csv9(m.auv_max_err) + "," + csv9(m.combined_err) + "," +
           csv9(m.link_dev_min_pct) + "," + csv9(m.link_dev_max_pct) + "," +
           csv9(m.peak_tension) + "\n";
    return out;
}

inline std::string sweep_summary_csv(const SweepResult& r) {
    using detail::csv9;
    std::string out =
        "cell_id,axis_value,seed_count,median_combined_err,median_asv_err,"
        "median_auv_err,max_link_dev_pct\n";
    for (const SweepCell& c : r.cells)
        out += c.cell_id + "," + c.axis_value + "," + std::to_string(c.seed_count) + "," +
               csv9(c.median_combined_err) + "," + csv9(c.median_asv_err) + "," +
               csv9(c.median_auv_err) + "," + csv9(c.max_link_dev_pct) + "\n";
    return out;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    out << content;
    if (!out) throw Error("failed writing '" + path.string() + "'");
}

/// Writes a run's output files into `dir` per the scenario's output options.
inline void write_run_outputs(const engine::RunResult& result, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const OutputOptions& opts = result.effective.outputs;
    if (opts.timeseries) write_text_file(dir / "timeseries.csv", timeseries_csv(result.rows));
    if (opts.metrics) write_text_file(dir / "metrics.csv", metrics_csv(result.metrics));
    if (opts.effective_config)
        write_text_file(dir / "effective_config.cfg", dump_scenario(result.effective));
}

}  // namespace tethersim::scenario
