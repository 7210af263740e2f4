// SPDX-License-Identifier: Apache-2.0
//
// Monte-Carlo sweeps: realizations fan out over a worker pool, every
// realization owns its seed streams, and a single reducer aggregates in
// realization order so the CSV is independent of the worker count.
#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "nris/beamforming.hpp"
#include "nris/channel.hpp"
#include "nris/config.hpp"
#include "nris/errors.hpp"
#include "nris/optimizer.hpp"
#include "nris/rng.hpp"

namespace nris {

struct SweepRow {
    double sweep_value = 0.0;
    std::string scheme;
    double snr_db = 0.0;
    double mean_rate = 0.0;
    double std_rate = 0.0;
    int n_real = 0;
    double mean_iters = 0.0;
    double mean_wall_ms = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<double> sweep_values;
    std::vector<double> cgd_steps;  // C-GD step used at each sweep point (0 if C-GD not run)
};

/// Seed of realization r; hop, init and random-phase streams derive from it.
inline std::uint64_t realization_seed(std::uint64_t master_seed, std::uint64_t r) {
    return derive_seed(master_seed, r, StreamTag::kRealization);
}

/// Seed of calibration realization k; disjoint from the evaluation seeds by tag.
inline std::uint64_t calibration_seed(std::uint64_t master_seed, std::uint64_t k) {
    return derive_seed(master_seed, k, StreamTag::kCalibration);
}

/// Parameters that change along the sweep axis.
struct SweepPoint {
    double value = 0.0;
    int n_ris = 0;
    double max_phase_deg = 0.0;
    int bits = 0;
};

inline std::vector<SweepPoint> sweep_points(const ExperimentConfig& cfg) {
    std::vector<SweepPoint> points;
    for (double v : cfg.effective_sweep_values()) {
        SweepPoint p{v, cfg.n_ris, cfg.codebook.max_phase_deg, cfg.codebook.bits};
        switch (cfg.sweep) {
            case SweepKind::kVsNris: p.n_ris = static_cast<int>(v); break;
            case SweepKind::kVsPhimax: p.max_phase_deg = v; break;
            case SweepKind::kVsBits: p.bits = static_cast<int>(v); break;
            default: break;
        }
        points.push_back(p);
    }
    return points;
}

/// Rate of every SNR in `snr_linear` for the cascaded channel He.
inline std::vector<double> rates_for_channel(const CMatrix& he, const std::vector<double>& snr_linear,
                                             int n_streams) {
    const BeamformerPair bf = svd_beamformers(he, n_streams);
    std::vector<double> out;
    out.reserve(snr_linear.size());
    for (double snr : snr_linear) out.push_back(achievable_rate(he, bf, snr, n_streams));
    return out;
}

/// Outcome of one scheme on one realization at one sweep point.
struct SchemeOutcome {
    std::vector<double> rates;  // per SNR
    double iterations = 0.0;
    double wall_ms = 0.0;
};

namespace detail {

inline std::string file_stem(const ExperimentConfig& cfg) { return cfg.name.empty() ? "experiment" : cfg.name; }

inline void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create directory '" + dir.string() + "': " + ec.message());
}

inline std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    return os;
}

inline void finish_output(std::ofstream& os, const std::filesystem::path& path) {
    os.flush();
    if (!os) throw std::runtime_error("write error on '" + path.string() + "'");
}

}  // namespace detail

/// Runs every scheme of `cfg` on a single realization at one sweep point.
/// `cgd_step` replaces optimizer.fixed_step for C-GD. Results follow cfg.schemes order.
inline std::vector<SchemeOutcome> evaluate_realization(const ExperimentConfig& cfg, const SweepPoint& point,
                                                       std::size_t point_index,
                                                       const ChannelRealization& channels, double cgd_step,
                                                       const std::filesystem::path* trace_dir = nullptr,
                                                       std::uint64_t realization_index = 0) {
    const PhaseCodebook codebook = cfg.codebook.build(point.max_phase_deg, point.bits);
    const double mu = codebook.mean_amplitude();
    std::vector<double> snr_linear;
    for (double db : cfg.snr_grid_db) snr_linear.push_back(db_to_linear(db));

    const CMatrix& h1 = channels.h1.h;
    const CMatrix& h2 = channels.h2.h;
    const bool needs_form = cfg.has_scheme(Scheme::kAgd) || cfg.has_scheme(Scheme::kCgd) ||
                            cfg.has_scheme(Scheme::kRandom) || cfg.has_scheme(Scheme::kExhaustive);
    QuadraticForm form;
    if (needs_form) form = build_quadratic_form(h1, h2);

    OptimizerSettings settings = cfg.optimizer;
    settings.init_seed = derive_seed(channels.seed, point_index, StreamTag::kInitPhase);

    auto cascaded_rates = [&](const RVector& phases) {
        return rates_for_channel(cascaded_channel(h1, h2, make_reflection_state(phases, mu)), snr_linear,
                                 cfg.n_streams);
    };
    auto dump_trace = [&](const GdTrace& t, const char* scheme) {
        if (!trace_dir) return;
        const auto path = *trace_dir / (detail::file_stem(cfg) + "_r" + std::to_string(realization_index) +
                                        "_" + scheme + ".csv");
        auto os = detail::open_output(path);
        write_trace(os, t);
        detail::finish_output(os, path);
    };

    std::vector<SchemeOutcome> out;
    for (Scheme s : cfg.schemes) {
        SchemeOutcome o;
        switch (s) {
            case Scheme::kAgd: {
                const GdTrace t = run_agd(form, codebook, settings);
                dump_trace(t, "agd");
                o.rates = cascaded_rates(t.quantized_phases_rad);
                o.iterations = t.best_iteration;
                o.wall_ms = t.wall_ms;
                break;
            }
            case Scheme::kCgd: {
                OptimizerSettings c = settings;
                c.fixed_step = cgd_step;
                const GdTrace t = run_cgd(form, codebook, c);
                dump_trace(t, "cgd");
                o.rates = cascaded_rates(t.quantized_phases_rad);
                o.iterations = t.best_iteration;
                o.wall_ms = t.wall_ms;
                break;
            }
            case Scheme::kRandom: {
                RngStream rng(derive_seed(channels.seed, point_index, StreamTag::kRandomPhase));
                const GdTrace t = run_random_phase(form, codebook, cfg.random_draws, rng);
                o.rates = cascaded_rates(t.quantized_phases_rad);
                o.wall_ms = t.wall_ms;
                break;
            }
            case Scheme::kNoRis: {
                if (!channels.direct) throw UsageError("no_ris scheme requires the direct BS-MS channel");
                o.rates = rates_for_channel(channels.direct->h, snr_linear, cfg.n_streams);
                break;
            }
            case Scheme::kExhaustive: {
                const auto t0 = std::chrono::steady_clock::now();
                const auto [phases, value] = run_exhaustive(form, codebook);
                (void)value;
                o.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
                o.rates = cascaded_rates(phases);
                break;
            }
        }
        if (!cfg.output.record_wall_time) o.wall_ms = 0.0;
        out.push_back(std::move(o));
    }
    return out;
}

/// C-GD step for one sweep point: best decade on the calibration batch, or
/// optimizer.fixed_step when calibration is disabled.
inline double calibrate_cgd_step(const ExperimentConfig& cfg, const SweepPoint& point) {
    if (!cfg.cgd_calibration.enabled) return cfg.optimizer.fixed_step;
    const PhaseCodebook codebook = cfg.codebook.build(point.max_phase_deg, point.bits);
    const ChannelSpec spec = cfg.channel_spec(point.n_ris);
    std::vector<QuadraticForm> batch;
    for (int k = 0; k < cfg.cgd_calibration.realizations; ++k) {
        const auto ch = sample_realization(spec, calibration_seed(cfg.master_seed, k), false);
        batch.push_back(build_quadratic_form(ch.h1.h, ch.h2.h));
    }
    const auto grid = decade_grid(cfg.cgd_calibration.min_exponent, cfg.cgd_calibration.max_exponent);
    return calibrate_fixed_step(batch, codebook, cfg.optimizer, grid);
}

/// Runs `n_tasks` indexed tasks on up to `workers` threads; rethrows the first failure.
template <typename Fn>
void parallel_for(std::size_t n_tasks, int workers, Fn&& fn) {
    const std::size_t n_threads =
        std::max<std::size_t>(1, std::min<std::size_t>(n_tasks, static_cast<std::size_t>(std::max(workers, 1))));
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        while (!failed.load()) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n_tasks) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                failed.store(true);
            }
        }
    };
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);
}

/// Full sweep. Output rows are sorted by (sweep_value, scheme name, snr_db).
inline SweepResult run_experiment(const ExperimentConfig& cfg, int workers = 1) {
    cfg.validate();
    const auto points = sweep_points(cfg);
    const std::size_t n_points = points.size();
    const std::size_t n_schemes = cfg.schemes.size();
    const std::size_t n_snr = cfg.snr_grid_db.size();
    const auto n_real = static_cast<std::size_t>(cfg.n_realizations);
    const bool with_direct = cfg.has_scheme(Scheme::kNoRis);

    SweepResult result;
    result.sweep_values.reserve(n_points);
    for (const auto& p : points) result.sweep_values.push_back(p.value);
    result.cgd_steps.assign(n_points, 0.0);
    if (cfg.has_scheme(Scheme::kCgd)) {
        parallel_for(n_points, workers,
                     [&](std::size_t i) { result.cgd_steps[i] = calibrate_cgd_step(cfg, points[i]); });
    }

    std::filesystem::path channel_dir, trace_dir;
    if (cfg.output.dump_channels) {
        channel_dir = std::filesystem::path(cfg.output.dir) / "channels";
        detail::ensure_dir(channel_dir);
    }
    if (cfg.output.dump_traces) {
        trace_dir = std::filesystem::path(cfg.output.dir) / "traces";
        detail::ensure_dir(trace_dir);
    }

    // outcomes[r][point][scheme]; every slot is written by exactly one task.
    std::vector<std::vector<std::vector<SchemeOutcome>>> outcomes(n_real);
    parallel_for(n_real, workers, [&](std::size_t r) {
        const std::uint64_t seed = realization_seed(cfg.master_seed, r);
        auto& slot = outcomes[r];
        slot.resize(n_points);
        std::optional<ChannelRealization> shared;
        for (std::size_t i = 0; i < n_points; ++i) {
            // Channels depend on the sweep point only through N_RIS.
            if (!shared || shared->h1.h.rows() != points[i].n_ris)
                shared = sample_realization(cfg.channel_spec(points[i].n_ris), seed, with_direct);
            if (i == 0 && cfg.output.dump_channels) {
                const auto path = channel_dir / (detail::file_stem(cfg) + "_r" + std::to_string(r) + ".dump");
                auto os = detail::open_output(path);
                write_channel_dump(os, *shared);
                detail::finish_output(os, path);
            }
            slot[i] = evaluate_realization(cfg, points[i], i, *shared, result.cgd_steps[i],
                                           (i == 0 && cfg.output.dump_traces) ? &trace_dir : nullptr, r);
        }
    });

    // Reduce in realization order.
    for (std::size_t i = 0; i < n_points; ++i) {
        for (std::size_t s = 0; s < n_schemes; ++s) {
            for (std::size_t k = 0; k < n_snr; ++k) {
                double sum = 0.0, iters = 0.0, wall = 0.0;
                for (std::size_t r = 0; r < n_real; ++r) {
                    const auto& o = outcomes[r][i][s];
                    sum += o.rates[k];
                    iters += o.iterations;
                    wall += o.wall_ms;
                }
                const double n = static_cast<double>(n_real);
                const double mean = sum / n;
                double sq = 0.0;
                for (std::size_t r = 0; r < n_real; ++r) {
                    const double d = outcomes[r][i][s].rates[k] - mean;
                    sq += d * d;
                }
                SweepRow row;
                row.sweep_value = points[i].value;
                row.scheme = std::string(scheme_name(cfg.schemes[s]));
                row.snr_db = cfg.snr_grid_db[k];
                row.mean_rate = mean;
                row.std_rate = std::sqrt(sq / n);
                row.n_real = static_cast<int>(n_real);
                row.mean_iters = iters / n;
                row.mean_wall_ms = wall / n;
                result.rows.push_back(std::move(row));
            }
        }
    }
    std::stable_sort(result.rows.begin(), result.rows.end(), [](const SweepRow& a, const SweepRow& b) {
        if (a.sweep_value != b.sweep_value) return a.sweep_value < b.sweep_value;
        if (a.scheme != b.scheme) return a.scheme < b.scheme;
        return a.snr_db < b.snr_db;
    });
    return result;
}

inline void write_csv(std::ostream& os, const SweepResult& result) {
    os << "sweep_value,scheme,snr_db,mean_rate,std_rate,n_real,mean_iters,mean_wall_ms\n";
    char buf[256];
    for (const auto& r : result.rows) {
        std::snprintf(buf, sizeof buf, "%.9g,%s,%.9g,%.9g,%.9g,%d,%.9g,%.9g\n", r.sweep_value, r.scheme.c_str(),
                      r.snr_db, r.mean_rate, r.std_rate, r.n_real, r.mean_iters, r.mean_wall_ms);
        os << buf;
    }
}

inline void emit_csv(const SweepResult& result, const std::filesystem::path& path) {
    auto os = detail::open_output(path);
    write_csv(os, result);
    detail::finish_output(os, path);
}

/// Looks up one row; nullptr when absent.
inline const SweepRow* find_row(const SweepResult& result, double sweep_value, std::string_view scheme,
                                double snr_db) {
    for (const auto& r : result.rows)
        if (r.sweep_value == sweep_value && r.scheme == scheme && r.snr_db == snr_db) return &r;
    return nullptr;
}

/// Human-readable digest: calibrated steps and per-point scheme means.
inline void write_summary(std::ostream& os, const ExperimentConfig& cfg, const SweepResult& result) {
    char buf[256];
    os << "experiment " << cfg.name << "\n";
    os << "dims " << cfg.n_bs << "/" << cfg.n_ris << "/" << cfg.n_ms << ", streams " << cfg.n_streams
       << ", realizations " << cfg.n_realizations << ", master_seed " << cfg.master_seed << "\n";
    os << "sweep " << sweep_name(cfg.sweep) << "\n";
    if (cfg.has_scheme(Scheme::kCgd)) {
        for (std::size_t i = 0; i < result.sweep_values.size(); ++i) {
            std::snprintf(buf, sizeof buf, "cgd_step[sweep=%.9g] = %.3g\n", result.sweep_values[i],
                          result.cgd_steps[i]);
            os << buf;
        }
    }
    if (cfg.has_scheme(Scheme::kAgd) && cfg.has_scheme(Scheme::kRandom)) {
        for (double v : result.sweep_values) {
            for (double snr : cfg.snr_grid_db) {
                const auto* a = find_row(result, v, "agd", snr);
                const auto* r = find_row(result, v, "random", snr);
                if (!a || !r) continue;
                std::snprintf(buf, sizeof buf, "agd - random [sweep=%.9g, snr=%.9g dB] = %.4f bps/Hz\n", v, snr,
                              a->mean_rate - r->mean_rate);
                os << buf;
            }
        }
    }
}

/// Writes <stem>.csv, <stem>_summary.txt and <stem>_config.yaml into output.dir.
inline std::filesystem::path write_outputs(const ExperimentConfig& cfg, const SweepResult& result) {
    const std::filesystem::path dir(cfg.output.dir);
    detail::ensure_dir(dir);
    const auto stem = detail::file_stem(cfg);
    const auto csv = dir / (stem + ".csv");
    emit_csv(result, csv);

    const auto summary_path = dir / (stem + "_summary.txt");
    auto summary = detail::open_output(summary_path);
    write_summary(summary, cfg, result);
    detail::finish_output(summary, summary_path);

    const auto echo_path = dir / (stem + "_config.yaml");
    auto echo = detail::open_output(echo_path);
    echo << echo_config(cfg);
    detail::finish_output(echo, echo_path);
    return csv;
}

}  // namespace nris
