// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite. Prints one PASS/FAIL line per criterion plus INFO lines
// with the measured quantities; exits non-zero when any criterion fails.
//
//   nris_acceptance [--only N[,N...]] [--workers N]

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nris/beamforming.hpp"
#include "nris/channel.hpp"
#include "nris/config.hpp"
#include "nris/experiment.hpp"
#include "nris/optimizer.hpp"
#include "test_support.hpp"

using namespace nris;
using nris::testing::gaussian_matrix;
using nris::testing::rel_err;
using nris::testing::uniform_phases;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

template <typename... Args>
std::string format(const char* fmt, Args... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    return buf;
}

ChannelSpec small_spec(int n_bs, int n_ris, int n_ms) {
    ChannelSpec s;
    s.n_bs = n_bs;
    s.n_ris = n_ris;
    s.n_ms = n_ms;
    return s;
}

// Explicit diagonal-column construction: column n of M is vec(H2(:, n) H1(n, :)).
CMatrix kronecker_form(const CMatrix& h1, const CMatrix& h2) {
    CMatrix m(h2.rows() * h1.cols(), h1.rows());
    for (Eigen::Index n = 0; n < h1.rows(); ++n) {
        const CMatrix outer = h2.col(n) * h1.row(n);
        m.col(n) = Eigen::Map<const CVector>(outer.data(), outer.size());
    }
    return m.adjoint() * m;
}

Outcome quadratic_form_oracle() {
    const auto t0 = Clock::now();
    const auto spec = small_spec(8, 6, 4);
    double worst_rel = 0.0, worst_entry = 0.0;
    RngStream rng(derive_seed(1, 0, StreamTag::kRandomPhase));
    for (std::uint64_t i = 0; i < 100; ++i) {
        const auto ch = sample_realization(spec, derive_seed(1001, i, StreamTag::kRealization), false);
        const auto form = build_quadratic_form(ch.h1.h, ch.h2.h);
        const RVector phases = uniform_phases(6, rng);
        const double direct = cascaded_channel(ch.h1.h, ch.h2.h, make_reflection_state(phases, 0.8)).squaredNorm();
        worst_rel = std::max(worst_rel, rel_err(trace_objective(form, phases, 0.8), direct));
        worst_entry = std::max(worst_entry, (form.d - kronecker_form(ch.h1.h, ch.h2.h)).cwiseAbs().maxCoeff());
    }
    const double secs = seconds_since(t0);
    return {worst_rel <= 1e-10 && worst_entry <= 1e-12 && secs < 5.0,
            format("max rel err %.2e (<= 1e-10), max |D - D_kron| %.2e (<= 1e-12), %.2f s (< 5 s)", worst_rel,
                   worst_entry, secs)};
}

Outcome gradient_check() {
    const auto t0 = Clock::now();
    const double h = 1e-5;
    double worst = 0.0;
    RngStream rng(derive_seed(2, 0, StreamTag::kRandomPhase));
    for (std::uint64_t i = 0; i < 50; ++i) {
        const int n_ris = 2 + static_cast<int>(i % 15);
        const auto ch = sample_realization(small_spec(8, n_ris, 4), derive_seed(2002, i, StreamTag::kRealization), false);
        const auto form = build_quadratic_form(ch.h1.h, ch.h2.h);
        const RVector phases = uniform_phases(n_ris, rng);
        const RVector g = gradient(form, phases, 0.8);
        RVector fd(n_ris);
        for (int k = 0; k < n_ris; ++k) {
            RVector plus = phases, minus = phases;
            plus(k) += h;
            minus(k) -= h;
            fd(k) = (objective(form, plus, 0.8) - objective(form, minus, 0.8)) / (2.0 * h);
        }
        worst = std::max(worst, (g - fd).norm() / fd.norm());
    }
    const double secs = seconds_since(t0);
    return {worst <= 1e-4 && secs < 5.0, format("max rel l2 err %.2e (<= 1e-4), %.2f s (< 5 s)", worst, secs)};
}

Outcome svd_rate_consistency() {
    const auto t0 = Clock::now();
    const int ns = 4;
    double worst_gap = 0.0, worst_norm = 0.0;
    int jensen_violations = 0;
    RngStream rng(derive_seed(3, 0, StreamTag::kRandomPhase));
    const auto spec = small_spec(16, 16, 8);
    for (std::uint64_t i = 0; i < 100; ++i) {
        const auto ch = sample_realization(spec, derive_seed(3003, i, StreamTag::kRealization), false);
        const CMatrix he = cascaded_channel(ch.h1.h, ch.h2.h, make_reflection_state(uniform_phases(16, rng), 0.8));
        const auto bf = svd_beamformers(he, ns);
        worst_norm = std::max(worst_norm, std::abs(bf.precoder.squaredNorm() - ns));
        for (double db : {-10.0, 0.0, 10.0, 20.0}) {
            const double snr = db_to_linear(db);
            const double r = achievable_rate(he, bf, snr, ns);
            worst_gap = std::max(worst_gap, std::abs(r - rate_from_singular_values(bf.singular_values, snr, ns)));
            if (!(jensen_upper_bound(he, snr, ns) >= r)) ++jensen_violations;
        }
    }
    const double secs = seconds_since(t0);
    return {worst_gap <= 1e-8 && jensen_violations == 0 && worst_norm <= 1e-10 && secs < 5.0,
            format("max |logdet - closed form| %.2e (<= 1e-8), Jensen violations %d, max | ||F||^2 - Ns | %.2e, "
                   "%.2f s (< 5 s)",
                   worst_gap, jensen_violations, worst_norm, secs)};
}

double percentile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

Outcome discrete_optimum_proximity() {
    const auto t0 = Clock::now();
    const auto cb = build_codebook(deg_to_rad(kCalibratedMaxPhaseDeg), 2, kCalibratedMeanAmplitude);
    std::vector<double> ratios;
    for (std::uint64_t s = 0; s < 100; ++s) {
        RngStream rng(derive_seed(4004, s, StreamTag::kRealization));
        const CMatrix h1 = gaussian_matrix(4, 8, rng);
        const CMatrix h2 = gaussian_matrix(4, 4, rng);
        const auto form = build_quadratic_form(h1, h2);
        ratios.push_back(run_agd(form, cb, OptimizerSettings{}).quantized_objective / run_exhaustive(form, cb).second);
    }
    const double median = percentile(ratios, 0.5);
    const double p10 = percentile(ratios, 0.1);

    // same statistic on geometric channel instances, reported only
    std::vector<double> geo;
    for (std::uint64_t s = 0; s < 100; ++s) {
        const auto ch = sample_realization(small_spec(8, 4, 4), derive_seed(4004, s, StreamTag::kRealization), false);
        const auto form = build_quadratic_form(ch.h1.h, ch.h2.h);
        geo.push_back(run_agd(form, cb, OptimizerSettings{}).quantized_objective / run_exhaustive(form, cb).second);
    }
    const double secs = seconds_since(t0);
    std::printf("INFO  C4 geometric-channel instances: median %.4f, p10 %.4f\n", percentile(geo, 0.5),
                percentile(geo, 0.1));
    return {median >= 0.9 && p10 >= 0.8 && secs < 30.0,
            format("Gaussian instances: median %.4f (>= 0.9), p10 %.4f (>= 0.8), %.2f s (< 30 s)", median, p10, secs)};
}

const SweepRow& row(const SweepResult& r, double v, const char* scheme, double snr) {
    const auto* p = find_row(r, v, scheme, snr);
    if (!p) throw std::runtime_error(format("missing row %g/%s/%g", v, scheme, snr));
    return *p;
}

Outcome scheme_ordering(int workers) {
    const auto t0 = Clock::now();
    auto cfg = load_preset("fig7-desk");
    const auto r = run_experiment(cfg, workers);
    const double secs = seconds_since(t0);
    bool ok = secs < 300.0;
    std::ostringstream bad;
    double prev[4] = {-1e300, -1e300, -1e300, -1e300};
    const char* order[4] = {"agd", "cgd", "random", "no_ris"};
    double min_agd_cgd = 1e300;
    for (double snr : cfg.snr_grid_db) {
        double v[4];
        for (int s = 0; s < 4; ++s) {
            v[s] = row(r, 0.0, order[s], snr).mean_rate;
            if (!(v[s] > prev[s])) {
                ok = false;
                bad << " non-monotone " << order[s] << "@" << snr;
            }
            prev[s] = v[s];
        }
        min_agd_cgd = std::min(min_agd_cgd, v[0] - v[1]);
        auto require = [&](bool cond, const char* what) {
            if (cond) return;
            ok = false;
            bad << ' ' << what << '@' << snr;
        };
        require(v[0] >= v[1], "agd<cgd");
        require(v[1] >= v[2], "cgd<random");
        require(v[2] > v[3], "random<=no_ris");
        std::printf("INFO  C5 snr %+5.1f dB: agd %.4f cgd %.4f random %.4f no_ris %.3g\n", snr, v[0], v[1], v[2], v[3]);
    }
    return {ok, format("min(agd - cgd) %.2e, %.1f s (< 300 s)%s", min_agd_cgd, secs, bad.str().c_str())};
}

Outcome phase_range_saturation(int workers) {
    const auto cfg = load_preset("fig5-desk");
    const auto r = run_experiment(cfg, workers);
    const double calibrated = row(r, 306.82, "agd", 10.0).mean_rate;
    const double full = row(r, 360.0, "agd", 10.0).mean_rate;
    const double narrow = row(r, 60.0, "agd", 10.0).mean_rate;
    for (double v : r.sweep_values) std::printf("INFO  C6 phi_max %6.2f deg: agd %.4f\n", v, row(r, v, "agd", 10.0).mean_rate);
    const double shortfall = (full - calibrated) / full;
    return {std::abs(calibrated - full) <= 0.02 * full && calibrated - narrow >= 1.0,
            format("306.82 vs 360: %.2f%% apart (<= 2%%), 306.82 - 60 = %.3f bps/Hz (>= 1)", 100.0 * std::abs(shortfall),
                   calibrated - narrow)};
}

Outcome quantization_sufficiency(int workers) {
    const auto cfg = load_preset("fig6-desk");
    const auto r = run_experiment(cfg, workers);
    const double b1 = row(r, 1.0, "agd", 10.0).mean_rate;
    const double b2 = row(r, 2.0, "agd", 10.0).mean_rate;
    const double b4 = row(r, 4.0, "agd", 10.0).mean_rate;
    for (double v : r.sweep_values) std::printf("INFO  C7 bits %.0f: agd %.4f\n", v, row(r, v, "agd", 10.0).mean_rate);
    return {std::abs(b4 - b2) <= 0.05 * b4 && b2 - b1 >= 0.3,
            format("b=2 vs b=4: %.2f%% apart (<= 5%%), b=2 - b=1 = %.3f bps/Hz (>= 0.3)", 100.0 * std::abs(b4 - b2) / b4,
                   b2 - b1)};
}

Outcome paper_scale_gap(int workers) {
    const auto t0 = Clock::now();
    auto cfg = load_preset("fig7-paper");
    cfg.n_realizations = 100;
    const auto r = run_experiment(cfg, workers);
    const double gap = row(r, 0.0, "agd", 10.0).mean_rate - row(r, 0.0, "random", 10.0).mean_rate;
    return {gap >= 5.0, format("agd - random at 10 dB = %.3f bps/Hz (>= 5; reference value about 8.4), %.0f s", gap,
                               seconds_since(t0))};
}

Outcome complexity_scaling() {
    OptimizerSettings settings;
    settings.max_iterations = 100;
    const auto cb = build_codebook(deg_to_rad(kCalibratedMaxPhaseDeg), 2, kCalibratedMeanAmplitude);
    std::vector<double> times;
    for (int n_ris : {64, 128, 256}) {
        const auto ch = sample_realization(small_spec(512, n_ris, 32), derive_seed(9009, n_ris, StreamTag::kRealization), false);
        const auto form = build_quadratic_form(ch.h1.h, ch.h2.h);
        std::vector<double> reps;
        for (int k = 0; k < 5; ++k) {
            const auto t0 = Clock::now();
            const auto trace = run_agd(form, cb, settings);
            reps.push_back(seconds_since(t0));
            if (trace.iterations.size() != 101) throw std::runtime_error("unexpected trace length");
        }
        times.push_back(percentile(reps, 0.5));
    }
    const double r1 = times[1] / times[0];
    const double r2 = times[2] / times[1];
    return {r1 <= 10.0 && r2 <= 10.0,
            format("median run_agd time 64/128/256: %.2f/%.2f/%.2f ms, ratios %.2fx, %.2fx (<= 10x)", 1e3 * times[0],
                   1e3 * times[1], 1e3 * times[2], r1, r2)};
}

Outcome determinism(int workers) {
    auto cfg = load_preset("fig7-desk");
    std::ostringstream a, b;
    write_csv(a, run_experiment(cfg, 1));
    write_csv(b, run_experiment(cfg, std::max(workers, 4)));
    return {a.str() == b.str(), format("fig7-desk CSV with 1 and %d workers: %s", std::max(workers, 4),
                                       a.str() == b.str() ? "byte-identical" : "DIFFERENT")};
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> only;
    int workers = 4;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--only" && i + 1 < argc) {
            std::stringstream ss(argv[++i]);
            std::string item;
            while (std::getline(ss, item, ',')) only.insert(std::stoi(item));
        } else if (arg == "--workers" && i + 1 < argc) {
            workers = std::stoi(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: %s [--only N[,N...]] [--workers N]\n", argv[0]);
            return 2;
        }
    }

    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"quadratic form equals cascaded-channel energy", quadratic_form_oracle},
        {"analytic gradient matches finite differences", gradient_check},
        {"SVD beamformers and rate consistency", svd_rate_consistency},
        {"quantized A-GD near exhaustive discrete optimum", discrete_optimum_proximity},
        {"scheme ordering and SNR monotonicity (desk)", [&] { return scheme_ordering(workers); }},
        {"phase-range saturation (desk)", [&] { return phase_range_saturation(workers); }},
        {"two-bit quantization sufficiency (desk)", [&] { return quantization_sufficiency(workers); }},
        {"A-GD over random gap at full scale", [&] { return paper_scale_gap(workers); }},
        {"A-GD cost scaling in N_RIS", complexity_scaling},
        {"determinism across worker counts", [&] { return determinism(workers); }},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && !only.contains(id)) continue;
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s  C%-2d %s: %s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
