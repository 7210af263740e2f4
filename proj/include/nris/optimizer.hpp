// SPDX-License-Identifier: Apache-2.0
//
// Passive beamforming of the RIS phase vector.
//
// The rate objective is relaxed to the channel energy tr(He He^H), which is
// the Hermitian form theta^H D theta in the reflection vector. The descent
// variable is the phase vector phi with theta_n = mu exp(j phi_n) and
//
//     f(phi) = -mu^2 sum_p sum_q exp(-j phi_p) D_pq exp(j phi_q)  (<= 0).
//
// A-GD picks each step size by minimising a second-order model of
// lambda -> f(phi - lambda grad f); C-GD uses one fixed step throughout.
// Continuous iterates are left unconstrained and are mapped onto the
// discrete codebook once, after the last iteration.
#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nris/errors.hpp"
#include "nris/graphene.hpp"
#include "nris/rng.hpp"
#include "nris/types.hpp"

namespace nris {

/// Hermitian PSD matrix D with theta^H D theta = ||H2 diag(theta) H1||_F^2.
struct QuadraticForm {
    CMatrix d;
    int n_bs = 0;
    int n_ms = 0;
    int n_ris = 0;
    double abs_sum = 0.0;  // sum_pq |D_pq|, scale for residue and degeneracy checks

    int size() const { return n_ris; }
};

/// D = conj(H1 H1^H) .* (H2^H H2), the entrywise-product form of D^ ^H D^ with
/// D^ the diagonal-selecting columns of (H1^T kron H2).
inline QuadraticForm build_quadratic_form(const CMatrix& h1, const CMatrix& h2) {
    if (h2.cols() != h1.rows())
        throw UsageError("build_quadratic_form: H2 has " + std::to_string(h2.cols()) +
                         " columns but H1 has " + std::to_string(h1.rows()) + " rows");
    QuadraticForm form;
    form.n_ris = static_cast<int>(h1.rows());
    form.n_bs = static_cast<int>(h1.cols());
    form.n_ms = static_cast<int>(h2.rows());

    const CMatrix g1 = h1 * h1.adjoint();
    const CMatrix g2 = h2.adjoint() * h2;
    CMatrix d = g1.conjugate().cwiseProduct(g2);
    form.d = 0.5 * (d + d.adjoint());  // exact Hermitian symmetry
    form.abs_sum = form.d.cwiseAbs().sum();
    return form;
}

namespace detail {

inline CVector unit_phasors(const RVector& phases) {
    CVector z(phases.size());
    for (Eigen::Index n = 0; n < phases.size(); ++n) z(n) = std::polar(1.0, phases(n));
    return z;
}

inline constexpr double kResidueTol = 1e-10;

inline double checked_real(cplx v, double scale, const char* what) {
    if (std::abs(v.imag()) > kResidueTol * std::max(scale, std::numeric_limits<double>::min()) &&
        std::abs(v.imag()) > 0.0)
        throw NumericalError(std::string(what) + ": imaginary residue " + std::to_string(v.imag()) +
                             " exceeds tolerance");
    return v.real();
}

inline void require_length(const QuadraticForm& form, Eigen::Index n, const char* what) {
    if (n != form.n_ris)
        throw UsageError(std::string(what) + ": phase vector has length " + std::to_string(n) +
                         ", expected " + std::to_string(form.n_ris));
}

}  // namespace detail

/// Descent objective f(phi) = -mu^2 z^H D z with z = exp(j phi).
inline double objective(const QuadraticForm& form, const RVector& phases, double mean_amplitude) {
    detail::require_length(form, phases.size(), "objective");
    const CVector z = detail::unit_phasors(phases);
    const double mu2 = mean_amplitude * mean_amplitude;
    const cplx s = -mu2 * z.dot(form.d * z);  // dot() conjugates the left operand
    return detail::checked_real(s, mu2 * form.abs_sum, "objective");
}

/// Channel energy theta^H D theta = -f(phi), the quantity the optimisers maximise.
inline double trace_objective(const QuadraticForm& form, const RVector& phases,
                              double mean_amplitude) {
    return -objective(form, phases, mean_amplitude);
}

/// df/dphi_n = mu^2 j e^{-j phi_n} sum_q D_nq e^{j phi_q} - mu^2 j e^{j phi_n} sum_p D_pn e^{-j phi_p}
inline RVector gradient(const QuadraticForm& form, const RVector& phases, double mean_amplitude) {
    detail::require_length(form, phases.size(), "gradient");
    const CVector z = detail::unit_phasors(phases);
    const double mu2 = mean_amplitude * mean_amplitude;
    const CVector row_sums = form.d * z;                           // sum_q D_nq z_q
    const CVector col_sums = form.d.transpose() * z.conjugate();   // sum_p D_pn conj(z_p)
    RVector g(phases.size());
    for (Eigen::Index n = 0; n < phases.size(); ++n) {
        const cplx v = mu2 * kJ * (std::conj(z(n)) * row_sums(n) - z(n) * col_sums(n));
        const double scale = 2.0 * mu2 * form.d.row(n).cwiseAbs().sum();
        g(n) = detail::checked_real(v, scale, "gradient");
    }
    return g;
}

/// Settings shared by the gradient-descent variants.
struct OptimizerSettings {
    enum class Init { kZeros, kRandom };

    int max_iterations = 100;
    double fixed_step = 1e-6;     // C-GD step (usually replaced by calibration)
    double c2_epsilon = 1e-12;    // relative threshold for a degenerate quadratic model
    double fallback_step = 1e-2;  // step used when the model is degenerate
    Init init_phases = Init::kZeros;
    std::uint64_t init_seed = 0;  // used when init_phases == kRandom

    void validate() const {
        if (max_iterations < 1) throw ConfigError("optimizer.max_iterations must be >= 1");
        if (!(fixed_step >= 0.0)) throw ConfigError("optimizer.fixed_step must be >= 0");
        if (!(c2_epsilon > 0.0)) throw ConfigError("optimizer.c2_epsilon must be > 0");
        if (!(fallback_step >= 0.0)) throw ConfigError("optimizer.fallback_step must be >= 0");
    }
};

/// Second-order model f(phi - lambda g) ~ c0 + c1 lambda + c2 lambda^2.
struct StepModel {
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double c2_scale = 0.0;  // upper bound on |c2|; degeneracy is judged against it
};

/// Expands exp(j lambda Gamma_pq), Gamma_pq = g_p - g_q, to second order:
///   c1 = Re[-mu^2 sum_pq D_pq e^{j(phi_q - phi_p)} j Gamma_pq]
///   c2 = Re[ mu^2 sum_pq D_pq e^{j(phi_q - phi_p)} Gamma_pq^2 / 2]
/// The double sums are evaluated through three products with D.
inline StepModel step_model(const QuadraticForm& form, const RVector& phases, const RVector& grad,
                            double mean_amplitude) {
    detail::require_length(form, phases.size(), "step_model");
    detail::require_length(form, grad.size(), "step_model");
    const double mu2 = mean_amplitude * mean_amplitude;
    const CVector z = detail::unit_phasors(phases);
    const CVector gz = grad.cast<cplx>().cwiseProduct(z);
    const CVector g2z = grad.cast<cplx>().cwiseProduct(gz);
    const CVector dz = form.d * z;
    const CVector dgz = form.d * gz;
    const CVector dg2z = form.d * g2z;

    // sum_pq conj(z_p) D_pq z_q x_p y_q for x, y in {1, g, g^2}
    const cplx s00 = z.dot(dz);
    const cplx s10 = gz.dot(dz);
    const cplx s01 = z.dot(dgz);
    const cplx s20 = g2z.dot(dz);
    const cplx s11 = gz.dot(dgz);
    const cplx s02 = z.dot(dg2z);

    const double gmax = grad.size() > 0 ? grad.cwiseAbs().maxCoeff() : 0.0;
    StepModel m;
    m.c0 = detail::checked_real(-mu2 * s00, mu2 * form.abs_sum, "step_model c0");
    m.c1 = detail::checked_real(-mu2 * kJ * (s10 - s01), 2.0 * mu2 * form.abs_sum * gmax,
                                "step_model c1");
    m.c2_scale = 0.5 * mu2 * form.abs_sum * 4.0 * gmax * gmax;
    m.c2 = detail::checked_real(0.5 * mu2 * (s20 - 2.0 * s11 + s02), m.c2_scale, "step_model c2");
    return m;
}

/// Step-size case split: -c1 / (2 c2) for a convex model, |c1| / |c2| for a
/// concave one, and the fallback step when |c2| <= c2_epsilon * c2_scale.
inline double step_from_model(const StepModel& m, const OptimizerSettings& settings) {
    const double guard = settings.c2_epsilon * m.c2_scale;
    if (m.c2 > guard) return -m.c1 / (2.0 * m.c2);
    if (m.c2 < -guard) return std::abs(m.c1) / std::abs(m.c2);
    return settings.fallback_step;
}

inline double adaptive_step(const QuadraticForm& form, const RVector& phases, const RVector& grad,
                            double mean_amplitude, const OptimizerSettings& settings) {
    return step_from_model(step_model(form, phases, grad, mean_amplitude), settings);
}

/// Maps phases onto the codebook by circular distance (period 2 pi). Ties go
/// to the lower codebook index.
inline RVector quantize_phases(const RVector& phases, const PhaseCodebook& codebook) {
    const auto& levels = codebook.phases_rad();
    RVector out(phases.size());
    for (Eigen::Index n = 0; n < phases.size(); ++n) {
        const double w = wrap_two_pi(phases(n));
        std::size_t best = 0;
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < levels.size(); ++k) {
            const double diff = std::abs(w - levels[k]);
            const double dist = std::min(diff, kTwoPi - diff);
            if (dist < best_dist - 1e-12) {
                best = k;
                best_dist = dist;
            }
        }
        out(n) = levels[best];
    }
    return out;
}

struct IterationRecord {
    int iteration = 0;
    double objective = 0.0;  // channel energy theta^H D theta at phi^i
    double step = 0.0;       // step that produced phi^i from phi^{i-1}
    double grad_norm = 0.0;  // ||grad f(phi^{i-1})||
};

/// Run history plus the best continuous iterate and its quantised image.
struct GdTrace {
    std::vector<IterationRecord> iterations;
    RVector best_phases_rad;
    double best_objective = -std::numeric_limits<double>::infinity();
    int best_iteration = 0;
    RVector quantized_phases_rad;
    double quantized_objective = 0.0;
    double wall_ms = 0.0;
};

namespace detail {

inline RVector initial_phases(const QuadraticForm& form, const PhaseCodebook& codebook,
                              const OptimizerSettings& settings) {
    if (settings.init_phases == OptimizerSettings::Init::kZeros) return RVector::Zero(form.n_ris);
    RngStream rng(settings.init_seed);
    RVector phases(form.n_ris);
    for (int n = 0; n < form.n_ris; ++n) phases(n) = rng.uniform(0.0, codebook.max_phase_rad());
    return phases;
}

using StepPolicy = std::function<double(const RVector& phases, const RVector& grad)>;

inline GdTrace run_descent(const QuadraticForm& form, const PhaseCodebook& codebook,
                           const OptimizerSettings& settings, const StepPolicy& step_policy) {
    settings.validate();
    const auto t_start = std::chrono::steady_clock::now();
    const double mu = codebook.mean_amplitude();

    GdTrace trace;
    trace.iterations.reserve(static_cast<std::size_t>(settings.max_iterations) + 1);
    RVector phases = initial_phases(form, codebook, settings);
    double current = trace_objective(form, phases, mu);
    trace.iterations.push_back({0, current, 0.0, 0.0});
    trace.best_phases_rad = phases;
    trace.best_objective = current;

    for (int i = 0; i < settings.max_iterations; ++i) {
        const RVector grad = gradient(form, phases, mu);
        const double step = step_policy(phases, grad);
        phases -= step * grad;
        current = trace_objective(form, phases, mu);
        trace.iterations.push_back({i + 1, current, step, grad.norm()});
        if (current > trace.best_objective) {
            trace.best_objective = current;
            trace.best_phases_rad = phases;
            trace.best_iteration = i + 1;
        }
    }

    trace.quantized_phases_rad = quantize_phases(trace.best_phases_rad, codebook);
    trace.quantized_objective = trace_objective(form, trace.quantized_phases_rad, mu);
    trace.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t_start).count();
    return trace;
}

}  // namespace detail

/// Adaptive-step gradient descent.
inline GdTrace run_agd(const QuadraticForm& form, const PhaseCodebook& codebook,
                       const OptimizerSettings& settings) {
    const double mu = codebook.mean_amplitude();
    return detail::run_descent(form, codebook, settings,
                               [&](const RVector& phases, const RVector& grad) {
                                   return adaptive_step(form, phases, grad, mu, settings);
                               });
}

/// Constant-step gradient descent with settings.fixed_step.
inline GdTrace run_cgd(const QuadraticForm& form, const PhaseCodebook& codebook,
                       const OptimizerSettings& settings) {
    const double step = settings.fixed_step;
    return detail::run_descent(form, codebook, settings,
                               [step](const RVector&, const RVector&) { return step; });
}

/// Phases drawn uniformly from the codebook; the best of n_draws is kept.
inline GdTrace run_random_phase(const QuadraticForm& form, const PhaseCodebook& codebook,
                                int n_draws, RngStream& rng) {
    if (n_draws < 1) throw UsageError("run_random_phase: n_draws must be >= 1");
    const auto t_start = std::chrono::steady_clock::now();
    const double mu = codebook.mean_amplitude();
    const auto& levels = codebook.phases_rad();
    GdTrace trace;
    for (int k = 0; k < n_draws; ++k) {
        RVector phases(form.n_ris);
        for (int n = 0; n < form.n_ris; ++n) phases(n) = levels[rng.uniform_index(levels.size())];
        const double value = trace_objective(form, phases, mu);
        trace.iterations.push_back({k, value, 0.0, 0.0});
        if (value > trace.best_objective) {
            trace.best_objective = value;
            trace.best_phases_rad = phases;
            trace.best_iteration = k;
        }
    }
    trace.quantized_phases_rad = trace.best_phases_rad;
    trace.quantized_objective = trace.best_objective;
    trace.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t_start).count();
    return trace;
}

inline constexpr double kExhaustiveLimit = 1e6;

/// Number of codebook grid points, (2^b)^N, as a double to avoid overflow.
inline double exhaustive_grid_size(int n_ris, int bits) {
    return std::pow(std::ldexp(1.0, bits), n_ris);
}

/// Exact discrete optimum of theta^H D theta over the codebook grid. Points are
/// visited in lexicographic order of the level indices (first element most
/// significant) and only a strictly better point replaces the incumbent.
inline std::pair<RVector, double> run_exhaustive(const QuadraticForm& form,
                                                 const PhaseCodebook& codebook) {
    if (exhaustive_grid_size(form.n_ris, codebook.bits()) > kExhaustiveLimit)
        throw UsageError("run_exhaustive: search space (2^b)^N_RIS exceeds 1e6");
    const double mu = codebook.mean_amplitude();
    const auto& levels = codebook.phases_rad();
    const std::size_t n_levels = levels.size();
    const int n = form.n_ris;

    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    RVector phases = RVector::Constant(n, levels[0]);
    RVector best_phases = phases;
    double best = -std::numeric_limits<double>::infinity();
    while (true) {
        const double value = trace_objective(form, phases, mu);
        if (value > best) {
            best = value;
            best_phases = phases;
        }
        int pos = n - 1;
        while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] == n_levels) {
            idx[static_cast<std::size_t>(pos)] = 0;
            phases(pos) = levels[0];
            --pos;
        }
        if (pos < 0) break;
        phases(pos) = levels[idx[static_cast<std::size_t>(pos)]];
    }
    return {best_phases, best};
}

/// Decade grid 10^lo .. 10^hi used to calibrate the C-GD step.
inline std::vector<double> decade_grid(int lo_exp, int hi_exp) {
    std::vector<double> grid;
    for (int e = lo_exp; e <= hi_exp; ++e) grid.push_back(std::pow(10.0, e));
    return grid;
}

/// Picks the fixed step with the largest mean best-objective over `batch`.
inline double calibrate_fixed_step(std::span<const QuadraticForm> batch, const PhaseCodebook& codebook,
                                   OptimizerSettings settings, std::span<const double> grid) {
    if (batch.empty() || grid.empty()) throw UsageError("calibrate_fixed_step: empty batch or grid");
    double best_step = grid.front();
    double best_mean = -std::numeric_limits<double>::infinity();
    for (double step : grid) {
        settings.fixed_step = step;
        double sum = 0.0;
        for (const auto& form : batch) sum += run_cgd(form, codebook, settings).best_objective;
        const double mean = sum / static_cast<double>(batch.size());
        if (mean > best_mean) {
            best_mean = mean;
            best_step = step;
        }
    }
    return best_step;
}

/// Writes "iter,objective,step,grad_norm" rows.
inline void write_trace(std::ostream& os, const GdTrace& trace) {
    os << "iter,objective,step,grad_norm\n";
    char buf[128];
    for (const auto& r : trace.iterations) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", r.iteration, r.objective, r.step,
                      r.grad_norm);
        os << buf;
    }
}

}  // namespace nris
