// SPDX-License-Identifier: Apache-2.0
//
// Tunable graphene reflecting element: Drude-type surface conductivity,
// gate-voltage control of the Fermi level, effective permittivity of the
// graphene sheet, Fabry-Perot phase response, and the discrete
// phase/amplitude codebook consumed by the phase optimizer.
//
// Time convention is exp(+j*omega*t) everywhere.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "nris/errors.hpp"
#include "nris/types.hpp"

namespace nris {

/// Material parameters of the graphene sheet and its gate electrode.
struct GrapheneParams {
    double temperature_K = 300.0;
    double relaxation_time_s = 1e-12;
    double fermi_velocity_m_s = 1e6;
    double residual_carrier_density_m2 = 1e15;
    double electrode_capacitivity = 1e16;  // m^-2 V^-2
    double compensating_voltage_V = 0.0;

    void validate() const {
        if (!(temperature_K > 0.0)) throw ConfigError("graphene.temperature_K must be > 0");
        if (!(relaxation_time_s > 0.0)) throw ConfigError("graphene.relaxation_time_s must be > 0");
        if (!(fermi_velocity_m_s > 0.0)) throw ConfigError("graphene.fermi_velocity_m_s must be > 0");
        if (!(residual_carrier_density_m2 >= 0.0))
            throw ConfigError("graphene.residual_carrier_density_m2 must be >= 0");
        if (!(electrode_capacitivity > 0.0))
            throw ConfigError("graphene.electrode_capacitivity must be > 0");
        if (!std::isfinite(compensating_voltage_V))
            throw ConfigError("graphene.compensating_voltage_V must be finite");
    }
};

/// Unit-cell geometry of one reflecting element (graphene / quartz / gold stack).
struct ElementGeometry {
    double patch_width_m = 66e-6;
    double period_m = 70e-6;
    double substrate_thickness_m = 38e-6;
    double metal_thickness_m = 1e-6;
    double graphene_thickness_m = 1e-9;
    int resonance_order = 1;

    void validate() const {
        if (!(patch_width_m > 0.0 && period_m > 0.0 && substrate_thickness_m > 0.0 &&
              metal_thickness_m > 0.0 && graphene_thickness_m > 0.0))
            throw ConfigError("element geometry: all lengths must be > 0");
        if (!(patch_width_m < period_m))
            throw ConfigError("element geometry: patch_width_m must be < period_m");
    }
};

namespace detail {

// ln(2 cosh x) without overflow for large |x|.
inline double log_two_cosh(double x) {
    const double ax = std::abs(x);
    return ax + std::log1p(std::exp(-2.0 * ax));
}

inline void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw DomainError(std::string(what) + " must be finite");
}

}  // namespace detail

/// Intraband (Drude) surface conductivity of graphene in siemens.
///
///   sigma = 2 e^2 / (pi hbar^2) * kB T * ln[2 cosh(E_F / (2 kB T))] * i / (omega + i / tau)
inline cplx surface_conductivity(const GrapheneParams& params, double fermi_level_J,
                                 double angular_freq_rad_s) {
    detail::require_finite(fermi_level_J, "fermi_level_J");
    detail::require_finite(angular_freq_rad_s, "angular_freq_rad_s");
    detail::require_finite(params.temperature_K, "temperature_K");
    detail::require_finite(params.relaxation_time_s, "relaxation_time_s");
    if (!(angular_freq_rad_s > 0.0)) throw DomainError("angular_freq_rad_s must be > 0");
    if (!(fermi_level_J >= 0.0)) throw DomainError("fermi_level_J must be >= 0");

    using namespace phys;
    const double kbt = kBoltzmann * params.temperature_K;
    const double prefactor =
        2.0 * kElementaryCharge * kElementaryCharge / (kPi * kHbar * kHbar) * kbt *
        detail::log_two_cosh(fermi_level_J / (2.0 * kbt));
    return prefactor * kJ / cplx(angular_freq_rad_s, 1.0 / params.relaxation_time_s);
}

/// Magnitude of the Fermi level (J) reached at gate voltage `applied_voltage_V`.
inline double fermi_level_from_voltage(const GrapheneParams& params, double applied_voltage_V) {
    const double dv = params.compensating_voltage_V - applied_voltage_V;
    const double n0 = params.residual_carrier_density_m2;
    const double carrier_density = std::sqrt(n0 * n0 + params.electrode_capacitivity * dv * dv);
    return phys::kHbar * params.fermi_velocity_m_s * std::sqrt(kPi * carrier_density);
}

/// eps_eff = 1 + i sigma / (omega eps0 t_g)
inline cplx effective_permittivity(cplx sigma, double angular_freq_rad_s,
                                   double graphene_thickness_m) {
    if (!(graphene_thickness_m > 0.0)) throw DomainError("graphene_thickness_m must be > 0");
    if (!(angular_freq_rad_s > 0.0)) throw DomainError("angular_freq_rad_s must be > 0");
    return 1.0 + kJ * sigma / (angular_freq_rad_s * phys::kEpsilon0 * graphene_thickness_m);
}

/// Fabry-Perot phase response m*pi - a*k0*Re(n_eff), n_eff the principal root of eps_eff.
inline double analytic_phase_response(const ElementGeometry& geom, cplx eps_eff, double freq_Hz) {
    if (!(freq_Hz > 0.0)) throw DomainError("freq_Hz must be > 0");
    const double k0 = kTwoPi * freq_Hz / phys::kSpeedOfLight;
    const cplx n_eff = std::sqrt(eps_eff);  // principal branch, Re >= 0
    return geom.resonance_order * kPi - geom.patch_width_m * k0 * n_eff.real();
}

/// Discrete phase set with its per-phase reflection amplitudes.
///
/// Phases are k * max_phase / 2^bits for k = 0 .. 2^bits - 1. Only
/// build_codebook() creates instances, so the invariants always hold.
class PhaseCodebook {
public:
    double max_phase_rad() const { return max_phase_rad_; }
    int bits() const { return bits_; }
    std::size_t size() const { return phases_rad_.size(); }
    const std::vector<double>& phases_rad() const { return phases_rad_; }
    const std::vector<double>& amplitudes() const { return amplitudes_; }
    double mean_amplitude() const { return mean_amplitude_; }

private:
    PhaseCodebook() = default;

    double max_phase_rad_ = 0.0;
    int bits_ = 0;
    std::vector<double> phases_rad_;
    std::vector<double> amplitudes_;
    double mean_amplitude_ = 0.0;

    friend PhaseCodebook build_codebook(double, int, std::vector<double>);
};

inline constexpr int kMaxCodebookBits = 16;

/// Codebook with an explicit amplitude per phase state (length 2^bits).
inline PhaseCodebook build_codebook(double max_phase_rad, int bits, std::vector<double> amplitudes) {
    if (bits < 1 || bits > kMaxCodebookBits)
        throw ConfigError("codebook.bits must be in [1, " + std::to_string(kMaxCodebookBits) + "]");
    if (!(max_phase_rad > 0.0 && max_phase_rad <= kTwoPi + 1e-12))
        throw ConfigError("codebook.max_phase must be in (0, 360] degrees");
    const std::size_t levels = std::size_t{1} << bits;
    if (amplitudes.size() != levels)
        throw ConfigError("codebook.amplitudes must have 2^bits = " + std::to_string(levels) +
                          " entries, got " + std::to_string(amplitudes.size()));
    for (double a : amplitudes)
        if (!(a >= 0.0 && a <= 1.0)) throw ConfigError("codebook.amplitudes entries must lie in [0, 1]");

    const double mean = std::accumulate(amplitudes.begin(), amplitudes.end(), 0.0) /
                        static_cast<double>(levels);
    if (!(mean >= 0.5 - 1e-12 && mean <= 1.0 + 1e-12))
        throw ConfigError("codebook mean amplitude must lie in [0.5, 1]");

    PhaseCodebook cb;
    cb.max_phase_rad_ = std::min(max_phase_rad, kTwoPi);
    cb.bits_ = bits;
    cb.phases_rad_.resize(levels);
    for (std::size_t k = 0; k < levels; ++k)
        cb.phases_rad_[k] = static_cast<double>(k) * cb.max_phase_rad_ / static_cast<double>(levels);
    cb.amplitudes_ = std::move(amplitudes);
    cb.mean_amplitude_ = mean;
    return cb;
}

/// Codebook whose 2^bits states all share one reflection amplitude.
inline PhaseCodebook build_codebook(double max_phase_rad, int bits, double uniform_amplitude) {
    if (bits < 1 || bits > kMaxCodebookBits)
        throw ConfigError("codebook.bits must be in [1, " + std::to_string(kMaxCodebookBits) + "]");
    return build_codebook(max_phase_rad, bits,
                          std::vector<double>(std::size_t{1} << bits, uniform_amplitude));
}

/// Calibrated element from the full-wave unit-cell characterisation at 1.6 THz.
inline constexpr double kCalibratedMaxPhaseDeg = 306.82;
inline constexpr double kCalibratedMeanAmplitude = 0.8;

}  // namespace nris
