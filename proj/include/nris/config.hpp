// SPDX-License-Identifier: Apache-2.0
//
// Experiment configuration: YAML loading with strict key checking, the
// documented defaults (config-reference), built-in figure presets and an
// echo of the effective configuration.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "nris/channel.hpp"
#include "nris/errors.hpp"
#include "nris/graphene.hpp"
#include "nris/optimizer.hpp"

namespace nris {

enum class Scheme { kAgd, kCgd, kRandom, kNoRis, kExhaustive };
enum class SweepKind { kNone, kVsSnr, kVsNris, kVsPhimax, kVsBits };

inline std::string_view scheme_name(Scheme s) {
    switch (s) {
        case Scheme::kAgd: return "agd";
        case Scheme::kCgd: return "cgd";
        case Scheme::kRandom: return "random";
        case Scheme::kNoRis: return "no_ris";
        case Scheme::kExhaustive: return "exhaustive";
    }
    return "?";
}

inline std::string_view sweep_name(SweepKind k) {
    switch (k) {
        case SweepKind::kNone: return "none";
        case SweepKind::kVsSnr: return "vs_snr";
        case SweepKind::kVsNris: return "vs_nris";
        case SweepKind::kVsPhimax: return "vs_phimax";
        case SweepKind::kVsBits: return "vs_bits";
    }
    return "?";
}

inline std::optional<Scheme> parse_scheme(std::string_view s) {
    for (Scheme v : {Scheme::kAgd, Scheme::kCgd, Scheme::kRandom, Scheme::kNoRis, Scheme::kExhaustive})
        if (scheme_name(v) == s) return v;
    return std::nullopt;
}

inline std::optional<SweepKind> parse_sweep(std::string_view s) {
    for (SweepKind v : {SweepKind::kNone, SweepKind::kVsSnr, SweepKind::kVsNris, SweepKind::kVsPhimax,
                        SweepKind::kVsBits})
        if (sweep_name(v) == s) return v;
    return std::nullopt;
}

/// Grid used when a sweep is selected without explicit values.
inline std::vector<double> default_sweep_values(SweepKind k) {
    switch (k) {
        case SweepKind::kVsPhimax: return {60.0, 120.0, 180.0, 240.0, 306.82, 360.0};
        case SweepKind::kVsBits: return {1.0, 2.0, 3.0, 4.0};
        case SweepKind::kVsNris: return {16.0, 32.0, 48.0, 64.0};
        default: return {};
    }
}

struct CodebookSpec {
    double max_phase_deg = kCalibratedMaxPhaseDeg;
    int bits = 2;
    double mean_amplitude = kCalibratedMeanAmplitude;
    std::vector<double> amplitudes;  // optional per-state list; overrides mean_amplitude

    PhaseCodebook build(double max_phase_deg_value, int bits_value) const {
        if (!amplitudes.empty())
            return build_codebook(deg_to_rad(max_phase_deg_value), bits_value, amplitudes);
        return build_codebook(deg_to_rad(max_phase_deg_value), bits_value, mean_amplitude);
    }
    PhaseCodebook build() const { return build(max_phase_deg, bits); }
};

struct CalibrationSettings {
    bool enabled = true;  // false: C-GD uses optimizer.fixed_step as given
    int realizations = 10;
    int min_exponent = -12;
    int max_exponent = 0;
};

struct OutputSettings {
    std::string dir = "out";
    bool record_wall_time = false;
    bool dump_channels = false;
    bool dump_traces = false;
};

struct ExperimentConfig {
    std::string name = "experiment";
    int n_bs = 64;
    int n_ris = 64;
    int n_ms = 16;
    int m_bs = 6;
    int m_ms = 4;
    int n_streams = 4;
    ChannelSpec channel;  // array sizes inside are overwritten from the fields above
    CodebookSpec codebook;
    std::vector<double> snr_grid_db{-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0};
    int n_realizations = 50;
    std::uint64_t master_seed = 1;
    std::vector<Scheme> schemes{Scheme::kAgd, Scheme::kCgd, Scheme::kRandom, Scheme::kNoRis};
    SweepKind sweep = SweepKind::kVsSnr;
    std::vector<double> sweep_values;
    OptimizerSettings optimizer;
    CalibrationSettings cgd_calibration;
    int random_draws = 1;
    GrapheneParams graphene;
    ElementGeometry element;
    OutputSettings output;

    bool has_scheme(Scheme s) const {
        return std::find(schemes.begin(), schemes.end(), s) != schemes.end();
    }

    ChannelSpec channel_spec(int n_ris_value) const {
        ChannelSpec c = channel;
        c.n_bs = n_bs;
        c.n_ris = n_ris_value;
        c.n_ms = n_ms;
        return c;
    }
    ChannelSpec channel_spec() const { return channel_spec(n_ris); }

    /// Sweep grid actually used (explicit values or the kind's default grid).
    std::vector<double> effective_sweep_values() const {
        if (sweep == SweepKind::kNone || sweep == SweepKind::kVsSnr) return {0.0};
        return sweep_values.empty() ? default_sweep_values(sweep) : sweep_values;
    }

    void validate() const;
};

namespace detail {

inline bool is_integral(double v) { return std::isfinite(v) && v == std::floor(v); }

inline void check(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

}  // namespace detail

inline void ExperimentConfig::validate() const {
    using detail::check;
    auto constraint = [](const char* rel, int a, int b, const char* na, const char* nb) {
        return std::string("constraint ") + rel + " violated (" + na + " = " + std::to_string(a) +
               ", " + nb + " = " + std::to_string(b) + ")";
    };
    check(n_streams >= 1, "dims.n_streams must be >= 1");
    check(n_bs >= m_bs, constraint("n_bs >= m_bs", n_bs, m_bs, "n_bs", "m_bs"));
    check(m_bs >= n_streams, constraint("m_bs >= n_streams", m_bs, n_streams, "m_bs", "n_streams"));
    check(n_ms >= m_ms, constraint("n_ms >= m_ms", n_ms, m_ms, "n_ms", "m_ms"));
    check(m_ms >= n_streams, constraint("m_ms >= n_streams", m_ms, n_streams, "m_ms", "n_streams"));
    check(n_ris >= 1, "dims.n_ris must be >= 1");
    channel_spec().validate();
    codebook.build();
    check(!snr_grid_db.empty(), "snr_grid_db must not be empty");
    for (double s : snr_grid_db) check(std::isfinite(s), "snr_grid_db entries must be finite");
    check(n_realizations >= 1, "n_realizations must be >= 1");
    check(!schemes.empty(), "schemes must not be empty");
    check(random_draws >= 1, "optimizer.random_draws must be >= 1");
    optimizer.validate();
    check(cgd_calibration.realizations >= 1, "optimizer.cgd_calibration.realizations must be >= 1");
    check(cgd_calibration.min_exponent <= cgd_calibration.max_exponent,
          "optimizer.cgd_calibration: min_exponent must be <= max_exponent");
    graphene.validate();
    element.validate();

    int max_nris = n_ris;
    int max_bits = codebook.bits;
    for (double v : effective_sweep_values()) {
        switch (sweep) {
            case SweepKind::kVsNris:
                check(detail::is_integral(v) && v >= 1.0, "sweep.values for vs_nris must be integers >= 1");
                max_nris = std::max(max_nris, static_cast<int>(v));
                break;
            case SweepKind::kVsBits:
                check(detail::is_integral(v) && v >= 1.0 && v <= kMaxCodebookBits,
                      "sweep.values for vs_bits must be integers in [1, 16]");
                max_bits = std::max(max_bits, static_cast<int>(v));
                codebook.build(codebook.max_phase_deg, static_cast<int>(v));
                break;
            case SweepKind::kVsPhimax:
                check(v > 0.0 && v <= 360.0, "sweep.values for vs_phimax must lie in (0, 360]");
                break;
            default:
                break;
        }
    }
    if (has_scheme(Scheme::kExhaustive))
        check(exhaustive_grid_size(max_nris, max_bits) <= kExhaustiveLimit,
              "scheme exhaustive requires (2^bits)^n_ris <= 1e6");
}

// ---------------------------------------------------------------------------
// Reference configuration. Parsing this text yields ExperimentConfig{}.

inline constexpr std::string_view kConfigReference = R"(# nris-lab experiment configuration reference.
# Every key is optional; the values below are the defaults. Unknown keys are rejected.
name: experiment              # stem of the output files
master_seed: 1                # 64-bit master seed; realization r uses hash(master_seed, r)
n_realizations: 50            # Monte-Carlo channel realizations per sweep point
snr_grid_db: [-10, -5, 0, 5, 10, 15, 20]   # SNR = rho / noise variance, in dB
schemes: [agd, cgd, random, no_ris]         # subset of agd, cgd, random, no_ris, exhaustive
dims:
  n_bs: 64                    # BS antennas (UPA, lambda/2 spacing)
  n_ris: 64                   # RIS reflecting elements (UPA, element-period spacing)
  n_ms: 16                    # MS antennas (UPA, lambda/2 spacing)
  m_bs: 6                     # BS RF chains; n_bs >= m_bs >= n_streams
  m_ms: 4                     # MS RF chains; n_ms >= m_ms >= n_streams
  n_streams: 4                # data streams N_s
channel:
  carrier_freq_hz: 1.6e12
  ris_element_spacing_m: 7e-05  # element period g
  bs_ris_m: 10                # BS-RIS distance
  ris_ms_m: 20                # RIS-MS distance
  bs_ms_m: 25                 # BS-MS distance (direct link, LoS blocked)
  kappa_per_m: 0.2            # molecular absorption coefficient
  xi: 1e-06                   # reflection coefficient of scatterers
  n_nlos: 2                   # NLoS paths of H1 and H2 (plus one LoS path each)
  n_nlos_direct: 3            # NLoS paths of the direct BS-MS channel
  nlos_excess_range_m: [1, 10]  # detour excess e ~ U[lo, hi): r1 = r u, r2 = r (1 - u) + e
  nlos_split_range: [0.3, 0.7]  # split u ~ U[lo, hi)
  gain_normalization: los_reference  # los_reference | absolute
codebook:
  max_phase_deg: 306.82       # maximum phase response
  bits: 2                     # 2^bits phase states k * max_phase / 2^bits
  mean_amplitude: 0.8         # reflection amplitude applied to every element
  amplitudes: []              # optional per-state amplitudes (length 2^bits); mean replaces mean_amplitude
sweep:
  kind: vs_snr                # none | vs_snr | vs_nris | vs_phimax | vs_bits
  values: []                  # empty: default grid of the kind
optimizer:
  max_iterations: 100         # gradient-descent iterations
  fixed_step: 1e-06           # C-GD step when calibration is disabled
  c2_epsilon: 1e-12           # relative guard on the quadratic step model
  fallback_step: 0.01         # step used when that model is degenerate
  init_phases: zeros          # zeros | random
  random_draws: 1             # draws per realization for the random scheme (best kept)
  cgd_calibration:
    enabled: true             # pick the C-GD step per sweep point on a separate batch
    realizations: 10          # calibration batch, seeded apart from the evaluation realizations
    min_exponent: -12         # candidate steps 10^min_exponent .. 10^max_exponent
    max_exponent: 0
graphene:
  temperature_k: 300
  relaxation_time_s: 1e-12
  fermi_velocity_m_s: 1e6
  residual_carrier_density_m2: 1e15
  electrode_capacitivity: 1e16
  compensating_voltage_v: 0
element:
  patch_width_m: 6.6e-05
  period_m: 7e-05
  substrate_thickness_m: 3.8e-05
  metal_thickness_m: 1e-06
  graphene_thickness_m: 1e-09
  resonance_order: 1
output:
  dir: out
  record_wall_time: false     # true fills mean_wall_ms (the CSV is then no longer reproducible)
  dump_channels: false        # write one channel dump per realization (first sweep point)
  dump_traces: false          # write A-GD / C-GD traces per realization (first sweep point)
)";

namespace detail {

class Reader {
public:
    Reader(const YAML::Node& node, std::string path) : node_(node), path_(std::move(path)) {
        if (node_ && !node_.IsNull() && !node_.IsMap())
            throw ConfigError(where() + "expected a mapping");
    }

    /// Rejects keys not in `allowed`.
    void allow(std::initializer_list<std::string_view> allowed) const {
        if (!node_ || node_.IsNull()) return;
        for (const auto& kv : node_) {
            const auto key = kv.first.as<std::string>();
            if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
                throw ConfigError("unknown key '" + join(key) + "'");
        }
    }

    Reader child(const std::string& key) const {
        return Reader(node_ ? node_[key] : YAML::Node(), join(key));
    }

    template <typename T>
    void get(const std::string& key, T& out) const {
        if (!node_ || node_.IsNull()) return;
        const YAML::Node v = node_[key];
        if (!v) return;
        try {
            if constexpr (std::is_same_v<T, bool>) {
                out = v.as<bool>();
            } else if constexpr (std::is_integral_v<T>) {
                // plain integers, or integral floating literals such as 1e3
                T parsed{};
                if (YAML::convert<T>::decode(v, parsed)) {
                    out = parsed;
                } else {
                    const double d = v.as<double>();
                    if (!is_integral(d) || d < static_cast<double>(std::numeric_limits<T>::min()) ||
                        d > static_cast<double>(std::numeric_limits<T>::max()))
                        throw ConfigError("");
                    out = static_cast<T>(d);
                }
            } else {
                out = v.as<T>();
            }
        } catch (const std::exception&) {
            throw ConfigError("invalid value for '" + join(key) + "': " + describe(v));
        }
    }

    void get_list(const std::string& key, std::vector<double>& out) const {
        if (!node_ || node_.IsNull()) return;
        const YAML::Node v = node_[key];
        if (!v) return;
        if (!v.IsSequence()) throw ConfigError("'" + join(key) + "' must be a list");
        std::vector<double> values;
        for (const auto& e : v) {
            try {
                values.push_back(e.as<double>());
            } catch (const std::exception&) {
                throw ConfigError("invalid list entry in '" + join(key) + "': " + describe(e));
            }
        }
        out = std::move(values);
    }

    void get_range(const std::string& key, std::pair<double, double>& out) const {
        std::vector<double> v{out.first, out.second};
        get_list(key, v);
        if (v.size() != 2) throw ConfigError("'" + join(key) + "' must be a [lo, hi] pair");
        out = {v[0], v[1]};
    }

    std::vector<std::string> get_strings(const std::string& key) const {
        std::vector<std::string> out;
        if (!node_ || node_.IsNull() || !node_[key]) return out;
        const YAML::Node v = node_[key];
        if (!v.IsSequence()) throw ConfigError("'" + join(key) + "' must be a list");
        for (const auto& e : v) out.push_back(e.as<std::string>());
        return out;
    }

    bool has(const std::string& key) const { return node_ && !node_.IsNull() && node_[key]; }

    std::string join(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

private:
    static std::string describe(const YAML::Node& v) {
        if (v.IsScalar()) return "'" + v.Scalar() + "'";
        return "<non-scalar>";
    }
    std::string where() const { return path_.empty() ? "" : "'" + path_ + "': "; }

    YAML::Node node_;
    std::string path_;
};

}  // namespace detail

/// Parses YAML text into a validated configuration.
inline ExperimentConfig parse_config(std::string_view text) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("YAML parse error: ") + e.what());
    }
    ExperimentConfig c;
    const detail::Reader top(root, "");
    top.allow({"name", "master_seed", "n_realizations", "snr_grid_db", "schemes", "dims", "channel",
               "codebook", "sweep", "optimizer", "graphene", "element", "output"});
    top.get("name", c.name);
    top.get("master_seed", c.master_seed);
    top.get("n_realizations", c.n_realizations);
    top.get_list("snr_grid_db", c.snr_grid_db);
    if (top.has("schemes")) {
        c.schemes.clear();
        for (const auto& s : top.get_strings("schemes")) {
            const auto parsed = parse_scheme(s);
            if (!parsed) throw ConfigError("unknown scheme '" + s + "' in 'schemes'");
            if (!c.has_scheme(*parsed)) c.schemes.push_back(*parsed);
        }
    }

    const auto dims = top.child("dims");
    dims.allow({"n_bs", "n_ris", "n_ms", "m_bs", "m_ms", "n_streams"});
    dims.get("n_bs", c.n_bs);
    dims.get("n_ris", c.n_ris);
    dims.get("n_ms", c.n_ms);
    dims.get("m_bs", c.m_bs);
    dims.get("m_ms", c.m_ms);
    dims.get("n_streams", c.n_streams);

    const auto ch = top.child("channel");
    ch.allow({"carrier_freq_hz", "ris_element_spacing_m", "bs_ris_m", "ris_ms_m", "bs_ms_m",
              "kappa_per_m", "xi", "n_nlos", "n_nlos_direct", "nlos_excess_range_m",
              "nlos_split_range", "gain_normalization"});
    ch.get("carrier_freq_hz", c.channel.carrier_freq_Hz);
    ch.get("ris_element_spacing_m", c.channel.ris_element_spacing_m);
    ch.get("bs_ris_m", c.channel.bs_ris_m);
    ch.get("ris_ms_m", c.channel.ris_ms_m);
    ch.get("bs_ms_m", c.channel.bs_ms_m);
    ch.get("kappa_per_m", c.channel.kappa_per_m);
    ch.get("xi", c.channel.xi);
    ch.get("n_nlos", c.channel.n_nlos);
    ch.get("n_nlos_direct", c.channel.n_nlos_direct);
    ch.get_range("nlos_excess_range_m", c.channel.nlos_excess_range_m);
    ch.get_range("nlos_split_range", c.channel.nlos_split_range);
    if (ch.has("gain_normalization")) {
        std::string g;
        ch.get("gain_normalization", g);
        if (g == "los_reference") c.channel.normalization = GainNormalization::kLosReference;
        else if (g == "absolute") c.channel.normalization = GainNormalization::kAbsolute;
        else throw ConfigError("channel.gain_normalization must be los_reference or absolute");
    }

    const auto cb = top.child("codebook");
    cb.allow({"max_phase_deg", "bits", "mean_amplitude", "amplitudes"});
    cb.get("max_phase_deg", c.codebook.max_phase_deg);
    cb.get("bits", c.codebook.bits);
    cb.get("mean_amplitude", c.codebook.mean_amplitude);
    cb.get_list("amplitudes", c.codebook.amplitudes);

    const auto sw = top.child("sweep");
    sw.allow({"kind", "values"});
    if (sw.has("kind")) {
        std::string k;
        sw.get("kind", k);
        const auto parsed = parse_sweep(k);
        if (!parsed) throw ConfigError("unknown sweep kind '" + k + "' in 'sweep.kind'");
        c.sweep = *parsed;
    }
    sw.get_list("values", c.sweep_values);

    const auto opt = top.child("optimizer");
    opt.allow({"max_iterations", "fixed_step", "c2_epsilon", "fallback_step", "init_phases",
               "random_draws", "cgd_calibration"});
    opt.get("max_iterations", c.optimizer.max_iterations);
    opt.get("fixed_step", c.optimizer.fixed_step);
    opt.get("c2_epsilon", c.optimizer.c2_epsilon);
    opt.get("fallback_step", c.optimizer.fallback_step);
    opt.get("random_draws", c.random_draws);
    if (opt.has("init_phases")) {
        std::string init;
        opt.get("init_phases", init);
        if (init == "zeros") c.optimizer.init_phases = OptimizerSettings::Init::kZeros;
        else if (init == "random") c.optimizer.init_phases = OptimizerSettings::Init::kRandom;
        else throw ConfigError("optimizer.init_phases must be zeros or random");
    }
    const auto cal = opt.child("cgd_calibration");
    cal.allow({"enabled", "realizations", "min_exponent", "max_exponent"});
    cal.get("enabled", c.cgd_calibration.enabled);
    cal.get("realizations", c.cgd_calibration.realizations);
    cal.get("min_exponent", c.cgd_calibration.min_exponent);
    cal.get("max_exponent", c.cgd_calibration.max_exponent);

    const auto gr = top.child("graphene");
    gr.allow({"temperature_k", "relaxation_time_s", "fermi_velocity_m_s", "residual_carrier_density_m2",
              "electrode_capacitivity", "compensating_voltage_v"});
    gr.get("temperature_k", c.graphene.temperature_K);
    gr.get("relaxation_time_s", c.graphene.relaxation_time_s);
    gr.get("fermi_velocity_m_s", c.graphene.fermi_velocity_m_s);
    gr.get("residual_carrier_density_m2", c.graphene.residual_carrier_density_m2);
    gr.get("electrode_capacitivity", c.graphene.electrode_capacitivity);
    gr.get("compensating_voltage_v", c.graphene.compensating_voltage_V);

    const auto el = top.child("element");
    el.allow({"patch_width_m", "period_m", "substrate_thickness_m", "metal_thickness_m",
              "graphene_thickness_m", "resonance_order"});
    el.get("patch_width_m", c.element.patch_width_m);
    el.get("period_m", c.element.period_m);
    el.get("substrate_thickness_m", c.element.substrate_thickness_m);
    el.get("metal_thickness_m", c.element.metal_thickness_m);
    el.get("graphene_thickness_m", c.element.graphene_thickness_m);
    el.get("resonance_order", c.element.resonance_order);

    const auto out = top.child("output");
    out.allow({"dir", "record_wall_time", "dump_channels", "dump_traces"});
    out.get("dir", c.output.dir);
    out.get("record_wall_time", c.output.record_wall_time);
    out.get("dump_channels", c.output.dump_channels);
    out.get("dump_traces", c.output.dump_traces);

    c.validate();
    return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

namespace detail {

inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline std::string num_list(const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v[i]);
    return s + "]";
}

}  // namespace detail

/// Effective configuration as YAML; parse_config(echo_config(c)) reproduces c.
inline std::string echo_config(const ExperimentConfig& c) {
    using detail::num;
    using detail::num_list;
    std::ostringstream o;
    o << "name: " << c.name << "\n";
    o << "master_seed: " << c.master_seed << "\n";
    o << "n_realizations: " << c.n_realizations << "\n";
    o << "snr_grid_db: " << num_list(c.snr_grid_db) << "\n";
    o << "schemes: [";
    for (std::size_t i = 0; i < c.schemes.size(); ++i) o << (i ? ", " : "") << scheme_name(c.schemes[i]);
    o << "]\n";
    o << "dims:\n  n_bs: " << c.n_bs << "\n  n_ris: " << c.n_ris << "\n  n_ms: " << c.n_ms
      << "\n  m_bs: " << c.m_bs << "\n  m_ms: " << c.m_ms << "\n  n_streams: " << c.n_streams << "\n";
    const auto& ch = c.channel;
    o << "channel:\n  carrier_freq_hz: " << num(ch.carrier_freq_Hz)
      << "\n  ris_element_spacing_m: " << num(ch.ris_element_spacing_m)
      << "\n  bs_ris_m: " << num(ch.bs_ris_m) << "\n  ris_ms_m: " << num(ch.ris_ms_m)
      << "\n  bs_ms_m: " << num(ch.bs_ms_m) << "\n  kappa_per_m: " << num(ch.kappa_per_m)
      << "\n  xi: " << num(ch.xi) << "\n  n_nlos: " << ch.n_nlos
      << "\n  n_nlos_direct: " << ch.n_nlos_direct << "\n  nlos_excess_range_m: "
      << num_list({ch.nlos_excess_range_m.first, ch.nlos_excess_range_m.second})
      << "\n  nlos_split_range: " << num_list({ch.nlos_split_range.first, ch.nlos_split_range.second})
      << "\n  gain_normalization: "
      << (ch.normalization == GainNormalization::kLosReference ? "los_reference" : "absolute") << "\n";
    o << "codebook:\n  max_phase_deg: " << num(c.codebook.max_phase_deg) << "\n  bits: " << c.codebook.bits
      << "\n  mean_amplitude: " << num(c.codebook.mean_amplitude)
      << "\n  amplitudes: " << num_list(c.codebook.amplitudes) << "\n";
    o << "sweep:\n  kind: " << sweep_name(c.sweep) << "\n  values: " << num_list(c.sweep_values) << "\n";
    const auto& op = c.optimizer;
    o << "optimizer:\n  max_iterations: " << op.max_iterations << "\n  fixed_step: " << num(op.fixed_step)
      << "\n  c2_epsilon: " << num(op.c2_epsilon) << "\n  fallback_step: " << num(op.fallback_step)
      << "\n  init_phases: " << (op.init_phases == OptimizerSettings::Init::kZeros ? "zeros" : "random")
      << "\n  random_draws: " << c.random_draws
      << "\n  cgd_calibration:\n    enabled: " << (c.cgd_calibration.enabled ? "true" : "false")
      << "\n    realizations: " << c.cgd_calibration.realizations
      << "\n    min_exponent: " << c.cgd_calibration.min_exponent
      << "\n    max_exponent: " << c.cgd_calibration.max_exponent << "\n";
    const auto& g = c.graphene;
    o << "graphene:\n  temperature_k: " << num(g.temperature_K)
      << "\n  relaxation_time_s: " << num(g.relaxation_time_s)
      << "\n  fermi_velocity_m_s: " << num(g.fermi_velocity_m_s)
      << "\n  residual_carrier_density_m2: " << num(g.residual_carrier_density_m2)
      << "\n  electrode_capacitivity: " << num(g.electrode_capacitivity)
      << "\n  compensating_voltage_v: " << num(g.compensating_voltage_V) << "\n";
    const auto& e = c.element;
    o << "element:\n  patch_width_m: " << num(e.patch_width_m) << "\n  period_m: " << num(e.period_m)
      << "\n  substrate_thickness_m: " << num(e.substrate_thickness_m)
      << "\n  metal_thickness_m: " << num(e.metal_thickness_m)
      << "\n  graphene_thickness_m: " << num(e.graphene_thickness_m)
      << "\n  resonance_order: " << e.resonance_order << "\n";
    o << "output:\n  dir: " << c.output.dir
      << "\n  record_wall_time: " << (c.output.record_wall_time ? "true" : "false")
      << "\n  dump_channels: " << (c.output.dump_channels ? "true" : "false")
      << "\n  dump_traces: " << (c.output.dump_traces ? "true" : "false") << "\n";
    return o.str();
}

// ---------------------------------------------------------------------------
// Presets. "-desk" variants shrink the arrays to 64/64/16 with 50 realizations;
// "-paper" variants use 512/256/32 with 1000 realizations.

struct PresetInfo {
    std::string_view name;
    std::string_view description;
};

inline constexpr PresetInfo kPresets[] = {
    {"fig5-desk", "rate vs maximum phase response, SNR 10 dB, 64/64/16"},
    {"fig5-paper", "rate vs maximum phase response, SNR 10 dB, 512/256/32"},
    {"fig6-desk", "rate vs quantization bits, SNR 10 dB, 64/64/16"},
    {"fig6-paper", "rate vs quantization bits, SNR 10 dB, 512/256/32"},
    {"fig7-desk", "rate vs SNR (-10..20 dB), 64/64/16"},
    {"fig7-paper", "rate vs SNR (-10..20 dB), 512/256/32"},
    {"fig8-desk", "rate vs number of RIS elements, SNR 10 dB, 64/-/16"},
    {"fig8-paper", "rate vs number of RIS elements, SNR 10 dB, 512/-/32"},
};

inline std::optional<std::string> preset_yaml(std::string_view name) {
    const bool desk = name.ends_with("-desk");
    const bool paper = name.ends_with("-paper");
    if (!desk && !paper) return std::nullopt;
    const std::string_view fig = name.substr(0, name.find('-'));

    std::ostringstream o;
    o << "name: " << name << "\n";
    o << "master_seed: 20221\n";
    o << "n_realizations: " << (desk ? 50 : 1000) << "\n";
    o << "schemes: [agd, cgd, random, no_ris]\n";
    if (desk) o << "dims: {n_bs: 64, n_ris: 64, n_ms: 16, m_bs: 6, m_ms: 4, n_streams: 4}\n";
    else o << "dims: {n_bs: 512, n_ris: 256, n_ms: 32, m_bs: 6, m_ms: 4, n_streams: 4}\n";
    o << "codebook: {max_phase_deg: 306.82, bits: 2, mean_amplitude: 0.8}\n";
    if (fig == "fig5") {
        o << "snr_grid_db: [10]\n";
        o << "sweep: {kind: vs_phimax, values: [60, 120, 180, 240, 306.82, 360]}\n";
    } else if (fig == "fig6") {
        o << "snr_grid_db: [10]\n";
        o << "sweep: {kind: vs_bits, values: [1, 2, 3, 4]}\n";
    } else if (fig == "fig7") {
        o << "snr_grid_db: [-10, -5, 0, 5, 10, 15, 20]\n";
        o << "sweep: {kind: vs_snr}\n";
    } else if (fig == "fig8") {
        o << "snr_grid_db: [10]\n";
        if (desk) o << "sweep: {kind: vs_nris, values: [16, 32, 48, 64, 96, 128]}\n";
        else o << "sweep: {kind: vs_nris, values: [64, 128, 192, 256]}\n";
    } else {
        return std::nullopt;
    }
    return o.str();
}

inline ExperimentConfig load_preset(std::string_view name) {
    const auto text = preset_yaml(name);
    if (!text) throw ConfigError("unknown preset '" + std::string(name) + "'");
    return parse_config(*text);
}

}  // namespace nris
