// SPDX-License-Identifier: Apache-2.0
//
// Sparse geometric THz MIMO channel: UPA steering vectors, LoS gain with
// spreading and molecular absorption loss, reflected-path (NLoS) gains, and
// per-hop channel realisations H = sqrt(Nt Nr) a0 ar at^H + sqrt(Nt Nr / L) sum_l al ar,l at,l^H.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "nris/errors.hpp"
#include "nris/rng.hpp"
#include "nris/types.hpp"

namespace nris {

enum class ArrayRole { kBsUpa, kMsUpa, kRisUpa };

/// Uniform planar array on the xy-plane; element (p, q) sits at (p d, q d).
struct ArrayGeometry {
    int n_x = 1;
    int n_y = 1;
    double element_spacing_m = 0.0;
    ArrayRole role = ArrayRole::kBsUpa;

    int size() const { return n_x * n_y; }
};

/// Near-square UPA with n_x * n_y = n_elements and n_y the largest divisor <= sqrt(n).
inline ArrayGeometry make_upa(int n_elements, double spacing_m, ArrayRole role) {
    if (n_elements < 1) throw ConfigError("array element count must be >= 1");
    if (!(spacing_m > 0.0)) throw ConfigError("array element spacing must be > 0");
    int n_y = static_cast<int>(std::sqrt(static_cast<double>(n_elements)));
    while (n_y > 1 && n_elements % n_y != 0) --n_y;
    n_y = std::max(n_y, 1);
    return ArrayGeometry{n_elements / n_y, n_y, spacing_m, role};
}

/// Normalised UPA response. Entry p * n_y + q equals
/// exp(j 2 pi d / lambda (p sin(el) cos(az) + q cos(el))) / sqrt(N).
inline CVector upa_response(const ArrayGeometry& geom, double azimuth_rad, double elevation_rad,
                            double wavelength_m) {
    if (!(wavelength_m > 0.0)) throw DomainError("wavelength_m must be > 0");
    const int n = geom.size();
    const double k = kTwoPi * geom.element_spacing_m / wavelength_m;
    const double ux = std::sin(elevation_rad) * std::cos(azimuth_rad);
    const double uy = std::cos(elevation_rad);
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));
    CVector a(n);
    for (int p = 0; p < geom.n_x; ++p)
        for (int q = 0; q < geom.n_y; ++q)
            a(p * geom.n_y + q) = norm * std::polar(1.0, k * (p * ux + q * uy));
    return a;
}

/// Large-scale parameters of one hop.
struct LinkGeometry {
    double carrier_freq_Hz = 1.6e12;
    double distance_m = 10.0;
    double absorption_coeff_per_m = 0.2;  // kappa(f)
    double reflection_coeff = 1e-6;       // xi(f)
    int n_nlos_paths = 2;
    std::pair<double, double> nlos_excess_range_m{1.0, 10.0};

    void validate() const {
        if (!(carrier_freq_Hz > 0.0)) throw ConfigError("carrier frequency must be > 0");
        if (!(distance_m > 0.0)) throw ConfigError("link distance must be > 0");
        if (!(absorption_coeff_per_m >= 0.0)) throw ConfigError("kappa must be >= 0");
        if (!(reflection_coeff >= 0.0 && reflection_coeff <= 1.0))
            throw ConfigError("xi must lie in [0, 1]");
        if (n_nlos_paths < 0) throw ConfigError("n_nlos must be >= 0");
        if (!(nlos_excess_range_m.first >= 0.0 &&
              nlos_excess_range_m.first <= nlos_excess_range_m.second))
            throw ConfigError("nlos excess range must satisfy 0 <= lo <= hi");
    }
};

/// LoS gain c/(4 pi f r) exp(-kappa r / 2) exp(-j 2 pi f r / c).
inline cplx los_gain(const LinkGeometry& link) {
    const double f = link.carrier_freq_Hz;
    const double r = link.distance_m;
    const double tau = r / phys::kSpeedOfLight;
    const double mag =
        phys::kSpeedOfLight / (4.0 * kPi * f * r) * std::exp(-0.5 * link.absorption_coeff_per_m * r);
    return std::polar(mag, -kTwoPi * f * tau);
}

/// Gain of a path reflected off a scatterer at distances r1 (from tx) and r2 (to rx).
inline cplx nlos_gain(const LinkGeometry& link, double r1_m, double r2_m) {
    const double path = r1_m + r2_m;
    if (!(path >= link.distance_m))
        throw DomainError("reflected path r1 + r2 shorter than the direct distance");
    const double f = link.carrier_freq_Hz;
    const double tau_los = link.distance_m / phys::kSpeedOfLight;
    const double tau_ref = tau_los + (path - link.distance_m) / phys::kSpeedOfLight;
    const double mag = phys::kSpeedOfLight * link.reflection_coeff / (4.0 * kPi * f * path) *
                       std::exp(-0.5 * link.absorption_coeff_per_m * path);
    return std::polar(mag, -kTwoPi * f * tau_ref);
}

enum class PathKind { kLoS, kNLoS };

struct PathParams {
    PathKind kind = PathKind::kLoS;
    double aoa_azimuth_rad = 0.0;
    double aoa_elevation_rad = 0.0;
    double aod_azimuth_rad = 0.0;
    double aod_elevation_rad = 0.0;
    cplx complex_gain{0.0, 0.0};
    double delay_s = 0.0;
};

enum class Hop { kBsRis, kRisMs, kBsMsDirect };

inline const char* hop_name(Hop hop) {
    switch (hop) {
        case Hop::kBsRis: return "bs_ris";
        case Hop::kRisMs: return "ris_ms";
        case Hop::kBsMsDirect: return "bs_ms_direct";
    }
    return "?";
}

/// How path gains are scaled before entering the channel matrix.
///  - kAbsolute:     gains exactly as produced by los_gain / nlos_gain.
///  - kLosReference: every gain of a hop divided by |LoS gain| at that hop's
///                   distance, so the large-scale loss is carried by the SNR.
enum class GainNormalization { kAbsolute, kLosReference };

/// Everything needed to draw the three hops of one realisation.
struct ChannelSpec {
    int n_bs = 64;
    int n_ris = 64;
    int n_ms = 16;
    double carrier_freq_Hz = 1.6e12;
    double ris_element_spacing_m = 70e-6;
    double bs_ris_m = 10.0;
    double ris_ms_m = 20.0;
    double bs_ms_m = 25.0;
    double kappa_per_m = 0.2;
    double xi = 1e-6;
    int n_nlos = 2;
    int n_nlos_direct = 3;
    std::pair<double, double> nlos_excess_range_m{1.0, 10.0};
    std::pair<double, double> nlos_split_range{0.3, 0.7};
    GainNormalization normalization = GainNormalization::kLosReference;

    double wavelength_m() const { return phys::kSpeedOfLight / carrier_freq_Hz; }

    void validate() const {
        if (n_bs < 1 || n_ris < 1 || n_ms < 1) throw ConfigError("array sizes must be >= 1");
        if (!(ris_element_spacing_m > 0.0)) throw ConfigError("ris element spacing must be > 0");
        if (!(nlos_split_range.first > 0.0 && nlos_split_range.first <= nlos_split_range.second &&
              nlos_split_range.second < 1.0))
            throw ConfigError("nlos split range must satisfy 0 < lo <= hi < 1");
        if (n_nlos_direct < 1) throw ConfigError("n_nlos_direct must be >= 1");
        link(Hop::kBsRis).validate();
        link(Hop::kRisMs).validate();
        link(Hop::kBsMsDirect).validate();
    }

    LinkGeometry link(Hop hop) const {
        LinkGeometry l;
        l.carrier_freq_Hz = carrier_freq_Hz;
        l.absorption_coeff_per_m = kappa_per_m;
        l.reflection_coeff = xi;
        l.nlos_excess_range_m = nlos_excess_range_m;
        switch (hop) {
            case Hop::kBsRis: l.distance_m = bs_ris_m; l.n_nlos_paths = n_nlos; break;
            case Hop::kRisMs: l.distance_m = ris_ms_m; l.n_nlos_paths = n_nlos; break;
            case Hop::kBsMsDirect: l.distance_m = bs_ms_m; l.n_nlos_paths = n_nlos_direct; break;
        }
        return l;
    }

    ArrayGeometry bs_array() const { return make_upa(n_bs, wavelength_m() / 2.0, ArrayRole::kBsUpa); }
    ArrayGeometry ms_array() const { return make_upa(n_ms, wavelength_m() / 2.0, ArrayRole::kMsUpa); }
    ArrayGeometry ris_array() const {
        return make_upa(n_ris, ris_element_spacing_m, ArrayRole::kRisUpa);
    }
};

/// One sampled hop together with everything needed to rebuild it.
struct HopChannel {
    Hop hop = Hop::kBsRis;
    std::uint64_t seed = 0;
    ArrayGeometry rx;
    ArrayGeometry tx;
    double wavelength_m = 0.0;
    double gain_scale = 1.0;
    std::vector<PathParams> paths;
    CMatrix h;  // rx.size() x tx.size()
};

/// H = gain_scale * [sqrt(Nt Nr) a0 ar at^H + sqrt(Nt Nr / L) sum_l al ar,l at,l^H],
/// L counting the NLoS entries of `paths`.
inline CMatrix assemble_channel(const ArrayGeometry& rx, const ArrayGeometry& tx, double wavelength_m,
                                double gain_scale, const std::vector<PathParams>& paths) {
    const double n_prod = static_cast<double>(rx.size()) * static_cast<double>(tx.size());
    std::size_t n_nlos = 0;
    for (const auto& p : paths)
        if (p.kind == PathKind::kNLoS) ++n_nlos;

    CMatrix h = CMatrix::Zero(rx.size(), tx.size());
    for (const auto& p : paths) {
        const double weight = p.kind == PathKind::kLoS
                                  ? std::sqrt(n_prod)
                                  : std::sqrt(n_prod / static_cast<double>(n_nlos));
        const CVector ar = upa_response(rx, p.aoa_azimuth_rad, p.aoa_elevation_rad, wavelength_m);
        const CVector at = upa_response(tx, p.aod_azimuth_rad, p.aod_elevation_rad, wavelength_m);
        h.noalias() += (gain_scale * weight * p.complex_gain) * ar * at.adjoint();
    }
    return h;
}

inline CMatrix assemble_channel(const HopChannel& hc) {
    return assemble_channel(hc.rx, hc.tx, hc.wavelength_m, hc.gain_scale, hc.paths);
}

/// Draws one hop. Per path the stream is consumed in the order
/// aoa_az, aoa_el, aod_az, aod_el and, for NLoS paths, split u then excess e
/// (r1 = r u, r2 = r (1 - u) + e). The direct BS-MS hop has its LoS blocked.
inline HopChannel sample_channel(const ChannelSpec& spec, Hop hop, RngStream& rng) {
    const LinkGeometry link = spec.link(hop);
    HopChannel hc;
    hc.hop = hop;
    hc.seed = rng.seed();
    hc.wavelength_m = spec.wavelength_m();
    switch (hop) {
        case Hop::kBsRis: hc.rx = spec.ris_array(); hc.tx = spec.bs_array(); break;
        case Hop::kRisMs: hc.rx = spec.ms_array(); hc.tx = spec.ris_array(); break;
        case Hop::kBsMsDirect: hc.rx = spec.ms_array(); hc.tx = spec.bs_array(); break;
    }
    const cplx a0 = los_gain(link);
    hc.gain_scale = spec.normalization == GainNormalization::kLosReference ? 1.0 / std::abs(a0) : 1.0;

    auto draw_angles = [&rng](PathParams& p) {
        p.aoa_azimuth_rad = rng.uniform(0.0, kTwoPi);
        p.aoa_elevation_rad = rng.uniform(0.0, kPi);
        p.aod_azimuth_rad = rng.uniform(0.0, kTwoPi);
        p.aod_elevation_rad = rng.uniform(0.0, kPi);
    };

    if (hop != Hop::kBsMsDirect) {
        PathParams los;
        los.kind = PathKind::kLoS;
        draw_angles(los);
        los.complex_gain = a0;
        los.delay_s = link.distance_m / phys::kSpeedOfLight;
        hc.paths.push_back(los);
    }
    for (int l = 0; l < link.n_nlos_paths; ++l) {
        PathParams p;
        p.kind = PathKind::kNLoS;
        draw_angles(p);
        const double u = rng.uniform(spec.nlos_split_range.first, spec.nlos_split_range.second);
        const double e = rng.uniform(link.nlos_excess_range_m.first, link.nlos_excess_range_m.second);
        const double r1 = link.distance_m * u;
        const double r2 = link.distance_m * (1.0 - u) + e;
        p.complex_gain = nlos_gain(link, r1, r2);
        p.delay_s = (r1 + r2) / phys::kSpeedOfLight;
        hc.paths.push_back(p);
    }
    hc.h = assemble_channel(hc);
    return hc;
}

/// H1 (BS->RIS), H2 (RIS->MS) and optionally the blocked direct BS->MS channel.
struct ChannelRealization {
    std::uint64_t seed = 0;  // realisation seed the hop streams were derived from
    HopChannel h1;
    HopChannel h2;
    std::optional<HopChannel> direct;
};

/// Hop streams come from derive_seed(realization_seed, 0, hop tag).
inline ChannelRealization sample_realization(const ChannelSpec& spec, std::uint64_t realization_seed,
                                             bool with_direct) {
    ChannelRealization r;
    r.seed = realization_seed;
    RngStream s1(derive_seed(realization_seed, 0, StreamTag::kBsRis));
    RngStream s2(derive_seed(realization_seed, 0, StreamTag::kRisMs));
    r.h1 = sample_channel(spec, Hop::kBsRis, s1);
    r.h2 = sample_channel(spec, Hop::kRisMs, s2);
    if (with_direct) {
        RngStream s3(derive_seed(realization_seed, 0, StreamTag::kBsMsDirect));
        r.direct = sample_channel(spec, Hop::kBsMsDirect, s3);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Channel dump: line-oriented text, doubles written with 17 significant
// digits so a replay reproduces the matrices bit-for-bit.
//
//   nris-channel-dump 1
//   seed <u64>
//   hop <name> <seed> <wavelength_m> <gain_scale>
//   rx <n_x> <n_y> <spacing_m>
//   tx <n_x> <n_y> <spacing_m>
//   path <LoS|NLoS> <aoa_az> <aoa_el> <aod_az> <aod_el> <gain_re> <gain_im> <delay_s>
//   ...
//   end

namespace detail {

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline Hop parse_hop(const std::string& s) {
    if (s == "bs_ris") return Hop::kBsRis;
    if (s == "ris_ms") return Hop::kRisMs;
    if (s == "bs_ms_direct") return Hop::kBsMsDirect;
    throw ConfigError("channel dump: unknown hop '" + s + "'");
}

}  // namespace detail

inline void write_channel_dump(std::ostream& os, const ChannelRealization& r) {
    os << "nris-channel-dump 1\n";
    os << "seed " << r.seed << "\n";
    auto write_hop = [&os](const HopChannel& hc) {
        using detail::fmt17;
        os << "hop " << hop_name(hc.hop) << ' ' << hc.seed << ' ' << fmt17(hc.wavelength_m) << ' '
           << fmt17(hc.gain_scale) << "\n";
        os << "rx " << hc.rx.n_x << ' ' << hc.rx.n_y << ' ' << fmt17(hc.rx.element_spacing_m) << "\n";
        os << "tx " << hc.tx.n_x << ' ' << hc.tx.n_y << ' ' << fmt17(hc.tx.element_spacing_m) << "\n";
        for (const auto& p : hc.paths) {
            os << "path " << (p.kind == PathKind::kLoS ? "LoS" : "NLoS") << ' '
               << fmt17(p.aoa_azimuth_rad) << ' ' << fmt17(p.aoa_elevation_rad) << ' '
               << fmt17(p.aod_azimuth_rad) << ' ' << fmt17(p.aod_elevation_rad) << ' '
               << fmt17(p.complex_gain.real()) << ' ' << fmt17(p.complex_gain.imag()) << ' '
               << fmt17(p.delay_s) << "\n";
        }
    };
    write_hop(r.h1);
    write_hop(r.h2);
    if (r.direct) write_hop(*r.direct);
    os << "end\n";
}

/// Parses a dump and rebuilds every hop matrix from its stored paths.
inline ChannelRealization read_channel_dump(std::istream& is) {
    std::string line;
    auto fail = [](const std::string& what) -> void {
        throw ConfigError("channel dump: " + what);
    };
    if (!std::getline(is, line) || line != "nris-channel-dump 1") fail("missing or unsupported header");

    ChannelRealization r;
    std::vector<HopChannel> hops;
    bool seen_seed = false;
    bool seen_end = false;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "seed") {
            ls >> r.seed;
            seen_seed = true;
        } else if (key == "hop") {
            HopChannel hc;
            std::string name;
            ls >> name >> hc.seed >> hc.wavelength_m >> hc.gain_scale;
            hc.hop = detail::parse_hop(name);
            hops.push_back(std::move(hc));
        } else if (key == "rx" || key == "tx") {
            if (hops.empty()) fail("array line before hop line");
            ArrayGeometry& g = key == "rx" ? hops.back().rx : hops.back().tx;
            ls >> g.n_x >> g.n_y >> g.element_spacing_m;
        } else if (key == "path") {
            if (hops.empty()) fail("path line before hop line");
            PathParams p;
            std::string kind;
            double re = 0.0, im = 0.0;
            ls >> kind >> p.aoa_azimuth_rad >> p.aoa_elevation_rad >> p.aod_azimuth_rad >>
                p.aod_elevation_rad >> re >> im >> p.delay_s;
            if (kind == "LoS") p.kind = PathKind::kLoS;
            else if (kind == "NLoS") p.kind = PathKind::kNLoS;
            else fail("unknown path kind '" + kind + "'");
            p.complex_gain = cplx(re, im);
            hops.back().paths.push_back(p);
        } else if (key == "end") {
            seen_end = true;
            break;
        } else {
            fail("unknown record '" + key + "'");
        }
        if (ls.fail()) fail("malformed line: " + line);
    }
    if (!seen_seed || !seen_end) fail("truncated file");
    for (auto& hc : hops) {
        if (hc.rx.size() < 1 || hc.tx.size() < 1 || !(hc.wavelength_m > 0.0))
            fail(std::string("incomplete geometry for hop ") + hop_name(hc.hop));
        hc.rx.role = hc.hop == Hop::kBsRis ? ArrayRole::kRisUpa : ArrayRole::kMsUpa;
        hc.tx.role = hc.hop == Hop::kRisMs ? ArrayRole::kRisUpa : ArrayRole::kBsUpa;
        hc.h = assemble_channel(hc);
        switch (hc.hop) {
            case Hop::kBsRis: r.h1 = std::move(hc); break;
            case Hop::kRisMs: r.h2 = std::move(hc); break;
            case Hop::kBsMsDirect: r.direct = std::move(hc); break;
        }
    }
    if (r.h1.h.size() == 0 || r.h2.h.size() == 0) fail("both bs_ris and ris_ms hops are required");
    return r;
}

}  // namespace nris
