// SPDX-License-Identifier: Apache-2.0
//
// nris: command-line front end.
//   run --config <path> | --preset <name> [--seed N] [--out DIR] [--workers N] [--sweep KIND]
//   presets list | presets show <name>
//   config-reference
//   replay --channel-dump <path> [--config <path>]
//   element-response [--freq HZ] [--ef-min EV] [--ef-max EV] [--steps N]
// Exit codes: 0 success, 1 runtime error, 2 configuration or usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "nris/config.hpp"
#include "nris/experiment.hpp"
#include "nris/graphene.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

int cmd_run(const std::string& config_path, const std::string& preset, std::optional<std::uint64_t> seed,
            const std::string& out_dir, int workers, const std::string& sweep,
            std::optional<int> realizations) {
    nris::ExperimentConfig cfg;
    if (!config_path.empty() && !preset.empty())
        throw nris::UsageError("run: give either --config or --preset, not both");
    if (!config_path.empty()) cfg = nris::load_config(config_path);
    else if (!preset.empty()) cfg = nris::load_preset(preset);
    else throw nris::UsageError("run: --config or --preset is required");

    if (seed) cfg.master_seed = *seed;
    if (!out_dir.empty()) cfg.output.dir = out_dir;
    if (realizations) cfg.n_realizations = *realizations;
    if (!sweep.empty()) {
        const auto kind = nris::parse_sweep(sweep);
        if (!kind) throw nris::ConfigError("unknown sweep kind '" + sweep + "'");
        if (*kind != cfg.sweep) cfg.sweep_values.clear();
        cfg.sweep = *kind;
    }
    cfg.validate();

    const auto result = nris::run_experiment(cfg, workers);
    const auto csv = nris::write_outputs(cfg, result);
    std::cout << "wrote " << csv.string() << " (" << result.rows.size() << " rows)\n";
    return kExitOk;
}

int cmd_presets_list() {
    for (const auto& p : nris::kPresets) std::cout << p.name << "  " << p.description << "\n";
    return kExitOk;
}

int cmd_presets_show(const std::string& name) {
    const auto text = nris::preset_yaml(name);
    if (!text) throw nris::ConfigError("unknown preset '" + name + "'");
    std::cout << *text;
    return kExitOk;
}

int cmd_replay(const std::string& dump_path, const std::string& config_path) {
    std::ifstream in(dump_path);
    if (!in) throw nris::ConfigError("cannot open channel dump '" + dump_path + "'");
    const auto channels = nris::read_channel_dump(in);

    nris::ExperimentConfig cfg = config_path.empty() ? nris::ExperimentConfig{} : nris::load_config(config_path);
    cfg.n_bs = static_cast<int>(channels.h1.h.cols());
    cfg.n_ris = static_cast<int>(channels.h1.h.rows());
    cfg.n_ms = static_cast<int>(channels.h2.h.rows());
    if (cfg.sweep != nris::SweepKind::kVsSnr) {
        cfg.sweep = nris::SweepKind::kNone;
        cfg.sweep_values.clear();
    }
    if (!channels.direct) std::erase(cfg.schemes, nris::Scheme::kNoRis);
    cfg.validate();

    const auto point = nris::sweep_points(cfg).front();
    const double cgd_step = cfg.optimizer.fixed_step;
    const auto outcomes = nris::evaluate_realization(cfg, point, 0, channels, cgd_step);

    std::printf("scheme,snr_db,rate\n");
    for (std::size_t s = 0; s < cfg.schemes.size(); ++s) {
        for (std::size_t k = 0; k < cfg.snr_grid_db.size(); ++k) {
            std::printf("%s,%.9g,%.9g\n", std::string(nris::scheme_name(cfg.schemes[s])).c_str(),
                        cfg.snr_grid_db[k], outcomes[s].rates[k]);
        }
    }
    return kExitOk;
}

int cmd_element_response(double freq, double ef_min_ev, double ef_max_ev, int steps) {
    if (steps < 1) throw nris::ConfigError("--steps must be >= 1");
    if (!(ef_min_ev >= 0.0 && ef_min_ev <= ef_max_ev))
        throw nris::ConfigError("--ef-min / --ef-max must satisfy 0 <= min <= max");
    const nris::GrapheneParams params;
    const nris::ElementGeometry geom;
    const double omega = nris::kTwoPi * freq;
    std::printf("fermi_level_ev,sigma_re_s,sigma_im_s,eps_eff_re,eps_eff_im,phase_deg\n");
    for (int i = 0; i < steps; ++i) {
        const double ev = steps == 1 ? ef_min_ev : ef_min_ev + (ef_max_ev - ef_min_ev) * i / (steps - 1);
        const auto sigma = nris::surface_conductivity(params, ev * nris::phys::kElementaryCharge, omega);
        const auto eps = nris::effective_permittivity(sigma, omega, geom.graphene_thickness_m);
        const double phase = nris::analytic_phase_response(geom, eps, freq);
        std::printf("%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n", ev, sigma.real(), sigma.imag(), eps.real(), eps.imag(),
                    nris::rad_to_deg(phase));
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nris: graphene RIS assisted THz MIMO simulation"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run a Monte-Carlo sweep and write CSV, summary and config echo");
    std::string config_path, preset, out_dir, sweep;
    std::optional<std::uint64_t> seed;
    std::optional<int> realizations;
    int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    run->add_option("--config", config_path, "YAML config file");
    run->add_option("--preset", preset, "built-in preset name (see `presets list`)");
    run->add_option("--seed", seed, "override master_seed");
    run->add_option("--out", out_dir, "override output.dir");
    run->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
    run->add_option("--sweep", sweep, "override sweep kind (none, vs_snr, vs_nris, vs_phimax, vs_bits)");
    run->add_option("--realizations", realizations, "override n_realizations");

    auto* presets = app.add_subcommand("presets", "list or print built-in presets");
    presets->require_subcommand(1);
    auto* presets_list = presets->add_subcommand("list", "list preset names");
    auto* presets_show = presets->add_subcommand("show", "print a preset as YAML");
    std::string show_name;
    presets_show->add_option("name", show_name, "preset name")->required();

    auto* reference = app.add_subcommand("config-reference", "print every config key with its default");

    auto* replay = app.add_subcommand("replay", "re-evaluate all schemes on a dumped channel realization");
    std::string dump_path, replay_config;
    replay->add_option("--channel-dump", dump_path, "channel dump file")->required();
    replay->add_option("--config", replay_config, "config supplying codebook, schemes and SNR grid");

    auto* element = app.add_subcommand("element-response", "graphene element response versus Fermi level");
    double freq = 1.6e12, ef_min = 0.0, ef_max = 2.0;
    int steps = 21;
    element->add_option("--freq", freq, "carrier frequency in Hz");
    element->add_option("--ef-min", ef_min, "first Fermi level in eV");
    element->add_option("--ef-max", ef_max, "last Fermi level in eV");
    element->add_option("--steps", steps, "number of Fermi levels");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*run) return cmd_run(config_path, preset, seed, out_dir, workers, sweep, realizations);
        if (*presets_list) return cmd_presets_list();
        if (*presets_show) return cmd_presets_show(show_name);
        if (*reference) {
            std::cout << nris::kConfigReference;
            return kExitOk;
        }
        if (*replay) return cmd_replay(dump_path, replay_config);
        if (*element) return cmd_element_response(freq, ef_min, ef_max, steps);
    } catch (const nris::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const nris::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}
