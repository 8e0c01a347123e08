// Command-line front end: chain layout reports, evolution maps, parameter
// sweeps, and photon-statistics runs.  Every subcommand is deterministic for
// a fixed argument vector; errors go to stderr as "error: ..." with exit
// code 2 for usage/validation problems and 1 for runtime failures.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cradle/cradle.hpp"

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

// Config problems are usage errors (exit 2), not runtime failures.
cradle::ExperimentConfig load_config_for_cli(const std::string& path) {
    try {
        return cradle::load_config(path);
    } catch (const std::exception& e) {
        throw std::invalid_argument(e.what());
    }
}

struct LayoutOptions {
    int sites = 0;
    std::optional<double> pitch_strong, coupling_strong;
    std::optional<double> pitch_weak, coupling_weak;
    std::vector<double> law_params;
};

int run_layout(const LayoutOptions& opt) {
    const cradle::CouplingLaw law =
        opt.law_params.empty() ? cradle::default_coupling_law()
                               : cradle::CouplingLaw(opt.law_params[0], opt.law_params[1]);
    if (!opt.pitch_strong && !opt.coupling_strong)
        throw std::invalid_argument("layout needs --pitch-strong or --coupling-strong");
    if (!opt.pitch_weak && !opt.coupling_weak)
        throw std::invalid_argument("layout needs --pitch-weak or --coupling-weak");
    std::string note;
    const auto resolve = [&](const std::optional<double>& pitch,
                             const std::optional<double>& coupling, const char* bond) {
        double j = pitch ? cradle::coupling_from_pitch(*pitch, law) : 0.0;
        if (coupling) {
            if (pitch && *coupling != j)
                note += std::string(bond) + " coupling overrides pitch; ";
            j = *coupling;
        }
        return j;
    };
    const double strong = resolve(opt.pitch_strong, opt.coupling_strong, "strong");
    const double weak = resolve(opt.pitch_weak, opt.coupling_weak, "weak");
    cradle::ChainSpec spec = cradle::ChainSpec::from_couplings(opt.sites, strong, weak);
    spec.strong_pitch_um = opt.pitch_strong;
    spec.weak_pitch_um = opt.pitch_weak;

    std::cout << "sites: " << spec.n_sites << "\n";
    std::cout << "strong_coupling_per_mm: " << fmt(spec.strong_coupling) << "\n";
    std::cout << "weak_coupling_per_mm: " << fmt(spec.weak_coupling) << "\n";
    std::cout << "alpha: " << fmt(spec.alpha()) << "\n";
    std::cout << "effective_coupling_per_mm: " << fmt(cradle::effective_coupling(spec))
              << "\n";
    std::cout << "analytic_tau_mm: " << fmt(cradle::analytic_receiving_time(spec)) << "\n";
    std::cout << "transfer_regime: " << (spec.in_transfer_regime() ? "yes" : "no") << "\n";
    if (!note.empty()) std::cout << "note: " << note << "\n";
    return 0;
}

struct EvolveOptions {
    std::string config_path;
    double z_max = 0.0;
    double z_step = 0.0;
    std::string out_path;
};

int run_evolve(const EvolveOptions& opt) {
    const cradle::ExperimentConfig cfg = load_config_for_cli(opt.config_path);
    const cradle::CouplingMatrix h =
        cfg.defect_enabled
            ? cradle::build_defect_chain(cfg.chain, cfg.defect, cfg.law)
            : cradle::build_modified_hamiltonian(cfg.chain, cfg.defect, cfg.law);
    const cradle::StateVector psi0 = cradle::site_state(h.dim(), 1);
    const cradle::ProbabilityField field =
        cradle::probability_map(h, psi0, opt.z_max, opt.z_step);
    const auto window = cfg.search_window_mm ? *cfg.search_window_mm
                                             : cradle::default_search_window(cfg.chain);
    const cradle::TransferPeak peak =
        cradle::find_optimal_receiving_time(h, cfg.chain.n_sites, window);
    cradle::write_field_csv(opt.out_path, field);
    std::cout << "tau_star_mm: " << fmt(peak.tau_star) << "\n";
    std::cout << "eta_star: " << fmt(peak.eta_star) << "\n";
    std::cout << "wrote: " << opt.out_path << "\n";
    return 0;
}

struct SweepOptions {
    std::string config_path;
    std::string out_path;
};

int run_sweep(const SweepOptions& opt) {
    const cradle::ExperimentConfig cfg = load_config_for_cli(opt.config_path);
    if (!cfg.sweep)
        throw std::invalid_argument("config has no sweep block: " + opt.config_path);
    const cradle::SweepPlan& plan = *cfg.sweep;
    cradle::SweepResult result;
    if (plan.parameter == "weak_pitch") {
        auto [sweep, fit] = cradle::sweep_alpha(cfg.chain.n_sites,
                                                cfg.chain.strong_coupling, plan.values,
                                                cfg.law);
        result = std::move(sweep);
        std::cout << "slope_mm: " << fmt(fit.slope) << "\n";
        std::cout << "intercept_mm: " << fmt(fit.intercept) << "\n";
        std::cout << "residual_rms_mm: " << fmt(fit.residual_rms) << "\n";
        std::cout << "implied_strong_coupling_per_mm: "
                  << fmt(cradle::implied_strong_coupling(cfg.chain.n_sites, fit.slope))
                  << "\n";
    } else if (plan.parameter == "strong_pitch") {
        result = cradle::sweep_strong_coupling(cfg.chain.n_sites, cfg.chain.weak_coupling,
                                               plan.values, cfg.law);
    } else if (plan.parameter == "nnn_m") {
        if (cfg.defect.nnn_mode == cradle::NnnMode::none)
            throw std::invalid_argument(
                "sweep over nnn_m needs an nnn mode (uniform or shadowed) in the config");
        result = cradle::sweep_m(cfg.chain, plan.values, cfg.defect.nnn_mode, cfg.law);
    } else {  // defect_distance, guaranteed by the config schema
        result = cradle::sweep_defect_distance(cfg.chain, cfg.defect, plan.values, cfg.law);
    }
    cradle::write_sweep_csv(opt.out_path, result);
    std::cout << "points: " << result.points.size() << "\n";
    std::cout << "wrote: " << opt.out_path << "\n";
    return 0;
}

struct StatsOptions {
    std::string source;
    std::string pair_law = "bernoulli";
    double mu = 0.0;
    double eta_t = 1.0;
    double eta_h = 1.0;
    double dark = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 42;
    std::string out_path;
    std::string records_path;
};

int run_stats(const StatsOptions& opt) {
    cradle::SourceModel model;
    model.kind = cradle::source_kind_from_string(opt.source);
    if (opt.pair_law == "bernoulli")
        model.pair_law = cradle::PairLaw::bernoulli;
    else if (opt.pair_law == "poisson")
        model.pair_law = cradle::PairLaw::poisson;
    else
        throw std::invalid_argument("unknown pair law '" + opt.pair_law +
                                    "' (expected bernoulli or poisson)");
    model.mean_photons = opt.mu;
    model.transmission = opt.eta_t;
    model.herald_efficiency = opt.eta_h;
    model.dark_count_prob = opt.dark;
    model.validate();

    const auto records = cradle::simulate_trials(model, opt.trials, opt.seed);
    const cradle::ClickCounts counts = cradle::count_clicks(records);
    std::vector<cradle::CorrelationEstimate> estimates;
    if (model.kind == cradle::SourceKind::heralded_pair) {
        estimates.push_back(cradle::g2_zero(counts));
        estimates.push_back(cradle::g_si(counts));
    } else {
        // No herald arm: the herald-conditioned ratios are undefined, so
        // report the unconditional signal-arm autocorrelation.
        estimates.push_back(cradle::g2_signal(counts));
    }
    cradle::write_estimates_csv(opt.out_path, estimates);
    if (!opt.records_path.empty()) cradle::write_records_csv(opt.records_path, records);
    for (const auto& est : estimates)
        std::cout << est.estimator << ": " << fmt(est.value) << " +- "
                  << fmt(est.std_error) << "\n";
    std::cout << "wrote: " << opt.out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"boundary-controlled photonic chain toolkit"};
    app.set_version_flag("--version", cradle::tool_version);
    app.require_subcommand(1);

    LayoutOptions layout_opt;
    CLI::App* layout = app.add_subcommand("layout", "report couplings, alpha, and timing");
    layout->add_option("--sites", layout_opt.sites, "number of sites")->required();
    layout->add_option("--pitch-strong", layout_opt.pitch_strong, "strong-bond pitch, um");
    layout->add_option("--coupling-strong", layout_opt.coupling_strong,
                       "strong coupling, 1/mm");
    layout->add_option("--pitch-weak", layout_opt.pitch_weak, "weak-bond pitch, um");
    layout->add_option("--coupling-weak", layout_opt.coupling_weak, "weak coupling, 1/mm");
    layout->add_option("--law", layout_opt.law_params,
                       "coupling law: amplitude (1/mm) and decay (1/um)")
        ->expected(2);

    EvolveOptions evolve_opt;
    CLI::App* evolve = app.add_subcommand("evolve", "write a propagation map CSV");
    evolve->add_option("--config", evolve_opt.config_path, "experiment config JSON")
        ->required();
    evolve->add_option("--z-max", evolve_opt.z_max, "propagation length, mm")->required();
    evolve->add_option("--z-step", evolve_opt.z_step, "grid step, mm")->required();
    evolve->add_option("--out", evolve_opt.out_path, "output CSV path")->required();

    SweepOptions sweep_opt;
    CLI::App* sweep = app.add_subcommand("sweep", "run the config's parameter sweep");
    sweep->add_option("--config", sweep_opt.config_path, "experiment config JSON")
        ->required();
    sweep->add_option("--out", sweep_opt.out_path, "output CSV path")->required();

    StatsOptions stats_opt;
    CLI::App* stats = app.add_subcommand("stats", "simulate photon-counting statistics");
    stats->add_option("--source", stats_opt.source, "heralded, thermal, or coherent")
        ->required();
    stats->add_option("--mu", stats_opt.mu, "mean photons (or pairs) per gate")
        ->required();
    stats->add_option("--trials", stats_opt.trials, "number of gates")->required();
    stats->add_option("--seed", stats_opt.seed, "RNG seed (default 42)");
    stats->add_option("--pair-law", stats_opt.pair_law,
                      "heralded pair statistics: bernoulli or poisson");
    stats->add_option("--eta-t", stats_opt.eta_t, "signal transmission");
    stats->add_option("--eta-h", stats_opt.eta_h, "herald efficiency");
    stats->add_option("--dark", stats_opt.dark, "dark-count probability per detector");
    stats->add_option("--out", stats_opt.out_path, "estimates CSV path")->required();
    stats->add_option("--records", stats_opt.records_path,
                      "also dump per-gate click records to this CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);  // --help / --version
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*layout) return run_layout(layout_opt);
        if (*evolve) return run_evolve(evolve_opt);
        if (*sweep) return run_sweep(sweep_opt);
        if (*stats) return run_stats(stats_opt);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
