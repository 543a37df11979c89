// Command-line experiment runner: one subcommand per study family, emitting
// CSV data files plus a run manifest into the output directory.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "magnomech/magnomech.hpp"

namespace {

using namespace magnomech;

struct CliOptions {
    int figure = 0;
    std::string out;
    double dt = 0.0;
    std::string dims;
    double kernel_shift = 0.0;
    bool kernel_shift_set = false;

    double delta_m = 0.0;
    double g = 0.0, G = 0.0;
    bool delta_m_set = false, g_set = false, G_set = false;

    int subspace = 0;
    std::string scan_axis;
    std::vector<double> scan_values;

    std::vector<double> kappas;
    double periods = 0.0;
    bool reverse = false;

    double gtilde = 0.0;
    std::string ww;
    double calibration_kappa = 0.0;
    bool calibration_set = false;
    std::vector<std::string> scenario_specs;
    int band_nodes = 0;
};

std::string default_out_root() {
    if (const char* env = std::getenv("MAGNOMECH_OUT_ROOT")) return env;
    return "runs";
}

std::array<int, 3> parse_dims(const std::string& text) {
    std::array<int, 3> dims{};
    std::istringstream in(text);
    std::string tok;
    int i = 0;
    while (std::getline(in, tok, ',')) {
        if (i >= 3) throw ConfigError("--dims expects three comma-separated integers");
        dims[i++] = std::stoi(tok);
    }
    if (i != 3) throw ConfigError("--dims expects three comma-separated integers");
    return dims;
}

void apply_overrides(RunConfig& cfg, const CliOptions& opt, Experiment experiment) {
    cfg.experiment = experiment;
    if (opt.delta_m_set) cfg.delta_m = opt.delta_m;
    if (opt.g_set) cfg.g = opt.g;
    if (opt.G_set) cfg.G = opt.G;
    if (!opt.dims.empty()) cfg.dims = parse_dims(opt.dims);
    if (opt.dt > 0.0) {
        cfg.master_dt = opt.dt;
        cfg.dyson_dt = opt.dt;
    }
    if (opt.kernel_shift_set) cfg.kernel_shift = opt.kernel_shift;
    if (opt.subspace > 0) cfg.subspace_excitons = opt.subspace;
    if (!opt.scan_axis.empty()) cfg.scan_axis = opt.scan_axis[0];
    if (!opt.scan_values.empty()) cfg.scan_values = opt.scan_values;
    if (!opt.kappas.empty()) cfg.kappa_values = opt.kappas;
    if (opt.periods > 0.0) cfg.periods = opt.periods;
    cfg.reverse_direction = opt.reverse;
    if (opt.gtilde > 0.0) cfg.gtilde = opt.gtilde;
    if (opt.band_nodes > 0) cfg.band_nodes = opt.band_nodes;
    if (!opt.ww.empty()) {
        if (opt.ww == "half_j") cfg.rate_convention = RateConvention::HalfJ;
        else if (opt.ww == "pi_j") cfg.rate_convention = RateConvention::PiJ;
        else throw ConfigError("--ww must be half_j or pi_j");
    }
    if (opt.calibration_set) cfg.calibration_kappa = opt.calibration_kappa;

    if (!opt.scenario_specs.empty()) {
        cfg.scenarios.clear();
        for (const auto& spec : opt.scenario_specs) {
            // label=photon-spec/phonon-spec
            const auto eq = spec.find('=');
            const auto slash = spec.find('/', eq == std::string::npos ? 0 : eq);
            if (eq == std::string::npos || slash == std::string::npos)
                throw ConfigError("scenario format: label=photon/phonon, e.g. "
                                  "mine=ohmic:eta=1e-4,omega0=5,s=1/band:C=1e-4,k=-1");
            TransferScenario sc;
            sc.label = spec.substr(0, eq);
            sc.photon = parse_spectral_density(spec.substr(eq + 1, slash - eq - 1));
            sc.phonon = parse_spectral_density(spec.substr(slash + 1));
            cfg.scenarios.push_back(std::move(sc));
        }
    }

    if (!opt.out.empty()) {
        cfg.out_dir = opt.out;
    } else {
        std::string leaf = experiment_name(experiment);
        if (cfg.figure) leaf += "_fig" + std::to_string(cfg.figure);
        cfg.out_dir = default_out_root() + "/" + leaf;
    }
}

RunConfig build_config(const CliOptions& opt, Experiment experiment) {
    int figure = opt.figure;
    if (figure == 0) {
        switch (experiment) {
            case Experiment::Eigs: figure = 3; break;
            case Experiment::CouplingScan: figure = 5; break;
            case Experiment::Lindblad: figure = 6; break;
            case Experiment::Transfer: figure = 7; break;
        }
    }
    RunConfig cfg = figure_defaults(figure);
    if (cfg.experiment != experiment)
        throw ConfigError("--figure " + std::to_string(figure) + " belongs to the '" +
                          experiment_name(cfg.experiment) + "' subcommand");
    apply_overrides(cfg, opt, experiment);
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Photon-phonon conversion toolkit: reproducible experiment runner"};
    app.require_subcommand(0, 1);
    app.fallthrough();
    app.set_config("--config", "", "Read options from a TOML-style config file");

    CliOptions opt;
    app.add_option("--figure", opt.figure, "Canned study to reproduce (3..9)")
        ->check(CLI::Range(3, 9));
    app.add_option("--out", opt.out, "Output directory (default: $MAGNOMECH_OUT_ROOT/<run>)");
    app.add_option("--dt", opt.dt, "Integration step, units 1/omega_b");
    app.add_option("--dims", opt.dims, "Truncation dims a,m,b (e.g. 4,4,4)");
    app.add_option("--kernel-shift", opt.kernel_shift, "Rotating reference frequency for kernels")
        ->each([&](const std::string&) { opt.kernel_shift_set = true; });
    app.add_option("--delta-m", opt.delta_m, "Magnon detuning, units omega_b")
        ->each([&](const std::string&) { opt.delta_m_set = true; });
    app.add_option("--g", opt.g, "Photon-magnon coupling, units omega_b")
        ->each([&](const std::string&) { opt.g_set = true; });
    app.add_option("--G", opt.G, "Effective magnomechanical coupling, units omega_b")
        ->each([&](const std::string&) { opt.G_set = true; });

    auto* eigs = app.add_subcommand("eigs", "Energy levels and avoided crossing across a detuning sweep");
    eigs->add_option("--subspace", opt.subspace, "Exciton number of the tracked subspace (1 or 2)")
        ->check(CLI::Range(1, 6));

    auto* scan = app.add_subcommand("coupling-scan",
                                    "Analytic vs numeric effective coupling across a coupling sweep");
    scan->add_option("--axis", opt.scan_axis, "Swept coupling: g or G")
        ->check(CLI::IsMember({"g", "G"}));
    scan->add_option("--values", opt.scan_values, "Swept coupling values, units omega_b");

    auto* lind = app.add_subcommand("lindblad", "State-fidelity dynamics under Markovian decay");
    lind->add_option("--kappa", opt.kappas, "Decay rates to scan, units omega_b");
    lind->add_option("--periods", opt.periods, "Number of conversion periods to simulate");
    lind->add_flag("--reverse", opt.reverse, "Convert phonon to photon instead");

    auto* transfer = app.add_subcommand("transfer",
                                        "Transfer fidelity under structured environments");
    transfer->add_option("--gtilde", opt.gtilde, "|effective coupling|, units omega_b");
    transfer->add_option("--periods", opt.periods, "Number of conversion periods to simulate");
    transfer->add_option("--ww", opt.ww, "Markovian rate convention: half_j or pi_j");
    transfer->add_option("--calibration-kappa", opt.calibration_kappa,
                         "Override the Markovian photon rate (J/2 convention)")
        ->each([&](const std::string&) { opt.calibration_set = true; });
    transfer->add_option("--scenario", opt.scenario_specs,
                         "label=photon-spec/phonon-spec (repeatable)");
    transfer->add_option("--band-nodes", opt.band_nodes, "Quadrature nodes over a band spectrum");

    CLI11_PARSE(app, argc, argv);

    if (app.get_subcommands().empty()) {
        std::cerr << app.help();
        return 1;
    }

    try {
        magnomech::Experiment experiment;
        if (eigs->parsed()) experiment = Experiment::Eigs;
        else if (scan->parsed()) experiment = Experiment::CouplingScan;
        else if (lind->parsed()) experiment = Experiment::Lindblad;
        else if (transfer->parsed()) experiment = Experiment::Transfer;
        else {
            std::cerr << "error: choose a subcommand\n";
            return 1;
        }

        const RunConfig cfg = build_config(opt, experiment);
        const RunOutcome outcome = magnomech::run(cfg);
        std::cout << "wrote " << outcome.out_dir.string() << " ("
                  << outcome.data_files.size() << " data file"
                  << (outcome.data_files.size() == 1 ? "" : "s") << ")\n";
        if (!outcome.checks_passed) {
            std::cerr << "one or more configured checks failed; see the manifest\n";
            return 2;
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
