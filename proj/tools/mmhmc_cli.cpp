#include "mmhmc/config.hpp"
#include "mmhmc/diagnostics.hpp"
#include "mmhmc/integrators.hpp"
#include "mmhmc/io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

int cmd_sample(const std::string& config_path,
               const std::vector<std::pair<std::string, std::string>>& overrides) {
    mmhmc::ExperimentConfig cfg;
    try {
        cfg = mmhmc::load_config(config_path);
        for (const auto& [k, v] : overrides) mmhmc::apply_override(cfg, k, v);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    try {
        mmhmc::run_experiment(cfg, std::cout);
    } catch (const mmhmc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "sampling error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}

int cmd_diagnose(const std::string& chains_glob, const std::string& baseline_glob,
                 const std::string& report_path) {
    try {
        const auto paths = mmhmc::glob_files(chains_glob);
        if (paths.empty()) {
            std::cerr << "config error: no chain files match " << chains_glob << "\n";
            return kExitConfig;
        }
        std::vector<mmhmc::WeightedChain> chains;
        for (const auto& p : paths) chains.push_back(mmhmc::read_chain_csv(p));
        const mmhmc::ChainSummary summary = mmhmc::summarize_chains(chains);
        mmhmc::summary_text(summary, std::cout);
        if (!report_path.empty()) {
            std::ofstream os(report_path);
            mmhmc::summary_csv(chains.size() == 1 ? mmhmc::summarize_chain(chains[0]) : summary,
                               os);
        }
        if (!baseline_glob.empty()) {
            const auto bpaths = mmhmc::glob_files(baseline_glob);
            if (bpaths.empty()) {
                std::cerr << "config error: no baseline files match " << baseline_glob << "\n";
                return kExitConfig;
            }
            std::vector<mmhmc::WeightedChain> base;
            for (const auto& p : bpaths) base.push_back(mmhmc::read_chain_csv(p));
            const auto rep = mmhmc::efficiency_report(chains, base);
            std::printf("EF (min ESS/T vs baseline):  %.4g\n", rep.ef_ess);
            std::printf("EF (max MCSE*T vs baseline): %.4g\n", rep.ef_mcse);
        }
    } catch (const std::exception& e) {
        std::cerr << "diagnose error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}

int cmd_design(const std::string& objective, int family, double hbar,
               const std::string& catalog_path) {
    try {
        if (!catalog_path.empty()) {
            std::ofstream os(catalog_path);
            mmhmc::catalog_csv(os);
            std::cout << "catalog written to " << catalog_path << "\n";
            if (objective.empty()) return 0;
        }
        mmhmc::DesignObjective obj;
        mmhmc::RhoTarget rho_target = mmhmc::RhoTarget::modified;
        if (objective == "E") {
            obj = mmhmc::DesignObjective::E;
        } else if (objective == "EG") {
            obj = mmhmc::DesignObjective::EG;
        } else if (objective == "rho" || objective == "rho_mod") {
            obj = mmhmc::DesignObjective::rho_max;
        } else if (objective == "rho_hmc") {
            obj = mmhmc::DesignObjective::rho_max;
            rho_target = mmhmc::RhoTarget::true_hamiltonian;
        } else {
            std::cerr << "config error: objective must be E, EG, rho, rho_mod or rho_hmc\n";
            return kExitConfig;
        }
        mmhmc::Family fam;
        switch (family) {
            case 2: fam = mmhmc::Family::two_stage; break;
            case 3: fam = mmhmc::Family::three_stage; break;
            case 4: fam = mmhmc::Family::four_stage; break;
            default:
                std::cerr << "config error: family must be 2, 3 or 4\n";
                return kExitConfig;
        }
        const auto res = mmhmc::minimize_design_metric(
            obj, fam, hbar > 0.0 ? std::optional<double>(hbar) : std::nullopt, rho_target);
        const auto& s = res.scheme;
        std::printf("family: %s\n", mmhmc::family_name(s.family));
        if (s.family == mmhmc::Family::two_stage) {
            std::printf("b  = %.10g\n", s.b1);
        } else if (s.family == mmhmc::Family::three_stage) {
            std::printf("a  = %.10g\nb  = %.10g\n", s.a, s.b1);
        } else {
            std::printf("a  = %.10g\nb1 = %.10g\nb2 = %.10g\n", s.a, s.b1, s.b2);
        }
        std::printf("objective %s = %.10g%s\n", objective.c_str(), res.objective_value,
                    res.converged ? "" : "  (not converged; best so far)");
        return res.converged ? 0 : kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "design error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sampling toolkit: generalized HMC importance sampling with modified "
                 "Hamiltonians, multi-stage splitting integrators, baseline samplers and "
                 "weighted-chain diagnostics"};
    app.require_subcommand(1);

    // sample
    auto* sample = app.add_subcommand("sample", "run a sampling experiment from a config file");
    sample->set_help_flag("--help", "print help");  // frees -h for the step-size flag
    std::string config_path;
    sample->add_option("--config", config_path, "experiment config file")->required();
    std::string opt_seed, opt_sampler, opt_h, opt_l, opt_phi, opt_integrator, opt_shadow_order,
        opt_shadow_mode, opt_flip, opt_out;
    sample->add_option("--seed", opt_seed, "override run.seed");
    sample->add_option("--sampler", opt_sampler, "override sampler.kind");
    sample->add_option("--h", opt_h, "override sampler.h");
    sample->add_option("--L", opt_l, "override sampler.l");
    sample->add_option("--phi", opt_phi, "override sampler.phi");
    sample->add_option("--integrator", opt_integrator, "override sampler.integrator");
    sample->add_option("--shadow-order", opt_shadow_order, "override sampler.shadow_order (4|6)");
    sample->add_option("--shadow-mode", opt_shadow_mode,
                       "override sampler.shadow_mode (analytic|numeric)");
    sample->add_option("--flip", opt_flip, "override sampler.flip (automatic|reduced)");
    sample->add_option("--out", opt_out, "override output.dir");

    // diagnose
    auto* diagnose = app.add_subcommand("diagnose", "ESS/MCSE report for stored chains");
    std::string chains_glob, baseline_glob, report_path;
    diagnose->add_option("--chains", chains_glob, "glob of chain CSV files")->required();
    diagnose->add_option("--baseline", baseline_glob, "glob of baseline chains (EF report)");
    diagnose->add_option("--report", report_path, "write per-variate CSV report here");

    // design
    auto* design = app.add_subcommand("design", "re-derive integrator coefficients");
    std::string objective;
    int family = 2;
    double hbar = 0.0;
    std::string catalog_path;
    design->add_option("--objective", objective, "E | EG | rho | rho_mod | rho_hmc");
    design->add_option("--family", family, "2 | 3 | 4 (number of stages)");
    design->add_option("--hbar", hbar, "max step size for the rho objective (default 2)");
    design->add_option("--catalog", catalog_path, "export the coefficient catalog as CSV");

    CLI11_PARSE(app, argc, argv);

    if (sample->parsed()) {
        std::vector<std::pair<std::string, std::string>> ov;
        if (!opt_seed.empty()) ov.emplace_back("run.seed", opt_seed);
        if (!opt_sampler.empty()) ov.emplace_back("sampler.kind", opt_sampler);
        if (!opt_h.empty()) ov.emplace_back("sampler.h", opt_h);
        if (!opt_l.empty()) ov.emplace_back("sampler.l", opt_l);
        if (!opt_phi.empty()) ov.emplace_back("sampler.phi", opt_phi);
        if (!opt_integrator.empty()) ov.emplace_back("sampler.integrator", opt_integrator);
        if (!opt_shadow_order.empty()) ov.emplace_back("sampler.shadow_order", opt_shadow_order);
        if (!opt_shadow_mode.empty()) ov.emplace_back("sampler.shadow_mode", opt_shadow_mode);
        if (!opt_flip.empty()) ov.emplace_back("sampler.flip", opt_flip);
        if (!opt_out.empty()) ov.emplace_back("output.dir", opt_out);
        return cmd_sample(config_path, ov);
    }
    if (diagnose->parsed()) return cmd_diagnose(chains_glob, baseline_glob, report_path);
    if (design->parsed()) {
        if (objective.empty() && catalog_path.empty()) {
            std::cerr << "config error: design needs --objective or --catalog\n";
            return kExitConfig;
        }
        return cmd_design(objective, family, hbar, catalog_path);
    }
    return 0;
}
