#pragma once

#include "mmhmc/samplers.hpp"

#include <map>
#include <memory>
#include <string>

namespace mmhmc {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ModelSpec {
    std::string name = "gaussian";  // gaussian | banana | blr | sv
    // gaussian
    int dim = 10;
    std::string structure = "standard";  // standard | wishart
    std::uint64_t seed = 1;
    // shared: dataset file (banana y, blr csv, sv returns)
    std::string data;
    // banana
    double sigma_y = 2.0, sigma_theta = 1.0, mean = 1.0;
    int k = 100;
    std::uint64_t data_seed = 1;
    // blr
    double alpha = 100.0;
    std::string label_column = "label";
    // sv (simulated when no data file given)
    int t = 100;
    double beta = 0.65, sigma = 0.15, phi = 0.98;

    bool operator==(const ModelSpec&) const = default;
};

struct SamplerSpec {
    std::string kind = "mmhmc";
    std::string integrator = "verlet";  // catalog name; ignored when family set
    std::string family;                 // two_stage | three_stage | four_stage
    double a = 0.0, b = 0.0, b1 = 0.0, b2 = 0.0;
    double h = 0.1;
    std::string h_policy = "jitter";  // fixed | jitter
    int l = 10;
    std::string l_policy = "uniform";  // fixed | uniform
    double phi = 0.5;
    std::string phi_policy = "uniform";  // fixed | uniform | jitter
    int shadow_order = 4;
    std::string shadow_mode = "analytic";  // analytic | numeric
    std::string flip = "automatic";        // automatic | reduced
    std::string pmmc = "implicit";         // implicit | explicit
    double scale = 0.5;                    // rwmh proposal scale
    // sv latent-block overrides (0 = inherit the theta-block value)
    double h_x = 0.0;
    int l_x = 0;
    double phi_x = 0.0;

    bool operator==(const SamplerSpec&) const = default;
};

struct RunSpec {
    long n_samples = 10000;  // total MC iterations
    long burn_in = 1000;
    long thin = 1;
    int n_chains = 1;
    std::uint64_t seed = 1;

    bool operator==(const RunSpec&) const = default;
};

struct ExperimentConfig {
    ModelSpec model;
    SamplerSpec sampler;
    RunSpec run;
    std::string output_dir = "out";

    bool operator==(const ExperimentConfig&) const = default;
};

// Flat "key = value" text with dotted sections; '#' starts a comment.
// Unknown keys are rejected with the key name; parse errors carry the line
// number. Values are validated for range on load.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string emit_config(const ExperimentConfig& cfg);

// key=value overrides (CLI flags); keys as in the file format.
void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value);

SamplerConfig build_sampler_config(const SamplerSpec& spec);
SamplerConfig build_sv_x_config(const SamplerSpec& spec);  // latent-block variant
std::unique_ptr<TargetModel> build_model(const ModelSpec& spec);

// Orchestrates run_chain / run_sv_gibbs over n_chains workers (chain i uses
// seed run.seed + i), writes chain CSVs, metadata, diagnostics and the
// resolved config under output_dir.
void run_experiment(const ExperimentConfig& cfg, std::ostream& log);

}  // namespace mmhmc
