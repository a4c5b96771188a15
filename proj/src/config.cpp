#include "mmhmc/config.hpp"

#include "mmhmc/io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fs = std::filesystem;

namespace mmhmc {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

long to_long(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const long x = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (...) {
        throw ConfigError("invalid integer for key '" + key + "': " + v);
    }
}

double to_double(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (...) {
        throw ConfigError("invalid number for key '" + key + "': " + v);
    }
}

void check_choice(const std::string& v, std::initializer_list<const char*> allowed,
                  const std::string& key) {
    for (const char* a : allowed)
        if (v == a) return;
    std::string msg = "invalid value for key '" + key + "': " + v + " (expected one of";
    for (const char* a : allowed) msg += std::string(" ") + a;
    throw ConfigError(msg + ")");
}

void set_key(ExperimentConfig& c, const std::string& key, const std::string& value) {
    auto& m = c.model;
    auto& s = c.sampler;
    auto& r = c.run;
    if (key == "model.name") {
        check_choice(value, {"gaussian", "banana", "blr", "sv"}, key);
        m.name = value;
    } else if (key == "model.dim") {
        m.dim = static_cast<int>(to_long(value, key));
        if (m.dim < 1) throw ConfigError("model.dim must be >= 1");
    } else if (key == "model.structure") {
        check_choice(value, {"standard", "wishart"}, key);
        m.structure = value;
    } else if (key == "model.seed") {
        m.seed = static_cast<std::uint64_t>(to_long(value, key));
    } else if (key == "model.data") {
        m.data = value;
    } else if (key == "model.sigma_y") {
        m.sigma_y = to_double(value, key);
    } else if (key == "model.sigma_theta") {
        m.sigma_theta = to_double(value, key);
    } else if (key == "model.mean") {
        m.mean = to_double(value, key);
    } else if (key == "model.k") {
        m.k = static_cast<int>(to_long(value, key));
    } else if (key == "model.data_seed") {
        m.data_seed = static_cast<std::uint64_t>(to_long(value, key));
    } else if (key == "model.alpha") {
        m.alpha = to_double(value, key);
    } else if (key == "model.label_column") {
        m.label_column = value;
    } else if (key == "model.t") {
        m.t = static_cast<int>(to_long(value, key));
    } else if (key == "model.beta") {
        m.beta = to_double(value, key);
    } else if (key == "model.sigma") {
        m.sigma = to_double(value, key);
    } else if (key == "model.phi") {
        m.phi = to_double(value, key);
    } else if (key == "sampler.kind") {
        check_choice(value, {"rwmh", "mala", "hmc", "ghmc", "mmhmc"}, key);
        s.kind = value;
    } else if (key == "sampler.integrator") {
        s.integrator = value;
    } else if (key == "sampler.family") {
        check_choice(value, {"two_stage", "three_stage", "four_stage", ""}, key);
        s.family = value;
    } else if (key == "sampler.a") {
        s.a = to_double(value, key);
    } else if (key == "sampler.b") {
        s.b = to_double(value, key);
    } else if (key == "sampler.b1") {
        s.b1 = to_double(value, key);
    } else if (key == "sampler.b2") {
        s.b2 = to_double(value, key);
    } else if (key == "sampler.h") {
        s.h = to_double(value, key);
        if (!(s.h > 0.0)) throw ConfigError("sampler.h must be positive");
    } else if (key == "sampler.h_policy") {
        check_choice(value, {"fixed", "jitter"}, key);
        s.h_policy = value;
    } else if (key == "sampler.l") {
        s.l = static_cast<int>(to_long(value, key));
        if (s.l < 1) throw ConfigError("sampler.l must be >= 1");
    } else if (key == "sampler.l_policy") {
        check_choice(value, {"fixed", "uniform"}, key);
        s.l_policy = value;
    } else if (key == "sampler.phi") {
        s.phi = to_double(value, key);
        if (!(s.phi > 0.0 && s.phi <= 1.0)) throw ConfigError("sampler.phi must lie in (0, 1]");
    } else if (key == "sampler.phi_policy") {
        check_choice(value, {"fixed", "uniform", "jitter"}, key);
        s.phi_policy = value;
    } else if (key == "sampler.shadow_order") {
        s.shadow_order = static_cast<int>(to_long(value, key));
        if (s.shadow_order != 4 && s.shadow_order != 6)
            throw ConfigError("sampler.shadow_order must be 4 or 6");
    } else if (key == "sampler.shadow_mode") {
        check_choice(value, {"analytic", "numeric"}, key);
        s.shadow_mode = value;
    } else if (key == "sampler.flip") {
        check_choice(value, {"automatic", "reduced"}, key);
        s.flip = value;
    } else if (key == "sampler.pmmc") {
        check_choice(value, {"implicit", "explicit"}, key);
        s.pmmc = value;
    } else if (key == "sampler.scale") {
        s.scale = to_double(value, key);
        if (!(s.scale > 0.0)) throw ConfigError("sampler.scale must be positive");
    } else if (key == "sampler.h_x") {
        s.h_x = to_double(value, key);
    } else if (key == "sampler.l_x") {
        s.l_x = static_cast<int>(to_long(value, key));
    } else if (key == "sampler.phi_x") {
        s.phi_x = to_double(value, key);
    } else if (key == "run.n_samples") {
        r.n_samples = to_long(value, key);
        if (r.n_samples < 1) throw ConfigError("run.n_samples must be >= 1");
    } else if (key == "run.burn_in") {
        r.burn_in = to_long(value, key);
        if (r.burn_in < 0) throw ConfigError("run.burn_in must be >= 0");
    } else if (key == "run.thin") {
        r.thin = to_long(value, key);
        if (r.thin < 1) throw ConfigError("run.thin must be >= 1");
    } else if (key == "run.n_chains") {
        r.n_chains = static_cast<int>(to_long(value, key));
        if (r.n_chains < 1) throw ConfigError("run.n_chains must be >= 1");
    } else if (key == "run.seed") {
        r.seed = static_cast<std::uint64_t>(to_long(value, key));
    } else if (key == "output.dir") {
        c.output_dir = value;
    } else {
        throw ConfigError("unknown config key: '" + key + "'");
    }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("parse error at line " + std::to_string(lineno) +
                              ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            set_key(cfg, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError(std::string(e.what()) + " (line " + std::to_string(lineno) + ")");
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

std::string emit_config(const ExperimentConfig& c) {
    std::ostringstream os;
    char buf[128];
    auto num = [&buf](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    os << "model.name = " << c.model.name << "\n";
    os << "model.dim = " << c.model.dim << "\n";
    os << "model.structure = " << c.model.structure << "\n";
    os << "model.seed = " << c.model.seed << "\n";
    if (!c.model.data.empty()) os << "model.data = " << c.model.data << "\n";
    os << "model.sigma_y = " << num(c.model.sigma_y) << "\n";
    os << "model.sigma_theta = " << num(c.model.sigma_theta) << "\n";
    os << "model.mean = " << num(c.model.mean) << "\n";
    os << "model.k = " << c.model.k << "\n";
    os << "model.data_seed = " << c.model.data_seed << "\n";
    os << "model.alpha = " << num(c.model.alpha) << "\n";
    os << "model.label_column = " << c.model.label_column << "\n";
    os << "model.t = " << c.model.t << "\n";
    os << "model.beta = " << num(c.model.beta) << "\n";
    os << "model.sigma = " << num(c.model.sigma) << "\n";
    os << "model.phi = " << num(c.model.phi) << "\n";
    os << "sampler.kind = " << c.sampler.kind << "\n";
    os << "sampler.integrator = " << c.sampler.integrator << "\n";
    if (!c.sampler.family.empty()) {
        os << "sampler.family = " << c.sampler.family << "\n";
        os << "sampler.a = " << num(c.sampler.a) << "\n";
        os << "sampler.b = " << num(c.sampler.b) << "\n";
        os << "sampler.b1 = " << num(c.sampler.b1) << "\n";
        os << "sampler.b2 = " << num(c.sampler.b2) << "\n";
    }
    os << "sampler.h = " << num(c.sampler.h) << "\n";
    os << "sampler.h_policy = " << c.sampler.h_policy << "\n";
    os << "sampler.l = " << c.sampler.l << "\n";
    os << "sampler.l_policy = " << c.sampler.l_policy << "\n";
    os << "sampler.phi = " << num(c.sampler.phi) << "\n";
    os << "sampler.phi_policy = " << c.sampler.phi_policy << "\n";
    os << "sampler.shadow_order = " << c.sampler.shadow_order << "\n";
    os << "sampler.shadow_mode = " << c.sampler.shadow_mode << "\n";
    os << "sampler.flip = " << c.sampler.flip << "\n";
    os << "sampler.pmmc = " << c.sampler.pmmc << "\n";
    os << "sampler.scale = " << num(c.sampler.scale) << "\n";
    if (c.sampler.h_x > 0.0) os << "sampler.h_x = " << num(c.sampler.h_x) << "\n";
    if (c.sampler.l_x > 0) os << "sampler.l_x = " << c.sampler.l_x << "\n";
    if (c.sampler.phi_x > 0.0) os << "sampler.phi_x = " << num(c.sampler.phi_x) << "\n";
    os << "run.n_samples = " << c.run.n_samples << "\n";
    os << "run.burn_in = " << c.run.burn_in << "\n";
    os << "run.thin = " << c.run.thin << "\n";
    os << "run.n_chains = " << c.run.n_chains << "\n";
    os << "run.seed = " << c.run.seed << "\n";
    os << "output.dir = " << c.output_dir << "\n";
    return os.str();
}

void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    set_key(cfg, key, value);
}

SamplerConfig build_sampler_config(const SamplerSpec& spec) {
    SamplerConfig cfg;
    const auto kind = sampler_from_name(spec.kind);
    if (!kind) throw ConfigError("unknown sampler kind: " + spec.kind);
    cfg.kind = *kind;

    if (!spec.family.empty()) {
        if (spec.family == "two_stage")
            cfg.scheme = SplittingScheme::two_stage(spec.b);
        else if (spec.family == "three_stage")
            cfg.scheme = SplittingScheme::three_stage(spec.a, spec.b);
        else
            cfg.scheme = SplittingScheme::four_stage(spec.a, spec.b1, spec.b2);
    } else {
        const auto found = catalog_lookup(spec.integrator);
        if (!found) throw ConfigError("integrator not in catalog: " + spec.integrator);
        cfg.scheme = *found;
    }

    cfg.step_size.h = spec.h;
    cfg.step_size.kind =
        spec.h_policy == "fixed" ? StepSizePolicy::Kind::fixed : StepSizePolicy::Kind::jitter;
    cfg.steps.steps = spec.l;
    cfg.steps.kind = spec.l_policy == "fixed" ? StepsPolicy::Kind::fixed : StepsPolicy::Kind::uniform;
    cfg.noise.phi = spec.phi;
    cfg.noise.kind = spec.phi_policy == "fixed"
                         ? NoisePolicy::Kind::fixed
                         : (spec.phi_policy == "jitter" ? NoisePolicy::Kind::jitter
                                                        : NoisePolicy::Kind::uniform);
    cfg.shadow.order = spec.shadow_order;
    cfg.shadow.mode = spec.shadow_mode == "numeric" ? ShadowSpec::Mode::numeric
                                                    : ShadowSpec::Mode::analytic;
    cfg.flip = spec.flip == "reduced" ? FlipMode::reduced : FlipMode::automatic;
    cfg.pmmc = spec.pmmc == "explicit" ? PmmcMode::explicit_test : PmmcMode::implicit_test;
    cfg.rwmh_scale = spec.scale;
    cfg.validate();
    return cfg;
}

SamplerConfig build_sv_x_config(const SamplerSpec& spec) {
    SamplerSpec xs = spec;
    if (spec.h_x > 0.0) xs.h = spec.h_x;
    if (spec.l_x > 0) xs.l = spec.l_x;
    if (spec.phi_x > 0.0) xs.phi = spec.phi_x;
    return build_sampler_config(xs);
}

std::unique_ptr<TargetModel> build_model(const ModelSpec& spec) {
    if (spec.name == "gaussian") {
        if (spec.structure == "wishart") {
            Rng rng(spec.seed);
            return std::make_unique<GaussianTarget>(generate_wishart_target(spec.dim, rng));
        }
        return std::make_unique<GaussianTarget>(GaussianTarget::standard(spec.dim));
    }
    if (spec.name == "banana") {
        Vector y;
        if (!spec.data.empty()) {
            y = read_sv_csv(spec.data);  // same two-column shape
        } else {
            Rng rng(spec.data_seed);
            y = banana_simulate(spec.k, spec.mean, spec.sigma_y, rng);
        }
        return std::make_unique<BananaTarget>(std::move(y), spec.sigma_y, spec.sigma_theta);
    }
    if (spec.name == "blr") {
        if (spec.data.empty()) throw ConfigError("blr model needs model.data");
        BLRDataset ds = ingest_blr_dataset(spec.data, spec.label_column);
        return std::make_unique<BLRTarget>(std::move(ds.design), std::move(ds.labels), spec.alpha);
    }
    throw ConfigError("build_model: sv runs through run_experiment's Gibbs path");
}

namespace {

std::string chain_path(const std::string& dir, int idx, const char* suffix = "") {
    char buf[64];
    std::snprintf(buf, sizeof buf, "chain_%02d%s.csv", idx, suffix);
    return (fs::path(dir) / buf).string();
}

}  // namespace

void run_experiment(const ExperimentConfig& cfg, std::ostream& log) {
    fs::create_directories(cfg.output_dir);
    {
        std::ofstream os(fs::path(cfg.output_dir) / "resolved.cfg");
        os << emit_config(cfg);
    }

    const int n_chains = cfg.run.n_chains;
    std::vector<WeightedChain> chains(n_chains);
    std::vector<std::string> failures(n_chains);

    if (cfg.model.name == "sv") {
        Vector y;
        if (!cfg.model.data.empty()) {
            y = read_sv_csv(cfg.model.data);
        } else {
            Rng rng(cfg.model.data_seed);
            const SVData d = sv_simulate(cfg.model.t, cfg.model.beta, cfg.model.sigma,
                                         cfg.model.phi, rng);
            y = d.y;
            write_sv_csv((fs::path(cfg.output_dir) / "sv_data.csv").string(), y);
        }
        SVGibbsConfig gcfg;
        gcfg.theta_block = build_sampler_config(cfg.sampler);
        gcfg.x_block = build_sv_x_config(cfg.sampler);
        const SVParams init{1.0, 0.3, 0.6};

#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < n_chains; ++i) {
            try {
                RunOptions opt;
                opt.n_iterations = cfg.run.n_samples;
                opt.burn_in = cfg.run.burn_in;
                opt.thin = cfg.run.thin;
                opt.seed = cfg.run.seed + static_cast<std::uint64_t>(i);
                const SVGibbsResult res =
                    run_sv_gibbs(y, init, Vector::Zero(y.size()), gcfg, opt);
                write_chain_csv(chain_path(cfg.output_dir, i), res.theta_chain);
                write_chain_meta(chain_path(cfg.output_dir, i) + ".meta", res.theta_chain);
                write_chain_csv(chain_path(cfg.output_dir, i, "_x"), res.x_chain);
                write_chain_meta(chain_path(cfg.output_dir, i, "_x") + ".meta", res.x_chain);
                chains[i] = res.theta_chain;
            } catch (const std::exception& e) {
                failures[i] = e.what();
            }
        }
    } else {
        const std::unique_ptr<TargetModel> model = build_model(cfg.model);
        const SamplerConfig scfg = build_sampler_config(cfg.sampler);

#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < n_chains; ++i) {
            try {
                RunOptions opt;
                opt.n_iterations = cfg.run.n_samples;
                opt.burn_in = cfg.run.burn_in;
                opt.thin = cfg.run.thin;
                opt.seed = cfg.run.seed + static_cast<std::uint64_t>(i);
                chains[i] = run_chain(*model, scfg, opt);
                write_chain_csv(chain_path(cfg.output_dir, i), chains[i]);
                write_chain_meta(chain_path(cfg.output_dir, i) + ".meta", chains[i]);
            } catch (const std::exception& e) {
                failures[i] = e.what();
            }
        }
    }

    bool any_failed = false;
    std::vector<WeightedChain> ok;
    for (int i = 0; i < n_chains; ++i) {
        if (!failures[i].empty()) {
            any_failed = true;
            log << "chain " << i << " failed: " << failures[i] << "\n";
        } else if (chains[i].n() > 0) {
            ok.push_back(chains[i]);
        }
    }
    if (!ok.empty() && ok[0].n() >= 10) {
        const ChainSummary summary = summarize_chains(ok);
        {
            std::ofstream os(fs::path(cfg.output_dir) / "diagnostics.csv");
            summary_csv(ok.size() == 1 ? summarize_chain(ok[0]) : summary, os);
        }
        std::ofstream os(fs::path(cfg.output_dir) / "summary.txt");
        summary_text(summary, os);
        summary_text(summary, log);
    }
    if (any_failed) throw EvalError("one or more chains failed; partial outputs retained");
}

}  // namespace mmhmc
