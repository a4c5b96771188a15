#pragma once

#include "mmhmc/core.hpp"
#include "mmhmc/diagnostics.hpp"
#include "mmhmc/integrators.hpp"
#include "mmhmc/models.hpp"
#include "mmhmc/shadow.hpp"

#include <optional>

namespace mmhmc {

enum class SamplerKind { rwmh, mala, hmc, ghmc, mmhmc };

const char* sampler_name(SamplerKind k);
std::optional<SamplerKind> sampler_from_name(const std::string& name);

// All policies are re-drawn for every MC iteration.
struct StepSizePolicy {
    enum class Kind { fixed, jitter } kind = Kind::fixed;  // jitter: U(0.8h, 1.2h)
    double h = 0.1;
    double draw(Rng& rng) const;
};

struct StepsPolicy {
    enum class Kind { fixed, uniform } kind = Kind::fixed;  // uniform: U{1..L}
    int steps = 10;
    int draw(Rng& rng) const;
};

struct NoisePolicy {
    enum class Kind { fixed, uniform, jitter } kind = Kind::uniform;
    // uniform: U(0, phi); jitter: U(0.8 phi, 1.2 phi) clamped to (0, 1]
    double phi = 0.5;
    double draw(Rng& rng) const;
};

struct ShadowSpec {
    int order = 4;  // 4 or 6
    enum class Mode { analytic, numeric, debug_zero } mode = Mode::analytic;
    int stencil_k() const { return order >= 6 ? 2 : 1; }
};

enum class FlipMode { automatic, reduced };
enum class PmmcMode { implicit_test, explicit_test };

struct SamplerConfig {
    SamplerKind kind = SamplerKind::mmhmc;
    SplittingScheme scheme = SplittingScheme::verlet();
    ShadowSpec shadow;
    StepSizePolicy step_size;
    StepsPolicy steps;
    NoisePolicy noise;
    FlipMode flip = FlipMode::automatic;
    PmmcMode pmmc = PmmcMode::implicit_test;
    MassSpec mass = MassSpec::identity();
    double rwmh_scale = 0.5;

    // phi = 0 is rejected here; internal tests construct degenerate
    // configs directly.
    void validate() const;
};

// Per-chain mutable state shared by the sampler kernels. Cached quantities
// always refer to x; callers invalidate them when the target changes
// under the chain (Gibbs blocking).
struct KernelState {
    PhasePoint x;
    double potential = 0.0;
    Vector grad;
    bool cache_valid = false;

    GradientStencil stencil;  // numeric shadow mode only
    bool stencil_valid = false;

    bool last_move_accepted = false;
    double alpha_rev = 1.0;  // alpha(F current, F previous) of the last accepted move

    long n_iters = 0, n_pos_acc = 0, n_mom_acc = 0, n_flips = 0;

    void invalidate() {
        cache_valid = false;
        stencil_valid = false;
    }
};

KernelState make_kernel_state(const TargetModel& model, const MassSpec& mass,
                              const Vector& theta0, Rng& rng);

struct StepInfo {
    bool pos_accepted = false;
    bool mom_accepted = true;
    bool flipped = false;
    double log_weight = 0.0;
    double alpha = 1.0;        // position acceptance probability
    double delta_h_hat = 0.0;  // PMMC extended-Hamiltonian difference
    double h = 0.0, phi = 0.0;
    int L = 0;
};

// Inputs of one partial-momentum Metropolis test at fixed position.
struct PmmcInputs {
    const PhasePoint* x = nullptr;
    const Vector* u = nullptr;  // noise ~ N(0, M)
    double phi = 0.5;
    double h = 0.1;
    double potential = 0.0;
    const Vector* grad = nullptr;
    const GradientStencil* stencil_p = nullptr;      // numeric mode
    const GradientStencil* stencil_pstar = nullptr;  // numeric mode
};

// Extended-Hamiltonian difference of the proposal R(theta,p,u), evaluated
// without forming u* or full shadow values: only the momentum-dependent
// shadow terms survive. Analytic order 6 on non-quadratic models falls
// back to the explicit difference.
double pmmc_delta_implicit(const TargetModel& model, const MassSpec& mass,
                           const ShadowCoefficients& c, const ShadowSpec& shadow,
                           const PmmcInputs& in);

// Oracle form: full shadow values of both states plus the noise kinetic
// terms with u* = -sqrt(phi) p + sqrt(1-phi) u.
double pmmc_delta_explicit(const TargetModel& model, const MassSpec& mass,
                           const ShadowCoefficients& c, const ShadowSpec& shadow,
                           const PmmcInputs& in);

// Unconditional flip probability P_F of the three-way Metropolis outcome
// {accept, flip, stay}: automatic flips the whole rejection mass; reduced
// uses the previous move's reverse acceptance probability.
double flip_probability(FlipMode mode, bool last_move_accepted, double alpha,
                        double alpha_rev);

// One iteration of each kernel. mala_step is hmc_step pinned to one Verlet
// step with full momentum refresh.
StepInfo rwmh_step(KernelState& st, const TargetModel& model, const SamplerConfig& cfg, Rng& rng);
StepInfo hmc_step(KernelState& st, const TargetModel& model, const SamplerConfig& cfg, Rng& rng);
StepInfo mala_step(KernelState& st, const TargetModel& model, const SamplerConfig& cfg, Rng& rng);
StepInfo ghmc_step(KernelState& st, const TargetModel& model, const SamplerConfig& cfg, Rng& rng);
StepInfo mmhmc_step(KernelState& st, const TargetModel& model, const SamplerConfig& cfg, Rng& rng);
StepInfo sampler_step(KernelState& st, const TargetModel& model, const SamplerConfig& cfg, Rng& rng);

class Chain {
  public:
    Chain(const TargetModel& model, SamplerConfig cfg, std::uint64_t seed,
          std::optional<Vector> theta0 = std::nullopt);

    StepInfo step();
    const KernelState& state() const { return st_; }
    KernelState& state() { return st_; }
    const SamplerConfig& config() const { return cfg_; }
    Rng& rng() { return rng_; }

  private:
    const TargetModel* model_;
    SamplerConfig cfg_;
    Rng rng_;
    KernelState st_;
};

struct RunOptions {
    long n_iterations = 1000;  // total MC iterations
    long burn_in = 0;
    long thin = 1;
    std::uint64_t seed = 1;
    std::optional<Vector> theta0;
    bool record_momenta = false;
};

WeightedChain run_chain(const TargetModel& model, const SamplerConfig& cfg,
                        const RunOptions& opt);

// Gibbs cycling for the stochastic volatility model: one theta-block update
// then one latent-block update per iteration, each with its own policies.
// Retained theta samples are in constrained coordinates (beta, sigma, phi);
// sample weights combine both blocks' shadow/true gaps.
struct SVGibbsConfig {
    SamplerConfig theta_block;
    SamplerConfig x_block;
};

struct SVGibbsResult {
    WeightedChain theta_chain;  // columns: beta, sigma, phi
    WeightedChain x_chain;
};

SVGibbsResult run_sv_gibbs(const Vector& y, const SVParams& init, const Vector& x_init,
                           const SVGibbsConfig& cfg, const RunOptions& opt);

}  // namespace mmhmc
