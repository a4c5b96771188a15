#include "mmhmc/samplers.hpp"

#include <chrono>
#include <cmath>

namespace mmhmc {

const char* sampler_name(SamplerKind k) {
    switch (k) {
        case SamplerKind::rwmh: return "rwmh";
        case SamplerKind::mala: return "mala";
        case SamplerKind::hmc: return "hmc";
        case SamplerKind::ghmc: return "ghmc";
        case SamplerKind::mmhmc: return "mmhmc";
    }
    return "?";
}

std::optional<SamplerKind> sampler_from_name(const std::string& name) {
    for (SamplerKind k : {SamplerKind::rwmh, SamplerKind::mala, SamplerKind::hmc,
                          SamplerKind::ghmc, SamplerKind::mmhmc})
        if (name == sampler_name(k)) return k;
    return std::nullopt;
}

double StepSizePolicy::draw(Rng& rng) const {
    if (kind == Kind::fixed) return h;
    std::uniform_real_distribution<double> ud(0.8 * h, 1.2 * h);
    return ud(rng);
}

int StepsPolicy::draw(Rng& rng) const {
    if (kind == Kind::fixed) return steps;
    std::uniform_int_distribution<int> ud(1, steps);
    return ud(rng);
}

double NoisePolicy::draw(Rng& rng) const {
    switch (kind) {
        case Kind::fixed: return phi;
        case Kind::uniform: {
            std::uniform_real_distribution<double> ud(0.0, phi);
            return ud(rng);
        }
        case Kind::jitter: {
            std::uniform_real_distribution<double> ud(0.8 * phi, 1.2 * phi);
            return std::min(ud(rng), 1.0);
        }
    }
    return phi;
}

void SamplerConfig::validate() const {
    if (!(step_size.h > 0.0)) throw ContractError("sampler config: step size must be positive");
    if (steps.steps < 1) throw ContractError("sampler config: L must be >= 1");
    if (!(noise.phi > 0.0 && noise.phi <= 1.0))
        throw ContractError("sampler config: phi must lie in (0, 1]");
    if (shadow.order != 4 && shadow.order != 6)
        throw ContractError("sampler config: shadow order must be 4 or 6");
    if (shadow.mode == ShadowSpec::Mode::numeric && shadow.order == 6 &&
        scheme.family != Family::verlet && scheme.family != Family::two_stage)
        throw ContractError(
            "sampler config: numeric order-6 shadow supports Verlet and two-stage schemes only");
    if (kind == SamplerKind::rwmh && !(rwmh_scale > 0.0))
        throw ContractError("sampler config: rwmh proposal scale must be positive");
}

KernelState make_kernel_state(const TargetModel& model, const MassSpec& mass,
                              const Vector& theta0, Rng& rng) {
    if (theta0.size() != model.dim())
        throw ContractError("make_kernel_state: theta0 dimension mismatch");
    KernelState st;
    st.x.theta = theta0;
    st.x.p = draw_momentum(theta0.size(), mass, rng);
    st.grad.resize(theta0.size());
    return st;
}

namespace {

void refresh_cache(KernelState& st, const TargetModel& model) {
    if (st.cache_valid) return;
    st.potential = model.eval(st.x.theta, st.grad);
    st.cache_valid = true;
}

void ensure_stencil(KernelState& st, const SplittingScheme& scheme, const TargetModel& model,
                    const MassSpec& mass, double h, int k) {
    if (st.stencil_valid && st.stencil.h == h && st.stencil.k >= k) return;
    st.stencil = make_stencil(scheme, model, mass, st.x, st.grad, h, k);
    st.stencil_valid = true;
}

double eval_shadow(const PhasePoint& x, double pot, const Vector& grad,
                   const GradientStencil* stencil, const TargetModel& model,
                   const MassSpec& mass, const ShadowCoefficients& c, double h,
                   const ShadowSpec& spec) {
    switch (spec.mode) {
        case ShadowSpec::Mode::debug_zero:
            return pot + kinetic_energy(x.p, mass);
        case ShadowSpec::Mode::analytic:
            return spec.order == 4 ? shadow4_analytic(x, model, mass, c, h, pot, grad)
                                   : shadow6_analytic(x, model, mass, c, h, pot, grad);
        case ShadowSpec::Mode::numeric:
            if (stencil == nullptr) throw StencilError("numeric shadow: missing stencil");
            return shadow_numeric(x, model, mass, c, h, spec.order, *stencil, pot, grad);
    }
    throw ContractError("eval_shadow: unknown mode");
}

double u01(Rng& rng) {
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    return ud(rng);
}

double accept_prob(double delta) {
    if (std::isnan(delta)) return 0.0;
    return std::min(1.0, std::exp(-delta));
}

}  // namespace

double pmmc_delta_implicit(const TargetModel& model, const MassSpec& mass,
                           const ShadowCoefficients& c, const ShadowSpec& shadow,
                           const PmmcInputs& in) {
    const Vector& p = in.x->p;
    const Vector& u = *in.u;
    const double phi = in.phi, h = in.h;
    const double mix = 2.0 * std::sqrt(phi * (1.0 - phi));

    switch (shadow.mode) {
        case ShadowSpec::Mode::debug_zero:
            return 0.0;
        case ShadowSpec::Mode::analytic: {
            if (shadow.order == 6 && !model.is_quadratic())
                return pmmc_delta_explicit(model, mass, c, shadow, in);
            const Vector vp = mass.apply_inv(p);
            const Vector vu = mass.apply_inv(u);
            Vector hvp(p.size()), hvu(p.size());
            model.hessian_vec(in.x->theta, vp, hvp);
            model.hessian_vec(in.x->theta, vu, hvu);
            const double a_term = (vu - vp).dot(hvu + hvp);  // u'U2u - p'U2p (mass-scaled)
            const double b_term = vu.dot(hvp);
            double d = h * h * c.c21 * (phi * a_term + mix * b_term);
            if (shadow.order == 6) {
                const double dd = mass.inv_quad(hvu);
                const double ee = mass.inv_quad(hvp);
                const double ff = mass.inv_bilin(hvu, hvp);
                d += h * h * h * h * c.c44 * (phi * (dd - ee) + mix * ff);
            }
            return d;
        }
        case ShadowSpec::Mode::numeric: {
            if (in.stencil_p == nullptr || in.stencil_pstar == nullptr)
                throw StencilError("pmmc_delta_implicit: numeric mode needs both stencils");
            const Vector pstar = std::sqrt(1.0 - phi) * p + std::sqrt(phi) * u;
            const auto dp = stencil_time_derivatives(*in.stencil_p, *in.grad, h, shadow.order);
            const auto ds = stencil_time_derivatives(*in.stencil_pstar, *in.grad, h, shadow.order);
            double d = h * c.k21 * (mass.inv_bilin(pstar, ds.p1) - mass.inv_bilin(p, dp.p1));
            if (shadow.order == 6) {
                d += h * c.k41 * (mass.inv_bilin(pstar, ds.p3) - mass.inv_bilin(p, dp.p3));
                d += h * h * c.k42 * mass.inv_bilin(*in.grad, ds.p2 - dp.p2);
                d += h * h * c.k43 * (mass.inv_quad(ds.p1) - mass.inv_quad(dp.p1));
            }
            return d;
        }
    }
    throw ContractError("pmmc_delta_implicit: unknown mode");
}

double pmmc_delta_explicit(const TargetModel& model, const MassSpec& mass,
                           const ShadowCoefficients& c, const ShadowSpec& shadow,
                           const PmmcInputs& in) {
    const Vector& p = in.x->p;
    const Vector& u = *in.u;
    const double sq1 = std::sqrt(1.0 - in.phi), sq = std::sqrt(in.phi);
    const PhasePoint xstar(in.x->theta, sq1 * p + sq * u);
    const Vector ustar = -sq * p + sq1 * u;

    const double sh_p = eval_shadow(*in.x, in.potential, *in.grad, in.stencil_p, model, mass, c,
                                    in.h, shadow);
    const double sh_star = eval_shadow(xstar, in.potential, *in.grad, in.stencil_pstar, model,
                                       mass, c, in.h, shadow);
    return sh_star + 0.5 * mass.inv_quad(ustar) - sh_p - 0.5 * mass.inv_quad(u);
}

double flip_probability(FlipMode mode, bool last_move_accepted, double alpha, double alpha_rev) {
    if (mode == FlipMode::automatic) return 1.0 - alpha;
    if (!last_move_accepted) return 1.0 - alpha;
    if (!(alpha_rev > 0.0)) return 1.0 - alpha;
    return std::max(0.0, 1.0 - alpha / alpha_rev);
}

StepInfo rwmh_step(KernelState& st, const TargetModel& model, const SamplerConfig& cfg,
                   Rng& rng) {
    StepInfo info;
    if (!st.cache_valid) {
        st.potential = model.potential(st.x.theta);
        st.cache_valid = true;
    }
    std::normal_distribution<double> nd(0.0, 1.0);
    Vector prop(st.x.theta.size());
    for (Eigen::Index i = 0; i < prop.size(); ++i)
        prop[i] = st.x.theta[i] + cfg.rwmh_scale * nd(rng);
    double pot_prop = std::numeric_limits<double>::infinity();
    bool ok = true;
    try {
        pot_prop = model.potential(prop);
    } catch (const EvalError&) {
        ok = false;
    }
    info.alpha = ok ? accept_prob(pot_prop - st.potential) : 0.0;
    if (u01(rng) < info.alpha) {
        st.x.theta = std::move(prop);
        st.potential = pot_prop;
        info.pos_accepted = true;
        ++st.n_pos_acc;
    }
    ++st.n_iters;
    return info;
}

StepInfo hmc_step(KernelState& st, const TargetModel& model, const SamplerConfig& cfg, Rng& rng) {
    StepInfo info;
    info.h = cfg.step_size.draw(rng);
    info.L = cfg.steps.draw(rng);
    refresh_cache(st, model);

    st.x.p = draw_momentum(st.x.theta.size(), cfg.mass, rng);  // complete refresh
    const double h_cur = st.potential + kinetic_energy(st.x.p, cfg.mass);

    bool ok = true;
    TrajectoryResult traj;
    try {
        traj = integrate(cfg.scheme, model, cfg.mass, st.x, info.h, info.L, nullptr, &st.grad);
    } catch (const EvalError&) {
        ok = false;
    }
    if (ok) {
        const double h_prop = traj.potential + kinetic_energy(traj.x.p, cfg.mass);
        info.alpha = accept_prob(h_prop - h_cur);
    }
    if (u01(rng) < info.alpha && ok) {
        st.x = std::move(traj.x);
        st.potential = traj.potential;
        st.grad = std::move(traj.gradient);
        info.pos_accepted = true;
        ++st.n_pos_acc;
        st.last_move_accepted = true;
    } else {
        st.last_move_accepted = false;
    }
    ++st.n_iters;
    ++st.n_mom_acc;  // momentum refresh is unconditional
    return info;
}

StepInfo mala_step(KernelState& st, const TargetModel& model, const SamplerConfig& cfg,
                   Rng& rng) {
    SamplerConfig one_step = cfg;
    one_step.scheme = SplittingScheme::verlet();
    one_step.steps = StepsPolicy{StepsPolicy::Kind::fixed, 1};
    return hmc_step(st, model, one_step, rng);
}

StepInfo ghmc_step(KernelState& st, const TargetModel& model, const SamplerConfig& cfg,
                   Rng& rng) {
    StepInfo info;
    info.h = cfg.step_size.draw(rng);
    info.L = cfg.steps.draw(rng);
    info.phi = cfg.noise.draw(rng);
    refresh_cache(st, model);

    // partial momentum update, accepted unconditionally (no shadow test)
    const Vector u = draw_momentum(st.x.theta.size(), cfg.mass, rng);
    st.x.p = std::sqrt(1.0 - info.phi) * st.x.p + std::sqrt(info.phi) * u;
    ++st.n_mom_acc;

    const double h_cur = st.potential + kinetic_energy(st.x.p, cfg.mass);
    bool ok = true;
    TrajectoryResult traj;
    try {
        traj = integrate(cfg.scheme, model, cfg.mass, st.x, info.h, info.L, nullptr, &st.grad);
    } catch (const EvalError&) {
        ok = false;
    }
    if (ok) {
        const double h_prop = traj.potential + kinetic_energy(traj.x.p, cfg.mass);
        info.alpha = accept_prob(h_prop - h_cur);
    }
    if (u01(rng) < info.alpha && ok) {
        st.x = std::move(traj.x);
        st.potential = traj.potential;
        st.grad = std::move(traj.gradient);
        info.pos_accepted = true;
        ++st.n_pos_acc;
        st.last_move_accepted = true;
    } else {
        st.x.p = -st.x.p;  // momentum flip on rejection
        info.flipped = true;
        ++st.n_flips;
        st.last_move_accepted = false;
    }
    ++st.n_iters;
    return info;
}

StepInfo mmhmc_step(KernelState& st, const TargetModel& model, const SamplerConfig& cfg,
                    Rng& rng) {
    StepInfo info;
    info.h = cfg.step_size.draw(rng);
    info.L = cfg.steps.draw(rng);
    info.phi = cfg.noise.draw(rng);
    refresh_cache(st, model);

    const ShadowCoefficients coeffs = stage_coefficients(cfg.scheme);
    const bool numeric = cfg.shadow.mode == ShadowSpec::Mode::numeric;
    const int k = cfg.shadow.stencil_k();
    // H~ depends on h: the cached stencil is rebuilt whenever h_n changed.
    if (numeric) ensure_stencil(st, cfg.scheme, model, cfg.mass, info.h, k);

    // ---- PMMC: partial momentum update under the extended modified density
    const Vector u = draw_momentum(st.x.theta.size(), cfg.mass, rng);
    const Vector pstar = std::sqrt(1.0 - info.phi) * st.x.p + std::sqrt(info.phi) * u;

    PmmcInputs pin;
    pin.x = &st.x;
    pin.u = &u;
    pin.phi = info.phi;
    pin.h = info.h;
    pin.potential = st.potential;
    pin.grad = &st.grad;

    GradientStencil stencil_star;
    bool pmmc_ok = true;
    if (numeric) {
        try {
            stencil_star = make_stencil(cfg.scheme, model, cfg.mass,
                                        PhasePoint(st.x.theta, pstar), st.grad, info.h, k);
        } catch (const EvalError&) {
            pmmc_ok = false;  // keep current momentum; discard p* stages
        }
        pin.stencil_p = &st.stencil;
        pin.stencil_pstar = &stencil_star;
    }
    bool mom_accepted = false;
    if (pmmc_ok) {
        try {
            info.delta_h_hat = cfg.pmmc == PmmcMode::implicit_test
                                   ? pmmc_delta_implicit(model, cfg.mass, coeffs, cfg.shadow, pin)
                                   : pmmc_delta_explicit(model, cfg.mass, coeffs, cfg.shadow, pin);
            mom_accepted = u01(rng) < accept_prob(info.delta_h_hat);
        } catch (const EvalError&) {
            mom_accepted = false;
        }
    }
    if (mom_accepted) {
        st.x.p = pstar;
        if (numeric) st.stencil = std::move(stencil_star);
        ++st.n_mom_acc;
    }
    info.mom_accepted = mom_accepted;

    const double shadow_cur =
        eval_shadow(st.x, st.potential, st.grad, numeric ? &st.stencil : nullptr, model,
                    cfg.mass, coeffs, info.h, cfg.shadow);

    // ---- HDMC: trajectory + Metropolis test on the modified Hamiltonian
    bool traj_ok = true;
    TrajectoryResult traj;
    std::vector<Vector> ring;  // last k+1 stage gradients along the trajectory
    StageRecorder rec;
    if (numeric) {
        rec = [&ring, k](const Vector&, const Vector& g) {
            if (static_cast<int>(ring.size()) > k) ring.erase(ring.begin());
            ring.push_back(g);
        };
    }
    try {
        traj = integrate(cfg.scheme, model, cfg.mass, st.x, info.h, info.L, rec, &st.grad);
    } catch (const EvalError&) {
        traj_ok = false;
    }

    GradientStencil end_stencil;
    double shadow_prop = 0.0, delta_shadow = 0.0;
    if (traj_ok && numeric) {
        // backward stencil values come from the recorded trajectory stages,
        // falling back to the start point and the pre-trajectory stencil for
        // very short trajectories; forward values need k extra stages.
        end_stencil.k = k;
        end_stencil.h = info.h;
        end_stencil.epsilon = cfg.scheme.stage_epsilon(info.h);
        const long total_stages = static_cast<long>(info.L) * cfg.scheme.stages();
        for (int j = 1; j <= k && traj_ok; ++j) {
            const long s = total_stages - j;
            if (s >= 1) {
                end_stencil.bwd.push_back(ring[ring.size() - 1 - j]);
            } else if (s == 0) {
                end_stencil.bwd.push_back(st.grad);
            } else {
                end_stencil.bwd.push_back(st.stencil.bwd[static_cast<std::size_t>(-s - 1)]);
            }
        }
        try {
            end_stencil.fwd = stage_gradients(cfg.scheme, model, cfg.mass, traj.x.theta,
                                              traj.x.p, traj.gradient, info.h, k);
        } catch (const EvalError&) {
            traj_ok = false;
        }
    }
    if (traj_ok) {
        try {
            shadow_prop = eval_shadow(traj.x, traj.potential, traj.gradient,
                                      numeric ? &end_stencil : nullptr, model, cfg.mass, coeffs,
                                      info.h, cfg.shadow);
            delta_shadow = shadow_prop - shadow_cur;
            info.alpha = accept_prob(delta_shadow);
        } catch (const EvalError&) {
            traj_ok = false;
        }
    }
    if (!traj_ok) info.alpha = 0.0;

    const double p_flip =
        flip_probability(cfg.flip, st.last_move_accepted, info.alpha, st.alpha_rev);
    const double coin = u01(rng);
    double shadow_final;
    if (coin < info.alpha) {
        st.x = std::move(traj.x);
        st.potential = traj.potential;
        st.grad = std::move(traj.gradient);
        if (numeric) st.stencil = std::move(end_stencil);
        st.alpha_rev = std::min(1.0, std::exp(delta_shadow));
        st.last_move_accepted = true;
        info.pos_accepted = true;
        ++st.n_pos_acc;
        shadow_final = shadow_prop;
    } else {
        if (coin < info.alpha + p_flip) {
            st.x.p = -st.x.p;
            if (numeric) st.stencil.flip();
            info.flipped = true;
            ++st.n_flips;
        }
        st.last_move_accepted = false;
        shadow_final = shadow_cur;  // H~ is even in p: unchanged by the flip
    }
    ++st.n_iters;

    info.log_weight =
        importance_log_weight(shadow_final, st.potential + kinetic_energy(st.x.p, cfg.mass));
    return info;
}

StepInfo sampler_step(KernelState& st, const TargetModel& model, const SamplerConfig& cfg,
                      Rng& rng) {
    switch (cfg.kind) {
        case SamplerKind::rwmh: return rwmh_step(st, model, cfg, rng);
        case SamplerKind::mala: return mala_step(st, model, cfg, rng);
        case SamplerKind::hmc: return hmc_step(st, model, cfg, rng);
        case SamplerKind::ghmc: return ghmc_step(st, model, cfg, rng);
        case SamplerKind::mmhmc: return mmhmc_step(st, model, cfg, rng);
    }
    throw ContractError("sampler_step: unknown sampler kind");
}

Chain::Chain(const TargetModel& model, SamplerConfig cfg, std::uint64_t seed,
             std::optional<Vector> theta0)
    : model_(&model), cfg_(std::move(cfg)), rng_(seed) {
    cfg_.validate();
    Vector t0 = theta0.value_or(Vector::Zero(model.dim()));
    st_ = make_kernel_state(model, cfg_.mass, t0, rng_);
    if (cfg_.kind == SamplerKind::rwmh) {
        st_.potential = model.potential(st_.x.theta);
        st_.cache_valid = true;
    } else {
        refresh_cache(st_, model);  // startup error surfaces here
    }
}

StepInfo Chain::step() { return sampler_step(st_, *model_, cfg_, rng_); }

WeightedChain run_chain(const TargetModel& model, const SamplerConfig& cfg,
                        const RunOptions& opt) {
    if (opt.n_iterations < 1) throw ContractError("run_chain: need at least one iteration");
    if (opt.burn_in < 0 || opt.thin < 1) throw ContractError("run_chain: invalid burn_in/thin");

    Chain chain(model, cfg, opt.seed, opt.theta0);
    const long n_retained = std::max<long>(0, (opt.n_iterations - opt.burn_in) / opt.thin);

    WeightedChain out;
    out.samples.resize(n_retained, model.dim());
    out.log_weights.resize(n_retained);
    out.iters.reserve(n_retained);
    out.accepted.reserve(n_retained);
    if (opt.record_momenta) out.momenta.resize(n_retained, model.dim());

    using clock = std::chrono::steady_clock;
    clock::time_point t0 = clock::now();
    long row = 0;
    for (long n = 1; n <= opt.n_iterations; ++n) {
        if (n == opt.burn_in + 1) t0 = clock::now();
        const StepInfo info = chain.step();
        if (n > opt.burn_in && (n - opt.burn_in) % opt.thin == 0 && row < n_retained) {
            out.samples.row(row) = chain.state().x.theta.transpose();
            out.log_weights[row] = info.log_weight;
            if (opt.record_momenta) out.momenta.row(row) = chain.state().x.p.transpose();
            out.iters.push_back(n);
            out.accepted.push_back(info.pos_accepted ? 1 : 0);
            ++row;
        }
    }
    if (opt.n_iterations > opt.burn_in)
        out.wall_time = std::chrono::duration<double>(clock::now() - t0).count();

    const auto& st = chain.state();
    out.accept_pos = st.n_iters > 0 ? static_cast<double>(st.n_pos_acc) / st.n_iters : 0.0;
    out.accept_mom = st.n_iters > 0 ? static_cast<double>(st.n_mom_acc) / st.n_iters : 0.0;
    return out;
}

SVGibbsResult run_sv_gibbs(const Vector& y, const SVParams& init, const Vector& x_init,
                           const SVGibbsConfig& cfg, const RunOptions& opt) {
    cfg.theta_block.validate();
    cfg.x_block.validate();
    if (y.size() != x_init.size()) throw ContractError("run_sv_gibbs: y and x_init length mismatch");

    Rng rng(opt.seed);
    KernelState th_st = make_kernel_state(SVThetaConditional(y, x_init), cfg.theta_block.mass,
                                          sv_transform(init), rng);
    KernelState x_st;
    {
        SVXConditional xm(y, init);
        x_st = make_kernel_state(xm, cfg.x_block.mass, x_init, rng);
    }

    const long n_retained = std::max<long>(0, (opt.n_iterations - opt.burn_in) / opt.thin);
    SVGibbsResult res;
    res.theta_chain.samples.resize(n_retained, 3);
    res.theta_chain.log_weights.resize(n_retained);
    res.x_chain.samples.resize(n_retained, y.size());
    res.x_chain.log_weights.resize(n_retained);

    using clock = std::chrono::steady_clock;
    clock::time_point t0 = clock::now();
    long row = 0;
    for (long n = 1; n <= opt.n_iterations; ++n) {
        if (n == opt.burn_in + 1) t0 = clock::now();

        // theta | y, x
        SVThetaConditional th_model(y, x_st.x.theta);
        th_st.invalidate();
        const StepInfo ith = sampler_step(th_st, th_model, cfg.theta_block, rng);

        // x | y, theta
        const SVParams params = sv_inverse(th_st.x.theta);
        SVXConditional x_model(y, params);
        x_st.invalidate();
        const StepInfo ix = sampler_step(x_st, x_model, cfg.x_block, rng);

        if (n > opt.burn_in && (n - opt.burn_in) % opt.thin == 0 && row < n_retained) {
            res.theta_chain.samples(row, 0) = params.beta;
            res.theta_chain.samples(row, 1) = params.sigma;
            res.theta_chain.samples(row, 2) = params.phi;
            res.x_chain.samples.row(row) = x_st.x.theta.transpose();
            const double lw = ith.log_weight + ix.log_weight;
            res.theta_chain.log_weights[row] = lw;
            res.x_chain.log_weights[row] = lw;
            res.theta_chain.iters.push_back(n);
            res.x_chain.iters.push_back(n);
            res.theta_chain.accepted.push_back(ith.pos_accepted ? 1 : 0);
            res.x_chain.accepted.push_back(ix.pos_accepted ? 1 : 0);
            ++row;
        }
    }
    const double wt = opt.n_iterations > opt.burn_in
                          ? std::chrono::duration<double>(clock::now() - t0).count()
                          : 0.0;
    res.theta_chain.wall_time = wt;
    res.x_chain.wall_time = wt;
    res.theta_chain.accept_pos =
        th_st.n_iters > 0 ? static_cast<double>(th_st.n_pos_acc) / th_st.n_iters : 0.0;
    res.theta_chain.accept_mom =
        th_st.n_iters > 0 ? static_cast<double>(th_st.n_mom_acc) / th_st.n_iters : 0.0;
    res.x_chain.accept_pos =
        x_st.n_iters > 0 ? static_cast<double>(x_st.n_pos_acc) / x_st.n_iters : 0.0;
    res.x_chain.accept_mom =
        x_st.n_iters > 0 ? static_cast<double>(x_st.n_mom_acc) / x_st.n_iters : 0.0;
    return res;
}

}  // namespace mmhmc
