#include "mmhmc/shadow.hpp"

#include <cmath>

namespace mmhmc {

double shadow4_analytic(const PhasePoint& x, const TargetModel& model, const MassSpec& mass,
                        const ShadowCoefficients& c, double h, double potential,
                        const Vector& grad) {
    if (!model.has_hessian()) throw CapabilityError("shadow4_analytic: model lacks a Hessian");
    const double H = potential + kinetic_energy(x.p, mass);
    const Vector v = mass.apply_inv(x.p);
    Vector hv(x.dim());
    model.hessian_vec(x.theta, v, hv);
    const double pUp = v.dot(hv);
    const double gMg = mass.inv_quad(grad);
    return H + h * h * (c.c21 * pUp + c.c22 * gMg);
}

double shadow4_analytic(const PhasePoint& x, const TargetModel& model, const MassSpec& mass,
                        const ShadowCoefficients& c, double h) {
    Vector grad(x.dim());
    const double pot = model.eval(x.theta, grad);
    return shadow4_analytic(x, model, mass, c, h, pot, grad);
}

double shadow6_analytic(const PhasePoint& x, const TargetModel& model, const MassSpec& mass,
                        const ShadowCoefficients& c, double h, double potential,
                        const Vector& grad) {
    double H4 = shadow4_analytic(x, model, mass, c, h, potential, grad);
    const double h4 = h * h * h * h;
    const Vector v = mass.apply_inv(x.p);
    const Vector w = mass.apply_inv(grad);
    Vector hv(x.dim());

    // c43: U_th^T M^-1 U_thth M^-1 U_th
    model.hessian_vec(x.theta, w, hv);
    double acc = c.c43 * w.dot(hv);

    // c44: p^T M^-1 U_thth M^-1 U_thth M^-1 p
    model.hessian_vec(x.theta, v, hv);
    acc += c.c44 * mass.inv_quad(hv);

    if (!model.is_quadratic()) {
        if (!model.has_third() || !model.has_fourth())
            throw CapabilityError(
                "shadow6_analytic: non-quadratic model lacks third/fourth derivative contractions");
        acc += c.c41 * model.fourth_quad(x.theta, v);
        Vector tv(x.dim());
        model.third_vec(x.theta, v, tv);
        acc += c.c42 * w.dot(tv);
    }
    return H4 + h4 * acc;
}

double shadow6_analytic(const PhasePoint& x, const TargetModel& model, const MassSpec& mass,
                        const ShadowCoefficients& c, double h) {
    Vector grad(x.dim());
    const double pot = model.eval(x.theta, grad);
    return shadow6_analytic(x, model, mass, c, h, pot, grad);
}

std::vector<Vector> stage_gradients(const SplittingScheme& scheme, const TargetModel& model,
                                    const MassSpec& mass, const Vector& theta0, const Vector& p0,
                                    const Vector& grad0, double h, int k) {
    const auto kick = scheme.kicks();
    const auto drift = scheme.drifts();
    const int n_stages = scheme.stages();

    Vector theta = theta0;
    Vector p = p0;
    Vector grad = grad0;
    std::vector<Vector> out;
    out.reserve(static_cast<std::size_t>(k));

    int stage = 0;
    double kick_frac = kick[0];
    for (int i = 0; i < k; ++i) {
        p.noalias() -= (kick_frac * h) * grad;
        theta.noalias() += (drift[stage] * h) * mass.apply_inv(p);
        model.eval(theta, grad);
        out.push_back(grad);
        ++stage;
        if (stage == n_stages) {
            stage = 0;
            kick_frac = kick[n_stages] + kick[0];  // merged boundary kick
        } else {
            kick_frac = kick[stage];
        }
    }
    return out;
}

GradientStencil make_stencil(const SplittingScheme& scheme, const TargetModel& model,
                             const MassSpec& mass, const PhasePoint& x, const Vector& grad0,
                             double h, int k) {
    GradientStencil st;
    st.k = k;
    st.h = h;
    st.epsilon = scheme.stage_epsilon(h);
    st.fwd = stage_gradients(scheme, model, mass, x.theta, x.p, grad0, h, k);
    st.bwd = stage_gradients(scheme, model, mass, x.theta, -x.p, grad0, h, k);
    return st;
}

StencilDerivatives stencil_time_derivatives(const GradientStencil& stencil, const Vector& grad,
                                            double h, int order) {
    if (order != 4 && order != 6)
        throw ContractError("stencil_time_derivatives: order must be 4 or 6");
    if (!stencil.complete(order))
        throw StencilError("stencil_time_derivatives: incomplete gradient stencil");
    const double eps = stencil.epsilon;
    StencilDerivatives d;
    if (order == 4) {
        d.p1 = (h / (2.0 * eps)) * (stencil.fwd[0] - stencil.bwd[0]);
        return d;
    }
    const Vector& gp1 = stencil.fwd[0];
    const Vector& gp2 = stencil.fwd[1];
    const Vector& gm1 = stencil.bwd[0];
    const Vector& gm2 = stencil.bwd[1];
    // The first derivative keeps the second-order stencil at order 6 as
    // well: along a symmetric splitting trajectory it is the momentum-
    // compatible derivative U_thth M^-1 p that the k-coefficients were
    // derived against (exact on quadratic potentials), while higher-order
    // stencils converge to the path derivative, which differs at O(h^2)
    // and would cap the shadow at 4th-order conservation.
    d.p1 = (h / (2.0 * eps)) * (gp1 - gm1);
    d.p2 = (h * h / (eps * eps)) * (gm1 - 2.0 * grad + gp1);
    d.p3 = (h * h * h / (2.0 * eps * eps * eps)) * (-gm2 + 2.0 * gm1 - 2.0 * gp1 + gp2);
    return d;
}

double shadow_numeric(const PhasePoint& x, const TargetModel& model, const MassSpec& mass,
                      const ShadowCoefficients& c, double h, int order,
                      const GradientStencil& stencil, double potential, const Vector& grad) {
    const StencilDerivatives d = stencil_time_derivatives(stencil, grad, h, order);
    const double H = potential + kinetic_energy(x.p, mass);
    const double gMg = mass.inv_quad(grad);

    if (order == 4)
        return H + h * c.k21 * mass.inv_bilin(x.p, d.p1) + h * h * c.k22 * gMg;

    double val = H + h * c.k21 * mass.inv_bilin(x.p, d.p1) + h * h * c.k22 * gMg;
    val += h * c.k41 * mass.inv_bilin(x.p, d.p3);
    val += h * h * c.k42 * mass.inv_bilin(grad, d.p2);
    val += h * h * c.k43 * mass.inv_quad(d.p1);
    if (c.k44 != 0.0) {
        if (!model.has_hessian())
            throw CapabilityError("shadow_numeric: order-6 k44 term requires a Hessian");
        const Vector w = mass.apply_inv(grad);
        Vector hv(x.dim());
        model.hessian_vec(x.theta, w, hv);
        val += h * h * h * h * c.k44 * w.dot(hv);
    }
    return val;
}

double importance_weight(const PhasePoint& x, const TargetModel& model, const MassSpec& mass,
                         double shadow_value) {
    return std::exp(importance_log_weight(shadow_value, true_hamiltonian(x, model, mass)));
}

}  // namespace mmhmc
