#pragma once

#include "mmhmc/core.hpp"
#include "mmhmc/integrators.hpp"

#include <vector>

namespace mmhmc {

struct StencilError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// 4th order modified Hamiltonian, analytical-derivative form:
// H + h^2 c21 p^T M^-1 U_thth M^-1 p + h^2 c22 U_th^T M^-1 U_th
double shadow4_analytic(const PhasePoint& x, const TargetModel& model, const MassSpec& mass,
                        const ShadowCoefficients& c, double h);
double shadow4_analytic(const PhasePoint& x, const TargetModel& model, const MassSpec& mass,
                        const ShadowCoefficients& c, double h, double potential,
                        const Vector& grad);

// 6th order analytical form. Quadratic potentials use only the c43/c44
// terms; general models must supply third/fourth derivative contractions.
double shadow6_analytic(const PhasePoint& x, const TargetModel& model, const MassSpec& mass,
                        const ShadowCoefficients& c, double h);
double shadow6_analytic(const PhasePoint& x, const TargetModel& model, const MassSpec& mass,
                        const ShadowCoefficients& c, double h, double potential,
                        const Vector& grad);

// Gradients of U at stage offsets -k..-1 and +1..+k of the trajectory
// through a phase point; epsilon is the stage time (h Verlet, h/2
// two-stage, a*h three-/four-stage).
struct GradientStencil {
    int k = 0;
    double epsilon = 0.0;
    double h = 0.0;
    std::vector<Vector> fwd;  // +1..+k
    std::vector<Vector> bwd;  // -1..-k

    bool complete(int order) const {
        const int need = order >= 6 ? 2 : 1;
        return k >= need && static_cast<int>(fwd.size()) >= need &&
               static_cast<int>(bwd.size()) >= need;
    }
    // Stencil of the momentum-flipped state: forward and backward swap.
    void flip() { std::swap(fwd, bwd); }
};

// Gradients at the first k stage points forward from (theta0, p0).
// grad0 must be U_th(theta0). The terminal momentum kick of the last stage
// is skipped; only positions and their gradients are produced.
std::vector<Vector> stage_gradients(const SplittingScheme& scheme, const TargetModel& model,
                                    const MassSpec& mass, const Vector& theta0, const Vector& p0,
                                    const Vector& grad0, double h, int k);

// Builds the full +/-k stencil by integrating k stages forward and, with
// flipped momentum, k stages backward. Never mutates chain state.
GradientStencil make_stencil(const SplittingScheme& scheme, const TargetModel& model,
                             const MassSpec& mass, const PhasePoint& x, const Vector& grad0,
                             double h, int k);

// Scaled time derivatives of the gradient, P_i = U^(i) h^i. Order 4 fills
// p1 only (second-order central difference); order 6 uses the five-point
// fourth-order first derivative and fills p1, p2, p3.
struct StencilDerivatives {
    Vector p1, p2, p3;
};
StencilDerivatives stencil_time_derivatives(const GradientStencil& stencil, const Vector& grad,
                                            double h, int order);

// Modified Hamiltonian from numerical time derivatives of the gradient.
// Order 4 uses the second-order central difference; order 6 the
// fourth-order five-point first derivative plus second/third derivative
// stencils. The k22 term is always computed exactly from grad. The k44
// term (order 6) needs a Hessian; it vanishes for Verlet.
double shadow_numeric(const PhasePoint& x, const TargetModel& model, const MassSpec& mass,
                      const ShadowCoefficients& c, double h, int order,
                      const GradientStencil& stencil, double potential, const Vector& grad);

// w = exp(H~ - H), kept as a log-weight by callers.
inline double importance_log_weight(double shadow_value, double true_h) {
    return shadow_value - true_h;
}
double importance_weight(const PhasePoint& x, const TargetModel& model, const MassSpec& mass,
                         double shadow_value);

}  // namespace mmhmc
