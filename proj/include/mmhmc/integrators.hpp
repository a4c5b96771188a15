#pragma once

#include "mmhmc/core.hpp"

#include <functional>
#include <optional>
#include <ostream>
#include <vector>

namespace mmhmc {

enum class Family { verlet, two_stage, three_stage, four_stage };

const char* family_name(Family f);

// Palindromic kick/drift splitting schedule. One step of the r-stage scheme
// performs r position drifts; kick fractions and drift fractions each sum
// to 1. Parameters live in (0, 1/2).
struct SplittingScheme {
    Family family = Family::verlet;
    double a = 0.0;   // drift coefficient (three-/four-stage)
    double b1 = 0.0;  // kick coefficient b (two-/three-stage), b1 (four-stage)
    double b2 = 0.0;  // four-stage only
    std::string name = "verlet";

    static SplittingScheme verlet();
    static SplittingScheme two_stage(double b);
    static SplittingScheme three_stage(double a, double b);
    static SplittingScheme four_stage(double a, double b1, double b2);

    int stages() const;  // drifts per step: 1, 2, 3, 4

    // Execution-order fractions of h. kicks() has stages()+1 entries,
    // drifts() has stages(); both palindromic.
    std::vector<double> kicks() const;
    std::vector<double> drifts() const;

    // Time advanced by the first drift: h (Verlet), h/2 (two-stage),
    // a*h (three-/four-stage). This is the stencil spacing epsilon used by
    // the numeric modified Hamiltonians.
    double stage_epsilon(double h) const;
};

// Coefficients of the 4th/6th order modified Hamiltonian expansions.
// c_ij multiply analytical derivatives, k_ij the time-derivative form,
// gamma_i the order-h^4 Poisson-bracket terms. Relations:
//   k21=c21  k22=c22  k41=c41  k42=3c41+c42  k43=c41+c44  k44=3c41+c42+c43
//   g1=c41   g2=(c44-c42)/3   g3=c43/2   g4=c44/2
struct ShadowCoefficients {
    double c21 = 0, c22 = 0, c41 = 0, c42 = 0, c43 = 0, c44 = 0;
    double k21 = 0, k22 = 0, k41 = 0, k42 = 0, k43 = 0, k44 = 0;
    double g1 = 0, g2 = 0, g3 = 0, g4 = 0;
    double alpha = 0, beta = 0;  // aliases of c21, c22
};

// Closed-form coefficient polynomials per family. The coefficients multiply
// powers of the scheme's own step size; the Verlet constants already absorb
// the factor-4 (and 16) rescaling relative to the two-stage b=1/4 values.
ShadowCoefficients stage_coefficients(const SplittingScheme& scheme);

// Called once per stage with the post-drift position and its gradient.
using StageRecorder = std::function<void(const Vector& theta, const Vector& grad)>;

struct TrajectoryResult {
    PhasePoint x;
    double potential = 0.0;  // U at final position
    Vector gradient;         // U_theta at final position
};

// Applies L palindromic steps of the scheme. grad0, when given, must be the
// gradient at x0.theta (saves one model call). Model failures propagate as
// EvalError; the caller treats them as a rejected trajectory.
TrajectoryResult integrate(const SplittingScheme& scheme, const TargetModel& model,
                           const MassSpec& mass, const PhasePoint& x0, double h, int L,
                           const StageRecorder& recorder = nullptr,
                           const Vector* grad0 = nullptr);

// Error metric for sampling with the 4th order modified Hamiltonian:
// E = sqrt(g1^2 + g2^2 + g3^2 + g4^2).
double error_metric_E(const ShadowCoefficients& c);

// Gaussian-target variant. For quadratic potentials the one-step error in
// the 4th order modified Hamiltonian reduces to a single Poisson bracket
// with weight g4 - g3, so the metric is |g3 - g4|.
double error_metric_EG(const ShadowCoefficients& c);

// E_HMC = alpha^2 + beta^2, the truncation metric behind the two-stage ME
// integrator for sampling with the true Hamiltonian.
double error_metric_E_hmc(const ShadowCoefficients& c);

enum class RhoTarget { modified, true_hamiltonian };

// Upper bound rho(h, b) on the expected (modified-)energy error of the
// two-stage family; dimensionless step size h. Returns +inf past a pole of
// the denominator so max-over-h searches stay ordered.
double rho_bound(double h, double b, RhoTarget target);

// max_{0<h<hbar} rho(h, b)
double rho_sup(double b, double hbar, RhoTarget target);

enum class DesignObjective { E, EG, rho_max };

struct DesignResult {
    SplittingScheme scheme;
    double objective_value = 0.0;
    bool converged = true;
};

// Re-derives integrator coefficients by derivative-free minimization:
// golden-section for one-parameter searches, Nelder-Mead with restarts for
// the two-/three-parameter families. rho_max is defined for the two-stage
// family only; hbar defaults to the number of stages.
DesignResult minimize_design_metric(DesignObjective objective, Family family,
                                    std::optional<double> hbar = std::nullopt,
                                    RhoTarget rho_target = RhoTarget::modified);

struct CatalogEntry {
    std::string name;
    SplittingScheme scheme;
};

// Pre-verified named coefficient sets; samplers resolve integrators here
// instead of re-running the optimizer.
const std::vector<CatalogEntry>& integrator_catalog();
std::optional<SplittingScheme> catalog_lookup(const std::string& name);
void catalog_csv(std::ostream& os);

}  // namespace mmhmc
