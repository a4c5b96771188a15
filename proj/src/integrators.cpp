#include "mmhmc/integrators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace mmhmc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_param(double v, const char* what) {
    if (!(v > 0.0 && v < 0.5))
        throw ContractError(std::string(what) + " must lie in (0, 1/2)");
}

}  // namespace

const char* family_name(Family f) {
    switch (f) {
        case Family::verlet: return "verlet";
        case Family::two_stage: return "two_stage";
        case Family::three_stage: return "three_stage";
        case Family::four_stage: return "four_stage";
    }
    return "?";
}

SplittingScheme SplittingScheme::verlet() { return SplittingScheme{}; }

SplittingScheme SplittingScheme::two_stage(double b) {
    check_param(b, "two-stage b");
    SplittingScheme s;
    s.family = Family::two_stage;
    s.b1 = b;
    s.name = "two_stage";
    return s;
}

SplittingScheme SplittingScheme::three_stage(double a, double b) {
    check_param(a, "three-stage a");
    check_param(b, "three-stage b");
    SplittingScheme s;
    s.family = Family::three_stage;
    s.a = a;
    s.b1 = b;
    s.name = "three_stage";
    return s;
}

SplittingScheme SplittingScheme::four_stage(double a, double b1, double b2) {
    check_param(a, "four-stage a");
    check_param(b1, "four-stage b1");
    check_param(b2, "four-stage b2");
    if (!(1.0 - 2.0 * b1 - 2.0 * b2 > 0.0))
        throw ContractError("four-stage: central kick 1-2b1-2b2 must be positive");
    SplittingScheme s;
    s.family = Family::four_stage;
    s.a = a;
    s.b1 = b1;
    s.b2 = b2;
    s.name = "four_stage";
    return s;
}

int SplittingScheme::stages() const {
    switch (family) {
        case Family::verlet: return 1;
        case Family::two_stage: return 2;
        case Family::three_stage: return 3;
        case Family::four_stage: return 4;
    }
    return 0;
}

std::vector<double> SplittingScheme::kicks() const {
    switch (family) {
        case Family::verlet: return {0.5, 0.5};
        case Family::two_stage: return {b1, 1.0 - 2.0 * b1, b1};
        case Family::three_stage: return {b1, 0.5 - b1, 0.5 - b1, b1};
        case Family::four_stage: return {b1, b2, 1.0 - 2.0 * b1 - 2.0 * b2, b2, b1};
    }
    return {};
}

std::vector<double> SplittingScheme::drifts() const {
    switch (family) {
        case Family::verlet: return {1.0};
        case Family::two_stage: return {0.5, 0.5};
        case Family::three_stage: return {a, 1.0 - 2.0 * a, a};
        case Family::four_stage: return {a, 0.5 - a, 0.5 - a, a};
    }
    return {};
}

double SplittingScheme::stage_epsilon(double h) const {
    switch (family) {
        case Family::verlet: return h;
        case Family::two_stage: return 0.5 * h;
        default: return a * h;
    }
}

namespace {

void derive_k_and_gamma(ShadowCoefficients& c) {
    c.k21 = c.c21;
    c.k22 = c.c22;
    c.k41 = c.c41;
    c.k42 = 3.0 * c.c41 + c.c42;
    c.k43 = c.c41 + c.c44;
    c.k44 = 3.0 * c.c41 + c.c42 + c.c43;
    c.g1 = c.c41;
    c.g2 = (c.c44 - c.c42) / 3.0;
    c.g3 = 0.5 * c.c43;
    c.g4 = 0.5 * c.c44;
    c.alpha = c.c21;
    c.beta = c.c22;
}

}  // namespace

ShadowCoefficients stage_coefficients(const SplittingScheme& s) {
    ShadowCoefficients c;
    switch (s.family) {
        case Family::verlet:
            c.c21 = 1.0 / 12.0;
            c.c22 = -1.0 / 24.0;
            c.c41 = -1.0 / 720.0;
            c.c42 = 1.0 / 120.0;
            c.c43 = -1.0 / 240.0;
            c.c44 = 1.0 / 60.0;
            break;
        case Family::two_stage: {
            const double b = s.b1;
            check_param(b, "two-stage b");
            c.c21 = (6.0 * b - 1.0) / 24.0;
            c.c22 = (6.0 * b * b - 6.0 * b + 1.0) / 12.0;
            c.c41 = (7.0 - 30.0 * b) / 5760.0;
            c.c42 = (-10.0 * b * b + 15.0 * b - 3.0) / 240.0;
            c.c43 = (-30.0 * b * b * b + 35.0 * b * b - 15.0 * b + 2.0) / 120.0;
            c.c44 = (20.0 * b * b - 1.0) / 240.0;
            break;
        }
        case Family::three_stage: {
            const double a = s.a, b = s.b1;
            check_param(a, "three-stage a");
            check_param(b, "three-stage b");
            c.c21 = (1.0 - 6.0 * a * (1.0 - a) * (1.0 - 2.0 * b)) / 12.0;
            c.c22 = (6.0 * a * (1.0 - 2.0 * b) * (1.0 - 2.0 * b) - 1.0) / 24.0;
            c.c41 = (1.0 + 2.0 * (a - 1.0) * a * (8.0 + 31.0 * (a - 1.0) * a) * (1.0 - 2.0 * b) -
                     4.0 * b) /
                    720.0;
            c.c42 = (6.0 * a * a * a * (1.0 - 2.0 * b) * (1.0 - 2.0 * b) -
                     a * a * (19.0 - 116.0 * b + 36.0 * b * b + 240.0 * b * b * b) +
                     a * (27.0 - 208.0 * b + 308.0 * b * b) - 48.0 * b * b + 48.0 * b - 7.0) /
                    240.0;
            c.c43 = (1.0 + 15.0 * a * (1.0 - 2.0 * b) *
                               (-1.0 + 2.0 * a * (2.0 - 3.0 * b + a * (4.0 * b - 2.0)))) /
                    180.0;
            c.c44 = (-1.0 + 20.0 * a * (1.0 - 2.0 * b) * (b + a * (1.0 + 6.0 * (b - 1.0) * b))) /
                    240.0;
            break;
        }
        case Family::four_stage: {
            const double a = s.a, b1 = s.b1, b2 = s.b2;
            check_param(a, "four-stage a");
            check_param(b1, "four-stage b1");
            check_param(b2, "four-stage b2");
            c.c21 = (6.0 * b1 * b1 - 6.0 * b1 + 1.0 +
                     6.0 * b2 * (1.0 - 2.0 * a) * (2.0 * b1 + b2 - 1.0)) /
                    12.0;
            c.c22 = (6.0 * (b1 + b2 * (1.0 - 2.0 * a) * (1.0 - 2.0 * a)) - 1.0) / 24.0;
            c.c41 = (7.0 + 60.0 * (8.0 * (a - 1.0) * (a - 1.0) * a * a - 1.0) * b1) / 5760.0;
            c.c42 = (1.0 - 12.0 * b1 + 40.0 * b1 * b1 - 24.0 * b1 * b1 * b1 +
                     4.0 * (1.0 - 2.0 * a) *
                         (a - 3.0 + (20.0 - 6.0 * a) * b1 + 6.0 * (3.0 + 2.0 * a) * b1 * b1) * b2 +
                     8.0 * (1.0 - 2.0 * a) * (5.0 + 9.0 * a * a + 6.0 * a * (b1 - 2.0) - 9.0 * b1) *
                         b2 * b2 -
                     24.0 * (1.0 - 2.0 * a) * (1.0 - 2.0 * a) * b2 * b2 * b2) /
                    96.0;
            c.c43 = (2.0 - 15.0 * b1 + 30.0 * b1 * b1 +
                     15.0 * (1.0 - 2.0 * a) * (1.0 - 2.0 * a) *
                         (4.0 * (1.0 + a) * b1 - 1.0 - 2.0 * a) * b2 +
                     30.0 * (1.0 - 2.0 * a) * (1.0 - 2.0 * a) * (1.0 - 2.0 * a) * b2 * b2) /
                    360.0;
            c.c44 = (2.0 - 30.0 * b1 * b1 * b1 +
                     5.0 * b1 * b1 * (7.0 - 6.0 * (4.0 * a * (1.0 + a) - 3.0) * b2) +
                     5.0 * (1.0 - 2.0 * a) * b2 *
                         ((7.0 - 6.0 * b2) * b2 - 3.0 + 2.0 * a * (6.0 * b2 * b2 - 1.0 - 3.0 * b2)) +
                     5.0 * b1 *
                         (2.0 * (1.0 - 2.0 * a) * b2 * (7.0 - 9.0 * b2 + 6.0 * a * (1.0 + b2)) -
                          3.0)) /
                    120.0;
            break;
        }
    }
    derive_k_and_gamma(c);
    return c;
}

TrajectoryResult integrate(const SplittingScheme& scheme, const TargetModel& model,
                           const MassSpec& mass, const PhasePoint& x0, double h, int L,
                           const StageRecorder& recorder, const Vector* grad0) {
    if (!(h > 0.0)) throw ContractError("integrate: h must be positive");
    if (L < 1) throw ContractError("integrate: L must be >= 1");
    if (x0.dim() != model.dim()) throw ContractError("integrate: dimension mismatch");

    const auto kick = scheme.kicks();
    const auto drift = scheme.drifts();
    const int n_stages = scheme.stages();

    Vector theta = x0.theta;
    Vector p = x0.p;
    Vector grad(theta.size());
    double pot;
    if (grad0 != nullptr) {
        grad = *grad0;
        pot = 0.0;  // re-evaluated at the first stage
    } else {
        pot = model.eval(theta, grad);
    }

    for (int step = 0; step < L; ++step) {
        // Boundary kicks of consecutive steps merge: the gradient at the
        // step's start is always the one evaluated at the previous stage.
        p.noalias() -= (kick[0] * h) * grad;
        for (int st = 0; st < n_stages; ++st) {
            theta.noalias() += (drift[st] * h) * mass.apply_inv(p);
            pot = model.eval(theta, grad);
            if (recorder) recorder(theta, grad);
            p.noalias() -= (kick[st + 1] * h) * grad;
        }
    }
    TrajectoryResult out;
    out.x = PhasePoint(std::move(theta), std::move(p));
    out.potential = pot;
    out.gradient = std::move(grad);
    return out;
}

double error_metric_E(const ShadowCoefficients& c) {
    return std::sqrt(c.g1 * c.g1 + c.g2 * c.g2 + c.g3 * c.g3 + c.g4 * c.g4);
}

double error_metric_EG(const ShadowCoefficients& c) { return std::abs(c.g3 - c.g4); }

double error_metric_E_hmc(const ShadowCoefficients& c) {
    return c.alpha * c.alpha + c.beta * c.beta;
}

double rho_bound(double h, double b, RhoTarget target) {
    if (!(b > 0.0 && b < 0.5)) throw ContractError("rho_bound: b must lie in (0, 1/2)");
    if (!(h > 0.0)) throw ContractError("rho_bound: h must be positive");
    const double h2 = h * h;
    if (target == RhoTarget::modified) {
        const double num_core =
            b * (12.0 + 4.0 * b * (6.0 * b - 5.0) + b * (1.0 + 4.0 * b * (3.0 * b - 2.0)) * h2) -
            2.0;
        const std::array<double, 5> den = {
            2.0 - b * h2,
            4.0 + (2.0 * b - 1.0) * h2,
            2.0 + b * (2.0 * b - 1.0) * h2,
            12.0 + (6.0 * b - 1.0) * h2,
            6.0 + (1.0 + 6.0 * (b - 1.0) * b) * h2,
        };
        double d = 4.0;
        for (double f : den) {
            if (f <= 0.0) return kInf;
            d *= f;
        }
        return std::pow(h, 8) * num_core * num_core / d;
    }
    const double num_core = b * b * (1.0 - 2.0 * b) * h2 + 4.0 * b * b - 6.0 * b + 1.0;
    const std::array<double, 3> den = {
        2.0 - b * h2,
        4.0 - (1.0 - 2.0 * b) * h2,
        2.0 - b * (1.0 - 2.0 * b) * h2,
    };
    double d = 2.0;
    for (double f : den) {
        if (f <= 0.0) return kInf;
        d *= f;
    }
    return h2 * h2 * num_core * num_core / d;
}

double rho_sup(double b, double hbar, RhoTarget target) {
    if (!(hbar > 0.0)) throw ContractError("rho_sup: hbar must be positive");
    // rho is increasing-then-possibly-singular in h on the stability range;
    // a dense scan with local parabolic refinement pins the supremum.
    constexpr int kGrid = 4096;
    double best = 0.0;
    double best_h = 0.0;
    for (int i = 1; i <= kGrid; ++i) {
        const double h = hbar * static_cast<double>(i) / kGrid;
        const double v = rho_bound(h, b, target);
        if (v == kInf) return kInf;
        if (v > best) {
            best = v;
            best_h = h;
        }
    }
    const double dh = hbar / kGrid;
    double lo = std::max(best_h - dh, dh * 0.5), hi = std::min(best_h + dh, hbar);
    for (int it = 0; it < 60; ++it) {
        const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (rho_bound(m1, b, target) < rho_bound(m2, b, target))
            lo = m1;
        else
            hi = m2;
    }
    return std::max(best, rho_bound(0.5 * (lo + hi), b, target));
}

namespace {

double golden_section(const std::function<double(double)>& f, double lo, double hi,
                      double xtol, int max_iter, bool* converged) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    int it = 0;
    while (std::abs(b - a) > xtol && it++ < max_iter) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    if (converged) *converged = std::abs(b - a) <= xtol;
    return 0.5 * (a + b);
}

struct NmResult {
    std::vector<double> x;
    double fx = kInf;
    bool converged = false;
};

NmResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                     std::vector<double> x0, double scale, int max_iter) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> pts(n + 1, x0);
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += scale;
    for (std::size_t i = 0; i <= n; ++i) fv[i] = f(pts[i]);

    auto order = [&]() {
        for (std::size_t i = 0; i <= n; ++i)
            for (std::size_t j = i + 1; j <= n; ++j)
                if (fv[j] < fv[i]) {
                    std::swap(fv[i], fv[j]);
                    std::swap(pts[i], pts[j]);
                }
    };

    NmResult res;
    for (int it = 0; it < max_iter; ++it) {
        order();
        if (std::abs(fv[n] - fv[0]) < 1e-16 * (1.0 + std::abs(fv[0]))) {
            res.converged = true;
            break;
        }
        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[i][j] / static_cast<double>(n);
        auto blend = [&](double t) {
            std::vector<double> x(n);
            for (std::size_t j = 0; j < n; ++j) x[j] = centroid[j] + t * (centroid[j] - pts[n][j]);
            return x;
        };
        auto xr = blend(1.0);
        double fr = f(xr);
        if (fr < fv[0]) {
            auto xe = blend(2.0);
            double fe = f(xe);
            if (fe < fr) {
                pts[n] = xe;
                fv[n] = fe;
            } else {
                pts[n] = xr;
                fv[n] = fr;
            }
        } else if (fr < fv[n - 1]) {
            pts[n] = xr;
            fv[n] = fr;
        } else {
            auto xc = blend(fr < fv[n] ? 0.5 : -0.5);
            double fc = f(xc);
            if (fc < std::min(fr, fv[n])) {
                pts[n] = xc;
                fv[n] = fc;
            } else {
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t j = 0; j < n; ++j)
                        pts[i][j] = pts[0][j] + 0.5 * (pts[i][j] - pts[0][j]);
                    fv[i] = f(pts[i]);
                }
            }
        }
    }
    order();
    res.x = pts[0];
    res.fx = fv[0];
    return res;
}

double eval_objective(DesignObjective obj, const SplittingScheme& s, double hbar,
                      RhoTarget rho_target) {
    if (obj == DesignObjective::rho_max) return rho_sup(s.b1, hbar, rho_target);
    const auto c = stage_coefficients(s);
    return obj == DesignObjective::E ? error_metric_E(c) : error_metric_EG(c);
}

}  // namespace

DesignResult minimize_design_metric(DesignObjective objective, Family family,
                                    std::optional<double> hbar_opt, RhoTarget rho_target) {
    if (family == Family::verlet)
        throw ContractError("minimize_design_metric: Verlet has no free parameters");
    if (objective == DesignObjective::rho_max && family != Family::two_stage)
        throw ContractError("minimize_design_metric: rho bound is available for the two-stage family only");

    const double lo = 1e-4, hi = 0.5 - 1e-4;
    DesignResult res;
    if (family == Family::two_stage) {
        const double hbar = hbar_opt.value_or(2.0);
        auto f = [&](double b) {
            return eval_objective(objective, SplittingScheme::two_stage(b), hbar, rho_target);
        };
        bool conv = false;
        const double b = golden_section(f, lo, hi, 1e-12, 400, &conv);
        res.scheme = SplittingScheme::two_stage(b);
        res.objective_value = f(b);
        res.converged = conv;
        return res;
    }

    const std::size_t nparam = family == Family::three_stage ? 2 : 3;
    auto make = [&](const std::vector<double>& v) {
        return family == Family::three_stage ? SplittingScheme::three_stage(v[0], v[1])
                                             : SplittingScheme::four_stage(v[0], v[1], v[2]);
    };
    auto f = [&](const std::vector<double>& v) {
        for (double x : v)
            if (!(x > lo && x < hi)) return kInf;
        if (family == Family::four_stage && !(1.0 - 2.0 * v[1] - 2.0 * v[2] > 0.0)) return kInf;
        return eval_objective(objective, make(v), 0.0, rho_target);
    };

    // deterministic stratified restarts over (0, 1/2)^k
    NmResult best;
    Rng rng(20240617u);
    std::uniform_real_distribution<double> ud(0.03, 0.47);
    for (int r = 0; r < 10; ++r) {
        std::vector<double> x0(nparam);
        for (auto& x : x0) x = ud(rng);
        if (!std::isfinite(f(x0))) continue;
        auto nm = nelder_mead(f, x0, 0.05, 4000);
        if (nm.fx < best.fx) best = nm;
    }
    if (best.x.empty()) throw ContractError("minimize_design_metric: no feasible start found");
    res.scheme = make(best.x);
    res.objective_value = best.fx;
    res.converged = best.converged;
    return res;
}

const std::vector<CatalogEntry>& integrator_catalog() {
    static const std::vector<CatalogEntry> cat = [] {
        std::vector<CatalogEntry> v;
        auto add = [&](const std::string& name, SplittingScheme s) {
            s.name = name;
            v.push_back({name, s});
        };
        add("verlet", SplittingScheme::verlet());
        add("bcss", SplittingScheme::two_stage(0.21178));
        add("me", SplittingScheme::two_stage(0.193183));
        add("m-bcss", SplittingScheme::two_stage(0.238016));
        add("m-me", SplittingScheme::two_stage(0.23061));
        add("m-me-g", SplittingScheme::two_stage(0.2309071));
        add("m-me3", SplittingScheme::three_stage(0.355423, 0.184569));
        add("m-me4", SplittingScheme::four_stage(0.0840641, 0.0602952, 0.216673));
        return v;
    }();
    return cat;
}

std::optional<SplittingScheme> catalog_lookup(const std::string& name) {
    for (const auto& e : integrator_catalog())
        if (e.name == name) return e.scheme;
    return std::nullopt;
}

void catalog_csv(std::ostream& os) {
    os << "name,family,a,b1,b2,c21,c22,c41,c42,c43,c44,k21,k22,k41,k42,k43,k44\n";
    char buf[512];
    for (const auto& e : integrator_catalog()) {
        const auto c = stage_coefficients(e.scheme);
        std::snprintf(buf, sizeof buf,
                      "%s,%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      e.name.c_str(), family_name(e.scheme.family), e.scheme.a, e.scheme.b1,
                      e.scheme.b2, c.c21, c.c22, c.c41, c.c42, c.c43, c.c44, c.k21, c.k22, c.k41,
                      c.k42, c.k43, c.k44);
        os << buf;
    }
}

}  // namespace mmhmc
