#include "mmhmc/shadow.hpp"
#include "mmhmc/models.hpp"
#include "test_util.hpp"

#include <doctest.h>

using namespace mmhmc;

namespace {

const MassSpec kId = MassSpec::identity();

// max |G(x_t) - G(x_0)| along an L-step trajectory
template <typename Fn>
double trajectory_drift(const SplittingScheme& s, const TargetModel& m, const PhasePoint& x0,
                        double h, int steps, Fn&& value) {
    const double g0 = value(x0, h);
    PhasePoint x = x0;
    double worst = 0.0;
    for (int i = 0; i < steps; ++i) {
        x = integrate(s, m, kId, x, h, 1).x;
        worst = std::max(worst, std::abs(value(x, h) - g0));
    }
    return worst;
}

}  // namespace

TEST_CASE("shadow4 analytic") {
    const auto verlet = stage_coefficients(SplittingScheme::verlet());
    SUBCASE("reduces to U at a stationary point with zero momentum") {
        testing::CoshPotential model(2.0);
        PhasePoint x(Vector::Zero(1), Vector::Zero(1));
        CHECK(shadow4_analytic(x, model, kId, verlet, 0.3) == doctest::Approx(2.0));
    }
    SUBCASE("harmonic oscillator closed form") {
        const auto gauss = GaussianTarget::standard(1);
        Vector t(1), p(1);
        t << 0.8;
        p << -1.3;
        const double h = 0.21;
        const PhasePoint x(t, p);
        const double H = 0.5 * (t[0] * t[0] + p[0] * p[0]);
        CHECK(shadow4_analytic(x, gauss, kId, verlet, h) ==
              doctest::Approx(H + h * h * (p[0] * p[0] / 12.0 - t[0] * t[0] / 24.0))
                  .epsilon(1e-14));
    }
    SUBCASE("gap to H shrinks as h^2") {
        testing::CoshPotential model(1.0);
        Vector t(1), p(1);
        t << 0.6;
        p << 0.9;
        const PhasePoint x(t, p);
        const double H = true_hamiltonian(x, model, kId);
        std::vector<double> hs, gaps;
        for (double h = 0.02; h <= 0.3; h *= 1.7) {
            hs.push_back(h);
            gaps.push_back(std::abs(shadow4_analytic(x, model, kId, verlet, h) - H));
        }
        CHECK(testing::loglog_slope(hs, gaps) == doctest::Approx(2.0).epsilon(0.025));
    }
    SUBCASE("capability error without a Hessian") {
        struct GradOnly final : TargetModel {
            int dim() const override { return 1; }
            double potential(const Vector& th) const override { return th[0] * th[0]; }
            void gradient(const Vector& th, Vector& g) const override {
                g.resize(1);
                g[0] = 2.0 * th[0];
            }
        } model;
        PhasePoint x(Vector::Ones(1), Vector::Ones(1));
        CHECK_THROWS_AS(shadow4_analytic(x, model, kId, verlet, 0.1), CapabilityError);
    }
}

TEST_CASE("shadow6 analytic") {
    const auto verlet = stage_coefficients(SplittingScheme::verlet());
    SUBCASE("quadratic path matches the printed Gaussian form") {
        const auto gauss = GaussianTarget::standard(1);
        Vector t(1), p(1);
        t << -0.5;
        p << 1.1;
        const double h = 0.17;
        const PhasePoint x(t, p);
        const double h4 = shadow4_analytic(x, gauss, kId, verlet, h);
        const double expected =
            h4 + std::pow(h, 4) * (verlet.c43 * t[0] * t[0] + verlet.c44 * p[0] * p[0]);
        CHECK(shadow6_analytic(x, gauss, kId, verlet, h) ==
              doctest::Approx(expected).epsilon(1e-14));
    }
    SUBCASE("all corrections vanish with p = 0 and zero gradient") {
        testing::CoshPotential model(3.0);
        PhasePoint x(Vector::Zero(1), Vector::Zero(1));
        CHECK(shadow6_analytic(x, model, kId, verlet, 0.4) == doctest::Approx(3.0));
    }
    SUBCASE("conservation ordering and drift slopes on the harmonic oscillator") {
        const auto gauss = GaussianTarget::standard(1);
        const auto scheme = SplittingScheme::verlet();
        Vector t(1), p(1);
        t << 1.0;
        p << 0.5;
        const PhasePoint x0(t, p);
        auto drift_of = [&](auto value, double h, int steps) {
            return trajectory_drift(scheme, gauss, x0, h, steps, value);
        };
        auto trueH = [&](const PhasePoint& x, double) { return true_hamiltonian(x, gauss, kId); };
        auto h4 = [&](const PhasePoint& x, double h) {
            return shadow4_analytic(x, gauss, kId, verlet, h);
        };
        auto h6 = [&](const PhasePoint& x, double h) {
            return shadow6_analytic(x, gauss, kId, verlet, h);
        };
        // ordering at h = 0.1 over a long trajectory
        const double dH = drift_of(trueH, 0.1, 1000);
        const double d4 = drift_of(h4, 0.1, 1000);
        const double d6 = drift_of(h6, 0.1, 1000);
        CHECK(d4 < dH);
        CHECK(d6 < d4);
        // drift over fixed time T scales as h^2 / h^4 / h^6
        std::vector<double> hs, e2, e4, e6;
        for (double h : {0.05, 0.08, 0.12, 0.2}) {
            const int steps = static_cast<int>(std::round(20.0 / h));
            hs.push_back(h);
            e2.push_back(drift_of(trueH, h, steps));
            e4.push_back(drift_of(h4, h, steps));
            e6.push_back(drift_of(h6, h, steps));
        }
        CHECK(testing::loglog_slope(hs, e2) == doctest::Approx(2.0).epsilon(0.1));
        CHECK(testing::loglog_slope(hs, e4) == doctest::Approx(4.0).epsilon(0.075));
        CHECK(testing::loglog_slope(hs, e6) == doctest::Approx(6.0).epsilon(0.084));
    }
    SUBCASE("one-step error of the 4th order shadow scales as h^5") {
        testing::CoshPotential model(1.0);
        const auto scheme = SplittingScheme::verlet();
        const auto c = stage_coefficients(scheme);
        Vector t(1), p(1);
        t << 0.7;
        p << 0.4;
        const PhasePoint x0(t, p);
        std::vector<double> hs, errs;
        for (double h : {0.05, 0.1, 0.2, 0.4}) {
            const auto step = integrate(scheme, model, kId, x0, h, 1);
            hs.push_back(h);
            errs.push_back(std::abs(shadow4_analytic(step.x, model, kId, c, h) -
                                    shadow4_analytic(x0, model, kId, c, h)));
        }
        CHECK(testing::loglog_slope(hs, errs) == doctest::Approx(5.0).epsilon(0.06));
    }
    SUBCASE("non-quadratic model uses third/fourth contractions") {
        testing::CoshPotential model(1.0);
        const auto c = stage_coefficients(SplittingScheme::two_stage(0.23));
        Vector t(1), p(1);
        t << 0.4;
        p << -0.7;
        const double h = 0.2;
        const PhasePoint x(t, p);
        // hand-build the four h^4 terms for the 1-d cosh potential
        const double u1 = std::sinh(t[0]), u2 = std::cosh(t[0]);
        const double u3 = u1, u4 = u2;
        const double expect =
            shadow4_analytic(x, model, kId, c, h) +
            std::pow(h, 4) * (c.c41 * u4 * std::pow(p[0], 4) + c.c42 * u1 * u3 * p[0] * p[0] +
                              c.c43 * u1 * u2 * u1 + c.c44 * p[0] * u2 * u2 * p[0]);
        CHECK(shadow6_analytic(x, model, kId, c, h) == doctest::Approx(expect).epsilon(1e-14));
    }
}

TEST_CASE("gradient stencils") {
    const auto scheme = SplittingScheme::verlet();
    SUBCASE("stencil is symmetric for zero momentum") {
        testing::CoshPotential model(1.0);
        Vector t(1);
        t << 0.9;
        Vector g(1);
        model.gradient(t, g);
        const auto st = make_stencil(scheme, model, kId, PhasePoint(t, Vector::Zero(1)), g, 0.1, 1);
        CHECK(st.fwd[0][0] == doctest::Approx(st.bwd[0][0]).epsilon(1e-14));
        const auto d = stencil_time_derivatives(st, g, 0.1, 4);
        CHECK(d.p1[0] == doctest::Approx(0.0));
    }
    SUBCASE("epsilon per family") {
        CHECK(SplittingScheme::verlet().stage_epsilon(0.2) == doctest::Approx(0.2));
        CHECK(SplittingScheme::two_stage(0.23).stage_epsilon(0.2) == doctest::Approx(0.1));
        CHECK(SplittingScheme::three_stage(0.35, 0.18).stage_epsilon(0.2) ==
              doctest::Approx(0.07));
        CHECK(SplittingScheme::four_stage(0.08, 0.06, 0.21).stage_epsilon(0.2) ==
              doctest::Approx(0.016));
    }
    SUBCASE("incomplete stencil raises") {
        const auto gauss = GaussianTarget::standard(1);
        Vector t(1), p(1), g(1);
        t << 0.2;
        p << 0.4;
        gauss.gradient(t, g);
        const PhasePoint x(t, p);
        const auto st = make_stencil(scheme, gauss, kId, x, g, 0.1, 1);
        const auto c = stage_coefficients(scheme);
        CHECK_THROWS_AS(shadow_numeric(x, gauss, kId, c, 0.1, 6, st, gauss.potential(t), g),
                        StencilError);
    }
}

TEST_CASE("shadow numeric") {
    SUBCASE("order 4 equals analytic for quadratic potentials") {
        const auto gauss = GaussianTarget::standard(1);
        Rng rng(17);
        for (const auto& name : {"verlet", "m-bcss", "m-me3", "m-me4"}) {
            const auto scheme = *catalog_lookup(name);
            const auto c = stage_coefficients(scheme);
            for (int i = 0; i < 10; ++i) {
                const PhasePoint x(testing::random_vector(1, rng), testing::random_vector(1, rng));
                Vector g(1);
                const double pot = gauss.eval(x.theta, g);
                const auto st = make_stencil(scheme, gauss, kId, x, g, 0.15, 1);
                const double num = shadow_numeric(x, gauss, kId, c, 0.15, 4, st, pot, g);
                const double an = shadow4_analytic(x, gauss, kId, c, 0.15, pot, g);
                CHECK(num == doctest::Approx(an).epsilon(1e-12));
            }
        }
    }
    SUBCASE("order 6 numeric is a valid 6th-order shadow (verlet)") {
        const auto gauss = GaussianTarget::standard(1);
        const auto scheme = SplittingScheme::verlet();
        const auto c = stage_coefficients(scheme);
        Vector t(1), p(1);
        t << 1.0;
        p << 0.5;
        const PhasePoint x0(t, p);
        auto value = [&](const PhasePoint& x, double h) {
            Vector g(1);
            const double pot = gauss.eval(x.theta, g);
            const auto st = make_stencil(scheme, gauss, kId, x, g, h, 2);
            return shadow_numeric(x, gauss, kId, c, h, 6, st, pot, g);
        };
        std::vector<double> hs, drifts;
        for (double h : {0.05, 0.08, 0.12, 0.2}) {
            const int steps = static_cast<int>(std::round(20.0 / h));
            hs.push_back(h);
            drifts.push_back(trajectory_drift(scheme, gauss, x0, h, steps, value));
        }
        CHECK(testing::loglog_slope(hs, drifts) == doctest::Approx(6.0).epsilon(0.084));
    }
    SUBCASE("order 4 numeric drift slope on a non-quadratic model") {
        testing::CoshPotential model(1.0);
        const auto scheme = SplittingScheme::two_stage(0.23);
        const auto c = stage_coefficients(scheme);
        Vector t(1), p(1);
        t << 0.8;
        p << 0.3;
        const PhasePoint x0(t, p);
        auto value = [&](const PhasePoint& x, double h) {
            Vector g(1);
            const double pot = model.eval(x.theta, g);
            const auto st = make_stencil(scheme, model, kId, x, g, h, 1);
            return shadow_numeric(x, model, kId, c, h, 4, st, pot, g);
        };
        std::vector<double> hs, drifts;
        for (double h : {0.1, 0.16, 0.24, 0.4}) {
            const int steps = static_cast<int>(std::round(40.0 / h));
            hs.push_back(h);
            drifts.push_back(trajectory_drift(scheme, model, x0, h, steps, value));
        }
        CHECK(testing::loglog_slope(hs, drifts) == doctest::Approx(4.0).epsilon(0.075));
    }
    SUBCASE("two-stage order 6 needs a Hessian for the k44 term") {
        struct GradOnly final : TargetModel {
            int dim() const override { return 1; }
            double potential(const Vector& th) const override { return std::cosh(th[0]); }
            void gradient(const Vector& th, Vector& g) const override {
                g.resize(1);
                g[0] = std::sinh(th[0]);
            }
        } model;
        const auto scheme = SplittingScheme::two_stage(0.23);
        const auto c = stage_coefficients(scheme);
        Vector t(1), p(1), g(1);
        t << 0.3;
        p << 0.2;
        model.gradient(t, g);
        const PhasePoint x(t, p);
        const auto st = make_stencil(scheme, model, kId, x, g, 0.1, 2);
        CHECK_THROWS_AS(shadow_numeric(x, model, kId, c, 0.1, 6, st, model.potential(t), g),
                        CapabilityError);
    }
}

TEST_CASE("importance weights") {
    const auto gauss = GaussianTarget::standard(2);
    Rng rng(23);
    const PhasePoint x(testing::random_vector(2, rng), testing::random_vector(2, rng));
    const double H = true_hamiltonian(x, gauss, kId);
    SUBCASE("unit weight when shadow equals H") {
        CHECK(importance_weight(x, gauss, kId, H) == doctest::Approx(1.0));
    }
    SUBCASE("direct exponentiation") {
        CHECK(importance_weight(x, gauss, kId, H + 0.1) == doctest::Approx(std::exp(0.1)));
        CHECK(importance_log_weight(H + 0.1, H) == doctest::Approx(0.1));
    }
    SUBCASE("weights approach one as h -> 0") {
        const auto c = stage_coefficients(SplittingScheme::verlet());
        double prev = 1e9;
        for (double h : {0.2, 0.1, 0.05, 0.025}) {
            const double lw = importance_log_weight(shadow4_analytic(x, gauss, kId, c, h), H);
            CHECK(std::abs(lw) < prev);
            prev = std::abs(lw);
        }
        CHECK(prev < 1e-3);
    }
    SUBCASE("adding a constant to U cancels in the weight") {
        const auto c = stage_coefficients(SplittingScheme::verlet());
        struct Shifted final : TargetModel {
            const TargetModel* base = nullptr;
            double off = 0.0;
            int dim() const override { return base->dim(); }
            double potential(const Vector& th) const override {
                return base->potential(th) + off;
            }
            void gradient(const Vector& th, Vector& g) const override { base->gradient(th, g); }
            double eval(const Vector& th, Vector& g) const override {
                return base->eval(th, g) + off;
            }
            bool has_hessian() const override { return true; }
            bool is_quadratic() const override { return true; }
            void hessian_vec(const Vector& th, const Vector& v, Vector& o) const override {
                base->hessian_vec(th, v, o);
            }
        } shifted;
        shifted.base = &gauss;
        shifted.off = 37.5;
        const double lw0 = importance_log_weight(shadow4_analytic(x, gauss, kId, c, 0.2),
                                                 true_hamiltonian(x, gauss, kId));
        const double lw1 = importance_log_weight(shadow4_analytic(x, shifted, kId, c, 0.2),
                                                 true_hamiltonian(x, shifted, kId));
        CHECK(lw0 == doctest::Approx(lw1).epsilon(1e-12));
    }
}
