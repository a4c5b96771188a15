#pragma once

#include "mmhmc/core.hpp"

#include <memory>
#include <utility>

namespace mmhmc {

// N(0, Sigma) target: U = 1/2 theta^T Sigma^-1 theta.
class GaussianTarget final : public TargetModel {
  public:
    static GaussianTarget standard(int dim);
    static GaussianTarget diagonal_variances(Vector sigma2);
    static GaussianTarget dense_precision(Matrix precision);

    int dim() const override { return dim_; }
    double potential(const Vector& theta) const override;
    void gradient(const Vector& theta, Vector& grad) const override;
    double eval(const Vector& theta, Vector& grad) const override;
    bool has_hessian() const override { return true; }
    bool has_third() const override { return true; }
    bool has_fourth() const override { return true; }
    bool is_quadratic() const override { return true; }
    void hessian_vec(const Vector& theta, const Vector& v, Vector& out) const override;
    void third_vec(const Vector&, const Vector&, Vector& out) const override { out.setZero(dim_); }
    double fourth_quad(const Vector&, const Vector&) const override { return 0.0; }

    bool diagonal() const { return dense_.size() == 0; }
    const Matrix& precision_dense() const { return dense_; }
    const Vector& precision_diag() const { return diag_; }

  private:
    GaussianTarget() = default;
    int dim_ = 0;
    Matrix dense_;  // empty when diagonal
    Vector diag_;   // precision diagonal when diagonal() is true
};

// Precision sampled from Wishart(I_D, D) as A^T A with A standard normal.
// Above dense_limit the diagonal surrogate is returned instead: variances
// are the ascending eigenvalues of the dense target's covariance.
GaussianTarget generate_wishart_target(int dim, Rng& rng, int dense_limit = 100);

// 2-d banana-shaped posterior: y_k | theta ~ N(theta1 + theta2^2, sigma_y^2),
// theta_i ~ N(0, sigma_theta^2).
class BananaTarget final : public TargetModel {
  public:
    BananaTarget(Vector data, double sigma_y, double sigma_theta);

    int dim() const override { return 2; }
    double potential(const Vector& theta) const override;
    void gradient(const Vector& theta, Vector& grad) const override;
    double eval(const Vector& theta, Vector& grad) const override;
    bool has_hessian() const override { return true; }
    bool has_third() const override { return true; }
    bool has_fourth() const override { return true; }
    void hessian_vec(const Vector& theta, const Vector& v, Vector& out) const override;
    void third_vec(const Vector& theta, const Vector& v, Vector& out) const override;
    double fourth_quad(const Vector& theta, const Vector& v) const override;

    const Vector& data() const { return y_; }

  private:
    Vector y_;
    double sy2_, st2_;
};

Vector banana_simulate(int k, double mean, double sigma_y, Rng& rng);

// Bayesian logistic regression with design X (leading ones column), binary
// labels y and N(0, alpha I) prior. alpha = +inf drops the prior.
class BLRTarget final : public TargetModel {
  public:
    BLRTarget(Matrix design, Vector labels, double alpha);

    int dim() const override { return static_cast<int>(x_.cols()); }
    int n_data() const { return static_cast<int>(x_.rows()); }
    double potential(const Vector& theta) const override;
    void gradient(const Vector& theta, Vector& grad) const override;
    double eval(const Vector& theta, Vector& grad) const override;
    bool has_hessian() const override { return true; }
    bool has_third() const override { return true; }
    bool has_fourth() const override { return true; }
    void hessian_vec(const Vector& theta, const Vector& v, Vector& out) const override;
    void third_vec(const Vector& theta, const Vector& v, Vector& out) const override;
    double fourth_quad(const Vector& theta, const Vector& v) const override;

    const Matrix& design() const { return x_; }
    const Vector& labels() const { return y_; }

  private:
    void logistic(const Vector& theta, Vector& s) const;
    Matrix x_;
    Vector y_;
    double inv_alpha_;
};

// Stochastic volatility: y_t = beta exp(x_t/2) eps_t, x_t = phi x_{t-1} + sigma eta_t.
struct SVParams {
    double beta, sigma, phi;
};

// T: (beta, sigma, phi) -> (beta, ln sigma, artanh phi). The potential of
// the transformed theta-conditional absorbs the log-Jacobian of the
// inverse map (-ln sigma - ln(1 - phi^2)).
Vector sv_transform(const SVParams& p);
SVParams sv_inverse(const Vector& theta_bar);

struct SVData {
    Vector y;  // returns
    Vector x;  // latent log-volatilities
};

SVData sv_simulate(int t_len, double beta, double sigma, double phi, Rng& rng);

// Negative log of pi(theta | y, x) in transformed coordinates (beta, gamma,
// alpha); priors p(beta) ~ 1/beta, sigma^2 ~ Scale-inv-chi2(10, 0.05),
// (phi+1)/2 ~ Beta(20, 1.5). beta stays positive-constrained: evaluations
// at beta <= 0 raise EvalError and the sampler rejects.
class SVThetaConditional final : public TargetModel {
  public:
    SVThetaConditional(const Vector& y, const Vector& x);

    int dim() const override { return 3; }
    double potential(const Vector& tb) const override;
    void gradient(const Vector& tb, Vector& grad) const override;
    double eval(const Vector& tb, Vector& grad) const override;
    bool has_hessian() const override { return true; }
    void hessian_vec(const Vector& tb, const Vector& v, Vector& out) const override;

  private:
    struct Terms;
    Terms unpack(const Vector& tb) const;
    double t_len_;
    double s_y_;       // sum y_t^2 exp(-x_t)
    double sum_x_;     // sum x_t (constant part of the y-likelihood)
    double x1_sq_;
    double c2_, a2_, b2_;  // sum x_t^2, sum x_t x_{t-1}, sum x_{t-1}^2 over t >= 2
    double log1m_coeff_, log1p_coeff_;
};

// Negative log of pi(x | y, theta); tridiagonal Hessian from the AR(1)
// coupling, exposed for shadow computation.
class SVXConditional final : public TargetModel {
  public:
    SVXConditional(Vector y, const SVParams& params);

    int dim() const override { return static_cast<int>(y2_.size()); }
    double potential(const Vector& x) const override;
    void gradient(const Vector& x, Vector& grad) const override;
    double eval(const Vector& x, Vector& grad) const override;
    bool has_hessian() const override { return true; }
    bool has_third() const override { return true; }
    bool has_fourth() const override { return true; }
    void hessian_vec(const Vector& x, const Vector& v, Vector& out) const override;
    void third_vec(const Vector& x, const Vector& v, Vector& out) const override;
    double fourth_quad(const Vector& x, const Vector& v) const override;

  private:
    Vector y2_;  // y_t^2
    double beta2_, sigma2_, phi_;
};

}  // namespace mmhmc
