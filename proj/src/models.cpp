#include "mmhmc/models.hpp"

#include "mmhmc/kernels.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace mmhmc {

namespace {

void require_finite(double v, const char* where, int index = -1) {
    if (!std::isfinite(v)) throw EvalError(std::string(where) + ": non-finite value", index);
}

void require_finite(const Vector& v, const char* where) {
    if (!v.allFinite()) {
        int idx = -1;
        for (Eigen::Index i = 0; i < v.size(); ++i)
            if (!std::isfinite(v[i])) {
                idx = static_cast<int>(i);
                break;
            }
        throw EvalError(std::string(where) + ": non-finite component", idx);
    }
}

}  // namespace

// ---------------------------------------------------------------- Gaussian

GaussianTarget GaussianTarget::standard(int dim) {
    return diagonal_variances(Vector::Ones(dim));
}

GaussianTarget GaussianTarget::diagonal_variances(Vector sigma2) {
    if (sigma2.size() < 1 || (sigma2.array() <= 0.0).any())
        throw ContractError("GaussianTarget: variances must be positive");
    GaussianTarget g;
    g.dim_ = static_cast<int>(sigma2.size());
    g.diag_ = sigma2.cwiseInverse();
    return g;
}

GaussianTarget GaussianTarget::dense_precision(Matrix precision) {
    if (precision.rows() != precision.cols() || precision.rows() < 1)
        throw ContractError("GaussianTarget: precision must be square");
    if (!precision.isApprox(precision.transpose(), 1e-12))
        throw ContractError("GaussianTarget: precision must be symmetric");
    GaussianTarget g;
    g.dim_ = static_cast<int>(precision.rows());
    g.dense_ = std::move(precision);
    return g;
}

double GaussianTarget::potential(const Vector& theta) const {
    Vector grad(dim_);
    return eval(theta, grad);
}

void GaussianTarget::gradient(const Vector& theta, Vector& grad) const {
    if (diagonal())
        grad = diag_.cwiseProduct(theta);
    else
        kernels::mat_vec(dense_, theta, grad);
}

double GaussianTarget::eval(const Vector& theta, Vector& grad) const {
    if (theta.size() != dim_) throw ContractError("GaussianTarget: dimension mismatch");
    gradient(theta, grad);
    const double u = 0.5 * theta.dot(grad);
    require_finite(u, "gaussian potential");
    return u;
}

void GaussianTarget::hessian_vec(const Vector&, const Vector& v, Vector& out) const {
    if (diagonal())
        out = diag_.cwiseProduct(v);
    else
        kernels::mat_vec(dense_, v, out);
}

GaussianTarget generate_wishart_target(int dim, Rng& rng, int dense_limit) {
    if (dim < 2) throw ContractError("generate_wishart_target: dim must be >= 2");
    std::normal_distribution<double> nd(0.0, 1.0);
    Matrix a(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = nd(rng);
    Matrix prec = a.transpose() * a;
    if (dim <= dense_limit) return GaussianTarget::dense_precision(std::move(prec));

    // diagonal surrogate: i-th smallest eigenvalue of the covariance matrix
    Eigen::SelfAdjointEigenSolver<Matrix> es(prec);
    Vector sigma2 = es.eigenvalues().cwiseInverse();
    std::sort(sigma2.data(), sigma2.data() + sigma2.size());
    return GaussianTarget::diagonal_variances(std::move(sigma2));
}

// ------------------------------------------------------------------ banana

BananaTarget::BananaTarget(Vector data, double sigma_y, double sigma_theta)
    : y_(std::move(data)), sy2_(sigma_y * sigma_y), st2_(sigma_theta * sigma_theta) {
    if (y_.size() < 1) throw ContractError("BananaTarget: data must be non-empty");
    if (!(sigma_y > 0.0) || !(sigma_theta > 0.0))
        throw ContractError("BananaTarget: sigmas must be positive");
}

double BananaTarget::potential(const Vector& theta) const {
    Vector grad(2);
    return eval(theta, grad);
}

void BananaTarget::gradient(const Vector& theta, Vector& grad) const { eval(theta, grad); }

double BananaTarget::eval(const Vector& theta, Vector& grad) const {
    if (theta.size() != 2) throw ContractError("BananaTarget: theta must have length 2");
    const double mu = theta[0] + theta[1] * theta[1];
    double u = 0.0, sum_r = 0.0;
    for (Eigen::Index k = 0; k < y_.size(); ++k) {
        const double r = y_[k] - mu;
        u += r * r;
        sum_r += r;
    }
    u = u / (2.0 * sy2_) + (theta[0] * theta[0] + theta[1] * theta[1]) / (2.0 * st2_);
    grad.resize(2);
    grad[0] = -sum_r / sy2_ + theta[0] / st2_;
    grad[1] = -2.0 * theta[1] * sum_r / sy2_ + theta[1] / st2_;
    require_finite(u, "banana potential");
    require_finite(grad, "banana gradient");
    return u;
}

void BananaTarget::hessian_vec(const Vector& theta, const Vector& v, Vector& out) const {
    const double k = static_cast<double>(y_.size());
    const double mu = theta[0] + theta[1] * theta[1];
    double sum_r = 0.0;
    for (Eigen::Index i = 0; i < y_.size(); ++i) sum_r += y_[i] - mu;
    const double h11 = k / sy2_ + 1.0 / st2_;
    const double h12 = 2.0 * theta[1] * k / sy2_;
    const double h22 = (4.0 * theta[1] * theta[1] * k - 2.0 * sum_r) / sy2_ + 1.0 / st2_;
    out.resize(2);
    out[0] = h11 * v[0] + h12 * v[1];
    out[1] = h12 * v[0] + h22 * v[1];
}

void BananaTarget::third_vec(const Vector& theta, const Vector& v, Vector& out) const {
    // non-zero components: U3[1,2,2] = 2K/sy2 (all permutations),
    // U3[2,2,2] = 12 theta2 K / sy2
    const double k = static_cast<double>(y_.size());
    const double t122 = 2.0 * k / sy2_;
    const double t222 = 12.0 * theta[1] * k / sy2_;
    out.resize(2);
    out[0] = t122 * v[1] * v[1];
    out[1] = 2.0 * t122 * v[0] * v[1] + t222 * v[1] * v[1];
}

double BananaTarget::fourth_quad(const Vector&, const Vector& v) const {
    const double k = static_cast<double>(y_.size());
    const double v2 = v[1] * v[1];
    return 12.0 * k / sy2_ * v2 * v2;
}

Vector banana_simulate(int k, double mean, double sigma_y, Rng& rng) {
    if (k < 1) throw ContractError("banana_simulate: k must be >= 1");
    std::normal_distribution<double> nd(0.0, 1.0);
    Vector y(k);
    for (int i = 0; i < k; ++i) y[i] = mean + sigma_y * nd(rng);
    return y;
}

// --------------------------------------------------------------------- BLR

BLRTarget::BLRTarget(Matrix design, Vector labels, double alpha)
    : x_(std::move(design)), y_(std::move(labels)) {
    if (x_.rows() != y_.size()) throw ContractError("BLRTarget: design/label size mismatch");
    if (x_.rows() < 1 || x_.cols() < 1) throw ContractError("BLRTarget: empty design");
    if ((x_.col(0).array() != 1.0).any())
        throw ContractError("BLRTarget: design must carry a leading column of ones");
    for (Eigen::Index k = 0; k < y_.size(); ++k)
        if (y_[k] != 0.0 && y_[k] != 1.0)
            throw ContractError("BLRTarget: labels must be binary 0/1");
    if (!(alpha > 0.0)) throw ContractError("BLRTarget: alpha must be positive");
    inv_alpha_ = std::isinf(alpha) ? 0.0 : 1.0 / alpha;
}

void BLRTarget::logistic(const Vector& theta, Vector& s) const {
    const Vector z = x_ * theta;
    s.resize(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) s[i] = 1.0 / (1.0 + std::exp(-z[i]));
}

double BLRTarget::potential(const Vector& theta) const {
    Vector grad(dim());
    return eval(theta, grad);
}

void BLRTarget::gradient(const Vector& theta, Vector& grad) const { eval(theta, grad); }

double BLRTarget::eval(const Vector& theta, Vector& grad) const {
    if (theta.size() != x_.cols()) throw ContractError("BLRTarget: dimension mismatch");
    const Vector z = x_ * theta;
    Vector s;
    double u = kernels::logistic_terms(x_, y_, z, s);
    u += 0.5 * inv_alpha_ * theta.squaredNorm();
    grad.noalias() = x_.transpose() * (s - y_);
    grad.noalias() += inv_alpha_ * theta;
    require_finite(u, "blr potential");
    return u;
}

void BLRTarget::hessian_vec(const Vector& theta, const Vector& v, Vector& out) const {
    Vector s;
    logistic(theta, s);
    const Vector xv = x_ * v;
    const Vector lam = s.array() * (1.0 - s.array());
    out.noalias() = x_.transpose() * lam.cwiseProduct(xv);
    out.noalias() += inv_alpha_ * v;
}

void BLRTarget::third_vec(const Vector& theta, const Vector& v, Vector& out) const {
    Vector s;
    logistic(theta, s);
    const Vector xv = x_ * v;
    const Eigen::ArrayXd sa = s.array();
    const Eigen::ArrayXd w = sa * (1.0 - sa) * (1.0 - 2.0 * sa) * xv.array().square();
    out.noalias() = x_.transpose() * w.matrix();
}

double BLRTarget::fourth_quad(const Vector& theta, const Vector& v) const {
    Vector s;
    logistic(theta, s);
    const Vector xv = x_ * v;
    const Eigen::ArrayXd sa = s.array();
    const Eigen::ArrayXd d4 = sa * (1.0 - sa) * (1.0 - 6.0 * sa + 6.0 * sa * sa);
    return (d4 * xv.array().square().square()).sum();
}

// ---------------------------------------------------------------------- SV

Vector sv_transform(const SVParams& p) {
    if (!(p.sigma > 0.0)) throw ContractError("sv_transform: sigma must be positive");
    if (!(std::abs(p.phi) < 1.0)) throw ContractError("sv_transform: |phi| must be < 1");
    Vector tb(3);
    tb[0] = p.beta;
    tb[1] = std::log(p.sigma);
    tb[2] = std::atanh(p.phi);
    return tb;
}

SVParams sv_inverse(const Vector& tb) {
    if (tb.size() != 3) throw ContractError("sv_inverse: expected length 3");
    return SVParams{tb[0], std::exp(tb[1]), std::tanh(tb[2])};
}

SVData sv_simulate(int t_len, double beta, double sigma, double phi, Rng& rng) {
    if (t_len < 1) throw ContractError("sv_simulate: T must be >= 1");
    if (!(sigma >= 0.0)) throw ContractError("sv_simulate: sigma must be nonnegative");
    if (!(std::abs(phi) < 1.0)) throw ContractError("sv_simulate: |phi| must be < 1");
    std::normal_distribution<double> nd(0.0, 1.0);
    SVData d;
    d.x.resize(t_len);
    d.y.resize(t_len);
    d.x[0] = sigma > 0.0 ? sigma / std::sqrt(1.0 - phi * phi) * nd(rng) : 0.0;
    for (int t = 1; t < t_len; ++t) d.x[t] = phi * d.x[t - 1] + sigma * nd(rng);
    for (int t = 0; t < t_len; ++t) d.y[t] = beta * std::exp(0.5 * d.x[t]) * nd(rng);
    return d;
}

SVThetaConditional::SVThetaConditional(const Vector& y, const Vector& x) {
    if (y.size() != x.size())
        throw ContractError("SVThetaConditional: y and x must share a length");
    const Eigen::Index t = y.size();
    t_len_ = static_cast<double>(t);
    s_y_ = 0.0;
    sum_x_ = 0.0;
    for (Eigen::Index i = 0; i < t; ++i) {
        s_y_ += y[i] * y[i] * std::exp(-x[i]);
        sum_x_ += x[i];
    }
    require_finite(s_y_, "sv theta conditional setup");
    x1_sq_ = t > 0 ? x[0] * x[0] : 0.0;
    c2_ = a2_ = b2_ = 0.0;
    for (Eigen::Index i = 1; i < t; ++i) {
        c2_ += x[i] * x[i];
        a2_ += x[i] * x[i - 1];
        b2_ += x[i - 1] * x[i - 1];
    }
    // log(1-phi) / log(1+phi) coefficients: the x-process stationary term
    // -1/2 log(1-phi^2) only exists once data is present; the prior and the
    // transform Jacobian contribute always.
    const double chain = t > 0 ? 0.5 : 0.0;
    log1m_coeff_ = -(chain + 0.5 + 1.0);
    log1p_coeff_ = -(chain + 19.0 + 1.0);
}

struct SVThetaConditional::Terms {
    double beta, sigma, phi;
    double e2g;   // exp(-2 gamma) = 1/sigma^2
    double w, wp, wpp;
};

SVThetaConditional::Terms SVThetaConditional::unpack(const Vector& tb) const {
    if (tb.size() != 3) throw ContractError("SVThetaConditional: theta_bar must have length 3");
    Terms t;
    t.beta = tb[0];
    if (!(t.beta > 0.0)) throw EvalError("sv theta conditional: beta must stay positive", 0);
    if (std::abs(tb[1]) > 300.0) throw EvalError("sv theta conditional: gamma out of range", 1);
    t.sigma = std::exp(tb[1]);
    t.e2g = std::exp(-2.0 * tb[1]);
    t.phi = std::tanh(tb[2]);
    t.w = (1.0 - t.phi * t.phi) * x1_sq_ + c2_ - 2.0 * t.phi * a2_ + t.phi * t.phi * b2_;
    t.wp = -2.0 * t.phi * x1_sq_ - 2.0 * a2_ + 2.0 * t.phi * b2_;
    t.wpp = -2.0 * x1_sq_ + 2.0 * b2_;
    return t;
}

double SVThetaConditional::potential(const Vector& tb) const {
    const Terms t = unpack(tb);
    // y-likelihood + x-process + priors, in transformed coordinates with
    // the Jacobian terms -gamma - ln(1 - phi^2) absorbed.
    double u = (t_len_ + 1.0) * std::log(t.beta) + 0.5 * s_y_ / (t.beta * t.beta) +
               0.5 * sum_x_;
    u += (t_len_ + 10.0) * tb[1] + 0.5 * (t.w + 0.5) * t.e2g;
    u += log1m_coeff_ * std::log1p(-t.phi) + log1p_coeff_ * std::log1p(t.phi);
    require_finite(u, "sv theta conditional potential");
    return u;
}

void SVThetaConditional::gradient(const Vector& tb, Vector& grad) const { eval(tb, grad); }

double SVThetaConditional::eval(const Vector& tb, Vector& grad) const {
    const Terms t = unpack(tb);
    grad.resize(3);
    const double b2 = t.beta * t.beta;
    grad[0] = (t_len_ + 1.0) / t.beta - s_y_ / (b2 * t.beta);
    grad[1] = (t_len_ + 10.0) - (t.w + 0.5) * t.e2g;
    const double dudphi = -log1m_coeff_ / (1.0 - t.phi) + log1p_coeff_ / (1.0 + t.phi) +
                          0.5 * t.wp * t.e2g;
    grad[2] = dudphi * (1.0 - t.phi * t.phi);
    require_finite(grad, "sv theta conditional gradient");
    return potential(tb);
}

void SVThetaConditional::hessian_vec(const Vector& tb, const Vector& v, Vector& out) const {
    const Terms t = unpack(tb);
    const double b2 = t.beta * t.beta;
    const double one_m_phi2 = 1.0 - t.phi * t.phi;
    const double h_bb = -(t_len_ + 1.0) / b2 + 3.0 * s_y_ / (b2 * b2);
    const double h_gg = 2.0 * (t.w + 0.5) * t.e2g;
    const double h_ga = -t.wp * t.e2g * one_m_phi2;
    const double dudphi = -log1m_coeff_ / (1.0 - t.phi) + log1p_coeff_ / (1.0 + t.phi) +
                          0.5 * t.wp * t.e2g;
    const double d2udphi2 = -log1m_coeff_ / ((1.0 - t.phi) * (1.0 - t.phi)) -
                            log1p_coeff_ / ((1.0 + t.phi) * (1.0 + t.phi)) + 0.5 * t.wpp * t.e2g;
    const double h_aa = one_m_phi2 * (d2udphi2 * one_m_phi2 - 2.0 * t.phi * dudphi);
    out.resize(3);
    out[0] = h_bb * v[0];
    out[1] = h_gg * v[1] + h_ga * v[2];
    out[2] = h_ga * v[1] + h_aa * v[2];
}

SVXConditional::SVXConditional(Vector y, const SVParams& params)
    : y2_(y.array().square()), beta2_(params.beta * params.beta),
      sigma2_(params.sigma * params.sigma), phi_(params.phi) {
    if (y2_.size() < 2) throw ContractError("SVXConditional: need T >= 2");
    if (!(params.sigma > 0.0) || !(std::abs(params.phi) < 1.0) || !(params.beta > 0.0))
        throw ContractError("SVXConditional: invalid parameters");
}

double SVXConditional::potential(const Vector& x) const {
    Vector grad(dim());
    return eval(x, grad);
}

void SVXConditional::gradient(const Vector& x, Vector& grad) const { eval(x, grad); }

double SVXConditional::eval(const Vector& x, Vector& grad) const {
    const Eigen::Index t_len = y2_.size();
    if (x.size() != t_len) throw ContractError("SVXConditional: dimension mismatch");
    grad.resize(t_len);
    double u = 0.0;
    for (Eigen::Index t = 0; t < t_len; ++t) {
        if (x[t] < -600.0) throw EvalError("sv x conditional: exp(-x) overflow", static_cast<int>(t));
        const double e = std::exp(-x[t]);
        u += 0.5 * x[t] + 0.5 * y2_[t] * e / beta2_;
        grad[t] = 0.5 - 0.5 * y2_[t] * e / beta2_;
    }
    const double inv_s2 = 1.0 / sigma2_;
    u += 0.5 * (1.0 - phi_ * phi_) * x[0] * x[0] * inv_s2;
    grad[0] += (1.0 - phi_ * phi_) * x[0] * inv_s2;
    for (Eigen::Index t = 1; t < t_len; ++t) {
        const double r = x[t] - phi_ * x[t - 1];
        u += 0.5 * r * r * inv_s2;
        grad[t] += r * inv_s2;
        grad[t - 1] -= phi_ * r * inv_s2;
    }
    require_finite(u, "sv x conditional potential");
    require_finite(grad, "sv x conditional gradient");
    return u;
}

void SVXConditional::hessian_vec(const Vector& x, const Vector& v, Vector& out) const {
    const Eigen::Index t_len = y2_.size();
    const double inv_s2 = 1.0 / sigma2_;
    out.resize(t_len);
    for (Eigen::Index t = 0; t < t_len; ++t) {
        double diag = 0.5 * y2_[t] * std::exp(-x[t]) / beta2_;
        if (t == 0)
            diag += (1.0 - phi_ * phi_) * inv_s2 + phi_ * phi_ * inv_s2;
        else if (t + 1 < t_len)
            diag += (1.0 + phi_ * phi_) * inv_s2;
        else
            diag += inv_s2;
        out[t] = diag * v[t];
        if (t > 0) out[t] -= phi_ * inv_s2 * v[t - 1];
        if (t + 1 < t_len) out[t] -= phi_ * inv_s2 * v[t + 1];
    }
}

void SVXConditional::third_vec(const Vector& x, const Vector& v, Vector& out) const {
    out.resize(y2_.size());
    for (Eigen::Index t = 0; t < y2_.size(); ++t)
        out[t] = -0.5 * y2_[t] * std::exp(-x[t]) / beta2_ * v[t] * v[t];
}

double SVXConditional::fourth_quad(const Vector& x, const Vector& v) const {
    double acc = 0.0;
    for (Eigen::Index t = 0; t < y2_.size(); ++t) {
        const double v2 = v[t] * v[t];
        acc += 0.5 * y2_[t] * std::exp(-x[t]) / beta2_ * v2 * v2;
    }
    return acc;
}

}  // namespace mmhmc
