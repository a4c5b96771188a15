#include "mmhmc/kernels.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mmhmc::kernels {

namespace {
constexpr Eigen::Index kParallelRows = 256;   // rows below this run serial
constexpr Eigen::Index kParallelLags = 64;
}  // namespace

namespace ref {

void mat_vec(const Matrix& A, const Vector& x, Vector& out) {
    const Eigen::Index r = A.rows(), c = A.cols();
    out.resize(r);
    for (Eigen::Index i = 0; i < r; ++i) {
        double acc = 0.0;
        for (Eigen::Index j = 0; j < c; ++j) acc += A(i, j) * x[j];
        out[i] = acc;
    }
}

double logistic_terms(const Matrix& X, const Vector& y, const Vector& z, Vector& s) {
    const Eigen::Index k = X.rows();
    s.resize(k);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
        const double zi = z[i];
        // softplus(z) = max(z,0) + log1p(exp(-|z|)), safe for large |z|
        acc += std::max(zi, 0.0) + std::log1p(std::exp(-std::abs(zi))) - y[i] * zi;
        s[i] = 1.0 / (1.0 + std::exp(-zi));
    }
    return acc;
}

void autocovariance(const Vector& series, int maxlag, Vector& gamma) {
    const Eigen::Index n = series.size();
    const double mean = series.mean();
    gamma.resize(maxlag + 1);
    for (int k = 0; k <= maxlag; ++k) {
        double acc = 0.0;
        for (Eigen::Index t = 0; t + k < n; ++t)
            acc += (series[t] - mean) * (series[t + k] - mean);
        gamma[k] = acc / static_cast<double>(n);
    }
}

}  // namespace ref

void mat_vec(const Matrix& A, const Vector& x, Vector& out) {
    const Eigen::Index r = A.rows(), c = A.cols();
    if (r < kParallelRows) {
        ref::mat_vec(A, x, out);
        return;
    }
    out.resize(r);
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < r; ++i) {
        double acc = 0.0;
        for (Eigen::Index j = 0; j < c; ++j) acc += A(i, j) * x[j];
        out[i] = acc;
    }
}

double logistic_terms(const Matrix& X, const Vector& y, const Vector& z, Vector& s) {
    const Eigen::Index k = X.rows();
    if (k < kParallelRows) return ref::logistic_terms(X, y, z, s);
    s.resize(k);
    double acc = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : acc)
    for (Eigen::Index i = 0; i < k; ++i) {
        const double zi = z[i];
        acc += std::max(zi, 0.0) + std::log1p(std::exp(-std::abs(zi))) - y[i] * zi;
        s[i] = 1.0 / (1.0 + std::exp(-zi));
    }
    return acc;
}

void autocovariance(const Vector& series, int maxlag, Vector& gamma) {
    if (maxlag < kParallelLags) {
        ref::autocovariance(series, maxlag, gamma);
        return;
    }
    const Eigen::Index n = series.size();
    const double mean = series.mean();
    gamma.resize(maxlag + 1);
#pragma omp parallel for schedule(dynamic, 8)
    for (int k = 0; k <= maxlag; ++k) {
        double acc = 0.0;
        for (Eigen::Index t = 0; t + k < n; ++t)
            acc += (series[t] - mean) * (series[t + k] - mean);
        gamma[k] = acc / static_cast<double>(n);
    }
}

}  // namespace mmhmc::kernels
