#pragma once

#include "mmhmc/core.hpp"

namespace mmhmc::kernels {

// Serial reference implementations. Kept simple on purpose: the OpenMP
// kernels below are checked against these in the tests and in the
// bench_kernels target.
namespace ref {

void mat_vec(const Matrix& A, const Vector& x, Vector& out);

// Fused logistic-regression reduction over data rows:
// returns sum_k [softplus(z_k) - y_k z_k] and fills s_k = logistic(z_k),
// with z = X theta.
double logistic_terms(const Matrix& X, const Vector& y, const Vector& z, Vector& s);

// Autocovariance gamma_k = 1/N sum_{t<N-k} (x_t - m)(x_{t+k} - m), k = 0..maxlag.
void autocovariance(const Vector& series, int maxlag, Vector& gamma);

}  // namespace ref

// OpenMP-parallel versions. Each falls back to the serial path below a
// size threshold where thread startup dominates.
void mat_vec(const Matrix& A, const Vector& x, Vector& out);
double logistic_terms(const Matrix& X, const Vector& y, const Vector& z, Vector& s);
void autocovariance(const Vector& series, int maxlag, Vector& gamma);

}  // namespace mmhmc::kernels
