#include "screenal/kernels.hpp"

namespace screenal::kernels::detail {

namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double squared_norm_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

void scale_scalar(double* x, std::size_t n, double a) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

double sparse_dot_scalar(const std::uint32_t* idx, const double* val, std::size_t n,
                         const double* y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += val[i] * y[idx[i]];
  return acc;
}

void sparse_axpy_scalar(double a, const std::uint32_t* idx, const double* val, std::size_t n,
                        double* y) {
  for (std::size_t i = 0; i < n; ++i) y[idx[i]] += a * val[i];
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops{dot_scalar, squared_norm_scalar, scale_scalar, sparse_dot_scalar,
                       sparse_axpy_scalar};
  return ops;
}

}  // namespace screenal::kernels::detail
