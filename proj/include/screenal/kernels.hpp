#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace screenal::kernels {

// Arithmetic inner loops used by vectorization, training and scoring.
// A scalar reference implementation always exists; an AVX2 variant is
// selected at runtime when the CPU supports it. The two backends agree to
// floating-point reassociation error and are equivalence-tested.
enum class Backend { Scalar, Avx2 };

bool avx2_supported();

// Currently active backend. Resolved on first use: the environment variable
// SCREENAL_KERNEL_BACKEND (values "scalar" / "avx2") wins, otherwise the best
// supported backend is picked.
Backend active_backend();
void set_backend(Backend b);
std::string_view backend_name(Backend b);

double dot(std::span<const double> x, std::span<const double> y);
double squared_norm(std::span<const double> x);
void scale(std::span<double> x, double a);

// sum_i val[i] * y[idx[i]]; every index must be < y.size().
double sparse_dot(std::span<const std::uint32_t> idx, std::span<const double> val,
                  std::span<const double> y);

// y[idx[i]] += a * val[i]; indices strictly increasing (no duplicates).
void sparse_axpy(double a, std::span<const std::uint32_t> idx, std::span<const double> val,
                 std::span<double> y);

namespace detail {

struct Ops {
  double (*dot)(const double*, const double*, std::size_t);
  double (*squared_norm)(const double*, std::size_t);
  void (*scale)(double*, std::size_t, double);
  double (*sparse_dot)(const std::uint32_t*, const double*, std::size_t, const double*);
  void (*sparse_axpy)(double, const std::uint32_t*, const double*, std::size_t, double*);
};

const Ops& scalar_ops();
const Ops* avx2_ops();  // nullptr when the build has no AVX2 translation unit

}  // namespace detail

}  // namespace screenal::kernels
