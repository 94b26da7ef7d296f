#include "screenal/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include "screenal/errors.hpp"

namespace screenal::kernels {

bool avx2_supported() {
#if defined(__x86_64__) || defined(__i386__)
  if (detail::avx2_ops() == nullptr) return false;
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

Backend resolve_default() {
  if (const char* env = std::getenv("SCREENAL_KERNEL_BACKEND")) {
    const std::string v(env);
    if (v == "scalar") return Backend::Scalar;
    if (v == "avx2") {
      if (!avx2_supported()) throw Error("SCREENAL_KERNEL_BACKEND=avx2 but AVX2 is unavailable");
      return Backend::Avx2;
    }
    throw Error("SCREENAL_KERNEL_BACKEND: unknown backend '" + v + "'");
  }
  return avx2_supported() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<const detail::Ops*>& current_ops() {
  static std::atomic<const detail::Ops*> ops{nullptr};
  return ops;
}

const detail::Ops* ops_for(Backend b) {
  if (b == Backend::Avx2) return detail::avx2_ops();
  return &detail::scalar_ops();
}

const detail::Ops& ops() {
  const detail::Ops* p = current_ops().load(std::memory_order_acquire);
  if (p == nullptr) {
    p = ops_for(resolve_default());
    current_ops().store(p, std::memory_order_release);
  }
  return *p;
}

}  // namespace

Backend active_backend() {
  return &ops() == detail::avx2_ops() ? Backend::Avx2 : Backend::Scalar;
}

void set_backend(Backend b) {
  if (b == Backend::Avx2 && !avx2_supported()) {
    throw Error("set_backend: AVX2 kernels are not supported on this CPU/build");
  }
  current_ops().store(ops_for(b), std::memory_order_release);
}

std::string_view backend_name(Backend b) {
  return b == Backend::Avx2 ? "avx2" : "scalar";
}

double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error("kernels::dot: size mismatch");
  return ops().dot(x.data(), y.data(), x.size());
}

double squared_norm(std::span<const double> x) {
  return ops().squared_norm(x.data(), x.size());
}

void scale(std::span<double> x, double a) { ops().scale(x.data(), x.size(), a); }

double sparse_dot(std::span<const std::uint32_t> idx, std::span<const double> val,
                  std::span<const double> y) {
  if (idx.size() != val.size()) throw Error("kernels::sparse_dot: index/value size mismatch");
  return ops().sparse_dot(idx.data(), val.data(), idx.size(), y.data());
}

void sparse_axpy(double a, std::span<const std::uint32_t> idx, std::span<const double> val,
                 std::span<double> y) {
  if (idx.size() != val.size()) throw Error("kernels::sparse_axpy: index/value size mismatch");
  ops().sparse_axpy(a, idx.data(), val.data(), idx.size(), y.data());
}

}  // namespace screenal::kernels
