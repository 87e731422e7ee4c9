#include "paremia/kernels/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>

namespace paremia::kernels {

namespace {

const Kernels& resolve() {
  const char* force = std::getenv("PAREMIA_KERNEL");
  if (force != nullptr) {
    if (std::strcmp(force, "scalar") == 0) return scalar();
    if (std::strcmp(force, "avx2") == 0 && avx2() != nullptr) return *avx2();
  }
  if (const Kernels* k = avx2()) return *k;
  return scalar();
}

}  // namespace

const Kernels& active() {
  static const Kernels& k = resolve();
  return k;
}

bool cosine_f32(std::span<const float> a, std::span<const float> b, double& out) {
  const Kernels& k = active();
  const double na = k.norm_sq_f32(a);
  const double nb = k.norm_sq_f32(b);
  if (na <= 0.0 || nb <= 0.0) return false;
  out = k.dot_f32(a, b) / (std::sqrt(na) * std::sqrt(nb));
  return true;
}

}  // namespace paremia::kernels
