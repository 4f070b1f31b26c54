#include "cscdyn/kernel.hpp"

#include <cmath>
#include <string>

#include "cscdyn/errors.hpp"

namespace cscdyn {
namespace {

inline void check_density(double p) {
  if (!std::isfinite(p)) throw DomainError("kernel: non-finite density");
  if (p < 0.0) throw DomainError("kernel: negative density p = " + std::to_string(p));
}

// p^sigma with exact fast paths for the integer exponents used almost everywhere.
inline double power(double p, double sigma) {
  if (sigma == 1.0) return p;
  if (sigma == 2.0) return p * p;
  if (sigma == 3.0) return p * p * p;
  return std::pow(p, sigma);
}

}  // namespace

KernelSpec::KernelSpec(double sigma) : sigma_(sigma) {
  if (!std::isfinite(sigma) || sigma < 1.0) {
    throw DomainError("kernel: sigma must satisfy sigma >= 1, got " + std::to_string(sigma));
  }
}

KernelSpec KernelSpec::zero() {
  KernelSpec k;
  k.vanishing_ = true;
  return k;
}

double KernelSpec::operator()(double p) const {
  check_density(p);
  if (vanishing_ || p >= 1.0) return 0.0;
  return 1.0 - power(p, sigma_);
}

double KernelSpec::derivative(double p) const {
  check_density(p);
  if (vanishing_ || p > 1.0) return 0.0;
  if (sigma_ == 1.0) return -1.0;
  return -sigma_ * power(p, sigma_ - 1.0);
}

double KernelSpec::inverse(double a) const {
  if (vanishing_) throw NoSolutionError("kernel: vanishing kernel has no inverse");
  if (!std::isfinite(a) || a <= 0.0) {
    throw DomainError("kernel: inverse needs a > 0, got " + std::to_string(a));
  }
  if (a > 1.0) {
    throw NoSolutionError("kernel: k(v) = " + std::to_string(a) + " has no solution since k(0) = 1");
  }
  if (a == 1.0) return 0.0;
  return std::pow(1.0 - a, 1.0 / sigma_);
}

double k_eval(const KernelSpec& kernel, double p) { return kernel(p); }
double k_prime(const KernelSpec& kernel, double p) { return kernel.derivative(p); }
double k_inverse(const KernelSpec& kernel, double a) { return kernel.inverse(a); }

}  // namespace cscdyn
