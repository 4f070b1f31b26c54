#pragma once

namespace cscdyn {

/// Progeny kernel k(p) = max{1 - p^sigma, 0}, sigma >= 1.
///
/// k is the saturation factor multiplying every birth term: k(0) = 1, k is
/// positive and strictly decreasing on [0,1), and vanishes for p >= 1.
///
/// `zero()` builds the identically vanishing kernel. It does not satisfy
/// k(0) = 1 and exists only to switch all production off (pure-diffusion
/// degenerate runs).
class KernelSpec {
 public:
  KernelSpec() = default;
  explicit KernelSpec(double sigma);

  static KernelSpec zero();

  [[nodiscard]] double sigma() const noexcept { return sigma_; }
  [[nodiscard]] bool vanishing() const noexcept { return vanishing_; }

  /// k(p). Throws DomainError for p < 0 or non-finite p.
  [[nodiscard]] double operator()(double p) const;

  /// k'(p); at the kink p = 1 the left derivative -sigma is returned.
  [[nodiscard]] double derivative(double p) const;

  /// Unique v in [0,1] with k(v) = a, i.e. (1 - a)^(1/sigma).
  /// Throws NoSolutionError when a > k(0) = 1, DomainError when a <= 0.
  [[nodiscard]] double inverse(double a) const;

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;

 private:
  double sigma_ = 1.0;
  bool vanishing_ = false;
};

// Free-function spellings of the kernel operations.
[[nodiscard]] double k_eval(const KernelSpec& kernel, double p);
[[nodiscard]] double k_prime(const KernelSpec& kernel, double p);
[[nodiscard]] double k_inverse(const KernelSpec& kernel, double a);

}  // namespace cscdyn
