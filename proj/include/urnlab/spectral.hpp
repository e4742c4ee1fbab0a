#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "urnlab/errors.hpp"
#include "urnlab/kernels.hpp"
#include "urnlab/measures.hpp"
#include "urnlab/rational.hpp"
#include "urnlab/rng.hpp"
#include "urnlab/test_function.hpp"

namespace urnlab {

/// lambda1 = lambda2 + mu(a), lambda2 = E_s(C), rho = lambda2 / lambda1.
struct SpectralConstants {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double rho = 0.0;
  double mu_a = 0.0;
  FiniteMeasure mu_bar = FiniteMeasure::lebesgue();
  // Exact ratio when the kernel carries rational metadata.
  std::optional<Rational> rho_exact;
};

template <ReplacementKernel K>
SpectralConstants spectral_constants(const K& kernel) {
  SpectralConstants sc;
  sc.lambda2 = kernel.lambda2();
  sc.mu_a = measure_integrate(kernel.intensity(), kernel.modulation());
  sc.lambda1 = sc.lambda2 + sc.mu_a;
  sc.rho = sc.lambda2 / sc.lambda1;
  sc.mu_bar = kernel.intensity().normalized();
  if constexpr (std::is_same_v<K, FiniteKernel>) {
    Rational mu_a = 0;
    const auto& mu = kernel.mu_exact();
    const auto& a = kernel.modulation_exact();
    for (std::size_t t = 0; t < mu.size(); ++t) mu_a += mu[t] * a[t];
    sc.rho_exact = kernel.lambda2_exact() / (kernel.lambda2_exact() + mu_a);
  }
  if (!(sc.mu_a > 0.0)) throw ParameterError("mu(a) must be positive");
  return sc;
}

inline SpectralConstants spectral_constants(const AnyKernel& kernel) {
  return std::visit([](const auto& k) { return spectral_constants(k); }, kernel);
}

/// R f = lambda2 f + mu(f) a.
template <ReplacementKernel K>
TestFunction apply_R(const K& kernel, const TestFunction& f) {
  double mu_f = 0.0;
  try {
    mu_f = measure_integrate(kernel.intensity(), f);
  } catch (const UnsupportedPairError& e) {
    throw InexactIntegralError(std::string("apply_R: ") + e.what());
  }
  return f.scaled(kernel.lambda2()) + kernel.modulation().scaled(mu_f);
}

/// Exact R on a finite kernel, f given per tag.
inline std::vector<Rational> apply_R_exact(const FiniteKernel& kernel,
                                           const std::vector<Rational>& f) {
  Rational mu_f = 0;
  const auto& mu = kernel.mu_exact();
  for (std::size_t t = 0; t < mu.size(); ++t) mu_f += mu[t] * f[t];
  std::vector<Rational> out(f.size());
  const auto& a = kernel.modulation_exact();
  for (std::size_t t = 0; t < f.size(); ++t) {
    out[t] = kernel.lambda2_exact() * f[t] + a[t] * mu_f;
  }
  return out;
}

/// K(f, g) = int mubar(ds) E_s( mubar(fg) C^2 + xi(f) xi(g) ), closed form.
template <ReplacementKernel K>
double limit_covariance(const K& kernel, const TestFunction& f, const TestFunction& g) {
  if (auto v = kernel.closed_form_cov(f, g)) return *v;
  throw InexactIntegralError(kernel.name() +
                             ": no closed-form covariance; use the Monte Carlo estimate");
}

template <ReplacementKernel K>
double sigma_sq(const K& kernel, const TestFunction& f) {
  return limit_covariance(kernel, f, f);
}

/// Covariance of the Gaussian bridge G(f) - mubar(f) G(1).
template <ReplacementKernel K>
double bridge_covariance(const K& kernel, const TestFunction& f, const TestFunction& g) {
  const auto& mu_bar = kernel.intensity().normalized();
  const auto one = TestFunction::one();
  const double mf = measure_integrate(mu_bar, f);
  const double mg = measure_integrate(mu_bar, g);
  return limit_covariance(kernel, f, g) - mg * limit_covariance(kernel, f, one) -
         mf * limit_covariance(kernel, one, g) +
         mf * mg * limit_covariance(kernel, one, one);
}

/// Monte Carlo estimate of the K matrix on a family of functions, from one
/// shared sample of (s, C, xi) so the estimate is itself a Gram matrix.
struct CovarianceEstimate {
  std::vector<std::vector<double>> value;
  std::vector<std::vector<double>> standard_error;
  std::size_t samples = 0;
};

template <ReplacementKernel K>
CovarianceEstimate mc_covariance(const K& kernel, const std::vector<TestFunction>& fs,
                                 std::size_t n_samples, std::uint64_t seed) {
  const std::size_t k = fs.size();
  const auto mu_bar = kernel.intensity().normalized();
  std::vector<double> mubar_ff(k * k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      mubar_ff[i * k + j] = measure_integrate(mu_bar, fs[i] * fs[j]);

  PhiloxStream color_rng(seed, 0, Substream::kColor);
  PhiloxStream kernel_rng(seed, 0, Substream::kKernel);
  // Entry (i,j) averages mubar(f_i f_j) C^2 + xi(f_i) xi(f_j).
  std::vector<double> sum(k * k, 0.0), sum_sq(k * k, 0.0);
  std::vector<double> xi(k);
  for (std::size_t n = 0; n < n_samples; ++n) {
    const Color s = mu_bar.sample(color_rng);
    const Replacement r = kernel.sample(s, kernel_rng);
    for (std::size_t i = 0; i < k; ++i) {
      double v = 0.0;
      for (const auto& c : r.innovation) v += fs[i](c);
      xi[i] = v;
    }
    const double c2 = static_cast<double>(r.copies) * static_cast<double>(r.copies);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        const double x = mubar_ff[i * k + j] * c2 + xi[i] * xi[j];
        sum[i * k + j] += x;
        sum_sq[i * k + j] += x * x;
      }
    }
  }
  CovarianceEstimate est;
  est.samples = n_samples;
  est.value.assign(k, std::vector<double>(k));
  est.standard_error.assign(k, std::vector<double>(k));
  const double n = static_cast<double>(n_samples);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double mean = sum[i * k + j] / n;
      const double var = std::max(0.0, (sum_sq[i * k + j] / n - mean * mean) * n / (n - 1));
      est.value[i][j] = mean;
      est.standard_error[i][j] = std::sqrt(var / n);
    }
  }
  return est;
}

/// sigma^2(f) by Monte Carlo: value and standard error.
template <ReplacementKernel K>
std::pair<double, double> sigma_sq_mc(const K& kernel, const TestFunction& f,
                                      std::size_t n_samples, std::uint64_t seed) {
  const auto est = mc_covariance(kernel, {f}, n_samples, seed);
  return {est.value[0][0], est.standard_error[0][0]};
}

/// Evaluator for K(f, g) with its provenance.
class CovarianceForm {
 public:
  enum class Source { kClosedForm, kMonteCarlo };

  template <ReplacementKernel K>
  static CovarianceForm closed_form(const K& kernel) {
    CovarianceForm form;
    form.source_ = Source::kClosedForm;
    form.eval_ = [kernel](const TestFunction& f, const TestFunction& g) {
      return limit_covariance(kernel, f, g);
    };
    return form;
  }

  template <ReplacementKernel K>
  static CovarianceForm monte_carlo(const K& kernel, std::size_t n_samples,
                                    std::uint64_t seed) {
    CovarianceForm form;
    form.source_ = Source::kMonteCarlo;
    form.samples_ = n_samples;
    form.seed_ = seed;
    form.eval_ = [kernel, n_samples, seed](const TestFunction& f, const TestFunction& g) {
      return mc_covariance(kernel, {f, g}, n_samples, seed).value[0][1];
    };
    return form;
  }

  double operator()(const TestFunction& f, const TestFunction& g) const { return eval_(f, g); }
  Source source() const { return source_; }
  std::size_t samples() const { return samples_; }
  std::uint64_t seed() const { return seed_; }

 private:
  std::function<double(const TestFunction&, const TestFunction&)> eval_;
  Source source_ = Source::kClosedForm;
  std::size_t samples_ = 0;
  std::uint64_t seed_ = 0;
};

}  // namespace urnlab
