#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "urnlab/errors.hpp"

namespace urnlab::stats {

inline double mean(std::span<const double> x) {
  if (x.empty()) throw ParameterError("mean of an empty sample");
  long double s = 0.0L;
  for (double v : x) s += v;
  return static_cast<double>(s / static_cast<long double>(x.size()));
}

/// Unbiased sample variance.
inline double variance(std::span<const double> x) {
  if (x.size() < 2) throw ParameterError("variance needs at least two values");
  const double m = mean(x);
  long double s = 0.0L;
  for (double v : x) s += (v - m) * (v - m);
  return static_cast<double>(s / static_cast<long double>(x.size() - 1));
}

inline double standard_error_of_mean(std::span<const double> x) {
  return std::sqrt(variance(x) / static_cast<double>(x.size()));
}

/// Standard error of the sample variance, (m4 - s^4 (n-3)/(n-1)) / n.
inline double standard_error_of_variance(std::span<const double> x) {
  const double n = static_cast<double>(x.size());
  if (x.size() < 4) throw ParameterError("variance standard error needs at least four values");
  const double m = mean(x);
  long double m2 = 0.0L, m4 = 0.0L;
  for (double v : x) {
    const long double d = v - m;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  const double s2 = static_cast<double>(m2 / (n - 1));
  const double mu4 = static_cast<double>(m4 / n);
  return std::sqrt(std::max(0.0, (mu4 - s2 * s2 * (n - 3) / (n - 1)) / n));
}

/// Unbiased sample covariance.
inline double covariance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ParameterError("covariance needs two equal-length samples of size >= 2");
  }
  const double mx = mean(x), my = mean(y);
  long double s = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - mx) * (y[i] - my);
  return static_cast<double>(s / static_cast<long double>(x.size() - 1));
}

/// Standard error of the sample covariance, from the variance of the
/// centered products.
inline double standard_error_of_covariance(std::span<const double> x, std::span<const double> y) {
  const double mx = mean(x), my = mean(y);
  std::vector<double> prod(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) prod[i] = (x[i] - mx) * (y[i] - my);
  return standard_error_of_mean(prod);
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
  const double c = covariance(x, y);
  const double d = std::sqrt(variance(x) * variance(y));
  return d > 0.0 ? c / d : 0.0;
}

inline double normal_cdf(double x, double sd = 1.0) {
  return 0.5 * std::erfc(-x / (sd * std::sqrt(2.0)));
}

/// Kolmogorov distribution upper tail P(K > lambda).
inline double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// One-sample KS test against a continuous CDF. Uses Stephens' correction
/// lambda = (sqrt(n) + 0.12 + 0.11/sqrt(n)) D.
template <class Cdf>
KsResult ks_test(std::span<const double> x, Cdf cdf) {
  if (x.empty()) throw ParameterError("KS test of an empty sample");
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = cdf(s[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  const double rn = std::sqrt(n);
  return {d, kolmogorov_survival((rn + 0.12 + 0.11 / rn) * d)};
}

inline KsResult ks_test_normal(std::span<const double> x, double variance) {
  const double sd = std::sqrt(variance);
  return ks_test(x, [sd](double v) { return normal_cdf(v, sd); });
}

struct ChiSquareResult {
  double statistic = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
};

/// Pearson chi-square goodness of fit; `expected` are probabilities.
inline ChiSquareResult chi_square_test(std::span<const std::uint64_t> counts,
                                       std::span<const double> expected) {
  if (counts.size() != expected.size() || counts.size() < 2) {
    throw ParameterError("chi-square test needs matching counts and probabilities");
  }
  const double n = static_cast<double>(std::accumulate(counts.begin(), counts.end(),
                                                       std::uint64_t{0}));
  double chi2 = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double e = n * expected[i];
    const double d = static_cast<double>(counts[i]) - e;
    chi2 += d * d / e;
  }
  const double dof = static_cast<double>(counts.size() - 1);
  boost::math::chi_squared dist(dof);
  return {chi2, dof, boost::math::cdf(boost::math::complement(dist, chi2))};
}

/// Fisher-Yates shuffle driven by a uniform source.
template <class Rng, class T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(v[i - 1], v[j]);
  }
}

inline double median(std::vector<double> x) {
  if (x.empty()) throw ParameterError("median of an empty sample");
  const std::size_t mid = x.size() / 2;
  std::nth_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(mid), x.end());
  const double hi = x[mid];
  if (x.size() % 2 == 1) return hi;
  const double lo = *std::max_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

}  // namespace urnlab::stats
