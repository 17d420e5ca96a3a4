#pragma once

// Probability formulas for random total maps, summary statistics and
// least-squares polynomial fitting.

#include <Eigen/Dense>

#include <cmath>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pfasync/errors.hpp"

namespace pfasync {

/// Probability that a uniformly random map on n points has exactly j cyclic
/// points: (n-1)! j / ((n-j)! n^j), evaluated in log space.
inline double cyclic_pmf(int n, int j) {
  if (n < 1 || j < 1 || j > n) throw InputError("cyclic_pmf needs 1 <= j <= n");
  const long double log_p = std::lgamma(static_cast<long double>(n)) + std::log(static_cast<long double>(j)) -
                            std::lgamma(static_cast<long double>(n - j + 1)) -
                            static_cast<long double>(j) * std::log(static_cast<long double>(n));
  return static_cast<double>(std::exp(log_p));
}

/// Probability that the cyclic filter applies to a random almost complete
/// binary automaton: sum over j = 2..n-1 of (j/n) cyclic_pmf(n, j).
inline double filter_prob(int n) {
  if (n < 1) throw InputError("filter_prob needs n >= 1");
  long double sum = 0;
  for (int j = 2; j <= n - 1; ++j) sum += static_cast<long double>(j) / n * cyclic_pmf(n, j);
  return static_cast<double>(sum);
}

inline double mean(const std::vector<double>& xs) {
  if (xs.empty()) throw InputError("mean of an empty sample");
  long double s = 0;
  for (double x : xs) s += x;
  return static_cast<double>(s / xs.size());
}

/// Sample standard deviation (n-1 denominator).
inline double sample_stddev(const std::vector<double>& xs) {
  if (xs.size() < 2) throw InputError("standard deviation needs at least two values");
  const double mu = mean(xs);
  long double s = 0;
  for (double x : xs) s += (x - mu) * (x - mu);
  return static_cast<double>(std::sqrt(s / (xs.size() - 1)));
}

/// Relative standard deviation: sample standard deviation over the mean.
inline double rsd(const std::vector<double>& xs) {
  const double mu = mean(xs);
  if (mu == 0) throw InputError("relative standard deviation of a zero-mean sample");
  return sample_stddev(xs) / mu;
}

struct FitResult {
  /// coefficients[k] multiplies x^k.
  std::vector<double> coefficients;
  /// Euclidean norm of the residual vector.
  double residual_norm = 0;

  double operator()(double x) const {
    double y = 0;
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) y = y * x + *it;
    return y;
  }
};

/// Ordinary least squares on the monomial basis 1, x, ..., x^degree. The
/// abscissae are scaled to [-1, 1] before a column-pivoted QR solve, and the
/// coefficients are mapped back to the unscaled basis.
inline FitResult fit_polynomial(const std::vector<std::pair<double, double>>& points, int degree) {
  if (degree < 0) throw InputError("negative polynomial degree");
  std::set<double> distinct;
  for (const auto& [x, y] : points) distinct.insert(x);
  if (static_cast<int>(distinct.size()) < degree + 1)
    throw InputError("fit of degree " + std::to_string(degree) + " needs " + std::to_string(degree + 1) +
                     " distinct abscissae, got " + std::to_string(distinct.size()));
  if (distinct.size() != points.size()) throw InputError("fit points have duplicate abscissae");

  const double lo = *distinct.begin(), hi = *distinct.rbegin();
  const double center = (lo + hi) / 2;
  const double half = hi > lo ? (hi - lo) / 2 : 1.0;
  const auto rows = static_cast<Eigen::Index>(points.size());
  const Eigen::Index cols = degree + 1;
  Eigen::MatrixXd V(rows, cols);
  Eigen::VectorXd y(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const double u = (points[r].first - center) / half;
    double p = 1;
    for (Eigen::Index c = 0; c < cols; ++c, p *= u) V(r, c) = p;
    y(r) = points[r].second;
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(V);
  if (qr.rank() < cols) throw InputError("rank-deficient fit design");
  const Eigen::VectorXd scaled = qr.solve(y);

  // Expand sum_k s_k ((x - center)/half)^k into powers of x.
  std::vector<double> coef(static_cast<std::size_t>(cols), 0.0);
  for (Eigen::Index k = 0; k < cols; ++k) {
    const double sk = scaled(k) / std::pow(half, static_cast<double>(k));
    double binom = 1;  // C(k, i)
    for (Eigen::Index i = 0; i <= k; ++i) {
      coef[i] += sk * binom * std::pow(-center, static_cast<double>(k - i));
      binom = binom * static_cast<double>(k - i) / static_cast<double>(i + 1);
    }
  }

  FitResult fit{std::move(coef), 0};
  double sq = 0;
  for (const auto& [x, yv] : points) {
    const double e = yv - fit(x);
    sq += e * e;
  }
  fit.residual_norm = std::sqrt(sq);
  return fit;
}

inline FitResult fit_cubic(const std::vector<std::pair<double, double>>& points) { return fit_polynomial(points, 3); }

}  // namespace pfasync
