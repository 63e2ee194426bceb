#pragma once

// Reference computations for the tests. Everything here is written from the
// textbook definitions and uses only the standard library (plus Eigen as a
// container), so it shares no code path with the library under test.

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline double pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }

/// Phi(x) by composite Simpson integration of the density from 0 to |x|.
inline double cdf_simpson(double x, int panels = 20000) {
  const double a = std::fabs(x);
  const double h = a / panels;
  double s = pdf(0.0) + pdf(a);
  for (int k = 1; k < panels; ++k) s += (k % 2 ? 4.0 : 2.0) * pdf(k * h);
  const double half = s * h / 3.0;
  return x >= 0.0 ? 0.5 + half : 0.5 - half;
}

/// Coverage of N(theta0 + b, tau2) by (Z - omega, Z + omega), Z ~ N(theta0, sigma^2),
/// from the difference X = estimate - Z ~ N(b, sigma^2 + tau2).
inline double coverage(double b, double tau2, double omega, double sigma) {
  const double nu = std::sqrt(sigma * sigma + tau2);
  return cdf_simpson((omega - b) / nu) - cdf_simpson((-omega - b) / nu);
}

/// Textbook OLS slope of y on x (two passes).
inline double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

inline std::vector<double> random_shares(std::mt19937_64& gen, std::size_t m) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> w(m);
  double s = 0.0;
  for (auto& x : w) s += (x = u(gen));
  for (auto& x : w) x /= s;
  return w;
}

inline Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

/// Random PSD matrix with zero row sums: C A A' C with C the centering matrix.
inline Eigen::MatrixXd random_share_covariance(std::mt19937_64& gen, std::size_t m,
                                               double scale) {
  std::normal_distribution<double> z(0.0, scale);
  const auto n = static_cast<Eigen::Index>(m);
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = z(gen);
  const Eigen::MatrixXd c =
      Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(m));
  Eigen::MatrixXd v = c * a * a.transpose() * c;
  return 0.5 * (v + v.transpose());
}

/// Element-wise double sum p' V p.
inline double quadratic_form(const Eigen::VectorXd& p, const Eigen::MatrixXd& v) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i)
    for (Eigen::Index j = 0; j < p.size(); ++j) s += p(i) * v(i, j) * p(j);
  return s;
}

}  // namespace oracle
