#include "auditcov/montecarlo_oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "auditcov/error.hpp"
#include "auditcov/hypothesis_tests.hpp"
#include "auditcov/normal.hpp"
#include "auditcov/rng.hpp"
#include "auditcov/survey_estimation.hpp"

namespace auditcov {

std::string_view to_string(Scenario s) noexcept {
  switch (s) {
    case Scenario::coverage_constant: return "coverage_constant";
    case Scenario::coverage_unbiased: return "coverage_unbiased";
    case Scenario::coverage_biased_noisy: return "coverage_biased_noisy";
    case Scenario::z_calibration: return "z_calibration";
    case Scenario::b_calibration: return "b_calibration";
    case Scenario::power_curve: return "power_curve";
    case Scenario::mse_unbiasedness: return "mse_unbiasedness";
    case Scenario::delta_method_check: return "delta_method_check";
  }
  return "unknown";
}

namespace {

// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

unsigned resolve_threads(unsigned requested, std::size_t work) {
  unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (work < n) n = static_cast<unsigned>(std::max<std::size_t>(work, 1));
  return n;
}

/// Evaluates fn(r) for r in [0, R) into slot r. Any exception thrown by a
/// replicate is rethrown on the calling thread (the lowest-index one wins).
template <typename T, typename F>
std::vector<T> run_replicates(std::size_t replicates, unsigned threads, F fn) {
  std::vector<T> out(replicates);
  const unsigned n_threads = resolve_threads(threads, replicates);
  if (n_threads <= 1) {
    for (std::size_t r = 0; r < replicates; ++r) out[r] = fn(r);
    return out;
  }
  constexpr std::size_t kChunk = 256;
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  std::size_t first_error_index = replicates;

  auto worker = [&]() {
    for (;;) {
      const std::size_t begin = next.fetch_add(kChunk);
      if (begin >= replicates) return;
      const std::size_t end = std::min(begin + kChunk, replicates);
      for (std::size_t r = begin; r < end; ++r) {
        try {
          out[r] = fn(r);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (r < first_error_index) {
            first_error_index = r;
            first_error = std::current_exception();
          }
          return;
        }
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

void require_replicates(const SimulationPlan& plan) {
  if (plan.replicates < 1) {
    throw Error(ErrorCode::invalid_argument, "simulation plan needs at least one replicate");
  }
}

template <typename P>
const P& params_as(const SimulationPlan& plan, const char* op) {
  const P* p = std::get_if<P>(&plan.parameters);
  if (p == nullptr) {
    throw Error(ErrorCode::invalid_argument,
                std::string(op) + ": parameters do not match scenario " +
                    std::string(to_string(plan.scenario)));
  }
  return *p;
}

SimulationOutcome rate_outcome(std::string label, std::size_t hits, std::size_t replicates,
                               double target) {
  SimulationOutcome o;
  o.label = std::move(label);
  o.replicates_used = replicates;
  const double R = static_cast<double>(replicates);
  o.point = static_cast<double>(hits) / R;
  o.target = target;
  // Binomial SE under the target (score test). The plug-in SE from the
  // observed rate collapses when only a handful of hits are expected.
  if (target > 0.0 && target < 1.0) {
    o.mc_stderr = std::sqrt(target * (1.0 - target) / R);
  } else {
    o.mc_stderr = std::max(std::sqrt(o.point * (1.0 - o.point) / R), 1.0 / R);
  }
  o.z_score = (o.point - o.target) / o.mc_stderr;
  return o;
}

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};

MeanSd mean_sd(const std::vector<double>& xs) {
  CompensatedSum s;
  for (double x : xs) s.add(x);
  const double n = static_cast<double>(xs.size());
  const double mean = s.value() / n;
  CompensatedSum ss;
  for (double x : xs) ss.add((x - mean) * (x - mean));
  const double var = xs.size() > 1 ? ss.value() / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var)};
}

std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

/// Seasonal pattern sin(2 pi t / 12), made orthogonal to 1 and to the centered
/// time index so it stays in the residual part of the trend rewrite.
Vector seasonal_pattern(std::size_t T) {
  Vector s(static_cast<Eigen::Index>(T));
  Vector delta(static_cast<Eigen::Index>(T));
  for (std::size_t t = 0; t < T; ++t) {
    s(static_cast<Eigen::Index>(t)) =
        std::sin(2.0 * std::numbers::pi * static_cast<double>(t + 1) / 12.0);
    delta(static_cast<Eigen::Index>(t)) =
        static_cast<double>(t + 1) - 0.5 * static_cast<double>(T + 1);
  }
  s.array() -= s.mean();
  s -= (s.dot(delta) / delta.squaredNorm()) * delta;
  return s;
}

}  // namespace

SyntheticDesign standard_design() {
  constexpr std::size_t m = 6;
  constexpr std::size_t T = 36;
  const double levels[m] = {-6.0, 4.0, -2.0, 8.0, -4.0, 0.0};
  const double trends[m] = {0.25, -0.05, 0.10, 0.00, 0.20, -0.10};
  const double seasonal[m] = {0.8, -0.5, 0.3, -0.6, 0.2, 0.4};
  const Vector s = seasonal_pattern(T);
  Matrix p(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(T));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t t = 0; t < T; ++t) {
      const double delta = static_cast<double>(t + 1) - 0.5 * static_cast<double>(T + 1);
      p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) =
          100.0 + levels[i] + trends[i] * delta + seasonal[i] * s(static_cast<Eigen::Index>(t));
    }
  }
  Vector w(static_cast<Eigen::Index>(m));
  w << 0.25, 0.20, 0.18, 0.15, 0.12, 0.10;
  return SyntheticDesign{PriceSeries::create(std::move(p)), WeightVector::create(w, "population"),
                         1000, 0.6};
}

Vector bias_direction(const SyntheticDesign& design, BiasDirection direction) {
  const auto m = static_cast<Eigen::Index>(design.prices.groups());
  Vector u;
  if (direction == BiasDirection::trend_aligned) {
    const TrendDecomposition dec = trend_decomposition(design.prices);
    u = dec.trends;
    u.array() -= u.mean();
  } else {
    Matrix span(m, static_cast<Eigen::Index>(design.prices.periods()) + 1);
    span.col(0).setOnes();
    span.rightCols(span.cols() - 1) = design.prices.values();
    Eigen::JacobiSVD<Matrix> svd(span, Eigen::ComputeFullU);
    const auto& sv = svd.singularValues();
    const double tol = 1e-10 * sv(0);
    Eigen::Index rank = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k) {
      if (sv(k) > tol) ++rank;
    }
    Vector start(m);
    for (Eigen::Index i = 0; i < m; ++i) start(i) = (i % 2 == 0) ? 1.0 : -1.0 + 0.1 * static_cast<double>(i);
    u = Vector::Zero(m);
    for (Eigen::Index k = rank; k < m; ++k) {
      u += svd.matrixU().col(k).dot(start) * svd.matrixU().col(k);
    }
  }
  const double mx = u.cwiseAbs().maxCoeff();
  if (!(mx > 1e-12)) {
    throw Error(ErrorCode::invalid_argument,
                "degenerate synthetic design: no non-trivial bias direction");
  }
  return u / mx;
}

double ks_distance_normal(std::vector<double> sample) {
  if (sample.empty()) return 0.0;
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = normal_cdf(sample[i]);
    d = std::max(d, std::max(static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n));
  }
  return d;
}

SimulationOutcome empirical_coverage(const SimulationPlan& plan) {
  require_replicates(plan);
  if (plan.scenario != Scenario::coverage_constant &&
      plan.scenario != Scenario::coverage_unbiased &&
      plan.scenario != Scenario::coverage_biased_noisy) {
    throw Error(ErrorCode::invalid_argument, "empirical_coverage needs a coverage scenario");
  }
  const auto& p = params_as<CoverageParams>(plan, "empirical_coverage");
  const EvalScheme scheme = EvalScheme::create(p.alpha, p.omega);
  const double bias = plan.scenario == Scenario::coverage_unbiased ? 0.0 : p.bias;
  const double tau = plan.scenario == Scenario::coverage_constant ? 0.0 : p.noise_sd;
  if (!(tau >= 0.0)) throw Error(ErrorCode::invalid_argument, "noise_sd must be >= 0");

  const double sigma = scheme.sigma();
  const double omega = scheme.omega();
  const auto hits = run_replicates<std::uint8_t>(plan.replicates, plan.threads, [&](std::size_t r) {
    Rng rng(derive_seed(plan.seed, r));
    const double center = p.theta_true + sigma * rng.normal();
    const double estimate = p.theta_true + bias + (tau > 0.0 ? tau * rng.normal() : 0.0);
    return static_cast<std::uint8_t>(std::fabs(estimate - center) < omega ? 1 : 0);
  });
  std::size_t count = 0;
  for (auto h : hits) count += h;
  return rate_outcome(std::string(to_string(plan.scenario)) + " bias=" + fmt_double(bias) +
                          " tau=" + fmt_double(tau) + " omega=" + fmt_double(omega),
                      count, plan.replicates, biased_noisy_coverage(bias, tau * tau, scheme));
}

SimulationOutcome test_calibration(const SimulationPlan& plan) {
  require_replicates(plan);
  if (plan.scenario != Scenario::z_calibration && plan.scenario != Scenario::b_calibration) {
    throw Error(ErrorCode::invalid_argument, "test_calibration needs a calibration scenario");
  }
  const auto& p = params_as<CalibrationParams>(plan, "test_calibration");
  const bool use_z = plan.scenario == Scenario::z_calibration;
  const auto& design = p.design;

  std::vector<double> stats;
  try {
    stats = run_replicates<double>(plan.replicates, plan.threads, [&](std::size_t r) {
      const auto households = simulate_households(design.true_weights, design.households,
                                                  design.dispersion, derive_seed(plan.seed, r));
      const WeightEstimate est = estimate_weights(households, "survey");
      const TestResult res = use_z ? z_test(design.prices, est, design.true_weights)
                                   : b_test(design.prices, est, design.true_weights);
      return res.statistic;
    });
  } catch (const Error& e) {
    if (e.code() == ErrorCode::degenerate_test) {
      throw Error(ErrorCode::invalid_argument,
                  std::string("degenerate synthetic design: ") + e.what());
    }
    throw;
  }
  const double crit = normal_quantile(1.0 - 0.5 * p.level);
  std::size_t rejections = 0;
  for (double z : stats) {
    if (std::fabs(z) > crit) ++rejections;
  }
  SimulationOutcome o = rate_outcome(
      std::string(use_z ? "Z" : "B") + "-test size at level " + fmt_double(p.level), rejections,
      plan.replicates, p.level);
  o.ks_distance = ks_distance_normal(std::move(stats));
  return o;
}

std::vector<SimulationOutcome> power_curve(const SimulationPlan& plan) {
  require_replicates(plan);
  if (plan.scenario != Scenario::power_curve) {
    throw Error(ErrorCode::invalid_argument, "power_curve needs the power_curve scenario");
  }
  const auto& p = params_as<PowerParams>(plan, "power_curve");
  if (p.magnitudes.empty()) {
    throw Error(ErrorCode::invalid_argument, "power_curve: empty magnitude grid");
  }
  const auto& design = p.design;
  const Vector u = bias_direction(design, p.direction);
  std::vector<WeightVector> proxies;
  for (double k : p.magnitudes) {
    const Vector shifted = design.true_weights.values() + k * u;
    if ((shifted.array() < 0.0).any()) {
      throw Error(ErrorCode::invalid_argument,
                  "power_curve: magnitude " + fmt_double(k) + " makes a proxy weight negative");
    }
    proxies.push_back(WeightVector::create(shifted, "proxy k=" + fmt_double(k)));
  }
  const double crit = normal_quantile(1.0 - 0.5 * p.level);
  const std::size_t K = proxies.size();

  const auto rejections = run_replicates<std::vector<std::uint8_t>>(
      plan.replicates, plan.threads, [&](std::size_t r) {
        const auto households = simulate_households(design.true_weights, design.households,
                                                    design.dispersion, derive_seed(plan.seed, r));
        const WeightEstimate est = estimate_weights(households, "survey");
        std::vector<std::uint8_t> flags(2 * K);
        for (std::size_t k = 0; k < K; ++k) {
          flags[2 * k] = std::fabs(z_test(design.prices, est, proxies[k]).statistic) > crit;
          flags[2 * k + 1] = std::fabs(b_test(design.prices, est, proxies[k]).statistic) > crit;
        }
        return flags;
      });

  const char* dir = p.direction == BiasDirection::trend_aligned ? "trend-aligned" : "trend-orthogonal";
  std::vector<SimulationOutcome> out;
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t which = 0; which < 2; ++which) {
      std::size_t hits = 0;
      for (const auto& f : rejections) hits += f[2 * k + which];
      out.push_back(rate_outcome(std::string(which == 0 ? "Z" : "B") + "-test power, " + dir +
                                     " shift " + fmt_double(p.magnitudes[k]),
                                 hits, plan.replicates, p.level));
    }
  }
  return out;
}

SimulationOutcome mse_unbiasedness(const SimulationPlan& plan) {
  require_replicates(plan);
  if (plan.scenario != Scenario::mse_unbiasedness) {
    throw Error(ErrorCode::invalid_argument, "mse_unbiasedness needs the mse scenario");
  }
  const auto& p = params_as<MseParams>(plan, "mse_unbiasedness");
  if (!(p.audit_variance >= 0.0)) {
    throw Error(ErrorCode::invalid_argument, "audit variance must be >= 0");
  }
  const double sd = std::sqrt(p.audit_variance);
  const double theta_star = p.theta_true + p.bias;
  const auto values = run_replicates<double>(plan.replicates, plan.threads, [&](std::size_t r) {
    Rng rng(derive_seed(plan.seed, r));
    const double audit = p.theta_true + sd * rng.normal();
    double v_hat = p.audit_variance;
    if (p.variance_df > 0 && p.audit_variance > 0.0) {
      const double df = static_cast<double>(p.variance_df);
      v_hat = p.audit_variance * rng.chi_square(df) / df;
    }
    return mse_estimate(theta_star, audit, v_hat).value;
  });
  const MeanSd ms = mean_sd(values);
  std::size_t negatives = 0;
  for (double v : values) negatives += v < 0.0 ? 1 : 0;

  SimulationOutcome o;
  o.label = "mse bias=" + fmt_double(p.bias) + " audit_var=" + fmt_double(p.audit_variance);
  o.point = ms.mean;
  o.target = p.bias * p.bias;
  o.replicates_used = plan.replicates;
  o.mc_stderr = ms.sd / std::sqrt(static_cast<double>(plan.replicates));
  o.z_score = o.mc_stderr > 0.0 ? (o.point - o.target) / o.mc_stderr : 0.0;
  o.negative_fraction = static_cast<double>(negatives) / static_cast<double>(plan.replicates);
  return o;
}

SimulationOutcome delta_method_check(const SimulationPlan& plan) {
  require_replicates(plan);
  if (plan.scenario != Scenario::delta_method_check) {
    throw Error(ErrorCode::invalid_argument, "delta_method_check needs the delta scenario");
  }
  if (plan.replicates < 2) {
    throw Error(ErrorCode::invalid_argument, "delta_method_check needs at least 2 replicates");
  }
  const auto& p = params_as<DeltaParams>(plan, "delta_method_check");
  const EvalScheme scheme = EvalScheme::create(p.alpha, p.omega);
  if (!(p.audit_variance > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "delta_method_check needs a positive audit variance");
  }
  const double sd = std::sqrt(p.audit_variance);
  const bool constant = p.target == DeltaTarget::constant_coverage;
  if (!constant && p.variance_df < 1) {
    throw Error(ErrorCode::invalid_argument, "unbiased coverage check needs variance_df >= 1");
  }
  const double df = static_cast<double>(p.variance_df);
  const double theta_star = p.theta_true + p.bias;

  const auto values = run_replicates<double>(plan.replicates, plan.threads, [&](std::size_t r) {
    Rng rng(derive_seed(plan.seed, r));
    if (constant) {
      return coverage_of_constant(theta_star, p.theta_true + sd * rng.normal(), scheme);
    }
    const double v_hat = p.audit_variance * rng.chi_square(df) / df;
    return coverage_of_unbiased(v_hat, scheme);
  });
  const MeanSd ms = mean_sd(values);

  SimulationOutcome o;
  o.replicates_used = plan.replicates;
  o.point = ms.sd;
  o.mc_stderr = ms.sd / std::sqrt(2.0 * (static_cast<double>(plan.replicates) - 1.0));
  if (constant) {
    const CoverageEstimate ce = estimate_coverage(theta_star, p.theta_true, p.audit_variance, scheme);
    o.target = std::sqrt(ce.variance);
    o.label = "sd of plug-in coverage, u=" + fmt_double(p.bias / scheme.sigma()) +
              " omega=" + fmt_double(p.omega);
  } else {
    const CoverageEstimate ce = estimate_unbiased_coverage(
        p.audit_variance, 2.0 * p.audit_variance * p.audit_variance / df, scheme);
    o.target = std::sqrt(ce.variance);
    o.alt_target = std::sqrt(*ce.variance_alt_factor);
    o.label = "sd of unbiased-estimator coverage, df=" + std::to_string(p.variance_df) +
              " omega=" + fmt_double(p.omega);
  }
  o.z_score = o.mc_stderr > 0.0 ? (o.point - o.target) / o.mc_stderr : 0.0;
  o.relative_error = o.target > 0.0 ? o.point / o.target - 1.0 : 0.0;
  return o;
}

namespace {

std::size_t scaled(std::size_t base, double scale) {
  const double r = std::round(static_cast<double>(base) * scale);
  return r < 2.0 ? 2 : static_cast<std::size_t>(r);
}

bool within_z(const SimulationOutcome& o, double limit = 3.0) {
  return std::fabs(o.z_score) < limit;
}

}  // namespace

std::vector<VerificationCheck> run_verification_suite(const VerificationOptions& options) {
  if (!(options.replicate_scale > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "replicate scale must be positive");
  }
  std::vector<VerificationCheck> checks;
  std::uint64_t stream = 0;
  auto next_seed = [&]() { return derive_seed(options.seed, 1'000'000 + stream++); };
  auto plan = [&](std::size_t base, Scenario s, ScenarioParams params) {
    SimulationPlan pl;
    pl.replicates = scaled(base, options.replicate_scale);
    pl.seed = next_seed();
    pl.scenario = s;
    pl.parameters = std::move(params);
    pl.threads = options.threads;
    return pl;
  };

  // Closed-form coverage vs. simulation.
  {
    VerificationCheck c;
    c.name = "coverage_closed_forms";
    c.rule = "|z| < 3 at every scenario point";
    const double se = 0.029;
    struct Pt { Scenario s; double omega; double bias; double tau; };
    const Pt pts[] = {
        {Scenario::coverage_constant, 0.058, 0.0, 0.0},
        {Scenario::coverage_constant, 0.058, 0.029, 0.0},
        {Scenario::coverage_constant, 0.02, 0.015, 0.0},
        {Scenario::coverage_unbiased, 0.058, 0.0, se},
        {Scenario::coverage_unbiased, 0.02, 0.0, se},
        {Scenario::coverage_biased_noisy, 0.058, 0.02, 0.01},
        {Scenario::coverage_biased_noisy, 0.058, 0.05, 0.03},
        {Scenario::coverage_biased_noisy, 0.058, 0.174, 0.1},
    };
    c.passed = true;
    for (const auto& pt : pts) {
      CoverageParams cp;
      cp.omega = pt.omega;
      cp.bias = pt.bias;
      cp.noise_sd = pt.tau;
      auto o = empirical_coverage(plan(kCoverageReplicates, pt.s, cp));
      c.passed = c.passed && within_z(o);
      c.outcomes.push_back(std::move(o));
    }
    checks.push_back(std::move(c));
  }

  // Test calibration under H0.
  for (Scenario s : {Scenario::z_calibration, Scenario::b_calibration}) {
    VerificationCheck c;
    c.name = s == Scenario::z_calibration ? "z_test_calibration" : "b_test_calibration";
    c.rule = "rejection rate in [0.040, 0.060] and KS distance < 0.02";
    auto o = test_calibration(plan(kCalibrationReplicates, s, CalibrationParams{}));
    c.passed = o.point >= 0.040 && o.point <= 0.060 && o.ks_distance.value_or(1.0) < 0.02;
    c.outcomes.push_back(std::move(o));
    checks.push_back(std::move(c));
  }

  // Power: trend-aligned bias separates the tests.
  {
    VerificationCheck c;
    c.name = "power_trend_aligned";
    c.rule = "B-test power >= Z-test power + 0.1 at some grid point";
    PowerParams pp;
    pp.direction = BiasDirection::trend_aligned;
    c.outcomes = power_curve(plan(kPowerReplicates, Scenario::power_curve, pp));
    c.passed = false;
    for (std::size_t k = 0; k + 1 < c.outcomes.size(); k += 2) {
      if (c.outcomes[k + 1].point >= c.outcomes[k].point + 0.1) c.passed = true;
    }
    checks.push_back(std::move(c));
  }
  {
    VerificationCheck c;
    c.name = "power_trend_orthogonal";
    c.rule = "every rejection rate within 3 MC standard errors of the nominal size";
    PowerParams pp;
    pp.direction = BiasDirection::trend_orthogonal;
    c.outcomes = power_curve(plan(kPowerReplicates, Scenario::power_curve, pp));
    c.passed = std::all_of(c.outcomes.begin(), c.outcomes.end(),
                           [](const SimulationOutcome& o) { return within_z(o); });
    checks.push_back(std::move(c));
  }

  // MSE estimator.
  {
    VerificationCheck c;
    c.name = "mse_unbiasedness";
    c.rule = "|z| < 3; negative fraction > 0.5 when bias is zero";
    const double v = 0.029 * 0.029;
    MseParams zero;
    zero.audit_variance = v;
    MseParams large = zero;
    large.bias = 2.0 * 0.029;  // bias^2 = 4 v
    auto a = mse_unbiasedness(plan(kMseReplicates, Scenario::mse_unbiasedness, zero));
    auto b = mse_unbiasedness(plan(kMseReplicates, Scenario::mse_unbiasedness, large));
    c.passed = within_z(a) && within_z(b) && a.negative_fraction.value_or(0.0) > 0.5;
    c.outcomes = {std::move(a), std::move(b)};
    checks.push_back(std::move(c));
  }

  // Delta-method standard deviations.
  {
    VerificationCheck c;
    c.name = "delta_method_plugin_coverage";
    c.rule = "|empirical sd / delta-method sd - 1| < 0.15";
    c.passed = true;
    for (double omega : {0.058, 0.02}) {
      const double sigma = EvalScheme::create(0.95, omega).sigma();
      for (double u : {0.3, 0.8, 1.5}) {
        DeltaParams dp;
        dp.target = DeltaTarget::constant_coverage;
        dp.omega = omega;
        dp.bias = u * sigma;
        dp.audit_variance = (0.1 * sigma) * (0.1 * sigma);
        auto o = delta_method_check(plan(kDeltaReplicates, Scenario::delta_method_check, dp));
        c.passed = c.passed && std::fabs(o.relative_error.value_or(1.0)) < 0.15;
        c.outcomes.push_back(std::move(o));
      }
    }
    checks.push_back(std::move(c));
  }
  {
    VerificationCheck c;
    c.name = "delta_method_unbiased_coverage";
    c.rule = "|empirical sd / delta-method sd - 1| < 0.20";
    c.passed = true;
    for (double omega : {0.058, 0.02}) {
      DeltaParams dp;
      dp.target = DeltaTarget::unbiased_coverage;
      dp.omega = omega;
      dp.audit_variance = 0.029 * 0.029;
      dp.variance_df = 199;
      auto o = delta_method_check(plan(kDeltaReplicates, Scenario::delta_method_check, dp));
      c.passed = c.passed && std::fabs(o.relative_error.value_or(1.0)) < 0.20;
      c.outcomes.push_back(std::move(o));
    }
    checks.push_back(std::move(c));
  }
  return checks;
}

}  // namespace auditcov
