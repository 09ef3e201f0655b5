#include "seqmine/stats.hpp"

#include <algorithm>
#include <cmath>

namespace seqmine {

namespace {

constexpr int kMaxIterations = 500;
constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;

// Lower regularized incomplete gamma by power series; converges fast for
// x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int n = 0; n < kMaxIterations; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEps)
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  throw NumericalFailure("incomplete gamma series did not converge");
}

// Upper regularized incomplete gamma by modified Lentz continued fraction;
// converges fast for x >= a + 1.
double gamma_q_continued_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIterations; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps)
      return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  throw NumericalFailure("incomplete gamma continued fraction did not converge");
}

// Continued fraction for the regularized incomplete beta (modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) return h;
  }
  throw NumericalFailure("incomplete beta continued fraction did not converge");
}

struct Moments {
  double mean;
  double sample_var;  // divide by n - 1
  std::size_t n;
};

Moments moments(const std::vector<double>& values) {
  Moments m{0.0, 0.0, values.size()};
  for (double v : values) m.mean += v;
  m.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) {
      const double d = v - m.mean;
      ss += d * d;
    }
    m.sample_var = ss / static_cast<double>(values.size() - 1);
  }
  return m;
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0)) throw NumericalFailure("regularized_gamma_p: a must be positive");
  if (x < 0.0) throw NumericalFailure("regularized_gamma_p: x must be nonnegative");
  if (x == 0.0) return 0.0;
  return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_continued_fraction(a, x);
}

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0)) throw NumericalFailure("regularized_gamma_q: a must be positive");
  if (x < 0.0) throw NumericalFailure("regularized_gamma_q: x must be nonnegative");
  if (x == 0.0) return 1.0;
  return x < a + 1.0 ? 1.0 - gamma_p_series(a, x) : gamma_q_continued_fraction(a, x);
}

double regularized_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw NumericalFailure("regularized_beta: a, b must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double front =
      std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
               b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double chi2_sf(double x, double df) {
  if (!(df > 0.0)) throw NumericalFailure("chi2_sf: df must be positive");
  if (!std::isfinite(x)) throw NumericalFailure("chi2_sf: x must be finite");
  if (x <= 0.0) return 1.0;
  return regularized_gamma_q(df / 2.0, x / 2.0);
}

double f_sf(double x, double df1, double df2) {
  if (!(df1 > 0.0) || !(df2 > 0.0)) throw NumericalFailure("f_sf: dfs must be positive");
  if (!std::isfinite(x)) throw NumericalFailure("f_sf: x must be finite");
  if (x <= 0.0) return 1.0;
  return regularized_beta(df2 / 2.0, df1 / 2.0, df2 / (df2 + df1 * x));
}

double t_sf_two_tailed(double t, double df) {
  if (!(df > 0.0)) throw NumericalFailure("t_sf_two_tailed: df must be positive");
  if (!std::isfinite(t)) throw NumericalFailure("t_sf_two_tailed: t must be finite");
  if (t == 0.0) return 1.0;
  return regularized_beta(df / 2.0, 0.5, df / (df + t * t));
}

TestResult chi_square_independence(const ContingencyTable& table, bool yates) {
  const std::size_t r = table.size();
  if (r < 2) throw InputError("chi_square: need at least 2 rows");
  const std::size_t c = table.front().size();
  if (c < 2) throw InputError("chi_square: need at least 2 columns");
  for (const auto& row : table)
    if (row.size() != c) throw InputError("chi_square: ragged table");
  if (yates && (r != 2 || c != 2))
    throw InputError("chi_square: Yates correction applies to 2x2 tables only");

  std::vector<double> row_totals(r, 0.0), col_totals(c, 0.0);
  double grand = 0.0;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      const double v = static_cast<double>(table[i][j]);
      row_totals[i] += v;
      col_totals[j] += v;
      grand += v;
    }
  if (grand < 1.0) throw ZeroExpected("chi_square: empty table");
  for (double t : row_totals)
    if (t == 0.0) throw ZeroExpected("chi_square: all-zero row");
  for (double t : col_totals)
    if (t == 0.0) throw ZeroExpected("chi_square: all-zero column");

  double statistic = 0.0;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      const double expected = row_totals[i] * col_totals[j] / grand;
      double diff = std::fabs(static_cast<double>(table[i][j]) - expected);
      if (yates) diff = std::max(0.0, diff - 0.5);
      statistic += diff * diff / expected;
    }

  TestResult result;
  result.kind = "chi_square";
  result.statistic = statistic;
  result.df1 = static_cast<double>((r - 1) * (c - 1));
  result.p_value = chi2_sf(statistic, result.df1);
  return result;
}

TestResult one_way_anova(const std::vector<std::vector<double>>& groups) {
  const std::size_t k = groups.size();
  if (k < 2) throw InputError("anova: need at least 2 groups");

  std::size_t n = 0;
  double grand_sum = 0.0;
  for (const auto& g : groups) {
    if (g.empty()) throw TooFewValues("anova: empty group");
    n += g.size();
    for (double v : g) grand_sum += v;
  }
  if (n <= k) throw TooFewValues("anova: need more observations than groups");
  const double grand_mean = grand_sum / static_cast<double>(n);

  double ssb = 0.0, ssw = 0.0;
  for (const auto& g : groups) {
    double mean = 0.0;
    for (double v : g) mean += v;
    mean /= static_cast<double>(g.size());
    const double d = mean - grand_mean;
    ssb += static_cast<double>(g.size()) * d * d;
    for (double v : g) ssw += (v - mean) * (v - mean);
  }
  if (ssw == 0.0) throw DegenerateVariance("anova: zero within-group variance");

  TestResult result;
  result.kind = "anova";
  result.df1 = static_cast<double>(k - 1);
  result.df2 = static_cast<double>(n - k);
  result.statistic = (ssb / result.df1) / (ssw / result.df2);
  result.p_value = f_sf(result.statistic, result.df1, result.df2);
  return result;
}

TestResult t_test(const std::vector<double>& a, const std::vector<double>& b, TTestMode mode) {
  if (a.size() < 2 || b.size() < 2) throw TooFewValues("t_test: each sample needs >= 2 values");

  const Moments ma = moments(a);
  const Moments mb = moments(b);
  const double na = static_cast<double>(ma.n);
  const double nb = static_cast<double>(mb.n);

  TestResult result;
  if (mode == TTestMode::Pooled) {
    const double df = na + nb - 2.0;
    const double pooled_var = ((na - 1.0) * ma.sample_var + (nb - 1.0) * mb.sample_var) / df;
    if (pooled_var == 0.0) throw DegenerateVariance("t_test: zero combined variance");
    result.kind = "t_test_pooled";
    result.df1 = df;
    result.statistic = (ma.mean - mb.mean) / std::sqrt(pooled_var * (1.0 / na + 1.0 / nb));
  } else {
    const double va = ma.sample_var / na;
    const double vb = mb.sample_var / nb;
    if (va + vb == 0.0) throw DegenerateVariance("t_test: zero combined variance");
    result.kind = "t_test_welch";
    result.df1 = (va + vb) * (va + vb) /
                 (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
    result.statistic = (ma.mean - mb.mean) / std::sqrt(va + vb);
  }
  result.p_value = t_sf_two_tailed(result.statistic, result.df1);
  return result;
}

}  // namespace seqmine
