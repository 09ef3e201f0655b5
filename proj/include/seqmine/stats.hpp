#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "seqmine/errors.hpp"

namespace seqmine {

struct TestResult {
  std::string kind;       // "chi_square" | "anova" | "t_test_pooled" | "t_test_welch"
  double statistic = 0.0;
  double df1 = 0.0;
  double df2 = 0.0;       // only meaningful for the F test
  double p_value = 1.0;
};

using ContingencyTable = std::vector<std::vector<std::uint64_t>>;

// Pearson chi-square test of independence. Expected counts are
// row_total * col_total / grand_total; a zero row or column raises
// ZeroExpected. `yates` applies the continuity correction (2x2 only).
TestResult chi_square_independence(const ContingencyTable& table, bool yates = false);

// One-way fixed-effects ANOVA across >= 2 groups.
TestResult one_way_anova(const std::vector<std::vector<double>>& groups);

enum class TTestMode { Pooled, Welch };

// Two-sample two-tailed t test. Pooled uses the classic Student statistic
// with df n_a + n_b - 2; Welch uses the Welch-Satterthwaite df.
TestResult t_test(const std::vector<double>& a, const std::vector<double>& b,
                  TTestMode mode = TTestMode::Pooled);

// Upper-tail probabilities. Implemented on the regularized incomplete gamma
// (series / continued fraction, switching at x < a + 1) and the regularized
// incomplete beta (Lentz continued fraction with the symmetry split).
double chi2_sf(double x, double df);
double f_sf(double x, double df1, double df2);
double t_sf_two_tailed(double t, double df);

// Building blocks, exposed for direct verification.
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);
double regularized_beta(double a, double b, double x);

}  // namespace seqmine
