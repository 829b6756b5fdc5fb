#include "redox/stats.h"

#include <cmath>
#include <limits>

#include "redox/error.h"

namespace redox {

namespace {

// Lower incomplete gamma P(a,x) by series, for x < a+1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < 500; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper incomplete gamma Q(a,x) by continued fraction, for x >= a+1.
double gamma_q_cf(double a, double x) {
  const double tiny = std::numeric_limits<double>::min() / 1e-30;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double regularized_gamma_q(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw ConfigError("regularized_gamma_q: need a > 0, x >= 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double chi_square_pvalue(double statistic, uint64_t dof) {
  if (dof == 0) throw ConfigError("chi_square_pvalue: zero degrees of freedom");
  return regularized_gamma_q(static_cast<double>(dof) / 2.0, statistic / 2.0);
}

double chi_square_uniform_statistic(const std::vector<uint64_t>& observed) {
  if (observed.empty()) throw ConfigError("chi_square_uniform_statistic: no bins");
  uint64_t total = 0;
  for (uint64_t c : observed) total += c;
  if (total == 0) throw ConfigError("chi_square_uniform_statistic: no samples");
  const double expected = static_cast<double>(total) / static_cast<double>(observed.size());
  double stat = 0.0;
  for (uint64_t c : observed) {
    const double d = static_cast<double>(c) - expected;
    stat += d * d / expected;
  }
  return stat;
}

double uniformity_pvalue(const std::vector<uint64_t>& observed) {
  if (observed.size() < 2) return 1.0;
  return chi_square_pvalue(chi_square_uniform_statistic(observed), observed.size() - 1);
}

}  // namespace redox
