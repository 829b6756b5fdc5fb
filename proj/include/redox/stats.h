#pragma once

#include <cstdint>
#include <vector>

namespace redox {

// Regularized upper incomplete gamma Q(a, x).
double regularized_gamma_q(double a, double x);

// Upper-tail p-value of a chi-square statistic with `dof` degrees of freedom.
double chi_square_pvalue(double statistic, uint64_t dof);

// Pearson statistic against equal expected counts; `observed` are bin counts.
double chi_square_uniform_statistic(const std::vector<uint64_t>& observed);

// Convenience: p-value for uniformity over |observed| bins.
double uniformity_pvalue(const std::vector<uint64_t>& observed);

}  // namespace redox
