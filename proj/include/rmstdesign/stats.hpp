#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rmst {

// Standard normal CDF.
double normal_cdf(double x);

// Standard normal quantile (Wichura's AS 241); absolute error well below 1e-9.
// p must lie in (0, 1).
double normal_quantile(double p);

// Deterministic pairwise summation (order-independent up to the fixed
// recursive split; used for MC aggregation).
double pairwise_sum(std::span<const double> xs);

double mean(std::span<const double> xs);

// Unbiased sample variance (n-1 denominator).
double sample_variance(std::span<const double> xs);

// Lower empirical quantile (inverted-CDF, "type 1"): x_(ceil(p*n)) of the
// sorted sample. Returns values that occur in the sample, so grid-valued
// inputs give grid-valued quantiles.
double quantile_lower(std::vector<double> xs, double p);

}  // namespace rmst
