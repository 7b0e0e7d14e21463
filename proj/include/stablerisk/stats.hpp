#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "stablerisk/copula.hpp"

namespace stablerisk::stats {

/// Kolmogorov-Smirnov distance between the empirical law of the sample and
/// the continuous distribution function cdf. The sample is sorted in place.
double ks_statistic(std::vector<double>& sample, const std::function<double(double)>& cdf);

/// Asymptotic 1% critical value of the one-sample KS statistic.
double ks_critical_1pct(std::size_t n);

/// Sample Kendall tau (tau-b) in O(n log n).
double kendall_tau(std::span<const double> x, std::span<const double> y);
double kendall_tau(std::span<const UniformPair> pairs);

/// Gaussian kernel density estimate at x of the sorted sample. The bandwidth
/// is half the spread between the order statistics m below and m above the
/// rank of x.
double kernel_density_at(std::span<const double> sorted, double x, std::size_t m);

}  // namespace stablerisk::stats
