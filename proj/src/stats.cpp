#include "stablerisk/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>

#include "stablerisk/errors.hpp"

namespace stablerisk::stats {

double ks_statistic(std::vector<double>& sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw DomainError("ks_statistic: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_critical_1pct(std::size_t n) { return 1.628 / std::sqrt(static_cast<double>(n)); }

namespace {

// Number of pairs tied in the sorted range, counted run by run.
template <class It, class Eq>
std::int64_t tied_pairs(It first, It last, Eq eq) {
  std::int64_t total = 0, run = 1;
  for (It it = first; it != last; ++it) {
    if (it + 1 != last && eq(*it, *(it + 1))) {
      ++run;
    } else {
      total += run * (run - 1) / 2;
      run = 1;
    }
  }
  return total;
}

// Sorts v by value and returns the number of inversions (merge sort).
std::int64_t count_inversions(std::vector<double>& v, std::vector<double>& buf) {
  std::int64_t swaps = 0;
  const std::size_t n = v.size();
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t lo = 0; lo < n; lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, n), hi = std::min(lo + 2 * width, n);
      std::size_t i = lo, j = mid, k = lo;
      while (i < mid && j < hi) {
        if (v[j] < v[i]) {
          swaps += static_cast<std::int64_t>(mid - i);
          buf[k++] = v[j++];
        } else {
          buf[k++] = v[i++];
        }
      }
      while (i < mid) buf[k++] = v[i++];
      while (j < hi) buf[k++] = v[j++];
    }
    std::swap(v, buf);
  }
  return swaps;
}

}  // namespace

double kendall_tau(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("kendall_tau: need two equal samples");
  const std::size_t n = x.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
  });
  const std::int64_t n0 = static_cast<std::int64_t>(n) * (static_cast<std::int64_t>(n) - 1) / 2;
  const std::int64_t n1 =
      tied_pairs(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] == x[b]; });
  const std::int64_t n3 = tied_pairs(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return x[a] == x[b] && y[a] == y[b];
  });
  std::vector<double> ys(n), buf(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = y[idx[i]];
  const std::int64_t swaps = count_inversions(ys, buf);
  const std::int64_t n2 = tied_pairs(ys.begin(), ys.end(), std::equal_to<>());
  const double num = static_cast<double>(n0 - n1 - n2 + n3 - 2 * swaps);
  const double den = std::sqrt(static_cast<double>(n0 - n1)) * std::sqrt(static_cast<double>(n0 - n2));
  return den == 0.0 ? 0.0 : num / den;
}

double kendall_tau(std::span<const UniformPair> pairs) {
  std::vector<double> x(pairs.size()), y(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    x[i] = pairs[i].u;
    y[i] = pairs[i].v;
  }
  return kendall_tau(x, y);
}

double kernel_density_at(std::span<const double> sorted, double x, std::size_t m) {
  const std::size_t n = sorted.size();
  if (n < 2) throw DomainError("kernel_density_at: sample too small");
  const auto rank = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), x) -
                                             sorted.begin());
  const std::size_t lo = rank > m ? rank - m : 0;
  const std::size_t hi = std::min(n - 1, rank + m);
  const double h = 0.5 * (sorted[hi] - sorted[lo]);
  if (!(h > 0.0)) return std::numeric_limits<double>::infinity();
  // Contributions beyond 8 bandwidths are below double precision.
  const auto first = std::lower_bound(sorted.begin(), sorted.end(), x - 8.0 * h);
  const auto last = std::upper_bound(sorted.begin(), sorted.end(), x + 8.0 * h);
  double sum = 0.0;
  for (auto it = first; it != last; ++it) {
    const double z = (*it - x) / h;
    sum += std::exp(-0.5 * z * z);
  }
  return sum / (static_cast<double>(n) * h * std::sqrt(2.0 * std::numbers::pi));
}

}  // namespace stablerisk::stats
