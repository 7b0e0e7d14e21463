#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

namespace stablerisk::numerics {

/// Gauss-Legendre nodes and weights on [-1, 1], ascending nodes.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussLegendre gauss_legendre(std::size_t n);

namespace detail {

// Kronrod 15 / Gauss 7 abscissae and weights.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <std::size_t K>
struct Segment {
  double a, b;
  std::array<double, K> value;
  std::array<double, K> error;
};

template <std::size_t K, class F>
Segment<K> gk15(const F& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<std::array<double, K>, 15> fv;
  fv[7] = f(centre);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    fv[j] = f(centre - dx);
    fv[14 - j] = f(centre + dx);
  }
  Segment<K> seg{a, b, {}, {}};
  for (std::size_t k = 0; k < K; ++k) {
    double kron = kWgk[7] * fv[7][k];
    double gauss = kWg[3] * fv[7][k];
    for (int j = 0; j < 7; ++j) {
      const double s = fv[j][k] + fv[14 - j][k];
      kron += kWgk[j] * s;
      if (j % 2 == 1) gauss += kWg[j / 2] * s;
    }
    const double mean = 0.5 * kron;
    double resasc = kWgk[7] * std::abs(fv[7][k] - mean);
    for (int j = 0; j < 7; ++j) {
      resasc += kWgk[j] * (std::abs(fv[j][k] - mean) + std::abs(fv[14 - j][k] - mean));
    }
    resasc *= std::abs(half);
    double err = std::abs((kron - gauss) * half);
    if (resasc != 0.0 && err != 0.0) {
      err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    seg.value[k] = kron * half;
    seg.error[k] = err;
  }
  return seg;
}

}  // namespace detail

/// Result of an adaptive integration of a K-vector valued integrand.
template <std::size_t K>
struct AdaptiveResult {
  std::array<double, K> value{};
  std::array<double, K> error{};
  bool converged = false;
  int segments = 0;
};

/// Globally adaptive Gauss-Kronrod (7/15) quadrature for vector-valued
/// integrands. Every component must satisfy err <= max(abs_tol, rel_tol*|I|).
template <std::size_t K, class F>
AdaptiveResult<K> integrate(const F& f, double a, double b, double rel_tol, double abs_tol,
                            int max_segments = 200) {
  using Seg = detail::Segment<K>;
  std::vector<Seg> segs;
  segs.reserve(static_cast<std::size_t>(max_segments));
  segs.push_back(detail::gk15<K>(f, a, b));

  AdaptiveResult<K> out;
  for (;;) {
    std::array<double, K> total{}, err{};
    for (const auto& s : segs) {
      for (std::size_t k = 0; k < K; ++k) {
        total[k] += s.value[k];
        err[k] += s.error[k];
      }
    }
    bool ok = true;
    std::array<double, K> tol{};
    for (std::size_t k = 0; k < K; ++k) {
      tol[k] = std::max(abs_tol, rel_tol * std::abs(total[k]));
      if (!(err[k] <= tol[k])) ok = false;
    }
    out.value = total;
    out.error = err;
    out.segments = static_cast<int>(segs.size());
    if (ok) {
      out.converged = true;
      return out;
    }
    if (static_cast<int>(segs.size()) >= max_segments) return out;

    // Bisect the segment that contributes most to the worst component.
    std::size_t worst_seg = 0;
    double worst_val = -1.0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
      double w = 0.0;
      for (std::size_t k = 0; k < K; ++k) w = std::max(w, segs[i].error[k] / tol[k]);
      if (w > worst_val) {
        worst_val = w;
        worst_seg = i;
      }
    }
    const Seg s = segs[worst_seg];
    const double mid = 0.5 * (s.a + s.b);
    if (!(mid > s.a && mid < s.b)) return out;  // interval exhausted
    segs[worst_seg] = detail::gk15<K>(f, s.a, mid);
    segs.push_back(detail::gk15<K>(f, mid, s.b));
  }
}

/// Scalar convenience wrapper.
template <class F>
AdaptiveResult<1> integrate_scalar(const F& f, double a, double b, double rel_tol,
                                   double abs_tol, int max_segments = 200) {
  auto g = [&f](double x) { return std::array<double, 1>{f(x)}; };
  return integrate<1>(g, a, b, rel_tol, abs_tol, max_segments);
}

/// Bracketed root of a monotone function by TOMS 748; throws NumericalFailure
/// when the bracket does not straddle a sign change.
double find_root(const std::function<double(double)>& f, double lo, double hi, int bits = 50,
                 int max_iter = 200);

/// Numerically stable log(exp(a) + exp(b)).
inline double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

/// log(1 + exp(x)).
inline double softplus(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

// Standard normal.
double normal_cdf(double x);
double normal_sf(double x);
double normal_pdf(double x);
double normal_quantile(double p);

// Student-t with integer degrees of freedom.
double student_t_cdf(int nu, double x);
double student_t_pdf(int nu, double x);
double student_t_quantile(int nu, double p);

}  // namespace stablerisk::numerics
