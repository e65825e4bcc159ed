#pragma once

// Discrete Legendre-Fenchel conjugation on grids and the scalar gauge
// transforms used by the well-posedness harness.
//
// f*(y) = max_x [<y, x> - f(x)] over primal grid points with f(x) finite.
// Dual points outside an optional cone mask are left at +inf, so a second
// conjugation automatically runs over the cone only.

#include <optional>

#include "asymwp/grid.hpp"

namespace asymwp {

namespace detail {

inline void check_conjugate_inputs(const GridFn& f, const GridSpec& dual, const std::optional<ConeMask>& mask,
                                   std::size_t cap) {
  f.validate();
  if (dual.dims() != f.grid.dims()) throw DimensionError("conjugate: dual grid dimension mismatch");
  if (mask && mask->size() != dual.dims()) throw DimensionError("conjugate: cone mask dimension mismatch");
  if (f.grid.size() > cap || dual.size() > cap) throw GridCapExceeded("conjugate: grid size above cap");
}

// out[k] = max_j [ys[k] * xs[j] - v[j]] over finite v[j]; -inf when none is finite.
// Lower convex hull of (xs, v), then a monotone sweep over increasing ys.
struct LineTransform {
  std::vector<double> hx, hv;

  void run(std::span<const double> xs, std::span<const double> v, std::span<const double> ys,
           std::span<double> out) {
    hx.clear();
    hv.clear();
    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (!std::isfinite(v[j])) continue;
      while (hx.size() >= 2) {
        const std::size_t m = hx.size();
        const double cross = (hv[m - 1] - hv[m - 2]) * (xs[j] - hx[m - 2]) -
                             (v[j] - hv[m - 2]) * (hx[m - 1] - hx[m - 2]);
        if (cross >= 0.0) {
          hx.pop_back();
          hv.pop_back();
        } else {
          break;
        }
      }
      hx.push_back(xs[j]);
      hv.push_back(v[j]);
    }
    if (hx.empty()) {
      for (double& o : out) o = -kInf;
      return;
    }
    std::size_t j = 0;
    for (std::size_t k = 0; k < ys.size(); ++k) {
      const double y = ys[k];
      double best = y * hx[j] - hv[j];
      while (j + 1 < hx.size()) {
        const double next = y * hx[j + 1] - hv[j + 1];
        if (next < best) break;
        best = next;
        ++j;
      }
      out[k] = best;
    }
  }
};

inline std::vector<Vec> grid_points(const GridSpec& g) {
  std::vector<Vec> pts(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) pts[i] = g.point(i);
  return pts;
}

}  // namespace detail

/// Exact discrete supremum by enumerating all (dual, primal) pairs. O(N_x * N_y).
inline GridFn conjugate_brute(const GridFn& f, const GridSpec& dual, const std::optional<ConeMask>& mask = {},
                              std::size_t cap = kDefaultGridCap) {
  detail::check_conjugate_inputs(f, dual, mask, cap);
  const std::size_t n = f.grid.dims();
  std::vector<double> xs;  // finite primal points, packed
  std::vector<double> fv;
  xs.reserve(f.grid.size() * n);
  for (std::size_t i = 0; i < f.grid.size(); ++i) {
    if (!std::isfinite(f.values[i])) continue;
    const Vec x = f.grid.point(i);
    xs.insert(xs.end(), x.begin(), x.end());
    fv.push_back(f.values[i]);
  }
  Vec out(dual.size());
  for (std::size_t k = 0; k < dual.size(); ++k) {
    const Vec y = dual.point(k);
    if (mask && !satisfies(*mask, y)) {
      out[k] = kInf;
      continue;
    }
    double best = -kInf;
    for (std::size_t j = 0; j < fv.size(); ++j) {
      double s = 0.0;
      for (std::size_t d = 0; d < n; ++d) s += y[d] * xs[j * n + d];
      best = std::max(best, s - fv[j]);
    }
    out[k] = best;
  }
  return GridFn(dual, std::move(out));
}

/// Same values as conjugate_brute, computed as successive one-dimensional
/// linear-time transforms along each axis.
inline GridFn conjugate_fast(const GridFn& f, const GridSpec& dual, const std::optional<ConeMask>& mask = {},
                             std::size_t cap = kDefaultGridCap) {
  detail::check_conjugate_inputs(f, dual, mask, cap);
  const std::size_t n = f.grid.dims();

  std::vector<std::size_t> shape(n);
  for (std::size_t k = 0; k < n; ++k) shape[k] = f.grid.axis(k).count;
  Vec cur = f.values;
  detail::LineTransform lt;
  Vec xs, ys, line, res;

  for (std::size_t k = 0; k < n; ++k) {
    const Axis& pa = f.grid.axis(k);
    const Axis& da = dual.axis(k);
    xs.resize(pa.count);
    for (std::size_t j = 0; j < pa.count; ++j) xs[j] = pa.at(j);
    ys.resize(da.count);
    for (std::size_t j = 0; j < da.count; ++j) ys[j] = da.at(j);

    std::size_t outer = 1, inner = 1;
    for (std::size_t q = 0; q < k; ++q) outer *= shape[q];
    for (std::size_t q = k + 1; q < n; ++q) inner *= shape[q];
    const std::size_t len_in = shape[k], len_out = da.count;

    Vec next(outer * len_out * inner);
    line.resize(len_in);
    res.resize(len_out);
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t i = 0; i < inner; ++i) {
        for (std::size_t j = 0; j < len_in; ++j) {
          const double v = cur[(o * len_in + j) * inner + i];
          // after the first pass the running partial sup enters with a minus sign
          line[j] = k == 0 ? v : -v;
        }
        lt.run(xs, line, ys, res);
        for (std::size_t q = 0; q < len_out; ++q) next[(o * len_out + q) * inner + i] = res[q];
      }
    }
    cur = std::move(next);
    shape[k] = len_out;
  }

  if (mask) {
    for (std::size_t k = 0; k < dual.size(); ++k)
      if (!satisfies(*mask, dual.point(k))) cur[k] = kInf;
  }
  return GridFn(dual, std::move(cur));
}

/// f* at a single (off-grid) dual point by direct enumeration.
inline double conjugate_at(const GridFn& f, std::span<const double> y) {
  require_dim(y, f.grid.dims(), "conjugate_at");
  double best = -kInf;
  for (std::size_t i = 0; i < f.grid.size(); ++i) {
    if (!std::isfinite(f.values[i])) continue;
    best = std::max(best, dot(y, f.grid.point(i)) - f.values[i]);
  }
  return best;
}

/// Flat primal index attaining f*(y) for every dual point; ties go to the lowest index.
/// Masked-out dual points get the sentinel f.grid.size().
inline std::vector<std::size_t> conjugate_argmax(const GridFn& f, const GridSpec& dual,
                                                 const std::optional<ConeMask>& mask = {}) {
  detail::check_conjugate_inputs(f, dual, mask, kDefaultGridCap);
  const auto pts = detail::grid_points(f.grid);
  std::vector<std::size_t> out(dual.size(), f.grid.size());
  for (std::size_t k = 0; k < dual.size(); ++k) {
    const Vec y = dual.point(k);
    if (mask && !satisfies(*mask, y)) continue;
    double best = -kInf;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (!std::isfinite(f.values[j])) continue;
      const double v = dot(y, pts[j]) - f.values[j];
      if (v > best) {
        best = v;
        out[k] = j;
      }
    }
  }
  return out;
}

/// f** on f's own grid: conjugate onto `dual` (restricted to `mask`), then back.
inline GridFn biconjugate(const GridFn& f, const GridSpec& dual, const std::optional<ConeMask>& mask = {},
                          std::size_t cap = kDefaultGridCap) {
  Vec first = conjugate_fast(f, dual, mask, cap).values;
  bool any_finite = false;
  for (double v : first) any_finite = any_finite || std::isfinite(v);
  if (!any_finite) throw ImproperFunction("biconjugate: cone mask excludes every dual grid point");
  return conjugate_fast(GridFn(dual, std::move(first)), f.grid, std::nullopt, cap);
}

// ---------------------------------------------------------------------------
// Gauges: nonnegative functions on [0, inf) with value 0 at 0.

struct GaugeFn {
  Vec t;       // 0 = t[0] < t[1] < ...
  Vec values;  // >= 0, +inf allowed

  GaugeFn() = default;
  GaugeFn(Vec abscissae, Vec vals) : t(std::move(abscissae)), values(std::move(vals)) { validate(); }

  void validate() const {
    if (t.empty() || t.size() != values.size()) throw std::invalid_argument("GaugeFn: sizes mismatch or empty");
    if (t.front() != 0.0) throw std::invalid_argument("GaugeFn: first abscissa must be 0");
    for (std::size_t i = 1; i < t.size(); ++i)
      if (!(t[i] > t[i - 1])) throw std::invalid_argument("GaugeFn: abscissae must be strictly increasing");
    if (values.front() != 0.0) throw std::invalid_argument("GaugeFn: value at 0 must be 0");
    for (double v : values)
      if (!(v >= 0.0)) throw std::invalid_argument("GaugeFn: values must be nonnegative");
  }
};

/// alpha#(s) = max_j [t_j s - alpha(t_j)].
inline double gauge_conjugate_at(const GaugeFn& alpha, double s) {
  if (!(s >= 0.0)) throw std::invalid_argument("gauge_conjugate: negative abscissa");
  double best = 0.0;
  for (std::size_t j = 0; j < alpha.t.size(); ++j) {
    if (!std::isfinite(alpha.values[j])) continue;
    best = std::max(best, alpha.t[j] * s - alpha.values[j]);
  }
  return best;
}

inline GaugeFn gauge_conjugate(const GaugeFn& alpha, std::span<const double> s_samples) {
  Vec s(s_samples.begin(), s_samples.end());
  for (double v : s)
    if (!(v >= 0.0)) throw std::invalid_argument("gauge_conjugate: negative abscissa");
  Vec out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = gauge_conjugate_at(alpha, s[i]);
  return GaugeFn(std::move(s), std::move(out));
}

/// Sampled map eps -> delta(eps); delta > 0, +inf allowed.
struct DeltaSamples {
  Vec eps;
  Vec delta;
};

/// alpha(t) = t * min{eps : delta(eps) >= t}, +inf when no sample qualifies.
inline GaugeFn gauge_from_delta(const DeltaSamples& d, std::span<const double> t_samples) {
  if (d.eps.empty() || t_samples.empty()) throw std::invalid_argument("gauge_from_delta: empty sample set");
  if (d.eps.size() != d.delta.size()) throw DimensionError("gauge_from_delta: eps/delta length mismatch");
  for (std::size_t i = 0; i < d.eps.size(); ++i) {
    if (!(d.eps[i] > 0.0)) throw std::invalid_argument("gauge_from_delta: eps samples must be positive");
    if (!(d.delta[i] > 0.0)) throw std::invalid_argument("gauge_from_delta: delta must be positive");
  }
  Vec t(t_samples.begin(), t_samples.end());
  Vec values(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    double best = kInf;
    for (std::size_t j = 0; j < d.eps.size(); ++j)
      if (d.delta[j] >= t[i]) best = std::min(best, d.eps[j]);
    values[i] = t[i] == 0.0 ? 0.0 : t[i] * best;
  }
  return GaugeFn(std::move(t), std::move(values));
}

}  // namespace asymwp
