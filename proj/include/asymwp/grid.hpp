#pragma once

#include <functional>
#include <string>
#include <utility>

#include <json.hpp>

#include "asymwp/common.hpp"

namespace asymwp {

inline constexpr std::size_t kDefaultGridCap = std::size_t{1} << 22;
inline constexpr std::size_t kMaxGridDims = 4;

class GridCapExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t count = 2;

  double spacing() const { return (hi - lo) / static_cast<double>(count - 1); }
  // (hi-lo)*i/(count-1) keeps symmetric grids exact at their midpoint
  double at(std::size_t i) const {
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
};

/// Uniform rectangular grid, row-major with the last axis fastest.
class GridSpec {
 public:
  GridSpec() = default;

  explicit GridSpec(std::vector<Axis> axes, std::size_t cap = kDefaultGridCap) : axes_(std::move(axes)) {
    if (axes_.empty()) throw std::invalid_argument("GridSpec: at least one axis required");
    if (axes_.size() > kMaxGridDims)
      throw std::invalid_argument("GridSpec: at most " + std::to_string(kMaxGridDims) + " axes supported");
    size_ = 1;
    for (const Axis& a : axes_) {
      if (!std::isfinite(a.lo) || !std::isfinite(a.hi) || !(a.lo < a.hi))
        throw std::invalid_argument("GridSpec: each axis needs finite lo < hi");
      if (a.count < 2) throw std::invalid_argument("GridSpec: each axis needs count >= 2");
      if (size_ > cap / a.count) throw GridCapExceeded("GridSpec: total points exceed cap " + std::to_string(cap));
      size_ *= a.count;
    }
    strides_.assign(axes_.size(), 1);
    for (std::size_t k = axes_.size() - 1; k > 0; --k) strides_[k - 1] = strides_[k] * axes_[k].count;
  }

  /// Same axes along every dimension.
  static GridSpec cube(std::size_t dims, double lo, double hi, std::size_t count,
                       std::size_t cap = kDefaultGridCap) {
    return GridSpec(std::vector<Axis>(dims, Axis{lo, hi, count}), cap);
  }

  std::size_t dims() const noexcept { return axes_.size(); }
  std::size_t size() const noexcept { return size_; }
  const Axis& axis(std::size_t k) const { return axes_.at(k); }
  const std::vector<Axis>& axes() const noexcept { return axes_; }

  std::vector<std::size_t> unravel(std::size_t flat) const {
    std::vector<std::size_t> idx(axes_.size());
    for (std::size_t k = 0; k < axes_.size(); ++k) {
      idx[k] = flat / strides_[k];
      flat %= strides_[k];
    }
    return idx;
  }

  std::size_t ravel(std::span<const std::size_t> idx) const {
    std::size_t flat = 0;
    for (std::size_t k = 0; k < axes_.size(); ++k) flat += idx[k] * strides_[k];
    return flat;
  }

  Vec point(std::size_t flat) const {
    Vec x(axes_.size());
    for (std::size_t k = 0; k < axes_.size(); ++k) {
      x[k] = axes_[k].at(flat / strides_[k]);
      flat %= strides_[k];
    }
    return x;
  }

  /// Flat index of the grid point nearest to x (coordinates clamped to the box).
  std::size_t nearest(std::span<const double> x) const {
    require_dim(x, dims(), "GridSpec::nearest");
    std::size_t flat = 0;
    for (std::size_t k = 0; k < axes_.size(); ++k) {
      const Axis& a = axes_[k];
      const double r = std::round((x[k] - a.lo) / a.spacing());
      const auto i = static_cast<std::size_t>(std::clamp(r, 0.0, static_cast<double>(a.count - 1)));
      flat += i * strides_[k];
    }
    return flat;
  }

  bool on_boundary(std::size_t flat) const {
    const auto idx = unravel(flat);
    for (std::size_t k = 0; k < idx.size(); ++k)
      if (idx[k] == 0 || idx[k] + 1 == axes_[k].count) return true;
    return false;
  }

  bool contains(std::span<const double> x) const {
    for (std::size_t k = 0; k < axes_.size(); ++k)
      if (x[k] < axes_[k].lo || x[k] > axes_[k].hi) return false;
    return true;
  }

  std::size_t stride(std::size_t k) const { return strides_.at(k); }

 private:
  std::vector<Axis> axes_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 0;
};

class ImproperFunction : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Extended-real function sampled on a grid. +inf is allowed, -inf and NaN are not,
/// and at least one value must be finite.
struct GridFn {
  GridSpec grid;
  Vec values;

  GridFn() = default;
  GridFn(GridSpec g, Vec v) : grid(std::move(g)), values(std::move(v)) { validate(); }

  static GridFn sample(const GridSpec& g, const std::function<double(std::span<const double>)>& fn) {
    Vec v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = fn(g.point(i));
    return GridFn(g, std::move(v));
  }

  void validate() const {
    if (values.size() != grid.size()) throw DimensionError("GridFn: value count does not match grid");
    bool finite_seen = false;
    for (double v : values) {
      if (std::isnan(v) || v == -kInf) throw ImproperFunction("GridFn: NaN or -inf value");
      finite_seen = finite_seen || std::isfinite(v);
    }
    if (!finite_seen) throw ImproperFunction("GridFn: identically +inf");
  }

  double at(std::size_t flat) const { return values.at(flat); }
  double nearest_value(std::span<const double> x) const { return values[grid.nearest(x)]; }
};

inline nlohmann::json grid_to_json(const GridSpec& g) {
  nlohmann::json axes = nlohmann::json::array();
  for (const Axis& a : g.axes()) axes.push_back({{"lo", a.lo}, {"hi", a.hi}, {"count", a.count}});
  return axes;
}

inline GridSpec grid_from_json(const nlohmann::json& j, std::size_t cap = kDefaultGridCap) {
  std::vector<Axis> axes;
  for (const auto& a : j) {
    const auto count = a.at("count").get<long long>();
    if (count < 2) throw std::invalid_argument("grid axis count must be >= 2");
    axes.push_back({a.at("lo").get<double>(), a.at("hi").get<double>(), static_cast<std::size_t>(count)});
  }
  return GridSpec(std::move(axes), cap);
}

inline nlohmann::json gridfn_to_json(const GridFn& f) {
  nlohmann::json values = nlohmann::json::array();
  for (double v : f.values) {
    if (v == kInf) values.push_back("inf");
    else values.push_back(v);
  }
  return {{"grid", grid_to_json(f.grid)}, {"values", values}};
}

inline GridFn gridfn_from_json(const nlohmann::json& j, std::size_t cap = kDefaultGridCap) {
  GridSpec g = grid_from_json(j.at("grid"), cap);
  Vec values;
  for (const auto& v : j.at("values")) {
    if (v.is_string()) {
      if (v.get<std::string>() != "inf") throw std::invalid_argument("GridFn json: only \"inf\" strings allowed");
      values.push_back(kInf);
    } else {
      values.push_back(v.get<double>());
    }
  }
  return GridFn(std::move(g), std::move(values));
}

}  // namespace asymwp
