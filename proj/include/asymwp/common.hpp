#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace asymwp {

using Vec = std::vector<double>;
using Rng = std::mt19937_64;

/// +inf marks points outside the effective domain of an extended-real function.
inline constexpr double kInf = std::numeric_limits<double>::infinity();

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double euclidean_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

inline Vec axpy(double alpha, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionError("axpy: length mismatch");
  Vec out(y.begin(), y.end());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] += alpha * x[i];
  return out;
}

inline Vec subtract(std::span<const double> a, std::span<const double> b) {
  return axpy(-1.0, b, a);
}

inline Vec negate(std::span<const double> x) {
  Vec out(x.begin(), x.end());
  for (double& v : out) v = -v;
  return out;
}

inline void require_finite(std::span<const double> x, std::string_view what) {
  for (double v : x)
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": non-finite entry");
}

inline void require_dim(std::span<const double> x, std::size_t dim, std::string_view what) {
  if (x.size() != dim)
    throw DimensionError(std::string(what) + ": expected dimension " + std::to_string(dim) +
                         ", got " + std::to_string(x.size()));
}

/// Sign restriction per coordinate; a vector of these describes an orthant-type cone.
enum class SignConstraint { any, nonneg, nonpos, zero };
using ConeMask = std::vector<SignConstraint>;

inline bool satisfies(const ConeMask& mask, std::span<const double> y) {
  if (mask.size() != y.size()) throw DimensionError("cone mask: length mismatch");
  for (std::size_t i = 0; i < y.size(); ++i) {
    switch (mask[i]) {
      case SignConstraint::any: break;
      case SignConstraint::nonneg: if (y[i] < 0.0) return false; break;
      case SignConstraint::nonpos: if (y[i] > 0.0) return false; break;
      case SignConstraint::zero: if (y[i] != 0.0) return false; break;
    }
  }
  return true;
}

inline ConeMask flip(const ConeMask& mask) {
  ConeMask out = mask;
  for (auto& s : out) {
    if (s == SignConstraint::nonneg) s = SignConstraint::nonpos;
    else if (s == SignConstraint::nonpos) s = SignConstraint::nonneg;
  }
  return out;
}

/// Maps an arbitrary vector into the cone by flipping signs coordinatewise.
inline Vec fold_into(const ConeMask& mask, std::span<const double> y) {
  Vec out(y.begin(), y.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    switch (mask[i]) {
      case SignConstraint::any: break;
      case SignConstraint::nonneg: out[i] = std::abs(out[i]); break;
      case SignConstraint::nonpos: out[i] = -std::abs(out[i]); break;
      case SignConstraint::zero: out[i] = 0.0; break;
    }
  }
  return out;
}

inline std::string to_string(SignConstraint s) {
  switch (s) {
    case SignConstraint::any: return "any";
    case SignConstraint::nonneg: return "nonneg";
    case SignConstraint::nonpos: return "nonpos";
    case SignConstraint::zero: return "zero";
  }
  return "any";
}

inline SignConstraint sign_constraint_from_string(std::string_view s) {
  if (s == "any") return SignConstraint::any;
  if (s == "nonneg") return SignConstraint::nonneg;
  if (s == "nonpos") return SignConstraint::nonpos;
  if (s == "zero") return SignConstraint::zero;
  throw std::invalid_argument("unknown sign constraint '" + std::string(s) + "'");
}

/// Trailing window used as the finite-sequence proxy for limsup:
/// the last `fraction` of the entries, at least `min_len`, at most all of them.
struct TailWindow {
  double fraction = 0.25;
  std::size_t min_len = 5;

  std::size_t start(std::size_t n) const {
    auto len = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n)));
    len = std::clamp<std::size_t>(std::max(len, min_len), std::min<std::size_t>(n, 1), n);
    return n - len;
  }
};

inline double tail_max(std::span<const double> values, const TailWindow& window = {}) {
  if (values.empty()) throw std::invalid_argument("tail_max: empty sequence");
  double m = -kInf;
  for (std::size_t i = window.start(values.size()); i < values.size(); ++i)
    m = std::max(m, values[i]);
  return m;
}

inline Vec gaussian_vector(std::size_t n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec v(n);
  for (double& x : v) x = normal(rng);
  return v;
}

inline Vec uniform_vector(std::size_t n, double lo, double hi, Rng& rng) {
  std::uniform_real_distribution<double> uni(lo, hi);
  Vec v(n);
  for (double& x : v) x = uni(rng);
  return v;
}

/// Derives an independent stream seed for sub-task `index` of a run seeded with `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

}  // namespace asymwp
