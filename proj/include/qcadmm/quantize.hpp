#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qcadmm/rng.hpp"

namespace qcadmm {

// Quantization lattice {t*delta : t integer} and the three schemes used by
// the consensus algorithms.
enum class QuantScheme { probabilistic, rounding, round_down };

struct QuantizerSpec {
  double delta = 1.0;
  QuantScheme scheme = QuantScheme::rounding;
};

namespace detail {

// y/delta with a relative snap so values intended to be exact lattice points
// are not mis-binned by representation error. The deterministic-quantizer
// state space is finite only because lattice membership stays exact.
inline double lattice_ratio(double y, double delta) {
  const double s = y / delta;
  const double r = std::nearbyint(s);
  if (std::abs(s - r) <= 1e-12 * std::max(1.0, std::abs(s))) return r;
  return s;
}

inline void check_quant_args(double y, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("quantizer: delta must be positive");
  if (!std::isfinite(y)) throw std::invalid_argument("quantizer: non-finite input");
}

}  // namespace detail

// Nearest lattice point with half-open cells [(t-1/2)d, (t+1/2)d); the cell
// boundary rounds up.
inline double q_round(double y, double delta) {
  detail::check_quant_args(y, delta);
  return std::floor(detail::lattice_ratio(y, delta) + 0.5) * delta;
}

inline double q_round_down(double y, double delta) {
  detail::check_quant_args(y, delta);
  return std::floor(detail::lattice_ratio(y, delta)) * delta;
}

// Randomized rounding to an adjacent lattice point: for y in [td, (t+1)d),
// picks (t+1)d with probability y/d - t. Unbiased; exact lattice inputs are
// returned unchanged without consuming a draw.
inline double q_prob(double y, double delta, RngStream& rng) {
  detail::check_quant_args(y, delta);
  const double s = detail::lattice_ratio(y, delta);
  const double t = std::floor(s);
  const double frac = s - t;
  if (frac == 0.0) return t * delta;
  return (rng.next_double() < frac) ? (t + 1.0) * delta : t * delta;
}

inline double quantize(double y, double delta, QuantScheme scheme, RngStream& rng) {
  switch (scheme) {
    case QuantScheme::probabilistic: return q_prob(y, delta, rng);
    case QuantScheme::rounding: return q_round(y, delta);
    case QuantScheme::round_down: return q_round_down(y, delta);
  }
  throw std::invalid_argument("quantize: unknown scheme");
}

// Vector quantization applies the scalar map entrywise.
inline std::vector<double> quantize(const std::vector<double>& y, double delta,
                                    QuantScheme scheme, RngStream& rng) {
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = quantize(y[i], delta, scheme, rng);
  return out;
}

}  // namespace qcadmm
