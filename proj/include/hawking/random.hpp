#pragma once

#include <cstdint>
#include <vector>

#include "hawking/grid.hpp"

namespace hawking {

/// Counter-based generator: draw k of stream (seed, stream) is a pure function
/// of (seed, stream, k), so results do not depend on evaluation order.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {}

  std::uint64_t bits(std::uint64_t counter) const;
  double uniform(std::uint64_t counter) const;  // [0, 1)

  std::uint64_t next_bits() { return bits(counter_++); }
  double uniform() { return uniform(counter_++); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

/// Random polynomial in (x, y, z^2) of the unit hemisphere embedding
/// (z = cos theta), so the field is smooth through the pole and has zero
/// theta-derivative on the equator. Axisymmetric grids only use powers of
/// z^2. Normalized to max |f| = 1.
std::vector<double> random_admissible_field(const HemisphereGrid& grid, CounterRng& rng, int degree = 4);

/// Random strictly positive admissible field 1 + spread * f.
std::vector<double> random_positive_field(const HemisphereGrid& grid, CounterRng& rng, double spread = 0.5);

/// f - (integral of f weight) / (integral of weight), weights given per node.
std::vector<double> remove_mean(const std::vector<double>& f, const std::vector<double>& weight);

}  // namespace hawking
