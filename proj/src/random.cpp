#include "hawking/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hawking {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t CounterRng::bits(std::uint64_t counter) const {
  return splitmix64(splitmix64(splitmix64(seed_) ^ stream_) ^ counter);
}

double CounterRng::uniform(std::uint64_t counter) const {
  return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
}

double CounterRng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<double> random_admissible_field(const HemisphereGrid& grid, CounterRng& rng, int degree) {
  // Monomials x^p y^q (z^2)^r with p + q + 2r <= degree.
  struct Term {
    int p, q, r;
    double c;
  };
  std::vector<Term> terms;
  for (int r = 0; 2 * r <= degree; ++r) {
    if (grid.axisym()) {
      if (r > 0) terms.push_back({0, 0, r, rng.normal()});
      continue;
    }
    for (int p = 0; p + 2 * r <= degree; ++p)
      for (int q = 0; p + q + 2 * r <= degree; ++q)
        if (p + q + r > 0) terms.push_back({p, q, r, rng.normal()});
  }
  std::vector<double> f(grid.size(), 0.0);
  for (int i = 0; i < grid.n_theta(); ++i) {
    const double st = std::sin(grid.theta(i));
    const double z2 = std::pow(std::cos(grid.theta(i)), 2);
    for (int j = 0; j < grid.n_phi(); ++j) {
      const double x = st * std::cos(grid.phi(j));
      const double y = st * std::sin(grid.phi(j));
      double acc = 0.0;
      for (const Term& t : terms) acc += t.c * std::pow(x, t.p) * std::pow(y, t.q) * std::pow(z2, t.r);
      f[grid.index(i, j)] = acc;
    }
  }
  double peak = 0.0;
  for (double v : f) peak = std::max(peak, std::abs(v));
  if (peak > 0.0)
    for (double& v : f) v /= peak;
  return f;
}

std::vector<double> random_positive_field(const HemisphereGrid& grid, CounterRng& rng, double spread) {
  std::vector<double> f = random_admissible_field(grid, rng);
  for (double& v : f) v = 1.0 + spread * v;
  return f;
}

std::vector<double> remove_mean(const std::vector<double>& f, const std::vector<double>& weight) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    num += f[k] * weight[k];
    den += weight[k];
  }
  std::vector<double> out(f);
  for (double& v : out) v -= num / den;
  return out;
}

}  // namespace hawking
