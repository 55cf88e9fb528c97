#pragma once

#include <cstdint>
#include <random>

#include "bjlab/types.hpp"

namespace bjlab {

class Space;

/// Seeded source for every random draw in the library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int index(int n) { return static_cast<int>(uniform() * n) % n; }

  cplx complex_normal() { return {normal(), normal()}; }
  cplx unit_phase();
  CVector gaussian(int n);
  /// Gaussian draw normalized in the norm of `space`.
  CVector unit(const Space& space);

  std::uint64_t next_seed() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace bjlab
