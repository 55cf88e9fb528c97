#include "bjlab/random.hpp"

#include <cmath>
#include <numbers>

#include "bjlab/space.hpp"

namespace bjlab {

cplx Rng::unit_phase() {
  return std::polar(1.0, uniform(0.0, 2.0 * std::numbers::pi));
}

CVector Rng::gaussian(int n) {
  CVector v(n);
  for (int i = 0; i < n; ++i) v[i] = complex_normal();
  return v;
}

CVector Rng::unit(const Space& space) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    CVector v = gaussian(space.dim());
    const double nv = space.norm(v);
    if (nv > 1e-12) return v / nv;
  }
  throw LabError("sampling", "could not draw a vector of positive norm in " + space.describe());
}

}  // namespace bjlab
