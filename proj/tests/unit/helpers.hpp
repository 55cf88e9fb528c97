#pragma once

#include <initializer_list>

#include "bjlab/bjlab.hpp"

namespace testing_helpers {

inline bjlab::CVector vec(std::initializer_list<bjlab::cplx> v) {
  bjlab::CVector r(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (bjlab::cplx c : v) r[i++] = c;
  return r;
}

inline bjlab::CVector unit(int n, int i) {
  bjlab::CVector e = bjlab::CVector::Zero(n);
  e[i] = 1.0;
  return e;
}

inline double max_abs(const bjlab::CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace testing_helpers
