#pragma once

#include "orbitscope/isotropic/classify.hpp"

namespace orbitscope {

// Reflection swapping x_1 and y_1: preserves Im b, has determinant -1 and
// exchanges the two families of maximal isotropic subspaces.
inline RealMatrix class_swapping_reflection(int n) {
  RealMatrix r = RealMatrix::Identity(2 * n, 2 * n);
  r(0, 0) = r(n, n) = 0;
  r(0, n) = r(n, 0) = 1;
  return r;
}

// Graph {x + phi(x)} over Z1 = R^n with phi: Z1 -> Z2 = i R^n skew for Im b.
// Z1 itself is self-dual iff n is even.
inline IsotropicPoint<double> sample_isotropic(const ComplexStructurePtr<double>& structure, Duality d,
                                               Philox4x32& rng, double spread = 1.0,
                                               const TolerancePolicy& tol = {}) {
  const int n = structure->n();
  RealMatrix g = rng.gaussian(n, n);
  RealMatrix phi = spread * (g - g.transpose()) / std::sqrt(2.0);
  RealMatrix b(2 * n, n);
  b << RealMatrix::Identity(n, n), phi;
  if (parity_duality(n, 0) != d) b = class_swapping_reflection(n) * b;
  return IsotropicPoint<double>(structure, b, tol);
}

inline IsotropicPoint<double> sample_isotropic(const ComplexStructurePtr<double>& structure, Duality d,
                                               std::uint64_t seed, const TolerancePolicy& tol = {}) {
  Philox4x32 rng(seed);
  return sample_isotropic(structure, d, rng, 1.0, tol);
}

// An isotropic complement Z2 of V (orthonormal V basis b): start from the
// Euclidean complement U and correct it by V so that Im b vanishes on it.
inline RealMatrix isotropic_complement(const RealMatrix& b, const RealMatrix& g) {
  RealMatrix u = nullspace_basis(RealMatrix(b.transpose()));
  RealMatrix p = b.transpose() * g * u;
  RealMatrix s = u.transpose() * g * u;
  RealMatrix x = -0.5 * p.transpose().fullPivLu().solve(s);
  return u + b * x;
}

// V + Z2 P^{-1} A with A antisymmetric of Frobenius norm delta: stays on the
// isotropic Grassmannian exactly.
inline IsotropicPoint<double> perturb(const IsotropicPoint<double>& v, double delta, Philox4x32& rng,
                                      const TolerancePolicy& tol = {}) {
  const int n = v.n();
  const RealMatrix& g = v.structure().b_imag();
  RealMatrix z2 = isotropic_complement(v.basis(), g);
  RealMatrix p = v.basis().transpose() * g * z2;
  RealMatrix e = rng.gaussian(n, n);
  RealMatrix a = e - e.transpose();
  double norm = a.norm();
  if (norm == 0) return v;
  a *= delta / norm;
  return IsotropicPoint<double>(v.structure_ptr(), v.basis() + z2 * p.fullPivLu().solve(a), tol);
}

}  // namespace orbitscope
