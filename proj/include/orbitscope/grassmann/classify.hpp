#pragma once

#include <string>
#include <vector>

#include "orbitscope/grassmann/subspace.hpp"

namespace orbitscope {

struct OrbitLabel {
  int p = 0, q = 0, i = 0;
  int r = 0, s = 0, nu = 0;
  int codim = 0;

  bool operator==(const OrbitLabel&) const = default;
  auto operator<=>(const OrbitLabel&) const = default;
};

inline OrbitLabel make_label(int p, int q, int r, int s, int nu) {
  return OrbitLabel{p, q, r + s + nu, r, s, nu, nu * (nu + 1) / 2};
}

inline bool label_nonempty(int p, int q, int r, int s, int nu) {
  return r >= 0 && s >= 0 && nu >= 0 && r + nu <= p && s + nu <= q;
}

inline std::string to_string(const OrbitLabel& l) {
  return "(" + std::to_string(l.r) + "," + std::to_string(l.s) + "," + std::to_string(l.nu) + ")";
}

inline Json label_to_json(const OrbitLabel& l) {
  return Json{{"r", l.r}, {"s", l.s}, {"nu", l.nu}, {"codim", l.codim}};
}

template <class T>
OrbitLabel classify(const SubspacePoint<T>& v, const TolerancePolicy& tol = {}) {
  const auto& amb = v.ambient();
  Inertia in;
  try {
    in = inertia_of(restrict_form(v), tol, restriction_scale(v));
  } catch (const AmbiguityError& e) {
    auto a = make_label(amb.p(), amb.q(), e.as_zero().positive, e.as_zero().negative,
                        e.as_zero().nullity);
    auto b = make_label(amb.p(), amb.q(), e.as_nonzero().positive, e.as_nonzero().negative,
                        e.as_nonzero().nullity);
    throw AmbiguityError("near-boundary point: label " + to_string(a) + " or " + to_string(b),
                         e.as_zero(), e.as_nonzero(), e.margin());
  }
  if (!label_nonempty(amb.p(), amb.q(), in.positive, in.negative, in.nullity))
    throw ConsistencyError("classify: inertia " + to_string(in) + " is not realizable in (" +
                           std::to_string(amb.p()) + "," + std::to_string(amb.q()) + ")");
  return make_label(amb.p(), amb.q(), in.positive, in.negative, in.nullity);
}

// All non-empty orbits, ordered by (r, s).
inline std::vector<OrbitLabel> enumerate_labels(int p, int q, int i) {
  if (p < 0 || q < 0 || i < 0 || i > p + q) throw InputError("enumerate_labels: invalid (p,q,i)");
  std::vector<OrbitLabel> out;
  for (int r = 0; r <= std::min(p, i); ++r)
    for (int s = 0; s <= std::min(q, i - r); ++s) {
      int nu = i - r - s;
      if (label_nonempty(p, q, r, s, nu)) out.push_back(make_label(p, q, r, s, nu));
    }
  return out;
}

// True iff b lies in the closure of a.
inline bool closure_partial_order(const OrbitLabel& a, const OrbitLabel& b) {
  if (a.p != b.p || a.q != b.q || a.i != b.i)
    throw InputError("closure_partial_order: labels belong to different Grassmannians");
  return b.r <= a.r && b.s <= a.s;
}

// In diagonal coordinates: r plus directions, s minus directions, then nu
// isotropic vectors e+ + e- (scaled by 1/sqrt 2 for floats) from unused
// directions; mapped back through the diagonalizing basis.
template <class T>
SubspacePoint<T> standard_representative(const OrbitLabel& label, const QuadraticSpacePtr<T>& ambient,
                                         const TolerancePolicy& tol = {}) {
  const int p = ambient->p(), q = ambient->q();
  if (label.r < 0 || label.s < 0 || label.nu < 0)
    throw InputError("standard_representative: negative label entry");
  if (label.r + label.s + label.nu > p + q)
    throw InputError("standard_representative: subspace dimension exceeds ambient dimension");
  if (!label_nonempty(p, q, label.r, label.s, label.nu))
    throw EmptyOrbitError("empty orbit: label " + to_string(label) + " has no points in (" +
                          std::to_string(p) + "," + std::to_string(q) + ")");
  const int i = label.r + label.s + label.nu;
  Matrix<T> coords = Matrix<T>::Zero(p + q, i);
  int c = 0;
  for (int j = 0; j < label.r; ++j) coords(j, c++) = T(1);
  for (int j = 0; j < label.s; ++j) coords(p + j, c++) = T(1);
  for (int j = 0; j < label.nu; ++j) {
    T w;
    if constexpr (ScalarTraits<T>::exact)
      w = T(1);
    else
      w = T(1) / std::sqrt(T(2));
    coords(label.r + j, c) = w;
    coords(p + label.s + j, c) = w;
    ++c;
  }
  return SubspacePoint<T>(ambient, ambient->diagonalizing_basis() * coords, tol);
}

}  // namespace orbitscope
