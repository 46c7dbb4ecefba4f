#pragma once

#include "orbitscope/grassmann/classify.hpp"

namespace orbitscope {

template <class T>
class TwoStepFlagPoint {
 public:
  TwoStepFlagPoint(SubspacePoint<T> inner, SubspacePoint<T> outer, const TolerancePolicy& tol = {})
      : inner_(std::move(inner)), outer_(std::move(outer)) {
    if (inner_.ambient().dimension() != outer_.ambient().dimension())
      throw InputError("flag: constituents live in different spaces");
    if (inner_.dimension() > outer_.dimension())
      throw InputError("flag: inner subspace is larger than outer");
    Matrix<T> both(outer_.basis().rows(), outer_.dimension() + inner_.dimension());
    both << outer_.basis(), inner_.basis();
    if (certified_rank(both, tol, "flag nesting") != outer_.dimension())
      throw InputError("flag: inner subspace is not contained in outer subspace");
  }

  const SubspacePoint<T>& inner() const { return inner_; }
  const SubspacePoint<T>& outer() const { return outer_; }

 private:
  SubspacePoint<T> inner_;
  SubspacePoint<T> outer_;
};

struct TwoStepFlagLabel {
  OrbitLabel inner;
  OrbitLabel outer;
  int ell = 0;

  bool operator==(const TwoStepFlagLabel&) const = default;
  auto operator<=>(const TwoStepFlagLabel&) const = default;
};

inline std::string to_string(const TwoStepFlagLabel& l) {
  return to_string(l.inner) + "<" + to_string(l.outer) + ",l=" + std::to_string(l.ell);
}

inline Json flag_label_to_json(const TwoStepFlagLabel& l) {
  return Json{{"inner", label_to_json(l.inner)}, {"outer", label_to_json(l.outer)}, {"ell", l.ell}};
}

// Form-orthogonal complement W^perp = ker(B^T F).
template <class T>
Matrix<T> form_orthogonal(const SubspacePoint<T>& w, const TolerancePolicy& tol = {}) {
  return nullspace_basis(Matrix<T>(w.basis().transpose() * w.ambient().form()), tol);
}

template <class T>
TwoStepFlagLabel classify_flag(const TwoStepFlagPoint<T>& f, const TolerancePolicy& tol = {}) {
  TwoStepFlagLabel out{classify(f.inner(), tol), classify(f.outer(), tol), 0};
  const Matrix<T>& b1 = f.inner().basis();
  int radical = static_cast<int>(subspace_intersection(b1, form_orthogonal(f.inner(), tol), tol).cols());
  int against_outer =
      static_cast<int>(subspace_intersection(b1, form_orthogonal(f.outer(), tol), tol).cols());
  if (radical != out.inner.nu)
    throw ConsistencyError("classify_flag: radical dimension disagrees with inner nullity");
  out.ell = radical - against_outer;
  const auto& a = out.inner;
  const auto& b = out.outer;
  bool ok = a.r <= b.r && a.s <= b.s && a.nu - out.ell <= b.nu && out.ell <= b.r - a.r &&
            out.ell <= b.s - a.s && out.ell >= 0;
  if (!ok) throw ConsistencyError("classify_flag: flag constraints violated by " + to_string(out));
  return out;
}

}  // namespace orbitscope
