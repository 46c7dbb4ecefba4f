#pragma once

#include "orbitscope/lie/algebra.hpp"

namespace orbitscope {

// ad(X) in the basis of g: column j holds the coordinates of [X, b_j].
template <class T>
Matrix<T> ad_matrix(const MatrixLieAlgebra<T>& g, const Matrix<T>& x) {
  const Index d = g.dimension();
  Matrix<T> out(d, d);
  for (Index j = 0; j < d; ++j) out.col(j) = g.coordinates(commutator(x, g.basis()[j]));
  return out;
}

template <class T>
Matrix<T> killing_form(const MatrixLieAlgebra<T>& g) {
  const Index d = g.dimension();
  std::vector<Matrix<T>> ad;
  for (const auto& b : g.basis()) ad.push_back(ad_matrix(g, b));
  Matrix<T> k(d, d);
  for (Index a = 0; a < d; ++a)
    for (Index b = a; b < d; ++b) k(a, b) = k(b, a) = (ad[a] * ad[b]).trace();
  return k;
}

template <class T>
struct StabilizerElement {
  Matrix<T> v0;              // endomorphism of g in g-coordinates
  T complement_scalar;       // -dim h / dim E
  Matrix<T> h_coordinates;   // columns: basis of h in g-coordinates
  Matrix<T> complement;      // columns: Killing orthocomplement E
};

// Checks h is a subalgebra of g; throws otherwise.
template <class T>
void check_subalgebra(const MatrixLieAlgebra<T>& h, const MatrixLieAlgebra<T>& g,
                      const TolerancePolicy& tol) {
  if (h.ambient_dimension() != g.ambient_dimension())
    throw InputError("subalgebra: algebras act on different spaces");
  auto bound = [&](const Matrix<T>& x) { return 10 * tol.threshold(1.0) * std::max(1.0, max_abs(x)); };
  for (const auto& x : h.basis())
    if (g.span_residual(x) > bound(x)) throw InputError("subalgebra: h is not contained in g");
  const auto& b = h.basis();
  for (size_t a = 0; a < b.size(); ++a)
    for (size_t c = a + 1; c < b.size(); ++c) {
      Matrix<T> br = commutator(b[a], b[c]);
      if (h.span_residual(br) > bound(br)) throw InputError("subalgebra: h is not closed under brackets");
    }
}

// Identity on h, the trace-balancing scalar on the Killing orthocomplement.
template <class T>
StabilizerElement<T> stabilizer_element(const MatrixLieAlgebra<T>& h, const MatrixLieAlgebra<T>& g,
                                        const TolerancePolicy& tol = {}) {
  check_subalgebra(h, g, tol);
  const Index dg = g.dimension(), dh = h.dimension();
  if (dh == 0 || dh == dg) throw InputError("stabilizer_element: need 0 < dim h < dim g");
  Matrix<T> hc(dg, dh);
  for (Index j = 0; j < dh; ++j) hc.col(j) = g.coordinates(h.basis()[j]);
  Matrix<T> k = killing_form(g);
  Matrix<T> e = nullspace_basis(Matrix<T>(hc.transpose() * k), tol);
  const Index de = e.cols();
  Matrix<T> s(dg, dh + de);
  s << hc, e;
  if (de != dg - dh || certified_rank(s, tol, "Killing orthocomplement") != dg)
    throw ConsistencyError("stabilizer_element: Killing orthocomplement is not complementary");
  T c = T(-static_cast<long>(dh)) / T(static_cast<long>(de));
  Matrix<T> d = Matrix<T>::Zero(dg, dg);
  for (Index j = 0; j < dg; ++j) d(j, j) = j < dh ? T(1) : c;
  Matrix<T> v0 = s * d * inverse_of(s);
  return {v0, c, hc, e};
}

// dim {A in g : ad(A) v0 = v0 ad(A)}.
template <class T>
int centralizer_dimension(const Matrix<T>& v0, const MatrixLieAlgebra<T>& g,
                          const TolerancePolicy& tol = {}) {
  const Index d = g.dimension();
  if (v0.rows() != d || v0.cols() != d) throw InputError("centralizer: v0 has wrong size");
  Matrix<T> system(d * d, d);
  for (Index j = 0; j < d; ++j) {
    Matrix<T> ad = ad_matrix(g, g.basis()[j]);
    system.col(j) = vectorize(Matrix<T>(ad * v0 - v0 * ad));
  }
  return static_cast<int>(d - certified_rank(system, tol, "centralizer"));
}

}  // namespace orbitscope
