#pragma once

#include <memory>

#include "orbitscope/numeric/json_io.hpp"
#include "orbitscope/numeric/linalg.hpp"
#include "orbitscope/numeric/random.hpp"

namespace orbitscope {

// C^n realified as R^{2n} = (x; y) with z = x + i y. For b(z,w) = z^T w:
// Re b = diag(I, -I), Im b = [[0,I],[I,0]] (split signature), and
// Re b(v, w) = Im b(v, J w).
template <class T>
class ComplexStructure {
 public:
  static std::shared_ptr<const ComplexStructure> standard(int n) {
    if (n < 1) throw InputError("complex structure: need n >= 1");
    auto s = std::shared_ptr<ComplexStructure>(new ComplexStructure());
    s->n_ = n;
    s->j_ = Matrix<T>::Zero(2 * n, 2 * n);
    s->b_real_ = Matrix<T>::Zero(2 * n, 2 * n);
    s->b_imag_ = Matrix<T>::Zero(2 * n, 2 * n);
    for (int a = 0; a < n; ++a) {
      s->j_(a, n + a) = T(-1);
      s->j_(n + a, a) = T(1);
      s->b_real_(a, a) = T(1);
      s->b_real_(n + a, n + a) = T(-1);
      s->b_imag_(a, n + a) = s->b_imag_(n + a, a) = T(1);
    }
    return s;
  }

  int n() const { return n_; }
  const Matrix<T>& J() const { return j_; }
  const Matrix<T>& b_real() const { return b_real_; }
  const Matrix<T>& b_imag() const { return b_imag_; }

 private:
  ComplexStructure() = default;
  int n_ = 0;
  Matrix<T> j_, b_real_, b_imag_;
};

template <class T>
using ComplexStructurePtr = std::shared_ptr<const ComplexStructure<T>>;

// A maximal isotropic subspace of (R^{2n}, Im b). Float bases are
// orthonormalized on construction.
template <class T>
class IsotropicPoint {
 public:
  IsotropicPoint(ComplexStructurePtr<T> structure, Matrix<T> basis, const TolerancePolicy& tol = {},
                 bool canonicalize = true)
      : structure_(std::move(structure)), basis_(std::move(basis)) {
    if (!structure_) throw InputError("isotropic point: missing structure");
    const int n = structure_->n();
    if (basis_.rows() != 2 * n || basis_.cols() != n)
      throw InputError("isotropic point: basis must be 2n x n");
    if (certified_rank(basis_, tol, "isotropic basis") != n)
      throw InputError("isotropic point: basis columns are dependent");
    if constexpr (!ScalarTraits<T>::exact) {
      if (canonicalize) basis_ = orthonormalize(basis_);
    }
    Matrix<T> gram = basis_.transpose() * structure_->b_imag() * basis_;
    if constexpr (ScalarTraits<T>::exact) {
      if (!is_zero_matrix(gram)) throw InputError("isotropic point: basis is not isotropic");
    } else {
      double scale = std::max(1.0, basis_.squaredNorm() / n);
      if (max_abs(gram) > tol.band * tol.threshold(scale) * std::max(1, n))
        throw InputError("isotropic point: basis is not isotropic within tolerance");
    }
  }

  const ComplexStructure<T>& structure() const { return *structure_; }
  const ComplexStructurePtr<T>& structure_ptr() const { return structure_; }
  const Matrix<T>& basis() const { return basis_; }
  int n() const { return structure_->n(); }

 private:
  ComplexStructurePtr<T> structure_;
  Matrix<T> basis_;
};

template <class T>
Matrix<T> restrict_real_form(const IsotropicPoint<T>& v) {
  return v.basis().transpose() * v.structure().b_real() * v.basis();
}

template <class T>
double restriction_scale(const IsotropicPoint<T>& v) {
  double b = spectral_norm(v.basis());
  return b * b;
}

template <class T>
IsotropicPoint<T> act(const Matrix<T>& g, const IsotropicPoint<T>& v, const TolerancePolicy& tol = {}) {
  return IsotropicPoint<T>(v.structure_ptr(), g * v.basis(), tol);
}

template <class T>
IsotropicPoint<T> isotropic_from_json(const Json& j, const TolerancePolicy& tol = {}) {
  if (!j.contains("structure") || !j.contains("basis"))
    throw InputError("isotropic point: needs \"structure\" and \"basis\"");
  int n = j.at("structure").at("n").get<int>();
  return IsotropicPoint<T>(ComplexStructure<T>::standard(n), matrix_from_json(j.at("basis")).as<T>(), tol);
}

template <class T>
Json isotropic_to_json(const IsotropicPoint<T>& v) {
  return Json{{"structure", Json{{"n", v.n()}}}, {"basis", matrix_to_json(v.basis())}};
}

}  // namespace orbitscope
