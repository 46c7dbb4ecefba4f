#pragma once

#include <memory>
#include <optional>

#include "orbitscope/numeric/json_io.hpp"
#include "orbitscope/numeric/linalg.hpp"

namespace orbitscope {

// R^n with a nondegenerate symmetric form. The form is diagonalized once:
// diagonalizing_basis() = T with T^T F T = diag(I_p, -I_q).
template <class T>
class QuadraticSpace {
 public:
  explicit QuadraticSpace(Matrix<T> form, const TolerancePolicy& tol = {}) : form_(std::move(form)) {
    if (form_.rows() != form_.cols()) throw InputError("quadratic space: form is not square");
    if (form_.rows() == 0) throw InputError("quadratic space: dimension must be positive");
    inertia_ = inertia_of(form_, tol);
    if (inertia_.nullity != 0) throw InputError("quadratic space: form is degenerate");
    diagonalize();
  }

  static std::shared_ptr<const QuadraticSpace> standard(int p, int q) {
    if (p < 0 || q < 0 || p + q == 0) throw InputError("quadratic space: need p, q >= 0, p + q > 0");
    Matrix<T> f = Matrix<T>::Zero(p + q, p + q);
    for (int j = 0; j < p + q; ++j) f(j, j) = j < p ? T(1) : T(-1);
    return std::make_shared<const QuadraticSpace>(std::move(f));
  }

  int dimension() const { return static_cast<int>(form_.rows()); }
  int p() const { return inertia_.positive; }
  int q() const { return inertia_.negative; }
  const Matrix<T>& form() const { return form_; }
  const Inertia& inertia() const { return inertia_; }
  bool has_diagonalizing_basis() const { return basis_.has_value(); }

  const Matrix<T>& diagonalizing_basis() const {
    if (!basis_)
      throw InputError(
          "quadratic space: form has no rational basis with values +-1 (diagonal entries are "
          "not rational squares)");
    return *basis_;
  }

 private:
  void diagonalize() {
    const Index n = form_.rows();
    std::vector<std::pair<int, Index>> order;  // (sign, column)
    Matrix<T> t;
    if constexpr (ScalarTraits<T>::exact) {
      auto cd = congruence_diagonalize(form_);
      t = cd.transform;
      for (Index j = 0; j < n; ++j) {
        auto root = rational_sqrt(cd.diagonal[j].sign() > 0 ? cd.diagonal[j] : Rational(-cd.diagonal[j]));
        if (!root) return;
        t.col(j) /= *root;
        order.emplace_back(cd.diagonal[j].sign(), j);
      }
    } else {
      Eigen::SelfAdjointEigenSolver<Matrix<T>> es(form_);
      t = es.eigenvectors();
      for (Index j = 0; j < n; ++j) {
        double ev = es.eigenvalues()(j);
        t.col(j) /= std::sqrt(std::abs(ev));
        order.emplace_back(ev > 0 ? 1 : -1, j);
      }
    }
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    Matrix<T> sorted(n, n);
    for (Index j = 0; j < n; ++j) sorted.col(j) = t.col(order[j].second);
    basis_ = std::move(sorted);
  }

  Matrix<T> form_;
  Inertia inertia_;
  std::optional<Matrix<T>> basis_;
};

template <class T>
using QuadraticSpacePtr = std::shared_ptr<const QuadraticSpace<T>>;

template <class T>
QuadraticSpacePtr<T> quadratic_space_from_json(const Json& j, const TolerancePolicy& tol = {}) {
  if (!j.contains("form")) throw InputError("quadratic space: missing \"form\"");
  return std::make_shared<const QuadraticSpace<T>>(matrix_from_json(j.at("form")).as<T>(), tol);
}

template <class T>
Json quadratic_space_to_json(const QuadraticSpace<T>& v) {
  return Json{{"form", matrix_to_json(v.form())}, {"p", v.p()}, {"q", v.q()}};
}

}  // namespace orbitscope
