#pragma once

#include <regex>
#include <string>
#include <vector>

#include "orbitscope/numeric/expm.hpp"
#include "orbitscope/numeric/linalg.hpp"
#include "orbitscope/numeric/random.hpp"

namespace orbitscope {

enum class AlgebraKind { sl, so, so_complex, so_split };

template <class T>
Vector<T> vectorize(const Matrix<T>& m) {
  return Eigen::Map<const Vector<T>>(m.data(), m.size());
}

// A real matrix Lie algebra given by a basis. Coordinates are recovered
// through a fixed left inverse of the vectorized basis.
template <class T>
class MatrixLieAlgebra {
 public:
  MatrixLieAlgebra(AlgebraKind kind, std::string name, int ambient_dim, std::vector<Matrix<T>> basis)
      : kind_(kind), name_(std::move(name)), ambient_dim_(ambient_dim), basis_(std::move(basis)) {
    const Index n2 = Index(ambient_dim_) * ambient_dim_;
    const Index d = static_cast<Index>(basis_.size());
    stacked_ = Matrix<T>(n2, d);
    for (Index j = 0; j < d; ++j) {
      if (basis_[j].rows() != ambient_dim_ || basis_[j].cols() != ambient_dim_)
        throw InputError("lie algebra: basis element has wrong size");
      stacked_.col(j) = vectorize(basis_[j]);
    }
    if (d == 0) {
      left_inverse_ = Matrix<T>(0, n2);
      return;
    }
    if constexpr (ScalarTraits<T>::exact) {
      auto e = row_reduce(Matrix<T>(stacked_.transpose()));
      if (static_cast<Index>(e.pivots.size()) != d) throw InputError("lie algebra: dependent basis");
      Matrix<T> square(d, d);
      for (Index k = 0; k < d; ++k) square.row(k) = stacked_.row(e.pivots[k]);
      Matrix<T> inv = inverse_of(square);
      left_inverse_ = Matrix<T>::Zero(d, n2);
      for (Index k = 0; k < d; ++k) left_inverse_.col(e.pivots[k]) = inv.col(k);
    } else {
      Eigen::CompleteOrthogonalDecomposition<Matrix<T>> cod(stacked_);
      if (cod.rank() != d) throw InputError("lie algebra: dependent basis");
      left_inverse_ = cod.pseudoInverse();
    }
  }

  AlgebraKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  int ambient_dimension() const { return ambient_dim_; }
  int dimension() const { return static_cast<int>(basis_.size()); }
  const std::vector<Matrix<T>>& basis() const { return basis_; }

  Vector<T> coordinates(const Matrix<T>& x) const { return left_inverse_ * vectorize(x); }

  Matrix<T> element(const Vector<T>& c) const {
    Matrix<T> out = Matrix<T>::Zero(ambient_dim_, ambient_dim_);
    for (Index j = 0; j < c.size(); ++j) out += c(j) * basis_[j];
    return out;
  }

  // Distance from x to the span (Frobenius); exact fields give 0 or +inf.
  double span_residual(const Matrix<T>& x) const {
    Vector<T> diff = stacked_ * coordinates(x) - vectorize(x);
    if constexpr (ScalarTraits<T>::exact)
      return is_zero_matrix(Matrix<T>(diff)) ? 0.0 : std::numeric_limits<double>::infinity();
    else
      return diff.norm();
  }

 private:
  AlgebraKind kind_;
  std::string name_;
  int ambient_dim_;
  std::vector<Matrix<T>> basis_;
  Matrix<T> stacked_;
  Matrix<T> left_inverse_;
};

template <class T>
Matrix<T> commutator(const Matrix<T>& x, const Matrix<T>& y) {
  return x * y - y * x;
}

// max over basis pairs of the distance of [X,Y] from the span, relative to |X||Y|.
template <class T>
double commutator_closure_residual(const MatrixLieAlgebra<T>& g) {
  double worst = 0;
  const auto& b = g.basis();
  for (size_t a = 0; a < b.size(); ++a)
    for (size_t c = a + 1; c < b.size(); ++c) worst = std::max(worst, g.span_residual(commutator(b[a], b[c])));
  return worst;
}

template <class T>
Matrix<T> split_form(int n) {
  Matrix<T> f = Matrix<T>::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) f(j, n + j) = f(n + j, j) = T(1);
  return f;
}

template <class T>
Matrix<T> diagonal_form(int p, int q) {
  Matrix<T> f = Matrix<T>::Zero(p + q, p + q);
  for (int j = 0; j < p + q; ++j) f(j, j) = j < p ? T(1) : T(-1);
  return f;
}

template <class T>
MatrixLieAlgebra<T> build_sl(int n) {
  if (n < 1) throw InputError("sl(n): need n >= 1");
  std::vector<Matrix<T>> basis;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) {
        Matrix<T> e = Matrix<T>::Zero(n, n);
        e(i, j) = T(1);
        basis.push_back(e);
      }
  for (int i = 0; i + 1 < n; ++i) {
    Matrix<T> h = Matrix<T>::Zero(n, n);
    h(i, i) = T(1);
    h(i + 1, i + 1) = T(-1);
    basis.push_back(h);
  }
  return MatrixLieAlgebra<T>(AlgebraKind::sl, "sl(" + std::to_string(n) + ")", n, std::move(basis));
}

// {X : X^T F + F X = 0}, basis F^{-1}(E_ij - E_ji).
template <class T>
MatrixLieAlgebra<T> build_so(const Matrix<T>& form, std::string name,
                             AlgebraKind kind = AlgebraKind::so) {
  const int n = static_cast<int>(form.rows());
  Matrix<T> finv = inverse_of(form);
  std::vector<Matrix<T>> basis;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Matrix<T> a = Matrix<T>::Zero(n, n);
      a(i, j) = T(1);
      a(j, i) = T(-1);
      basis.push_back(finv * a);
    }
  return MatrixLieAlgebra<T>(kind, std::move(name), n, std::move(basis));
}

template <class T>
MatrixLieAlgebra<T> build_so_pq(int p, int q) {
  if (p < 0 || q < 0 || p + q < 1) throw InputError("so(p,q): need p, q >= 0 and p + q >= 1");
  return build_so(diagonal_form<T>(p, q), "so(" + std::to_string(p) + "," + std::to_string(q) + ")");
}

// so(n,n) for the split form [[0,I],[I,0]] on R^{2n}.
template <class T>
MatrixLieAlgebra<T> build_so_split(int n) {
  if (n < 1) throw InputError("so(n,n): need n >= 1");
  return build_so(split_form<T>(n), "so(" + std::to_string(n) + "," + std::to_string(n) + ";split)",
                  AlgebraKind::so_split);
}

// so(n,C) realified on R^{2n} = (x; y): [[P,-Q],[Q,P]] with P, Q antisymmetric.
template <class T>
MatrixLieAlgebra<T> build_so_complex(int n) {
  if (n < 1) throw InputError("so(n,C): need n >= 1");
  std::vector<Matrix<T>> basis;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Matrix<T> re = Matrix<T>::Zero(2 * n, 2 * n), im = Matrix<T>::Zero(2 * n, 2 * n);
      re(i, j) = re(n + i, n + j) = T(1);
      re(j, i) = re(n + j, n + i) = T(-1);
      im(n + i, j) = T(1);
      im(n + j, i) = T(-1);
      im(i, n + j) = T(-1);
      im(j, n + i) = T(1);
      basis.push_back(re);
      basis.push_back(im);
    }
  return MatrixLieAlgebra<T>(AlgebraKind::so_complex, "so(" + std::to_string(n) + ",C)", 2 * n,
                             std::move(basis));
}

inline int classical_dimension(AlgebraKind kind, int ambient_dim) {
  const int n = ambient_dim;
  switch (kind) {
    case AlgebraKind::sl: return n * n - 1;
    case AlgebraKind::so: return n * (n - 1) / 2;
    case AlgebraKind::so_split: return n * (n - 1) / 2;
    case AlgebraKind::so_complex: return (n / 2) * (n / 2 - 1);
  }
  return 0;
}

// Tags: "sl(n)", "so(p,q)", "so(n,C)", "so(n,n;split)".
template <class T>
MatrixLieAlgebra<T> build_algebra(const std::string& tag) {
  std::smatch m;
  static const std::regex sl_re(R"(\s*sl\(\s*(\d+)\s*\)\s*)");
  static const std::regex soc_re(R"(\s*so\(\s*(\d+)\s*,\s*C\s*\)\s*)");
  static const std::regex split_re(R"(\s*so\(\s*(\d+)\s*,\s*(\d+)\s*;\s*split\s*\)\s*)");
  static const std::regex so_re(R"(\s*so\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*)");
  if (std::regex_match(tag, m, sl_re)) return build_sl<T>(std::stoi(m[1]));
  if (std::regex_match(tag, m, soc_re)) return build_so_complex<T>(std::stoi(m[1]));
  if (std::regex_match(tag, m, split_re)) {
    if (m[1] != m[2]) throw InputError("so(n,n;split): both indices must agree");
    return build_so_split<T>(std::stoi(m[1]));
  }
  if (std::regex_match(tag, m, so_re)) return build_so_pq<T>(std::stoi(m[1]), std::stoi(m[2]));
  throw InputError("unknown algebra tag: " + tag);
}

// exp of a random element of h with Frobenius norm `scale`.
inline RealMatrix random_group_element(const MatrixLieAlgebra<double>& h, double scale, Philox4x32& rng) {
  if (!(scale >= 0)) throw InputError("random_group_element: scale must be >= 0");
  const int n = h.ambient_dimension();
  if (scale == 0 || h.dimension() == 0) return RealMatrix::Identity(n, n);
  RealVector c(h.dimension());
  for (Index j = 0; j < c.size(); ++j) c(j) = rng.normal();
  RealMatrix x = h.element(c);
  return expm(RealMatrix(x * (scale / x.norm())));
}

inline RealMatrix random_group_element(const MatrixLieAlgebra<double>& h, double scale,
                                       std::uint64_t seed) {
  Philox4x32 rng(seed);
  return random_group_element(h, scale, rng);
}

}  // namespace orbitscope
