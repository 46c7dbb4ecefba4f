#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "orbitscope/numeric/matrix.hpp"
#include "orbitscope/numeric/tolerance.hpp"

namespace orbitscope {

using Index = Eigen::Index;

template <class T>
Matrix<T> adjoint_of(const Matrix<T>& m) {
  if constexpr (std::is_same_v<T, Complex>)
    return m.adjoint();
  else
    return m.transpose();
}

// ---------------------------------------------------------------------------
// Exact row reduction.

template <class T>
struct Echelon {
  Matrix<T> reduced;
  std::vector<Index> pivots;
};

template <ExactScalar T>
Echelon<T> row_reduce(Matrix<T> m) {
  std::vector<Index> pivots;
  Index row = 0;
  for (Index col = 0; col < m.cols() && row < m.rows(); ++col) {
    Index p = row;
    while (p < m.rows() && m(p, col) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != row) m.row(p).swap(m.row(row));
    T inv = T(1) / m(row, col);
    for (Index j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (Index i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col) == 0) continue;
      T f = m(i, col);
      for (Index j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return {std::move(m), std::move(pivots)};
}

// ---------------------------------------------------------------------------
// Rank.

struct RankReport {
  Index rank = 0;
  double threshold = 0;
  double smallest_kept = std::numeric_limits<double>::infinity();
  double largest_dropped = 0;
  bool ambiguous = false;

  // log10 distance of the closest singular value to the threshold.
  double margin() const {
    double m = std::numeric_limits<double>::infinity();
    if (std::isfinite(smallest_kept) && smallest_kept > 0)
      m = std::min(m, std::log10(smallest_kept / threshold));
    if (largest_dropped > 0) m = std::min(m, std::log10(threshold / largest_dropped));
    return m;
  }
};

template <class T>
Vector<double> singular_values(const Matrix<T>& m) {
  if constexpr (ScalarTraits<T>::exact) return singular_values(to_real(m));
  else {
  if (m.rows() == 0 || m.cols() == 0) return Vector<double>(0);
  Eigen::JacobiSVD<Matrix<T>> svd(m);
  return svd.singularValues();
  }
}

// Spectral norm (float estimate for exact fields).
template <class T>
double spectral_norm(const Matrix<T>& m) {
  auto s = singular_values(m);
  return s.size() ? s.maxCoeff() : 0.0;
}

template <class T>
RankReport rank_report(const Matrix<T>& m, const TolerancePolicy& tol) {
  RankReport rep;
  if constexpr (ScalarTraits<T>::exact) {
    rep.rank = static_cast<Index>(row_reduce(m).pivots.size());
    return rep;
  } else {
    auto s = singular_values(m);
    double scale = s.size() ? s.maxCoeff() : 0.0;
    rep.threshold = tol.threshold(scale);
    for (Index j = 0; j < s.size(); ++j) {
      if (s(j) > rep.threshold) {
        ++rep.rank;
        rep.smallest_kept = std::min(rep.smallest_kept, s(j));
      } else {
        rep.largest_dropped = std::max(rep.largest_dropped, s(j));
      }
      if (tol.in_band(s(j), rep.threshold)) rep.ambiguous = true;
    }
    return rep;
  }
}

template <class T>
Index rank_of(const Matrix<T>& m, const TolerancePolicy& tol = {}) {
  return rank_report(m, tol).rank;
}

// Rank that must be decided; inside the band it throws.
template <class T>
Index certified_rank(const Matrix<T>& m, const TolerancePolicy& tol, const char* what) {
  auto rep = rank_report(m, tol);
  if (rep.ambiguous)
    throw AmbiguityError(std::string(what) + ": singular value inside tolerance band", {}, {},
                         rep.margin());
  return rep.rank;
}

// ---------------------------------------------------------------------------
// Kernels and spans.

template <class T>
Matrix<T> nullspace_basis(const Matrix<T>& m, const TolerancePolicy& tol = {}) {
  const Index n = m.cols();
  if (m.rows() == 0 || n == 0) return Matrix<T>::Identity(n, n);
  if constexpr (ScalarTraits<T>::exact) {
    auto e = row_reduce(m);
    std::vector<bool> is_pivot(n, false);
    for (auto p : e.pivots) is_pivot[p] = true;
    Matrix<T> out = Matrix<T>::Zero(n, n - static_cast<Index>(e.pivots.size()));
    Index c = 0;
    for (Index f = 0; f < n; ++f) {
      if (is_pivot[f]) continue;
      out(f, c) = 1;
      for (Index i = 0; i < static_cast<Index>(e.pivots.size()); ++i)
        out(e.pivots[i], c) = -e.reduced(i, f);
      ++c;
    }
    return out;
  } else {
    Eigen::JacobiSVD<Matrix<T>> svd(m, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    double theta = tol.threshold(s.size() ? s.maxCoeff() : 0.0);
    Index rank = 0;
    for (Index j = 0; j < s.size(); ++j)
      if (s(j) > theta) ++rank;
    return svd.matrixV().rightCols(n - rank);
  }
}

// Basis of the column span: orthonormal for float fields, a subset of the
// original columns for exact fields.
template <class T>
Matrix<T> column_basis(const Matrix<T>& m, const TolerancePolicy& tol = {}) {
  if (m.cols() == 0 || m.rows() == 0) return Matrix<T>(m.rows(), 0);
  if constexpr (ScalarTraits<T>::exact) {
    auto e = row_reduce(m);
    Matrix<T> out(m.rows(), static_cast<Index>(e.pivots.size()));
    for (Index j = 0; j < out.cols(); ++j) out.col(j) = m.col(e.pivots[j]);
    return out;
  } else {
    Eigen::JacobiSVD<Matrix<T>> svd(m, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    double theta = tol.threshold(s.maxCoeff());
    Index rank = 0;
    for (Index j = 0; j < s.size(); ++j)
      if (s(j) > theta) ++rank;
    return svd.matrixU().leftCols(rank);
  }
}

// Orthonormal basis of the span of m's columns, assuming they are independent.
template <FloatScalar T>
Matrix<T> orthonormalize(const Matrix<T>& m) {
  if (m.cols() == 0) return m;
  Eigen::HouseholderQR<Matrix<T>> qr(m);
  Matrix<T> q = qr.householderQ() * Matrix<T>::Identity(m.rows(), m.cols());
  return q;
}

// Euclidean (Hermitian) orthogonal complement of the column span.
template <class T>
Matrix<T> orthogonal_complement(const Matrix<T>& m, const TolerancePolicy& tol = {}) {
  return nullspace_basis(Matrix<T>(adjoint_of(m)), tol);
}

template <class T>
Matrix<T> subspace_intersection(const Matrix<T>& a, const Matrix<T>& b,
                                const TolerancePolicy& tol = {}) {
  if (a.rows() != b.rows()) throw InputError("subspace_intersection: row counts differ");
  const Index n = a.rows();
  if constexpr (ScalarTraits<T>::exact) {
    Matrix<T> qa = column_basis(a, tol), qb = column_basis(b, tol);
    Matrix<T> stacked(n, qa.cols() + qb.cols());
    stacked << qa, -qb;
    Matrix<T> k = nullspace_basis(stacked, tol);
    return qa * k.topRows(qa.cols());
  } else {
    Matrix<T> qa = column_basis(a, tol), qb = column_basis(b, tol);
    const Index ka = qa.cols(), kb = qb.cols();
    if (ka == 0 || kb == 0) return Matrix<T>(n, 0);
    Matrix<T> stacked(n, ka + kb);
    stacked << qa, -qb;
    Eigen::JacobiSVD<Matrix<T>> svd(stacked, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    double theta = tol.threshold(s.maxCoeff());
    Index rank = 0;
    for (Index j = 0; j < s.size(); ++j) {
      if (tol.in_band(s(j), theta)) throw AmbiguityError("ill-conditioned intersection");
      if (s(j) > theta) ++rank;
    }
    Index dim = ka + kb - rank;
    if (dim == 0) return Matrix<T>(n, 0);
    Matrix<T> k = svd.matrixV().rightCols(dim);
    Matrix<T> raw = qa * k.topRows(ka);
    Eigen::JacobiSVD<Matrix<T>> svd2(raw, Eigen::ComputeThinU);
    return svd2.matrixU().leftCols(dim);
  }
}

// Same column span: projector comparison for floats, rank test for exact.
template <class T>
bool same_span(const Matrix<T>& a, const Matrix<T>& b, const TolerancePolicy& tol = {}) {
  if (a.rows() != b.rows()) return false;
  if constexpr (ScalarTraits<T>::exact) {
    Matrix<T> ab(a.rows(), a.cols() + b.cols());
    ab << a, b;
    Index r = rank_of(ab, tol);
    return r == rank_of(a, tol) && r == rank_of(b, tol);
  } else {
    Matrix<T> qa = column_basis(a, tol), qb = column_basis(b, tol);
    if (qa.cols() != qb.cols()) return false;
    Matrix<T> pa = qa * adjoint_of(qa), pb = qb * adjoint_of(qb);
    double theta = tol.threshold(1.0);
    return max_abs(Matrix<T>(pa - pb)) <= 10 * theta * std::max<double>(1.0, a.rows());
  }
}

// ---------------------------------------------------------------------------
// Determinants and inverses.

template <class T>
T determinant(const Matrix<T>& m) {
  if (m.rows() != m.cols()) throw InputError("determinant: matrix is not square");
  if (m.rows() == 0) return T(1);
  if constexpr (ScalarTraits<T>::exact) {
    Matrix<T> a = m;
    T det = 1;
    const Index n = a.rows();
    for (Index k = 0; k < n; ++k) {
      Index p = k;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return T(0);
      if (p != k) {
        a.row(p).swap(a.row(k));
        det = -det;
      }
      det *= a(k, k);
      for (Index i = k + 1; i < n; ++i) {
        if (a(i, k) == 0) continue;
        T f = a(i, k) / a(k, k);
        for (Index j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      }
    }
    return det;
  } else {
    return m.partialPivLu().determinant();
  }
}

template <class T>
Matrix<T> inverse_of(const Matrix<T>& m) {
  if (m.rows() != m.cols()) throw InputError("inverse: matrix is not square");
  const Index n = m.rows();
  if constexpr (ScalarTraits<T>::exact) {
    Matrix<T> aug(n, 2 * n);
    aug << m, Matrix<T>::Identity(n, n);
    auto e = row_reduce(aug);
    if (static_cast<Index>(e.pivots.size()) < n || (n > 0 && e.pivots[n - 1] >= n))
      throw InputError("inverse: matrix is singular");
    return e.reduced.rightCols(n);
  } else {
    return m.fullPivLu().inverse();
  }
}

// ---------------------------------------------------------------------------
// Inertia.

struct InertiaReport {
  Inertia inertia;
  Inertia as_zero;     // reading when band values count as zero
  Inertia as_nonzero;  // reading when band values count by sign
  double threshold = 0;
  double smallest_nonzero = std::numeric_limits<double>::infinity();
  double largest_zero = 0;
  bool ambiguous = false;

  double margin() const {
    double m = std::numeric_limits<double>::infinity();
    if (std::isfinite(smallest_nonzero) && smallest_nonzero > 0)
      m = std::min(m, std::log10(smallest_nonzero / threshold));
    if (largest_zero > 0) m = std::min(m, std::log10(threshold / largest_zero));
    return m;
  }
};

namespace detail {

inline Integer lcm_of_denominators(const RationalMatrix& a) {
  Integer l = 1;
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      l = boost::multiprecision::lcm(l, Integer(boost::multiprecision::denominator(a(i, j))));
  return l;
}

// Fraction-free symmetric elimination (Bareiss) with symmetric pivoting.
// Pivot signs multiply consecutive leading minors, so sign(d_k) = sign(p_k p_{k-1}).
inline Inertia exact_inertia(const RationalMatrix& form) {
  const Index n = form.rows();
  Integer scale = lcm_of_denominators(form);
  Matrix<Integer> a(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      a(i, j) = boost::multiprecision::numerator(form(i, j) * Rational(scale));
  Inertia out;
  Integer prev = 1;
  Index k = 0;
  for (; k < n; ++k) {
    Index piv = -1;
    for (Index j = k; j < n; ++j)
      if (a(j, j) != 0 && (piv < 0 || abs(a(j, j)) < abs(a(piv, piv)))) piv = j;
    if (piv < 0) {
      Index pi = -1, pj = -1;
      for (Index i = k; i < n && pi < 0; ++i)
        for (Index j = i + 1; j < n; ++j)
          if (a(i, j) != 0) {
            pi = i;
            pj = j;
            break;
          }
      if (pi < 0) break;
      // congruence: row/col pi += row/col pj, making a(pi,pi) = 2 a(pi,pj)
      for (Index c = k; c < n; ++c) a(pi, c) += a(pj, c);
      for (Index r = k; r < n; ++r) a(r, pi) += a(r, pj);
      piv = pi;
    }
    if (piv != k) {
      a.row(piv).swap(a.row(k));
      a.col(piv).swap(a.col(k));
    }
    const Integer p = a(k, k);
    int sd = sign_of(p) * sign_of(prev);
    if (sd > 0)
      ++out.positive;
    else
      ++out.negative;
    for (Index i = k + 1; i < n; ++i)
      for (Index j = k + 1; j < n; ++j) a(i, j) = (p * a(i, j) - a(i, k) * a(k, j)) / prev;
    for (Index i = k + 1; i < n; ++i) a(i, k) = a(k, i) = 0;
    prev = p;
  }
  out.nullity = static_cast<int>(n - k);
  return out;
}

}  // namespace detail

// scale_hint raises the norm estimate used for theta, e.g. to the ambient
// scale when the form is a restriction that may itself be tiny.
template <class T>
InertiaReport inertia_report(const Matrix<T>& form, const TolerancePolicy& tol = {},
                             double scale_hint = 0.0) {
  if (form.rows() != form.cols()) throw InputError("inertia: form is not square");
  InertiaReport rep;
  if constexpr (ScalarTraits<T>::exact) {
    if (form != form.transpose()) throw InputError("inertia: form is not symmetric");
    rep.inertia = detail::exact_inertia(form);
    rep.as_zero = rep.as_nonzero = rep.inertia;
    return rep;
  } else {
    const Index n = form.rows();
    if (n == 0) return rep;
    double scale = max_abs(form);
    Matrix<T> herm = adjoint_of(form);
    if (max_abs(Matrix<T>(form - herm)) > tol.band * tol.threshold(std::max(scale, scale_hint)))
      throw InputError("inertia: form is not symmetric within tolerance");
    Matrix<T> sym = (form + herm) / 2.0;
    Eigen::SelfAdjointEigenSolver<Matrix<T>> es(sym, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    double norm = std::max(ev.cwiseAbs().maxCoeff(), scale_hint);
    rep.threshold = tol.threshold(norm);
    for (Index j = 0; j < n; ++j) {
      double v = ev(j);
      bool band = tol.in_band(v, rep.threshold);
      if (std::abs(v) > rep.threshold) {
        (v > 0 ? rep.inertia.positive : rep.inertia.negative)++;
        rep.smallest_nonzero = std::min(rep.smallest_nonzero, std::abs(v));
      } else {
        rep.inertia.nullity++;
        rep.largest_zero = std::max(rep.largest_zero, std::abs(v));
      }
      if (band) rep.ambiguous = true;
      if (std::abs(v) > rep.threshold / tol.band)
        (v > 0 ? rep.as_nonzero.positive : rep.as_nonzero.negative)++;
      else
        rep.as_nonzero.nullity++;
      if (std::abs(v) > rep.threshold * tol.band)
        (v > 0 ? rep.as_zero.positive : rep.as_zero.negative)++;
      else
        rep.as_zero.nullity++;
    }
    return rep;
  }
}

template <class T>
Inertia inertia_of(const Matrix<T>& form, const TolerancePolicy& tol = {}, double scale_hint = 0.0) {
  auto rep = inertia_report(form, tol, scale_hint);
  if (rep.ambiguous)
    throw AmbiguityError("near-boundary point: eigenvalue inside tolerance band, " +
                             to_string(rep.as_zero) + " or " + to_string(rep.as_nonzero),
                         rep.as_zero, rep.as_nonzero, rep.margin());
  return rep.inertia;
}

// ---------------------------------------------------------------------------
// Congruence diagonalization over the rationals: T^T F T = diag(d).

struct CongruenceDiagonal {
  RationalMatrix transform;
  std::vector<Rational> diagonal;
};

inline CongruenceDiagonal congruence_diagonalize(const RationalMatrix& form) {
  const Index n = form.rows();
  RationalMatrix a = form;
  RationalMatrix t = RationalMatrix::Identity(n, n);
  auto add_into = [&](Index i, Index j) {  // index i += index j
    a.row(i) += a.row(j);
    a.col(i) += a.col(j);
    t.col(i) += t.col(j);
  };
  for (Index k = 0; k < n; ++k) {
    Index piv = -1;
    for (Index j = k; j < n; ++j)
      if (a(j, j) != 0) {
        piv = j;
        break;
      }
    if (piv < 0) {
      for (Index i = k; i < n && piv < 0; ++i)
        for (Index j = k; j < n; ++j)
          if (i != j && a(i, j) != 0) {
            add_into(i, j);
            piv = i;
            break;
          }
      if (piv < 0) break;
    }
    if (piv != k) {
      a.row(piv).swap(a.row(k));
      a.col(piv).swap(a.col(k));
      t.col(piv).swap(t.col(k));
    }
    for (Index i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      Rational f = a(i, k) / a(k, k);
      a.row(i) -= f * a.row(k);
      a.col(i) -= f * a.col(k);
      t.col(i) -= f * t.col(k);
    }
  }
  CongruenceDiagonal out{t, {}};
  for (Index i = 0; i < n; ++i) out.diagonal.push_back(a(i, i));
  return out;
}

inline std::optional<Rational> rational_sqrt(const Rational& q) {
  if (q < 0) return std::nullopt;
  Integer num = boost::multiprecision::numerator(q), den = boost::multiprecision::denominator(q);
  Integer rn = boost::multiprecision::sqrt(num), rd = boost::multiprecision::sqrt(den);
  if (rn * rn != num || rd * rd != den) return std::nullopt;
  return Rational(rn, rd);
}

}  // namespace orbitscope
