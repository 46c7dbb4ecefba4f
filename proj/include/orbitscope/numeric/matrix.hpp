#pragma once

#include <variant>

#include "orbitscope/error.hpp"
#include "orbitscope/numeric/scalar.hpp"

namespace orbitscope {

template <class T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <class T>
using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;

using RealMatrix = Matrix<double>;
using ComplexMatrix = Matrix<Complex>;
using RationalMatrix = Matrix<Rational>;
using RealVector = Vector<double>;
using ComplexVector = Vector<Complex>;

inline RealMatrix to_real(const RationalMatrix& m) {
  RealMatrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = static_cast<double>(m(i, j));
  return out;
}

inline const RealMatrix& to_real(const RealMatrix& m) { return m; }

// Exact: every finite double is a dyadic rational.
inline RationalMatrix to_rational(const RealMatrix& m) {
  RationalMatrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (!std::isfinite(m(i, j))) throw InputError("non-finite entry cannot be made rational");
      out(i, j) = Rational(m(i, j));
    }
  return out;
}

template <class T>
Matrix<T> convert_matrix(const RealMatrix& m) {
  if constexpr (std::is_same_v<T, double>)
    return m;
  else if constexpr (std::is_same_v<T, Rational>)
    return to_rational(m);
  else
    return m.cast<Complex>();
}

// z = x + i y  <->  (x; y).  Multiplication by i becomes J = [[0,-I],[I,0]].
inline RealMatrix realify(const ComplexMatrix& z) {
  RealMatrix out(2 * z.rows(), z.cols());
  out.topRows(z.rows()) = z.real();
  out.bottomRows(z.rows()) = z.imag();
  return out;
}

inline ComplexMatrix complexify(const RealMatrix& v) {
  if (v.rows() % 2 != 0) throw InputError("complexify: row count must be even");
  Eigen::Index n = v.rows() / 2;
  ComplexMatrix out(n, v.cols());
  out.real() = v.topRows(n);
  out.imag() = v.bottomRows(n);
  return out;
}

// Realified complex linear map: (x;y) -> (Ax - By; Bx + Ay) for A + iB.
inline RealMatrix realify_operator(const ComplexMatrix& a) {
  Eigen::Index n = a.rows(), m = a.cols();
  RealMatrix out(2 * n, 2 * m);
  out.topLeftCorner(n, m) = a.real();
  out.topRightCorner(n, m) = -a.imag();
  out.bottomLeftCorner(n, m) = a.imag();
  out.bottomRightCorner(n, m) = a.real();
  return out;
}

template <class T>
bool is_zero_matrix(const Matrix<T>& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (m(i, j) != T(0)) return false;
  return true;
}

template <class T>
double max_abs(const Matrix<T>& m) {
  double out = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      double v;
      if constexpr (std::is_same_v<T, Complex>)
        v = std::abs(m(i, j));
      else
        v = std::abs(to_double(m(i, j)));
      out = std::max(out, v);
    }
  return out;
}

// Field-tagged dense matrix, the carrier used at I/O boundaries.
class ScalarMatrix {
 public:
  ScalarMatrix() : data_(RealMatrix()) {}
  ScalarMatrix(RealMatrix m) : data_(std::move(m)) {}
  ScalarMatrix(ComplexMatrix m) : data_(std::move(m)) {}
  ScalarMatrix(RationalMatrix m) : data_(std::move(m)) {}

  Field field() const { return static_cast<Field>(data_.index()); }
  Eigen::Index rows() const {
    return std::visit([](const auto& m) { return m.rows(); }, data_);
  }
  Eigen::Index cols() const {
    return std::visit([](const auto& m) { return m.cols(); }, data_);
  }

  template <class T>
  const Matrix<T>& get() const {
    if (auto* p = std::get_if<Matrix<T>>(&data_)) return *p;
    throw InputError("field mismatch: matrix is " + std::string(field_name(field())) +
                     ", expected " + std::string(field_name(ScalarTraits<T>::field)));
  }

  // Widening conversions only: rational -> real, real -> rational (exact),
  // real/rational -> complex.
  template <class T>
  Matrix<T> as() const {
    if constexpr (std::is_same_v<T, double>) {
      if (field() == Field::real) return get<double>();
      if (field() == Field::rational) return to_real(get<Rational>());
    } else if constexpr (std::is_same_v<T, Rational>) {
      if (field() == Field::rational) return get<Rational>();
      if (field() == Field::real) return to_rational(get<double>());
    } else {
      if (field() == Field::complex) return get<Complex>();
      return as<double>().template cast<Complex>();
    }
    throw InputError("field mismatch: cannot read " + std::string(field_name(field())) +
                     " matrix as " + std::string(field_name(ScalarTraits<T>::field)));
  }

 private:
  std::variant<RealMatrix, ComplexMatrix, RationalMatrix> data_;
};

}  // namespace orbitscope
