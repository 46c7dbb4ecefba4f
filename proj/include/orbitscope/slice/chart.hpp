#pragma once

#include <memory>

#include "orbitscope/grassmann/subspace.hpp"
#include "orbitscope/isotropic/sampling.hpp"

namespace orbitscope {

// Affine coordinates around a center point. basis(x) is a (non-orthonormal)
// basis of the point with coordinates x; basis(0) is the center basis.
class LocalChart {
 public:
  virtual ~LocalChart() = default;
  virtual int dimension() const = 0;
  virtual const RealMatrix& center_basis() const = 0;
  virtual RealMatrix basis(const RealVector& x) const = 0;
  // Coordinates of span(y); throws ChartError outside the chart domain.
  virtual RealVector coordinates(const RealMatrix& y) const = 0;
  // Differential of the coordinates at the center along the velocity ydot of
  // the center basis.
  virtual RealVector differential(const RealMatrix& ydot) const = 0;
};

using LocalChartPtr = std::shared_ptr<const LocalChart>;

// span(B0 + C0 X) with C0 the Euclidean complement; x = vec(X).
class GrassmannChart final : public LocalChart {
 public:
  explicit GrassmannChart(const RealMatrix& center, const TolerancePolicy& tol = {})
      : b0_(orthonormalize(center)), c0_(orthogonal_complement(b0_, tol)) {}

  int dimension() const override { return static_cast<int>(c0_.cols() * b0_.cols()); }
  const RealMatrix& center_basis() const override { return b0_; }
  const RealMatrix& complement() const { return c0_; }

  RealMatrix basis(const RealVector& x) const override {
    check(x);
    return b0_ + c0_ * Eigen::Map<const RealMatrix>(x.data(), c0_.cols(), b0_.cols());
  }

  RealVector coordinates(const RealMatrix& y) const override {
    RealMatrix head = b0_.transpose() * y;
    Eigen::FullPivLU<RealMatrix> lu(head);
    if (!lu.isInvertible()) throw ChartError("point outside the chart domain");
    RealMatrix x = (c0_.transpose() * y) * lu.inverse();
    return Eigen::Map<const RealVector>(x.data(), x.size());
  }

  RealVector differential(const RealMatrix& ydot) const override {
    RealMatrix x = c0_.transpose() * ydot;
    return Eigen::Map<const RealVector>(x.data(), x.size());
  }

 private:
  void check(const RealVector& x) const {
    if (x.size() != dimension()) throw InputError("chart: coordinate vector has wrong size");
  }
  RealMatrix b0_, c0_;
};

// span(B0 + Z2 P^{-1} A) with Z2 an isotropic complement, P = B0^T G Z2 and A
// antisymmetric; x holds the strict upper triangle of A row by row.
class IsotropicChart final : public LocalChart {
 public:
  IsotropicChart(const RealMatrix& center, const RealMatrix& g)
      : b0_(orthonormalize(center)), n_(static_cast<int>(b0_.cols())) {
    z2_ = isotropic_complement(b0_, g);
    p_ = b0_.transpose() * g * z2_;
    RealMatrix frame(2 * n_, 2 * n_);
    frame << b0_, z2_;
    frame_inverse_ = frame.inverse();
    p_inverse_ = p_.inverse();
  }

  int dimension() const override { return n_ * (n_ - 1) / 2; }
  const RealMatrix& center_basis() const override { return b0_; }
  const RealMatrix& complement() const { return z2_; }

  RealMatrix skew(const RealVector& x) const {
    if (x.size() != dimension()) throw InputError("chart: coordinate vector has wrong size");
    RealMatrix a = RealMatrix::Zero(n_, n_);
    Index c = 0;
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j) {
        a(i, j) = x(c);
        a(j, i) = -x(c++);
      }
    return a;
  }

  RealVector upper(const RealMatrix& a) const {
    RealVector x(dimension());
    Index c = 0;
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j) x(c++) = 0.5 * (a(i, j) - a(j, i));
    return x;
  }

  RealMatrix basis(const RealVector& x) const override { return b0_ + z2_ * (p_inverse_ * skew(x)); }

  RealVector coordinates(const RealMatrix& y) const override {
    RealMatrix c = frame_inverse_ * y;
    Eigen::FullPivLU<RealMatrix> lu(RealMatrix(c.topRows(n_)));
    if (!lu.isInvertible()) throw ChartError("point outside the chart domain");
    return upper(p_ * c.bottomRows(n_) * lu.inverse());
  }

  RealVector differential(const RealMatrix& ydot) const override {
    RealMatrix c = frame_inverse_ * ydot;
    return upper(p_ * c.bottomRows(n_));
  }

 private:
  RealMatrix b0_;
  int n_;
  RealMatrix z2_, p_, p_inverse_, frame_inverse_;
};

}  // namespace orbitscope
