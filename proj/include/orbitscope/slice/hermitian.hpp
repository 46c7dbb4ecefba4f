#pragma once

#include "orbitscope/slice/subbundle.hpp"

namespace orbitscope {

struct HermitianFrame {
  RealMatrix e_basis;            // 2n x 2k ambient basis of E~
  RealMatrix complex_structure;  // pulled-back i, in e_basis coordinates
  RealMatrix adapted;            // ambient basis (u_1..u_k, I u_1..I u_k)
  RealMatrix gram;               // Re b on `adapted`
  ComplexMatrix hermitian;       // k x k: gram(j,l) + i gram(j,k+l)
  double square_residual = 0;    // |I^2 + 1|
  double hermitian_residual = 0; // |I^T g I - g| on `adapted`
  double threshold = 0;          // theta for the Hermitian check
};

inline RealMatrix complex_unit(int k) {
  RealMatrix j = RealMatrix::Zero(2 * k, 2 * k);
  j.topRightCorner(k, k) = -RealMatrix::Identity(k, k);
  j.bottomLeftCorner(k, k) = RealMatrix::Identity(k, k);
  return j;
}

// Splitting Z = Z1 + Z2 of the complex b-orthocomplement of W + JW into two
// b-isotropic pieces. Fixed at the center (Z1 = E~ there) and carried to
// nearby points by the b-orthogonal projection onto Z_y.
class HermitianSplitting {
 public:
  HermitianSplitting(ComplexStructurePtr<double> structure, const RealMatrix& w_center,
                     const RealMatrix& e_center, const TolerancePolicy& tol = {})
      : structure_(std::move(structure)), tol_(tol) {
    const int n = structure_->n();
    if (e_center.cols() % 2 != 0) throw InputError("hermitian frame: E~ has odd rank");
    k_ = static_cast<int>(e_center.cols() / 2);
    if (w_center.rows() != 2 * n || e_center.rows() != 2 * n)
      throw InputError("hermitian frame: frames do not match the structure");
    z1_ = complex_span(complexify(e_center), k_);
    ComplexMatrix wz = complexify(w_center);
    ComplexMatrix z = complex_kernel(ComplexMatrix(wz.transpose()));
    if (z.cols() != 2 * k_) throw ConsistencyError("hermitian frame: unexpected rank of Z");
    ComplexMatrix u = z - z1_ * (z1_.adjoint() * z);
    ComplexMatrix z2 = complex_span(u, k_);
    z2_ = z2 - 0.5 * z1_ * solve(ComplexMatrix(z1_.transpose() * z2).transpose(),
                                 ComplexMatrix(z2.transpose() * z2));
  }

  int k() const { return k_; }
  const ComplexMatrix& z1() const { return z1_; }
  const ComplexMatrix& z2() const { return z2_; }

  HermitianFrame frame(const RealMatrix& w, const RealMatrix& e) const {
    const int k = k_;
    ComplexMatrix wz = complexify(w);
    ComplexMatrix gram_w = wz.transpose() * wz;
    auto project = [&](const ComplexMatrix& z) -> ComplexMatrix {
      if (wz.cols() == 0) return z;
      return z - wz * solve(gram_w, ComplexMatrix(wz.transpose() * z));
    };
    ComplexMatrix a1 = project(z1_), a2 = project(z2_);
    for (int it = 0; it < 8; ++it) {
      a1 -= 0.5 * a2 * solve(ComplexMatrix(a2.transpose() * a1).transpose(), ComplexMatrix(a1.transpose() * a1));
      a2 -= 0.5 * a1 * solve(ComplexMatrix(a1.transpose() * a2).transpose(), ComplexMatrix(a2.transpose() * a2));
    }
    ComplexMatrix split(a1.rows(), 2 * k);
    split << a1, a2;
    ComplexMatrix c = split.colPivHouseholderQr().solve(complexify(e));
    RealMatrix pi(2 * k, 2 * k);
    pi << c.topRows(k).real(), c.topRows(k).imag();
    Eigen::JacobiSVD<RealMatrix> svd(pi);
    const auto& sv = svd.singularValues();
    if (sv.size() > 0 && !(sv(sv.size() - 1) > 1e-6 * sv(0)))
      throw ChartError("hermitian frame: Z2 meets E~");

    HermitianFrame f;
    f.e_basis = e;
    RealMatrix jk = complex_unit(k);
    RealMatrix pi_inverse = pi.inverse();
    f.complex_structure = pi_inverse * jk * pi;
    f.square_residual = max_abs(RealMatrix(f.complex_structure * f.complex_structure +
                                           RealMatrix::Identity(2 * k, 2 * k)));
    f.adapted = e * pi_inverse;
    f.gram = f.adapted.transpose() * structure_->b_real() * f.adapted;
    f.gram = 0.5 * (f.gram + f.gram.transpose());
    f.hermitian_residual = max_abs(RealMatrix(jk.transpose() * f.gram * jk - f.gram));
    f.threshold = tol_.threshold(structure_->b_real().norm() * std::max(1.0, f.adapted.squaredNorm()));
    f.hermitian = ComplexMatrix(k, k);
    for (int j = 0; j < k; ++j)
      for (int l = 0; l < k; ++l) f.hermitian(j, l) = Complex(f.gram(j, l), f.gram(j, k + l));
    return f;
  }

 private:
  static ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a.fullPivLu().solve(b);
  }

  // Orthonormal basis of the column span, which must have dimension `rank`.
  static ComplexMatrix complex_span(const ComplexMatrix& m, int rank) {
    Eigen::ColPivHouseholderQR<ComplexMatrix> qr(m);
    qr.setThreshold(1e-8);
    if (qr.rank() != rank) throw ConsistencyError("hermitian frame: span has unexpected complex rank");
    return qr.householderQ() * ComplexMatrix::Identity(m.rows(), rank);
  }

  static ComplexMatrix complex_kernel(const ComplexMatrix& m) {
    const Index cols = m.cols();
    if (m.rows() == 0) return ComplexMatrix::Identity(cols, cols);
    Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    Index rank = 0;
    for (Index j = 0; j < sv.size(); ++j) rank += sv(j) > 1e-8 * std::max(1.0, sv(0));
    return svd.matrixV().rightCols(cols - rank);
  }

  ComplexStructurePtr<double> structure_;
  TolerancePolicy tol_;
  int k_ = 0;
  ComplexMatrix z1_, z2_;
};

// k^2 real coordinates of a Hermitian matrix: diagonal, then Re and Im of the
// strict upper triangle row by row.
inline RealVector hermitian_coordinates(const ComplexMatrix& h) {
  const Index k = h.rows();
  RealVector out(k * k);
  Index c = 0;
  for (Index j = 0; j < k; ++j) out(c++) = h(j, j).real();
  for (Index j = 0; j < k; ++j)
    for (Index l = j + 1; l < k; ++l) {
      out(c++) = h(j, l).real();
      out(c++) = h(j, l).imag();
    }
  return out;
}

inline ComplexMatrix hermitian_from_coordinates(const RealVector& x, Index k) {
  if (x.size() != k * k) throw InputError("hermitian coordinates: wrong size");
  ComplexMatrix h = ComplexMatrix::Zero(k, k);
  Index c = 0;
  for (Index j = 0; j < k; ++j) h(j, j) = x(c++);
  for (Index j = 0; j < k; ++j)
    for (Index l = j + 1; l < k; ++l) {
      h(j, l) = Complex(x(c), x(c + 1));
      h(l, j) = std::conj(h(j, l));
      c += 2;
    }
  return h;
}

}  // namespace orbitscope
