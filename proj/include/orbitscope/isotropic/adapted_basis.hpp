#pragma once

#include "orbitscope/isotropic/classify.hpp"

namespace orbitscope {

// Complex basis z_1..z_n of C^n with Gram z^T z equal to
// [[0,0,I_k],[0,I_{r,s},0],[I_k,0,0]], V = real span of z_1..z_{k+r+s}, i z_1..i z_k.
struct AdaptedBasis {
  int k = 0, r = 0, s = 0;
  ComplexMatrix z;     // n x n, columns z_j
  ComplexMatrix gram;  // z^T z
  double residual = 0;

  ComplexMatrix expected_gram() const {
    const int n = static_cast<int>(z.cols());
    ComplexMatrix e = ComplexMatrix::Zero(n, n);
    for (int j = 0; j < k; ++j) e(j, n - k + j) = e(n - k + j, j) = 1.0;
    for (int j = 0; j < r + s; ++j) e(k + j, k + j) = j < r ? 1.0 : -1.0;
    return e;
  }

  // Real 2n x n basis of V from the adapted vectors.
  RealMatrix span_of_v() const {
    const int n = static_cast<int>(z.cols());
    ComplexMatrix c(n, n);
    c << z.leftCols(k + r + s), Complex(0, 1) * z.leftCols(k);
    return realify(c);
  }
};

inline AdaptedBasis adapted_basis(const IsotropicPoint<double>& v, const TolerancePolicy& tol = {}) {
  const int n = v.n();
  const RealMatrix& b = v.basis();  // orthonormal
  const RealMatrix& gr = v.structure().b_real();
  auto fail = [](const std::string& what) { return ConsistencyError("adapted_basis: " + what); };

  // (1) W = V cap JV, a complex subspace of complex dimension k.
  RealMatrix w = subspace_intersection(b, RealMatrix(v.structure().J() * b), tol);
  if (w.cols() % 2 != 0) throw fail("V cap JV has odd real dimension");
  const int k = static_cast<int>(w.cols() / 2);
  ComplexMatrix zw(n, k);
  if (k > 0) {
    Eigen::JacobiSVD<ComplexMatrix> svd(complexify(w), Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    if (sv(k - 1) <= 1e3 * tol.threshold(sv(0)) || (sv.size() > k && sv(k) > 1e3 * tol.threshold(sv(0))))
      throw fail("V cap JV is not a complex subspace of the expected dimension");
    zw = svd.matrixU().leftCols(k);
  }

  // (2) middle block: Re b orthonormal basis of a complement of W in V.
  RealMatrix u = b * nullspace_basis(RealMatrix(w.transpose() * b), tol);
  if (u.cols() != n - 2 * k) throw fail("complement of W in V has wrong dimension");
  RealMatrix mid(2 * n, u.cols());
  int r = 0, s = 0;
  if (u.cols() > 0) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(RealMatrix(u.transpose() * gr * u));
    const auto& ev = es.eigenvalues();
    double theta = tol.threshold(ev.cwiseAbs().maxCoeff());
    std::vector<Index> pos, neg;
    for (Index j = ev.size() - 1; j >= 0; --j) {
      if (std::abs(ev(j)) <= theta * tol.band) throw fail("Re b degenerates on the complement of W");
      (ev(j) > 0 ? pos : neg).push_back(j);
    }
    r = static_cast<int>(pos.size());
    s = static_cast<int>(neg.size());
    Index c = 0;
    for (auto idx : pos) mid.col(c++) = u * es.eigenvectors().col(idx) / std::sqrt(ev(idx));
    for (auto idx : neg) mid.col(c++) = u * es.eigenvectors().col(idx) / std::sqrt(-ev(idx));
  }
  ComplexMatrix zm = complexify(mid);

  // (3) dual block inside (span_C of middle)^{perp_b}, paired with W.
  ComplexMatrix zt(n, k);
  if (k > 0) {
    ComplexMatrix perp = zm.cols() ? nullspace_basis(ComplexMatrix(zm.transpose()), tol)
                                   : ComplexMatrix(ComplexMatrix::Identity(n, n));
    if (perp.cols() != 2 * k) throw fail("b-orthocomplement of the middle block has wrong dimension");
    ComplexMatrix t = perp - zw * (zw.adjoint() * perp);
    Eigen::JacobiSVD<ComplexMatrix> svd(t, Eigen::ComputeThinU);
    t = svd.matrixU().leftCols(k);
    ComplexMatrix pairing = zw.transpose() * t;
    Eigen::FullPivLU<ComplexMatrix> lu(pairing);
    if (!lu.isInvertible()) throw fail("dual pairing with W is degenerate");
    t = t * lu.inverse();
    ComplexMatrix c = t.transpose() * t;
    zt = t - 0.5 * zw * c;
  }

  AdaptedBasis out;
  out.k = k;
  out.r = r;
  out.s = s;
  out.z = ComplexMatrix(n, n);
  out.z << zw, zm, zt;
  out.gram = out.z.transpose() * out.z;
  out.residual = (out.gram - out.expected_gram()).cwiseAbs().maxCoeff();
  if (out.residual > 1e3 * tol.threshold(1.0)) throw fail("Gram residual exceeds tolerance");
  if (!same_span(out.span_of_v(), b, tol)) throw fail("adapted vectors do not span V");
  return out;
}

}  // namespace orbitscope
