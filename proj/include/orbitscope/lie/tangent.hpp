#pragma once

#include "orbitscope/grassmann/classify.hpp"
#include "orbitscope/isotropic/adapted_basis.hpp"
#include "orbitscope/lie/algebra.hpp"

namespace orbitscope {

struct StabilizerSubalgebraReport {
  int dim_h = 0;
  int dim_h_cap_p = 0;
  int orbit_dim = 0;
  int orbit_codim = 0;
  int variety_dim = 0;
  double margin = 0;  // log10 distance of the rank decision from theta (inf when exact)
};

inline Json report_to_json(const StabilizerSubalgebraReport& r) {
  Json j{{"dim_h", r.dim_h},
         {"dim_h_cap_p", r.dim_h_cap_p},
         {"orbit_dim", r.orbit_dim},
         {"orbit_codim", r.orbit_codim},
         {"variety_dim", r.variety_dim}};
  if (std::isfinite(r.margin)) j["margin"] = r.margin;
  return j;
}

// Tangent vectors X.V in the chart Hom(V, R^N / V) realized by the Euclidean
// complement C: columns vec(C^T X B).
template <class T>
Matrix<T> tangent_image(const MatrixLieAlgebra<T>& h, const Matrix<T>& basis, const Matrix<T>& complement) {
  const Index rows = complement.cols() * basis.cols();
  Matrix<T> out(rows, h.dimension());
  for (Index j = 0; j < h.dimension(); ++j)
    out.col(j) = vectorize(Matrix<T>(complement.transpose() * h.basis()[j] * basis));
  return out;
}

template <class T>
StabilizerSubalgebraReport tangent_map_rank(const MatrixLieAlgebra<T>& h, const Matrix<T>& basis,
                                            int variety_dim, const TolerancePolicy& tol = {}) {
  if (basis.rows() != h.ambient_dimension())
    throw InputError("tangent_map_rank: point and algebra act on different spaces");
  StabilizerSubalgebraReport rep;
  rep.dim_h = h.dimension();
  rep.variety_dim = variety_dim;
  Matrix<T> image = tangent_image(h, basis, orthogonal_complement(basis, tol));
  RankReport rk;
  if (image.size() > 0) rk = rank_report(image, tol);
  if (rk.ambiguous) throw AmbiguityError("ambiguous orbit dimension", {}, {}, rk.margin());
  rep.orbit_dim = static_cast<int>(rk.rank);
  rep.dim_h_cap_p = rep.dim_h - rep.orbit_dim;
  rep.orbit_codim = variety_dim - rep.orbit_dim;
  rep.margin = rk.margin();
  return rep;
}

template <class T>
StabilizerSubalgebraReport tangent_map_rank(const MatrixLieAlgebra<T>& h, const SubspacePoint<T>& v,
                                            const TolerancePolicy& tol = {}) {
  const int n = v.ambient().dimension(), i = v.dimension();
  return tangent_map_rank(h, v.basis(), i * (n - i), tol);
}

template <class T>
StabilizerSubalgebraReport tangent_map_rank(const MatrixLieAlgebra<T>& h, const IsotropicPoint<T>& v,
                                            const TolerancePolicy& tol = {}) {
  const int n = v.n();
  return tangent_map_rank(h, v.basis(), n * (n - 1) / 2, tol);
}

inline int transversal_dimension(const StabilizerSubalgebraReport& rep, const OrbitLabel& label) {
  int expected = label.nu * (label.nu + 1) / 2;
  if (rep.orbit_codim != expected)
    throw FormulaViolation("orbit codimension " + std::to_string(rep.orbit_codim) + " differs from nu(nu+1)/2 = " +
                           std::to_string(expected) + " at " + to_string(label));
  return rep.orbit_codim;
}

inline int transversal_dimension(const StabilizerSubalgebraReport& rep, const IsotropicLabel& label) {
  int expected = label.k * label.k;
  if (rep.orbit_codim != expected)
    throw FormulaViolation("orbit codimension " + std::to_string(rep.orbit_codim) + " differs from k^2 = " +
                           std::to_string(expected) + " at " + to_string(label));
  return rep.orbit_codim;
}

// Transversal directions at a maximal isotropic point, seen through the
// adapted basis. Tangent directions are skew forms omega(u,v) = <phi u, v> on
// V; the derivative of Re b restricted to W = V cap JV is
// h(u,w) = omega(u,Jw) + omega(w,Ju), a symmetric form on W that must be
// J-invariant (the realification of a Hermitian k x k matrix).
struct HermitianPatternReport {
  int transversal_dim = 0;
  int hermitian_rank = 0;         // rank of the map transversal -> forms on W
  double orbit_residual = 0;      // max |h| over orbit directions
  double hermitian_residual = 0;  // max |J^T h J - h| over transversal directions
};

inline HermitianPatternReport hermitian_transversal_pattern(const MatrixLieAlgebra<double>& h,
                                                            const IsotropicPoint<double>& v,
                                                            const TolerancePolicy& tol = {}) {
  const int n = v.n();
  const RealMatrix& b = v.basis();
  const RealMatrix& g = v.structure().b_imag();
  AdaptedBasis ab = adapted_basis(v, tol);
  const int k = ab.k;
  // real basis of W in V-coordinates: (z_1..z_k, i z_1..i z_k)
  ComplexMatrix wz(n, 2 * k);
  wz << ab.z.leftCols(k), Complex(0, 1) * ab.z.leftCols(k);
  RealMatrix wc = b.transpose() * realify(wz);
  RealMatrix jw = RealMatrix::Zero(2 * k, 2 * k);
  jw.topRightCorner(k, k) = -RealMatrix::Identity(k, k);
  jw.bottomLeftCorner(k, k) = RealMatrix::Identity(k, k);

  auto upper = [n](const RealMatrix& m) {
    RealVector out(n * (n - 1) / 2);
    Index c = 0;
    for (int a = 0; a < n; ++a)
      for (int bb = a + 1; bb < n; ++bb) out(c++) = m(a, bb);
    return out;
  };
  auto from_upper = [n](const RealVector& x) {
    RealMatrix m = RealMatrix::Zero(n, n);
    Index c = 0;
    for (int a = 0; a < n; ++a)
      for (int bb = a + 1; bb < n; ++bb) {
        m(a, bb) = x(c);
        m(bb, a) = -x(c++);
      }
    return m;
  };
  auto sigma_derivative = [&](const RealMatrix& omega) {
    RealMatrix ow = wc.transpose() * omega * wc;
    RealMatrix hm = ow * jw;
    return RealMatrix(hm + hm.transpose());
  };

  HermitianPatternReport rep;
  RealMatrix image(n * (n - 1) / 2, h.dimension());
  for (int j = 0; j < h.dimension(); ++j) {
    RealMatrix omega = b.transpose() * h.basis()[j].transpose() * g * b;
    image.col(j) = upper(omega);
    rep.orbit_residual = std::max(rep.orbit_residual, max_abs(sigma_derivative(omega)));
  }
  RealMatrix transversal = nullspace_basis(RealMatrix(image.transpose()), tol);
  rep.transversal_dim = static_cast<int>(transversal.cols());
  RealMatrix forms(4 * k * k, transversal.cols());
  for (Index j = 0; j < transversal.cols(); ++j) {
    RealMatrix hm = sigma_derivative(from_upper(transversal.col(j)));
    rep.hermitian_residual = std::max(rep.hermitian_residual, max_abs(RealMatrix(jw.transpose() * hm * jw - hm)));
    forms.col(j) = vectorize(hm);
  }
  rep.hermitian_rank = forms.size() ? static_cast<int>(rank_of(forms, tol)) : 0;
  return rep;
}

}  // namespace orbitscope
