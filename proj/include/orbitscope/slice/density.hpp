#pragma once

#include <Eigen/Eigenvalues>

#include "orbitscope/slice/section.hpp"

namespace orbitscope {

// sigma_top = det of the restricted form at orbit points, with central
// finite-difference gradients in a chart centered at each point.
struct DensityProbeReport {
  std::string variety;        // "grassmann" or "isotropic"
  std::string label;
  int sigma_index = 0;
  int points = 0;
  double max_value = 0;
  double min_gradient = std::numeric_limits<double>::infinity();
  double max_gradient = 0;
  double max_rank_one_residual = std::numeric_limits<double>::quiet_NaN();  // nu = 1 Grassmann only
  bool vanishes = false;              // max_value <= 1e-6
  bool gradient_nonvanishing = false; // min_gradient >= 1e-6
  bool gradient_vanishes = false;     // max_gradient <= 1e-6
  bool defining = false;              // vanishes and gradient_nonvanishing
};

inline Json density_to_json(const DensityProbeReport& r) {
  Json j{{"variety", r.variety},   {"label", r.label},
         {"sigma", r.sigma_index}, {"points", r.points},
         {"max_value", r.max_value}, {"min_gradient", r.min_gradient},
         {"max_gradient", r.max_gradient}, {"vanishes", r.vanishes},
         {"gradient_nonvanishing", r.gradient_nonvanishing}, {"gradient_vanishes", r.gradient_vanishes},
         {"defining", r.defining}};
  if (!std::isnan(r.max_rank_one_residual)) j["rank_one_residual"] = r.max_rank_one_residual;
  return j;
}

namespace detail {

inline double top_sigma(const LocalChart& chart, const RealMatrix& form, const RealVector& x) {
  RealMatrix b = chart.basis(x);
  return RealMatrix(b.transpose() * form * b).determinant();
}

inline RealVector top_sigma_gradient(const LocalChart& chart, const RealMatrix& form, double h = 1e-5) {
  RealVector x = RealVector::Zero(chart.dimension());
  RealMatrix jac = finite_difference_jacobian(
      [&](const RealVector& y) {
        RealVector v(1);
        v(0) = top_sigma(chart, form, y);
        return v;
      },
      x, 1, h);
  return jac.row(0).transpose();
}

inline void finish(DensityProbeReport& r) {
  if (r.points == 0) r.min_gradient = 0;
  r.vanishes = r.max_value <= 1e-6;
  r.gradient_nonvanishing = r.min_gradient >= 1e-6;
  r.gradient_vanishes = r.max_gradient <= 1e-6;
  r.defining = r.vanishes && r.gradient_nonvanishing;
}

}  // namespace detail

// At a corank-one point the gradient of det in the chart B0 + C0 X is
// 2 pdet (C0^T F B0 n) n^T with n the null vector and pdet the product of
// the other eigenvalues.
inline RealMatrix rank_one_gradient(const GrassmannChart& chart, const RealMatrix& form) {
  const RealMatrix& b0 = chart.center_basis();
  RealMatrix m = b0.transpose() * form * b0;
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(RealMatrix(0.5 * (m + m.transpose())));
  Index null = 0;
  es.eigenvalues().cwiseAbs().minCoeff(&null);
  double pdet = 1;
  for (Index j = 0; j < m.rows(); ++j)
    if (j != null) pdet *= es.eigenvalues()(j);
  RealVector n = es.eigenvectors().col(null);
  return 2 * pdet * (chart.complement().transpose() * form * b0 * n) * n.transpose();
}

inline DensityProbeReport density_probe(const SubspacePoint<double>& center, int points, Philox4x32& rng,
                                        double group_scale = 1.0, const TolerancePolicy& tol = {}) {
  DensityProbeReport r;
  r.variety = "grassmann";
  OrbitLabel label = classify(center, tol);
  r.label = to_string(label);
  r.sigma_index = label.i;
  const RealMatrix& form = center.ambient().form();
  auto h = build_so<double>(form, "so(F)");
  if (label.nu == 1) r.max_rank_one_residual = 0;
  for (int t = 0; t < points; ++t) {
    RealMatrix g = t == 0 ? RealMatrix::Identity(form.rows(), form.rows()) : random_group_element(h, group_scale, rng);
    GrassmannChart chart(RealMatrix(g * center.basis()), tol);
    r.max_value = std::max(r.max_value, std::abs(detail::top_sigma(chart, form, RealVector::Zero(chart.dimension()))));
    RealVector grad = detail::top_sigma_gradient(chart, form);
    r.min_gradient = std::min(r.min_gradient, grad.norm());
    r.max_gradient = std::max(r.max_gradient, grad.norm());
    if (label.nu == 1) {
      RealMatrix exact = rank_one_gradient(chart, form);
      RealVector e = Eigen::Map<const RealVector>(exact.data(), exact.size());
      r.max_rank_one_residual = std::max(r.max_rank_one_residual, (e - grad).norm() / std::max(e.norm(), 1e-300));
    }
    ++r.points;
  }
  detail::finish(r);
  return r;
}

inline DensityProbeReport density_probe(const IsotropicPoint<double>& center, int points, Philox4x32& rng,
                                        double group_scale = 1.0, const TolerancePolicy& tol = {}) {
  DensityProbeReport r;
  r.variety = "isotropic";
  IsotropicLabel label = classify_isotropic(center, tol);
  r.label = to_string(label);
  const int n = center.n();
  r.sigma_index = n;
  const auto& st = center.structure();
  auto h = build_so_complex<double>(n);
  for (int t = 0; t < points; ++t) {
    RealMatrix g = t == 0 ? RealMatrix::Identity(2 * n, 2 * n) : random_group_element(h, group_scale, rng);
    IsotropicChart chart(RealMatrix(g * center.basis()), st.b_imag());
    r.max_value = std::max(r.max_value,
                           std::abs(detail::top_sigma(chart, st.b_real(), RealVector::Zero(chart.dimension()))));
    RealVector grad = detail::top_sigma_gradient(chart, st.b_real());
    r.min_gradient = std::min(r.min_gradient, grad.norm());
    r.max_gradient = std::max(r.max_gradient, grad.norm());
    ++r.points;
  }
  detail::finish(r);
  return r;
}

}  // namespace orbitscope
