#pragma once

#include <Eigen/Eigenvalues>

#include "orbitscope/slice/chart.hpp"

namespace orbitscope {

// The splitting E = W + E~ of the tautological bundle near a center point.
// W is fixed at the center as a complement of the radical of sigma_1 and is
// carried to nearby points in chart coefficients; E~_y is the sigma_1(y)
// orthocomplement of W_y, realized by one Gram-Schmidt sweep against W.
class SubbundleField {
 public:
  struct Frame {
    RealMatrix coefficients;  // i x nu, in chart-basis coefficients
    RealMatrix w_gram;        // sigma_1 on W_y
    Inertia w_inertia;
  };

  SubbundleField(RealMatrix form, const RealMatrix& center_basis, int nullity, const TolerancePolicy& tol = {})
      : form_(std::move(form)), tol_(tol) {
    RealMatrix m = center_basis.transpose() * form_ * center_basis;
    const Index i = m.rows();
    if (nullity < 0 || nullity > i) throw InputError("subbundle: invalid nullity");
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(RealMatrix(0.5 * (m + m.transpose())));
    // order eigenvectors by |lambda|: the nullity smallest span the radical
    std::vector<Index> order(i);
    for (Index j = 0; j < i; ++j) order[j] = j;
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
      return std::abs(es.eigenvalues()(a)) < std::abs(es.eigenvalues()(b));
    });
    n0_ = RealMatrix(i, nullity);
    wc_ = RealMatrix(i, i - nullity);
    for (Index j = 0; j < i; ++j) {
      if (j < nullity)
        n0_.col(j) = es.eigenvectors().col(order[j]);
      else
        wc_.col(j - nullity) = es.eigenvectors().col(order[j]);
    }
    const double scale = std::max(form_.norm(), 1.0) * std::max(center_basis.squaredNorm(), 1.0);
    w_inertia_ = inertia_of(RealMatrix(wc_.transpose() * m * wc_), tol_, scale);
    if (w_inertia_.nullity != 0) throw InputError("subbundle: sigma_1 has larger nullity than expected");
    if (nullity > 0) {
      double radical = max_abs(RealMatrix(m * n0_));
      if (radical > tol_.threshold(scale)) throw InputError("subbundle: sigma_1 has smaller nullity than expected");
    }
  }

  const RealMatrix& form() const { return form_; }
  const RealMatrix& radical_coefficients() const { return n0_; }
  const RealMatrix& w_coefficients() const { return wc_; }
  const Inertia& w_inertia() const { return w_inertia_; }
  int rank() const { return static_cast<int>(n0_.cols()); }

  RealMatrix restriction(const RealMatrix& basis) const { return basis.transpose() * form_ * basis; }

  // E~ at the point with basis `basis`; throws ChartError once W degenerates.
  Frame frame(const RealMatrix& basis) const {
    RealMatrix m = restriction(basis);
    Frame f;
    f.w_gram = wc_.transpose() * m * wc_;
    const double scale = std::max(form_.norm(), 1.0) * std::max(basis.squaredNorm(), 1.0);
    try {
      f.w_inertia = inertia_of(f.w_gram, tol_, scale);
    } catch (const AmbiguityError&) {
      throw ChartError("W degenerates at the queried point");
    }
    if (!(f.w_inertia == w_inertia_)) throw ChartError("W degenerates at the queried point");
    if (n0_.cols() == 0) {
      f.coefficients = RealMatrix(basis.cols(), 0);
      return f;
    }
    if (wc_.cols() == 0) {
      f.coefficients = n0_;
      return f;
    }
    RealMatrix a = -f.w_gram.fullPivLu().solve(RealMatrix(wc_.transpose() * m * n0_));
    f.coefficients = n0_ + wc_ * a;
    return f;
  }

  // Ambient basis of E~ at the point.
  RealMatrix e_tilde(const RealMatrix& basis) const { return basis * frame(basis).coefficients; }
  RealMatrix w_span(const RealMatrix& basis) const { return basis * wc_; }

  // sigma_1 on the E~ frame.
  RealMatrix section(const RealMatrix& basis) const {
    RealMatrix c = frame(basis).coefficients;
    RealMatrix d = c.transpose() * restriction(basis) * c;
    return 0.5 * (d + d.transpose());
  }

 private:
  RealMatrix form_;
  TolerancePolicy tol_;
  RealMatrix n0_, wc_;
  Inertia w_inertia_;
};

}  // namespace orbitscope
