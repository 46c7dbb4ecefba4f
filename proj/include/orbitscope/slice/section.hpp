#pragma once

#include <optional>

#include "orbitscope/grassmann/classify.hpp"
#include "orbitscope/lie/algebra.hpp"
#include "orbitscope/slice/hermitian.hpp"

namespace orbitscope {

enum class TransversalModel { symmetric, hermitian };

inline std::string to_string(TransversalModel m) {
  return m == TransversalModel::symmetric ? "symmetric" : "hermitian";
}

// restricted: sigma_1 projected to E~ (the defining section).
// full: sigma_1 itself, on the whole tautological bundle.
enum class SectionKind { restricted, full };

struct TransversalValue {
  RealVector coordinates;             // nu(nu+1)/2 or k^2 real numbers
  RealMatrix gram;                    // real symmetric form whose inertia is read
  std::optional<HermitianFrame> frame;  // isotropic case
};

// The defining section of an orbit written in a chart around a center point,
// together with the point-level operations the slice machinery needs.
class DefiningSection {
 public:
  static DefiningSection grassmann(const SubspacePoint<double>& center, SectionKind kind = SectionKind::restricted,
                                   const TolerancePolicy& tol = {}) {
    DefiningSection s;
    s.tol_ = tol;
    s.kind_ = kind;
    s.model_ = TransversalModel::symmetric;
    s.space_ = center.ambient_ptr();
    OrbitLabel l = classify(center, tol);
    s.r_ = l.r;
    s.s_ = l.s;
    s.nu_ = l.nu;
    auto chart = std::make_shared<GrassmannChart>(center.basis(), tol);
    s.chart_ = chart;
    s.field_.emplace(center.ambient().form(), chart->center_basis(), l.nu, tol);
    return s;
  }

  static DefiningSection isotropic(const IsotropicPoint<double>& center, const TolerancePolicy& tol = {}) {
    DefiningSection s;
    s.tol_ = tol;
    s.kind_ = SectionKind::restricted;
    s.model_ = TransversalModel::hermitian;
    s.structure_ = center.structure_ptr();
    IsotropicLabel l = classify_isotropic(center, tol);
    s.r_ = l.r;
    s.s_ = l.s;
    s.nu_ = l.nu;
    auto chart = std::make_shared<IsotropicChart>(center.basis(), center.structure().b_imag());
    s.chart_ = chart;
    s.field_.emplace(center.structure().b_real(), chart->center_basis(), l.nu, tol);
    const RealMatrix& b0 = chart->center_basis();
    if (l.nu > 0) s.splitting_.emplace(s.structure_, s.field_->w_span(b0), s.field_->e_tilde(b0), tol);
    return s;
  }

  const LocalChart& chart() const { return *chart_; }
  const SubbundleField& field() const { return *field_; }
  TransversalModel model() const { return model_; }
  SectionKind kind() const { return kind_; }
  const TolerancePolicy& tolerance() const { return tol_; }
  bool isotropic_case() const { return model_ == TransversalModel::hermitian; }
  const HermitianSplitting& splitting() const { return *splitting_; }

  // Center label as (r, s, nu).
  int r() const { return r_; }
  int s() const { return s_; }
  int nu() const { return nu_; }
  // nu for the symmetric model, k for the Hermitian one.
  int model_size() const {
    if (isotropic_case()) return nu_ / 2;
    return kind_ == SectionKind::full ? static_cast<int>(chart_->center_basis().cols()) : field_->rank();
  }
  int fiber_dimension() const {
    const int m = model_size();
    return isotropic_case() ? m * m : m * (m + 1) / 2;
  }

  RealMatrix e_tilde(const RealVector& x) const { return field_->e_tilde(chart_->basis(x)); }

  TransversalValue evaluate(const RealVector& x) const {
    RealMatrix b = chart_->basis(x);
    TransversalValue v;
    if (!isotropic_case()) {
      v.gram = kind_ == SectionKind::full ? field_->restriction(b) : field_->section(b);
      const Index m = v.gram.rows();
      v.coordinates = RealVector(m * (m + 1) / 2);
      Index c = 0;
      for (Index j = 0; j < m; ++j)
        for (Index l = j; l < m; ++l) v.coordinates(c++) = v.gram(j, l);
      return v;
    }
    if (!splitting_) {
      v.gram = RealMatrix(0, 0);
      v.coordinates = RealVector(0);
      return v;
    }
    HermitianFrame f = splitting_->frame(field_->w_span(b), field_->e_tilde(b));
    v.gram = f.gram;
    v.coordinates = hermitian_coordinates(f.hermitian);
    v.frame = std::move(f);
    return v;
  }

  RealVector coordinates(const RealVector& x) const { return evaluate(x).coordinates; }

  // Real inertia of the section at x (twice the Hermitian one in the
  // isotropic case). For the full section this is the label itself.
  Inertia transversal_inertia(const RealVector& x) const {
    TransversalValue v = evaluate(x);
    return inertia_of(v.gram, tol_, section_scale(x));
  }

  // (r', s', nu') of the point with chart coordinates x.
  Inertia label_at(const RealVector& x) const {
    RealMatrix b = chart_->basis(x);
    if (isotropic_case()) {
      IsotropicLabel l = classify_isotropic(IsotropicPoint<double>(structure_, b, tol_), tol_);
      return {l.r, l.s, l.nu};
    }
    OrbitLabel l = classify(SubspacePoint<double>(space_, b, tol_), tol_);
    return {l.r, l.s, l.nu};
  }

  double section_scale(const RealVector& x) const {
    return std::max(field_->form().norm(), 1.0) * std::max(chart_->basis(x).squaredNorm(), 1.0);
  }

  // Lie algebra whose orbits are being sliced.
  MatrixLieAlgebra<double> symmetry_algebra() const {
    if (isotropic_case()) return build_so_complex<double>(structure_->n());
    return build_so<double>(space_->form(), "so(F)");
  }

  // Chart coordinates of exp(A) applied to the center.
  RealVector orbit_point(const RealMatrix& g) const { return chart_->coordinates(g * chart_->center_basis()); }

 private:
  DefiningSection() = default;

  TolerancePolicy tol_;
  SectionKind kind_ = SectionKind::restricted;
  TransversalModel model_ = TransversalModel::symmetric;
  QuadraticSpacePtr<double> space_;
  ComplexStructurePtr<double> structure_;
  LocalChartPtr chart_;
  std::optional<SubbundleField> field_;
  std::optional<HermitianSplitting> splitting_;
  int r_ = 0, s_ = 0, nu_ = 0;
};

// Frames of E~ at the given chart points.
inline std::vector<RealMatrix> build_subbundle_e_tilde(const DefiningSection& section,
                                                       const std::vector<RealVector>& points) {
  std::vector<RealMatrix> out;
  out.reserve(points.size());
  for (const auto& x : points) out.push_back(section.e_tilde(x));
  return out;
}

inline ScalarMatrix defining_section_at(const DefiningSection& section, const RealVector& x) {
  TransversalValue v = section.evaluate(x);
  if (v.frame) return ScalarMatrix(ComplexMatrix(v.frame->hermitian));
  return ScalarMatrix(RealMatrix(v.gram));
}

// Central differences with step h in every chart coordinate.
template <class F>
RealMatrix finite_difference_jacobian(F&& f, const RealVector& x, Index rows, double h = 1e-5) {
  RealMatrix jac(rows, x.size());
  for (Index j = 0; j < x.size(); ++j) {
    RealVector plus = x, minus = x;
    plus(j) += h;
    minus(j) -= h;
    jac.col(j) = (f(plus) - f(minus)) / (2 * h);
  }
  return jac;
}

struct DefiningSectionProbe {
  RealVector base;
  std::vector<RealVector> orbit_points;   // chart coordinates of on-orbit points
  std::vector<RealMatrix> frames;         // E~ at base and orbit points
  std::vector<RealVector> values;         // section coordinates there
  RealMatrix jacobian;                    // d section / d chart at base
  int fiber_dimension = 0;
  double value_scale = 1;
};

inline DefiningSectionProbe make_probe(const DefiningSection& section, Philox4x32& rng, int orbit_points = 8,
                                       double orbit_scale = 0.05) {
  DefiningSectionProbe p;
  p.base = RealVector::Zero(section.chart().dimension());
  p.fiber_dimension = section.fiber_dimension();
  p.value_scale = section.section_scale(p.base);
  auto h = section.symmetry_algebra();
  std::vector<RealVector> pts{p.base};
  for (int t = 0; t < orbit_points; ++t) {
    RealVector x = section.orbit_point(random_group_element(h, orbit_scale, rng));
    p.orbit_points.push_back(x);
    pts.push_back(x);
  }
  for (const auto& x : pts) {
    p.frames.push_back(section.e_tilde(x));
    p.values.push_back(section.coordinates(x));
  }
  auto f = [&](const RealVector& x) { return section.coordinates(x); };
  p.jacobian = finite_difference_jacobian(f, p.base, p.fiber_dimension);
  return p;
}

struct DefiningVerdict {
  bool defining = false;
  bool vanishes_on_orbit = false;
  double max_orbit_value = 0;
  double value_threshold = 0;
  Index jacobian_rank = 0;
  double smallest_singular = 0;
  double rank_threshold = 0;
};

inline Json verdict_to_json(const DefiningVerdict& v) {
  return Json{{"defining", v.defining},
              {"vanishes_on_orbit", v.vanishes_on_orbit},
              {"max_orbit_value", v.max_orbit_value},
              {"value_threshold", v.value_threshold},
              {"jacobian_rank", v.jacobian_rank},
              {"smallest_singular", v.smallest_singular},
              {"rank_threshold", v.rank_threshold}};
}

// True iff the section vanishes on the sampled orbit points and its jacobian
// has full row rank with singular values at least 1e3 theta.
inline DefiningVerdict verify_defining_report(const DefiningSectionProbe& p, const TolerancePolicy& tol = {}) {
  DefiningVerdict v;
  v.value_threshold = tol.threshold(p.value_scale);
  for (const auto& val : p.values)
    if (val.size()) v.max_orbit_value = std::max(v.max_orbit_value, val.cwiseAbs().maxCoeff());
  v.vanishes_on_orbit = v.max_orbit_value <= v.value_threshold;
  if (p.fiber_dimension == 0) {
    v.defining = v.vanishes_on_orbit;
    return v;
  }
  RankReport rk = rank_report(p.jacobian, tol);
  v.jacobian_rank = rk.rank;
  v.rank_threshold = rk.threshold;
  auto sv = singular_values(p.jacobian);
  v.smallest_singular = sv.size() >= p.fiber_dimension ? sv(p.fiber_dimension - 1) : 0.0;
  if (rk.ambiguous) throw AmbiguityError("ambiguous defining-section rank", {}, {}, rk.margin());
  if (rk.rank == p.fiber_dimension && v.smallest_singular < 1e3 * rk.threshold)
    throw AmbiguityError("defining-section rank margin below 1e3 theta", {}, {}, rk.margin());
  v.defining = v.vanishes_on_orbit && rk.rank == p.fiber_dimension;
  return v;
}

inline bool verify_defining(const DefiningSectionProbe& p, const TolerancePolicy& tol = {}) {
  return verify_defining_report(p, tol).defining;
}

}  // namespace orbitscope
