#pragma once

#include <map>

#include "orbitscope/slice/section.hpp"

namespace orbitscope {

struct SliceChartOptions {
  double initial_radius = 0.5;
  double minimum_radius = 1e-8;
  int test_points = 100;
  int refinement_steps = 4;
  int newton_iterations = 50;
  double round_trip_bound = 1e-8;
  std::uint64_t seed = 0x5eed;
};

// psi(y) = (O^T x, defining section at x) in the chart coordinates x of y,
// where O spans the orbit tangent at the center.
class SliceChart {
 public:
  SliceChart(DefiningSection section, const SliceChartOptions& opt = {})
      : section_(std::move(section)), opt_(opt) {
    const auto& tol = section_.tolerance();
    auto h = section_.symmetry_algebra();
    const int d = section_.chart().dimension();
    RealMatrix tangent(d, h.dimension());
    for (int j = 0; j < h.dimension(); ++j)
      tangent.col(j) = section_.chart().differential(RealMatrix(h.basis()[j] * section_.chart().center_basis()));
    Index rank = 0;
    if (tangent.size() > 0) rank = certified_rank(tangent, tol, "orbit tangent");
    if (rank + section_.fiber_dimension() != d)
      throw FormulaViolation("slice chart: orbit dimension " + std::to_string(rank) + " plus transversal " +
                             std::to_string(section_.fiber_dimension()) + " differs from " + std::to_string(d));
    if (rank > 0) {
      Eigen::JacobiSVD<RealMatrix> svd(tangent, Eigen::ComputeThinU);
      orbit_frame_ = svd.matrixU().leftCols(rank);
    } else {
      orbit_frame_ = RealMatrix(d, 0);
    }
  }

  const DefiningSection& section() const { return section_; }
  const RealMatrix& orbit_frame() const { return orbit_frame_; }
  int dimension() const { return section_.chart().dimension(); }
  int orbit_dimension() const { return static_cast<int>(orbit_frame_.cols()); }
  int transversal_dimension() const { return section_.fiber_dimension(); }
  double radius() const { return radius_; }
  void set_radius(double r) { radius_ = r; }

  RealVector forward(const RealVector& x) const {
    RealVector t = section_.coordinates(x);
    RealVector out(dimension());
    out << orbit_frame_.transpose() * x, t;
    return out;
  }

  // Damped Newton with a finite-difference jacobian; nullopt when it does not
  // converge (the point is then outside the certified radius).
  std::optional<RealVector> inverse(const RealVector& psi) const {
    const int d = dimension();
    if (psi.size() != d) throw InputError("slice chart: target has wrong size");
    const double goal = 1e-13 * (1.0 + psi.norm());
    RealVector x = orbit_frame_ * psi.head(orbit_dimension());
    try {
      RealVector f = forward(x) - psi;
      for (int it = 0; it < opt_.newton_iterations; ++it) {
        if (f.norm() <= goal) {
          polish(x, f, psi);
          return x;
        }
        RealMatrix jac = finite_difference_jacobian([&](const RealVector& y) { return forward(y); }, x, d);
        RealVector step = jac.fullPivLu().solve(f);
        double lambda = 1;
        bool improved = false;
        while (lambda > 1e-4) {
          RealVector trial = x - lambda * step;
          try {
            RealVector ft = forward(trial) - psi;
            if (ft.norm() < f.norm()) {
              x = trial;
              f = ft;
              improved = true;
              break;
            }
          } catch (const ChartError&) {
          }
          lambda /= 2;
        }
        if (!improved) break;
      }
      if (f.norm() <= 1e2 * goal) return x;
    } catch (const ChartError&) {
    } catch (const AmbiguityError&) {
    }
    return std::nullopt;
  }

  // Returns the label offset (r'-r, s'-s) read from the transversal
  // component and the label classified directly, as inertia triples.
  std::pair<Inertia, Inertia> concordance_at(const RealVector& x) const {
    Inertia t = section_.transversal_inertia(x);
    Inertia l = section_.label_at(x);
    return {t, {l.positive - section_.r(), l.negative - section_.s(), l.nullity}};
  }

  static bool concordant(const std::pair<Inertia, Inertia>& c) {
    return c.first.positive == c.second.positive && c.first.negative == c.second.negative;
  }

 private:
  void polish(RealVector& x, RealVector& f, const RealVector& psi) const {
    RealMatrix jac =
        finite_difference_jacobian([&](const RealVector& y) { return forward(y); }, x, dimension());
    RealVector trial = x - jac.fullPivLu().solve(f);
    try {
      RealVector ft = forward(trial) - psi;
      if (ft.norm() < f.norm()) {
        x = trial;
        f = ft;
      }
    } catch (const ChartError&) {
    }
  }

  DefiningSection section_;
  SliceChartOptions opt_;
  RealMatrix orbit_frame_;
  double radius_ = 0;
};

inline RealVector sample_ball(Index d, double radius, Philox4x32& rng) {
  if (d == 0) return RealVector(0);
  RealVector x = rng.gaussian(d, 1);
  double norm = x.norm();
  if (norm == 0) return RealVector::Zero(d);
  return x * (radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(d)) / norm);
}

struct RoundTripReport {
  int points = 0;
  int failures = 0;
  double max_residual = 0;
  RealVector witness;
};

inline RoundTripReport chart_round_trip(const SliceChart& chart, int points, double radius, Philox4x32& rng,
                                        double bound = 1e-8) {
  RoundTripReport rep;
  for (int t = 0; t < points; ++t) {
    RealVector x = sample_ball(chart.dimension(), radius, rng);
    ++rep.points;
    double residual = std::numeric_limits<double>::infinity();
    try {
      auto back = chart.inverse(chart.forward(x));
      if (back) residual = (*back - x).norm();
    } catch (const ChartError&) {
    }
    if (!(residual <= bound)) {
      ++rep.failures;
      if (rep.witness.size() == 0) rep.witness = x;
    }
    if (std::isfinite(residual)) rep.max_residual = std::max(rep.max_residual, residual);
    else rep.max_residual = residual;
  }
  return rep;
}

struct ConcordanceReport {
  int points = 0;
  int matches = 0;
  int outside = 0;   // targets whose preimage left the certified ball
  int fragile = 0;   // a classification landed in the ambiguity band
  std::map<std::string, int> signatures;  // observed transversal signatures
  RealVector witness;
};

inline Json concordance_to_json(const ConcordanceReport& c) {
  Json sig = Json::object();
  for (const auto& [k, v] : c.signatures) sig[k] = v;
  return Json{{"points", c.points}, {"matches", c.matches}, {"outside", c.outside},
              {"fragile", c.fragile}, {"signatures", sig}};
}

namespace detail {

// All (a, b) with a + b <= m.
inline std::vector<std::pair<int, int>> signature_patterns(int m) {
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a <= m; ++a)
    for (int b = 0; a + b <= m; ++b) out.push_back({a, b});
  return out;
}

inline std::vector<double> prescribed_spectrum(int m, std::pair<int, int> pattern, double magnitude,
                                               Philox4x32& rng) {
  std::vector<double> ev(m, 0.0);
  for (int j = 0; j < m; ++j) {
    double mag = magnitude * (0.5 + 0.5 * rng.uniform());
    if (j < pattern.first) ev[j] = mag;
    else if (j < pattern.first + pattern.second) ev[j] = -mag;
  }
  return ev;
}

}  // namespace detail

// Points with prescribed transversal signature, pulled back through the
// chart, classified directly and compared with the transversal inertia.
inline ConcordanceReport chart_concordance(const SliceChart& chart, int points, double radius, Philox4x32& rng) {
  ConcordanceReport rep;
  const auto& section = chart.section();
  const int m = section.model_size();
  const auto patterns = detail::signature_patterns(m);
  int attempts = 0;
  while (rep.points < points && attempts < 20 * points) {
    const auto pattern = patterns[attempts % patterns.size()];
    ++attempts;
    RealVector x = sample_ball(chart.dimension(), 0.8 * radius, rng);
    RealVector psi;
    try {
      psi = chart.forward(x);
    } catch (const ChartError&) {
      ++rep.outside;
      continue;
    }
    const Index od = chart.orbit_dimension();
    RealVector t = psi.tail(chart.transversal_dimension());
    double magnitude = std::max(t.norm(), 0.05 * radius) / std::max(1.0, std::sqrt(double(m)));
    auto ev = detail::prescribed_spectrum(m, pattern, magnitude, rng);
    RealVector target_t(chart.transversal_dimension());
    if (section.isotropic_case()) {
      ComplexMatrix g = complexify(RealMatrix(rng.gaussian(2 * m, m)));
      ComplexMatrix q = g.householderQr().householderQ() * ComplexMatrix::Identity(m, m);
      ComplexMatrix h = ComplexMatrix::Zero(m, m);
      for (int j = 0; j < m; ++j) h += ev[j] * q.col(j) * q.col(j).adjoint();
      target_t = hermitian_coordinates(h);
    } else {
      RealMatrix q = RealMatrix(rng.gaussian(m, m)).householderQr().householderQ();
      RealMatrix s = RealMatrix::Zero(m, m);
      for (int j = 0; j < m; ++j) s += ev[j] * q.col(j) * q.col(j).transpose();
      Index c = 0;
      for (int j = 0; j < m; ++j)
        for (int l = j; l < m; ++l) target_t(c++) = s(j, l);
    }
    RealVector target(chart.dimension());
    target << psi.head(od), target_t;
    auto y = chart.inverse(target);
    if (!y || y->norm() > radius) {
      ++rep.outside;
      continue;
    }
    ++rep.points;
    try {
      auto c = chart.concordance_at(*y);
      const int unit = section.isotropic_case() ? 2 : 1;
      bool prescribed = c.first.positive == unit * pattern.first && c.first.negative == unit * pattern.second;
      if (SliceChart::concordant(c) && prescribed) {
        ++rep.matches;
        rep.signatures["(" + std::to_string(c.first.positive) + "," + std::to_string(c.first.negative) + ")"]++;
      } else if (rep.witness.size() == 0) {
        rep.witness = *y;
      }
    } catch (const AmbiguityError&) {
      ++rep.fragile;
      if (rep.witness.size() == 0) rep.witness = *y;
    }
  }
  return rep;
}

// Checks the round trip and plain concordance at `points` random points of
// the ball of the given radius.
inline bool certify_radius(const SliceChart& chart, double radius, int points, Philox4x32& rng, double bound) {
  for (int t = 0; t < points; ++t) {
    RealVector x = sample_ball(chart.dimension(), radius, rng);
    try {
      auto back = chart.inverse(chart.forward(x));
      if (!back || !((*back - x).norm() <= bound)) return false;
      if (!SliceChart::concordant(chart.concordance_at(x))) return false;
    } catch (const Error&) {
      return false;
    }
  }
  return true;
}

// Requires a verified defining section at the center. The radius is halved
// until a test on opt.test_points random points passes, refined by bisection
// and halved once more, and finally confirmed on ten times as many points.
inline SliceChart build_slice_chart(DefiningSection section, const SliceChartOptions& opt = {}) {
  Philox4x32 rng(opt.seed);
  auto probe = make_probe(section, rng);
  if (!verify_defining(probe, section.tolerance()))
    throw ChartError("chart construction failed: section is not defining at the center");
  SliceChart chart(std::move(section), opt);
  auto passes = [&](double radius, int points) {
    return certify_radius(chart, radius, points, rng, opt.round_trip_bound);
  };
  auto shrink = [&](double& radius) {
    radius /= 2;
    if (radius < opt.minimum_radius) throw ChartError("chart construction failed");
  };
  double r = opt.initial_radius;
  bool shrunk = false;
  while (!passes(r, opt.test_points)) {
    shrink(r);
    shrunk = true;
  }
  if (shrunk) {
    double lo = r, hi = 2 * r;
    for (int s = 0; s < opt.refinement_steps; ++s) {
      double mid = 0.5 * (lo + hi);
      (passes(mid, opt.test_points) ? lo : hi) = mid;
    }
    r = 0.5 * lo;  // back off from the sampled boundary
  }
  while (!passes(r, 10 * opt.test_points)) shrink(r);
  chart.set_radius(r);
  return chart;
}

inline SliceChart build_slice_chart(const SubspacePoint<double>& center, const SliceChartOptions& opt = {},
                                    const TolerancePolicy& tol = {}) {
  return build_slice_chart(DefiningSection::grassmann(center, SectionKind::restricted, tol), opt);
}

inline SliceChart build_slice_chart(const IsotropicPoint<double>& center, const SliceChartOptions& opt = {},
                                    const TolerancePolicy& tol = {}) {
  return build_slice_chart(DefiningSection::isotropic(center, tol), opt);
}

inline Json slice_chart_to_json(const SliceChart& chart) {
  const auto& s = chart.section();
  return Json{{"center", {{"r", s.r()}, {"s", s.s()}, {"nu", s.nu()}}},
              {"model", to_string(s.model())},
              {"model_size", s.model_size()},
              {"chart_dim", chart.dimension()},
              {"orbit_dim", chart.orbit_dimension()},
              {"transversal_dim", chart.transversal_dimension()},
              {"radius", chart.radius()}};
}

}  // namespace orbitscope
