// Walk through the main entry points on small examples.

#include <iostream>

#include "orbitscope/orbitscope.hpp"

using namespace orbitscope;

int main() {
  // Orbits of SO(2,2) on planes in R^4.
  auto amb = QuadraticSpace<double>::standard(2, 2);
  std::cout << "Gr(2, R^{2,2}) orbits:\n";
  for (const auto& label : enumerate_labels(2, 2, 2)) {
    auto rep = standard_representative(label, amb);
    std::cout << "  " << to_string(label) << "  codim " << label.codim << "  classify -> " << to_string(classify(rep))
              << "\n";
  }

  // A random plane lands in an open orbit; moving it by the group keeps its label.
  Philox4x32 rng(42);
  auto v = sample_uniform(amb, 2, rng);
  auto g = random_group_element(build_so_pq<double>(2, 2), 1.0, rng);
  std::cout << "random plane " << to_string(classify(v)) << ", moved " << to_string(classify(act(g, v))) << "\n";

  // R^3 inside C^3 is a maximal isotropic subspace for b(z,w) = z^T w.
  auto c3 = ComplexStructure<double>::standard(3);
  RealMatrix b = RealMatrix::Zero(6, 3);
  b.topRows(3) = RealMatrix::Identity(3, 3);
  IsotropicPoint<double> real_part(c3, b);
  auto iso = classify_isotropic_full(real_part);
  std::cout << "R^3 in C^3: " << isotropic_label_to_json(iso.label).dump() << "\n";

  // Lie codimension at every isotropic orbit, exactly.
  auto h = build_so_complex<Rational>(3);
  auto c3q = ComplexStructure<Rational>::standard(3);
  for (Duality d : {Duality::self_dual, Duality::anti_self_dual})
    for (const auto& label : enumerate_isotropic_labels(3, d)) {
      auto rep = tangent_map_rank(h, isotropic_standard_representative(label, c3q));
      std::cout << "  " << to_string(label) << "  k^2 = " << label.codim << "  Lie codim = " << rep.orbit_codim << "\n";
    }

  // Slice chart at a null line of Gr(2, R^{2,2}).
  auto chart = build_slice_chart(standard_representative(make_label(2, 2, 1, 0, 1), amb));
  std::cout << "slice chart: " << slice_chart_to_json(chart).dump() << "\n";

  // A short campaign.
  auto cfg = campaign_config_from_json(Json{{"scenario", "grassmann(2,2,2)"}, {"sample_count", 500}, {"seed", 1}});
  auto report = run_campaign(cfg);
  for (const auto& r : report.records)
    std::cout << "  " << r.check << " [" << r.ref << "] " << (r.pass ? "pass" : "FAIL") << " " << r.counts.passed << "/"
              << r.counts.total << "\n";
  return report.passed() ? 0 : 1;
}
