// Acceptance run: one line per criterion, nonzero exit if any fails.
// Usage: acceptance [--report file.json]

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>

#include "orbitscope/orbitscope.hpp"

using namespace orbitscope;

namespace {

struct Outcome {
  bool pass = false;
  std::string summary;
  Json details = Json::object();
};

struct Criterion {
  int id;
  std::string title;
  double limit_s;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

CampaignConfig campaign(const std::string& scenario, std::int64_t samples, const std::string& check,
                        std::uint64_t seed) {
  auto c = campaign_config_from_json(Json{{"scenario", scenario}, {"sample_count", samples}, {"seed", seed}});
  c.checks = {check};
  return c;
}

int representative_count(const std::string& scenario, bool non_open_only) {
  auto sc = parse_scenario(Json(scenario));
  int count = 0;
  if (sc.kind == ScenarioKind::grassmann) {
    for (const auto& l : enumerate_labels(sc.p, sc.q, sc.i)) count += (!non_open_only || l.nu > 0) ? 1 : 0;
  } else {
    for (const auto& l : enumerate_isotropic_labels(sc.n, sc.duality)) count += (!non_open_only || l.k > 0) ? 1 : 0;
  }
  return count;
}

const std::vector<std::string> variety_scenarios = {
    "grassmann(2,2,2)",           "grassmann(3,2,2)",        "isotropic(3,self-dual)",
    "isotropic(3,anti-self-dual)", "isotropic(4,self-dual)", "isotropic(4,anti-self-dual)"};

// Runs one campaign check per scenario; strict demands zero fragile samples too.
Outcome campaign_criterion(const std::vector<std::pair<std::string, std::int64_t>>& runs, const std::string& check,
                           bool strict, std::uint64_t seed) {
  Outcome out{true, "", Json::object()};
  std::int64_t samples = 0, failed = 0, fragile = 0;
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& [scenario, count] : runs) {
    auto rep = run_campaign(campaign(scenario, count, check, seed));
    const auto& r = rep.records.at(0);
    samples += r.counts.total;
    failed += r.counts.failed;
    fragile += r.counts.fragile;
    margin = std::min(margin, r.margin);
    out.details[scenario] = record_to_json(r);
    if (!r.pass || (strict && r.counts.fragile > 0)) out.pass = false;
  }
  out.summary = std::to_string(samples) + " samples over " + std::to_string(runs.size()) + " scenarios, " +
                std::to_string(failed) + " failures, " + std::to_string(fragile) + " fragile, min margin " +
                fmt("%.2f", margin);
  return out;
}

// 1. Exact Lie codimension at every Grassmann standard representative.
Outcome grassmann_codimension() {
  int labels = 0, mismatches = 0;
  Json bad = Json::array();
  for (int n = 1; n <= 6; ++n)
    for (int p = 0; p <= n; ++p) {
      const int q = n - p;
      auto amb = QuadraticSpace<Rational>::standard(p, q);
      auto h = build_so_pq<Rational>(p, q);
      for (int i = 0; i <= n; ++i)
        for (const auto& l : enumerate_labels(p, q, i)) {
          auto rep = tangent_map_rank(h, standard_representative(l, amb));
          ++labels;
          if (rep.orbit_codim != l.nu * (l.nu + 1) / 2) {
            ++mismatches;
            bad.push_back(Json{{"p", p}, {"q", q}, {"i", i}, {"label", to_string(l)}, {"lie", rep.orbit_codim}});
          }
        }
    }
  return {mismatches == 0, std::to_string(labels) + " labels, " + std::to_string(mismatches) + " mismatches",
          Json{{"labels", labels}, {"mismatches", bad}}};
}

// 2. Exact Lie codimension at every isotropic standard representative.
Outcome isotropic_codimension() {
  int labels = 0, mismatches = 0;
  Json bad = Json::array();
  for (int n = 1; n <= 5; ++n) {
    auto st = ComplexStructure<Rational>::standard(n);
    auto h = build_so_complex<Rational>(n);
    for (Duality d : {Duality::self_dual, Duality::anti_self_dual})
      for (const auto& l : enumerate_isotropic_labels(n, d)) {
        auto rep = tangent_map_rank(h, isotropic_standard_representative(l, st));
        ++labels;
        if (rep.orbit_codim != l.k * l.k) {
          ++mismatches;
          bad.push_back(Json{{"n", n}, {"label", to_string(l)}, {"lie", rep.orbit_codim}});
        }
      }
  }
  return {mismatches == 0, std::to_string(labels) + " labels, " + std::to_string(mismatches) + " mismatches",
          Json{{"labels", labels}, {"mismatches", bad}}};
}

// 3. Standard representatives first, then 10^3 uniform samples.
Outcome zero_locus() {
  std::vector<std::pair<std::string, std::int64_t>> runs;
  for (const auto& s : variety_scenarios) runs.push_back({s, representative_count(s, false) + 1000});
  return campaign_criterion(runs, "zero_locus", false, 301);
}

// 4. 10^3 maximal isotropics per n, split between the two duality classes.
Outcome isotropic_structure() {
  std::vector<std::pair<std::string, std::int64_t>> runs;
  for (int n : {2, 3, 4})
    for (const char* d : {"self-dual", "anti-self-dual"})
      runs.push_back({"isotropic(" + std::to_string(n) + "," + d + ")", 500});
  return campaign_criterion(runs, "adapted_basis", true, 401);
}

// 5. 10^3 perturbations at each non-open representative.
Outcome closure() {
  std::vector<std::pair<std::string, std::int64_t>> runs;
  for (const auto& s : variety_scenarios) runs.push_back({s, 1000 * representative_count(s, true)});
  return campaign_criterion(runs, "closure", false, 501);
}

// 6. Slice charts at every non-open orbit.
Outcome slice_charts() {
  Outcome out{true, "", Json::object()};
  int charts = 0, round_trip_failures = 0, mismatches = 0;
  double worst = 0;
  auto probe = [&](const std::string& name, auto center) {
    Json entry;
    try {
      auto chart = build_slice_chart(center);
      Philox4x32 rng(601, static_cast<std::uint64_t>(charts));
      auto trip = chart_round_trip(chart, 100, chart.radius(), rng);
      auto conc = chart_concordance(chart, 1000, chart.radius(), rng);
      worst = std::max(worst, trip.max_residual);
      round_trip_failures += trip.failures;
      const bool ok = trip.failures == 0 && trip.max_residual <= 1e-8 && conc.points == 1000 && conc.matches == 1000;
      mismatches += conc.points - conc.matches;
      entry = slice_chart_to_json(chart);
      entry["round_trip"] = Json{{"failures", trip.failures}, {"max_residual", trip.max_residual}};
      entry["concordance"] = concordance_to_json(conc);
      if (!ok) out.pass = false;
    } catch (const Error& e) {
      entry = Json{{"error", e.what()}};
      out.pass = false;
    }
    ++charts;
    out.details[name] = entry;
  };
  auto amb = QuadraticSpace<double>::standard(2, 2);
  for (const auto& l : enumerate_labels(2, 2, 2))
    if (l.nu > 0) probe("grassmann(2,2,2) " + to_string(l), standard_representative(l, amb));
  for (int n : {2, 3}) {
    auto st = ComplexStructure<double>::standard(n);
    for (Duality d : {Duality::self_dual, Duality::anti_self_dual})
      for (const auto& l : enumerate_isotropic_labels(n, d))
        if (l.k > 0)
          probe("isotropic(" + std::to_string(n) + ") " + to_string(l), isotropic_standard_representative(l, st));
  }
  out.summary = std::to_string(charts) + " charts, " + std::to_string(round_trip_failures) +
                " round-trip failures (max residual " + fmt("%.1e", worst) + "), " + std::to_string(mismatches) +
                " concordance misses of " + std::to_string(charts * 1000);
  return out;
}

// 7. sigma_top along orbits, 100 points each.
Outcome densities() {
  Outcome out{true, "", Json::object()};
  Philox4x32 rng(701);
  double min_defining_gradient = std::numeric_limits<double>::infinity(), max_vanishing = 0;
  auto amb = QuadraticSpace<double>::standard(2, 2);
  for (const auto& l : enumerate_labels(2, 2, 2)) {
    if (l.nu == 0) continue;
    auto r = density_probe(standard_representative(l, amb), 100, rng);
    bool ok = l.nu == 1 ? r.vanishes && r.min_gradient >= 1e-6 : r.max_value <= 1e-6 && r.max_gradient <= 1e-6;
    if (l.nu == 1) min_defining_gradient = std::min(min_defining_gradient, r.min_gradient);
    else max_vanishing = std::max({max_vanishing, r.max_value, r.max_gradient});
    out.pass = out.pass && ok;
    out.details["grassmann(2,2,2) " + r.label] = density_to_json(r);
  }
  auto st = ComplexStructure<double>::standard(3);
  for (Duality d : {Duality::self_dual, Duality::anti_self_dual})
    for (const auto& l : enumerate_isotropic_labels(3, d)) {
      if (l.r + l.s != 1) continue;
      auto r = density_probe(isotropic_standard_representative(l, st), 100, rng);
      out.pass = out.pass && r.max_value <= 1e-6 && r.max_gradient <= 1e-6;
      max_vanishing = std::max({max_vanishing, r.max_value, r.max_gradient});
      out.details["isotropic(3) " + r.label] = density_to_json(r);
    }
  out.summary = "nu=1 min gradient " + fmt("%.3g", min_defining_gradient) + ", vanishing cases max |value|,|gradient| " +
                fmt("%.1e", max_vanishing);
  return out;
}

// 8. Exact centralizer of the stabilizer element.
Outcome stabilizers() {
  Outcome out{true, "", Json::array()};
  int pairs = 0;
  auto check = [&](const std::string& h_tag, const std::string& g_tag) {
    auto h = build_algebra<Rational>(h_tag);
    auto g = build_algebra<Rational>(g_tag);
    auto el = stabilizer_element(h, g);
    int c = centralizer_dimension(el.v0, g);
    ++pairs;
    out.pass = out.pass && c == h.dimension();
    out.details.push_back(Json{{"h", h_tag}, {"g", g_tag}, {"dim_h", h.dimension()}, {"centralizer", c}});
  };
  for (int n = 2; n <= 4; ++n)
    for (int p = 0; p <= n; ++p)
      check("so(" + std::to_string(p) + "," + std::to_string(n - p) + ")", "sl(" + std::to_string(n) + ")");
  for (int n = 2; n <= 3; ++n)
    check("so(" + std::to_string(n) + ",C)", "so(" + std::to_string(n) + "," + std::to_string(n) + ";split)");
  out.summary = std::to_string(pairs) + " pairs, " + (out.pass ? "all" : "not all") + " centralizers equal h";
  return out;
}

// 9. 500 group elements per scenario.
Outcome equivariance() {
  std::vector<std::pair<std::string, std::int64_t>> runs;
  for (const auto& s : variety_scenarios) runs.push_back({s, 500});
  runs.push_back({"flags(2,2,1,2)", 500});
  runs.push_back({"flags(3,2,1,3)", 500});
  runs.push_back({"flags(3,3,2,4)", 500});
  return campaign_criterion(runs, "equivariance", false, 901);
}

// 10. 10^5 uniform samples per scenario plus the standard representatives.
Outcome census() {
  std::vector<std::pair<std::string, std::int64_t>> runs;
  for (const auto& s : variety_scenarios) runs.push_back({s, 100000});
  return campaign_criterion(runs, "census", false, 1001);
}

}  // namespace

int main(int argc, char** argv) {
  std::string report_path;
  for (int a = 1; a < argc; ++a) {
    std::string arg = argv[a];
    if (arg == "--report" && a + 1 < argc) report_path = argv[++a];
    else {
      std::cerr << "usage: acceptance [--report file.json]\n";
      return 1;
    }
  }

  const std::vector<Criterion> criteria = {
      {1, "Grassmann codimension concordance, p+q <= 6, exact", 30, grassmann_codimension},
      {2, "isotropic codimension concordance, n <= 5, exact", 60, isotropic_codimension},
      {3, "zero-locus equivalence", 60, zero_locus},
      {4, "maximal isotropic structure (nu even, adapted basis, duality parity)", 120, isotropic_structure},
      {5, "closure monotonicity and transversal coverage", 120, closure},
      {6, "slice charts: round trip and signature concordance", 120, slice_charts},
      {7, "defining density and the non-defining top section", 60, densities},
      {8, "stabilizer element centralizers, exact", 10, stabilizers},
      {9, "equivariance of all labels", 60, equivariance},
      {10, "finiteness census", 120, census},
  };

  Json report = Json::array();
  int failed = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what(), Json::object()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.pass && secs <= c.limit_s;
    failed += pass ? 0 : 1;
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << c.id << ". " << c.title << ": " << o.summary << "; "
              << fmt("%.2f", secs) << " s (limit " << fmt("%.0f", c.limit_s) << " s)" << std::endl;
    report.push_back(Json{{"criterion", c.id},
                          {"title", c.title},
                          {"pass", pass},
                          {"summary", o.summary},
                          {"seconds", secs},
                          {"limit_seconds", c.limit_s},
                          {"details", o.details}});
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  if (!report_path.empty()) {
    std::ofstream f(report_path);
    f << report.dump(2) << "\n";
  }
  return failed == 0 ? 0 : 1;
}
