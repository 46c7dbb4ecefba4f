#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "orbitscope/numeric/json_io.hpp"

namespace orbitscope {

// Reference keys carried by report records. docs/CITATIONS.md lists the same
// keys with the statement each check exercises.
struct CitationEntry {
  std::string_view key;
  std::string_view statement;
};

inline const std::vector<CitationEntry>& citation_registry() {
  static const std::vector<CitationEntry> entries = {
      {"orbit-labels/grassmann", "SO(p,q)-orbits on Gr(i) are labelled by the signature (r,s) of the restricted form"},
      {"orbit-labels/isotropic", "maximal isotropics of C^n: nu = 2k is even and the duality class is fixed by the parity of s"},
      {"orbit-labels/flag", "two-step flags are labelled by the inner and outer signatures and the index ell"},
      {"finiteness", "the H-orbits on a generalized flag manifold are finite in number"},
      {"zero-locus/grassmann", "sigma_k vanishes at V iff r + s < k"},
      {"zero-locus/isotropic", "sigma_k of Re b vanishes at V iff r + s < k"},
      {"equivariance", "orbit labels are constant along H-orbits"},
      {"closure/grassmann", "nearby orbits satisfy r' >= r, s' >= s; every full-rank transversal signature occurs"},
      {"closure/isotropic", "nearby orbits satisfy r' >= r, s' >= s, s' = s mod 2; every full-rank transversal signature occurs"},
      {"codimension/grassmann", "orbit codimension equals nu(nu+1)/2"},
      {"codimension/isotropic", "orbit codimension equals k^2"},
      {"slice/grassmann", "slice charts: orbit coordinates times symmetric nu x nu matrices, label read off the signature"},
      {"slice/isotropic", "slice charts: orbit coordinates times Hermitian k x k matrices, label read off the signature"},
      {"density/grassmann", "sigma_i is a defining density along nu = 1 orbits and vanishes to second order for nu >= 2"},
      {"density/isotropic", "sigma_n and its derivative vanish along orbits with k >= 1"},
      {"adapted-basis", "every maximal isotropic has an adapted basis with the standard Gram matrix"},
      {"stabilizer/centralizer", "the stabilizer element v0 has centralizer exactly h"},
      {"stabilizer/trace", "v0 is the identity on h and the trace-balancing scalar on its Killing complement"},
  };
  return entries;
}

inline bool is_registered_citation(std::string_view key) {
  const auto& reg = citation_registry();
  return std::any_of(reg.begin(), reg.end(), [&](const CitationEntry& e) { return e.key == key; });
}

struct CheckCounts {
  std::int64_t total = 0;
  std::int64_t passed = 0;
  std::int64_t failed = 0;
  std::int64_t fragile = 0;
};

struct CheckRecord {
  std::string check;
  std::string ref;
  bool pass = true;
  CheckCounts counts;
  double margin = std::numeric_limits<double>::infinity();  // smallest log10 decision margin
  Json witness;                                             // null when nothing to report
  Json details = Json::object();
};

struct VerificationReport {
  Json config;
  std::vector<CheckRecord> records;

  bool passed() const {
    return std::all_of(records.begin(), records.end(), [](const CheckRecord& r) { return r.pass; });
  }
  std::int64_t failures() const {
    std::int64_t n = 0;
    for (const auto& r : records) n += r.counts.failed;
    return n;
  }
  std::int64_t fragile() const {
    std::int64_t n = 0;
    for (const auto& r : records) n += r.counts.fragile;
    return n;
  }
};

inline Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline Json record_to_json(const CheckRecord& r) {
  return Json{{"check", r.check},
              {"ref", r.ref},
              {"pass", r.pass},
              {"counts",
               Json{{"total", r.counts.total},
                    {"passed", r.counts.passed},
                    {"failed", r.counts.failed},
                    {"fragile", r.counts.fragile}}},
              {"margin", number_or_null(r.margin)},
              {"witness", r.witness},
              {"details", r.details}};
}

inline Json report_to_json(const VerificationReport& rep) {
  Json records = Json::array();
  int passed = 0;
  for (const auto& r : rep.records) {
    records.push_back(record_to_json(r));
    passed += r.pass ? 1 : 0;
  }
  return Json{{"config", rep.config},
              {"records", records},
              {"summary",
               Json{{"checks", rep.records.size()},
                    {"passed", passed},
                    {"failed", static_cast<int>(rep.records.size()) - passed},
                    {"failed_samples", rep.failures()},
                    {"fragile_samples", rep.fragile()},
                    {"pass", rep.passed()}}}};
}

}  // namespace orbitscope
