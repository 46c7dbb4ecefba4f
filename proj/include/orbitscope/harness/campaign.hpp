#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <regex>
#include <thread>

#include "orbitscope/exterior/sections.hpp"
#include "orbitscope/grassmann/flags.hpp"
#include "orbitscope/harness/report.hpp"
#include "orbitscope/isotropic/adapted_basis.hpp"
#include "orbitscope/isotropic/sampling.hpp"
#include "orbitscope/lie/stabilizer.hpp"
#include "orbitscope/lie/tangent.hpp"
#include "orbitscope/slice/density.hpp"
#include "orbitscope/slice/slice_chart.hpp"

namespace orbitscope {

enum class ScenarioKind { grassmann, isotropic, flags, stabilizer };

struct Scenario {
  ScenarioKind kind = ScenarioKind::grassmann;
  int p = 0, q = 0;
  int i = 0;            // grassmann
  int i1 = 0, i2 = 0;   // flags
  int n = 0;            // isotropic
  Duality duality = Duality::self_dual;
  std::string algebra;  // stabilizer: "so(p,q)" or "so(n,C)"
};

inline std::string to_string(const Scenario& s) {
  auto num = [](int v) { return std::to_string(v); };
  switch (s.kind) {
    case ScenarioKind::grassmann: return "grassmann(" + num(s.p) + "," + num(s.q) + "," + num(s.i) + ")";
    case ScenarioKind::isotropic: return "isotropic(" + num(s.n) + "," + to_string(s.duality) + ")";
    case ScenarioKind::flags:
      return "flags(" + num(s.p) + "," + num(s.q) + "," + num(s.i1) + "," + num(s.i2) + ")";
    case ScenarioKind::stabilizer: return "stabilizer(" + s.algebra + ")";
  }
  return {};
}

inline Json scenario_to_json(const Scenario& s) {
  switch (s.kind) {
    case ScenarioKind::grassmann: return Json{{"kind", "grassmann"}, {"p", s.p}, {"q", s.q}, {"i", s.i}};
    case ScenarioKind::isotropic:
      return Json{{"kind", "isotropic"}, {"n", s.n}, {"duality", to_string(s.duality)}};
    case ScenarioKind::flags:
      return Json{{"kind", "flags"}, {"p", s.p}, {"q", s.q}, {"i1", s.i1}, {"i2", s.i2}};
    case ScenarioKind::stabilizer: return Json{{"kind", "stabilizer"}, {"algebra", s.algebra}};
  }
  return {};
}

// Accepts the object form or the short string form, e.g. "grassmann(2,2,2)",
// "isotropic(3,self-dual)", "flags(2,2,1,2)", "stabilizer(so(2,1))".
inline Scenario parse_scenario(const Json& j) {
  Scenario s;
  if (j.is_string()) {
    const std::string text = j.get<std::string>();
    std::smatch m;
    static const std::regex gr(R"(\s*grassmann\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)\s*)");
    static const std::regex iso(R"(\s*isotropic\(\s*(\d+)\s*(?:,\s*([a-z-]+)\s*)?\)\s*)");
    static const std::regex fl(R"(\s*flags\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)\s*)");
    static const std::regex st(R"(\s*stabilizer\(\s*(.+)\s*\)\s*)");
    if (std::regex_match(text, m, gr)) {
      s.kind = ScenarioKind::grassmann;
      s.p = std::stoi(m[1]), s.q = std::stoi(m[2]), s.i = std::stoi(m[3]);
    } else if (std::regex_match(text, m, iso)) {
      s.kind = ScenarioKind::isotropic;
      s.n = std::stoi(m[1]);
      s.duality = m[2].matched ? parse_duality(m[2]) : Duality::self_dual;
    } else if (std::regex_match(text, m, fl)) {
      s.kind = ScenarioKind::flags;
      s.p = std::stoi(m[1]), s.q = std::stoi(m[2]), s.i1 = std::stoi(m[3]), s.i2 = std::stoi(m[4]);
    } else if (std::regex_match(text, m, st)) {
      s.kind = ScenarioKind::stabilizer;
      s.algebra = m[1];
    } else {
      throw InputError("unsupported scenario: " + text);
    }
    return s;
  }
  if (!j.is_object() || !j.contains("kind")) throw InputError("scenario: expected a string or an object with \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  auto need = [&](const char* key) {
    if (!j.contains(key) || !j.at(key).is_number_integer())
      throw InputError(std::string("scenario: \"") + key + "\" must be an integer");
    return j.at(key).get<int>();
  };
  if (kind == "grassmann") {
    s.kind = ScenarioKind::grassmann;
    s.p = need("p"), s.q = need("q"), s.i = need("i");
  } else if (kind == "isotropic") {
    s.kind = ScenarioKind::isotropic;
    s.n = need("n");
    s.duality = parse_duality(j.value("duality", std::string("self-dual")));
  } else if (kind == "flags") {
    s.kind = ScenarioKind::flags;
    s.p = need("p"), s.q = need("q"), s.i1 = need("i1"), s.i2 = need("i2");
  } else if (kind == "stabilizer") {
    s.kind = ScenarioKind::stabilizer;
    if (!j.contains("algebra") || !j.at("algebra").is_string())
      throw InputError("scenario: stabilizer needs an \"algebra\" tag");
    s.algebra = j.at("algebra").get<std::string>();
  } else {
    throw InputError("unsupported scenario kind: " + kind);
  }
  return s;
}

struct CampaignLimits {
  int max_ambient = 12;  // p + q
  int max_n = 8;
  int max_stabilizer_ambient = 6;  // exact centralizer solves grow like dim(g)^3
};

struct CampaignConfig {
  Scenario scenario;
  std::int64_t sample_count = 0;
  std::uint64_t seed = 0;
  TolerancePolicy tolerance;
  std::vector<std::string> checks;  // empty: every suite of the scenario
  int threads = 1;
  CampaignLimits limits;
};

inline std::vector<std::string> available_checks(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::grassmann:
      return {"classification", "census", "zero_locus", "equivariance", "closure", "codimension", "slice", "density"};
    case ScenarioKind::isotropic:
      return {"classification", "adapted_basis", "census",      "zero_locus", "equivariance",
              "closure",        "codimension",   "slice",       "density"};
    case ScenarioKind::flags: return {"classification", "equivariance"};
    case ScenarioKind::stabilizer: return {"centralizer", "trace"};
  }
  return {};
}

namespace detail {

struct StabilizerTags {
  std::string h, g;
  int ambient = 0;
};

inline StabilizerTags stabilizer_tags(const std::string& algebra) {
  std::smatch m;
  static const std::regex so_re(R"(\s*so\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*)");
  static const std::regex soc_re(R"(\s*so\(\s*(\d+)\s*,\s*C\s*\)\s*)");
  if (std::regex_match(algebra, m, so_re)) {
    int p = std::stoi(m[1]), q = std::stoi(m[2]);
    return {"so(" + std::to_string(p) + "," + std::to_string(q) + ")", "sl(" + std::to_string(p + q) + ")", p + q};
  }
  if (std::regex_match(algebra, m, soc_re)) {
    int n = std::stoi(m[1]);
    auto ns = std::to_string(n);
    return {"so(" + ns + ",C)", "so(" + ns + "," + ns + ";split)", 2 * n};
  }
  throw InputError("unsupported stabilizer algebra: " + algebra + " (expected so(p,q) or so(n,C))");
}

}  // namespace detail

inline void validate(const CampaignConfig& c) {
  if (c.sample_count < 1) throw InputError("campaign: sample_count must be >= 1");
  if (c.threads < 1 || c.threads > 256) throw InputError("campaign: threads must be in [1, 256]");
  try {
    c.tolerance.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("campaign: ") + e.what());
  }
  const auto& s = c.scenario;
  switch (s.kind) {
    case ScenarioKind::grassmann:
      if (s.p < 0 || s.q < 0 || s.p + s.q < 2 || s.p + s.q > c.limits.max_ambient)
        throw InputError("campaign: need 2 <= p + q <= " + std::to_string(c.limits.max_ambient));
      if (s.i < 1 || s.i >= s.p + s.q) throw InputError("campaign: need 1 <= i < p + q");
      break;
    case ScenarioKind::isotropic:
      if (s.n < 1 || s.n > c.limits.max_n)
        throw InputError("campaign: need 1 <= n <= " + std::to_string(c.limits.max_n));
      break;
    case ScenarioKind::flags:
      if (s.p < 0 || s.q < 0 || s.p + s.q < 3 || s.p + s.q > c.limits.max_ambient)
        throw InputError("campaign: need 3 <= p + q <= " + std::to_string(c.limits.max_ambient));
      if (s.i1 < 1 || s.i1 >= s.i2 || s.i2 >= s.p + s.q)
        throw InputError("campaign: need 1 <= i1 < i2 < p + q");
      break;
    case ScenarioKind::stabilizer: {
      auto tags = detail::stabilizer_tags(s.algebra);
      const bool complex = tags.g.find("split") != std::string::npos;
      if ((complex && tags.ambient < 4) || (!complex && tags.ambient < 2) ||
          tags.ambient > c.limits.max_stabilizer_ambient)
        throw InputError("campaign: stabilizer needs 0 < dim h < dim g and ambient dimension <= " +
                         std::to_string(c.limits.max_stabilizer_ambient));
      break;
    }
  }
  const auto known = available_checks(s.kind);
  for (const auto& name : c.checks)
    if (std::find(known.begin(), known.end(), name) == known.end())
      throw InputError("campaign: check \"" + name + "\" is not available for " + to_string(s));
}

inline CampaignConfig campaign_config_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("campaign config must be a JSON object");
  static const std::set<std::string> keys = {"scenario", "sample_count", "seed", "tolerance",
                                             "checks",   "threads",      "limits"};
  for (const auto& item : j.items())
    if (!keys.count(item.key())) throw InputError("campaign config: unknown key \"" + item.key() + "\"");
  if (!j.contains("scenario")) throw InputError("campaign config: missing \"scenario\"");
  if (!j.contains("sample_count")) throw InputError("campaign config: missing \"sample_count\"");
  CampaignConfig c;
  try {
    c.scenario = parse_scenario(j.at("scenario"));
    c.sample_count = j.at("sample_count").get<std::int64_t>();
    c.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("tolerance")) {
      const Json& t = j.at("tolerance");
      c.tolerance.relative = t.value("relative", c.tolerance.relative);
      c.tolerance.absolute = t.value("absolute", c.tolerance.absolute);
      c.tolerance.band = t.value("band", c.tolerance.band);
    }
    if (j.contains("checks")) c.checks = j.at("checks").get<std::vector<std::string>>();
    c.threads = j.value("threads", 1);
    if (j.contains("limits")) {
      const Json& l = j.at("limits");
      c.limits.max_ambient = l.value("max_ambient", c.limits.max_ambient);
      c.limits.max_n = l.value("max_n", c.limits.max_n);
      c.limits.max_stabilizer_ambient = l.value("max_stabilizer_ambient", c.limits.max_stabilizer_ambient);
    }
  } catch (const Json::exception& e) {
    throw InputError(std::string("campaign config: ") + e.what());
  }
  validate(c);
  return c;
}

// Threads are left out: they never change the report.
inline Json campaign_config_to_json(const CampaignConfig& c) {
  Json checks = Json::array();
  for (const auto& name : c.checks.empty() ? available_checks(c.scenario.kind) : c.checks) checks.push_back(name);
  return Json{{"scenario", to_string(c.scenario)},
              {"sample_count", c.sample_count},
              {"seed", c.seed},
              {"tolerance",
               Json{{"relative", c.tolerance.relative}, {"absolute", c.tolerance.absolute}, {"band", c.tolerance.band}}},
              {"checks", checks},
              {"rng", "philox4x32-10"}};
}

// ---------------------------------------------------------------------------
// Check suites. Each sample j draws from its own Philox stream
// (seed, stream_id(tag(check), j)).

struct SampleOutcome {
  enum class Status { pass, fail, fragile };
  Status status = Status::pass;
  double margin = std::numeric_limits<double>::infinity();
  std::string observed;  // label key collected for coverage checks
  std::string note;
  Json witness;

  void fail(std::string why) {
    if (status == Status::pass) {
      status = Status::fail;
      note = std::move(why);
    }
  }
  void bound(double m) { margin = std::min(margin, m); }
};

struct CheckSuite {
  std::string name;
  std::string ref;
  std::function<SampleOutcome(std::int64_t, Philox4x32&)> run;
  std::function<void(const std::set<std::string>&, CheckRecord&)> finish;  // optional
};

namespace detail {

template <class F>
SampleOutcome guarded(F&& f) {
  SampleOutcome out;
  try {
    f(out);
  } catch (const AmbiguityError& e) {
    out.status = SampleOutcome::Status::fragile;
    out.note = e.what();
    if (std::isfinite(e.margin())) out.bound(e.margin());
  } catch (const std::exception& e) {
    out.status = SampleOutcome::Status::fail;
    out.note = e.what();
  }
  return out;
}

inline Json vector_to_json(const RealVector& v) { return matrix_to_json(RealMatrix(v)); }

inline std::uint32_t check_tag(std::string_view name) {
  std::uint32_t h = 2166136261u;
  for (unsigned char ch : name) h = (h ^ ch) * 16777619u;
  return h & 0xFFFFFFu;
}

inline void require_coverage(const std::vector<std::string>& expected, const std::set<std::string>& observed,
                             CheckRecord& rec) {
  Json missing = Json::array();
  for (const auto& e : expected)
    if (!observed.count(e)) missing.push_back(e);
  rec.details["expected_patterns"] = expected.size();
  rec.details["missing_patterns"] = missing;
  if (!missing.empty()) {
    rec.pass = false;
    rec.witness = Json{{"missing", missing}};
  }
}

inline double density_margin(bool defining_expected, const DensityProbeReport& r) {
  if (defining_expected)
    return std::min(std::log10(r.min_gradient / 1e-6), std::log10(1e-6 / std::max(r.max_value, 1e-300)));
  return std::log10(1e-6 / std::max({r.max_value, r.max_gradient, 1e-300}));
}

// ---- Grassmannians ---------------------------------------------------------

struct GrassmannSetting {
  GrassmannSetting(int p_, int q_, int i_, const TolerancePolicy& t)
      : p(p_), q(q_), i(i_), tol(t), ambient(QuadraticSpace<double>::standard(p_, q_)),
        labels(enumerate_labels(p_, q_, i_)), h(build_so_pq<double>(p_, q_)) {
    for (const auto& l : labels) {
      reps.push_back(standard_representative(l, ambient, tol));
      if (l.nu > 0) non_open.push_back(reps.size() - 1);
    }
  }

  bool known(const OrbitLabel& l) const { return std::find(labels.begin(), labels.end(), l) != labels.end(); }

  double margin(const SubspacePoint<double>& v) const {
    return inertia_report(restrict_form(v), tol, restriction_scale(v)).margin();
  }

  SubspacePoint<double> uniform(Philox4x32& rng) const { return sample_uniform(ambient, i, rng, tol); }

  // Three uniform draws, then a random point on a standard orbit.
  SubspacePoint<double> mixed(std::int64_t j, Philox4x32& rng) const {
    if (j % 4 == 3)
      return act(random_group_element(h, 1.0, rng), reps[static_cast<size_t>(j / 4) % reps.size()], tol);
    return uniform(rng);
  }

  int p, q, i;
  TolerancePolicy tol;
  QuadraticSpacePtr<double> ambient;
  std::vector<OrbitLabel> labels;
  MatrixLieAlgebra<double> h;
  std::vector<SubspacePoint<double>> reps;
  std::vector<size_t> non_open;
};

struct IsotropicSetting {
  IsotropicSetting(int n_, Duality d, const TolerancePolicy& t)
      : n(n_), duality(d), tol(t), structure(ComplexStructure<double>::standard(n_)),
        labels(enumerate_isotropic_labels(n_, d)), h(build_so_complex<double>(n_)) {
    for (const auto& l : labels) {
      reps.push_back(isotropic_standard_representative(l, structure, tol));
      if (l.k > 0) non_open.push_back(reps.size() - 1);
    }
  }

  bool known(const IsotropicLabel& l) const {
    return std::find(labels.begin(), labels.end(), l) != labels.end();
  }

  double margin(const IsotropicPoint<double>& v) const {
    return inertia_report(restrict_real_form(v), tol, restriction_scale(v)).margin();
  }

  IsotropicPoint<double> uniform(Philox4x32& rng) const {
    return sample_isotropic(structure, duality, rng, 1.0, tol);
  }

  IsotropicPoint<double> mixed(std::int64_t j, Philox4x32& rng) const {
    if (j % 4 == 3)
      return act(random_group_element(h, 1.0, rng), reps[static_cast<size_t>(j / 4) % reps.size()], tol);
    return uniform(rng);
  }

  int n;
  Duality duality;
  TolerancePolicy tol;
  ComplexStructurePtr<double> structure;
  std::vector<IsotropicLabel> labels;
  MatrixLieAlgebra<double> h;
  std::vector<IsotropicPoint<double>> reps;
  std::vector<size_t> non_open;
};

inline Json point_json(const SubspacePoint<double>& v) { return subspace_to_json(v); }
inline Json point_json(const IsotropicPoint<double>& v) { return isotropic_to_json(v); }

inline OrbitLabel label_of(const GrassmannSetting& s, const SubspacePoint<double>& v) { return classify(v, s.tol); }
inline IsotropicLabel label_of(const IsotropicSetting& s, const IsotropicPoint<double>& v) {
  auto c = classify_isotropic_full(v, s.tol);
  return c.label;
}

inline RealMatrix restriction_of(const SubspacePoint<double>& v) { return restrict_form(v); }
inline RealMatrix restriction_of(const IsotropicPoint<double>& v) { return restrict_real_form(v); }

template <class S>
std::vector<std::string> label_strings(const S& s) {
  std::vector<std::string> out;
  for (const auto& l : s.labels) out.push_back(to_string(l));
  return out;
}

// Suites shared by the two variety kinds.
template <class S>
CheckSuite classification_suite(std::shared_ptr<const S> s, std::string ref) {
  return {"classification", std::move(ref),
          [s](std::int64_t j, Philox4x32& rng) {
            return guarded([&](SampleOutcome& o) {
              auto v = s->mixed(j, rng);
              o.witness = point_json(v);
              o.bound(s->margin(v));
              auto label = label_of(*s, v);
              o.observed = to_string(label);
              if (!s->known(label)) o.fail("label " + to_string(label) + " is not enumerated");
            });
          },
          {}};
}

template <class S>
CheckSuite census_suite(std::shared_ptr<const S> s) {
  return {"census", "finiteness",
          [s](std::int64_t, Philox4x32& rng) {
            return guarded([&](SampleOutcome& o) {
              auto v = s->uniform(rng);
              o.witness = point_json(v);
              o.bound(s->margin(v));
              auto label = label_of(*s, v);
              o.observed = to_string(label);
              if (!s->known(label)) o.fail("label " + to_string(label) + " is not enumerated");
            });
          },
          [s](const std::set<std::string>& observed, CheckRecord& rec) {
            std::set<std::string> seen = observed;
            Json from_reps = Json::array();
            for (const auto& r : s->reps) {
              auto l = to_string(label_of(*s, r));
              seen.insert(l);
              from_reps.push_back(l);
            }
            const auto enumerated = label_strings(*s);
            std::set<std::string> expected(enumerated.begin(), enumerated.end());
            Json missing = Json::array(), unexpected = Json::array();
            for (const auto& e : expected)
              if (!seen.count(e)) missing.push_back(e);
            for (const auto& e : seen)
              if (!expected.count(e)) unexpected.push_back(e);
            rec.details["enumerated"] = enumerated;
            rec.details["observed_in_samples"] = observed;
            rec.details["representatives"] = from_reps;
            rec.details["missing"] = missing;
            rec.details["unexpected"] = unexpected;
            if (!missing.empty() || !unexpected.empty()) {
              rec.pass = false;
              rec.witness = Json{{"missing", missing}, {"unexpected", unexpected}};
            }
          }};
}

// Standard representatives first, then uniform samples.
template <class S>
CheckSuite zero_locus_suite(std::shared_ptr<const S> s, std::string ref) {
  return {"zero_locus", std::move(ref),
          [s](std::int64_t j, Philox4x32& rng) {
            return guarded([&](SampleOutcome& o) {
              auto v = j < static_cast<std::int64_t>(s->reps.size()) ? s->reps[static_cast<size_t>(j)] : s->uniform(rng);
              o.witness = point_json(v);
              o.bound(s->margin(v));
              auto label = label_of(*s, v);
              o.observed = to_string(label);
              const RealMatrix m = restriction_of(v);
              const int dim = static_cast<int>(m.rows());
              for (int k = 1; k <= dim; ++k) {
                auto verdict = zero_locus_verdict(m, k, s->tol, restriction_scale(v));
                if (verdict.zero != (label.r + label.s < k)) {
                  o.fail("sigma_" + std::to_string(k) + " zero=" + (verdict.zero ? "true" : "false") + " at " +
                         to_string(label));
                  break;
                }
              }
            });
          },
          {}};
}

// One group element per sample, applied to every standard representative and
// to one uniform point.
template <class S>
CheckSuite equivariance_suite(std::shared_ptr<const S> s) {
  return {"equivariance", "equivariance",
          [s](std::int64_t, Philox4x32& rng) {
            return guarded([&](SampleOutcome& o) {
              RealMatrix g = random_group_element(s->h, 1.0, rng);
              auto points = s->reps;
              points.push_back(s->uniform(rng));
              for (const auto& v : points) {
                o.witness = Json{{"point", point_json(v)}, {"group_element", matrix_to_json(g)}};
                auto moved = act(g, v, s->tol);
                o.bound(std::min(s->margin(v), s->margin(moved)));
                auto a = label_of(*s, v);
                auto b = label_of(*s, moved);
                if (!(a == b)) {
                  o.fail("label " + to_string(a) + " moved to " + to_string(b));
                  return;
                }
              }
              o.witness = nullptr;
            });
          },
          {}};
}

template <class S>
CheckSuite codimension_suite(std::shared_ptr<const S> s, std::string ref) {
  return {"codimension", std::move(ref),
          [s](std::int64_t j, Philox4x32& rng) {
            return guarded([&](SampleOutcome& o) {
              const size_t idx = static_cast<size_t>(j) % s->reps.size();
              auto v = act(random_group_element(s->h, 1.0, rng), s->reps[idx], s->tol);
              o.witness = point_json(v);
              auto rep = tangent_map_rank(s->h, v, s->tol);
              o.bound(rep.margin);
              const auto& label = s->labels[idx];
              o.observed = to_string(label);
              transversal_dimension(rep, label);
            });
          },
          {}};
}

inline bool closure_ok(const OrbitLabel& a, const OrbitLabel& b) { return b.r >= a.r && b.s >= a.s; }
inline bool closure_ok(const IsotropicLabel& a, const IsotropicLabel& b) {
  return b.r >= a.r && b.s >= a.s && (b.s - a.s) % 2 == 0;
}

inline std::vector<std::string> full_rank_targets(const OrbitLabel& l) {
  std::vector<std::string> out;
  for (int a = 0; a <= l.nu; ++a) out.push_back(to_string(l) + "->" + to_string(make_label(l.p, l.q, l.r + a, l.s + l.nu - a, 0)));
  return out;
}
inline std::vector<std::string> full_rank_targets(const IsotropicLabel& l) {
  std::vector<std::string> out;
  for (int a = 0; a <= l.k; ++a)
    out.push_back(to_string(l) + "->" + to_string(make_isotropic_label(l.n, l.r + 2 * a, l.s + 2 * (l.k - a))));
  return out;
}

// Perturbations of size 1e-3 at the non-open representatives, cycling.
template <class S>
CheckSuite closure_suite(std::shared_ptr<const S> s, std::string ref) {
  return {"closure", std::move(ref),
          [s](std::int64_t j, Philox4x32& rng) {
            return guarded([&](SampleOutcome& o) {
              if (s->non_open.empty()) return;
              const size_t idx = s->non_open[static_cast<size_t>(j) % s->non_open.size()];
              const auto& base = s->labels[idx];
              auto w = perturb(s->reps[idx], 1e-3, rng, s->tol);
              o.witness = point_json(w);
              o.bound(s->margin(w));
              auto label = label_of(*s, w);
              o.observed = to_string(base) + "->" + to_string(label);
              if (!closure_ok(base, label)) o.fail("perturbation of " + to_string(base) + " reached " + to_string(label));
            });
          },
          [s](const std::set<std::string>& observed, CheckRecord& rec) {
            std::vector<std::string> expected;
            for (size_t idx : s->non_open)
              for (auto& t : full_rank_targets(s->labels[idx])) expected.push_back(t);
            rec.details["transitions"] = observed;
            require_coverage(expected, observed, rec);
          }};
}

template <class S>
CheckSuite slice_suite(std::shared_ptr<const S> s, std::string ref) {
  struct Charts {
    std::vector<std::optional<SliceChart>> charts;
    std::vector<std::string> errors;
  };
  auto built = std::make_shared<Charts>();
  for (size_t idx : s->non_open) {
    try {
      built->charts.emplace_back(build_slice_chart(s->reps[idx], SliceChartOptions{}, s->tol));
      built->errors.emplace_back();
    } catch (const Error& e) {
      built->charts.emplace_back(std::nullopt);
      built->errors.emplace_back(e.what());
    }
  }
  return {"slice", std::move(ref),
          [s, built](std::int64_t j, Philox4x32& rng) {
            return guarded([&](SampleOutcome& o) {
              if (s->non_open.empty()) return;
              const size_t c = static_cast<size_t>(j) % s->non_open.size();
              const size_t idx = s->non_open[c];
              o.witness = Json{{"center", point_json(s->reps[idx])}};
              if (!built->charts[c]) {
                o.fail("chart construction failed: " + built->errors[c]);
                return;
              }
              const auto& chart = *built->charts[c];
              auto trip = chart_round_trip(chart, 1, chart.radius(), rng);
              if (trip.failures > 0) {
                o.witness["chart_point"] = vector_to_json(trip.witness);
                o.fail("round trip residual " + std::to_string(trip.max_residual));
                return;
              }
              auto conc = chart_concordance(chart, 1, chart.radius(), rng);
              if (conc.fragile > 0)
                throw AmbiguityError("transversal signature inside the tolerance band");
              if (conc.points == 0) {
                o.fail("no concordance target inside the certified ball");
              } else if (conc.matches != 1) {
                o.witness["chart_point"] = vector_to_json(conc.witness);
                o.fail("transversal signature disagrees with the classification");
              } else {
                o.observed = to_string(s->labels[idx]) + ":" + conc.signatures.begin()->first;
              }
            });
          },
          [s, built](const std::set<std::string>&, CheckRecord& rec) {
            Json charts = Json::array();
            for (size_t c = 0; c < s->non_open.size(); ++c) {
              Json entry{{"label", to_string(s->labels[s->non_open[c]])}};
              if (built->charts[c]) entry["radius"] = built->charts[c]->radius();
              else entry["error"] = built->errors[c];
              charts.push_back(entry);
            }
            rec.details["charts"] = charts;
          }};
}

inline bool density_expected_defining(const OrbitLabel& l) { return l.nu == 1; }
inline bool density_expected_defining(const IsotropicLabel&) { return false; }

template <class S>
CheckSuite density_suite(std::shared_ptr<const S> s, std::string ref) {
  return {"density", std::move(ref),
          [s](std::int64_t j, Philox4x32& rng) {
            return guarded([&](SampleOutcome& o) {
              if (s->non_open.empty()) return;
              const size_t idx = s->non_open[static_cast<size_t>(j) % s->non_open.size()];
              auto v = act(random_group_element(s->h, 1.0, rng), s->reps[idx], s->tol);
              o.witness = point_json(v);
              auto r = density_probe(v, 1, rng, 1.0, s->tol);
              const bool defining = density_expected_defining(s->labels[idx]);
              o.bound(density_margin(defining, r));
              o.observed = r.label;
              bool ok = defining ? r.vanishes && r.gradient_nonvanishing : r.vanishes && r.gradient_vanishes;
              if (!ok)
                o.fail("sigma_" + std::to_string(r.sigma_index) + " at " + r.label + ": value " +
                       std::to_string(r.max_value) + ", gradient " + std::to_string(r.max_gradient));
            });
          },
          {}};
}

inline CheckSuite adapted_basis_suite(std::shared_ptr<const IsotropicSetting> s) {
  return {"adapted_basis", "adapted-basis",
          [s](std::int64_t j, Philox4x32& rng) {
            return guarded([&](SampleOutcome& o) {
              auto v = s->mixed(j, rng);
              o.witness = point_json(v);
              o.bound(s->margin(v));
              auto c = classify_isotropic_full(v, s->tol);
              auto ab = adapted_basis(v, s->tol);
              o.observed = to_string(c.label);
              if (c.label.nu % 2 != 0) o.fail("odd nullity");
              if (!(ab.residual <= 1e-8)) o.fail("adapted-basis Gram residual " + std::to_string(ab.residual));
              if (ab.k != c.label.k || ab.r != c.label.r || ab.s != c.label.s)
                o.fail("adapted basis shape disagrees with " + to_string(c.label));
              if (!c.parity_agrees || c.hodge.duality != s->duality)
                o.fail("Hodge verdict " + to_string(c.hodge.duality) + " disagrees with the parity rule");
            });
          },
          {}};
}

// ---- Flags -------------------------------------------------------------------

struct FlagSetting {
  FlagSetting(int p_, int q_, int i1_, int i2_, const TolerancePolicy& t)
      : p(p_), q(q_), i1(i1_), i2(i2_), tol(t), ambient(QuadraticSpace<double>::standard(p_, q_)),
        inner_labels(enumerate_labels(p_, q_, i1_)), outer_labels(enumerate_labels(p_, q_, i2_)),
        h(build_so_pq<double>(p_, q_)) {}

  struct Draw {
    std::optional<TwoStepFlagPoint<double>> flag;
    std::optional<TwoStepFlagLabel> expected;
  };

  // Even samples: a structured flag with known label moved by a random group
  // element; odd samples: outer uniform, inner a random subspace of it.
  Draw draw(std::int64_t j, Philox4x32& rng) const {
    Draw d;
    if (j % 2 == 1) {
      auto outer = sample_uniform(ambient, i2, rng, tol);
      RealMatrix inner = outer.basis() * rng.gaussian(i2, i1);
      d.flag.emplace(SubspacePoint<double>(ambient, inner, tol), outer, tol);
      return d;
    }
    const auto& ol = outer_labels[static_cast<size_t>(j / 2) % outer_labels.size()];
    const int n = p + q;
    auto unit = [n](int a) { return RealVector(RealVector::Unit(n, a)); };
    std::vector<RealVector> plus, minus, null;
    for (int a = 0; a < ol.r; ++a) plus.push_back(unit(a));
    for (int a = 0; a < ol.s; ++a) minus.push_back(unit(p + a));
    for (int a = 0; a < ol.nu; ++a) null.push_back((unit(ol.r + a) + unit(p + ol.s + a)) / std::sqrt(2.0));
    // choices (ell, a, b, c) with ell + a + b + c = i1
    std::vector<std::array<int, 4>> choices;
    for (int ell = 0; ell <= std::min(ol.r, ol.s); ++ell)
      for (int a = 0; a <= ol.r - ell; ++a)
        for (int b = 0; b <= ol.s - ell; ++b) {
          int c = i1 - ell - a - b;
          if (c >= 0 && c <= ol.nu) choices.push_back({ell, a, b, c});
        }
    const auto ch = choices[static_cast<size_t>(rng.uniform() * choices.size()) % choices.size()];
    RealMatrix outer(n, i2), inner(n, i1);
    int col = 0;
    for (const auto& v : plus) outer.col(col++) = v;
    for (const auto& v : minus) outer.col(col++) = v;
    for (const auto& v : null) outer.col(col++) = v;
    col = 0;
    for (int t = 0; t < ch[0]; ++t) inner.col(col++) = (plus[t] + minus[t]) / std::sqrt(2.0);
    for (int t = 0; t < ch[1]; ++t) inner.col(col++) = plus[ch[0] + t];
    for (int t = 0; t < ch[2]; ++t) inner.col(col++) = minus[ch[0] + t];
    for (int t = 0; t < ch[3]; ++t) inner.col(col++) = null[t];
    RealMatrix g = random_group_element(h, 1.0, rng);
    d.flag.emplace(SubspacePoint<double>(ambient, g * inner, tol), SubspacePoint<double>(ambient, g * outer, tol), tol);
    d.expected = TwoStepFlagLabel{make_label(p, q, ch[1], ch[2], ch[0] + ch[3]), ol, ch[0]};
    return d;
  }

  double margin(const TwoStepFlagPoint<double>& f) const {
    auto m = [&](const SubspacePoint<double>& v) {
      return inertia_report(restrict_form(v), tol, restriction_scale(v)).margin();
    };
    return std::min(m(f.inner()), m(f.outer()));
  }

  bool known(const TwoStepFlagLabel& l) const {
    auto in = [](const std::vector<OrbitLabel>& v, const OrbitLabel& x) {
      return std::find(v.begin(), v.end(), x) != v.end();
    };
    return in(inner_labels, l.inner) && in(outer_labels, l.outer);
  }

  int p, q, i1, i2;
  TolerancePolicy tol;
  QuadraticSpacePtr<double> ambient;
  std::vector<OrbitLabel> inner_labels, outer_labels;
  MatrixLieAlgebra<double> h;
};

inline Json flag_json(const TwoStepFlagPoint<double>& f) {
  return Json{{"inner", subspace_to_json(f.inner())}, {"outer", subspace_to_json(f.outer())}};
}

inline CheckSuite flag_classification_suite(std::shared_ptr<const FlagSetting> s) {
  return {"classification", "orbit-labels/flag",
          [s](std::int64_t j, Philox4x32& rng) {
            return guarded([&](SampleOutcome& o) {
              auto d = s->draw(j, rng);
              o.witness = flag_json(*d.flag);
              o.bound(s->margin(*d.flag));
              auto label = classify_flag(*d.flag, s->tol);
              o.observed = to_string(label);
              if (!s->known(label)) o.fail("flag label " + to_string(label) + " has unknown constituents");
              if (d.expected && !(label == *d.expected))
                o.fail("flag label " + to_string(label) + " differs from the constructed " + to_string(*d.expected));
            });
          },
          {}};
}

inline CheckSuite flag_equivariance_suite(std::shared_ptr<const FlagSetting> s) {
  return {"equivariance", "equivariance",
          [s](std::int64_t j, Philox4x32& rng) {
            return guarded([&](SampleOutcome& o) {
              auto d = s->draw(j, rng);
              RealMatrix g = random_group_element(s->h, 1.0, rng);
              TwoStepFlagPoint<double> moved(act(g, d.flag->inner(), s->tol), act(g, d.flag->outer(), s->tol), s->tol);
              o.witness = Json{{"flag", flag_json(*d.flag)}, {"group_element", matrix_to_json(g)}};
              o.bound(std::min(s->margin(*d.flag), s->margin(moved)));
              auto a = classify_flag(*d.flag, s->tol);
              auto b = classify_flag(moved, s->tol);
              o.observed = to_string(a);
              if (!(a == b)) o.fail("flag label " + to_string(a) + " moved to " + to_string(b));
            });
          },
          {}};
}

// ---- Stabilizer element ------------------------------------------------------

struct StabilizerSetting {
  StabilizerSetting(const std::string& algebra, const TolerancePolicy& t)
      : tags(stabilizer_tags(algebra)), tol(t), h(build_algebra<double>(tags.h)), g(build_algebra<double>(tags.g)) {
    auto hr = build_algebra<Rational>(tags.h);
    auto gr = build_algebra<Rational>(tags.g);
    auto el = stabilizer_element(hr, gr, tol);
    dim_h = hr.dimension();
    dim_g = gr.dimension();
    centralizer = centralizer_dimension(el.v0, gr, tol);
    Rational trace = el.v0.trace();
    RationalMatrix vh = el.v0 * el.h_coordinates - el.h_coordinates;
    RationalMatrix ve = el.v0 * el.complement - el.complement * el.complement_scalar;
    exact_trace_ok = trace == 0 && el.complement_scalar == Rational(-dim_h, dim_g - dim_h) && is_zero_matrix(vh) &&
                     is_zero_matrix(ve);
    scalar = format_rational(el.complement_scalar);
    v0 = to_real(el.v0);
    c = static_cast<double>(el.complement_scalar);
    RationalMatrix split(dim_g, dim_g);
    split << el.h_coordinates, el.complement;
    split_basis = to_real(split);
    split_inverse = to_real(RationalMatrix(inverse_of(split)));
  }

  StabilizerTags tags;
  TolerancePolicy tol;
  MatrixLieAlgebra<double> h, g;
  int dim_h = 0, dim_g = 0, centralizer = 0;
  bool exact_trace_ok = false;
  std::string scalar;
  RealMatrix v0, split_basis, split_inverse;
  double c = 0;
};

inline Json stabilizer_details(const StabilizerSetting& s) {
  return Json{{"h", s.tags.h},          {"g", s.tags.g},
              {"dim_h", s.dim_h},       {"dim_g", s.dim_g},
              {"centralizer_dimension", s.centralizer}, {"complement_scalar", s.scalar},
              {"exact_trace_ok", s.exact_trace_ok}};
}

// Elements of h commute with v0; elements of the Killing complement do not.
inline CheckSuite centralizer_suite(std::shared_ptr<const StabilizerSetting> s) {
  return {"centralizer", "stabilizer/centralizer",
          [s](std::int64_t, Philox4x32& rng) {
            return guarded([&](SampleOutcome& o) {
              const Index dh = s->dim_h, dg = s->dim_g;
              RealVector a(dh), b(dg - dh);
              for (Index t = 0; t < dh; ++t) a(t) = rng.normal();
              for (Index t = 0; t < b.size(); ++t) b(t) = rng.normal();
              RealVector xh = s->split_basis.leftCols(dh) * a;
              RealVector xe = s->split_basis.rightCols(dg - dh) * b;
              o.witness = Json{{"h_part", vector_to_json(xh)}, {"complement_part", vector_to_json(xe)}};
              auto residual = [&](const RealVector& x) {
                RealMatrix ad = ad_matrix(s->g, s->g.element(x));
                RealMatrix cm = ad * s->v0 - s->v0 * ad;
                return std::pair{cm.norm(), s->tol.threshold(ad.norm() * s->v0.norm())};
              };
              auto [rh, th] = residual(xh);
              auto [re, te] = residual(xe);
              if (s->tol.in_band(rh, th) || s->tol.in_band(re, te))
                throw AmbiguityError("commutator residual inside the tolerance band");
              o.bound(std::min(std::log10(th / std::max(rh, 1e-300)), std::log10(re / te)));
              if (rh > th) o.fail("an element of h does not commute with v0");
              if (re <= te) o.fail("a complement element commutes with v0");
            });
          },
          [s](const std::set<std::string>&, CheckRecord& rec) {
            rec.details = stabilizer_details(*s);
            if (s->centralizer != s->dim_h) {
              rec.pass = false;
              rec.witness = stabilizer_details(*s);
            }
          }};
}

inline CheckSuite trace_suite(std::shared_ptr<const StabilizerSetting> s) {
  return {"trace", "stabilizer/trace",
          [s](std::int64_t, Philox4x32& rng) {
            return guarded([&](SampleOutcome& o) {
              const Index dh = s->dim_h, dg = s->dim_g;
              RealVector x(dg);
              for (Index t = 0; t < dg; ++t) x(t) = rng.normal();
              o.witness = Json{{"coordinates", vector_to_json(x)}};
              RealVector parts = s->split_inverse * x;
              RealVector expected = s->split_basis.leftCols(dh) * parts.head(dh) +
                                    s->c * (s->split_basis.rightCols(dg - dh) * parts.tail(dg - dh));
              double r = (s->v0 * x - expected).norm();
              double th = s->tol.threshold(s->v0.norm() * x.norm());
              if (s->tol.in_band(r, th)) throw AmbiguityError("v0 residual inside the tolerance band");
              o.bound(std::log10(th / std::max(r, 1e-300)));
              if (r > th) o.fail("v0 is not identity on h plus the scalar on the complement");
            });
          },
          [s](const std::set<std::string>&, CheckRecord& rec) {
            rec.details = stabilizer_details(*s);
            if (!s->exact_trace_ok) {
              rec.pass = false;
              rec.witness = stabilizer_details(*s);
            }
          }};
}

// ---- Assembly ------------------------------------------------------------------

inline std::vector<CheckSuite> build_suites(const CampaignConfig& cfg) {
  const auto& sc = cfg.scenario;
  const auto& tol = cfg.tolerance;
  const auto names = cfg.checks.empty() ? available_checks(sc.kind) : cfg.checks;
  std::vector<CheckSuite> out;
  auto wanted = [&](const char* name) { return std::find(names.begin(), names.end(), name) != names.end(); };
  switch (sc.kind) {
    case ScenarioKind::grassmann: {
      auto s = std::make_shared<const GrassmannSetting>(sc.p, sc.q, sc.i, tol);
      for (const auto& name : names) {
        if (name == "classification") out.push_back(classification_suite(s, "orbit-labels/grassmann"));
        if (name == "census") out.push_back(census_suite(s));
        if (name == "zero_locus") out.push_back(zero_locus_suite(s, "zero-locus/grassmann"));
        if (name == "equivariance") out.push_back(equivariance_suite(s));
        if (name == "closure") out.push_back(closure_suite(s, "closure/grassmann"));
        if (name == "codimension") out.push_back(codimension_suite(s, "codimension/grassmann"));
        if (name == "slice") out.push_back(slice_suite(s, "slice/grassmann"));
        if (name == "density") out.push_back(density_suite(s, "density/grassmann"));
      }
      break;
    }
    case ScenarioKind::isotropic: {
      auto s = std::make_shared<const IsotropicSetting>(sc.n, sc.duality, tol);
      for (const auto& name : names) {
        if (name == "classification") out.push_back(classification_suite(s, "orbit-labels/isotropic"));
        if (name == "adapted_basis") out.push_back(adapted_basis_suite(s));
        if (name == "census") out.push_back(census_suite(s));
        if (name == "zero_locus") out.push_back(zero_locus_suite(s, "zero-locus/isotropic"));
        if (name == "equivariance") out.push_back(equivariance_suite(s));
        if (name == "closure") out.push_back(closure_suite(s, "closure/isotropic"));
        if (name == "codimension") out.push_back(codimension_suite(s, "codimension/isotropic"));
        if (name == "slice") out.push_back(slice_suite(s, "slice/isotropic"));
        if (name == "density") out.push_back(density_suite(s, "density/isotropic"));
      }
      break;
    }
    case ScenarioKind::flags: {
      auto s = std::make_shared<const FlagSetting>(sc.p, sc.q, sc.i1, sc.i2, tol);
      if (wanted("classification")) out.push_back(flag_classification_suite(s));
      if (wanted("equivariance")) out.push_back(flag_equivariance_suite(s));
      break;
    }
    case ScenarioKind::stabilizer: {
      auto s = std::make_shared<const StabilizerSetting>(sc.algebra, tol);
      if (wanted("centralizer")) out.push_back(centralizer_suite(s));
      if (wanted("trace")) out.push_back(trace_suite(s));
      break;
    }
  }
  return out;
}

struct Tally {
  CheckCounts counts;
  double margin = std::numeric_limits<double>::infinity();
  Json margin_witness;
  Json fail_witness;
  Json fragile_witness;
  std::set<std::string> observed;

  static Json witness(std::int64_t j, const SampleOutcome& o) {
    Json w{{"sample", j}};
    if (!o.note.empty()) w["note"] = o.note;
    if (std::isfinite(o.margin)) w["margin"] = o.margin;
    w["point"] = o.witness;
    return w;
  }

  void add(std::int64_t j, const SampleOutcome& o) {
    ++counts.total;
    if (!o.observed.empty()) observed.insert(o.observed);
    switch (o.status) {
      case SampleOutcome::Status::pass:
        ++counts.passed;
        if (o.margin < margin) {
          margin = o.margin;
          if (!o.witness.is_null()) margin_witness = witness(j, o);
        }
        break;
      case SampleOutcome::Status::fail:
        ++counts.failed;
        if (fail_witness.is_null()) fail_witness = witness(j, o);
        break;
      case SampleOutcome::Status::fragile:
        ++counts.fragile;
        if (fragile_witness.is_null()) fragile_witness = witness(j, o);
        break;
    }
  }

  // Shards are merged in index order, so the earliest sample wins ties.
  void merge(Tally&& o) {
    counts.total += o.counts.total;
    counts.passed += o.counts.passed;
    counts.failed += o.counts.failed;
    counts.fragile += o.counts.fragile;
    if (o.margin < margin) {
      margin = o.margin;
      margin_witness = std::move(o.margin_witness);
    }
    if (fail_witness.is_null()) fail_witness = std::move(o.fail_witness);
    if (fragile_witness.is_null()) fragile_witness = std::move(o.fragile_witness);
    observed.merge(o.observed);
  }
};

}  // namespace detail

inline CheckRecord run_suite(const CheckSuite& suite, const CampaignConfig& cfg) {
  const std::int64_t total = cfg.sample_count;
  const int shards = static_cast<int>(std::min<std::int64_t>(cfg.threads, total));
  const std::uint32_t tag = detail::check_tag(suite.name);
  std::vector<detail::Tally> tallies(static_cast<size_t>(shards));
  auto work = [&](int shard) {
    const std::int64_t begin = total * shard / shards, end = total * (shard + 1) / shards;
    for (std::int64_t j = begin; j < end; ++j) {
      Philox4x32 rng(cfg.seed, stream_id(tag, static_cast<std::uint64_t>(j)));
      SampleOutcome o;
      try {
        o = suite.run(j, rng);
      } catch (const std::exception& e) {
        o.status = SampleOutcome::Status::fail;
        o.note = e.what();
      }
      tallies[static_cast<size_t>(shard)].add(j, o);
    }
  };
  if (shards == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < shards; ++t) pool.emplace_back(work, t);
    for (auto& t : pool) t.join();
  }
  detail::Tally merged;
  for (auto& t : tallies) merged.merge(std::move(t));

  CheckRecord rec;
  rec.check = suite.name;
  rec.ref = suite.ref;
  rec.counts = merged.counts;
  rec.margin = merged.margin;
  rec.pass = merged.counts.failed == 0;
  if (!merged.fail_witness.is_null()) rec.witness = std::move(merged.fail_witness);
  else if (!merged.fragile_witness.is_null()) rec.witness = std::move(merged.fragile_witness);
  else rec.witness = std::move(merged.margin_witness);
  if (suite.finish) suite.finish(merged.observed, rec);
  if (!rec.pass && rec.witness.is_null()) rec.witness = Json{{"note", "check failed without a sample witness"}};
  return rec;
}

// Deterministic in the config: identical configs give identical report bytes,
// whatever the thread count.
inline VerificationReport run_campaign(const CampaignConfig& config) {
  validate(config);
  VerificationReport rep;
  rep.config = campaign_config_to_json(config);
  for (const auto& suite : detail::build_suites(config)) rep.records.push_back(run_suite(suite, config));
  return rep;
}

}  // namespace orbitscope
