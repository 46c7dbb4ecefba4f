// orbitscope: command-line front end. Reads point or config JSON from a file
// or standard input and writes JSON to standard output or --out.
//
// exit codes: 0 success, 1 input error, 2 classification ambiguity,
// 3 a campaign or table check failed.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "orbitscope/orbitscope.hpp"

using namespace orbitscope;

namespace {

enum Exit { ok = 0, input_error = 1, ambiguous = 2, check_failed = 3 };

struct Globals {
  double tol_rel = 1e-9;
  double tol_abs = 1e-12;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string field = "float";
  std::string out;
  bool seed_given = false, threads_given = false, tol_given = false;

  TolerancePolicy tolerance() const {
    TolerancePolicy t;
    t.relative = tol_rel;
    t.absolute = tol_abs;
    try {
      t.validate();
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
    return t;
  }
  bool exact() const { return field == "rational"; }
};

Json read_json(const std::string& path) {
  std::stringstream ss;
  if (path.empty() || path == "-") {
    ss << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    ss << in.rdbuf();
  }
  try {
    return Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

void write_json(const Globals& g, const Json& j) {
  if (g.out.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream f(g.out);
  if (!f) throw InputError("cannot write " + g.out);
  f << j.dump(2) << "\n";
}

bool is_isotropic(const Json& j) { return j.is_object() && j.contains("structure"); }

void require_float(const Globals& g, const char* what) {
  if (g.exact()) throw InputError(std::string(what) + " works over floats only; drop --field rational");
}

// ---- commands ----------------------------------------------------------------

template <class T>
Json classify_json(const Json& in, const TolerancePolicy& tol) {
  if (is_isotropic(in)) return isotropic_label_to_json(classify_isotropic(isotropic_from_json<T>(in, tol), tol));
  return label_to_json(classify(subspace_from_json<T>(in, tol), tol));
}

template <class T>
Json iso_classify_json(const Json& in, const TolerancePolicy& tol) {
  auto v = isotropic_from_json<T>(in, tol);
  auto c = classify_isotropic_full(v, tol);
  Json out = isotropic_label_to_json(c.label);
  out["hodge"] = hodge_to_json(c.hodge);
  out["parity_agrees"] = c.parity_agrees;
  if constexpr (std::is_same_v<T, double>) {
    auto ab = adapted_basis(v, tol);
    out["adapted_basis"] = Json{{"k", ab.k}, {"r", ab.r}, {"s", ab.s}, {"gram_residual", ab.residual},
                                {"basis", matrix_to_json(ab.z)}};
  }
  return out;
}

template <class T>
Json sigma_json(const Json& in, const TolerancePolicy& tol) {
  Matrix<T> m;
  double scale = 0;
  Json label;
  if (is_isotropic(in)) {
    auto v = isotropic_from_json<T>(in, tol);
    m = restrict_real_form(v);
    scale = restriction_scale(v);
    label = isotropic_label_to_json(classify_isotropic(v, tol));
  } else {
    auto v = subspace_from_json<T>(in, tol);
    m = restrict_form(v);
    scale = restriction_scale(v);
    label = label_to_json(classify(v, tol));
  }
  Json verdicts = Json::array();
  for (int k = 1; k <= m.rows(); ++k) verdicts.push_back(verdict_to_json(zero_locus_verdict(m, k, tol, scale)));
  return Json{{"label", label}, {"verdicts", verdicts}};
}

Json slice_json(const Json& in, const Globals& g, int points) {
  const auto tol = g.tolerance();
  SliceChartOptions opt;
  opt.seed = g.seed_given ? g.seed : opt.seed;
  auto chart = is_isotropic(in) ? build_slice_chart(isotropic_from_json<double>(in, tol), opt, tol)
                                : build_slice_chart(subspace_from_json<double>(in, tol), opt, tol);
  Philox4x32 rng(opt.seed, 1);
  Json out = slice_chart_to_json(chart);
  auto trip = chart_round_trip(chart, points, chart.radius(), rng);
  out["round_trip"] = Json{{"points", trip.points}, {"failures", trip.failures}, {"max_residual", trip.max_residual}};
  out["concordance"] = concordance_to_json(chart_concordance(chart, points, chart.radius(), rng));
  return out;
}

Json density_json(const Json& in, const Globals& g, int points, double scale) {
  const auto tol = g.tolerance();
  Philox4x32 rng(g.seed, 2);
  auto r = is_isotropic(in) ? density_probe(isotropic_from_json<double>(in, tol), points, rng, scale, tol)
                            : density_probe(subspace_from_json<double>(in, tol), points, rng, scale, tol);
  return density_to_json(r);
}

template <class T>
Json codim_rows(const Scenario& sc, const TolerancePolicy& tol, bool& all_match) {
  Json rows = Json::array();
  auto add = [&](const std::string& label, int expected, const StabilizerSubalgebraReport& rep) {
    bool match = rep.orbit_codim == expected;
    all_match = all_match && match;
    rows.push_back(Json{{"label", label},
                        {"expected_codim", expected},
                        {"lie_codim", rep.orbit_codim},
                        {"orbit_dim", rep.orbit_dim},
                        {"dim_h_cap_p", rep.dim_h_cap_p},
                        {"match", match}});
  };
  if (sc.kind == ScenarioKind::grassmann) {
    auto amb = QuadraticSpace<T>::standard(sc.p, sc.q);
    auto h = build_so_pq<T>(sc.p, sc.q);
    for (const auto& l : enumerate_labels(sc.p, sc.q, sc.i))
      add(to_string(l), l.nu * (l.nu + 1) / 2, tangent_map_rank(h, standard_representative(l, amb, tol), tol));
  } else if (sc.kind == ScenarioKind::isotropic) {
    auto st = ComplexStructure<T>::standard(sc.n);
    auto h = build_so_complex<T>(sc.n);
    for (const auto& l : enumerate_isotropic_labels(sc.n, sc.duality))
      add(to_string(l), l.k * l.k, tangent_map_rank(h, isotropic_standard_representative(l, st, tol), tol));
  } else {
    throw InputError("codim-table needs a grassmann or isotropic scenario");
  }
  return rows;
}

Json codim_table_json(const std::string& arg, const Globals& g, bool& all_match) {
  Scenario sc;
  if (arg.find('(') != std::string::npos) {
    sc = parse_scenario(Json(arg));
  } else {
    Json j = read_json(arg);
    sc = parse_scenario(j.contains("scenario") ? j.at("scenario") : j);
  }
  CampaignConfig check;
  check.scenario = sc;
  check.sample_count = 1;
  validate(check);
  const auto tol = g.tolerance();
  all_match = true;
  Json rows = g.exact() ? codim_rows<Rational>(sc, tol, all_match) : codim_rows<double>(sc, tol, all_match);
  return Json{{"scenario", to_string(sc)}, {"field", g.field}, {"rows", rows}, {"all_match", all_match}};
}

Json campaign_json(const Json& in, const Globals& g, bool& passed) {
  Json cfg = in;
  if (g.seed_given) cfg["seed"] = g.seed;
  if (g.threads_given) cfg["threads"] = g.threads;
  if (g.tol_given) cfg["tolerance"] = Json{{"relative", g.tol_rel}, {"absolute", g.tol_abs}};
  auto report = run_campaign(campaign_config_from_json(cfg));
  passed = report.passed();
  return report_to_json(report);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"orbitscope: orbit stratification of Grassmannians and isotropic Grassmannians"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--tol-rel", g.tol_rel, "relative tolerance")->each([&](const std::string&) { g.tol_given = true; });
  app.add_option("--tol-abs", g.tol_abs, "absolute tolerance")->each([&](const std::string&) { g.tol_given = true; });
  app.add_option("--seed", g.seed, "random seed")->each([&](const std::string&) { g.seed_given = true; });
  app.add_option("--threads", g.threads, "worker threads for campaigns")
      ->check(CLI::Range(1, 256))
      ->each([&](const std::string&) { g.threads_given = true; });
  app.add_option("--field", g.field, "scalar field")->check(CLI::IsMember({"float", "rational"}));
  app.add_option("--out", g.out, "write the JSON result to this file");

  std::string input;
  int points = 100;
  double group_scale = 1.0;
  auto* classify_cmd = app.add_subcommand("classify", "orbit label of a subspace or maximal isotropic point");
  auto* iso_cmd = app.add_subcommand("iso-classify", "label, Hodge verdict and adapted basis of a maximal isotropic");
  auto* sigma_cmd = app.add_subcommand("sigma", "zero-locus verdicts of sigma_1 .. sigma_i");
  auto* slice_cmd = app.add_subcommand("slice", "slice chart summary at a point");
  auto* density_cmd = app.add_subcommand("density-probe", "top sigma and its gradient along the orbit of a point");
  auto* campaign_cmd = app.add_subcommand("campaign", "seeded verification campaign from a config");
  auto* codim_cmd = app.add_subcommand("codim-table", "orbit codimensions for every label of a scenario");
  for (auto* cmd : {classify_cmd, iso_cmd, sigma_cmd, slice_cmd, density_cmd, campaign_cmd})
    cmd->add_option("input", input, "JSON file (default: standard input)");
  codim_cmd->add_option("scenario", input, "scenario such as grassmann(2,2,2) or isotropic(3,self-dual), or a JSON file")
      ->required();
  slice_cmd->add_option("--points", points, "round-trip and concordance points")->check(CLI::Range(1, 1000000));
  density_cmd->add_option("--points", points, "orbit points to probe")->check(CLI::Range(1, 1000000));
  density_cmd->add_option("--group-scale", group_scale, "size of the random group elements")
      ->check(CLI::NonNegativeNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    const auto tol = g.tolerance();
    int code = ok;
    Json result;
    if (classify_cmd->parsed()) {
      Json in = read_json(input);
      result = g.exact() ? classify_json<Rational>(in, tol) : classify_json<double>(in, tol);
    } else if (iso_cmd->parsed()) {
      Json in = read_json(input);
      result = g.exact() ? iso_classify_json<Rational>(in, tol) : iso_classify_json<double>(in, tol);
    } else if (sigma_cmd->parsed()) {
      Json in = read_json(input);
      result = g.exact() ? sigma_json<Rational>(in, tol) : sigma_json<double>(in, tol);
    } else if (slice_cmd->parsed()) {
      require_float(g, "slice");
      result = slice_json(read_json(input), g, points);
    } else if (density_cmd->parsed()) {
      require_float(g, "density-probe");
      result = density_json(read_json(input), g, points, group_scale);
    } else if (campaign_cmd->parsed()) {
      bool passed = true;
      result = campaign_json(read_json(input), g, passed);
      if (!passed) code = check_failed;
    } else if (codim_cmd->parsed()) {
      bool all_match = true;
      result = codim_table_json(input, g, all_match);
      if (!all_match) code = check_failed;
    }
    write_json(g, result);
    return code;
  } catch (const AmbiguityError& e) {
    std::cerr << "orbitscope: " << e.what() << "\n";
    try {
      write_json(g, Json{{"error", "ambiguous"},
                         {"message", e.what()},
                         {"as_zero", inertia_to_json(e.as_zero())},
                         {"as_nonzero", inertia_to_json(e.as_nonzero())},
                         {"margin", number_or_null(e.margin())}});
    } catch (const std::exception&) {
    }
    return ambiguous;
  } catch (const InputError& e) {
    std::cerr << "orbitscope: input error: " << e.what() << "\n";
    return input_error;
  } catch (const Json::exception& e) {
    std::cerr << "orbitscope: input error: " << e.what() << "\n";
    return input_error;
  } catch (const std::exception& e) {
    std::cerr << "orbitscope: " << e.what() << "\n";
    return input_error;
  }
}
