#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "orbitscope/harness/campaign.hpp"

using namespace orbitscope;

namespace {

CampaignConfig config(const std::string& scenario, std::int64_t samples, std::uint64_t seed = 11) {
  return campaign_config_from_json(Json{{"scenario", scenario}, {"sample_count", samples}, {"seed", seed}});
}

std::string citations_doc() {
  std::ifstream in(std::string(ORBITSCOPE_SOURCE_DIR) + "/docs/CITATIONS.md");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(CampaignConfig, ZeroSamplesIsAConfigError) {
  EXPECT_THROW(config("grassmann(2,2,2)", 0), InputError);
  EXPECT_THROW(config("grassmann(2,2,2)", -5), InputError);
}

TEST(CampaignConfig, RejectsUnsupportedScenarios) {
  EXPECT_THROW(config("torus(3)", 10), InputError);
  EXPECT_THROW(config("grassmann(7,6,2)", 10), InputError);
  EXPECT_THROW(config("grassmann(2,2,4)", 10), InputError);
  EXPECT_THROW(config("isotropic(9)", 10), InputError);
  EXPECT_THROW(config("isotropic(3,sideways)", 10), InputError);
  EXPECT_THROW(config("flags(2,2,2,2)", 10), InputError);
  EXPECT_THROW(config("stabilizer(sp(4))", 10), InputError);
  EXPECT_THROW(config("stabilizer(so(1,C))", 10), InputError);
  EXPECT_THROW(campaign_config_from_json(Json{{"scenario", "grassmann(2,2,2)"}, {"sample_count", 3}, {"chekcs", 1}}),
               InputError);
  EXPECT_THROW(campaign_config_from_json(
                   Json{{"scenario", "flags(2,2,1,2)"}, {"sample_count", 3}, {"checks", {"slice"}}}),
               InputError);
  EXPECT_THROW(campaign_config_from_json(
                   Json{{"scenario", "grassmann(2,2,2)"}, {"sample_count", 3}, {"tolerance", {{"relative", -1.0}}}}),
               InputError);
}

TEST(CampaignConfig, StringAndObjectFormsAgree) {
  auto a = config("isotropic(3, anti-self-dual)", 4);
  auto b = campaign_config_from_json(
      Json{{"scenario", {{"kind", "isotropic"}, {"n", 3}, {"duality", "anti-self-dual"}}}, {"sample_count", 4}, {"seed", 11}});
  EXPECT_EQ(campaign_config_to_json(a).dump(), campaign_config_to_json(b).dump());
  EXPECT_EQ(to_string(a.scenario), "isotropic(3,anti-self-dual)");
  EXPECT_EQ(to_string(parse_scenario(scenario_to_json(config("flags(3,2,1,3)", 1).scenario))), "flags(3,2,1,3)");
}

TEST(Campaign, Grassmann222AllSuitesHaveNoFailures) {
  auto rep = run_campaign(config("grassmann(2,2,2)", 10000, 2024));
  ASSERT_EQ(rep.records.size(), available_checks(ScenarioKind::grassmann).size());
  for (const auto& r : rep.records) {
    SCOPED_TRACE(r.check);
    EXPECT_TRUE(r.pass) << record_to_json(r).dump();
    EXPECT_EQ(r.counts.failed, 0);
    EXPECT_EQ(r.counts.total, 10000);
    EXPECT_EQ(r.counts.passed + r.counts.failed + r.counts.fragile, r.counts.total);
  }
  EXPECT_TRUE(rep.passed());
}

TEST(Campaign, SameSeedGivesIdenticalBytes) {
  auto c = config("grassmann(3,1,2)", 300, 5);
  auto a = report_to_json(run_campaign(c)).dump(2);
  auto b = report_to_json(run_campaign(c)).dump(2);
  EXPECT_EQ(a, b);
  c.threads = 3;
  EXPECT_EQ(report_to_json(run_campaign(c)).dump(2), a);
  auto d = config("grassmann(3,1,2)", 300, 6);
  EXPECT_NE(report_to_json(run_campaign(d)).dump(2), a);
}

TEST(Campaign, ThreadCountDoesNotChangeIsotropicReport) {
  auto c = config("isotropic(3,self-dual)", 120, 9);
  auto a = report_to_json(run_campaign(c)).dump();
  c.threads = 4;
  EXPECT_EQ(report_to_json(run_campaign(c)).dump(), a);
}

TEST(Campaign, RefsAreRegisteredAndDocumented) {
  const std::string doc = citations_doc();
  ASSERT_FALSE(doc.empty());
  for (const auto& entry : citation_registry())
    EXPECT_NE(doc.find("`" + std::string(entry.key) + "`"), std::string::npos) << entry.key;
  for (const char* scenario : {"grassmann(2,1,1)", "isotropic(2)", "flags(2,1,1,2)", "stabilizer(so(2,1))"}) {
    auto rep = run_campaign(config(scenario, 20));
    for (const auto& r : rep.records) {
      EXPECT_FALSE(r.ref.empty());
      EXPECT_TRUE(is_registered_citation(r.ref)) << r.ref;
    }
  }
}

TEST(Campaign, OtherScenariosPass) {
  for (const char* scenario : {"isotropic(3,anti-self-dual)", "isotropic(4,self-dual)", "flags(2,2,1,2)",
                               "flags(3,2,2,3)", "stabilizer(so(3,1))", "stabilizer(so(2,C))", "stabilizer(so(3,C))"}) {
    SCOPED_TRACE(scenario);
    auto rep = run_campaign(config(scenario, 400));
    for (const auto& r : rep.records) EXPECT_TRUE(r.pass) << record_to_json(r).dump();
  }
}

TEST(Campaign, CensusFindsEveryLabel) {
  auto c = config("grassmann(2,2,2)", 2000);
  c.checks = {"census"};
  auto rep = run_campaign(c);
  const auto& d = rep.records.at(0).details;
  EXPECT_EQ(d.at("enumerated").size(), 6u);
  EXPECT_TRUE(d.at("missing").empty());
  EXPECT_TRUE(d.at("unexpected").empty());
  // uniform samples only reach the open orbits
  EXPECT_EQ(d.at("observed_in_samples"), Json::array({"(0,2,0)", "(1,1,0)", "(2,0,0)"}));
}

TEST(Campaign, ClosureCoversFullRankTransversals) {
  auto c = config("isotropic(4,self-dual)", 3000);
  c.checks = {"closure"};
  auto r = run_campaign(c).records.at(0);
  EXPECT_TRUE(r.pass);
  EXPECT_TRUE(r.details.at("missing_patterns").empty());
  // (0,0)+ has k = 2: transversal Hermitian 2x2 reaches (4,0), (2,2), (0,4)
  EXPECT_GE(r.details.at("expected_patterns").get<int>(), 3);
}

TEST(RunSuite, FailureCarriesWitness) {
  CheckSuite suite{"synthetic", "equivariance",
                   [](std::int64_t j, Philox4x32&) {
                     SampleOutcome o;
                     o.margin = 2.0 + j;
                     o.witness = Json{{"j", j}};
                     if (j == 3 || j == 7) o.fail("odd one out");
                     return o;
                   },
                   {}};
  auto c = config("grassmann(2,2,2)", 10);
  c.threads = 3;
  auto r = run_suite(suite, c);
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.counts.failed, 2);
  EXPECT_EQ(r.counts.passed, 8);
  EXPECT_EQ(r.witness.at("sample"), 3);
  EXPECT_EQ(r.witness.at("point").at("j"), 3);
  EXPECT_DOUBLE_EQ(r.margin, 2.0);
}

TEST(RunSuite, AmbiguityIsFragileNotFatal) {
  CheckSuite suite{"synthetic", "equivariance",
                   [](std::int64_t j, Philox4x32&) {
                     return detail::guarded([&](SampleOutcome& o) {
                       o.witness = Json{{"j", j}};
                       if (j % 5 == 0) throw AmbiguityError("in band", {}, {}, 0.3);
                     });
                   },
                   {}};
  auto r = run_suite(suite, config("grassmann(2,2,2)", 20));
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.counts.fragile, 4);
  EXPECT_EQ(r.counts.passed, 16);
  EXPECT_EQ(r.witness.at("sample"), 0);
}

TEST(RunSuite, EscapingExceptionsCountAsFailures) {
  CheckSuite suite{"synthetic", "equivariance",
                   [](std::int64_t j, Philox4x32&) -> SampleOutcome {
                     if (j == 1) throw ConsistencyError("broken");
                     return {};
                   },
                   {}};
  auto r = run_suite(suite, config("grassmann(2,2,2)", 3));
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.counts.failed, 1);
  EXPECT_FALSE(r.witness.is_null());
}
