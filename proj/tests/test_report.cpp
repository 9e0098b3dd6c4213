#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "torickems/report.hpp"
#include "torickems/fixtures.hpp"

using namespace torickems;

TEST(Fixtures, CatalogHasFiveDelPezzos) {
  EXPECT_EQ(fixture_catalog().size(), 5u);
  for (const auto& f : fixture_catalog()) EXPECT_NO_THROW(build_polytope(f.rays)) << f.name;
}

TEST(Fixtures, JsonRoundTrip) {
  for (const auto& f : fixture_catalog()) {
    auto j = fixture_to_json(f);
    auto back = fixture_from_json(nlohmann::json::parse(j.dump()));
    EXPECT_EQ(back.name, f.name);
    EXPECT_EQ(back.rays, f.rays);
    EXPECT_EQ(back.admissible_candidates, f.admissible_candidates);
    EXPECT_EQ(back.labels, f.labels);
    EXPECT_EQ(fixture_to_json(back).dump(2), j.dump(2));
  }
}

TEST(Fixtures, UnknownNameAndBadJson) {
  EXPECT_THROW(find_fixture("dp9"), Error);
  EXPECT_THROW(fixture_from_json(nlohmann::json::parse(R"({"name": "x"})")), Error);
  const auto path = std::filesystem::temp_directory_path() / "torickems_bad.json";
  std::ofstream(path) << "{ not json";
  EXPECT_THROW(load_fixture_file(path.string()), Error);
}

TEST(Report, MisJsonRoundTripsByteIdentically) {
  for (auto mode : {AnalysisMode::KE, AnalysisMode::KRS}) {
    auto fp = build_polytope(find_fixture("dp1").rays);
    FaceContext ctx(fp);
    auto text = mis_report_json(analyze(find_fixture("dp1"), mode), ctx).dump(2);
    EXPECT_EQ(Json::parse(text).dump(2), text);
  }
}

TEST(Report, SummaryJsonRoundTripsByteIdentically) {
  auto s = summarize(find_fixture("dp2"));
  auto text = summary_json(s).dump(2);
  EXPECT_EQ(Json::parse(text).dump(2), text);
  // doubles survive exactly
  EXPECT_EQ(Json::parse(text)["soliton"]["xi_s"][0].get<double>(), s.soliton->xi_s[0]);
}

TEST(Report, FlowJsonRoundTripsByteIdentically) {
  FlowOptions opt;
  auto rep = flow_mis_report(find_fixture("dp1"), opt);
  auto text = flow_report_json(rep, opt).dump(2);
  EXPECT_EQ(Json::parse(text).dump(2), text);
}

TEST(Report, MisJsonShape) {
  auto fp = build_polytope(find_fixture("dp1").rays);
  FaceContext ctx(fp);
  auto j = mis_report_json(analyze(find_fixture("dp1"), AnalysisMode::KE), ctx);
  EXPECT_EQ(j["fixture"], "dp1");
  EXPECT_EQ(j["mode"], "KE");
  ASSERT_EQ(j["candidates"].size(), 2u);
  for (const auto& c : j["candidates"]) {
    EXPECT_TRUE(c.contains("faces"));
    EXPECT_TRUE(c["status"] == "excluded" || c["status"] == "survives");
    EXPECT_TRUE(c.contains("certificate"));
  }
  EXPECT_EQ(j["conclusion"], "KE-MIS = E");
}
