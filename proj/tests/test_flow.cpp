#include <gtest/gtest.h>

#include <map>

#include "torickems/flow_mis.hpp"

using namespace torickems;

namespace {

const FlowReport& dp2_report() {
  static const FlowReport rep = flow_mis_report(find_fixture("dp2"));
  return rep;
}

const FacetFlow& facet(const FlowReport& rep, const std::string& id) {
  for (const auto& f : rep.facets)
    if (f.face_id == id) return f;
  throw std::runtime_error("no facet " + id);
}

}  // namespace

TEST(Flow, Dp2Classification) {
  const auto& rep = dp2_report();
  for (const char* id : {"F(0,1)", "F(1,0)", "F(1,1)"})
    for (const auto& c : facet(rep, id).classes) EXPECT_EQ(c.kind, Growth::Divergent) << id;
  for (const char* id : {"F(0,-1)", "F(-1,0)"})
    for (const auto& c : facet(rep, id).classes) EXPECT_EQ(c.kind, Growth::Bounded) << id;
}

TEST(Flow, Dp2AxisSlope) {
  const auto& rep = dp2_report();
  const auto& f = facet(rep, "F(0,1)");
  for (std::size_t a = 0; a < rep.alphas.size(); ++a) {
    const double expected = (2 * rep.alphas[a] - 1) * rep.beta;
    EXPECT_NEAR(f.classes[a].slope, expected, 0.1 * expected) << rep.alphas[a];
  }
}

TEST(Flow, Dp2DiagonalSlopeIsMeasured) {
  // no prediction is asserted by the report; this pins the observed value
  const auto& rep = dp2_report();
  const auto& f = facet(rep, "F(1,1)");
  for (std::size_t a = 0; a < rep.alphas.size(); ++a)
    EXPECT_NEAR(f.classes[a].slope, (3 * rep.alphas[a] - 1) * rep.beta, 0.1 * rep.beta);
}

TEST(Flow, Dp2Mis) {
  const auto& rep = dp2_report();
  EXPECT_EQ(rep.mis_face_ids.size(), 3u);
  for (auto r : rep.mis) EXPECT_EQ(rep.facets[r].self_intersection, -1);
  EXPECT_TRUE(rep.completion_consistent);
  EXPECT_TRUE(rep.alpha_stable);
  EXPECT_LE(rep.sup_check, 1e-9);
  for (const auto& f : rep.facets) EXPECT_TRUE(f.bound_respected) << f.face_id;
}

TEST(Flow, Dp1Mis) {
  auto rep = flow_mis_report(find_fixture("dp1"));
  ASSERT_EQ(rep.mis_face_ids.size(), 1u);
  EXPECT_EQ(rep.mis_face_ids[0], "F(-1,-1)");
  EXPECT_NE(rep.conclusion.find("[E]"), std::string::npos);
}

TEST(Flow, AlphaJustAboveHalfAccepted) {
  FlowOptions opt;
  opt.alphas = {0.55};
  auto rep = flow_mis_report(find_fixture("dp2"), opt);
  EXPECT_EQ(rep.mis_face_ids, dp2_report().mis_face_ids);
}

TEST(Flow, AlphaOutOfRangeRejected) {
  FlowOptions opt;
  opt.alphas = {0.5};
  EXPECT_THROW(flow_mis_report(find_fixture("dp2"), opt), Error);
}

TEST(Flow, SymmetricFixtureRejected) {
  try {
    flow_mis_report(find_fixture("cp2"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidInput);
  }
}

TEST(Flow, GrowthClassifier) {
  GrowthSeries s{0.8, {10, 20, 30, 40}, {1.0, 4.0, 7.0, 10.0}};
  auto c = growth_classify(s, 1.0);
  EXPECT_EQ(c.kind, Growth::Divergent);
  EXPECT_NEAR(c.slope, 0.3, 1e-12);
  GrowthSeries flat{0.8, {10, 20, 30, 40}, {1.0, 1.001, 0.999, 1.0}};
  EXPECT_EQ(growth_classify(flat, 1.0).kind, Growth::Bounded);
}

TEST(Flow, RegionGeometry) {
  auto fp = build_polytope(find_fixture("dp2").rays);
  auto r = facet_region(fp.fan, {1, 1});
  EXPECT_NEAR(r.dir.norm(), 1.0, 1e-15);
  EXPECT_NEAR(r.dir.dot(r.perp), 0.0, 1e-15);
}

TEST(Flow, CsvHeader) {
  auto csv = flow_csv(dp2_report());
  EXPECT_EQ(csv.rfind("facet,alpha,t,log_integral\n", 0), 0u);
  EXPECT_NE(csv.find("\"F(0,1)\""), std::string::npos);
}

TEST(Flow, ThresholdsShrinkBelowReferenceAlpha) {
  GrowthThresholds th;
  EXPECT_DOUBLE_EQ(th.scale(0.8), 1.0);
  EXPECT_DOUBLE_EQ(th.scale(0.7), 1.0);
  EXPECT_NEAR(th.scale(0.55), 0.25, 1e-15);
}
