#include <gtest/gtest.h>

#include "skein/skein_expr.hpp"

using namespace skein;

namespace {
ArrowedMulticurve M(const char* s, int g = 3) { return parse_multicurve(s, g); }
}  // namespace

TEST(Multicurve, ParseAndPrint) {
  auto m = M("alpha:1:arrows=3;trivial:arrows=-1:side=l");
  ASSERT_EQ(m.components().size(), 2u);
  EXPECT_EQ(parse_multicurve(m.str(), 3), m);
  EXPECT_EQ(M("trivial"), M("trivial:arrows=0"));
  // stacking order is not stored
  EXPECT_EQ(M("alpha:1;beta:2"), M("beta:2;alpha:1"));
  auto d = M("D:k=3:a=1:b=-2");
  ASSERT_TRUE(d.sausage_data());
  EXPECT_EQ(parse_multicurve(d.str(), 3), d);
}

TEST(Multicurve, ParseErrorsNameTheField) {
  try {
    M("alpha:1:arrows=x");
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("arrows"), std::string::npos);
  }
  EXPECT_THROW(M("alpha:1:colour=2"), InputError);
  EXPECT_THROW(M("trivial:side=q"), InputError);
  EXPECT_THROW(M("alpha:1:side=l"), InputError);
  EXPECT_THROW(M("D:k=9"), InputError);
  EXPECT_THROW(M("alpha:1;;beta:1"), InputError);
  EXPECT_THROW(M("D:k=1;alpha:1"), InputError);
}

TEST(Multicurve, ExpressionWithCoefficients) {
  auto v = parse_expression("[A^2 - A^-2] * alpha:1 + beta:1:arrows=1 + [(1)/(A^2 - A^-2)] alpha:1", 2);
  ASSERT_EQ(v.size(), 2u);
  auto a = parse_multicurve("alpha:1", 2);
  EXPECT_EQ(v.terms().at(a), RationalFn(brace(2)) + RationalFn(LaurentPoly(1), brace(2)));
}

TEST(Measures, DegreeAndComplexity) {
  const int g = 3;
  EXPECT_EQ(degree(M("alpha:1;sausage:2"), g), 3);
  EXPECT_EQ(degree(M("trivial:arrows=7"), g), 0);
  EXPECT_EQ(complexity(M("sausage:1;sausage_e:1"), g), std::make_pair(2, 2));
  EXPECT_EQ(complexity(M("sausage:4"), g), std::make_pair(2, 1));
  EXPECT_EQ(complexity(ArrowedMulticurve(), g), std::make_pair(0, 0));
  // boundary positions are trivial
  EXPECT_EQ(degree(M("sausage:0;sausage:6"), g), 0);
  // D-family symbols
  SausageData d;
  d.k = 2;
  d.m = 1;
  EXPECT_EQ(degree(ArrowedMulticurve::sausage(g, d), g), 4);
  d.k = 3;
  d.m = 0;
  EXPECT_EQ(degree(ArrowedMulticurve::sausage(g, d), g), 2);
}

TEST(Measures, TrivialComponentsDoNotCount) {
  const int g = 3;
  for (const char* s : {"alpha:1", "sausage:2", "sausage:3;sausage_e:2", "gamma:1"}) {
    auto base = M(s);
    auto more = ArrowedMulticurve([&] {
      auto cs = base.components();
      cs.push_back({CurveCatalogEntry::trivial(g), 5, 0});
      cs.push_back({CurveCatalogEntry::trivial(g), 0, 0});
      return cs;
    }());
    EXPECT_EQ(degree(base, g), degree(more, g));
    EXPECT_EQ(complexity(base, g), complexity(more, g));
  }
}

TEST(Grading, Examples) {
  const int g = 2;
  auto gr = grading(M("fword:1100:arrows=3", g), g);
  EXPECT_EQ(gr.h.str(), "1100");
  EXPECT_EQ(gr.arrows, 1);
  gr = grading(M("trivial:arrows=2", g), g);
  EXPECT_TRUE(gr.h.is_zero());
  EXPECT_EQ(gr.arrows, 0);
  gr = grading(M("sausage:1:arrows=1;sausage_e:1", g), g);
  EXPECT_TRUE(gr.h.is_zero());
  EXPECT_EQ(gr.arrows, 1);
  EXPECT_EQ(grading(BasisElement::nonsep(Homology2Class::parse("0110"), 1), g), (Grading{Homology2Class::parse("0110"), 1}));
}

TEST(DualGraph, Shapes) {
  const int g = 3;
  auto one = dual_graph(M("alpha:2"), g);
  ASSERT_EQ(one.vertices.size(), 1u);
  EXPECT_EQ(one.vertices[0].genus, 3);
  auto two = dual_graph(M("sausage:2"), 2);
  ASSERT_EQ(two.vertices.size(), 2u);
  EXPECT_EQ(two.vertices[0].genus, 1);
  EXPECT_EQ(two.vertices[1].genus, 1);
  auto path = dual_graph(M("sausage:2;sausage:4;sausage_e:2"), g);
  ASSERT_EQ(path.vertices.size(), 3u);
  EXPECT_TRUE(path.linear());
  EXPECT_EQ(path.vertices[1].nonsep, 1);
  EXPECT_EQ(path.valency(1), 2);
  EXPECT_THROW(dual_graph(M("gamma:1;sausage:2"), g), InputError);
}

TEST(DualGraph, TreeWithOneEdgePerSeparatingClass) {
  const int g = 4;
  for (const char* s : {"sausage:2", "sausage:2;sausage:6", "sausage:2;sausage:4;sausage:6", "alpha:1"}) {
    auto gr = dual_graph(M(s, g), g);
    EXPECT_EQ(gr.edges.size() + 1, gr.vertices.size());
    int genus = 0;
    for (const auto& v : gr.vertices) genus += v.genus;
    EXPECT_EQ(genus, g);
  }
  // parallel copies share one edge
  SausageData d;
  d.k = 4;
  d.m = 2;
  auto gr = dual_graph(ArrowedMulticurve::sausage(g, d), g);
  EXPECT_EQ(gr.edges.size(), 1u);
  EXPECT_EQ(gr.edge_multiplicity[0], 3);
}

TEST(Instability, Hints) {
  const int g = 3;
  EXPECT_EQ(detect_instability(M("alpha:1;beta:2"), g), RuleHint::two_holed_torus);
  EXPECT_EQ(detect_instability(M("sausage:2;sausage:4;alpha:2"), g), RuleHint::valency2);
  EXPECT_EQ(detect_instability(M("fword:110000:arrows=1"), g), std::nullopt);
  EXPECT_EQ(detect_instability(M("trivial:arrows=3"), g), std::nullopt);
  EXPECT_EQ(detect_instability(M("sausage:2;alpha:3"), g), std::nullopt);
}

TEST(SkeinVector, ZeroCoefficientsDropped) {
  SkeinVector v;
  auto m = M("alpha:1");
  v.add(m, RationalFn(brace(1)));
  v.add(m, -RationalFn(brace(1)));
  EXPECT_TRUE(v.is_zero());
  v.add(m, RationalFn());
  EXPECT_TRUE(v.is_zero());
}
