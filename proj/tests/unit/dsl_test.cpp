#include <gtest/gtest.h>

#include <filesystem>

#include "fixtures.hpp"

using namespace limsk;

namespace {

/// line:column prefix of the error raised by parsing `text`.
std::string error_of(const std::string& text) {
  try {
    parse_sketch(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(ParseSketch, Product) {
  auto doc = fixtures::load("prod.sk");
  const auto& s = doc.sketch;
  EXPECT_EQ(s.base()->object_count(), 3u);
  EXPECT_EQ(s.base()->edge_count(), 2u);
  EXPECT_EQ(doc.objects.at("p"), 2u);
  EXPECT_EQ(doc.edges.at("pi2"), 1u);
  ASSERT_EQ(doc.cones.size(), 1u);
  const auto& c = s.cone(doc.cones.at("prod"));
  EXPECT_EQ(c.apex, 2u);
  EXPECT_EQ(c.diagram_objects, (std::vector<ObjectId>{0, 1}));
  EXPECT_EQ(c.index->morphism_count(), 2u);
  EXPECT_FALSE(c.implicit);
  EXPECT_EQ(s.cone_count(), 4u);
}

TEST(ParseSketch, RelationsAndIndexArrows) {
  auto doc = parse_sketch(R"(
object x; object y; object z;
edge f: x -> y; edge g: y -> z; edge h: x -> z;
relation g.f = h;
edge k: y -> y;
relation k.k = id(y);
cone c at x over {
  i: y;
  j: z;
  u: i -> j = g;
} legs { i: f, j: h };
)");
  const auto& p = *doc.sketch.base();
  EXPECT_EQ(p.relations().size(), 2u);
  const auto& c = doc.sketch.cone(doc.cones.at("c"));
  EXPECT_EQ(c.index->morphism_count(), 3u);
  EXPECT_EQ(c.diagram_arrows, std::vector<Path>{fixtures::path(p, "g")});
}

TEST(ParseSketch, QuotedNames) {
  auto doc = parse_sketch("object \"a b\";\nedge \"f:1\": \"a b\" -> \"a b\";\n");
  EXPECT_EQ(doc.sketch.base()->object_name(0), "a b");
  EXPECT_EQ(doc.edges.at("f:1"), 0u);
}

TEST(ParseSketch, Errors) {
  EXPECT_EQ(error_of("object t;\nedge e: a -> t;\n"), "2:9: unknown object a");
  EXPECT_EQ(error_of("object t;\nobject t;\n"), "2:8: duplicate object t");
  EXPECT_EQ(error_of("object t;\nedge e: t -> t;\nrelation e = f;\n"), "3:14: unknown edge f");
  EXPECT_EQ(error_of("object t\n"), "2:1: expected ';', found end of input");
  EXPECT_EQ(error_of("object t;\n$"), "2:1: unexpected character '$'");
  EXPECT_NE(error_of("object a; object b; edge f: a -> b;\nrelation f = id(a);\n")
                .find("relation sides are not parallel"),
            std::string::npos);
  EXPECT_NE(error_of("object t;\ncone \"<t>\" at t over {};\n").find("reserved"), std::string::npos);
  EXPECT_NE(error_of("object a; object p;\ncone c at p over { i: a; } legs {};\n")
                .find("has no leg for index object i"),
            std::string::npos);
}

TEST(ParseSketch, NaturalityErrorHasPosition) {
  auto text = R"(object p; object a; object b;
edge l: p -> a; edge m: p -> b; edge k: a -> b;
cone c at p over { i: a; j: b; u: i -> j = k; } legs { i: l, j: m };
)";
  auto err = error_of(text);
  EXPECT_EQ(err.rfind("3:", 0), 0u) << err;
  EXPECT_NE(err.find("naturality fails at index morphism u"), std::string::npos) << err;
}

TEST(PrintSketch, RoundTripsFixtures) {
  for (const auto& entry : std::filesystem::directory_iterator(LIMSK_SKETCH_DIR)) {
    if (entry.path().extension() != ".sk") continue;
    auto doc = fixtures::load(entry.path().filename().string());
    auto printed = print_sketch(doc.sketch);
    auto again = parse_sketch(printed);
    EXPECT_EQ(print_sketch(again.sketch), printed) << entry.path();
    EXPECT_EQ(*again.sketch.base(), *doc.sketch.base()) << entry.path();
    EXPECT_EQ(again.sketch.cone_count(), doc.sketch.cone_count()) << entry.path();
  }
}

TEST(PrintSketch, RoundTripsRealization) {
  for (const auto& name : {"term2.sk", "sq.sk"}) {
    auto r = realize(fixtures::load(name).sketch);
    auto printed = print_sketch(r.realized);
    auto again = parse_sketch(printed);
    EXPECT_EQ(print_sketch(again.sketch), printed) << name;
    EXPECT_EQ(is_realized(again.sketch, Bounds{}), true) << name;
  }
}
