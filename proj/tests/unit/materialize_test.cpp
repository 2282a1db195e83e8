#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "fixtures.hpp"

using namespace limsk;
using fixtures::path;

TEST(Materialize, CommutingSquareHasNineMorphisms) {
  auto p = fixtures::commuting_square();
  auto c = materialize_or_throw(p, Bounds{});
  EXPECT_EQ(c.object_count(), 4u);
  EXPECT_EQ(c.morphism_count(), 9u);
  EXPECT_EQ(c.evaluate(path(*p, "g.f")), c.evaluate(path(*p, "k.h")));
  EXPECT_EQ(c.hom(0, 3).size(), 1u);
}

TEST(Materialize, EmptyPresentationIsTerminal) {
  auto c = materialize_or_throw(fixtures::presentation({"x"}, {}), Bounds{});
  EXPECT_EQ(c.object_count(), 1u);
  EXPECT_EQ(c.morphism_count(), 1u);
  EXPECT_TRUE(c.is_identity(0));
}

TEST(Materialize, FreeLoopDiverges) {
  auto r = materialize(fixtures::loop(), Bounds{3, 512});
  ASSERT_TRUE(std::holds_alternative<Diverged>(r));
  EXPECT_EQ(std::get<Diverged>(r).witness, Path(0, {0, 0, 0, 0}));
}

TEST(Materialize, MorphismBudget) {
  auto p = fixtures::presentation({"x"}, {{"s", "x", "x"}}, {{"s.s.s.s.s", "id(x)"}});
  EXPECT_TRUE(as_category(materialize(p, Bounds{8, 5})));
  EXPECT_FALSE(as_category(materialize(p, Bounds{8, 4})));
}

TEST(Materialize, RejectsZeroBounds) {
  EXPECT_THROW(materialize(fixtures::loop(), Bounds{0, 1}), PreconditionError);
}

TEST(Materialize, MorphismsInCanonicalOrder) {
  for (const auto& nc : fixtures::pool(12)) {
    const auto& c = *nc.category;
    for (MorphismId m = 1; m < c.morphism_count(); ++m) {
      EXPECT_LT(c.morphism(m - 1).rep, c.morphism(m).rep) << nc.name;
    }
    for (MorphismId m = 0; m < c.morphism_count(); ++m) {
      EXPECT_EQ(c.evaluate(c.morphism(m).rep), m) << nc.name;
    }
  }
}

TEST(Materialize, LawsHoldOnPool) {
  for (const auto& nc : fixtures::pool(64)) {
    EXPECT_TRUE(nc.category->laws_hold()) << nc.name;
  }
}

TEST(Materialize, LawsDetectBrokenTable) {
  auto c = materialize_or_throw(fixtures::presentation({"x"}, {{"e", "x", "x"}}, {{"e.e", "e"}}),
                                Bounds{});
  ASSERT_EQ(c.morphism_count(), 2u);
  // e.e = id instead of e: still a monoid (Z/2), so laws hold
  MaterializedCategory z2(c.object_names(), c.morphisms(), {0}, {0, 1, 1, 0}, {1}, c.presentation());
  EXPECT_TRUE(z2.laws_hold());
  // id.e = id breaks unitality
  MaterializedCategory bad(c.object_names(), c.morphisms(), {0}, {0, 0, 1, 1}, {1}, c.presentation());
  EXPECT_FALSE(bad.laws_hold());
}

TEST(Materialize, RelabelingPreservesLaws) {
  std::mt19937 rng(7);
  for (const auto& nc : fixtures::pool(10)) {
    std::vector<MorphismId> perm(nc.category->morphism_count());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    auto r = nc.category->relabeled(perm);
    EXPECT_TRUE(r.laws_hold()) << nc.name;
    EXPECT_EQ(r.morphism_count(), nc.category->morphism_count());
  }
}

TEST(PartialCategory, IdentificationsAreDerivable) {
  // Free loop: distinct nodes up to the cap, composites beyond it missing.
  auto p = fixtures::loop();
  PartialCategory pc(p, Bounds{3, 64});
  auto homs = pc.hom(0, 0);
  ASSERT_GE(homs.size(), 4u);
  EXPECT_EQ(pc.rep(homs[0]), Path(0));
  EXPECT_EQ(pc.rep(homs[2]), Path(0, {0, 0}));
  auto id = pc.identity(0);
  EXPECT_EQ(pc.then(id, Path(0, {0, 0})), homs[2]);
}

TEST(PartialCategory, CollapsesIdempotent) {
  auto p = fixtures::presentation({"x"}, {{"e", "x", "x"}, {"d", "x", "x"}}, {{"e.e", "e"}});
  PartialCategory pc(p, Bounds{3, 64});
  auto e = pc.then(pc.identity(0), path(*p, "e"));
  auto ee = pc.then(pc.identity(0), path(*p, "e.e"));
  ASSERT_TRUE(e && ee);
  EXPECT_EQ(*e, *ee);
}

TEST(WordProblem, ExactWhenFinite) {
  auto p = fixtures::presentation({"x"}, {{"s", "x", "x"}}, {{"s.s.s", "id(x)"}});
  WordProblem wp(p, Bounds{});
  ASSERT_TRUE(wp.category());
  EXPECT_EQ(wp.equal(path(*p, "s.s.s.s"), path(*p, "s")), EqVerdict::Equal);
  EXPECT_EQ(wp.equal(path(*p, "s.s"), path(*p, "s")), EqVerdict::Distinct);
}

TEST(WordProblem, FallsBackToSearch) {
  auto p = fixtures::loop();
  WordProblem wp(p, Bounds{3, 64});
  EXPECT_FALSE(wp.category());
  EXPECT_EQ(wp.equal(path(*p, "e"), path(*p, "e")), EqVerdict::Equal);
  EXPECT_EQ(wp.equal(path(*p, "e.e"), path(*p, "e")), EqVerdict::Distinct);
}
