#pragma once

// Lifting problems, orthogonality, and the saturation loop that turns a
// limit sketch into its universal realization fibr(E).
//
// Each pass scans every object y and every non-trivial cone alpha. When the
// current presentation materializes, every natural family kappa from y over
// the diagram of alpha is examined: a missing filler attaches a fresh arrow
// y -> apex, and surplus fillers are identified with the earliest one. When
// it does not materialize, the pass works on a bounded partial enumeration
// and only identifies fillers; each pass that finds nothing widens the word
// length, up to the bound.

#include <cstddef>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "limsk/cells.hpp"
#include "limsk/error.hpp"
#include "limsk/functor.hpp"
#include "limsk/materialize.hpp"
#include "limsk/presentation.hpp"
#include "limsk/sketch.hpp"

namespace limsk {

using CategoryPtr = std::shared_ptr<const MaterializedCategory>;

/// A commuting square  x --top--> A
///                     |left      |right
///                     y --bot--> B
struct LiftingProblem {
  PresentationMap left;
  CategoryPtr a;
  CategoryPtr b;
  MatFunctor right;
  CatFunctor top;
  CatFunctor bottom;
};

namespace detail {

inline bool square_commutes(const LiftingProblem& lp) {
  const auto& x = *lp.left.source;
  for (ObjectId o = 0; o < x.object_count(); ++o) {
    if (lp.right.objects[lp.top.objects[o]] != lp.bottom.objects[lp.left.objects[o]]) {
      return false;
    }
  }
  for (EdgeId e = 0; e < x.edge_count(); ++e) {
    if (lp.right.morphisms[lp.top.edges[e]] != apply(*lp.b, lp.bottom, lp.left.edges[e])) {
      return false;
    }
  }
  return true;
}

}  // namespace detail

/// Every h: y -> A with h . left = top and right . h = bottom.
inline std::vector<CatFunctor> find_lifts(const LiftingProblem& lp) {
  if (!detail::square_commutes(lp)) throw PreconditionError("lifting square does not commute");
  const auto& x = *lp.left.source;
  const auto& y = *lp.left.target;
  FunctorSearch search;
  search.fixed_objects.resize(y.object_count());
  for (ObjectId o = 0; o < x.object_count(); ++o) {
    auto& slot = search.fixed_objects[lp.left.objects[o]];
    if (slot && *slot != lp.top.objects[o]) return {};
    slot = lp.top.objects[o];
  }
  for (EdgeId e = 0; e < x.edge_count(); ++e) {
    search.path_constraints.emplace_back(lp.left.edges[e], lp.top.edges[e]);
  }
  search.object_ok = [&](ObjectId o, ObjectId z) {
    return lp.right.objects[z] == lp.bottom.objects[o];
  };
  search.edge_ok = [&](EdgeId e, MorphismId m) {
    return lp.right.morphisms[m] == lp.bottom.edges[e];
  };
  return enumerate_functors(y, *lp.a, search);
}

/// Restricts squares to those under a common base E: top . u = v, where
/// u: E -> source of the left map and v: E -> source of the right map.
struct Coslice {
  PresentationMap into_left;
  PresentationMap into_right;
};

struct OrthoVerdict {
  enum class Kind { UniquelyOrthogonal, NotOrthogonal, Unknown };
  Kind kind = Kind::Unknown;
  std::optional<LiftingProblem> witness;
  std::vector<CatFunctor> witness_lifts;
  std::size_t squares_checked = 0;
  std::string reason;
};

inline const char* to_string(OrthoVerdict::Kind k) {
  switch (k) {
    case OrthoVerdict::Kind::UniquelyOrthogonal: return "UniquelyOrthogonal";
    case OrthoVerdict::Kind::NotOrthogonal: return "NotOrthogonal";
    case OrthoVerdict::Kind::Unknown: return "Unknown";
  }
  return "?";
}

/// Exhaustive check that `f` lifts uniquely against `g` over every commuting
/// square. Both ends of `g` must materialize; otherwise the verdict is
/// Unknown.
inline OrthoVerdict orthogonal(const PresentationMap& f, const PresentationMap& g,
                               const Bounds& bounds = {},
                               const std::optional<Coslice>& coslice = std::nullopt) {
  OrthoVerdict v;
  auto ra = materialize(g.source, bounds);
  auto rb = materialize(g.target, bounds);
  if (!as_category(ra) || !as_category(rb)) {
    v.reason = "codomain map does not materialize within bounds";
    return v;
  }
  auto a = std::make_shared<const MaterializedCategory>(*as_category(ra));
  auto b = std::make_shared<const MaterializedCategory>(*as_category(rb));
  MatFunctor right = extend_to_morphisms(*a, *b, to_cat_functor(g, *b));
  if (!is_functor(*a, *b, right)) throw PreconditionError("right map is not a functor");

  FunctorSearch top_search;
  if (coslice) {
    const auto& u = coslice->into_left;
    const auto& w = coslice->into_right;
    top_search.fixed_objects.resize(f.source->object_count());
    for (ObjectId o = 0; o < u.objects.size(); ++o) {
      auto& slot = top_search.fixed_objects[u.objects[o]];
      if (slot && *slot != w.objects[o]) {
        v.kind = OrthoVerdict::Kind::UniquelyOrthogonal;  // no squares at all
        return v;
      }
      slot = w.objects[o];
    }
    for (EdgeId e = 0; e < u.edges.size(); ++e) {
      top_search.path_constraints.emplace_back(u.edges[e], a->evaluate(w.edges[e]));
    }
  }
  for (const auto& top : enumerate_functors(*f.source, *a, top_search)) {
    FunctorSearch bot_search;
    bot_search.fixed_objects.resize(f.target->object_count());
    bool consistent = true;
    for (ObjectId o = 0; o < f.objects.size(); ++o) {
      auto want = right.objects[top.objects[o]];
      auto& slot = bot_search.fixed_objects[f.objects[o]];
      if (slot && *slot != want) consistent = false;
      slot = want;
    }
    if (!consistent) continue;
    for (EdgeId e = 0; e < f.edges.size(); ++e) {
      bot_search.path_constraints.emplace_back(f.edges[e], right.morphisms[top.edges[e]]);
    }
    for (const auto& bottom : enumerate_functors(*f.target, *b, bot_search)) {
      LiftingProblem lp{f, a, b, right, top, bottom};
      ++v.squares_checked;
      auto lifts = find_lifts(lp);
      if (lifts.size() != 1) {
        v.kind = OrthoVerdict::Kind::NotOrthogonal;
        v.reason = lifts.empty() ? "square without a lift" : "square with several lifts";
        v.witness = std::move(lp);
        v.witness_lifts = std::move(lifts);
        return v;
      }
    }
  }
  v.kind = OrthoVerdict::Kind::UniquelyOrthogonal;
  return v;
}

// ---------------------------------------------------------------------------
// Saturation.

struct AttachEvent {
  std::size_t pass = 0;
  ObjectId y = 0;
  std::size_t alpha = 0;
  std::vector<Path> legs;  // kappa_i as representatives
  EdgeId filler = 0;

  friend bool operator==(const AttachEvent&, const AttachEvent&) = default;
};

struct IdentifyEvent {
  std::size_t pass = 0;
  ObjectId y = 0;
  std::size_t alpha = 0;
  Path later;
  Path earliest;

  friend bool operator==(const IdentifyEvent&, const IdentifyEvent&) = default;
};

using SoaEvent = std::variant<AttachEvent, IdentifyEvent>;

/// A sketch together with the presentation reached so far. The original
/// cones stay valid in `current`, which only ever gains edges and relations.
struct SoaState {
  LimitSketch sketch;
  PresentationPtr current;
  std::size_t passes = 0;
  std::size_t collapse_len = 2;
  std::vector<SoaEvent> trace;

  explicit SoaState(LimitSketch s) : sketch(std::move(s)), current(sketch.base()) {}
};

struct SoaStep {
  std::vector<SoaEvent> events;
  bool exact = false;  // the pass ran on a materialized category
};

namespace detail {

inline void apply_events(SoaState& st, std::vector<SoaEvent>& events) {
  const auto& cur = *st.current;
  Graph g = cur.graph();
  std::vector<Relation> rels = cur.relations();
  for (auto& ev : events) {
    if (auto* a = std::get_if<AttachEvent>(&ev)) {
      const Cone& c = st.sketch.cone(a->alpha);
      std::string base = cur.object_name(a->y) + ":" + c.name + ":fill";
      a->filler = g.add_edge(fresh_edge_name(g, base), a->y, c.apex);
      for (std::size_t i = 0; i < c.legs.size(); ++i) {
        Path lhs(a->y, {a->filler});
        lhs.edges.insert(lhs.edges.end(), c.legs[i].edges.begin(), c.legs[i].edges.end());
        rels.push_back(Relation{lhs, a->legs[i]});
      }
    } else {
      const auto& id = std::get<IdentifyEvent>(ev);
      rels.push_back(Relation{id.later, id.earliest});
    }
  }
  st.current = share(Presentation(std::move(g), std::move(rels)));
}

inline std::vector<SoaEvent> exact_scan(const SoaState& st, const MaterializedCategory& c) {
  std::vector<SoaEvent> events;
  const auto& s = st.sketch;
  for (ObjectId y = 0; y < c.object_count(); ++y) {
    for (std::size_t alpha = 0; alpha < s.cone_count(); ++alpha) {
      if (s.is_trivial(alpha)) continue;
      const Cone& cone = s.cone(alpha);
      MatCone mc = evaluate_cone(c, cone);
      for (const auto& kappa : enumerate_cones(c, y, *cone.index, mc.objects, mc.diagram)) {
        auto fillers = cone_fillers(c, mc, y, kappa);
        if (fillers.empty()) {
          AttachEvent a{st.passes + 1, y, alpha, {}, 0};
          for (MorphismId k : kappa) a.legs.push_back(c.morphism(k).rep);
          events.emplace_back(std::move(a));
        }
        for (std::size_t k = 1; k < fillers.size(); ++k) {
          events.emplace_back(IdentifyEvent{st.passes + 1, y, alpha, c.morphism(fillers[k]).rep,
                                            c.morphism(fillers[0]).rep});
        }
      }
    }
  }
  return events;
}

/// Identification-only scan over a bounded partial enumeration.
inline std::vector<SoaEvent> collapse_scan(const SoaState& st, const Bounds& bounds) {
  using Node = PartialCategory::Node;
  PartialCategory pc(st.current, Bounds{st.collapse_len, bounds.max_morphisms});
  std::vector<SoaEvent> events;
  const auto& s = st.sketch;
  for (ObjectId y = 0; y < st.current->object_count(); ++y) {
    for (std::size_t alpha = 0; alpha < s.cone_count(); ++alpha) {
      if (s.is_trivial(alpha)) continue;
      const Cone& cone = s.cone(alpha);
      const auto& idx = *cone.index;
      std::vector<std::vector<Node>> legs_at;
      for (ObjectId i = 0; i < idx.object_count(); ++i) {
        legs_at.push_back(pc.hom(y, cone.diagram_objects[i]));
      }
      std::vector<Path> images;
      for (MorphismId f = 0; f < idx.morphism_count(); ++f) images.push_back(cone.diagram(f));
      auto candidates = pc.hom(y, cone.apex);
      std::vector<Node> kappa;
      auto rec = [&](auto&& self, ObjectId i) -> void {
        if (i == idx.object_count()) {
          for (MorphismId f = 0; f < idx.morphism_count(); ++f) {
            const auto& mf = idx.morphism(f);
            auto moved = pc.then(kappa[mf.src], images[f]);
            if (!moved || !(*moved == kappa[mf.tgt])) return;
          }
          std::vector<Node> fillers;
          for (const Node& h : candidates) {
            bool ok = true;
            for (ObjectId j = 0; j < idx.object_count() && ok; ++j) {
              auto hj = pc.then(h, cone.legs[j]);
              ok = hj && *hj == kappa[j];
            }
            if (ok) fillers.push_back(h);
          }
          for (std::size_t k = 1; k < fillers.size(); ++k) {
            events.emplace_back(IdentifyEvent{st.passes + 1, y, alpha, pc.rep(fillers[k]),
                                              pc.rep(fillers[0])});
          }
          return;
        }
        for (const Node& n : legs_at[i]) {
          kappa.push_back(n);
          self(self, i + 1);
          kappa.pop_back();
        }
      };
      rec(rec, 0);
    }
  }
  return events;
}

}  // namespace detail

/// One saturation pass. Mutates `st` (presentation, pass counter, trace) and
/// returns the events of this pass.
inline SoaStep soa_step(SoaState& st, const Bounds& bounds = {}) {
  SoaStep step;
  auto r = materialize(st.current, bounds);
  if (const auto* c = as_category(r)) {
    step.exact = true;
    step.events = detail::exact_scan(st, *c);
  } else {
    step.events = detail::collapse_scan(st, bounds);
    if (step.events.empty()) ++st.collapse_len;
  }
  ++st.passes;
  if (!step.events.empty()) {
    detail::apply_events(st, step.events);
    st.trace.insert(st.trace.end(), step.events.begin(), step.events.end());
  }
  return step;
}

enum class RealizationStatus { Stabilized, BudgetExhausted };

inline const char* to_string(RealizationStatus s) {
  return s == RealizationStatus::Stabilized ? "Stabilized" : "BudgetExhausted";
}

struct RealizationResult {
  LimitSketch original;
  LimitSketch realized;
  SketchMap unit;  // lambda: E -> fibr(E), identity on cones
  std::vector<SoaEvent> trace;
  std::size_t iterations = 0;
  RealizationStatus status = RealizationStatus::BudgetExhausted;
  CategoryPtr category;  // fibr(E) materialized, when Stabilized

  bool stabilized() const noexcept { return status == RealizationStatus::Stabilized; }
};

inline RealizationResult realize(const LimitSketch& s, std::size_t max_iter = 16,
                                 const Bounds& bounds = {}) {
  SoaState st(s);
  st.collapse_len = std::min<std::size_t>(2, bounds.max_word_len);
  auto status = RealizationStatus::BudgetExhausted;
  CategoryPtr category;
  while (st.passes < max_iter) {
    auto step = soa_step(st, bounds);
    if (step.events.empty()) {
      if (step.exact) {
        status = RealizationStatus::Stabilized;
        break;
      }
      if (st.collapse_len > bounds.max_word_len) break;
    }
  }
  if (status == RealizationStatus::Stabilized) {
    category = std::make_shared<const MaterializedCategory>(materialize_or_throw(st.current, bounds));
  }
  LimitSketch realized(st.current, s.cones(), [&] {
    std::vector<std::size_t> t;
    for (ObjectId e = 0; e < s.base()->object_count(); ++e) t.push_back(s.trivial_cone(e));
    return t;
  }());
  SketchMap unit{identity_on_generators(s.base(), st.current), {}};
  for (std::size_t a = 0; a < s.cone_count(); ++a) unit.cone_map.push_back(a);
  return RealizationResult{s,        std::move(realized), std::move(unit),    std::move(st.trace),
                           st.passes, status,             std::move(category)};
}

// ---------------------------------------------------------------------------
// Trace output.

inline std::string format_event(const Presentation& p, const LimitSketch& s,
                                const SoaEvent& ev) {
  std::ostringstream os;
  const auto& g = p.graph();
  if (const auto* a = std::get_if<AttachEvent>(&ev)) {
    os << "ATTACH y=" << dsl_name(p.object_name(a->y))
       << " alpha=" << dsl_name(s.cone(a->alpha).name) << " legs=[";
    for (std::size_t i = 0; i < a->legs.size(); ++i) {
      os << (i ? ", " : "") << to_string(g, a->legs[i]);
    }
    os << "] fill=" << dsl_name(p.edge(a->filler).name);
  } else {
    const auto& id = std::get<IdentifyEvent>(ev);
    os << "IDENTIFY m1=" << to_string(g, id.later) << " m2=" << to_string(g, id.earliest);
  }
  return os.str();
}

inline void write_trace(std::ostream& os, const RealizationResult& r) {
  for (const auto& ev : r.trace) {
    os << format_event(*r.realized.base(), r.original, ev) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Universal property of the unit.

namespace detail {

inline void require_stabilized(const RealizationResult& r) {
  if (!r.stabilized()) throw PreconditionError("realization did not stabilize");
}

}  // namespace detail

/// The unique G: fibr(E) -> D with G . lambda = F, by replaying the trace.
/// F must send every cone of E to a limit cone in D.
inline CatFunctor extend_along_unit(const RealizationResult& r, const MaterializedCategory& d,
                                    const CatFunctor& F) {
  detail::require_stabilized(r);
  const auto& E = r.original;
  if (!is_functor(*E.base(), d, F)) throw PreconditionError("F is not a functor E -> D");
  for (const auto& cone : E.cones()) {
    if (!is_limit_cone(d, image_cone(d, F, cone))) {
      throw PreconditionError("F does not send cone '" + cone.name + "' to a limit cone");
    }
  }
  CatFunctor G = F;
  for (const auto& ev : r.trace) {
    if (const auto* a = std::get_if<AttachEvent>(&ev)) {
      const Cone& cone = E.cone(a->alpha);
      std::vector<MorphismId> kappa;
      for (const auto& leg : a->legs) kappa.push_back(apply(d, G, leg));
      auto fillers = cone_fillers(d, image_cone(d, F, cone), G.objects[a->y], kappa);
      if (fillers.size() != 1 || G.edges.size() != a->filler) {
        throw Error("internal: trace replay found no unique filler");
      }
      G.edges.push_back(fillers[0]);
    } else {
      const auto& id = std::get<IdentifyEvent>(ev);
      if (apply(d, G, id.later) != apply(d, G, id.earliest)) {
        throw Error("internal: trace replay broke an identification");
      }
    }
  }
  if (!is_functor(*r.realized.base(), d, G)) throw Error("internal: extension is not a functor");
  return G;
}

/// Presentation-level form; nullopt when F's target does not materialize.
inline std::optional<PresentationMap> extend_along_unit(const RealizationResult& r,
                                                        const PresentationMap& F,
                                                        const Bounds& bounds = {}) {
  auto m = materialize(F.target, bounds);
  const auto* d = as_category(m);
  if (!d) return std::nullopt;
  auto G = extend_along_unit(r, *d, to_cat_functor(F, *d));
  return to_presentation_map(r.realized.base(), *d, G);
}

/// free(m) = extension of lambda' . m along lambda.
inline PresentationMap realize_morphism(const SketchMap& m, const RealizationResult& rE,
                                        const RealizationResult& rE2, const Bounds& bounds = {}) {
  detail::require_stabilized(rE);
  detail::require_stabilized(rE2);
  if (auto chk = validate_sketch_map(m, rE.original, rE2.original, bounds); !chk) {
    throw PreconditionError("invalid sketch map: " + chk.diagnostic);
  }
  const auto& d = *rE2.category;
  CatFunctor F = to_cat_functor(compose(rE2.unit.functor, m.functor), d);
  return to_presentation_map(rE.realized.base(), d, extend_along_unit(rE, d, F));
}

}  // namespace limsk
