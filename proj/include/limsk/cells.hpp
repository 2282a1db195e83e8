#pragma once

// The two cell constructions attached during realization.
//
// coinserter(s, y, alpha) freely adds a cone gamma from y over the diagram of
// cone alpha; filler_cell(s, y, alpha) further adds one arrow y -> apex whose
// composites with the legs of alpha recover gamma. The map r between them is
// the generating cell for the pair (y, alpha).

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "limsk/error.hpp"
#include "limsk/functor.hpp"
#include "limsk/materialize.hpp"
#include "limsk/presentation.hpp"
#include "limsk/sketch.hpp"

namespace limsk {

struct Coinserter {
  ObjectId y = 0;
  std::size_t alpha = 0;
  PresentationPtr base;          // E
  PresentationPtr result;        // E[y;alpha]
  PresentationMap inclusion;     // i: E -> E[y;alpha]
  std::vector<EdgeId> legs;      // gamma_i, one per index object
};

struct FillerCell {
  Coinserter coinserter;
  PresentationPtr result;          // E[y;alpha]'
  PresentationMap retract_map;     // r: E[y;alpha] -> E[y;alpha]'
  EdgeId filler = 0;               // y -> apex
  PresentationMap unit_composite;  // j = r . i
};

namespace detail {

inline void require_cell_args(const LimitSketch& s, ObjectId y, std::size_t alpha) {
  if (y >= s.base()->object_count()) throw ValidationError("unknown object for cell");
  if (alpha >= s.cone_count()) throw ValidationError("unknown cone index for cell");
}

inline std::string cell_prefix(const LimitSketch& s, ObjectId y, std::size_t alpha) {
  return s.base()->object_name(y) + ":" + s.cone(alpha).name;
}

/// Glues `extra` edges onto `p` by the pushout of free(U(p)) -> free(G') along
/// the counit, then adds `rels`. `extra_rels` receives the new edge ids.
template <typename MakeRelations>
PushoutResult glue_edges(const PresentationPtr& p,
                         const std::vector<std::pair<std::string, std::pair<ObjectId, ObjectId>>>& extra,
                         MakeRelations&& make_relations) {
  auto free_base = free_presentation(p->graph());
  Graph enlarged = p->graph();
  for (const auto& [name, ends] : extra) {
    enlarged.add_edge(fresh_edge_name(enlarged, name), ends.first, ends.second);
  }
  auto free_big = free_presentation(enlarged);
  PresentationMap incl = identity_on_generators(free_base, free_big);
  PresentationMap counit = identity_on_generators(free_base, p);
  auto po = pushout(incl, counit);
  std::vector<EdgeId> fresh;
  for (EdgeId e = p->edge_count(); e < free_big->edge_count(); ++e) {
    fresh.push_back(po.from_left.edges[e].edges.at(0));
  }
  auto quotiented = share(quotient(*po.result, make_relations(fresh)));
  po.from_left.target = quotiented;
  po.from_right = identity_on_generators(p, quotiented);
  po.result = quotiented;
  return po;
}

}  // namespace detail

inline Coinserter coinserter(const LimitSketch& s, ObjectId y, std::size_t alpha) {
  detail::require_cell_args(s, y, alpha);
  const auto& E = s.base();
  const Cone& c = s.cone(alpha);
  const auto& idx = *c.index;
  const std::string prefix = detail::cell_prefix(s, y, alpha);
  std::vector<std::pair<std::string, std::pair<ObjectId, ObjectId>>> extra;
  for (ObjectId i = 0; i < idx.object_count(); ++i) {
    extra.push_back({prefix + ":leg:" + idx.object_name(i), {y, c.diagram_objects[i]}});
  }
  std::vector<EdgeId> legs;
  auto po = detail::glue_edges(E, extra, [&](const std::vector<EdgeId>& fresh) {
    legs = fresh;
    std::vector<Relation> rels;
    for (MorphismId f = 0; f < idx.morphism_count(); ++f) {
      const auto& mf = idx.morphism(f);
      Path lhs(y, {fresh[mf.src]});
      auto img = c.diagram(f);
      lhs.edges.insert(lhs.edges.end(), img.edges.begin(), img.edges.end());
      Path rhs(y, {fresh[mf.tgt]});
      if (lhs != rhs) rels.push_back(Relation{lhs, rhs});
    }
    return rels;
  });
  return Coinserter{y, alpha, E, po.result, identity_on_generators(E, po.result),
                    std::move(legs)};
}

inline FillerCell filler_cell(const LimitSketch& s, ObjectId y, std::size_t alpha) {
  Coinserter co = coinserter(s, y, alpha);
  const Cone& c = s.cone(alpha);
  const std::string prefix = detail::cell_prefix(s, y, alpha);
  EdgeId filler = 0;
  auto po = detail::glue_edges(
      co.result, {{prefix + ":fill", {y, c.apex}}}, [&](const std::vector<EdgeId>& fresh) {
        filler = fresh.at(0);
        std::vector<Relation> rels;
        for (std::size_t i = 0; i < c.legs.size(); ++i) {
          Path lhs(y, {filler});
          lhs.edges.insert(lhs.edges.end(), c.legs[i].edges.begin(), c.legs[i].edges.end());
          rels.push_back(Relation{lhs, Path(y, {co.legs[i]})});
        }
        return rels;
      });
  PresentationMap r = identity_on_generators(co.result, po.result);
  PresentationMap j = compose(r, co.inclusion);
  return FillerCell{std::move(co), po.result, std::move(r), filler, std::move(j)};
}

namespace detail {

inline void require_natural(const MaterializedCategory& d, const MatCone& image,
                            const std::vector<MorphismId>& kappa, ObjectId apex) {
  const auto& idx = *image.index;
  if (kappa.size() != idx.object_count()) throw PreconditionError("kappa has wrong arity");
  for (ObjectId i = 0; i < kappa.size(); ++i) {
    const auto& m = d.morphism(kappa[i]);
    if (m.src != apex || m.tgt != image.objects[i]) {
      throw PreconditionError("kappa leg at index object '" + idx.object_name(i) +
                              "' is mistyped");
    }
  }
  for (MorphismId f = 0; f < idx.morphism_count(); ++f) {
    const auto& mf = idx.morphism(f);
    if (d.compose(image.diagram[f], kappa[mf.src]) != kappa[mf.tgt]) {
      throw PreconditionError("kappa is not natural at index morphism " +
                              to_string(idx.presentation()->graph(), mf.rep));
    }
  }
}

}  // namespace detail

/// The unique G: E[y;alpha] -> D with G . i = F and G(gamma_i) = kappa_i.
inline CatFunctor induced_from_cone(const LimitSketch& s, const Coinserter& c,
                                    const MaterializedCategory& d, const CatFunctor& F,
                                    const std::vector<MorphismId>& kappa) {
  if (!is_functor(*c.base, d, F)) throw PreconditionError("F is not a functor E -> D");
  const Cone& cone = s.cone(c.alpha);
  detail::require_natural(d, image_cone(d, F, cone), kappa, F.objects[c.y]);
  CatFunctor G = F;
  for (ObjectId i = 0; i < kappa.size(); ++i) G.edges.push_back(kappa[i]);
  if (!is_functor(*c.result, d, G)) throw Error("internal: induced map is not a functor");
  return G;
}

/// Presentation-level form; kappa legs are paths of F.target.
inline PresentationMap induced_from_cone(const LimitSketch& s, const Coinserter& c,
                                         const PresentationMap& F,
                                         const std::vector<Path>& kappa,
                                         const Bounds& bounds = {}) {
  auto d = materialize_or_throw(F.target, bounds);
  std::vector<MorphismId> k;
  for (const auto& p : kappa) k.push_back(d.evaluate(p));
  induced_from_cone(s, c, d, to_cat_functor(F, d), k);
  PresentationMap out{c.result, F.target, F.objects, F.edges};
  for (const auto& p : kappa) out.edges.push_back(p);
  return out;
}

/// The unique G': E[y;alpha]' -> D with G' . r = F and G'(fill) = h.
inline CatFunctor induced_from_filler(const LimitSketch& s, const FillerCell& fc,
                                      const MaterializedCategory& d, const CatFunctor& F,
                                      MorphismId h) {
  const auto& co = fc.coinserter;
  if (!is_functor(*co.result, d, F)) {
    throw PreconditionError("F is not a functor E[y;alpha] -> D");
  }
  const Cone& cone = s.cone(co.alpha);
  const auto& hm = d.morphism(h);
  if (hm.src != F.objects[co.y] || hm.tgt != F.objects[cone.apex]) {
    throw PreconditionError("h is mistyped");
  }
  for (std::size_t i = 0; i < cone.legs.size(); ++i) {
    if (d.compose(apply(d, F, cone.legs[i]), h) != F.edges.at(co.legs[i])) {
      throw PreconditionError("side condition fails at index object '" +
                              cone.index->object_name(i) + "'");
    }
  }
  CatFunctor G = F;
  G.edges.push_back(h);
  if (!is_functor(*fc.result, d, G)) throw Error("internal: induced map is not a functor");
  return G;
}

inline PresentationMap induced_from_filler(const LimitSketch& s, const FillerCell& fc,
                                           const PresentationMap& F, const Path& h,
                                           const Bounds& bounds = {}) {
  auto d = materialize_or_throw(F.target, bounds);
  induced_from_filler(s, fc, d, to_cat_functor(F, d), d.evaluate(h));
  PresentationMap out{fc.result, F.target, F.objects, F.edges};
  out.edges.push_back(h);
  return out;
}

struct PhiPair {
  CatFunctor g;   // E[y;alpha] -> D
  MorphismId h;   // G(y) -> G(apex)

  friend bool operator==(const PhiPair&, const PhiPair&) = default;
};

/// All (G, h) with G . i = F and G(delta_i) . h = G(gamma_i), ordered by
/// (kappa legs, h).
inline std::vector<PhiPair> phi_set(const LimitSketch& s, const MaterializedCategory& d,
                                    const CatFunctor& F, ObjectId y, std::size_t alpha) {
  detail::require_cell_args(s, y, alpha);
  if (!is_functor(*s.base(), d, F)) throw PreconditionError("F is not a functor E -> D");
  const Cone& cone = s.cone(alpha);
  MatCone image = image_cone(d, F, cone);
  std::vector<PhiPair> out;
  for (const auto& kappa :
       enumerate_cones(d, F.objects[y], *cone.index, image.objects, image.diagram)) {
    CatFunctor G = F;
    G.edges.insert(G.edges.end(), kappa.begin(), kappa.end());
    for (MorphismId h : cone_fillers(d, image, F.objects[y], kappa)) out.push_back({G, h});
  }
  return out;
}

/// nullopt when F's target does not materialize.
inline std::optional<std::vector<PhiPair>> phi_set(const LimitSketch& s, const PresentationMap& F,
                                                   ObjectId y, std::size_t alpha,
                                                   const Bounds& bounds) {
  auto r = materialize(F.target, bounds);
  const auto* d = as_category(r);
  if (!d) return std::nullopt;
  return phi_set(s, *d, to_cat_functor(F, *d), y, alpha);
}

struct GeneratingCell {
  ObjectId y = 0;
  std::size_t alpha = 0;
  PresentationMap map;  // r_{y,alpha}
};

/// One cell per (object, non-trivial cone), objects outermost.
inline std::vector<GeneratingCell> generating_set(const LimitSketch& s,
                                                  bool include_trivial = false) {
  std::vector<GeneratingCell> out;
  for (ObjectId y = 0; y < s.base()->object_count(); ++y) {
    for (std::size_t a = 0; a < s.cone_count(); ++a) {
      if (!include_trivial && s.is_trivial(a)) continue;
      out.push_back(GeneratingCell{y, a, filler_cell(s, y, a).retract_map});
    }
  }
  return out;
}

}  // namespace limsk
