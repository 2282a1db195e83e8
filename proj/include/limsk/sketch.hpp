#pragma once

// Cones, limit-cone checking and limit sketches.

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "limsk/error.hpp"
#include "limsk/functor.hpp"
#include "limsk/materialize.hpp"
#include "limsk/presentation.hpp"

namespace limsk {

using IndexPtr = std::shared_ptr<const MaterializedCategory>;

/// A cone in a presentation: apex, finite index category, a diagram given on
/// the index generators, and one leg per index object.
struct Cone {
  std::string name;
  ObjectId apex = 0;
  IndexPtr index;
  std::vector<ObjectId> diagram_objects;  // per index object
  std::vector<Path> diagram_arrows;       // per index generating arrow
  std::vector<Path> legs;                 // per index object, apex -> diagram
  bool implicit = false;                  // inserted by make_sketch

  /// Image of an index morphism: concatenated images along its rep.
  Path diagram(MorphismId m) const {
    const auto& rep = index->morphism(m).rep;
    Path out(diagram_objects.at(rep.start));
    for (EdgeId e : rep.edges) {
      const auto& img = diagram_arrows.at(e);
      out.edges.insert(out.edges.end(), img.edges.begin(), img.edges.end());
    }
    return out;
  }

  bool is_trivial() const {
    return index->object_count() == 1 && index->morphism_count() == 1 &&
           diagram_objects[0] == apex && legs[0].is_identity();
  }
};

/// Index category with one object and only its identity.
inline IndexPtr terminal_index() {
  static const IndexPtr idx = [] {
    Graph g;
    g.add_vertex("0");
    return std::make_shared<const MaterializedCategory>(
        materialize_or_throw(share(Presentation(std::move(g), {})), Bounds{}));
  }();
  return idx;
}

inline IndexPtr empty_index() {
  static const IndexPtr idx = std::make_shared<const MaterializedCategory>(
      materialize_or_throw(share(Presentation()), Bounds{}));
  return idx;
}

/// The cone (e, 1, *_e, id).
inline Cone trivial_cone(const Presentation& p, ObjectId e) {
  return Cone{"<" + p.object_name(e) + ">", e, terminal_index(), {e}, {}, {Path(e)}, true};
}

/// Structural equality of finite categories (same ids, typing and tables).
inline bool same_category(const MaterializedCategory& a, const MaterializedCategory& b) {
  if (a.object_count() != b.object_count() || a.morphism_count() != b.morphism_count()) {
    return false;
  }
  for (MorphismId m = 0; m < a.morphism_count(); ++m) {
    if (a.morphism(m).src != b.morphism(m).src || a.morphism(m).tgt != b.morphism(m).tgt) {
      return false;
    }
  }
  for (ObjectId x = 0; x < a.object_count(); ++x) {
    if (a.identity(x) != b.identity(x)) return false;
  }
  for (MorphismId g = 0; g < a.morphism_count(); ++g) {
    for (MorphismId f = 0; f < a.morphism_count(); ++f) {
      if (a.try_compose(g, f) != b.try_compose(g, f)) return false;
    }
  }
  return true;
}

namespace detail {

inline void validate_cone(const WordProblem& wp, const Cone& c) {
  const Presentation& p = *wp.presentation();
  const auto& g = p.graph();
  auto fail = [&](const std::string& what) {
    throw ValidationError("cone '" + c.name + "': " + what);
  };
  if (!c.index) fail("missing index category");
  const auto& idx = *c.index;
  const auto& ig = idx.presentation()->graph();
  if (c.apex >= p.object_count()) fail("apex out of range");
  if (c.diagram_objects.size() != idx.object_count()) fail("diagram has wrong arity");
  if (c.legs.size() != idx.object_count()) fail("wrong number of legs");
  if (c.diagram_arrows.size() != idx.generator_count()) fail("diagram has wrong arity");
  for (ObjectId i = 0; i < idx.object_count(); ++i) {
    if (c.diagram_objects[i] >= p.object_count()) fail("diagram object out of range");
    const auto& leg = c.legs[i];
    if (!is_composable(g, leg) || leg.start != c.apex ||
        p.target(leg) != c.diagram_objects[i]) {
      fail("leg at index object '" + idx.object_name(i) + "' is mistyped");
    }
  }
  for (EdgeId a = 0; a < idx.generator_count(); ++a) {
    const auto& img = c.diagram_arrows[a];
    const auto& ed = ig.edges[a];
    if (!is_composable(g, img) || img.start != c.diagram_objects[ed.src] ||
        p.target(img) != c.diagram_objects[ed.tgt]) {
      fail("image of index arrow '" + ed.name + "' is mistyped");
    }
  }
  auto raw_image = [&](const Path& ip) {
    Path out(c.diagram_objects[ip.start]);
    for (EdgeId e : ip.edges) {
      const auto& img = c.diagram_arrows[e];
      out.edges.insert(out.edges.end(), img.edges.begin(), img.edges.end());
    }
    return out;
  };
  for (const auto& r : idx.presentation()->relations()) {
    auto v = wp.equal(raw_image(r.lhs), raw_image(r.rhs));
    if (v != EqVerdict::Equal) {
      fail(std::string("diagram is not functorial on index relation ") +
           to_string(ig, r.lhs) + " = " + to_string(ig, r.rhs) +
           (v == EqVerdict::Unknown ? " (undecided)" : ""));
    }
  }
  for (MorphismId m = 0; m < idx.morphism_count(); ++m) {
    const auto& mm = idx.morphism(m);
    auto lhs = concat(g, c.diagram(m), c.legs[mm.src]);
    auto v = wp.equal(lhs, c.legs[mm.tgt]);
    if (v != EqVerdict::Equal) {
      fail("naturality fails at index morphism " + to_string(ig, mm.rep) +
           (v == EqVerdict::Unknown ? " (undecided)" : ""));
    }
  }
}

}  // namespace detail

/// A presentation with an indexed family of cones. Every object has a
/// trivial cone; `trivial_cone(e)` gives its index.
class LimitSketch {
 public:
  LimitSketch(PresentationPtr base, std::vector<Cone> cones,
              std::vector<std::size_t> trivial_index)
      : base_(std::move(base)),
        cones_(std::move(cones)),
        trivial_index_(std::move(trivial_index)) {}

  const PresentationPtr& base() const noexcept { return base_; }
  const std::vector<Cone>& cones() const noexcept { return cones_; }
  const Cone& cone(std::size_t alpha) const { return cones_.at(alpha); }
  std::size_t cone_count() const noexcept { return cones_.size(); }
  std::size_t trivial_cone(ObjectId e) const { return trivial_index_.at(e); }
  bool is_trivial(std::size_t alpha) const { return cones_.at(alpha).is_trivial(); }

  std::optional<std::size_t> find_cone(const std::string& name) const {
    for (std::size_t a = 0; a < cones_.size(); ++a) {
      if (cones_[a].name == name) return a;
    }
    return std::nullopt;
  }

 private:
  PresentationPtr base_;
  std::vector<Cone> cones_;
  std::vector<std::size_t> trivial_index_;
};

/// Validates `cones` over `p` and appends a trivial cone for every object
/// that no given cone already covers.
inline LimitSketch make_sketch(PresentationPtr p, std::vector<Cone> cones,
                               const Bounds& bounds = {}) {
  WordProblem wp(p, bounds);
  for (const auto& c : cones) detail::validate_cone(wp, c);
  std::vector<std::optional<std::size_t>> covered(p->object_count());
  for (std::size_t a = 0; a < cones.size(); ++a) {
    if (cones[a].is_trivial() && !covered[cones[a].apex]) covered[cones[a].apex] = a;
  }
  std::vector<std::size_t> trivial(p->object_count());
  for (ObjectId e = 0; e < p->object_count(); ++e) {
    if (!covered[e]) {
      cones.push_back(trivial_cone(*p, e));
      covered[e] = cones.size() - 1;
    }
    trivial[e] = *covered[e];
  }
  return LimitSketch(std::move(p), std::move(cones), std::move(trivial));
}

inline LimitSketch free_sketch(PresentationPtr p) { return make_sketch(std::move(p), {}); }

inline const PresentationPtr& underlying_category(const LimitSketch& s) { return s.base(); }

// ---------------------------------------------------------------------------
// Limit cones in materialized categories.

/// A cone evaluated in a materialized category.
struct MatCone {
  ObjectId apex = 0;
  IndexPtr index;
  std::vector<ObjectId> objects;     // per index object
  std::vector<MorphismId> diagram;   // per index morphism
  std::vector<MorphismId> legs;      // per index object
};

inline MatCone evaluate_cone(const MaterializedCategory& c, const Cone& cone) {
  if (cone.apex >= c.object_count()) throw ValidationError("cone references unknown objects");
  MatCone out{cone.apex, cone.index, cone.diagram_objects, {}, {}};
  for (ObjectId x : cone.diagram_objects) {
    if (x >= c.object_count()) throw ValidationError("cone references unknown objects");
  }
  for (MorphismId m = 0; m < cone.index->morphism_count(); ++m) {
    out.diagram.push_back(c.evaluate(cone.diagram(m)));
  }
  for (const auto& leg : cone.legs) out.legs.push_back(c.evaluate(leg));
  return out;
}

/// Image of a cone of `p` under a functor `f: p -> d`.
inline MatCone image_cone(const MaterializedCategory& d, const CatFunctor& f,
                          const Cone& cone) {
  MatCone out{f.objects.at(cone.apex), cone.index, {}, {}, {}};
  for (ObjectId x : cone.diagram_objects) out.objects.push_back(f.objects.at(x));
  for (MorphismId m = 0; m < cone.index->morphism_count(); ++m) {
    out.diagram.push_back(apply(d, f, cone.diagram(m)));
  }
  for (const auto& leg : cone.legs) out.legs.push_back(apply(d, f, leg));
  return out;
}

/// Every natural family apex-less cone (y, kappa) over the diagram, in
/// lexicographic order of the legs.
inline std::vector<std::vector<MorphismId>> enumerate_cones(
    const MaterializedCategory& c, ObjectId y, const MaterializedCategory& index,
    const std::vector<ObjectId>& objects, const std::vector<MorphismId>& diagram) {
  const auto k = index.object_count();
  // index morphisms by the larger of their endpoints, checked once both set
  std::vector<std::vector<MorphismId>> checks(k);
  for (MorphismId m = 0; m < index.morphism_count(); ++m) {
    const auto& mm = index.morphism(m);
    if (mm.src == mm.tgt && index.is_identity(m)) continue;
    checks[std::max(mm.src, mm.tgt)].push_back(m);
  }
  std::vector<std::vector<MorphismId>> out;
  std::vector<MorphismId> legs(k);
  auto rec = [&](auto&& self, ObjectId i) -> void {
    if (i == k) {
      out.push_back(legs);
      return;
    }
    for (MorphismId m : c.hom(y, objects[i])) {
      legs[i] = m;
      bool ok = true;
      for (MorphismId f : checks[i]) {
        const auto& ff = index.morphism(f);
        if (c.compose(diagram[f], legs[ff.src]) != legs[ff.tgt]) {
          ok = false;
          break;
        }
      }
      if (ok) self(self, i + 1);
    }
  };
  rec(rec, 0);
  return out;
}

/// Morphisms h: y -> apex with legs_i . h = kappa_i for all i.
inline std::vector<MorphismId> cone_fillers(const MaterializedCategory& c, const MatCone& cone,
                                            ObjectId y, const std::vector<MorphismId>& kappa) {
  std::vector<MorphismId> out;
  for (MorphismId h : c.hom(y, cone.apex)) {
    bool ok = true;
    for (std::size_t i = 0; i < kappa.size() && ok; ++i) {
      ok = c.compose(cone.legs[i], h) == kappa[i];
    }
    if (ok) out.push_back(h);
  }
  return out;
}

inline bool is_limit_cone(const MaterializedCategory& c, const MatCone& cone) {
  for (ObjectId y = 0; y < c.object_count(); ++y) {
    for (const auto& kappa : enumerate_cones(c, y, *cone.index, cone.objects, cone.diagram)) {
      if (cone_fillers(c, cone, y, kappa).size() != 1) return false;
    }
  }
  return true;
}

/// True iff `cone` (living in the presentation `c` was materialized from)
/// is a limit cone in `c`.
inline bool check_limit_cone(const MaterializedCategory& c, const Cone& cone) {
  return is_limit_cone(c, evaluate_cone(c, cone));
}

/// nullopt when the base does not materialize within `bounds`.
inline std::optional<bool> is_realized(const LimitSketch& s, const Bounds& bounds) {
  auto r = materialize(s.base(), bounds);
  const auto* c = as_category(r);
  if (!c) return std::nullopt;
  for (const auto& cone : s.cones()) {
    if (!check_limit_cone(*c, cone)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Sketch maps.

struct SketchMap {
  PresentationMap functor;
  std::vector<std::size_t> cone_map;
};

struct SketchMapCheck {
  bool ok = true;
  std::string diagnostic;
  explicit operator bool() const noexcept { return ok; }
};

inline SketchMapCheck validate_sketch_map(const SketchMap& m, const LimitSketch& source,
                                          const LimitSketch& target,
                                          const Bounds& bounds = {}) {
  auto fail = [](std::string why) { return SketchMapCheck{false, std::move(why)}; };
  const auto& F = m.functor;
  try {
    F.require_typed();
  } catch (const TypingError& e) {
    return fail(std::string("functor: ") + e.what());
  }
  WordProblem wp(target.base(), bounds);
  for (const auto& r : source.base()->relations()) {
    if (wp.equal(F.apply(r.lhs), F.apply(r.rhs)) != EqVerdict::Equal) {
      return fail("functor does not preserve relation " +
                  to_string(source.base()->graph(), r.lhs) + " = " +
                  to_string(source.base()->graph(), r.rhs));
    }
  }
  if (m.cone_map.size() != source.cone_count()) return fail("cone map has wrong arity");
  for (std::size_t a = 0; a < source.cone_count(); ++a) {
    if (m.cone_map[a] >= target.cone_count()) return fail("cone map out of range");
    const auto& c = source.cone(a);
    const auto& d = target.cone(m.cone_map[a]);
    const std::string where = "cone '" + c.name + "' -> '" + d.name + "': ";
    if (F.objects[c.apex] != d.apex) return fail(where + "apex not preserved");
    if (!same_category(*c.index, *d.index)) return fail(where + "index categories differ");
    for (ObjectId i = 0; i < c.diagram_objects.size(); ++i) {
      if (F.objects[c.diagram_objects[i]] != d.diagram_objects[i]) {
        return fail(where + "diagram objects differ");
      }
    }
    for (MorphismId k = 0; k < c.index->morphism_count(); ++k) {
      if (wp.equal(F.apply(c.diagram(k)), d.diagram(k)) != EqVerdict::Equal) {
        return fail(where + "diagram triangle fails");
      }
    }
    for (std::size_t i = 0; i < c.legs.size(); ++i) {
      if (wp.equal(F.apply(c.legs[i]), d.legs[i]) != EqVerdict::Equal) {
        return fail(where + "legs not preserved");
      }
    }
  }
  return {};
}

inline SketchMap compose(const SketchMap& after, const SketchMap& before) {
  SketchMap out{compose(after.functor, before.functor), {}};
  for (auto a : before.cone_map) out.cone_map.push_back(after.cone_map.at(a));
  return out;
}

inline SketchMap identity_sketch_map(const LimitSketch& s) {
  SketchMap m{identity_map(s.base()), {}};
  for (std::size_t a = 0; a < s.cone_count(); ++a) m.cone_map.push_back(a);
  return m;
}

}  // namespace limsk
