#pragma once

// Functors from presentations into materialized categories, their exhaustive
// enumeration, and functors between materialized categories.

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "limsk/error.hpp"
#include "limsk/materialize.hpp"
#include "limsk/presentation.hpp"

namespace limsk {

/// Functor data from a presentation into a materialized category.
struct CatFunctor {
  std::vector<ObjectId> objects;
  std::vector<MorphismId> edges;

  friend bool operator==(const CatFunctor&, const CatFunctor&) = default;
  friend auto operator<=>(const CatFunctor&, const CatFunctor&) = default;
};

inline MorphismId apply(const MaterializedCategory& d, const CatFunctor& f,
                        const Path& p) {
  MorphismId m = d.identity(f.objects.at(p.start));
  for (EdgeId e : p.edges) m = d.compose(f.edges.at(e), m);
  return m;
}

/// Typing plus every relation of `p` holding in `d`.
inline bool is_functor(const Presentation& p, const MaterializedCategory& d,
                       const CatFunctor& f) {
  if (f.objects.size() != p.object_count() || f.edges.size() != p.edge_count()) {
    return false;
  }
  for (EdgeId e = 0; e < p.edge_count(); ++e) {
    const auto& m = d.morphism(f.edges[e]);
    if (m.src != f.objects[p.edge(e).src] || m.tgt != f.objects[p.edge(e).tgt]) {
      return false;
    }
  }
  for (const auto& r : p.relations()) {
    if (apply(d, f, r.lhs) != apply(d, f, r.rhs)) return false;
  }
  return true;
}

/// Constraints for `enumerate_functors`. Unset members impose nothing.
struct FunctorSearch {
  std::vector<std::optional<ObjectId>> fixed_objects;
  std::vector<std::optional<MorphismId>> fixed_edges;
  std::function<bool(ObjectId, ObjectId)> object_ok;
  std::function<bool(EdgeId, MorphismId)> edge_ok;
  /// Each path must evaluate to the given morphism.
  std::vector<std::pair<Path, MorphismId>> path_constraints;
  /// Stop after this many results (0 = unlimited).
  std::size_t limit = 0;
};

namespace detail {

class FunctorEnumerator {
 public:
  FunctorEnumerator(const Presentation& p, const MaterializedCategory& d,
                    const FunctorSearch& s)
      : p_(p), d_(d), s_(s) {
    f_.objects.assign(p.object_count(), 0);
    f_.edges.assign(p.edge_count(), 0);
    // A relation or path constraint is checked right after the largest edge
    // it mentions is assigned; edge-free ones are checked with the objects.
    checks_at_.resize(p.edge_count() + 1);
    for (const auto& r : p.relations()) {
      checks_at_[last_edge(r.lhs, r.rhs)].push_back(Check{&r.lhs, &r.rhs, 0});
    }
    for (const auto& [path, m] : s.path_constraints) {
      checks_at_[last_edge(path, path)].push_back(Check{&path, nullptr, m});
    }
  }

  std::vector<CatFunctor> run() {
    assign_object(0);
    return std::move(out_);
  }

 private:
  struct Check {
    const Path* lhs;
    const Path* rhs;  // nullptr: compare against `morphism`
    MorphismId morphism;
  };

  // 0 means "no edges", otherwise 1 + max edge id.
  static std::size_t last_edge(const Path& a, const Path& b) {
    std::size_t k = 0;
    for (EdgeId e : a.edges) k = std::max(k, e + 1);
    for (EdgeId e : b.edges) k = std::max(k, e + 1);
    return k;
  }

  bool done() const { return s_.limit != 0 && out_.size() >= s_.limit; }

  bool checks_pass(std::size_t slot) const {
    for (const auto& c : checks_at_[slot]) {
      if (c.lhs->start >= p_.object_count()) return false;
      MorphismId a = apply(d_, f_, *c.lhs);
      MorphismId b = c.rhs ? apply(d_, f_, *c.rhs) : c.morphism;
      if (a != b) return false;
    }
    return true;
  }

  void assign_object(ObjectId x) {
    if (done()) return;
    if (x == p_.object_count()) {
      if (checks_pass(0)) assign_edge(0);
      return;
    }
    auto fixed = x < s_.fixed_objects.size() ? s_.fixed_objects[x] : std::nullopt;
    for (ObjectId y = 0; y < d_.object_count(); ++y) {
      if (fixed && *fixed != y) continue;
      if (s_.object_ok && !s_.object_ok(x, y)) continue;
      f_.objects[x] = y;
      assign_object(x + 1);
      if (done()) return;
    }
  }

  void assign_edge(EdgeId e) {
    if (done()) return;
    if (e == p_.edge_count()) {
      out_.push_back(f_);
      return;
    }
    const auto& ed = p_.edge(e);
    auto fixed = e < s_.fixed_edges.size() ? s_.fixed_edges[e] : std::nullopt;
    for (MorphismId m : d_.hom(f_.objects[ed.src], f_.objects[ed.tgt])) {
      if (fixed && *fixed != m) continue;
      if (s_.edge_ok && !s_.edge_ok(e, m)) continue;
      f_.edges[e] = m;
      if (checks_pass(e + 1)) assign_edge(e + 1);
      if (done()) return;
    }
  }

  const Presentation& p_;
  const MaterializedCategory& d_;
  const FunctorSearch& s_;
  CatFunctor f_;
  std::vector<std::vector<Check>> checks_at_;
  std::vector<CatFunctor> out_;
};

}  // namespace detail

/// Every functor from `p` into `d` meeting `search`, in lexicographic order
/// of (object images, edge images).
inline std::vector<CatFunctor> enumerate_functors(const Presentation& p,
                                                  const MaterializedCategory& d,
                                                  const FunctorSearch& search = {}) {
  return detail::FunctorEnumerator(p, d, search).run();
}

/// Functor between materialized categories.
struct MatFunctor {
  std::vector<ObjectId> objects;
  std::vector<MorphismId> morphisms;

  friend bool operator==(const MatFunctor&, const MatFunctor&) = default;
};

/// Extends functor data on generators to every morphism of `source`.
inline MatFunctor extend_to_morphisms(const MaterializedCategory& source,
                                      const MaterializedCategory& target,
                                      const CatFunctor& f) {
  MatFunctor out{f.objects, {}};
  for (const auto& m : source.morphisms()) out.morphisms.push_back(apply(target, f, m.rep));
  return out;
}

inline bool is_functor(const MaterializedCategory& a, const MaterializedCategory& b,
                       const MatFunctor& f) {
  if (f.objects.size() != a.object_count() || f.morphisms.size() != a.morphism_count()) {
    return false;
  }
  for (MorphismId m = 0; m < a.morphism_count(); ++m) {
    const auto& mm = a.morphism(m);
    const auto& img = b.morphism(f.morphisms[m]);
    if (img.src != f.objects[mm.src] || img.tgt != f.objects[mm.tgt]) return false;
  }
  for (ObjectId x = 0; x < a.object_count(); ++x) {
    if (f.morphisms[a.identity(x)] != b.identity(f.objects[x])) return false;
  }
  for (MorphismId g = 0; g < a.morphism_count(); ++g) {
    for (MorphismId h = 0; h < a.morphism_count(); ++h) {
      auto gh = a.try_compose(g, h);
      if (gh && f.morphisms[*gh] != b.compose(f.morphisms[g], f.morphisms[h])) {
        return false;
      }
    }
  }
  return true;
}

/// Functor into the category materialized from `target_pres`, read off a
/// presentation map.
inline CatFunctor to_cat_functor(const PresentationMap& m,
                                 const MaterializedCategory& target) {
  CatFunctor f{m.objects, {}};
  for (const auto& p : m.edges) f.edges.push_back(target.evaluate(p));
  return f;
}

/// Presentation map into the presentation `target` was materialized from,
/// sending each edge to the representative of its image.
inline PresentationMap to_presentation_map(const PresentationPtr& source,
                                           const MaterializedCategory& target,
                                           const CatFunctor& f) {
  PresentationMap m{source, target.presentation(), f.objects, {}};
  for (MorphismId e : f.edges) m.edges.push_back(target.morphism(e).rep);
  return m;
}

/// Functor data restricted along a presentation map `along: q -> p`.
inline CatFunctor precompose(const MaterializedCategory& d, const CatFunctor& f,
                             const PresentationMap& along) {
  CatFunctor out;
  for (ObjectId x : along.objects) out.objects.push_back(f.objects.at(x));
  for (const auto& p : along.edges) out.edges.push_back(apply(d, f, p));
  return out;
}

/// Presentation with one object and no generators.
inline PresentationPtr terminal_presentation(const std::string& name = "*") {
  Graph g;
  g.add_vertex(name);
  return share(Presentation(std::move(g), {}));
}

inline MaterializedCategory terminal_category() {
  return materialize_or_throw(terminal_presentation(), Bounds{});
}

/// The unique map from `p` to the one-object presentation `terminal`.
inline PresentationMap to_terminal(const PresentationPtr& p,
                                   const PresentationPtr& terminal) {
  PresentationMap m{p, terminal, std::vector<ObjectId>(p->object_count(), 0), {}};
  for (EdgeId e = 0; e < p->edge_count(); ++e) m.edges.emplace_back(0);
  return m;
}

/// Relation preservation of `m`, checked in the materialized target.
inline bool preserves_relations(const PresentationMap& m,
                                const MaterializedCategory& target) {
  m.require_typed();
  return is_functor(*m.source, target, to_cat_functor(m, target));
}

}  // namespace limsk
