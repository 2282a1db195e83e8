#pragma once

// Finite-set models of limit sketches. A carrier of size k is the set
// {0, ..., k-1}; an edge acts by a function table.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "limsk/error.hpp"
#include "limsk/factorization.hpp"
#include "limsk/materialize.hpp"
#include "limsk/presentation.hpp"
#include "limsk/sketch.hpp"

namespace limsk {

using Function = std::vector<std::size_t>;

struct Model {
  std::vector<std::size_t> carrier;  // size per object
  std::vector<Function> action;      // table per generating edge

  friend bool operator==(const Model&, const Model&) = default;
  friend auto operator<=>(const Model&, const Model&) = default;
};

inline void require_typed(const Presentation& p, const Model& m) {
  if (m.carrier.size() != p.object_count() || m.action.size() != p.edge_count()) {
    throw TypingError("model has wrong number of carriers or actions");
  }
  for (EdgeId e = 0; e < p.edge_count(); ++e) {
    const auto& ed = p.edge(e);
    const auto& f = m.action[e];
    if (f.size() != m.carrier[ed.src]) {
      throw TypingError("action of '" + ed.name + "' has the wrong domain");
    }
    for (auto v : f) {
      if (v >= m.carrier[ed.tgt]) {
        throw TypingError("action of '" + ed.name + "' leaves its codomain");
      }
    }
  }
}

/// The function a path acts by.
inline Function act(const Model& m, const Path& p) {
  Function f(m.carrier.at(p.start));
  for (std::size_t x = 0; x < f.size(); ++x) {
    std::size_t v = x;
    for (EdgeId e : p.edges) v = m.action.at(e).at(v);
    f[x] = v;
  }
  return f;
}

inline bool relations_hold(const Presentation& p, const Model& m) {
  for (const auto& r : p.relations()) {
    if (act(m, r.lhs) != act(m, r.rhs)) return false;
  }
  return true;
}

/// Compatible tuples over the index objects of `c`.
inline std::vector<std::vector<std::size_t>> limit_tuples(const Model& m, const Cone& c) {
  const auto& idx = *c.index;
  std::vector<Function> arrows;
  for (MorphismId f = 0; f < idx.morphism_count(); ++f) arrows.push_back(act(m, c.diagram(f)));
  std::vector<std::vector<MorphismId>> checks(idx.object_count());
  for (MorphismId f = 0; f < idx.morphism_count(); ++f) {
    const auto& mf = idx.morphism(f);
    checks[std::max(mf.src, mf.tgt)].push_back(f);
  }
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> t(idx.object_count());
  auto rec = [&](auto&& self, ObjectId i) -> void {
    if (i == idx.object_count()) {
      out.push_back(t);
      return;
    }
    for (std::size_t v = 0; v < m.carrier[c.diagram_objects[i]]; ++v) {
      t[i] = v;
      bool ok = true;
      for (MorphismId f : checks[i]) {
        const auto& mf = idx.morphism(f);
        if (arrows[f][t[mf.src]] != t[mf.tgt]) {
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

inline bool sends_to_limit(const Model& m, const Cone& c) {
  auto tuples = limit_tuples(m, c);
  const std::size_t n = m.carrier[c.apex];
  if (tuples.size() != n) return false;
  std::vector<Function> legs;
  for (const auto& l : c.legs) legs.push_back(act(m, l));
  std::vector<std::vector<std::size_t>> images;
  for (std::size_t x = 0; x < n; ++x) {
    std::vector<std::size_t> t;
    for (const auto& l : legs) t.push_back(l[x]);
    images.push_back(std::move(t));
  }
  std::sort(images.begin(), images.end());
  return images == tuples;  // tuples come out in lexicographic order
}

inline bool is_model(const LimitSketch& s, const Model& m) {
  require_typed(*s.base(), m);
  if (!relations_hold(*s.base(), m)) return false;
  for (const auto& c : s.cones()) {
    if (!sends_to_limit(m, c)) return false;
  }
  return true;
}

namespace detail {

inline std::size_t last_edge_slot(const Relation& r) {
  std::size_t k = 0;
  for (EdgeId e : r.lhs.edges) k = std::max(k, e + 1);
  for (EdgeId e : r.rhs.edges) k = std::max(k, e + 1);
  return k;
}

}  // namespace detail

/// Every model with carriers of size at most `max_size`, ordered by the
/// carrier sizes and then by the function tables, lexicographically.
inline std::vector<Model> enumerate_models(const LimitSketch& s, std::size_t max_size) {
  const auto& p = *s.base();
  std::vector<std::vector<const Relation*>> checks(p.edge_count() + 1);
  for (const auto& r : p.relations()) checks[detail::last_edge_slot(r)].push_back(&r);
  std::vector<Model> out;
  Model m{std::vector<std::size_t>(p.object_count(), 0), std::vector<Function>(p.edge_count())};
  auto checks_pass = [&](std::size_t slot) {
    for (const auto* r : checks[slot]) {
      if (act(m, r->lhs) != act(m, r->rhs)) return false;
    }
    return true;
  };
  auto edges = [&](auto&& self, EdgeId e) -> void {
    if (e == p.edge_count()) {
      bool ok = true;
      for (const auto& c : s.cones()) {
        if (!sends_to_limit(m, c)) {
          ok = false;
          break;
        }
      }
      if (ok) out.push_back(m);
      return;
    }
    const auto& ed = p.edge(e);
    const std::size_t dom = m.carrier[ed.src];
    const std::size_t cod = m.carrier[ed.tgt];
    if (dom > 0 && cod == 0) return;
    Function f(dom, 0);
    while (true) {
      m.action[e] = f;
      if (checks_pass(e + 1)) self(self, e + 1);
      // next table, last entry fastest
      std::size_t k = dom;
      while (k > 0 && f[k - 1] + 1 == cod) f[--k] = 0;
      if (k == 0) break;
      ++f[k - 1];
    }
  };
  auto sizes = [&](auto&& self, ObjectId x) -> void {
    if (x == p.object_count()) {
      if (checks_pass(0)) edges(edges, 0);
      return;
    }
    for (std::size_t k = 0; k <= max_size; ++k) {
      m.carrier[x] = k;
      self(self, x + 1);
    }
  };
  sizes(sizes, 0);
  return out;
}

/// Model of `along.source` obtained by precomposing with `along`.
inline Model restrict_model(const Model& m, const PresentationMap& along) {
  Model out;
  for (ObjectId x : along.objects) out.carrier.push_back(m.carrier.at(x));
  for (const auto& p : along.edges) out.action.push_back(act(m, p));
  return out;
}

/// Restriction of a model of fibr(E) along the unit.
inline Model transport_model(const RealizationResult& r, const Model& x) {
  detail::require_stabilized(r);
  require_typed(*r.realized.base(), x);
  return restrict_model(x, r.unit.functor);
}

/// The unique model of fibr(E) restricting to `x`, by replaying the trace.
inline Model lift_model(const RealizationResult& r, const Model& x) {
  detail::require_stabilized(r);
  const auto& E = r.original;
  if (!is_model(E, x)) throw PreconditionError("not a model of the original sketch");
  Model out = x;
  for (const auto& ev : r.trace) {
    if (const auto* a = std::get_if<AttachEvent>(&ev)) {
      const Cone& cone = E.cone(a->alpha);
      std::vector<Function> kappa, legs;
      for (const auto& k : a->legs) kappa.push_back(act(out, k));
      for (const auto& l : cone.legs) legs.push_back(act(out, l));
      Function h(out.carrier[a->y]);
      for (std::size_t v = 0; v < h.size(); ++v) {
        std::optional<std::size_t> found;
        for (std::size_t w = 0; w < out.carrier[cone.apex]; ++w) {
          bool ok = true;
          for (std::size_t i = 0; i < legs.size() && ok; ++i) ok = legs[i][w] == kappa[i][v];
          if (ok) {
            if (found) throw Error("internal: several limit-induced values");
            found = w;
          }
        }
        if (!found) throw Error("internal: no limit-induced value");
        h[v] = *found;
      }
      if (out.action.size() != a->filler) throw Error("internal: trace out of order");
      out.action.push_back(std::move(h));
    } else {
      const auto& id = std::get<IdentifyEvent>(ev);
      if (act(out, id.later) != act(out, id.earliest)) {
        throw Error("internal: lifted model breaks an identification");
      }
    }
  }
  if (!is_model(r.realized, out)) throw Error("internal: lifted model is not a model");
  return out;
}

/// Hom(l, -) as a model; nullopt when the base does not materialize.
inline std::optional<Model> yoneda_model(const LimitSketch& s, ObjectId l,
                                         const Bounds& bounds = {}) {
  auto r = materialize(s.base(), bounds);
  const auto* c = as_category(r);
  if (!c) return std::nullopt;
  if (l >= c->object_count()) throw ValidationError("unknown object for the hom model");
  const auto& p = *s.base();
  Model m;
  for (ObjectId x = 0; x < p.object_count(); ++x) m.carrier.push_back(c->hom(l, x).size());
  for (EdgeId e = 0; e < p.edge_count(); ++e) {
    const auto& from = c->hom(l, p.edge(e).src);
    const auto& to = c->hom(l, p.edge(e).tgt);
    Function f;
    for (MorphismId k : from) {
      auto img = c->compose(c->generator(e), k);
      f.push_back(static_cast<std::size_t>(std::find(to.begin(), to.end(), img) - to.begin()));
    }
    m.action.push_back(std::move(f));
  }
  return m;
}

struct ModelBijectionReport {
  std::vector<Model> models_E;
  std::vector<Model> models_freeE;
  std::vector<std::size_t> pairing;  // models_freeE[k] restricts to models_E[pairing[k]]
  bool bijective = false;
  bool round_trips = false;
};

inline ModelBijectionReport model_bijection(const RealizationResult& r, std::size_t max_size) {
  detail::require_stabilized(r);
  ModelBijectionReport rep;
  rep.models_E = enumerate_models(r.original, max_size);
  rep.models_freeE = enumerate_models(r.realized, max_size);
  std::vector<bool> hit(rep.models_E.size(), false);
  bool injective = true;
  for (const auto& m : rep.models_freeE) {
    auto t = transport_model(r, m);
    auto it = std::find(rep.models_E.begin(), rep.models_E.end(), t);
    if (it == rep.models_E.end()) throw Error("internal: transported model is not listed");
    auto k = static_cast<std::size_t>(it - rep.models_E.begin());
    if (hit[k]) injective = false;
    hit[k] = true;
    rep.pairing.push_back(k);
  }
  rep.bijective = injective && std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
  rep.round_trips = true;
  for (std::size_t k = 0; k < rep.models_freeE.size(); ++k) {
    if (lift_model(r, rep.models_E[rep.pairing[k]]) != rep.models_freeE[k]) rep.round_trips = false;
  }
  for (const auto& m : rep.models_E) {
    if (transport_model(r, lift_model(r, m)) != m) rep.round_trips = false;
  }
  return rep;
}

}  // namespace limsk
