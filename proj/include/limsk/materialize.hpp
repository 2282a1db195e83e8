#pragma once

// Finite realization of presentations.
//
// Hom-sets out of each object are computed by coset enumeration: a table of
// nodes (morphisms out of the source) with one successor slot per generating
// edge. Nodes are defined breadth-first, every relation is traced at every
// node and coincidences are merged. A complete table in which every relation
// holds at every node is the left-regular representation of the presented
// category, so its nodes are exactly the morphisms. Definitions are capped by
// word length and a node budget; hitting either yields Diverged.

#include <algorithm>
#include <cstddef>
#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "limsk/error.hpp"
#include "limsk/graph.hpp"
#include "limsk/presentation.hpp"

namespace limsk {

struct Bounds {
  std::size_t max_word_len = 8;
  std::size_t max_morphisms = 512;
};

using MorphismId = std::size_t;

struct Morphism {
  ObjectId src = 0;
  ObjectId tgt = 0;
  Path rep;  // shortlex-least path representing the morphism
};

namespace detail {

class CosetTable {
 public:
  static constexpr long kUndefined = -1;

  CosetTable(const Presentation& p, ObjectId source, std::size_t max_len,
             std::size_t live_budget)
      : pres_(p),
        edge_count_(p.edge_count()),
        max_len_(max_len),
        live_budget_(live_budget),
        hard_limit_(16 * live_budget + 64) {
    rels_at_.resize(p.object_count());
    for (const auto& r : p.relations()) rels_at_[r.lhs.start].push_back(&r);
    out_edges_.resize(p.object_count());
    for (EdgeId e = 0; e < edge_count_; ++e) {
      out_edges_[p.edge(e).src].push_back(e);
    }
    new_node(source, {});
  }

  /// Runs to a fixpoint. Returns true when the table is complete.
  bool run() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < obj_.size(); ++i) {
        if (!alive(i)) continue;
        changed |= process(i);
      }
      while (scan_all()) changed = true;
    }
    return complete();
  }

  bool complete() const { return !first_gap().has_value(); }

  /// First live node (in rep order) with an undefined successor, as the
  /// escaping composite rep.e.
  std::optional<Path> first_gap() const {
    std::optional<Path> best;
    for (std::size_t n = 0; n < obj_.size(); ++n) {
      if (!alive(n)) continue;
      for (EdgeId e : out_edges_[obj_[n]]) {
        if (get(n, e) != kUndefined) continue;
        Path w(source(), rep_[n]);
        w.edges.push_back(e);
        if (!best || w < *best) best = std::move(w);
        break;
      }
    }
    return best;
  }

  ObjectId source() const { return obj_[0]; }
  std::size_t node_count() const { return obj_.size(); }
  bool alive(std::size_t n) const { return parent_[n] == n; }
  ObjectId object_of(std::size_t n) const { return obj_[n]; }
  const std::vector<EdgeId>& rep(std::size_t n) const { return rep_[n]; }
  std::size_t live_count() const { return live_; }

  long get(std::size_t n, EdgeId e) const {
    long v = next_[n * edge_count_ + e];
    return v < 0 ? kUndefined : static_cast<long>(find(static_cast<std::size_t>(v)));
  }

  std::size_t find(std::size_t n) const {
    while (parent_[n] != n) n = parent_[n];
    return n;
  }

  /// Follows `edges` from node `n`; nullopt if an entry is undefined.
  std::optional<std::size_t> trace(std::size_t n,
                                   const std::vector<EdgeId>& edges) const {
    std::size_t cur = find(n);
    for (EdgeId e : edges) {
      long nx = get(cur, e);
      if (nx == kUndefined) return std::nullopt;
      cur = static_cast<std::size_t>(nx);
    }
    return cur;
  }

 private:
  std::size_t new_node(ObjectId obj, std::vector<EdgeId> rep) {
    obj_.push_back(obj);
    rep_.push_back(std::move(rep));
    parent_.push_back(obj_.size() - 1);
    next_.resize(next_.size() + edge_count_, kUndefined);
    ++live_;
    return obj_.size() - 1;
  }

  bool can_define(std::size_t n) const {
    return rep_[n].size() + 1 <= max_len_ && live_ < live_budget_ &&
           obj_.size() < hard_limit_;
  }

  std::size_t define(std::size_t n, EdgeId e) {
    auto rep = rep_[n];
    rep.push_back(e);
    std::size_t m = new_node(pres_.edge(e).tgt, std::move(rep));
    next_[n * edge_count_ + e] = static_cast<long>(m);
    return m;
  }

  std::optional<std::size_t> trace_define(std::size_t n, const Path& p,
                                          bool& defined) {
    std::size_t cur = find(n);
    for (EdgeId e : p.edges) {
      long nx = get(cur, e);
      if (nx == kUndefined) {
        if (!can_define(cur)) return std::nullopt;
        nx = static_cast<long>(define(cur, e));
        defined = true;
      }
      cur = static_cast<std::size_t>(nx);
    }
    return cur;
  }

  bool process(std::size_t i) {
    bool changed = false;
    for (const Relation* r : rels_at_[obj_[i]]) {
      if (!alive(i)) return changed;
      auto a = trace_define(i, r->lhs, changed);
      auto b = trace_define(i, r->rhs, changed);
      if (a && b && find(*a) != find(*b)) {
        coincidence(*a, *b);
        changed = true;
      }
    }
    if (!alive(i)) return changed;
    for (EdgeId e : out_edges_[obj_[i]]) {
      if (get(i, e) == kUndefined && can_define(i)) {
        define(i, e);
        changed = true;
      }
    }
    return changed;
  }

  struct Scan {
    std::size_t node;     // last node reached
    std::size_t steps;    // edges successfully followed
  };

  Scan scan(std::size_t n, const Path& p) const {
    Scan s{find(n), 0};
    for (EdgeId e : p.edges) {
      long nx = get(s.node, e);
      if (nx == kUndefined) break;
      s.node = static_cast<std::size_t>(nx);
      ++s.steps;
    }
    return s;
  }

  bool deduce(const Path& full_side, const Scan& full, const Path& short_side,
              const Scan& part) {
    if (full.steps != full_side.length()) return false;
    if (part.steps + 1 != short_side.length()) return false;
    next_[part.node * edge_count_ + short_side.edges.back()] =
        static_cast<long>(full.node);
    return true;
  }

  /// Felsch-style pass over every relation at every node: equal traces that
  /// end apart are merged, a trace one edge short of the other is completed.
  bool scan_all() {
    bool changed = false;
    for (std::size_t n = 0; n < obj_.size(); ++n) {
      if (!alive(n)) continue;
      for (const Relation* r : rels_at_[obj_[n]]) {
        if (!alive(n)) break;
        Scan a = scan(n, r->lhs);
        Scan b = scan(n, r->rhs);
        bool full_a = a.steps == r->lhs.length();
        bool full_b = b.steps == r->rhs.length();
        if (full_a && full_b) {
          if (find(a.node) != find(b.node)) {
            coincidence(a.node, b.node);
            changed = true;
          }
        } else if (deduce(r->lhs, a, r->rhs, b) || deduce(r->rhs, b, r->lhs, a)) {
          changed = true;
        }
      }
    }
    return changed;
  }

  bool rep_less(std::size_t a, std::size_t b) const {
    if (rep_[a].size() != rep_[b].size()) return rep_[a].size() < rep_[b].size();
    if (rep_[a] != rep_[b]) return rep_[a] < rep_[b];
    return a < b;
  }

  void coincidence(std::size_t a, std::size_t b) {
    std::deque<std::pair<std::size_t, std::size_t>> queue{{a, b}};
    while (!queue.empty()) {
      auto [x, y] = queue.front();
      queue.pop_front();
      x = find(x);
      y = find(y);
      if (x == y) continue;
      if (obj_[x] != obj_[y]) {
        throw Error("internal: coincidence between nodes of different objects");
      }
      std::size_t keep = rep_less(x, y) ? x : y;
      std::size_t drop = keep == x ? y : x;
      parent_[drop] = keep;
      --live_;
      for (EdgeId e = 0; e < edge_count_; ++e) {
        long d = next_[drop * edge_count_ + e];
        if (d < 0) continue;
        long k = next_[keep * edge_count_ + e];
        if (k < 0) {
          next_[keep * edge_count_ + e] = d;
        } else {
          queue.emplace_back(static_cast<std::size_t>(k),
                             static_cast<std::size_t>(d));
        }
      }
    }
  }

  const Presentation& pres_;
  std::size_t edge_count_;
  std::size_t max_len_;
  std::size_t live_budget_;
  std::size_t hard_limit_;
  std::vector<std::vector<const Relation*>> rels_at_;
  std::vector<std::vector<EdgeId>> out_edges_;

  std::vector<ObjectId> obj_;
  std::vector<std::vector<EdgeId>> rep_;
  std::vector<std::size_t> parent_;
  std::vector<long> next_;
  std::size_t live_ = 0;
};

}  // namespace detail

/// A presentation whose word problem closed: explicit morphisms and a full
/// composition table. Morphism ids follow the canonical order of their
/// representative paths.
class MaterializedCategory {
 public:
  MaterializedCategory() = default;

  /// Builds a category from explicit tables. `compose` is row-major with
  /// entry [g * n + f] = g.f or -1 when not composable.
  MaterializedCategory(std::vector<std::string> objects,
                       std::vector<Morphism> morphisms,
                       std::vector<MorphismId> identities,
                       std::vector<long> compose,
                       std::vector<MorphismId> generator_images,
                       PresentationPtr presentation)
      : objects_(std::move(objects)),
        morphisms_(std::move(morphisms)),
        identities_(std::move(identities)),
        compose_(std::move(compose)),
        generators_(std::move(generator_images)),
        presentation_(std::move(presentation)) {
    build_homs();
  }

  std::size_t object_count() const noexcept { return objects_.size(); }
  const std::vector<std::string>& object_names() const noexcept { return objects_; }
  const std::string& object_name(ObjectId x) const { return objects_.at(x); }
  std::size_t morphism_count() const noexcept { return morphisms_.size(); }
  const Morphism& morphism(MorphismId m) const { return morphisms_.at(m); }
  const std::vector<Morphism>& morphisms() const noexcept { return morphisms_; }
  MorphismId identity(ObjectId x) const { return identities_.at(x); }
  bool is_identity(MorphismId m) const {
    return identities_.at(morphisms_.at(m).src) == m;
  }

  /// `g . f`, or nullopt when tgt(f) != src(g).
  std::optional<MorphismId> try_compose(MorphismId g, MorphismId f) const {
    long v = compose_.at(g * morphisms_.size() + f);
    if (v < 0) return std::nullopt;
    return static_cast<MorphismId>(v);
  }

  MorphismId compose(MorphismId g, MorphismId f) const {
    auto v = try_compose(g, f);
    if (!v) throw TypingError("morphisms are not composable");
    return *v;
  }

  const std::vector<MorphismId>& hom(ObjectId x, ObjectId y) const {
    return homs_.at(x * objects_.size() + y);
  }

  /// Morphism named by generating edge `e` of the originating presentation.
  MorphismId generator(EdgeId e) const { return generators_.at(e); }
  std::size_t generator_count() const noexcept { return generators_.size(); }

  MorphismId evaluate(const Path& p) const {
    MorphismId m = identity(p.start);
    for (EdgeId e : p.edges) m = compose(generator(e), m);
    return m;
  }

  const PresentationPtr& presentation() const noexcept { return presentation_; }

  /// Same category with morphism ids permuted: new id of old morphism m is
  /// perm[m].
  MaterializedCategory relabeled(const std::vector<MorphismId>& perm) const {
    const auto n = morphisms_.size();
    std::vector<Morphism> ms(n);
    std::vector<long> comp(n * n, -1);
    for (MorphismId m = 0; m < n; ++m) ms[perm[m]] = morphisms_[m];
    for (MorphismId g = 0; g < n; ++g) {
      for (MorphismId f = 0; f < n; ++f) {
        long v = compose_[g * n + f];
        if (v >= 0) comp[perm[g] * n + perm[f]] = static_cast<long>(perm[v]);
      }
    }
    std::vector<MorphismId> ids, gens;
    for (auto i : identities_) ids.push_back(perm[i]);
    for (auto g : generators_) gens.push_back(perm[g]);
    return MaterializedCategory(objects_, std::move(ms), std::move(ids),
                                std::move(comp), std::move(gens), presentation_);
  }

  /// Exhaustive check of typing, associativity and unit laws.
  bool laws_hold() const {
    const auto n = morphisms_.size();
    for (MorphismId f = 0; f < n; ++f) {
      const auto& mf = morphisms_[f];
      if (compose(identity(mf.tgt), f) != f) return false;
      if (compose(f, identity(mf.src)) != f) return false;
      for (MorphismId g = 0; g < n; ++g) {
        auto gf = try_compose(g, f);
        if ((morphisms_[g].src == mf.tgt) != gf.has_value()) return false;
        if (!gf) continue;
        if (morphisms_[*gf].src != mf.src || morphisms_[*gf].tgt != morphisms_[g].tgt) {
          return false;
        }
        for (MorphismId h = 0; h < n; ++h) {
          auto hg = try_compose(h, g);
          if (!hg) continue;
          if (compose(h, *gf) != compose(*hg, f)) return false;
        }
      }
    }
    return true;
  }

 private:
  void build_homs() {
    homs_.assign(objects_.size() * objects_.size(), {});
    for (MorphismId m = 0; m < morphisms_.size(); ++m) {
      homs_[morphisms_[m].src * objects_.size() + morphisms_[m].tgt].push_back(m);
    }
  }

  std::vector<std::string> objects_;
  std::vector<Morphism> morphisms_;
  std::vector<MorphismId> identities_;
  std::vector<long> compose_;
  std::vector<MorphismId> generators_;
  std::vector<std::vector<MorphismId>> homs_;
  PresentationPtr presentation_;
};

struct Diverged {
  Path witness;  // composite that escaped the bounds
  std::string reason;
};

using MaterializeResult = std::variant<MaterializedCategory, Diverged>;

namespace detail {

/// Shortlex representatives by breadth-first search over a complete table.
inline std::vector<std::vector<EdgeId>> shortlex_reps(const CosetTable& t,
                                                     const Presentation& p) {
  std::vector<std::vector<EdgeId>> reps(t.node_count());
  std::vector<bool> seen(t.node_count(), false);
  std::deque<std::size_t> queue{t.find(0)};
  seen[t.find(0)] = true;
  while (!queue.empty()) {
    auto n = queue.front();
    queue.pop_front();
    for (EdgeId e = 0; e < p.edge_count(); ++e) {
      if (p.edge(e).src != t.object_of(n)) continue;
      auto m = static_cast<std::size_t>(t.get(n, e));
      if (seen[m]) continue;
      seen[m] = true;
      reps[m] = reps[n];
      reps[m].push_back(e);
      queue.push_back(m);
    }
  }
  return reps;
}

}  // namespace detail

inline MaterializeResult materialize(const PresentationPtr& p,
                                     const Bounds& bounds) {
  if (bounds.max_word_len < 1 || bounds.max_morphisms < 1) {
    throw PreconditionError("materialize bounds must be >= 1");
  }
  const Presentation& pres = *p;
  std::vector<detail::CosetTable> tables;
  std::size_t used = 0;
  for (ObjectId x = 0; x < pres.object_count(); ++x) {
    if (used >= bounds.max_morphisms) {
      return Diverged{Path(x), "morphism budget exhausted"};
    }
    detail::CosetTable t(pres, x, bounds.max_word_len, bounds.max_morphisms - used);
    if (!t.run()) {
      auto gap = t.first_gap();
      std::string why = t.live_count() >= bounds.max_morphisms - used
                            ? "morphism budget exhausted"
                            : "word length bound exceeded";
      return Diverged{gap.value_or(Path(x)), why};
    }
    used += t.live_count();
    tables.push_back(std::move(t));
  }

  struct Entry {
    Path rep;
    ObjectId tgt;
    std::size_t node;
  };
  std::vector<Entry> entries;
  for (ObjectId x = 0; x < pres.object_count(); ++x) {
    const auto& t = tables[x];
    auto reps = detail::shortlex_reps(t, pres);
    for (std::size_t n = 0; n < t.node_count(); ++n) {
      if (!t.alive(n)) continue;
      entries.push_back(Entry{Path(x, reps[n]), t.object_of(n), n});
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.rep < b.rep; });

  const auto n = entries.size();
  std::vector<std::vector<long>> id_of(pres.object_count());
  for (ObjectId x = 0; x < pres.object_count(); ++x) {
    id_of[x].assign(tables[x].node_count(), -1);
  }
  std::vector<Morphism> morphisms;
  for (MorphismId m = 0; m < n; ++m) {
    const auto& en = entries[m];
    id_of[en.rep.start][en.node] = static_cast<long>(m);
    morphisms.push_back(Morphism{en.rep.start, en.tgt, en.rep});
  }
  std::vector<MorphismId> identities(pres.object_count());
  for (ObjectId x = 0; x < pres.object_count(); ++x) {
    identities[x] = static_cast<MorphismId>(id_of[x][tables[x].find(0)]);
  }
  std::vector<long> comp(n * n, -1);
  for (MorphismId f = 0; f < n; ++f) {
    const auto& mf = morphisms[f];
    const auto& t = tables[mf.src];
    auto node_f = *t.trace(0, mf.rep.edges);
    for (MorphismId g = 0; g < n; ++g) {
      if (morphisms[g].src != mf.tgt) continue;
      auto node = *t.trace(node_f, morphisms[g].rep.edges);
      comp[g * n + f] = id_of[mf.src][node];
    }
  }
  std::vector<MorphismId> gens(pres.edge_count());
  for (EdgeId e = 0; e < pres.edge_count(); ++e) {
    const auto& t = tables[pres.edge(e).src];
    gens[e] = static_cast<MorphismId>(id_of[pres.edge(e).src][*t.trace(0, {e})]);
  }
  return MaterializedCategory(pres.graph().vertices, std::move(morphisms),
                              std::move(identities), std::move(comp),
                              std::move(gens), p);
}

inline const MaterializedCategory* as_category(const MaterializeResult& r) {
  return std::get_if<MaterializedCategory>(&r);
}

inline MaterializedCategory materialize_or_throw(const PresentationPtr& p,
                                                 const Bounds& bounds) {
  auto r = materialize(p, bounds);
  if (auto* d = std::get_if<Diverged>(&r)) {
    throw UndecidedError("presentation does not materialize (" + d->reason +
                         ", witness " + to_string(p->graph(), d->witness) + ")");
  }
  return std::get<MaterializedCategory>(std::move(r));
}

/// Bounded partial enumeration of an infinite presented category. Every
/// identification it reports is derivable from the relations; distinct
/// nodes may still be equal and some composites are missing.
class PartialCategory {
 public:
  PartialCategory(const PresentationPtr& p, const Bounds& bounds)
      : pres_(p) {
    std::size_t per_table =
        std::max<std::size_t>(1, bounds.max_morphisms / std::max<std::size_t>(1, p->object_count()));
    for (ObjectId x = 0; x < p->object_count(); ++x) {
      tables_.emplace_back(*p, x, bounds.max_word_len, per_table);
      tables_.back().run();
    }
  }

  struct Node {
    ObjectId src;
    std::size_t node;
    friend bool operator==(const Node&, const Node&) = default;
  };

  /// Live nodes y -> z ordered by representative.
  std::vector<Node> hom(ObjectId y, ObjectId z) const {
    const auto& t = tables_.at(y);
    std::vector<Node> out;
    for (std::size_t n = 0; n < t.node_count(); ++n) {
      if (t.alive(n) && t.object_of(n) == z) out.push_back(Node{y, n});
    }
    std::sort(out.begin(), out.end(), [&](const Node& a, const Node& b) {
      return rep(a) < rep(b);
    });
    return out;
  }

  Path rep(const Node& n) const {
    return Path(n.src, tables_.at(n.src).rep(n.node));
  }

  /// Postcomposes node `n` with path `p`; nullopt if a slot is undefined.
  std::optional<Node> then(const Node& n, const Path& p) const {
    auto r = tables_.at(n.src).trace(n.node, p.edges);
    if (!r) return std::nullopt;
    return Node{n.src, *r};
  }

  Node identity(ObjectId x) const { return Node{x, tables_.at(x).find(0)}; }

  const PresentationPtr& presentation() const noexcept { return pres_; }

 private:
  PresentationPtr pres_;
  std::vector<detail::CosetTable> tables_;
};

/// Equality oracle for paths of one presentation: exact when the
/// presentation materializes within the bounds, otherwise the bounded
/// rewrite search of decide_equal.
class WordProblem {
 public:
  WordProblem(PresentationPtr p, const Bounds& bounds)
      : pres_(std::move(p)), bound_(bounds.max_word_len) {
    auto r = materialize(pres_, bounds);
    if (auto* c = as_category(r)) category_ = std::move(*c);
  }

  EqVerdict equal(const Path& u, const Path& v) const {
    pres_->require_parallel(u, v);
    if (category_) {
      return category_->evaluate(u) == category_->evaluate(v) ? EqVerdict::Equal
                                                               : EqVerdict::Distinct;
    }
    return decide_equal(*pres_, u, v, bound_);
  }

  const std::optional<MaterializedCategory>& category() const noexcept {
    return category_;
  }
  const PresentationPtr& presentation() const noexcept { return pres_; }

 private:
  PresentationPtr pres_;
  std::size_t bound_;
  std::optional<MaterializedCategory> category_;
};

}  // namespace limsk
