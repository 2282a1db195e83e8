#pragma once

// Finitely presented categories, maps between them, the bounded word-problem
// search, quotients and the cell-gluing pushout.

#include <algorithm>
#include <cstddef>
#include <deque>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "limsk/error.hpp"
#include "limsk/graph.hpp"

namespace limsk {

/// An unordered pair of parallel paths. Stored with `lhs` the larger side in
/// canonical order.
struct Relation {
  Path lhs;
  Path rhs;

  friend bool operator==(const Relation&, const Relation&) = default;
};

enum class EqVerdict { Equal, Distinct, Unknown };

inline const char* to_string(EqVerdict v) {
  switch (v) {
    case EqVerdict::Equal: return "Equal";
    case EqVerdict::Distinct: return "Distinct";
    case EqVerdict::Unknown: return "Unknown";
  }
  return "?";
}

class Presentation {
 public:
  Presentation() = default;

  Presentation(Graph graph, std::vector<Relation> relations)
      : graph_(std::move(graph)) {
    graph_.validate();
    for (auto& r : relations) add_relation(std::move(r));
  }

  const Graph& graph() const noexcept { return graph_; }
  const std::vector<Relation>& relations() const noexcept { return relations_; }

  /// Generators viewed as a graph with identities.
  Gwi generators() const { return free_gwi(graph_); }

  std::size_t object_count() const noexcept { return graph_.vertex_count(); }
  std::size_t edge_count() const noexcept { return graph_.edge_count(); }
  const std::string& object_name(ObjectId x) const {
    return graph_.vertices.at(x);
  }
  const Edge& edge(EdgeId e) const { return graph_.edges.at(e); }

  ObjectId target(const Path& p) const { return path_target(graph_, p); }

  bool parallel(const Path& u, const Path& v) const {
    return is_composable(graph_, u) && is_composable(graph_, v) &&
           u.start == v.start && target(u) == target(v);
  }

  void require_parallel(const Path& u, const Path& v) const {
    if (!parallel(u, v)) {
      throw TypingError("paths " + to_string(graph_, u) + " and " +
                        to_string(graph_, v) + " are not parallel");
    }
  }

 private:
  friend Presentation quotient(const Presentation&, std::vector<Relation>);

  void add_relation(Relation r) {
    require_parallel(r.lhs, r.rhs);
    if (r.lhs == r.rhs) return;
    if (r.lhs < r.rhs) std::swap(r.lhs, r.rhs);
    if (std::find(relations_.begin(), relations_.end(), r) != relations_.end()) {
      return;
    }
    relations_.push_back(std::move(r));
  }

  Graph graph_;
  std::vector<Relation> relations_;
};

inline bool operator==(const Presentation& a, const Presentation& b) {
  return a.graph() == b.graph() && a.relations() == b.relations();
}

/// Returns `p` with `rels` added. The structure map is the identity on
/// generators (see `identity_on_generators`).
inline Presentation quotient(const Presentation& p, std::vector<Relation> rels) {
  Presentation out = p;
  for (auto& r : rels) out.add_relation(std::move(r));
  return out;
}

using PresentationPtr = std::shared_ptr<const Presentation>;

inline PresentationPtr share(Presentation p) {
  return std::make_shared<const Presentation>(std::move(p));
}

/// Functor data between two presentations: objects to objects, generating
/// edges to paths. Relation preservation is checked separately because it
/// needs a decision procedure on the target.
struct PresentationMap {
  PresentationPtr source;
  PresentationPtr target;
  std::vector<ObjectId> objects;
  std::vector<Path> edges;

  Path apply(const Path& p) const {
    Path out(objects.at(p.start));
    for (EdgeId e : p.edges) {
      const Path& img = edges.at(e);
      out.edges.insert(out.edges.end(), img.edges.begin(), img.edges.end());
    }
    return out;
  }

  /// Endpoint typing of every generator image.
  void require_typed() const {
    if (objects.size() != source->object_count() ||
        edges.size() != source->edge_count()) {
      throw TypingError("presentation map has the wrong arity");
    }
    for (ObjectId x : objects) {
      if (x >= target->object_count()) {
        throw TypingError("presentation map sends an object out of range");
      }
    }
    for (EdgeId e = 0; e < edges.size(); ++e) {
      const auto& ed = source->edge(e);
      if (!is_composable(target->graph(), edges[e]) ||
          edges[e].start != objects[ed.src] ||
          target->target(edges[e]) != objects[ed.tgt]) {
        throw TypingError("image of edge '" + ed.name + "' is mistyped");
      }
    }
  }
};

inline PresentationMap identity_map(const PresentationPtr& p) {
  PresentationMap m{p, p, {}, {}};
  for (ObjectId x = 0; x < p->object_count(); ++x) m.objects.push_back(x);
  for (EdgeId e = 0; e < p->edge_count(); ++e) {
    m.edges.push_back(single_edge(p->graph(), e));
  }
  return m;
}

/// Map sending object i to object i and edge e to edge e; `target` must
/// extend `source` (same objects first, same edges first).
inline PresentationMap identity_on_generators(const PresentationPtr& source,
                                              const PresentationPtr& target) {
  if (target->object_count() < source->object_count() ||
      target->edge_count() < source->edge_count()) {
    throw TypingError("target does not extend source");
  }
  PresentationMap m{source, target, {}, {}};
  for (ObjectId x = 0; x < source->object_count(); ++x) {
    if (source->object_name(x) != target->object_name(x)) {
      throw TypingError("target does not extend source");
    }
    m.objects.push_back(x);
  }
  for (EdgeId e = 0; e < source->edge_count(); ++e) {
    const auto& a = source->edge(e);
    const auto& b = target->edge(e);
    if (a.src != b.src || a.tgt != b.tgt) {
      throw TypingError("target does not extend source");
    }
    m.edges.push_back(single_edge(target->graph(), e));
  }
  return m;
}

/// `after . before`.
inline PresentationMap compose(const PresentationMap& after,
                               const PresentationMap& before) {
  if (before.target != after.source && *before.target != *after.source) {
    throw TypingError("presentation maps are not composable");
  }
  PresentationMap m{before.source, after.target, {}, {}};
  for (ObjectId x : before.objects) m.objects.push_back(after.objects.at(x));
  for (const auto& p : before.edges) m.edges.push_back(after.apply(p));
  return m;
}

// ---------------------------------------------------------------------------
// Bounded word problem.

namespace detail {

struct EdgeSeqHash {
  std::size_t operator()(const std::vector<EdgeId>& v) const noexcept {
    std::size_t h = v.size();
    for (EdgeId e : v) h ^= e + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

/// Calls `visit` with every path one relation application away from `p`.
template <typename Visit>
void for_each_rewrite(const Presentation& pres, const Path& p, Visit&& visit) {
  const auto& g = pres.graph();
  const auto n = p.edges.size();
  // object reached after the first k edges
  std::vector<ObjectId> at(n + 1);
  at[0] = p.start;
  for (std::size_t k = 0; k < n; ++k) at[k + 1] = g.edges[p.edges[k]].tgt;

  auto apply = [&](const Path& from, const Path& to) {
    const auto len = from.edges.size();
    if (len > n) return;
    for (std::size_t pos = 0; pos + len <= n; ++pos) {
      if (at[pos] != from.start) continue;
      if (!std::equal(from.edges.begin(), from.edges.end(),
                      p.edges.begin() + static_cast<std::ptrdiff_t>(pos))) {
        continue;
      }
      Path q(p.start);
      q.edges.reserve(n - len + to.edges.size());
      q.edges.insert(q.edges.end(), p.edges.begin(),
                     p.edges.begin() + static_cast<std::ptrdiff_t>(pos));
      q.edges.insert(q.edges.end(), to.edges.begin(), to.edges.end());
      q.edges.insert(q.edges.end(),
                     p.edges.begin() + static_cast<std::ptrdiff_t>(pos + len),
                     p.edges.end());
      visit(q);
    }
  };
  for (const auto& r : pres.relations()) {
    apply(r.lhs, r.rhs);
    apply(r.rhs, r.lhs);
  }
}

struct Exploration {
  bool found = false;
  bool truncated = false;
};

/// BFS over the rewrite component of `from` restricted to length <= bound.
inline Exploration explore_component(const Presentation& pres, const Path& from,
                                     const Path& goal, std::size_t bound) {
  Exploration out;
  std::unordered_set<std::vector<EdgeId>, EdgeSeqHash> seen{from.edges};
  std::deque<Path> queue{from};
  while (!queue.empty()) {
    Path cur = std::move(queue.front());
    queue.pop_front();
    if (cur.edges == goal.edges) {
      out.found = true;
      return out;
    }
    for_each_rewrite(pres, cur, [&](const Path& q) {
      if (q.edges.size() > bound) {
        out.truncated = true;
        return;
      }
      if (seen.insert(q.edges).second) queue.push_back(q);
    });
  }
  return out;
}

}  // namespace detail

/// Three-valued equality in the congruence generated by the relations.
/// Equal when `u` and `v` are joined by rewrites through paths of length at
/// most `bound`; Distinct when the component of either side is finite, lies
/// within the bound and misses the other; Unknown otherwise.
inline EqVerdict decide_equal(const Presentation& p, const Path& u,
                              const Path& v, std::size_t bound) {
  p.require_parallel(u, v);
  if (u == v) return EqVerdict::Equal;
  auto from_u = detail::explore_component(p, u, v, bound);
  if (from_u.found) return EqVerdict::Equal;
  if (!from_u.truncated) return EqVerdict::Distinct;
  auto from_v = detail::explore_component(p, v, u, bound);
  if (from_v.found) return EqVerdict::Equal;
  if (!from_v.truncated) return EqVerdict::Distinct;
  return EqVerdict::Unknown;
}

// ---------------------------------------------------------------------------
// Pushout along a graph inclusion.

/// `base` if unused in `taken`, otherwise `base#2`, `base#3`, ...
inline std::string fresh_name(const std::function<bool(const std::string&)>& taken,
                              const std::string& base) {
  if (!taken(base)) return base;
  for (std::size_t k = 2;; ++k) {
    std::string candidate = base + "#" + std::to_string(k);
    if (!taken(candidate)) return candidate;
  }
}

inline std::string fresh_edge_name(const Graph& g, const std::string& base) {
  return fresh_name([&](const std::string& s) { return g.find_edge(s).has_value(); },
                    base);
}

struct PushoutResult {
  PresentationPtr result;
  PresentationMap from_left;   // P1 -> result
  PresentationMap from_right;  // P2 -> result
};

/// Pushout of `left: B -> P1` and `right: B -> P2` where B and P1 are free
/// (no relations), `left` is injective on objects and sends edges to
/// distinct single edges, and `right` is bijective on objects. This is the
/// shape used to glue generators onto a presentation.
inline PushoutResult pushout(const PresentationMap& left,
                             const PresentationMap& right) {
  if (left.source != right.source && *left.source != *right.source) {
    throw UnsupportedShape("pushout legs do not share a source");
  }
  const Presentation& base = *left.source;
  const Presentation& p1 = *left.target;
  const Presentation& p2 = *right.target;
  left.require_typed();
  right.require_typed();
  if (!base.relations().empty() || !p1.relations().empty()) {
    throw UnsupportedShape("pushout: base and left target must be free");
  }
  std::vector<std::optional<ObjectId>> obj_pre(p1.object_count());
  for (ObjectId x = 0; x < base.object_count(); ++x) {
    if (obj_pre[left.objects[x]]) {
      throw UnsupportedShape("pushout: left leg is not injective on objects");
    }
    obj_pre[left.objects[x]] = x;
  }
  std::vector<std::optional<EdgeId>> edge_pre(p1.edge_count());
  for (EdgeId e = 0; e < base.edge_count(); ++e) {
    const auto& img = left.edges[e];
    if (img.length() != 1 || edge_pre[img.edges[0]]) {
      throw UnsupportedShape("pushout: left leg is not a graph inclusion");
    }
    edge_pre[img.edges[0]] = e;
  }
  if (base.object_count() != p2.object_count()) {
    throw UnsupportedShape("pushout: right leg is not bijective on objects");
  }
  std::vector<bool> hit(p2.object_count(), false);
  for (ObjectId x : right.objects) {
    if (hit[x]) {
      throw UnsupportedShape("pushout: right leg is not bijective on objects");
    }
    hit[x] = true;
  }

  Graph g = p2.graph();
  std::vector<ObjectId> left_obj(p1.object_count());
  for (ObjectId x = 0; x < p1.object_count(); ++x) {
    if (obj_pre[x]) {
      left_obj[x] = right.objects[*obj_pre[x]];
    } else {
      auto name = fresh_name(
          [&](const std::string& s) { return g.find_vertex(s).has_value(); },
          p1.object_name(x));
      left_obj[x] = g.add_vertex(std::move(name));
    }
  }
  std::vector<Path> left_edges(p1.edge_count());
  for (EdgeId e = 0; e < p1.edge_count(); ++e) {
    if (edge_pre[e]) {
      left_edges[e] = right.edges[*edge_pre[e]];
    } else {
      const auto& ed = p1.edge(e);
      auto id = g.add_edge(fresh_edge_name(g, ed.name), left_obj[ed.src],
                           left_obj[ed.tgt]);
      left_edges[e] = Path(left_obj[ed.src], {id});
    }
  }
  auto result = share(Presentation(std::move(g), p2.relations()));
  PushoutResult out{result,
                    PresentationMap{left.target, result, left_obj, left_edges},
                    identity_on_generators(right.target, result)};
  return out;
}

/// Free presentation on a graph.
inline PresentationPtr free_presentation(const Graph& g) {
  return share(Presentation(g, {}));
}

}  // namespace limsk
