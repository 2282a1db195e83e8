#pragma once

// The free-category / underlying-graph adjunction, made concrete: graph maps
// G -> U(C) correspond to functors free(G) -> C. Free categories on graphs
// with cycles are infinite, so U(free(G)) is truncated at a path length.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "limsk/functor.hpp"
#include "limsk/graph.hpp"
#include "limsk/materialize.hpp"

namespace limsk {

struct GraphMap {
  std::vector<ObjectId> vertices;
  std::vector<EdgeId> edges;

  friend bool operator==(const GraphMap&, const GraphMap&) = default;
  friend auto operator<=>(const GraphMap&, const GraphMap&) = default;
};

inline bool is_graph_map(const Graph& a, const Graph& b, const GraphMap& m) {
  if (m.vertices.size() != a.vertex_count() || m.edges.size() != a.edge_count()) return false;
  for (ObjectId v : m.vertices) {
    if (v >= b.vertex_count()) return false;
  }
  for (EdgeId e = 0; e < a.edge_count(); ++e) {
    if (m.edges[e] >= b.edge_count()) return false;
    const auto& img = b.edges[m.edges[e]];
    if (img.src != m.vertices[a.edges[e].src] || img.tgt != m.vertices[a.edges[e].tgt]) {
      return false;
    }
  }
  return true;
}

/// Every graph map a -> b, lexicographic in (vertex images, edge images).
inline std::vector<GraphMap> enumerate_graph_maps(const Graph& a, const Graph& b) {
  std::vector<GraphMap> out;
  GraphMap m{std::vector<ObjectId>(a.vertex_count()), std::vector<EdgeId>(a.edge_count())};
  auto edges = [&](auto&& self, EdgeId e) -> void {
    if (e == a.edge_count()) {
      out.push_back(m);
      return;
    }
    for (EdgeId f = 0; f < b.edge_count(); ++f) {
      const auto& img = b.edges[f];
      if (img.src != m.vertices[a.edges[e].src] || img.tgt != m.vertices[a.edges[e].tgt]) {
        continue;
      }
      m.edges[e] = f;
      self(self, e + 1);
    }
  };
  auto vertices = [&](auto&& self, ObjectId v) -> void {
    if (v == a.vertex_count()) {
      edges(edges, 0);
      return;
    }
    for (ObjectId w = 0; w < b.vertex_count(); ++w) {
      m.vertices[v] = w;
      self(self, v + 1);
    }
  };
  vertices(vertices, 0);
  return out;
}

/// U(C): one vertex per object, one edge per morphism (edge id = morphism id).
inline Graph underlying_graph(const MaterializedCategory& c) {
  Graph g;
  for (const auto& name : c.object_names()) g.add_vertex(name);
  for (MorphismId m = 0; m < c.morphism_count(); ++m) {
    const auto& mm = c.morphism(m);
    g.add_edge("m" + std::to_string(m), mm.src, mm.tgt);
  }
  return g;
}

/// U(free(G)) restricted to paths of length <= max_len. Edge k is paths[k].
struct TruncatedFree {
  Graph graph;
  std::vector<Path> paths;

  std::optional<EdgeId> find(const Path& p) const {
    for (EdgeId k = 0; k < paths.size(); ++k) {
      if (paths[k] == p) return k;
    }
    return std::nullopt;
  }
};

inline TruncatedFree underlying_free(const Graph& g, std::size_t max_len) {
  TruncatedFree t{Graph{g.vertices, {}}, {}};
  for (ObjectId x = 0; x < g.vertex_count(); ++x) {
    for (ObjectId y = 0; y < g.vertex_count(); ++y) {
      for (auto& p : free_category_homs(g, x, y, max_len)) {
        t.graph.add_edge(to_string(g, p) + "@" + std::to_string(t.paths.size()), x, y);
        t.paths.push_back(std::move(p));
      }
    }
  }
  return t;
}

/// eta_G: e |-> the one-edge path [e].
inline GraphMap unit(const Graph& g, const TruncatedFree& ufg) {
  GraphMap m{{}, {}};
  for (ObjectId v = 0; v < g.vertex_count(); ++v) m.vertices.push_back(v);
  for (EdgeId e = 0; e < g.edge_count(); ++e) m.edges.push_back(*ufg.find(single_edge(g, e)));
  return m;
}

/// epsilon_C on a path of U(C): the composite of its morphisms.
inline MorphismId counit(const MaterializedCategory& c, const Path& p) {
  MorphismId m = c.identity(p.start);
  for (EdgeId e : p.edges) m = c.compose(e, m);
  return m;
}

/// epsilon_{free G} on a path of U(free G): concatenation of its paths.
inline Path counit(const TruncatedFree& ufg, const Path& p) {
  Path out(p.start);
  for (EdgeId e : p.edges) {
    const auto& q = ufg.paths.at(e);
    out.edges.insert(out.edges.end(), q.edges.begin(), q.edges.end());
  }
  return out;
}

/// free(m) on a path: the path of images.
inline Path free_map(const GraphMap& m, const Path& p) {
  Path out(m.vertices.at(p.start));
  for (EdgeId e : p.edges) out.edges.push_back(m.edges.at(e));
  return out;
}

/// Graph map G -> U(C) to its transpose free(G) -> C, and back.
inline CatFunctor transpose(const GraphMap& g) { return CatFunctor{g.vertices, g.edges}; }
inline GraphMap transpose(const CatFunctor& f) { return GraphMap{f.objects, f.edges}; }

}  // namespace limsk
