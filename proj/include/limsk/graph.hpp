#pragma once

// Graphs, graphs with identities and composable paths.

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "limsk/error.hpp"

namespace limsk {

using ObjectId = std::size_t;
using EdgeId = std::size_t;

struct Edge {
  std::string name;
  ObjectId src = 0;
  ObjectId tgt = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// A finite directed multigraph. Vertices and edges are addressed by their
/// position; names are unique within each kind.
struct Graph {
  std::vector<std::string> vertices;
  std::vector<Edge> edges;

  friend bool operator==(const Graph&, const Graph&) = default;

  std::size_t vertex_count() const noexcept { return vertices.size(); }
  std::size_t edge_count() const noexcept { return edges.size(); }

  std::optional<ObjectId> find_vertex(std::string_view name) const {
    auto it = std::find(vertices.begin(), vertices.end(), name);
    if (it == vertices.end()) return std::nullopt;
    return static_cast<ObjectId>(it - vertices.begin());
  }

  std::optional<EdgeId> find_edge(std::string_view name) const {
    for (EdgeId e = 0; e < edges.size(); ++e) {
      if (edges[e].name == name) return e;
    }
    return std::nullopt;
  }

  ObjectId add_vertex(std::string name) {
    vertices.push_back(std::move(name));
    return vertices.size() - 1;
  }

  EdgeId add_edge(std::string name, ObjectId src, ObjectId tgt) {
    edges.push_back(Edge{std::move(name), src, tgt});
    return edges.size() - 1;
  }

  /// Throws ValidationError on duplicate names or dangling endpoints.
  void validate() const {
    std::unordered_set<std::string> seen;
    for (const auto& v : vertices) {
      if (!seen.insert(v).second) {
        throw ValidationError("duplicate vertex id '" + v + "'");
      }
    }
    seen.clear();
    for (const auto& e : edges) {
      if (!seen.insert(e.name).second) {
        throw ValidationError("duplicate edge id '" + e.name + "'");
      }
      if (e.src >= vertices.size() || e.tgt >= vertices.size()) {
        throw ValidationError("edge '" + e.name + "' has a dangling endpoint");
      }
    }
  }
};

/// Graph with a chosen identity loop at every vertex.
struct Gwi {
  Graph graph;
  std::vector<EdgeId> ident;

  bool is_identity(EdgeId e) const {
    return std::find(ident.begin(), ident.end(), e) != ident.end();
  }
};

/// A composable list of edges. `edges` is stored in application order: the
/// first element is applied first, so the path `g.f` is {f, g}. The empty
/// path is the identity at `start`.
struct Path {
  ObjectId start = 0;
  std::vector<EdgeId> edges;

  Path() = default;
  explicit Path(ObjectId s) : start(s) {}
  Path(ObjectId s, std::vector<EdgeId> es) : start(s), edges(std::move(es)) {}

  bool is_identity() const noexcept { return edges.empty(); }
  std::size_t length() const noexcept { return edges.size(); }

  friend bool operator==(const Path&, const Path&) = default;

  /// Canonical order: length, then start vertex, then edge ids.
  friend std::strong_ordering operator<=>(const Path& a, const Path& b) {
    if (auto c = a.edges.size() <=> b.edges.size(); c != 0) return c;
    if (auto c = a.start <=> b.start; c != 0) return c;
    return a.edges <=> b.edges;
  }
};

inline ObjectId path_target(const Graph& g, const Path& p) {
  return p.edges.empty() ? p.start : g.edges[p.edges.back()].tgt;
}

inline bool is_composable(const Graph& g, const Path& p) {
  if (p.start >= g.vertex_count()) return false;
  ObjectId at = p.start;
  for (EdgeId e : p.edges) {
    if (e >= g.edge_count() || g.edges[e].src != at) return false;
    at = g.edges[e].tgt;
  }
  return true;
}

inline void require_composable(const Graph& g, const Path& p) {
  if (!is_composable(g, p)) throw TypingError("path is not composable");
}

/// `after . before`; throws TypingError when the endpoints disagree.
inline Path concat(const Graph& g, const Path& after, const Path& before) {
  if (path_target(g, before) != after.start) {
    throw TypingError("cannot compose paths with mismatched endpoints");
  }
  Path out = before;
  out.edges.insert(out.edges.end(), after.edges.begin(), after.edges.end());
  return out;
}

inline Path single_edge(const Graph& g, EdgeId e) {
  return Path(g.edges[e].src, {e});
}

/// Free gwi: one fresh identity edge `1_v` per vertex.
inline Gwi free_gwi(const Graph& g) {
  g.validate();
  Gwi out{g, {}};
  for (ObjectId v = 0; v < g.vertex_count(); ++v) {
    std::string name = "1_" + g.vertices[v];
    if (g.find_edge(name)) {
      throw ValidationError("fresh identity edge '" + name +
                            "' collides with an existing edge");
    }
    out.ident.push_back(out.graph.add_edge(std::move(name), v, v));
  }
  return out;
}

inline Graph underlying_graph(const Gwi& g) { return g.graph; }

/// Deletes identity edges; an all-identity path becomes the empty path.
inline Path reduce_path(const Gwi& g, const Path& p) {
  require_composable(g.graph, p);
  Path out(p.start);
  for (EdgeId e : p.edges) {
    if (!g.is_identity(e)) out.edges.push_back(e);
  }
  return out;
}

/// All paths x -> y of length <= max_len in canonical order.
inline std::vector<Path> free_category_homs(const Graph& g, ObjectId x,
                                            ObjectId y, std::size_t max_len) {
  if (x >= g.vertex_count() || y >= g.vertex_count()) {
    throw ValidationError("unknown vertex");
  }
  std::vector<Path> out;
  std::vector<Path> layer{Path(x)};
  for (std::size_t len = 0;; ++len) {
    for (const auto& p : layer) {
      if (path_target(g, p) == y) out.push_back(p);
    }
    if (len == max_len) break;
    std::vector<Path> next;
    for (const auto& p : layer) {
      ObjectId at = path_target(g, p);
      for (EdgeId e = 0; e < g.edge_count(); ++e) {
        if (g.edges[e].src != at) continue;
        Path q = p;
        q.edges.push_back(e);
        next.push_back(std::move(q));
      }
    }
    if (next.empty()) break;
    layer = std::move(next);
  }
  return out;
}

namespace detail {

inline bool is_plain_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto head = static_cast<unsigned char>(s[0]);
  if (!(std::isalpha(head) || head == '_')) return false;
  for (char ch : s) {
    auto c = static_cast<unsigned char>(ch);
    if (!(std::isalnum(c) || c == '_' || c == '\'')) return false;
  }
  return s != "id" && s != "object" && s != "edge" && s != "relation" &&
         s != "cone" && s != "at" && s != "over" && s != "legs";
}

}  // namespace detail

/// Name as it appears in DSL text: plain identifiers verbatim, else quoted.
inline std::string dsl_name(std::string_view s) {
  if (detail::is_plain_identifier(s)) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

/// Right-to-left dotted notation: {f, g} prints as `g.f`, identity as `id(x)`.
inline std::string to_string(const Graph& g, const Path& p) {
  if (p.edges.empty()) return "id(" + dsl_name(g.vertices.at(p.start)) + ")";
  std::string out;
  for (auto it = p.edges.rbegin(); it != p.edges.rend(); ++it) {
    if (!out.empty()) out += '.';
    out += dsl_name(g.edges.at(*it).name);
  }
  return out;
}

}  // namespace limsk
