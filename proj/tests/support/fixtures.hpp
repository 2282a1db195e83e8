#pragma once

#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "limsk/limsk.hpp"

namespace fixtures {

using namespace limsk;

inline std::string sketch_path(const std::string& name) {
  return std::string(LIMSK_SKETCH_DIR) + "/" + name;
}

inline SketchDocument load(const std::string& name) {
  std::ifstream in(sketch_path(name));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_sketch(ss.str());
}

inline LimitSketch term2() { return load("term2.sk").sketch; }
inline LimitSketch term1() { return load("term1.sk").sketch; }
inline LimitSketch prod() { return load("prod.sk").sketch; }
inline LimitSketch sq() { return load("sq.sk").sketch; }

/// Builds a presentation from object names, (name, src, tgt) edges and
/// relations written in the DSL path syntax.
inline PresentationPtr presentation(const std::vector<std::string>& objects,
                                    const std::vector<std::tuple<std::string, std::string, std::string>>& edges,
                                    const std::vector<std::pair<std::string, std::string>>& relations = {}) {
  std::ostringstream os;
  for (const auto& o : objects) os << "object " << o << ";\n";
  for (const auto& [n, s, t] : edges) os << "edge " << n << ": " << s << " -> " << t << ";\n";
  for (const auto& [l, r] : relations) os << "relation " << l << " = " << r << ";\n";
  return parse_sketch(os.str()).sketch.base();
}

/// A path of `p` in the DSL notation: `g.f` or `id(x)`.
inline Path path(const Presentation& p, const std::string& text) {
  const auto& g = p.graph();
  if (text.rfind("id(", 0) == 0) {
    return Path(*g.find_vertex(text.substr(3, text.size() - 4)));
  }
  std::vector<EdgeId> written;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, '.')) written.push_back(*g.find_edge(part));
  return Path(g.edges[written.back()].src, {written.rbegin(), written.rend()});
}

inline PresentationPtr commuting_square() {
  return presentation({"a", "b", "c", "d"},
                      {{"f", "a", "b"}, {"g", "b", "d"}, {"h", "a", "c"}, {"k", "c", "d"}},
                      {{"g.f", "k.h"}});
}

inline PresentationPtr loop() { return presentation({"v"}, {{"e", "v", "v"}}); }
inline PresentationPtr parallel_pair() {
  return presentation({"a", "b"}, {{"f", "a", "b"}, {"g", "a", "b"}});
}

inline CategoryPtr category(const PresentationPtr& p) {
  return std::make_shared<const MaterializedCategory>(materialize_or_throw(p, Bounds{}));
}

struct NamedCategory {
  std::string name;
  CategoryPtr category;
};

/// Hand-picked finite categories used as targets for universal-property checks.
inline std::vector<NamedCategory> named_pool() {
  std::vector<NamedCategory> out;
  out.push_back({"terminal", category(presentation({"x"}, {}))});
  out.push_back({"discrete2", category(presentation({"x", "y"}, {}))});
  out.push_back({"arrow", category(presentation({"x", "y"}, {{"f", "x", "y"}}))});
  out.push_back({"parallel", category(parallel_pair())});
  out.push_back({"idempotent", category(presentation({"x"}, {{"e", "x", "x"}}, {{"e.e", "e"}}))});
  out.push_back({"z2", category(presentation({"x"}, {{"s", "x", "x"}}, {{"s.s", "id(x)"}}))});
  out.push_back({"iso", category(presentation({"x", "y"}, {{"f", "x", "y"}, {"g", "y", "x"}},
                                              {{"g.f", "id(x)"}, {"f.g", "id(y)"}}))});
  out.push_back({"prod_base", category(prod().base())});
  out.push_back({"term2_realized", realize(term2()).category});
  out.push_back({"prod_realized", realize(prod()).category});
  out.push_back({"sq_realized", realize(sq()).category});
  out.push_back({"span", category(presentation({"x", "y", "z"}, {{"f", "x", "y"}, {"g", "x", "z"}}))});
  return out;
}

/// Every graph with at most 2 vertices and at most 2 edges, up to edge order.
inline std::vector<Graph> small_graphs() {
  std::vector<Graph> out;
  for (std::size_t nv = 0; nv <= 2; ++nv) {
    std::vector<std::pair<ObjectId, ObjectId>> ends;
    for (ObjectId s = 0; s < nv; ++s) {
      for (ObjectId t = 0; t < nv; ++t) ends.emplace_back(s, t);
    }
    auto make = [&](const std::vector<std::pair<ObjectId, ObjectId>>& es) {
      Graph g;
      for (std::size_t v = 0; v < nv; ++v) g.add_vertex(v == 0 ? "x" : "y");
      for (std::size_t k = 0; k < es.size(); ++k) {
        g.add_edge(k == 0 ? "e" : "f", es[k].first, es[k].second);
      }
      out.push_back(std::move(g));
    };
    make({});
    for (std::size_t i = 0; i < ends.size(); ++i) {
      make({ends[i]});
      for (std::size_t j = i; j < ends.size(); ++j) make({ends[i], ends[j]});
    }
  }
  return out;
}

/// Finite categories presented on the small graphs with at most one
/// relation between parallel paths of length <= 2, kept when they have at
/// most `max_morphisms` morphisms.
inline std::vector<NamedCategory> generated_pool(std::size_t max_morphisms) {
  std::vector<NamedCategory> out;
  Bounds b{6, 64};
  for (const auto& g : small_graphs()) {
    std::vector<Relation> rels;
    for (ObjectId x = 0; x < g.vertex_count(); ++x) {
      for (ObjectId y = 0; y < g.vertex_count(); ++y) {
        auto paths = free_category_homs(g, x, y, 2);
        for (std::size_t i = 0; i < paths.size(); ++i) {
          for (std::size_t j = 0; j < i; ++j) rels.push_back(Relation{paths[i], paths[j]});
        }
      }
    }
    std::vector<std::vector<Relation>> choices{{}};
    for (const auto& r : rels) choices.push_back({r});
    for (const auto& rs : choices) {
      auto p = share(Presentation(g, rs));
      auto m = materialize(p, b);
      const auto* c = as_category(m);
      if (!c || c->morphism_count() > max_morphisms) continue;
      std::string name = print_presentation(*p);
      out.push_back({name, std::make_shared<const MaterializedCategory>(*c)});
    }
  }
  return out;
}

inline std::vector<NamedCategory> pool(std::size_t max_morphisms) {
  std::vector<NamedCategory> out;
  for (auto& c : named_pool()) {
    if (c.category->morphism_count() <= max_morphisms) out.push_back(std::move(c));
  }
  for (auto& c : generated_pool(max_morphisms)) out.push_back(std::move(c));
  return out;
}

}  // namespace fixtures
