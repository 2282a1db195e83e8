#pragma once

// Text format for limit sketches (.sk files).
//
//   object p;
//   object a;
//   edge pi1: p -> a;
//   relation g.f = h;              # paths read right to left; id(x) for identities
//   cone prod at p over {
//     i: a;                        # index object and its diagram object
//     j: a;
//     u: i -> j = f;               # index arrow and its diagram image
//     relation u.v = w;            # relation among index arrows
//   } legs { i: pi1, j: pi2 };
//   cone term at t over {};
//
// Trivial cones are never written; the parser inserts them.

#include <cctype>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "limsk/error.hpp"
#include "limsk/graph.hpp"
#include "limsk/materialize.hpp"
#include "limsk/presentation.hpp"
#include "limsk/sketch.hpp"

namespace limsk {

struct SketchDocument {
  std::string source;
  LimitSketch sketch;
  std::map<std::string, ObjectId> objects;
  std::map<std::string, EdgeId> edges;
  std::map<std::string, std::size_t> cones;
};

namespace detail {

struct Token {
  enum class Kind { Name, Quoted, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : s_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      Token t;
      t.line = line_;
      t.column = col_;
      if (i_ >= s_.size()) {
        out.push_back(t);
        return out;
      }
      char c = s_[i_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Token::Kind::Name;
        while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) ||
                                  s_[i_] == '_' || s_[i_] == '\'')) {
          t.text += s_[i_];
          advance();
        }
      } else if (c == '"') {
        t.kind = Token::Kind::Quoted;
        advance();
        while (true) {
          if (i_ >= s_.size() || s_[i_] == '\n') {
            throw ParseError(t.line, t.column, "unterminated quoted name");
          }
          if (s_[i_] == '"') break;
          if (s_[i_] == '\\' && i_ + 1 < s_.size()) advance();
          t.text += s_[i_];
          advance();
        }
        advance();
      } else if (c == '-' && i_ + 1 < s_.size() && s_[i_ + 1] == '>') {
        t.kind = Token::Kind::Punct;
        t.text = "->";
        advance();
        advance();
      } else if (std::string_view(";:.=,{}()").find(c) != std::string_view::npos) {
        t.kind = Token::Kind::Punct;
        t.text = std::string(1, c);
        advance();
      } else {
        throw ParseError(t.line, t.column, std::string("unexpected character '") + c + "'");
      }
      out.push_back(std::move(t));
    }
  }

 private:
  void advance() {
    if (s_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  void skip_space() {
    while (i_ < s_.size()) {
      char c = s_[i_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '#' || (c == '/' && i_ + 1 < s_.size() && s_[i_ + 1] == '/')) {
        while (i_ < s_.size() && s_[i_] != '\n') advance();
      } else {
        return;
      }
    }
  }

  const std::string& s_;
  std::size_t i_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

class Parser {
 public:
  Parser(const std::string& text, const Bounds& bounds)
      : toks_(Lexer(text).run()), bounds_(bounds) {}

  SketchDocument run(const std::string& text) {
    while (peek().kind != Token::Kind::End) statement();
    auto pres = share(Presentation(graph_, relations_));
    std::vector<Cone> cones;
    for (auto& pc : pending_) cones.push_back(pc.cone);
    WordProblem wp(pres, bounds_);
    for (std::size_t k = 0; k < pending_.size(); ++k) {
      try {
        validate_cone(wp, pending_[k].cone);
      } catch (const ValidationError& e) {
        fail(pending_[k].at, e.what());
      }
    }
    SketchDocument doc{text, make_sketch(pres, std::move(cones), bounds_), {}, {}, {}};
    for (ObjectId x = 0; x < graph_.vertex_count(); ++x) doc.objects[graph_.vertices[x]] = x;
    for (EdgeId e = 0; e < graph_.edge_count(); ++e) doc.edges[graph_.edges[e].name] = e;
    for (std::size_t a = 0; a < doc.sketch.cone_count(); ++a) {
      if (!doc.sketch.cone(a).implicit) doc.cones[doc.sketch.cone(a).name] = a;
    }
    return doc;
  }

 private:
  struct PendingCone {
    Token at;
    Cone cone;
  };

  [[noreturn]] static void fail(const Token& t, const std::string& msg) {
    throw ParseError(t.line, t.column, msg);
  }

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }

  Token next() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }

  static std::string describe(const Token& t) {
    switch (t.kind) {
      case Token::Kind::End: return "end of input";
      case Token::Kind::Quoted: return "\"" + t.text + "\"";
      default: return "'" + t.text + "'";
    }
  }

  bool at_punct(const char* p) const {
    return peek().kind == Token::Kind::Punct && peek().text == p;
  }
  bool at_keyword(const char* k) const {
    return peek().kind == Token::Kind::Name && peek().text == k;
  }

  Token expect_punct(const char* p) {
    if (!at_punct(p)) fail(peek(), std::string("expected '") + p + "', found " + describe(peek()));
    return next();
  }
  void expect_keyword(const char* k) {
    if (!at_keyword(k)) fail(peek(), std::string("expected '") + k + "', found " + describe(peek()));
    next();
  }

  Token name() {
    const Token& t = peek();
    if (t.kind == Token::Kind::Quoted) return next();
    if (t.kind == Token::Kind::Name && is_plain_identifier(t.text)) return next();
    fail(t, "expected a name, found " + describe(t));
  }

  void statement() {
    if (at_keyword("object")) {
      next();
      Token n = name();
      if (graph_.find_vertex(n.text)) fail(n, "duplicate object " + n.text);
      graph_.add_vertex(n.text);
      expect_punct(";");
    } else if (at_keyword("edge")) {
      next();
      Token n = name();
      if (graph_.find_edge(n.text)) fail(n, "duplicate edge " + n.text);
      expect_punct(":");
      ObjectId s = object_ref(graph_);
      expect_punct("->");
      ObjectId t = object_ref(graph_);
      expect_punct(";");
      graph_.add_edge(n.text, s, t);
    } else if (at_keyword("relation")) {
      Token at = next();
      Path lhs = path(graph_);
      expect_punct("=");
      Path rhs = path(graph_);
      expect_punct(";");
      if (path_target(graph_, lhs) != path_target(graph_, rhs) || lhs.start != rhs.start) {
        fail(at, "relation sides are not parallel: " + to_string(graph_, lhs) + " = " +
                     to_string(graph_, rhs));
      }
      relations_.push_back(Relation{lhs, rhs});
    } else if (at_keyword("cone")) {
      cone();
    } else {
      fail(peek(), "expected 'object', 'edge', 'relation' or 'cone', found " + describe(peek()));
    }
  }

  static ObjectId lookup_object(const Graph& g, const Token& t) {
    auto x = g.find_vertex(t.text);
    if (!x) fail(t, "unknown object " + t.text);
    return *x;
  }

  ObjectId object_ref(const Graph& g) { return lookup_object(g, name()); }

  /// `id(x)` or `e_n. ... .e_1`, stored in application order.
  Path path(const Graph& g) {
    const Token& first = peek();
    if (at_keyword("id") && peek(1).kind == Token::Kind::Punct && peek(1).text == "(") {
      next();
      next();
      ObjectId x = object_ref(g);
      expect_punct(")");
      return Path(x);
    }
    std::vector<EdgeId> written;
    while (true) {
      Token n = name();
      auto e = g.find_edge(n.text);
      if (!e) fail(n, "unknown edge " + n.text);
      written.push_back(*e);
      if (!at_punct(".")) break;
      next();
    }
    Path p(g.edges[written.back()].src, {written.rbegin(), written.rend()});
    if (!is_composable(g, p)) fail(first, "path " + to_string(g, p) + " is not composable");
    return p;
  }

  void cone() {
    Token at = next();
    Token n = name();
    for (const auto& pc : pending_) {
      if (pc.cone.name == n.text) fail(n, "duplicate cone " + n.text);
    }
    if (n.text.size() >= 2 && n.text.front() == '<' && n.text.back() == '>') {
      fail(n, "cone names of the form <x> are reserved");
    }
    expect_keyword("at");
    ObjectId apex = object_ref(graph_);
    expect_keyword("over");
    expect_punct("{");
    Graph ig;
    std::vector<ObjectId> dobjs;
    std::vector<Path> darrows;
    std::vector<Relation> irels;
    while (!at_punct("}")) {
      if (at_keyword("relation") && !(peek(1).kind == Token::Kind::Punct && peek(1).text == ":")) {
        Token rat = next();
        Path lhs = path(ig);
        expect_punct("=");
        Path rhs = path(ig);
        expect_punct(";");
        if (path_target(ig, lhs) != path_target(ig, rhs) || lhs.start != rhs.start) {
          fail(rat, "index relation sides are not parallel");
        }
        irels.push_back(Relation{lhs, rhs});
        continue;
      }
      Token item = name();
      expect_punct(":");
      if (peek(1).kind == Token::Kind::Punct && peek(1).text == "->") {
        if (ig.find_edge(item.text)) fail(item, "duplicate index arrow " + item.text);
        ObjectId s = object_ref(ig);
        expect_punct("->");
        ObjectId t = object_ref(ig);
        expect_punct("=");
        Token img_at = peek();
        Path img = path(graph_);
        expect_punct(";");
        if (img.start != dobjs[s] || path_target(graph_, img) != dobjs[t]) {
          fail(img_at, "image of index arrow " + item.text + " has the wrong endpoints");
        }
        ig.add_edge(item.text, s, t);
        darrows.push_back(img);
      } else {
        if (ig.find_vertex(item.text)) fail(item, "duplicate index object " + item.text);
        ObjectId x = object_ref(graph_);
        expect_punct(";");
        ig.add_vertex(item.text);
        dobjs.push_back(x);
      }
    }
    Token close = expect_punct("}");
    auto ip = share(Presentation(ig, irels));
    auto ir = materialize(ip, bounds_);
    const auto* idx = as_category(ir);
    if (!idx) fail(close, "index category of cone " + n.text + " is not finite within bounds");
    std::vector<std::optional<Path>> legs(ig.vertex_count());
    if (at_keyword("legs")) {
      next();
      expect_punct("{");
      while (!at_punct("}")) {
        Token i = name();
        auto x = ig.find_vertex(i.text);
        if (!x) fail(i, "unknown index object " + i.text);
        if (legs[*x]) fail(i, "duplicate leg " + i.text);
        expect_punct(":");
        legs[*x] = path(graph_);
        if (!at_punct(",")) break;
        next();
      }
      expect_punct("}");
    }
    Token end = expect_punct(";");
    Cone c{n.text, apex, std::make_shared<const MaterializedCategory>(*idx), dobjs, darrows, {}};
    for (ObjectId i = 0; i < legs.size(); ++i) {
      if (!legs[i]) fail(end, "cone " + n.text + " has no leg for index object " + ig.vertices[i]);
      c.legs.push_back(*legs[i]);
    }
    pending_.push_back(PendingCone{at, std::move(c)});
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Bounds bounds_;
  Graph graph_;
  std::vector<Relation> relations_;
  std::vector<PendingCone> pending_;
};

}  // namespace detail

inline SketchDocument parse_sketch(const std::string& text, const Bounds& bounds = {}) {
  return detail::Parser(text, bounds).run(text);
}

inline std::string print_presentation(const Presentation& p) {
  std::ostringstream os;
  const auto& g = p.graph();
  for (const auto& v : g.vertices) os << "object " << dsl_name(v) << ";\n";
  for (const auto& e : g.edges) {
    os << "edge " << dsl_name(e.name) << ": " << dsl_name(g.vertices[e.src]) << " -> "
       << dsl_name(g.vertices[e.tgt]) << ";\n";
  }
  for (const auto& r : p.relations()) {
    os << "relation " << to_string(g, r.lhs) << " = " << to_string(g, r.rhs) << ";\n";
  }
  return os.str();
}

inline std::string print_sketch(const LimitSketch& s) {
  std::ostringstream os;
  os << print_presentation(*s.base());
  const auto& g = s.base()->graph();
  for (const auto& c : s.cones()) {
    if (c.implicit) continue;
    const auto& ig = c.index->presentation()->graph();
    os << "cone " << dsl_name(c.name) << " at " << dsl_name(g.vertices[c.apex]) << " over {";
    if (ig.vertex_count() == 0) {
      os << "};\n";
      continue;
    }
    os << "\n";
    for (ObjectId i = 0; i < ig.vertex_count(); ++i) {
      os << "  " << dsl_name(ig.vertices[i]) << ": " << dsl_name(g.vertices[c.diagram_objects[i]])
         << ";\n";
    }
    for (EdgeId a = 0; a < ig.edge_count(); ++a) {
      const auto& e = ig.edges[a];
      os << "  " << dsl_name(e.name) << ": " << dsl_name(ig.vertices[e.src]) << " -> "
         << dsl_name(ig.vertices[e.tgt]) << " = " << to_string(g, c.diagram_arrows[a]) << ";\n";
    }
    for (const auto& r : c.index->presentation()->relations()) {
      os << "  relation " << to_string(ig, r.lhs) << " = " << to_string(ig, r.rhs) << ";\n";
    }
    os << "} legs { ";
    for (ObjectId i = 0; i < ig.vertex_count(); ++i) {
      os << (i ? ", " : "") << dsl_name(ig.vertices[i]) << ": " << to_string(g, c.legs[i]);
    }
    os << " };\n";
  }
  return os.str();
}

}  // namespace limsk
