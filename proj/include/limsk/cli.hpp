#pragma once

// Command-line front end. run_command takes the arguments after the program
// name and returns the exit code: 0 on success (including a "false" answer),
// 1 when the answer is Unknown or a realization ran out of budget, 2 on
// errors.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstddef>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "limsk/cells.hpp"
#include "limsk/dsl.hpp"
#include "limsk/error.hpp"
#include "limsk/factorization.hpp"
#include "limsk/functor.hpp"
#include "limsk/materialize.hpp"
#include "limsk/models.hpp"
#include "limsk/sketch.hpp"

namespace limsk {
namespace cli {

using Json = nlohmann::json;

struct Options {
  std::string file;
  std::size_t max_iter = 16;
  std::size_t max_word_len = 8;
  std::size_t max_morphisms = 512;
  std::size_t max_size = 2;
  bool include_trivial = false;
  std::string format = "human";
  std::string trace_file;
  std::string emit_file;
  std::string from, to, object;

  Bounds bounds() const { return Bounds{max_word_len, max_morphisms}; }
  bool structured() const { return format == "structured"; }
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Json to_json(const Presentation& p, const Path& path) {
  return to_string(p.graph(), path);
}

inline Json category_json(const MaterializedCategory& c) {
  Json homs = Json::array();
  for (ObjectId x = 0; x < c.object_count(); ++x) {
    for (ObjectId y = 0; y < c.object_count(); ++y) {
      Json reps = Json::array();
      for (MorphismId m : c.hom(x, y)) reps.push_back(to_string(c.presentation()->graph(), c.morphism(m).rep));
      homs.push_back({{"from", c.object_name(x)}, {"to", c.object_name(y)},
                      {"size", c.hom(x, y).size()}, {"morphisms", reps}});
    }
  }
  return {{"objects", c.object_names()}, {"morphism_count", c.morphism_count()}, {"homs", homs}};
}

inline Json model_json(const Presentation& p, const Model& m) {
  Json carriers = Json::object(), actions = Json::object();
  for (ObjectId x = 0; x < p.object_count(); ++x) carriers[p.object_name(x)] = m.carrier[x];
  for (EdgeId e = 0; e < p.edge_count(); ++e) actions[p.edge(e).name] = m.action[e];
  return {{"carriers", carriers}, {"actions", actions}};
}

inline std::string model_line(const Presentation& p, const Model& m) {
  std::ostringstream os;
  for (ObjectId x = 0; x < p.object_count(); ++x) {
    os << (x ? " " : "") << "|" << p.object_name(x) << "|=" << m.carrier[x];
  }
  for (EdgeId e = 0; e < p.edge_count(); ++e) {
    os << " " << p.edge(e).name << "=[";
    for (std::size_t k = 0; k < m.action[e].size(); ++k) os << (k ? "," : "") << m.action[e][k];
    os << "]";
  }
  return os.str();
}

inline Json event_json(const Presentation& p, const LimitSketch& s, const SoaEvent& ev) {
  const auto& g = p.graph();
  if (const auto* a = std::get_if<AttachEvent>(&ev)) {
    Json legs = Json::array();
    for (const auto& l : a->legs) legs.push_back(to_string(g, l));
    return {{"kind", "attach"}, {"pass", a->pass}, {"y", p.object_name(a->y)},
            {"alpha", s.cone(a->alpha).name}, {"legs", legs}, {"fill", p.edge(a->filler).name}};
  }
  const auto& id = std::get<IdentifyEvent>(ev);
  return {{"kind", "identify"}, {"pass", id.pass}, {"y", p.object_name(id.y)},
          {"alpha", s.cone(id.alpha).name}, {"m1", to_string(g, id.later)},
          {"m2", to_string(g, id.earliest)}};
}

inline void print_homs(std::ostream& out, const MaterializedCategory& c) {
  for (ObjectId x = 0; x < c.object_count(); ++x) {
    for (ObjectId y = 0; y < c.object_count(); ++y) {
      out << "  |Hom(" << dsl_name(c.object_name(x)) << ", " << dsl_name(c.object_name(y))
          << ")| = " << c.hom(x, y).size() << "\n";
    }
  }
}

class Runner {
 public:
  Runner(const Options& o, std::ostream& out) : o_(o), out_(out) {}

  int parse() {
    auto doc = load();
    if (o_.structured()) {
      const auto& p = *doc.sketch.base();
      Json edges = Json::array(), rels = Json::array(), cones = Json::array();
      for (const auto& e : p.graph().edges) {
        edges.push_back({{"name", e.name}, {"src", p.object_name(e.src)}, {"tgt", p.object_name(e.tgt)}});
      }
      for (const auto& r : p.relations()) rels.push_back({to_json(p, r.lhs), to_json(p, r.rhs)});
      for (const auto& c : doc.sketch.cones()) {
        if (c.implicit) continue;
        cones.push_back({{"name", c.name}, {"apex", p.object_name(c.apex)},
                         {"index_objects", c.index->object_count()},
                         {"trivial", c.is_trivial()}});
      }
      emit({{"command", "parse"}, {"objects", p.graph().vertices}, {"edges", edges},
            {"relations", rels}, {"cones", cones}});
    } else {
      out_ << print_sketch(doc.sketch);
    }
    return 0;
  }

  int free_cat() {
    auto doc = load();
    const auto& g = doc.sketch.base()->graph();
    std::vector<std::pair<ObjectId, ObjectId>> pairs;
    auto pick = [&](const std::string& n) -> std::optional<ObjectId> {
      if (n.empty()) return std::nullopt;
      auto x = g.find_vertex(n);
      if (!x) throw ValidationError("unknown object " + n);
      return x;
    };
    auto from = pick(o_.from), to = pick(o_.to);
    for (ObjectId x = 0; x < g.vertex_count(); ++x) {
      for (ObjectId y = 0; y < g.vertex_count(); ++y) {
        if ((!from || *from == x) && (!to || *to == y)) pairs.emplace_back(x, y);
      }
    }
    Json homs = Json::array();
    for (auto [x, y] : pairs) {
      auto paths = free_category_homs(g, x, y, o_.max_word_len);
      if (o_.structured()) {
        Json ps = Json::array();
        for (const auto& p : paths) ps.push_back(to_string(g, p));
        homs.push_back({{"from", g.vertices[x]}, {"to", g.vertices[y]}, {"paths", ps}});
      } else {
        out_ << "Hom(" << dsl_name(g.vertices[x]) << ", " << dsl_name(g.vertices[y])
             << "): " << paths.size() << " path(s) of length <= " << o_.max_word_len << "\n";
        for (const auto& p : paths) out_ << "  " << to_string(g, p) << "\n";
      }
    }
    if (o_.structured()) {
      emit({{"command", "free-cat"}, {"max_len", o_.max_word_len}, {"homs", homs}});
    }
    return 0;
  }

  int realize_cmd() {
    auto doc = load();
    auto r = run_realize(doc);
    if (!o_.emit_file.empty()) {
      std::ofstream f(o_.emit_file, std::ios::binary);
      if (!f) throw Error("cannot write " + o_.emit_file);
      f << print_sketch(r.realized);
    }
    if (o_.structured()) {
      Json j{{"command", "realize"}, {"status", to_string(r.status)},
             {"iterations", r.iterations}, {"events", r.trace.size()}};
      if (r.category) j["category"] = category_json(*r.category);
      Json trace = Json::array();
      for (const auto& ev : r.trace) trace.push_back(event_json(*r.realized.base(), r.original, ev));
      j["trace"] = trace;
      emit(j);
    } else {
      out_ << "status: " << to_string(r.status) << "\n"
           << "passes: " << r.iterations << "\n"
           << "events: " << r.trace.size() << "\n";
      if (r.category) {
        out_ << "morphisms: " << r.category->morphism_count() << "\n";
        print_homs(out_, *r.category);
      }
    }
    return r.stabilized() ? 0 : 1;
  }

  int check_realized() {
    auto doc = load();
    auto v = is_realized(doc.sketch, o_.bounds());
    std::string answer = !v ? "Unknown" : (*v ? "true" : "false");
    if (o_.structured()) {
      emit({{"command", "check-realized"}, {"realized", answer}});
    } else {
      out_ << answer << "\n";
    }
    return v ? 0 : 1;
  }

  int models() {
    auto doc = load();
    auto ms = enumerate_models(doc.sketch, o_.max_size);
    const auto& p = *doc.sketch.base();
    if (o_.structured()) {
      Json list = Json::array();
      for (const auto& m : ms) list.push_back(model_json(p, m));
      emit({{"command", "models"}, {"max_size", o_.max_size}, {"count", ms.size()},
            {"models", list}});
    } else {
      out_ << ms.size() << " model(s) with carriers of size <= " << o_.max_size << "\n";
      for (const auto& m : ms) out_ << "  " << model_line(p, m) << "\n";
    }
    return 0;
  }

  int transport() {
    auto doc = load();
    auto r = run_realize(doc);
    if (!r.stabilized()) return report_budget(r);
    auto rep = model_bijection(r, o_.max_size);
    if (o_.structured()) {
      emit({{"command", "transport"}, {"max_size", o_.max_size},
            {"models_E", rep.models_E.size()}, {"models_freeE", rep.models_freeE.size()},
            {"pairing", rep.pairing}, {"bijective", rep.bijective},
            {"round_trips", rep.round_trips}});
    } else {
      out_ << "models of E: " << rep.models_E.size() << "\n"
           << "models of free(E): " << rep.models_freeE.size() << "\n"
           << "bijective: " << (rep.bijective ? "true" : "false") << "\n"
           << "round trips: " << (rep.round_trips ? "true" : "false") << "\n";
    }
    return 0;
  }

  int orthogonal_cmd() {
    auto doc = load();
    auto r = run_realize(doc);
    if (!r.stabilized()) return report_budget(r);
    auto term = terminal_presentation();
    PresentationMap g = to_terminal(r.realized.base(), term);
    bool unknown = false;
    Json cells = Json::array();
    for (const auto& cell : generating_set(r.original, o_.include_trivial)) {
      auto fc = filler_cell(r.original, cell.y, cell.alpha);
      Coslice under{fc.coinserter.inclusion, r.unit.functor};
      auto v = orthogonal(cell.map, g, o_.bounds(), under);
      unknown = unknown || v.kind == OrthoVerdict::Kind::Unknown;
      const auto& yname = r.original.base()->object_name(cell.y);
      const auto& cname = r.original.cone(cell.alpha).name;
      if (o_.structured()) {
        cells.push_back({{"y", yname}, {"alpha", cname}, {"verdict", to_string(v.kind)},
                         {"squares", v.squares_checked}});
      } else {
        out_ << "r[" << dsl_name(yname) << ", " << dsl_name(cname) << "]: " << to_string(v.kind);
        if (!v.reason.empty()) out_ << " (" << v.reason << ")";
        out_ << "\n";
      }
    }
    if (o_.structured()) emit({{"command", "orthogonal"}, {"cells", cells}});
    return unknown ? 1 : 0;
  }

  int yoneda() {
    auto doc = load();
    auto r = run_realize(doc);
    if (!r.stabilized()) return report_budget(r);
    const auto& p = *r.realized.base();
    std::vector<ObjectId> targets;
    if (o_.object.empty()) {
      for (ObjectId x = 0; x < p.object_count(); ++x) targets.push_back(x);
    } else {
      auto x = p.graph().find_vertex(o_.object);
      if (!x) throw ValidationError("unknown object " + o_.object);
      targets.push_back(*x);
    }
    Json list = Json::array();
    for (ObjectId l : targets) {
      auto m = yoneda_model(r.realized, l, o_.bounds());
      if (!m) return 1;
      bool ok = is_model(r.realized, *m);
      if (o_.structured()) {
        Json mj = model_json(p, *m);
        mj["object"] = p.object_name(l);
        mj["is_model"] = ok;
        list.push_back(mj);
      } else {
        out_ << "Hom(" << dsl_name(p.object_name(l)) << ", -): ";
        for (ObjectId x = 0; x < p.object_count(); ++x) {
          out_ << (x ? " " : "") << "|" << p.object_name(x) << "|=" << m->carrier[x];
        }
        out_ << "  model: " << (ok ? "true" : "false") << "\n";
      }
    }
    if (o_.structured()) emit({{"command", "yoneda"}, {"models", list}});
    return 0;
  }

 private:
  SketchDocument load() { return parse_sketch(read_file(o_.file), o_.bounds()); }

  RealizationResult run_realize(const SketchDocument& doc) {
    auto r = realize(doc.sketch, o_.max_iter, o_.bounds());
    if (!o_.trace_file.empty()) {
      std::ofstream f(o_.trace_file, std::ios::binary);
      if (!f) throw Error("cannot write " + o_.trace_file);
      write_trace(f, r);
    }
    return r;
  }

  int report_budget(const RealizationResult& r) {
    if (o_.structured()) {
      emit({{"status", to_string(r.status)}, {"iterations", r.iterations}});
    } else {
      out_ << "status: " << to_string(r.status) << " after " << r.iterations << " pass(es)\n";
    }
    return 1;
  }

  void emit(const Json& j) { out_ << j.dump(2) << "\n"; }

  const Options& o_;
  std::ostream& out_;
};

}  // namespace cli

inline int run_command(const std::vector<std::string>& args, std::ostream& out,
                       std::ostream& err) {
  cli::Options o;
  CLI::App app{"Finitely presented categories and limit sketches", "limsk"};
  app.require_subcommand(1);
  auto common = [&](CLI::App* sub) {
    sub->add_option("file", o.file, "sketch file (.sk)")->required();
    sub->add_option("--max-word-len", o.max_word_len, "longest word explored")
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-morphisms", o.max_morphisms, "morphism budget per category")
        ->check(CLI::PositiveNumber);
    sub->add_option("--format", o.format, "human or structured")
        ->check(CLI::IsMember({"human", "structured"}));
    return sub;
  };
  auto realizing = [&](CLI::App* sub) {
    sub->add_option("--max-iter", o.max_iter, "saturation passes");
    sub->add_option("--trace", o.trace_file, "write the event log here");
    return sub;
  };
  std::vector<std::pair<CLI::App*, int (cli::Runner::*)()>> cmds;
  auto* parse = common(app.add_subcommand("parse", "parse and print a sketch"));
  cmds.emplace_back(parse, &cli::Runner::parse);
  auto* fc = common(app.add_subcommand("free-cat", "enumerate homs of the free category"));
  fc->add_option("--from", o.from, "source object");
  fc->add_option("--to", o.to, "target object");
  cmds.emplace_back(fc, &cli::Runner::free_cat);
  auto* rz = realizing(common(app.add_subcommand("realize", "compute the universal realization")));
  rz->add_option("--emit", o.emit_file, "write the realized sketch here");
  cmds.emplace_back(rz, &cli::Runner::realize_cmd);
  auto* cr = common(app.add_subcommand("check-realized", "are the cones limit cones?"));
  cmds.emplace_back(cr, &cli::Runner::check_realized);
  auto* md = common(app.add_subcommand("models", "enumerate finite-set models"));
  md->add_option("--max-size", o.max_size, "largest carrier");
  cmds.emplace_back(md, &cli::Runner::models);
  auto* tr = realizing(common(app.add_subcommand("transport", "models of E vs models of free(E)")));
  tr->add_option("--max-size", o.max_size, "largest carrier");
  cmds.emplace_back(tr, &cli::Runner::transport);
  auto* orth = realizing(common(app.add_subcommand("orthogonal", "fibrancy of the realization")));
  orth->add_flag("--include-trivial", o.include_trivial, "also test cells of trivial cones");
  cmds.emplace_back(orth, &cli::Runner::orthogonal_cmd);
  auto* yo = realizing(common(app.add_subcommand("yoneda", "hom models of the realization")));
  yo->add_option("--object", o.object, "only this object");
  cmds.emplace_back(yo, &cli::Runner::yoneda);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  try {
    cli::Runner runner(o, out);
    for (auto [sub, fn] : cmds) {
      if (sub->parsed()) return (runner.*fn)();
    }
  } catch (const ParseError& e) {
    err << o.file << ":" << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace limsk
