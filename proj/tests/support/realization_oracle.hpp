#pragma once

// Reference computation of the universal realization of a small sketch,
// written without the library's coset tables or saturation loop.
//
// Words of length <= L over the current graph are closed under the
// relations with a union-find congruence closure (left and right
// extension), plus the filler-uniqueness rule: two arrows into a cone apex
// whose composites with every leg agree are equal. Once every word of length
// L/2 + 1 is equivalent to a shorter one, the classes of short words form a
// finite category; any natural family from an object without a filler gets
// a fresh arrow. Repeat until nothing is attached.

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "limsk/limsk.hpp"

namespace oracle {

using limsk::EdgeId;
using limsk::ObjectId;

struct Word {
  ObjectId start;
  std::vector<EdgeId> edges;  // application order
  friend auto operator<=>(const Word&, const Word&) = default;
};

struct OracleCategory {
  std::vector<std::string> objects;
  std::vector<Word> reps;                       // one per morphism
  std::vector<std::pair<ObjectId, ObjectId>> ends;
  std::vector<std::vector<std::size_t>> compose;  // compose[g][f] = g . f, or npos

  std::size_t hom_size(ObjectId x, ObjectId y) const {
    std::size_t n = 0;
    for (const auto& e : ends) n += (e.first == x && e.second == y);
    return n;
  }
};

class RealizationOracle {
 public:
  RealizationOracle(const limsk::LimitSketch& s, std::size_t max_len)
      : s_(s), L_(max_len), graph_(s.base()->graph()) {
    for (const auto& r : s.base()->relations()) rels_.push_back({to_word(r.lhs), to_word(r.rhs)});
  }

  std::size_t attachments() const { return attachments_; }

  /// nullopt when the closure test fails within the word bound.
  std::optional<OracleCategory> run(std::size_t max_rounds = 16) {
    for (std::size_t round = 0; round < max_rounds; ++round) {
      close();
      auto cat = extract();
      if (!cat) return std::nullopt;
      if (!attach_missing(*cat)) {
        if (!check_limits(*cat)) return std::nullopt;
        return cat;
      }
    }
    return std::nullopt;
  }

 private:
  static Word to_word(const limsk::Path& p) { return Word{p.start, p.edges}; }

  ObjectId target(const Word& w) const {
    return w.edges.empty() ? w.start : graph_.edges[w.edges.back()].tgt;
  }

  std::size_t find(std::size_t x) {
    while (uf_[x] != x) x = uf_[x] = uf_[uf_[x]];
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    uf_[b] = a;  // smaller id (shorter, earlier word) stays the root
    return true;
  }

  std::optional<std::size_t> id(const Word& w) const {
    auto it = index_.find(w);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  void enumerate_words() {
    words_.clear();
    index_.clear();
    for (ObjectId x = 0; x < graph_.vertex_count(); ++x) words_.push_back(Word{x, {}});
    for (std::size_t k = 0; k < words_.size(); ++k) {
      if (words_[k].edges.size() == L_) continue;
      ObjectId t = target(words_[k]);
      for (EdgeId e = 0; e < graph_.edge_count(); ++e) {
        if (graph_.edges[e].src != t) continue;
        Word w = words_[k];
        w.edges.push_back(e);
        words_.push_back(std::move(w));
      }
    }
    // BFS order is by length already; sort within lengths for determinism.
    std::stable_sort(words_.begin(), words_.end(), [](const Word& a, const Word& b) {
      if (a.edges.size() != b.edges.size()) return a.edges.size() < b.edges.size();
      return a < b;
    });
    for (std::size_t k = 0; k < words_.size(); ++k) index_[words_[k]] = k;
    uf_.resize(words_.size());
    std::iota(uf_.begin(), uf_.end(), 0);
    succ_.assign(words_.size(), std::vector<long>(graph_.edge_count(), -1));
    pred_.assign(words_.size(), std::vector<long>(graph_.edge_count(), -1));
    for (std::size_t k = 0; k < words_.size(); ++k) {
      const auto& w = words_[k];
      if (w.edges.size() == L_) continue;
      for (EdgeId e = 0; e < graph_.edge_count(); ++e) {
        if (graph_.edges[e].src == target(w)) {
          Word v = w;
          v.edges.push_back(e);
          succ_[k][e] = static_cast<long>(index_.at(v));
        }
        if (graph_.edges[e].tgt == w.start) {
          Word v{graph_.edges[e].src, {e}};
          v.edges.insert(v.edges.end(), w.edges.begin(), w.edges.end());
          pred_[k][e] = static_cast<long>(index_.at(v));
        }
      }
    }
  }

  bool propagate(const std::vector<std::vector<long>>& ext) {
    bool changed = false;
    std::map<std::pair<std::size_t, EdgeId>, std::size_t> seen;
    for (std::size_t k = 0; k < words_.size(); ++k) {
      for (EdgeId e = 0; e < graph_.edge_count(); ++e) {
        if (ext[k][e] < 0) continue;
        auto key = std::make_pair(find(k), e);
        auto img = static_cast<std::size_t>(ext[k][e]);
        auto [it, fresh] = seen.emplace(key, img);
        if (!fresh) changed |= unite(it->second, img);
      }
    }
    return changed;
  }

  bool uniqueness() {
    bool changed = false;
    for (std::size_t a = 0; a < s_.cone_count(); ++a) {
      if (s_.is_trivial(a)) continue;
      const auto& c = s_.cone(a);
      std::map<std::pair<ObjectId, std::vector<std::size_t>>, std::size_t> first;
      for (std::size_t k = 0; k < words_.size(); ++k) {
        const auto& h = words_[k];
        if (target(h) != c.apex) continue;
        std::vector<std::size_t> key;
        bool fits = true;
        for (const auto& leg : c.legs) {
          Word w = h;
          w.edges.insert(w.edges.end(), leg.edges.begin(), leg.edges.end());
          auto i = id(w);
          if (!i) {
            fits = false;
            break;
          }
          key.push_back(find(*i));
        }
        if (!fits) continue;
        auto [it, fresh] = first.emplace(std::make_pair(h.start, key), k);
        if (!fresh) changed |= unite(it->second, k);
      }
    }
    return changed;
  }

  void close() {
    enumerate_words();
    for (const auto& [l, r] : rels_) {
      auto a = id(l), b = id(r);
      if (a && b) unite(*a, *b);
    }
    bool changed = true;
    while (changed) {
      changed = propagate(succ_);
      changed |= propagate(pred_);
      changed |= uniqueness();
    }
  }

  std::optional<OracleCategory> extract() {
    const std::size_t K = L_ / 2;
    std::map<std::size_t, std::size_t> morphism_of_class;
    OracleCategory cat;
    cat.objects = graph_.vertices;
    for (std::size_t k = 0; k < words_.size(); ++k) {
      const auto& w = words_[k];
      if (w.edges.size() > K + 1) break;
      std::size_t cls = find(k);
      if (w.edges.size() == K + 1) {
        if (words_[cls].edges.size() > K) return std::nullopt;  // not closed
        continue;
      }
      if (morphism_of_class.count(cls)) continue;
      morphism_of_class[cls] = cat.reps.size();
      cat.reps.push_back(words_[cls]);
      cat.ends.emplace_back(w.start, target(w));
    }
    const std::size_t n = cat.reps.size();
    cat.compose.assign(n, std::vector<std::size_t>(n, std::string::npos));
    for (std::size_t g = 0; g < n; ++g) {
      for (std::size_t f = 0; f < n; ++f) {
        if (cat.ends[f].second != cat.ends[g].first) continue;
        Word w = cat.reps[f];
        w.edges.insert(w.edges.end(), cat.reps[g].edges.begin(), cat.reps[g].edges.end());
        auto it = morphism_of_class.find(find(*id(w)));
        if (it == morphism_of_class.end()) return std::nullopt;
        cat.compose[g][f] = it->second;
      }
    }
    cat_classes_ = std::move(morphism_of_class);
    return cat;
  }

  std::size_t morphism(const OracleCategory& cat, const Word& w) {
    (void)cat;
    return cat_classes_.at(find(*id(w)));
  }

  std::size_t identity(const OracleCategory& cat, ObjectId x) { return morphism(cat, Word{x, {}}); }

  std::size_t eval(const OracleCategory& cat, const limsk::Path& p) {
    std::size_t m = identity(cat, p.start);
    for (EdgeId e : p.edges) m = cat.compose[morphism(cat, Word{graph_.edges[e].src, {e}})][m];
    return m;
  }

  /// Natural families from y over cone c, in lexicographic order.
  std::vector<std::vector<std::size_t>> families(const OracleCategory& cat, ObjectId y,
                                                 const limsk::Cone& c) {
    const auto& idx = *c.index;
    std::vector<std::size_t> diagram;
    for (limsk::MorphismId f = 0; f < idx.morphism_count(); ++f) {
      diagram.push_back(eval(cat, c.diagram(f)));
    }
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> kappa(idx.object_count());
    auto rec = [&](auto&& self, ObjectId i) -> void {
      if (i == idx.object_count()) {
        for (limsk::MorphismId f = 0; f < idx.morphism_count(); ++f) {
          const auto& mf = idx.morphism(f);
          if (cat.compose[diagram[f]][kappa[mf.src]] != kappa[mf.tgt]) return;
        }
        out.push_back(kappa);
        return;
      }
      for (std::size_t m = 0; m < cat.reps.size(); ++m) {
        if (cat.ends[m] != std::make_pair(y, c.diagram_objects[i])) continue;
        kappa[i] = m;
        self(self, i + 1);
      }
    };
    rec(rec, 0);
    return out;
  }

  std::vector<std::size_t> fillers(const OracleCategory& cat, ObjectId y, const limsk::Cone& c,
                                   const std::vector<std::size_t>& kappa) {
    std::vector<std::size_t> out;
    for (std::size_t h = 0; h < cat.reps.size(); ++h) {
      if (cat.ends[h] != std::make_pair(y, c.apex)) continue;
      bool ok = true;
      for (std::size_t i = 0; i < c.legs.size() && ok; ++i) {
        ok = cat.compose[eval(cat, c.legs[i])][h] == kappa[i];
      }
      if (ok) out.push_back(h);
    }
    return out;
  }

  bool attach_missing(const OracleCategory& cat) {
    bool attached = false;
    for (ObjectId y = 0; y < graph_.vertex_count(); ++y) {
      for (std::size_t a = 0; a < s_.cone_count(); ++a) {
        if (s_.is_trivial(a)) continue;
        const auto& c = s_.cone(a);
        for (const auto& kappa : families(cat, y, c)) {
          if (!fillers(cat, y, c, kappa).empty()) continue;
          EdgeId fill = graph_.add_edge("fill" + std::to_string(graph_.edge_count()), y, c.apex);
          for (std::size_t i = 0; i < c.legs.size(); ++i) {
            Word lhs{y, {fill}};
            lhs.edges.insert(lhs.edges.end(), c.legs[i].edges.begin(), c.legs[i].edges.end());
            rels_.push_back({lhs, cat.reps[kappa[i]]});
          }
          ++attachments_;
          attached = true;
        }
      }
    }
    return attached;
  }

  bool check_limits(const OracleCategory& cat) {
    for (ObjectId y = 0; y < graph_.vertex_count(); ++y) {
      for (const auto& c : s_.cones()) {
        for (const auto& kappa : families(cat, y, c)) {
          if (fillers(cat, y, c, kappa).size() != 1) return false;
        }
      }
    }
    return true;
  }

  limsk::LimitSketch s_;
  std::size_t L_;
  limsk::Graph graph_;
  std::vector<std::pair<Word, Word>> rels_;
  std::vector<Word> words_;
  std::map<Word, std::size_t> index_;
  std::vector<std::size_t> uf_;
  std::vector<std::vector<long>> succ_, pred_;
  std::map<std::size_t, std::size_t> cat_classes_;
  std::size_t attachments_ = 0;
};

}  // namespace oracle
