#include "flowspace/verify.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "flowspace/moore.hpp"
#include "flowspace/pathspace.hpp"
#include "flowspace/union_find.hpp"

namespace flowspace {

namespace {

// Every randomized check family draws from its own stream, so changing the
// iteration count of one check never shifts the instances of another.
Rng sub_rng(std::uint64_t seed, std::uint64_t tag) {
  return Rng(seed ^ (tag * 0x9e3779b97f4a7c15ull));
}

std::string str(long x) { return std::to_string(x); }

// First failure wins; later witnesses of the same check are dropped.
void note(std::string& slot, const std::string& msg) {
  if (slot.empty() && !msg.empty()) slot = msg;
}

struct CheckLog {
  Json checks = Json::array();
  int failures = 0;

  void add(const std::string& suite, const std::string& name, long cases,
           const std::string& witness) {
    Json c;
    c["suite"] = suite;
    c["name"] = name;
    c["cases"] = cases;
    c["status"] = witness.empty() ? "pass" : "fail";
    if (!witness.empty()) {
      c["witness"] = witness;
      ++failures;
    }
    checks.push_back(std::move(c));
  }
};

// ---------------------------------------------------------------------------
// poset machinery

bool get_bit(const std::vector<std::uint64_t>& row, int j) {
  return (row[static_cast<size_t>(j) >> 6] >> (j & 63)) & 1u;
}

void set_bit(std::vector<std::uint64_t>& row, int j) {
  row[static_cast<size_t>(j) >> 6] |= std::uint64_t{1} << (j & 63);
}

std::vector<int> state_chain(const TupleObject& t) {
  std::vector<int> chain{t.cells.front().src};
  for (const Cell& c : t.cells) chain.push_back(c.tgt);
  return chain;
}

// flags pointwise <=, for objects with equal state chains
bool flags_below(const TupleObject& x, const TupleObject& y) {
  for (size_t k = 0; k < x.cells.size(); ++k) {
    if (x.cells[k].flag > y.cells[k].flag) return false;
  }
  return true;
}

bool has_adjacent_zeros(const TupleObject& t) {
  for (size_t k = 0; k + 1 < t.cells.size(); ++k) {
    if (t.cells[k].flag == 0 && t.cells[k + 1].flag == 0) return true;
  }
  return false;
}

// A degree-capped truncation with two independently computed relation
// matrices: rel recomputes the documented decision procedure (minus-closure
// plus pointwise flag comparison), reach closes the raw generator graph.
// Rows are bitsets over object indices.
struct Truncation {
  Enumeration en;
  int n = 0;
  int words = 0;
  std::map<std::vector<int>, std::vector<int>> groups;  // state chain -> objects
  std::vector<std::vector<std::uint64_t>> rel;
  std::vector<std::vector<std::uint64_t>> reach;
};

Truncation analyze_truncation(const PosetContext& ctx, int maxDegree) {
  Truncation tr;
  tr.en = enumerate_up_to(ctx, maxDegree);
  tr.n = static_cast<int>(tr.en.objects.size());
  tr.words = (tr.n + 63) / 64;

  for (int i = 0; i < tr.n; ++i) tr.groups[state_chain(tr.en.objects[i])].push_back(i);

  tr.rel.assign(tr.n, std::vector<std::uint64_t>(tr.words, 0));
  for (int m = 0; m < tr.n; ++m) {
    for (const TupleObject& x : minus_closure(ctx, tr.en.objects[m])) {
      auto it = tr.groups.find(state_chain(x));
      if (it == tr.groups.end()) continue;
      for (int j : it->second) {
        if (flags_below(x, tr.en.objects[j])) set_bit(tr.rel[m], j);
      }
    }
  }

  // Raw reachability, memoized. The arrow graph is acyclic (2*length -
  // height strictly drops along every generator), so plain recursion with a
  // done marker terminates and the depth is bounded by 2*maxDegree.
  tr.reach.assign(tr.n, std::vector<std::uint64_t>());
  auto visit = [&](auto&& self, int i) -> void {
    if (!tr.reach[i].empty()) return;
    std::vector<std::uint64_t> row(tr.words, 0);
    set_bit(row, i);
    for (GeneratorArrow g : applicable_generators(ctx, tr.en.objects[i])) {
      int j = tr.en.index_of(apply_generator(ctx, tr.en.objects[i], g));
      if (j < 0) continue;  // the arrow leaves the truncation
      self(self, j);
      for (int w = 0; w < tr.words; ++w) row[w] |= tr.reach[j][w];
    }
    tr.reach[i] = std::move(row);
  };
  for (int i = 0; i < tr.n; ++i) visit(visit, i);
  return tr;
}

std::string ctx_label(const PosetContext& ctx) {
  std::string s = "S={";
  for (size_t i = 0; i < ctx.states.size(); ++i) {
    if (i) s += ",";
    s += ctx.states[i];
  }
  return s + "} u=" + ctx.states[ctx.u] + " v=" + ctx.states[ctx.v];
}

// ---------------------------------------------------------------------------
// diagram checks

// Independent recomputation of the colimit: connected components of the
// element graph whose edges are x ~ map(x) along every cover, renumbered by
// first appearance. Must reproduce classes and representatives exactly.
std::string colimit_components_witness(const SetDiagram& d, const ColimitResult& c) {
  int nObj = d.index.size();
  std::vector<int> base(nObj + 1, 0);
  for (int i = 0; i < nObj; ++i) base[i + 1] = base[i] + d.sizes[i];
  UnionFind uf(base[nObj]);
  for (size_t k = 0; k < d.index.covers.size(); ++k) {
    auto [i, j] = d.index.covers[k];
    for (int x = 0; x < d.sizes[i]; ++x) uf.unite(base[i] + x, base[j] + d.maps[k][x]);
  }
  std::vector<int> rootId(base[nObj], -1);
  int next = 0;
  std::vector<int> comp(base[nObj]);
  for (int s = 0; s < base[nObj]; ++s) {
    int r = uf.find(s);
    if (rootId[r] < 0) rootId[r] = next++;
    comp[s] = rootId[r];
  }
  if (next != c.apexSize) {
    return "component count " + str(next) + " differs from apex size " + str(c.apexSize);
  }
  std::vector<char> seen(next, 0);
  for (int i = 0; i < nObj; ++i) {
    for (int x = 0; x < d.sizes[i]; ++x) {
      int cls = c.inject[i][x];
      if (cls != comp[base[i] + x]) {
        return "class of (" + d.index.objects[i] + "," + str(x) + ") disagrees with components";
      }
      if (!seen[cls]) {
        seen[cls] = 1;
        if (c.repr[cls] != std::make_pair(i, x)) {
          return "representative of class " + str(cls) + " is not its least member";
        }
      }
    }
  }
  return "";
}

// ---------------------------------------------------------------------------
// corpus generation

// The flow of all nonempty directed walks of an acyclic edge list,
// composition by concatenation. Empty when the walk count exceeds cap.
std::optional<DiscreteFlow> walk_flow(int nstates, const std::vector<std::pair<int, int>>& edges,
                                      int cap) {
  std::vector<std::vector<int>> walks;
  std::vector<int> cur;
  auto grow = [&](auto&& self, int state) -> void {
    for (size_t e = 0; e < edges.size(); ++e) {
      if (edges[e].first != state) continue;
      cur.push_back(static_cast<int>(e));
      walks.push_back(cur);
      self(self, edges[e].second);
      cur.pop_back();
    }
  };
  for (int s = 0; s < nstates; ++s) grow(grow, s);
  if (static_cast<int>(walks.size()) > cap) return std::nullopt;
  std::sort(walks.begin(), walks.end());

  DiscreteFlow a;
  for (int s = 0; s < nstates; ++s) a.states.push_back("v" + std::to_string(s));
  for (const auto& w : walks) {
    std::string id;
    for (int e : w) id += "e" + std::to_string(e);
    a.paths.push_back({id, edges[w.front()].first, edges[w.back()].second});
  }
  int np = a.npaths();
  a.compose.assign(np, std::vector<int>(np, -1));
  for (int p = 0; p < np; ++p) {
    for (int q = 0; q < np; ++q) {
      if (a.paths[p].tgt != a.paths[q].src) continue;
      std::vector<int> cat = walks[p];
      cat.insert(cat.end(), walks[q].begin(), walks[q].end());
      auto it = std::lower_bound(walks.begin(), walks.end(), cat);
      if (it == walks.end() || *it != cat) {
        throw std::logic_error("walk table is missing a composite");
      }
      a.compose[p][q] = static_cast<int>(it - walks.begin());
    }
  }
  validate_flow(a);
  return a;
}

bool hom_empty(const DiscreteFlow& f, int s, int t) {
  for (const FlowPath& p : f.paths) {
    if (p.src == s && p.tgt == t) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// pushout checks

// Endpoint discipline and generation of the word universe: every class keeps
// the endpoints of its words, lookup round-trips, and every path of the glued
// flow is the class of some word.
std::string word_universe_witness(const DiscreteFlow& a, const GlobAttachment& att,
                                  const GlobPushout& po) {
  try {
    validate_flow(po.flow);
  } catch (const InputError& e) {
    return std::string("glued flow fails validation: ") + e.what();
  }
  if (!verify_flow_map(a, po.flow, po.fromA)) return "canonical map from the base is not a flow map";
  for (size_t z = 0; z < att.cells.size(); ++z) {
    const FlowPath& p = po.flow.paths[po.cellToPath[z]];
    if (p.src != po.fromA.stateMap[att.g0] || p.tgt != po.fromA.stateMap[att.g1]) {
      return "cell " + att.cells[z] + " lands on a path with wrong endpoints";
    }
  }
  std::vector<char> seen(po.flow.npaths(), 0);
  for (size_t w = 0; w < po.universe.size(); ++w) {
    const PathWord& word = po.universe[w];
    int cls = po.wordClass[w];
    if (cls < 0 || cls >= po.flow.npaths()) return "word class index out of range";
    int src = po.fromA.stateMap[letter_ends(a, att, word.front()).first];
    int tgt = po.fromA.stateMap[letter_ends(a, att, word.back()).second];
    if (po.flow.paths[cls].src != src || po.flow.paths[cls].tgt != tgt) {
      return "class endpoints disagree on word " + render_word(a, po.tcells, word);
    }
    if (po.class_of_word(word) != cls) {
      return "class lookup disagrees on word " + render_word(a, po.tcells, word);
    }
    seen[cls] = 1;
  }
  for (int p = 0; p < po.flow.npaths(); ++p) {
    if (!seen[p]) return "path " + po.flow.paths[p].id + " is not the class of any word";
  }
  return "";
}

// A random flow map out of b: add an isolated state, merge a mutually
// unreachable state pair, or glue one more fresh cell onto a loop-free
// endpoint pair. Falls back to add_state when the drawn kind has no
// candidate.
struct Surgery {
  DiscreteFlow flow;
  FlowMap map;
};

Surgery random_surgery(Rng& rng, const DiscreteFlow& b) {
  int kind = rng.range(0, 2);
  if (kind == 1) {
    std::vector<std::pair<int, int>> cands;
    for (int s = 0; s < b.nstates(); ++s) {
      for (int t = s + 1; t < b.nstates(); ++t) {
        if (hom_empty(b, s, t) && hom_empty(b, t, s)) cands.push_back({s, t});
      }
    }
    if (!cands.empty()) {
      auto [s, t] = cands[rng.below(cands.size())];
      MergePushout mp = pushout_merge_states(b, s, t);
      if (!mp.flow.truncated) return {mp.flow, mp.fromA};
    }
  } else if (kind == 2) {
    std::vector<GlobAttachment> cands;
    for (int g0 = 0; g0 < b.nstates(); ++g0) {
      for (int g1 = 0; g1 < b.nstates(); ++g1) {
        if (g0 == g1) continue;
        GlobAttachment att = make_attachment(b, g0, g1, {}, {"w0"}, {}, {});
        if (is_loop_free(b, att)) cands.push_back(att);
      }
    }
    if (!cands.empty()) {
      GlobPushout po = pushout_glob_oracle(b, cands[rng.below(cands.size())]);
      return {po.flow, po.fromA};
    }
  }
  AddStatePushout ap = pushout_add_state(b);
  return {ap.flow, ap.fromA};
}

// Exhaustive count of flow maps b -> y within the per-path candidate sets;
// fills matched when a counted map equals `expect`. Stops at two, which is
// all uniqueness needs.
int count_square_fillers(const DiscreteFlow& b, const DiscreteFlow& y,
                         const std::vector<std::vector<int>>& cand, const std::vector<int>& expect,
                         bool& matched) {
  int np = b.npaths();
  std::vector<int> pick(np, -1);
  int found = 0;
  auto dfs = [&](auto&& self, int p) -> void {
    if (found >= 2) return;
    if (p == np) {
      for (int i = 0; i < np; ++i) {
        for (int j = 0; j < np; ++j) {
          if (!b.compose_defined(i, j)) continue;
          if (!y.compose_defined(pick[i], pick[j])) return;
          if (y.compose[pick[i]][pick[j]] != pick[b.compose[i][j]]) return;
        }
      }
      ++found;
      if (pick == expect) matched = true;
      return;
    }
    for (int c : cand[p]) {
      pick[p] = c;
      self(self, p + 1);
    }
  };
  dfs(dfs, 0);
  return found;
}

// Universal property of the glued flow: post-composing the canonical square
// with a random flow map g gives a commuting square whose mediating map must
// be g itself, and on small instances the only square filler at all.
void check_mediating(Rng& rng, long count, CheckLog& log) {
  std::string wMain, wUnique, wReject;
  long searched = 0, rejects = 0;
  for (long k = 0; k < count; ++k) {
    try {
      CorpusInstance inst = random_corpus_instance(rng, 4, 10, 3, 2);
      GlobPushout po = pushout_glob_oracle(inst.a, inst.att);
      Surgery s = random_surgery(rng, po.flow);

      FlowMap u;
      u.stateMap.resize(inst.a.nstates());
      for (int st = 0; st < inst.a.nstates(); ++st) {
        u.stateMap[st] = s.map.stateMap[po.fromA.stateMap[st]];
      }
      u.pathMap.resize(inst.a.npaths());
      for (int p = 0; p < inst.a.npaths(); ++p) {
        u.pathMap[p] = s.map.pathMap[po.fromA.pathMap[p]];
      }
      std::vector<int> cellImage(inst.att.cells.size());
      for (size_t z = 0; z < cellImage.size(); ++z) {
        cellImage[z] = s.map.pathMap[po.cellToPath[z]];
      }

      FlowMap h;
      try {
        h = glob_pushout_mediate(inst.a, inst.att, po, s.flow, u, cellImage);
      } catch (const InputError& e) {
        note(wMain, "iteration " + str(k) + ": mediate rejected a commuting square: " + e.what());
        continue;
      }
      if (h.stateMap != s.map.stateMap || h.pathMap != s.map.pathMap) {
        note(wMain, "iteration " + str(k) + ": mediating map differs from the inducing map");
      }
      if (!verify_flow_map(po.flow, s.flow, h)) {
        note(wMain, "iteration " + str(k) + ": mediating map is not a flow map");
      }

      // Exhaustive uniqueness, gated by the size of the candidate space.
      std::vector<std::vector<int>> cand(po.flow.npaths());
      for (int p = 0; p < inst.a.npaths(); ++p) cand[po.fromA.pathMap[p]] = {u.pathMap[p]};
      for (size_t z = 0; z < cellImage.size(); ++z) cand[po.cellToPath[z]] = {cellImage[z]};
      std::uint64_t product = 1;
      for (int p = 0; p < po.flow.npaths() && product <= 20000; ++p) {
        if (!cand[p].empty()) continue;
        int src = h.stateMap[po.flow.paths[p].src];
        int tgt = h.stateMap[po.flow.paths[p].tgt];
        for (int yp = 0; yp < s.flow.npaths(); ++yp) {
          if (s.flow.paths[yp].src == src && s.flow.paths[yp].tgt == tgt) cand[p].push_back(yp);
        }
        product *= cand[p].size();
      }
      if (product <= 20000) {
        ++searched;
        bool matched = false;
        int found = count_square_fillers(po.flow, s.flow, cand, h.pathMap, matched);
        if (found != 1 || !matched) {
          note(wUnique, "iteration " + str(k) + ": found " + str(found) +
                            " square fillers instead of the mediating map alone");
        }
      }

      // A perturbed cell image breaks the square and must be rejected.
      if (!inst.att.boundary.empty()) {
        int cell = inst.att.incl[0];
        int want = po.cellToPath[cell];
        std::vector<int> bad = po.cellToPath;
        bad[cell] = -1;
        for (int yp = 0; yp < po.flow.npaths(); ++yp) {
          if (yp != want && po.flow.paths[yp].src == po.flow.paths[want].src &&
              po.flow.paths[yp].tgt == po.flow.paths[want].tgt) {
            bad[cell] = yp;
            break;
          }
        }
        if (bad[cell] >= 0) {
          ++rejects;
          try {
            glob_pushout_mediate(inst.a, inst.att, po, po.flow, po.fromA, bad);
            note(wReject, "iteration " + str(k) + ": mediate accepted a non-commuting square");
          } catch (const InputError&) {
            // expected
          }
        }
      }
    } catch (const std::exception& e) {
      note(wMain, "iteration " + str(k) + ": unexpected error: " + e.what());
    }
  }
  log.add("pushout", "pushout square admits the inducing mediating map", count, wMain);
  log.add("pushout", "mediating map is the unique square filler", searched, wUnique);
  log.add("pushout", "mediate rejects perturbed squares", rejects, wReject);
}

// Supportless recomputation: extend the support diagram by every object of
// the full index up to the maximal support degree, with empty sets off the
// support, and compare the colimits class by class.
std::string support_restriction_witness(const ReedyPathspace& rp) {
  const DfDiagram& df = rp.df;
  int maxdeg = 0;
  for (const TupleObject& n : df.support) maxdeg = std::max(maxdeg, n.degree());
  Enumeration en = enumerate_up_to(df.ctx, maxdeg);
  for (const TupleObject& n : df.support) {
    if (en.index_of(n) < 0) return "support object missing from the full truncation";
  }
  std::vector<int> toSupport(en.objects.size());
  std::vector<int> sizes(en.objects.size(), 0);
  std::vector<std::string> names;
  for (size_t i = 0; i < en.objects.size(); ++i) {
    toSupport[i] = df.object_index(en.objects[i]);
    if (toSupport[i] >= 0) sizes[i] = df.values[toSupport[i]].size;
    names.push_back(format_tuple(df.ctx, en.objects[i]));
  }

  std::vector<std::vector<int>> maps;
  for (auto [bi, bj] : en.covers) {
    if (sizes[bi] == 0) {
      maps.push_back({});
      continue;
    }
    // A cover out of a nonempty object must stay within the support, where
    // the support diagram already carries its realized function.
    int si = toSupport[bi];
    int sj = toSupport[bj];
    if (si < 0 || sj < 0) {
      return "cover out of nonempty " + names[bi] + " leaves the support";
    }
    int found = -1;
    for (size_t l = 0; l < df.coverArrows.size(); ++l) {
      if (df.coverArrows[l].first == std::make_pair(si, sj)) {
        found = static_cast<int>(l);
        break;
      }
    }
    if (found < 0) return "support diagram is missing the cover " + names[bi] + " -> " + names[bj];
    maps.push_back(df.diagram.maps[found]);
  }

  ColimitResult big = colimit(SetDiagram(FinitePoset(names, en.covers), sizes, maps));
  if (big.apexSize != rp.colim.apexSize) {
    return "full-index colimit has " + str(big.apexSize) + " classes, support has " +
           str(rp.colim.apexSize);
  }
  std::vector<int> bigToDf(big.apexSize, -1);
  std::vector<int> dfToBig(rp.colim.apexSize, -1);
  for (size_t bi = 0; bi < en.objects.size(); ++bi) {
    int i = toSupport[bi];
    if (i < 0) continue;
    for (int x = 0; x < sizes[bi]; ++x) {
      int b = big.inject[bi][x];
      int d = rp.colim.inject[i][x];
      if (bigToDf[b] == -1) bigToDf[b] = d;
      if (dfToBig[d] == -1) dfToBig[d] = b;
      if (bigToDf[b] != d || dfToBig[d] != b) {
        return "class partitions differ at " + names[bi] + " element " + str(x);
      }
    }
  }
  return "";
}

// The colimit splits along endpoint pairs: covers stay inside one block, the
// block colimits reproduce the global classes, and the glued flow's paths
// carry the block endpoints.
std::string block_decomposition_witness(const ReedyPathspace& rp) {
  const DfDiagram& df = rp.df;
  int ns = static_cast<int>(df.support.size());
  std::vector<std::pair<int, int>> key(ns);
  for (int i = 0; i < ns; ++i) {
    key[i] = {df.support[i].cells.front().src, df.support[i].cells.back().tgt};
  }
  for (const auto& arrow : df.coverArrows) {
    if (key[arrow.first.first] != key[arrow.first.second]) {
      return "cover crosses endpoint blocks at " +
             df.diagram.index.objects[arrow.first.first];
    }
  }
  std::map<std::pair<int, int>, std::vector<int>> blocks;
  for (int i = 0; i < ns; ++i) blocks[key[i]].push_back(i);

  int total = 0;
  for (const auto& [bk, members] : blocks) {
    std::vector<int> local(ns, -1);
    std::vector<std::string> names;
    std::vector<int> sizes;
    for (size_t li = 0; li < members.size(); ++li) {
      local[members[li]] = static_cast<int>(li);
      names.push_back(df.diagram.index.objects[members[li]]);
      sizes.push_back(df.diagram.sizes[members[li]]);
    }
    std::vector<std::pair<int, int>> covers;
    std::vector<std::vector<int>> maps;
    for (size_t l = 0; l < df.coverArrows.size(); ++l) {
      auto [si, sj] = df.coverArrows[l].first;
      if (local[si] < 0) continue;
      covers.push_back({local[si], local[sj]});
      maps.push_back(df.diagram.maps[l]);
    }
    ColimitResult sub = colimit(SetDiagram(FinitePoset(names, covers), sizes, maps));
    total += sub.apexSize;

    std::map<int, int> g2s, s2g;
    for (size_t li = 0; li < members.size(); ++li) {
      for (int x = 0; x < sizes[li]; ++x) {
        int g = rp.colim.inject[members[li]][x];
        int s = sub.inject[li][x];
        auto itG = g2s.try_emplace(g, s).first;
        auto itS = s2g.try_emplace(s, g).first;
        if (itG->second != s || itS->second != g) {
          return "block colimit classes disagree at " + names[li];
        }
        const FlowPath& p = rp.flow.paths[g];
        if (p.src != bk.first || p.tgt != bk.second) {
          return "path " + p.id + " does not carry its block endpoints";
        }
      }
    }
  }
  if (total != rp.colim.apexSize) {
    return "block colimits add to " + str(total) + ", global has " + str(rp.colim.apexSize);
  }
  return "";
}

// ---------------------------------------------------------------------------
// moore generation (same shapes as the unit fixtures, but locally seeded)

PLPath random_unit_path(Rng& rng, Rat start) {
  int den = 2 + static_cast<int>(rng.below(7));
  std::vector<PLPoint> pts;
  pts.push_back({0, start});
  Rat y = start;
  std::vector<int> cuts;
  for (int i = 1; i < den; ++i) {
    if (rng.chance(1, 3)) cuts.push_back(i);
  }
  for (int c : cuts) {
    y += Rat(static_cast<int>(rng.below(9)) - 4, 1 + static_cast<int>(rng.below(3)));
    pts.push_back({Rat(c, den), y});
  }
  y += Rat(static_cast<int>(rng.below(9)) - 4, 1 + static_cast<int>(rng.below(3)));
  pts.push_back({1, y});
  return make_pl_path(1, std::move(pts));
}

PLPath random_path(Rng& rng, Rat start) {
  PLPath unit = random_unit_path(rng, start);
  Rat dur(1 + static_cast<int>(rng.below(5)), 1 + static_cast<int>(rng.below(3)));
  std::vector<PLPoint> pts;
  for (const PLPoint& p : unit.pts) pts.push_back({p.t * dur, p.y});
  return make_pl_path(dur, std::move(pts));
}

PLReparam random_reparam(Rng& rng) {
  int den = 2 + static_cast<int>(rng.below(6));
  std::vector<PLPoint> pts;
  pts.push_back({0, 0});
  std::vector<int> ys;
  for (int i = 1; i < den; ++i) ys.push_back(i);
  int k = 0;
  for (int i = 1; i < den; ++i) {
    if (rng.chance(1, 2) && k < i) {
      int lo = k;
      int hi = static_cast<int>(ys.size()) - (den - 1 - i);
      if (lo < hi) {
        k = lo + static_cast<int>(rng.below(hi - lo)) + 1;
        pts.push_back({Rat(i, den), Rat(ys[k - 1], den)});
      }
    }
  }
  pts.push_back({1, 1});
  return make_pl_reparam(std::move(pts));
}

// ---------------------------------------------------------------------------
// suites

void poset_suite(CheckLog& log, std::uint64_t seed, int count) {
  const int degree = 4;
  std::vector<PosetContext> ctxs = {
      PosetContext({"a"}, "a", "a"),
      PosetContext({"a", "b"}, "a", "a"),
      PosetContext({"a", "b"}, "a", "b"),
      PosetContext({"a", "b", "c"}, "a", "b"),
  };
  for (const PosetContext& ctx : ctxs) {
    long objects = 0, related = 0;
    std::string w = poset_truncation_witness(ctx, degree, &objects, &related);
    log.add("poset", "truncation laws [" + ctx_label(ctx) + ", degree " + str(degree) + "]",
            objects, w);
  }
  for (const PosetContext& ctx : ctxs) {
    if (ctx.u == ctx.v) continue;
    MiddleUniqueness mu = middle_uniqueness(ctx, degree);
    log.add("poset", "unique factorization middles [" + ctx_label(ctx) + "]", mu.relatedPairs,
            mu.nonUnique == 0 ? "" : mu.witness);
  }

  {
    // Pinned colliding pair: when u = v several middles can exist; factorize
    // must pick the least one and still reproduce the target.
    PosetContext ctx({"a"}, "a", "a");
    TupleObject m = parse_tuple(ctx, "(a 0 a)(a 0 a)(a 1 a)(a 0 a)(a 0 a)");
    TupleObject n = parse_tuple(ctx, "(a 0 a)(a 1 a)(a 1 a)(a 0 a)");
    std::string w;
    std::vector<TupleObject> mids = factorization_middles(ctx, m, n);
    if (mids.size() != 2) {
      w = "expected 2 middles on the pinned pair, found " + str(static_cast<long>(mids.size()));
    } else {
      ArrowFactorization f = factorize(ctx, m, n);
      if (!(f.middle == *std::min_element(mids.begin(), mids.end()))) {
        w = "factorize did not choose the least middle";
      } else if (apply_factorization(ctx, m, f) != n) {
        w = "factorization does not reproduce the target";
      }
    }
    log.add("poset", "least middle is chosen when middles collide", 1, w);
  }

  {
    // Concatenating related pairs of composable chains preserves the order.
    Rng rng = sub_rng(seed, 30);
    PosetContext ctx({"a", "b", "c"}, "a", "b");
    Enumeration en = enumerate_up_to(ctx, 3);
    std::vector<std::vector<int>> byFront(ctx.states.size());
    for (size_t i = 0; i < en.objects.size(); ++i) {
      byFront[en.objects[i].cells.front().src].push_back(static_cast<int>(i));
    }
    auto walk_up = [&](const TupleObject& start) {
      TupleObject t = start;
      int steps = rng.range(0, 2);
      for (int s = 0; s < steps; ++s) {
        std::vector<GeneratorArrow> gens = applicable_generators(ctx, t);
        if (gens.empty()) break;
        t = apply_generator(ctx, t, gens[rng.below(gens.size())]);
      }
      return t;
    };
    std::string w;
    for (int k = 0; k < count; ++k) {
      const TupleObject& m = en.objects[rng.below(en.objects.size())];
      const std::vector<int>& pool = byFront[m.cells.back().tgt];
      if (pool.empty()) continue;
      const TupleObject& m2 = en.objects[pool[rng.below(pool.size())]];
      TupleObject n = walk_up(m);
      TupleObject n2 = walk_up(m2);
      if (!leq(ctx, m, n) || !leq(ctx, m2, n2)) {
        note(w, "a generator word did not yield a related pair");
        continue;
      }
      std::vector<Cell> catM = m.cells, catN = n.cells;
      catM.insert(catM.end(), m2.cells.begin(), m2.cells.end());
      catN.insert(catN.end(), n2.cells.begin(), n2.cells.end());
      if (!leq(ctx, flowspace::make_tuple(ctx, catM), flowspace::make_tuple(ctx, catN))) {
        note(w, "concatenation broke the order: " + format_tuple(ctx, m) + " * " +
                    format_tuple(ctx, m2));
      }
    }
    log.add("poset", "concatenation preserves the order", count, w);
  }
}

void diagrams_suite(CheckLog& log, std::uint64_t seed, int count) {
  {
    Rng rng = sub_rng(seed, 20);
    std::string w;
    for (int k = 0; k < count; ++k) {
      SetDiagram d = random_set_diagram(rng, 6, 5);
      note(w, colimit_components_witness(d, colimit(d)));
    }
    log.add("diagrams", "colimit classes match zigzag components", count, w);
  }
  {
    Rng rng = sub_rng(seed, 21);
    std::string wPos, wNeg;
    long perturbed = 0;
    for (int k = 0; k < count; ++k) {
      SetDiagram d = random_set_diagram(rng, 6, 5);
      ColimitResult c = colimit(d);
      int testSize = rng.range(1, 5);
      std::vector<int> f(c.apexSize);
      for (int& v : f) v = rng.range(0, testSize - 1);
      std::vector<std::vector<int>> legs(d.index.size());
      for (int i = 0; i < d.index.size(); ++i) {
        legs[i].resize(d.sizes[i]);
        for (int x = 0; x < d.sizes[i]; ++x) legs[i][x] = f[c.inject[i][x]];
      }
      try {
        if (cocone_factorization(d, c, legs, testSize) != f) {
          note(wPos, "iteration " + str(k) + ": mediating function differs from the inducing one");
        }
      } catch (const InputError& e) {
        note(wPos, "iteration " + str(k) + ": valid cocone rejected: " + e.what());
      }

      // Perturbing one element of a class with two members must be rejected.
      if (testSize < 2) continue;
      std::vector<int> classSize(c.apexSize, 0);
      for (int i = 0; i < d.index.size(); ++i) {
        for (int x = 0; x < d.sizes[i]; ++x) ++classSize[c.inject[i][x]];
      }
      bool found = false;
      for (int i = 0; i < d.index.size() && !found; ++i) {
        for (int x = 0; x < d.sizes[i] && !found; ++x) {
          if (classSize[c.inject[i][x]] < 2) continue;
          found = true;
          ++perturbed;
          legs[i][x] = (legs[i][x] + 1) % testSize;
          try {
            cocone_factorization(d, c, legs, testSize);
            note(wNeg, "iteration " + str(k) + ": non-commuting legs accepted");
          } catch (const InputError&) {
            // expected
          }
        }
      }
    }
    log.add("diagrams", "cocone factorization reproduces the inducing function", count, wPos);
    log.add("diagrams", "cocone factorization rejects perturbed legs", perturbed, wNeg);
  }
  {
    Rng rng = sub_rng(seed, 22);
    std::string w;
    for (int k = 0; k < count; ++k) {
      SetDiagram da = random_set_diagram(rng, 4, 4);
      SetDiagram db = random_set_diagram(rng, 4, 4);
      ColimitResult ca = colimit(da);
      ColimitResult cb = colimit(db);
      ColimitResult cs = colimit(sum_diagrams({da, db}));
      SumLayout lay = sum_layout({da, db});
      if (cs.apexSize != ca.apexSize + cb.apexSize) {
        note(w, "iteration " + str(k) + ": sum colimit size " + str(cs.apexSize) + " != " +
                    str(ca.apexSize) + " + " + str(cb.apexSize));
        continue;
      }
      for (int i = 0; i < da.index.size(); ++i) {
        for (int x = 0; x < da.sizes[i]; ++x) {
          if (cs.inject[lay.objectBase[0] + i][x] != ca.inject[i][x]) {
            note(w, "iteration " + str(k) + ": left block classes shifted");
          }
        }
      }
      for (int j = 0; j < db.index.size(); ++j) {
        for (int x = 0; x < db.sizes[j]; ++x) {
          if (cs.inject[lay.objectBase[1] + j][x] != ca.apexSize + cb.inject[j][x]) {
            note(w, "iteration " + str(k) + ": right block classes not offset by the left size");
          }
        }
      }
    }
    log.add("diagrams", "sum colimit is the offset disjoint union", count, w);
  }
  {
    Rng rng = sub_rng(seed, 23);
    std::string w;
    for (int k = 0; k < count; ++k) {
      SetDiagram da = random_set_diagram(rng, 4, 4);
      SetDiagram db = random_set_diagram(rng, 4, 4);
      ColimitResult ca = colimit(da);
      ColimitResult cb = colimit(db);
      ColimitResult cp = colimit(product_diagram(da, db));
      int nb = db.index.size();
      std::vector<int> pairOf(cp.apexSize, -1);
      std::vector<char> hit(static_cast<size_t>(ca.apexSize) * cb.apexSize, 0);
      bool bad = false;
      for (int i = 0; i < da.index.size() && !bad; ++i) {
        for (int j = 0; j < nb && !bad; ++j) {
          for (int xa = 0; xa < da.sizes[i] && !bad; ++xa) {
            for (int xb = 0; xb < db.sizes[j] && !bad; ++xb) {
              int cls = cp.inject[i * nb + j][xa * db.sizes[j] + xb];
              int pr = ca.inject[i][xa] * cb.apexSize + cb.inject[j][xb];
              if (pairOf[cls] == -1) {
                pairOf[cls] = pr;
              } else if (pairOf[cls] != pr) {
                note(w, "iteration " + str(k) + ": canonical map ill-defined on a product class");
                bad = true;
              }
            }
          }
        }
      }
      if (bad) continue;
      for (int cls = 0; cls < cp.apexSize && !bad; ++cls) {
        if (hit[pairOf[cls]]) {
          note(w, "iteration " + str(k) + ": canonical map not injective");
          bad = true;
        }
        hit[pairOf[cls]] = 1;
      }
      if (bad) continue;
      for (size_t pr = 0; pr < hit.size(); ++pr) {
        if (!hit[pr]) {
          note(w, "iteration " + str(k) + ": canonical map not surjective");
          break;
        }
      }
    }
    log.add("diagrams", "product colimit maps bijectively onto the product", count, w);
  }
}

void pushout_suite(CheckLog& log, std::uint64_t seed, int count) {
  {
    Rng rng = sub_rng(seed, 10);
    std::string w;
    for (int k = 0; k < count; ++k) {
      CorpusInstance inst = random_corpus_instance(rng);
      try {
        CompareResult cmp = compare_with_oracle(inst.a, inst.att);
        if (!cmp.ok) {
          note(w, cmp.message + "; flow " + flow_to_json(inst.a).dump() + "; attachment " +
                      attachment_to_json(inst.a, inst.att).dump());
        }
      } catch (const std::exception& e) {
        note(w, "iteration " + str(k) + ": unexpected error: " + e.what() + "; flow " +
                    flow_to_json(inst.a).dump());
      }
    }
    log.add("pushout", "pathspace colimit matches the word oracle", count, w);
  }
  {
    Rng rng = sub_rng(seed, 11);
    long n = std::min(count, 50);
    std::string w;
    for (long k = 0; k < n; ++k) {
      CorpusInstance inst = random_corpus_instance(rng);
      try {
        GlobPushout po = pushout_glob_oracle(inst.a, inst.att);
        note(w, word_universe_witness(inst.a, inst.att, po));
      } catch (const std::exception& e) {
        note(w, "iteration " + str(k) + ": unexpected error: " + e.what());
      }
    }
    log.add("pushout", "word universe respects endpoints and generates all paths", n, w);
  }
  {
    Rng rng = sub_rng(seed, 12);
    long n = std::min(count, 40);
    std::string w;
    for (long k = 0; k < n; ++k) {
      CorpusInstance inst = random_corpus_instance(rng);
      try {
        note(w, latching_laws_witness(inst.a, inst.att));
      } catch (const std::exception& e) {
        note(w, "iteration " + str(k) + ": unexpected error: " + e.what() + "; flow " +
                    flow_to_json(inst.a).dump());
      }
    }
    log.add("pushout", "latching laws hold on every support object", n, w);
  }
  {
    Rng rng = sub_rng(seed, 13);
    long n = std::min(count, 20);
    std::string w;
    for (long k = 0; k < n; ++k) {
      try {
        TowerChain tw = random_tower(rng, rng.range(1, 6));
        if (!tower_pathspace_check(tw.flows, tw.maps)) {
          note(w, "iteration " + str(k) + ": tower colimit does not match the glued path space");
        }
      } catch (const std::exception& e) {
        note(w, "iteration " + str(k) + ": tower chain rejected: " + e.what());
      }
    }
    log.add("pushout", "path spaces commute with tower colimits", n, w);
  }
  {
    Rng rng = sub_rng(seed, 14);
    check_mediating(rng, std::min(count, 30), log);
  }
  {
    Rng rng = sub_rng(seed, 15);
    long n = std::min(count, 12);
    std::string w;
    for (long k = 0; k < n; ++k) {
      CorpusInstance inst = random_corpus_instance(rng, 3, 12);
      try {
        note(w, support_restriction_witness(pathspace_via_reedy(inst.a, inst.att)));
      } catch (const std::exception& e) {
        note(w, "iteration " + str(k) + ": unexpected error: " + e.what());
      }
    }
    log.add("pushout", "support truncation preserves the colimit", n, w);
  }
  {
    Rng rng = sub_rng(seed, 16);
    long n = std::min(count, 25);
    std::string w;
    for (long k = 0; k < n; ++k) {
      CorpusInstance inst = random_corpus_instance(rng);
      try {
        note(w, block_decomposition_witness(pathspace_via_reedy(inst.a, inst.att)));
      } catch (const std::exception& e) {
        note(w, "iteration " + str(k) + ": unexpected error: " + e.what());
      }
    }
    log.add("pushout", "colimit decomposes into endpoint blocks", n, w);
  }
}

void moore_suite(CheckLog& log, std::uint64_t seed, int count) {
  {
    Rng rng = sub_rng(seed, 40);
    std::string w;
    for (int k = 0; k < count; ++k) {
      PLPath a = random_path(rng, Rat(static_cast<int>(rng.below(5)) - 2));
      PLPath b = random_path(rng, a.pts.back().y);
      PLPath c = random_path(rng, b.pts.back().y);
      if (!(moore_compose(moore_compose(a, b), c) == moore_compose(a, moore_compose(b, c)))) {
        note(w, "associativity failed on " + format_pl_path(a) + " ; " + format_pl_path(b) +
                    " ; " + format_pl_path(c));
      }
    }
    log.add("moore", "moore composition is associative on the nose", count, w);
  }
  {
    // Pinned witness that the normalized composition is not associative, and
    // that the fixed reparametrization repairs exactly this triple.
    std::string w;
    PLPath a = make_pl_path(1, {{0, 0}, {1, 1}});
    PLPath b = make_pl_path(1, {{0, 1}, {1, 2}});
    PLPath c = make_pl_path(1, {{0, 2}, {1, 3}});
    PLPath lhs = normalized_compose(normalized_compose(a, b), c);
    PLPath rhs = normalized_compose(a, normalized_compose(b, c));
    if (!(lhs.pts == std::vector<PLPoint>{{0, 0}, {Rat(1, 2), 2}, {1, 3}})) {
      note(w, "left association has unexpected breakpoints: " + format_pl_path(lhs));
    }
    if (!(rhs.pts == std::vector<PLPoint>{{0, 0}, {Rat(1, 2), 1}, {1, 3}})) {
      note(w, "right association has unexpected breakpoints: " + format_pl_path(rhs));
    }
    if (lhs == rhs) note(w, "normalized composition was associative on the witness triple");
    try {
      PLReparam phi = associator(a, b, c);
      if (reparam_at(phi, Rat(1, 4)) != Rat(1, 2) || reparam_at(phi, Rat(1, 2)) != Rat(3, 4)) {
        note(w, "associator breakpoints moved: " + format_pl_reparam(phi));
      }
      if (!(act(rhs, phi) == lhs)) note(w, "associator does not repair the witness triple");
    } catch (const std::exception& e) {
      note(w, std::string("associator rejected the witness triple: ") + e.what());
    }
    log.add("moore", "normalized composition fails associativity on the pinned triple", 1, w);
  }
  {
    Rng rng = sub_rng(seed, 41);
    std::string w;
    for (int k = 0; k < count; ++k) {
      PLPath x = random_unit_path(rng, 0);
      PLPath y = random_unit_path(rng, x.pts.back().y);
      PLPath z = random_unit_path(rng, y.pts.back().y);
      try {
        PLReparam phi = associator(x, y, z);
        PLPath lhs = normalized_compose(normalized_compose(x, y), z);
        PLPath rhs = normalized_compose(x, normalized_compose(y, z));
        if (!(act(rhs, phi) == lhs)) {
          note(w, "iteration " + str(k) + ": repair identity failed");
        }
      } catch (const std::exception& e) {
        note(w, "iteration " + str(k) + ": associator rejected a composable triple: " + e.what());
      }
    }
    log.add("moore", "the fixed associator repairs every composable triple", count, w);
  }
  {
    Rng rng = sub_rng(seed, 42);
    std::string w;
    for (int k = 0; k < count; ++k) {
      PLReparam phi = random_reparam(rng);
      PLReparam psi = random_reparam(rng);
      int den = rng.range(1, 8);
      Rat s(rng.range(0, den), den);
      try {
        PLReparam mix = blend(phi, psi, s);
        std::vector<PLPoint> pts = mix.pts;
        if (!(make_pl_reparam(std::move(pts)) == mix)) {
          note(w, "iteration " + str(k) + ": blend output is not normalized");
        }
        if (!(blend(phi, psi, 0) == phi) || !(blend(phi, psi, 1) == psi)) {
          note(w, "iteration " + str(k) + ": blend endpoints are not the inputs");
        }
      } catch (const std::exception& e) {
        note(w, "iteration " + str(k) + ": blend left the group: " + e.what());
      }
    }
    log.add("moore", "blend stays inside the reparametrization group", count, w);
  }
  {
    Rng rng = sub_rng(seed, 43);
    std::string w;
    for (int k = 0; k < count; ++k) {
      PLReparam phi = random_reparam(rng);
      PLReparam psi = random_reparam(rng);
      PLPath g = random_unit_path(rng, Rat(static_cast<int>(rng.below(5)) - 2));
      if (!(compose_reparam(phi, invert_reparam(phi)) == identity_reparam())) {
        note(w, "iteration " + str(k) + ": a reparametrization lost its inverse");
      }
      if (!(invert_reparam(invert_reparam(phi)) == phi)) {
        note(w, "iteration " + str(k) + ": double inversion moved a reparametrization");
      }
      if (!(act(g, identity_reparam()) == g)) {
        note(w, "iteration " + str(k) + ": the identity acted nontrivially");
      }
      if (!(act(act(g, phi), psi) == act(g, compose_reparam(phi, psi)))) {
        note(w, "iteration " + str(k) + ": action does not respect composition");
      }
    }
    log.add("moore", "reparametrizations form a group acting on paths", count, w);
  }
  {
    Rng rng = sub_rng(seed, 44);
    std::string w;
    for (int k = 0; k < count; ++k) {
      PLPath g = random_path(rng, Rat(static_cast<int>(rng.below(7)) - 3));
      if (!(parse_pl_path(format_pl_path(g)) == g)) {
        note(w, "iteration " + str(k) + ": literal round-trip changed " + format_pl_path(g));
      }
      PLPath unit = rescale(g);
      if (unit.duration != 1) {
        note(w, "iteration " + str(k) + ": rescale did not land on duration 1");
        continue;
      }
      for (int q = 0; q <= 4; ++q) {
        if (value_at(unit, Rat(q, 4)) != value_at(g, g.duration * Rat(q, 4))) {
          note(w, "iteration " + str(k) + ": rescale moved a sampled value");
        }
      }
    }
    log.add("moore", "literals round-trip and rescale is the affine change", count, w);
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// public surface

std::string poset_truncation_witness(const PosetContext& ctx, int maxDegree, long* objectsOut,
                                     long* relatedOut) {
  Truncation tr = analyze_truncation(ctx, maxDegree);
  const Enumeration& en = tr.en;
  if (objectsOut) *objectsOut = tr.n;
  if (relatedOut) *relatedOut = 0;
  auto name = [&](int i) { return format_tuple(ctx, en.objects[i]); };

  // Covers are exactly the deduplicated single-generator pairs inside the
  // truncation, and every generator moves the degree by one in its direction.
  std::vector<std::pair<int, int>> genPairs;
  for (int i = 0; i < tr.n; ++i) {
    for (GeneratorArrow g : applicable_generators(ctx, en.objects[i])) {
      TupleObject to = apply_generator(ctx, en.objects[i], g);
      int j = en.index_of(to);
      if (j < 0) continue;
      int want = g.kind == GenKind::Compose ? -1 : 1;
      if (to.degree() - en.objects[i].degree() != want) {
        return "a generator at " + name(i) + " moved the degree by " +
               str(to.degree() - en.objects[i].degree());
      }
      genPairs.push_back({i, j});
    }
  }
  std::sort(genPairs.begin(), genPairs.end());
  genPairs.erase(std::unique(genPairs.begin(), genPairs.end()), genPairs.end());
  std::vector<std::pair<int, int>> covers = en.covers;
  std::sort(covers.begin(), covers.end());
  if (covers != genPairs) return "enumerated covers disagree with the generator applications";

  // The decision procedure equals raw generator reachability, pair by pair.
  for (int i = 0; i < tr.n; ++i) {
    if (tr.rel[i] != tr.reach[i]) {
      for (int j = 0; j < tr.n; ++j) {
        if (get_bit(tr.rel[i], j) != get_bit(tr.reach[i], j)) {
          return "order disagrees with reachability between " + name(i) + " and " + name(j);
        }
      }
    }
  }

  // leq() agreement: exhaustive on small truncations; on large ones every
  // related pair is revisited by factorize() below, so only a seeded sample
  // of pairs is cross-checked here.
  if (tr.n <= 1500) {
    for (int i = 0; i < tr.n; ++i) {
      for (int j = 0; j < tr.n; ++j) {
        if (leq(ctx, en.objects[i], en.objects[j]) != get_bit(tr.rel[i], j)) {
          return "leq disagrees with the relation matrix between " + name(i) + " and " + name(j);
        }
      }
    }
  } else {
    Rng probe(0xbada11ce ^ static_cast<std::uint64_t>(tr.n));
    for (int i = 0; i < tr.n; ++i) {
      for (int k = 0; k < 32; ++k) {
        int j = static_cast<int>(probe.below(tr.n));
        if (leq(ctx, en.objects[i], en.objects[j]) != get_bit(tr.rel[i], j)) {
          return "leq disagrees with the relation matrix between " + name(i) + " and " + name(j);
        }
      }
    }
  }

  // Order axioms on the validated matrix.
  for (int i = 0; i < tr.n; ++i) {
    if (!get_bit(tr.rel[i], i)) return "leq is not reflexive at " + name(i);
  }
  for (int i = 0; i < tr.n; ++i) {
    for (int j = i + 1; j < tr.n; ++j) {
      if (get_bit(tr.rel[i], j) && get_bit(tr.rel[j], i)) {
        return "antisymmetry fails between " + name(i) + " and " + name(j);
      }
    }
  }
  for (int i = 0; i < tr.n; ++i) {
    for (int j = 0; j < tr.n; ++j) {
      if (!get_bit(tr.rel[i], j)) continue;
      for (int w = 0; w < tr.words; ++w) {
        if (tr.rel[j][w] & ~tr.rel[i][w]) {
          return "transitivity fails through " + name(j) + " from " + name(i);
        }
      }
    }
  }

  // Generator relations: merges commute with shifted indices (group A), flag
  // flips commute (group B), and merges move flips predictably (group C).
  for (int i = 0; i < tr.n; ++i) {
    const TupleObject& t = en.objects[i];
    std::vector<int> cpos, ipos;
    for (GeneratorArrow g : applicable_generators(ctx, t)) {
      (g.kind == GenKind::Compose ? cpos : ipos).push_back(g.position);
    }
    try {
      auto C = [&](const TupleObject& x, int p) {
        return apply_generator(ctx, x, {GenKind::Compose, p});
      };
      auto I = [&](const TupleObject& x, int p) {
        return apply_generator(ctx, x, {GenKind::Include, p});
      };
      for (int ci : cpos) {
        for (int cj : cpos) {
          if (ci >= cj) continue;
          if (C(C(t, cj), ci) != C(C(t, ci), cj - 1)) {
            return "relation group A fails at " + name(i) + " for positions " + str(ci) + "," +
                   str(cj);
          }
        }
      }
      for (int ii : ipos) {
        for (int ij : ipos) {
          if (ii >= ij) continue;
          if (I(I(t, ij), ii) != I(I(t, ii), ij)) {
            return "relation group B fails at " + name(i) + " for positions " + str(ii) + "," +
                   str(ij);
          }
        }
      }
      for (int ci : cpos) {
        for (int ij : ipos) {
          if (ij == ci || ij == ci + 1) continue;
          int jj = ij < ci ? ij : ij - 1;
          if (C(I(t, ij), ci) != I(C(t, ci), jj)) {
            return "relation group C fails at " + name(i) + " for positions " + str(ci) + "," +
                   str(ij);
          }
        }
      }
    } catch (const PreconditionError& e) {
      return "a relation side was not applicable at " + name(i) + ": " + e.what();
    }
  }

  // simplify is the unique Compose fixpoint of the minus closure, and its
  // flag sequence has no adjacent zero pair left to merge.
  for (int i = 0; i < tr.n; ++i) {
    const TupleObject& t = en.objects[i];
    TupleObject sfx = simplify(ctx, t);
    if (has_adjacent_zeros(sfx)) return "simplify left an adjacent zero pair at " + name(i);
    int fixpoints = 0;
    for (const TupleObject& x : minus_closure(ctx, t)) {
      if (has_adjacent_zeros(x)) continue;
      ++fixpoints;
      if (x != sfx) return "a second merge fixpoint exists under " + name(i);
    }
    if (fixpoints != 1) return "no merge fixpoint found under " + name(i);
  }

  // latch_base clears every flag, stays below, and is the minimum of the
  // latching category; the category is the full proper flag-subset family.
  for (int i = 0; i < tr.n; ++i) {
    const TupleObject& t = en.objects[i];
    TupleObject lb = latch_base(ctx, t);
    if (state_chain(lb) != state_chain(t)) return "latch_base changed the chain of " + name(i);
    for (const Cell& c : lb.cells) {
      if (c.flag != 0) return "latch_base kept a raised flag at " + name(i);
    }
    int lbIdx = en.index_of(lb);
    if (lbIdx < 0 || !get_bit(tr.rel[lbIdx], i)) {
      return "latch_base is not below " + name(i);
    }
    std::vector<TupleObject> cat = latching_category(ctx, t);
    if (static_cast<int>(cat.size()) != (1 << t.height()) - 1) {
      return "latching category of " + name(i) + " has " + str(static_cast<long>(cat.size())) +
             " objects";
    }
    std::vector<TupleObject> expected;
    for (int j : tr.groups.at(state_chain(t))) {
      if (j != i && flags_below(en.objects[j], t)) expected.push_back(en.objects[j]);
    }
    std::sort(cat.begin(), cat.end());
    std::sort(expected.begin(), expected.end());
    if (cat != expected) return "latching category of " + name(i) + " misses a flag subset";
    for (const TupleObject& m : cat) {
      if (!leq(ctx, lb, m)) return "latch_base is not minimal under " + name(i);
    }
  }

  // The matching category is the proper minus closure; it is empty exactly
  // at the merge fixpoints and otherwise has simplify(t) terminal.
  for (int i = 0; i < tr.n; ++i) {
    const TupleObject& t = en.objects[i];
    std::vector<TupleObject> mat = matching_category(ctx, t);
    std::vector<TupleObject> expected;
    for (const TupleObject& x : minus_closure(ctx, t)) {
      if (x != t) expected.push_back(x);
    }
    std::sort(mat.begin(), mat.end());
    if (mat != expected) return "matching category of " + name(i) + " is not the proper closure";
    if (mat.empty() != !has_adjacent_zeros(t)) {
      return "matching category emptiness disagrees with the flag pattern at " + name(i);
    }
    TupleObject sfx = simplify(ctx, t);
    for (const TupleObject& x : mat) {
      if (simplify(ctx, x) != sfx) return "matching category of " + name(i) + " has no terminal";
    }
  }

  // Canonical factorization of every related pair: it reproduces the target,
  // carries canonical word shapes, and threads the least candidate middle.
  long related = 0;
  for (int i = 0; i < tr.n; ++i) {
    const TupleObject& m = en.objects[i];
    for (int j = 0; j < tr.n; ++j) {
      if (!get_bit(tr.rel[i], j)) continue;
      ++related;
      const TupleObject& n = en.objects[j];
      ArrowFactorization f;
      try {
        f = factorize(ctx, m, n);
      } catch (const PreconditionError& e) {
        return "factorize rejected the related pair " + name(i) + " -> " + name(j) + ": " +
               e.what();
      }
      if (apply_factorization(ctx, m, f) != n) {
        return "factorization does not reproduce " + name(j) + " from " + name(i);
      }
      for (size_t w = 0; w < f.minusWord.size(); ++w) {
        if (f.minusWord[w].kind != GenKind::Compose ||
            (w > 0 && f.minusWord[w - 1].position >= f.minusWord[w].position)) {
          return "minus word of " + name(i) + " -> " + name(j) + " is not canonical";
        }
      }
      for (size_t w = 0; w < f.plusWord.size(); ++w) {
        if (f.plusWord[w].kind != GenKind::Include ||
            (w > 0 && f.plusWord[w - 1].position >= f.plusWord[w].position)) {
          return "plus word of " + name(i) + " -> " + name(j) + " is not canonical";
        }
      }
      if (static_cast<int>(f.minusWord.size()) != m.degree() - f.middle.degree() ||
          static_cast<int>(f.plusWord.size()) != n.degree() - f.middle.degree()) {
        return "word lengths of " + name(i) + " -> " + name(j) + " do not match the degrees";
      }
      std::vector<TupleObject> mids = factorization_middles(ctx, m, n);
      if (mids.empty() || !(f.middle == *std::min_element(mids.begin(), mids.end()))) {
        return "factorize did not thread the least middle of " + name(i) + " -> " + name(j);
      }
    }
  }
  if (relatedOut) *relatedOut = related;
  return "";
}

MiddleUniqueness middle_uniqueness(const PosetContext& ctx, int maxDegree) {
  Truncation tr = analyze_truncation(ctx, maxDegree);
  MiddleUniqueness out;
  for (int i = 0; i < tr.n; ++i) {
    for (int j = 0; j < tr.n; ++j) {
      if (!get_bit(tr.rel[i], j)) continue;
      ++out.relatedPairs;
      std::vector<TupleObject> mids =
          factorization_middles(ctx, tr.en.objects[i], tr.en.objects[j]);
      if (mids.size() == 1) continue;
      ++out.nonUnique;
      if (out.witness.empty()) {
        out.witness = format_tuple(ctx, tr.en.objects[i]) + " -> " +
                      format_tuple(ctx, tr.en.objects[j]) + " has " +
                      str(static_cast<long>(mids.size())) + " middles:";
        for (const TupleObject& x : mids) out.witness += " " + format_tuple(ctx, x);
      }
    }
  }
  return out;
}

CorpusInstance random_corpus_instance(Rng& rng, int maxStates, int maxPaths, int maxCells,
                                      int maxBoundary) {
  for (;;) {
    int ns = 2 + static_cast<int>(rng.below(maxStates - 1));
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < ns; ++i) {
      for (int j = i + 1; j < ns; ++j) {
        if (rng.chance(1, 2)) edges.push_back({i, j});
      }
    }
    if (edges.empty()) continue;
    std::optional<DiscreteFlow> a = walk_flow(ns, edges, maxPaths);
    if (!a) continue;

    int g0 = static_cast<int>(rng.below(ns - 1));
    int g1 = g0 + 1 + static_cast<int>(rng.below(ns - g0 - 1));
    std::vector<int> homPaths;
    for (int p = 0; p < a->npaths(); ++p) {
      if (a->paths[p].src == g0 && a->paths[p].tgt == g1) homPaths.push_back(p);
    }
    int ncells = 1 + static_cast<int>(rng.below(maxCells));
    std::vector<std::string> cells;
    for (int c = 0; c < ncells; ++c) cells.push_back("z" + std::to_string(c));
    std::vector<std::string> boundary;
    std::vector<int> attach, incl;
    if (!homPaths.empty()) {
      int nb = static_cast<int>(rng.below(maxBoundary + 1));
      for (int b = 0; b < nb; ++b) {
        boundary.push_back("b" + std::to_string(b));
        attach.push_back(homPaths[rng.below(homPaths.size())]);
        incl.push_back(static_cast<int>(rng.below(cells.size())));
      }
    }
    GlobAttachment att = make_attachment(*a, g0, g1, boundary, cells, attach, incl);
    if (!is_loop_free(*a, att)) continue;
    return {*a, att};
  }
}

TowerChain random_tower(Rng& rng, int steps) {
  TowerChain tw;
  for (;;) {
    int ns = rng.range(2, 3);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < ns; ++i) {
      for (int j = i + 1; j < ns; ++j) {
        if (rng.chance(1, 2)) edges.push_back({i, j});
      }
    }
    std::optional<DiscreteFlow> f = walk_flow(ns, edges, 8);
    if (f) {
      tw.flows.push_back(*f);
      break;
    }
  }
  for (int step = 0; step < steps; ++step) {
    // Every extension is injective on paths: fresh states, merges of
    // mutually unreachable states, and boundary-free cell attachments.
    const DiscreteFlow& cur = tw.flows.back();
    if (cur.npaths() > 60) break;
    int kind = rng.range(0, 2);
    if (kind == 1) {
      std::vector<std::pair<int, int>> cands;
      for (int s = 0; s < cur.nstates(); ++s) {
        for (int t = s + 1; t < cur.nstates(); ++t) {
          if (hom_empty(cur, s, t) && hom_empty(cur, t, s)) cands.push_back({s, t});
        }
      }
      if (!cands.empty()) {
        auto [s, t] = cands[rng.below(cands.size())];
        MergePushout mp = pushout_merge_states(cur, s, t);
        if (!mp.flow.truncated) {
          tw.flows.push_back(mp.flow);
          tw.maps.push_back(mp.fromA);
          continue;
        }
      }
    } else if (kind == 2) {
      std::vector<GlobAttachment> cands;
      for (int g0 = 0; g0 < cur.nstates(); ++g0) {
        for (int g1 = 0; g1 < cur.nstates(); ++g1) {
          if (g0 == g1) continue;
          GlobAttachment att =
              make_attachment(cur, g0, g1, {}, {"t" + std::to_string(step) + "z"}, {}, {});
          if (is_loop_free(cur, att)) cands.push_back(att);
        }
      }
      if (!cands.empty()) {
        GlobPushout po = pushout_glob_oracle(cur, cands[rng.below(cands.size())]);
        tw.flows.push_back(po.flow);
        tw.maps.push_back(po.fromA);
        continue;
      }
    }
    AddStatePushout ap = pushout_add_state(cur);
    tw.flows.push_back(ap.flow);
    tw.maps.push_back(ap.fromA);
  }
  return tw;
}

SetDiagram random_set_diagram(Rng& rng, int maxObjects, int maxSize) {
  // Forest parent edges keep any choice of maps functorial; the extra edges
  // along ancestor chains carry the forced composites.
  const int n = rng.range(1, maxObjects);
  std::vector<int> sizes(n);
  for (int& s : sizes) s = rng.range(1, maxSize);
  std::vector<std::pair<int, int>> covers;
  std::vector<std::vector<int>> maps;
  std::vector<int> parent(n, -1);
  std::vector<int> parentEdge(n, -1);
  for (int i = 0; i < n; ++i) {
    if (i + 1 < n && rng.chance(3, 4)) {
      int p = rng.range(i + 1, n - 1);
      parent[i] = p;
      std::vector<int> f(sizes[i]);
      for (int& y : f) y = rng.range(0, sizes[p] - 1);
      parentEdge[i] = static_cast<int>(covers.size());
      covers.push_back({i, p});
      maps.push_back(std::move(f));
    }
  }
  for (int i = 0; i < n; ++i) {
    int a = parent[i];
    if (a < 0) continue;
    std::vector<int> comp = maps[parentEdge[i]];
    while (parent[a] >= 0) {
      const std::vector<int>& up = maps[parentEdge[a]];
      for (int& y : comp) y = up[y];
      a = parent[a];
      if (rng.chance(1, 2)) {
        covers.push_back({i, a});
        maps.push_back(comp);
      }
    }
  }
  std::vector<std::string> names(n);
  for (int i = 0; i < n; ++i) names[i] = "o" + std::to_string(i);
  return SetDiagram(FinitePoset(names, covers), sizes, maps);
}

std::string latching_laws_witness(const DiscreteFlow& a, const GlobAttachment& att) {
  DfDiagram dfF = build_df(a, att);
  DfDiagram dfI = build_df_identity(a, att.g0, att.g1);
  bool homNonempty = !hom_empty(a, att.g0, att.g1);
  for (const TupleObject& n : dfF.support) {
    std::string label = format_tuple(dfF.ctx, n);
    LatchingResult viaCat = latching_object(dfF, n);
    LatchingResult viaCube = latching_via_cube(a, att, n);
    if (viaCat.size != viaCube.size || viaCat.targetSize != viaCube.targetSize) {
      return "latching sizes disagree at " + label + ": " + str(viaCat.size) + " vs " +
             str(viaCube.size);
    }
    // The two constructions index their domains independently, so they are
    // the same morphism exactly when their image multisets over the shared
    // target agree fiber by fiber. (The maps need not be injective: an
    // attachment may glue two paths onto one cell, collapsing latching
    // elements.)
    std::vector<int> si = viaCat.toTarget;
    std::vector<int> sc = viaCube.toTarget;
    std::sort(si.begin(), si.end());
    std::sort(sc.begin(), sc.end());
    if (si != sc) return "latching images disagree at " + label;
    if (n.height() == 0 && viaCat.size != 0) {
      return "nonempty latching object at height zero: " + label;
    }
    // With a nonempty (g0, g1) path set, lowering one flag keeps every
    // factor inhabited, so positive height forces a nonempty latching.
    if (n.height() > 0 && homNonempty && viaCat.size == 0) {
      return "empty latching object at positive height: " + label;
    }
    RelativeLatching rl = relative_latching_map(dfF, dfI, n);
    if (rl.heightZero != (n.height() == 0)) {
      return "relative latching misreports the height at " + label;
    }
    if (rl.heightZero ? !rl.isBijection : !rl.identifiedWithLatching) {
      return "relative latching dichotomy fails at " + label;
    }
  }
  return "";
}

SuiteResult run_suite(const std::string& suite, std::uint64_t seed, int count) {
  if (count < 1) throw InputError("verify: count must be positive");
  if (suite != "poset" && suite != "diagrams" && suite != "pushout" && suite != "moore" &&
      suite != "all") {
    throw InputError("verify: unknown suite '" + suite + "'");
  }
  CheckLog log;
  if (suite == "poset" || suite == "all") poset_suite(log, seed, count);
  if (suite == "diagrams" || suite == "all") diagrams_suite(log, seed, count);
  if (suite == "pushout" || suite == "all") pushout_suite(log, seed, count);
  if (suite == "moore" || suite == "all") moore_suite(log, seed, count);

  SuiteResult out;
  out.report["schema"] = "flowspace-report/1";
  out.report["kind"] = "verify";
  out.report["suite"] = suite;
  out.report["seed"] = seed;
  out.report["count"] = count;
  out.report["checks"] = log.checks;
  out.report["failures"] = log.failures;
  out.failures = log.failures;
  return out;
}

}  // namespace flowspace
