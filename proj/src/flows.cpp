#include "flowspace/flows.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <unordered_map>

#include "flowspace/union_find.hpp"

namespace flowspace {

namespace {

std::string path_desc(const DiscreteFlow& a, int p) {
  std::ostringstream os;
  os << "'" << a.paths[p].id << "' (" << a.states[a.paths[p].src] << " -> "
     << a.states[a.paths[p].tgt] << ")";
  return os.str();
}

}  // namespace

int DiscreteFlow::compose_at(int p, int q) const {
  if (!composable(p, q)) {
    throw PreconditionError("compose: paths " + path_desc(*this, p) + " and " +
                            path_desc(*this, q) + " are not composable");
  }
  int r = compose[p][q];
  if (r < 0) {
    throw PreconditionError("compose: entry for " + path_desc(*this, p) + " . " +
                            path_desc(*this, q) + " is undefined in a truncated flow");
  }
  return r;
}

int DiscreteFlow::path_index(const std::string& id) const {
  for (int p = 0; p < npaths(); ++p) {
    if (paths[p].id == id) return p;
  }
  return -1;
}

void validate_flow(const DiscreteFlow& a) {
  const int ns = a.nstates();
  const int np = a.npaths();
  for (int s = 0; s < ns; ++s) {
    for (int t = s + 1; t < ns; ++t) {
      if (a.states[s] == a.states[t]) {
        throw InputError("flow: duplicate state name '" + a.states[s] + "'");
      }
    }
  }
  for (int p = 0; p < np; ++p) {
    if (a.paths[p].id.empty()) throw InputError("flow: empty path id");
    if (a.paths[p].src < 0 || a.paths[p].src >= ns || a.paths[p].tgt < 0 ||
        a.paths[p].tgt >= ns) {
      throw InputError("flow: path '" + a.paths[p].id + "' has an out-of-range endpoint");
    }
    for (int q = p + 1; q < np; ++q) {
      if (a.paths[p].id == a.paths[q].id) {
        throw InputError("flow: duplicate path id '" + a.paths[p].id + "'");
      }
    }
  }
  if (static_cast<int>(a.compose.size()) != np) {
    throw InputError("flow: compose table must have one row per path");
  }
  for (int p = 0; p < np; ++p) {
    if (static_cast<int>(a.compose[p].size()) != np) {
      throw InputError("flow: compose table row for '" + a.paths[p].id + "' has wrong length");
    }
    for (int q = 0; q < np; ++q) {
      int r = a.compose[p][q];
      if (!a.composable(p, q)) {
        if (r != -1) {
          throw InputError("flow: compose entry set for the non-composable pair " +
                           path_desc(a, p) + " . " + path_desc(a, q));
        }
        continue;
      }
      if (r < 0) {
        if (!a.truncated) {
          throw InputError("flow: missing composite for the composable pair " +
                           path_desc(a, p) + " . " + path_desc(a, q));
        }
        continue;
      }
      if (r >= np) {
        throw InputError("flow: compose entry out of range for " + path_desc(a, p) + " . " +
                         path_desc(a, q));
      }
      if (a.paths[r].src != a.paths[p].src || a.paths[r].tgt != a.paths[q].tgt) {
        throw InputError("flow: composite of " + path_desc(a, p) + " . " + path_desc(a, q) +
                         " is " + path_desc(a, r) + ", endpoints do not match");
      }
    }
  }
  // Associativity, checked wherever all four intermediate composites exist.
  for (int p = 0; p < np; ++p) {
    for (int q = 0; q < np; ++q) {
      if (!a.compose_defined(p, q)) continue;
      int pq = a.compose[p][q];
      for (int r = 0; r < np; ++r) {
        if (!a.composable(q, r)) continue;
        int qr = a.compose[q][r];
        if (qr < 0 || a.compose[pq][r] < 0 || a.compose[p][qr] < 0) continue;
        if (a.compose[pq][r] != a.compose[p][qr]) {
          std::ostringstream os;
          os << "flow: associativity fails at (" << a.paths[p].id << ", " << a.paths[q].id
             << ", " << a.paths[r].id << "): (" << a.paths[p].id << "." << a.paths[q].id
             << ")." << a.paths[r].id << " = " << a.paths[a.compose[pq][r]].id << " but "
             << a.paths[p].id << ".(" << a.paths[q].id << "." << a.paths[r].id
             << ") = " << a.paths[a.compose[p][qr]].id;
          throw InputError(os.str());
        }
      }
    }
  }
}

DiscreteFlow make_flow(std::vector<std::string> states, std::vector<FlowPath> paths,
                       std::vector<std::vector<int>> compose, bool truncated) {
  DiscreteFlow a;
  a.states = std::move(states);
  a.paths = std::move(paths);
  a.compose = std::move(compose);
  a.truncated = truncated;
  validate_flow(a);
  return a;
}

DiscreteFlow make_glob(const std::vector<std::string>& z) {
  DiscreteFlow g;
  g.states = {"0", "1"};
  for (const std::string& name : z) g.paths.push_back({name, 0, 1});
  g.compose.assign(z.size(), std::vector<int>(z.size(), -1));
  validate_flow(g);
  return g;
}

bool verify_flow_map(const DiscreteFlow& src, const DiscreteFlow& dst, const FlowMap& f) {
  if (static_cast<int>(f.stateMap.size()) != src.nstates()) return false;
  if (static_cast<int>(f.pathMap.size()) != src.npaths()) return false;
  for (int s : f.stateMap) {
    if (s < 0 || s >= dst.nstates()) return false;
  }
  for (int p = 0; p < src.npaths(); ++p) {
    int fp = f.pathMap[p];
    if (fp < 0 || fp >= dst.npaths()) return false;
    if (dst.paths[fp].src != f.stateMap[src.paths[p].src]) return false;
    if (dst.paths[fp].tgt != f.stateMap[src.paths[p].tgt]) return false;
  }
  for (int p = 0; p < src.npaths(); ++p) {
    for (int q = 0; q < src.npaths(); ++q) {
      if (!src.compose_defined(p, q)) continue;
      // Images are composable because endpoints are preserved. An undefined
      // image entry can only occur in a truncated codomain and is skipped.
      int img = dst.compose[f.pathMap[p]][f.pathMap[q]];
      if (img < 0) continue;
      if (img != f.pathMap[src.compose[p][q]]) return false;
    }
  }
  return true;
}

GlobAttachment make_attachment(const DiscreteFlow& a, int g0, int g1,
                               std::vector<std::string> boundary, std::vector<std::string> cells,
                               std::vector<int> attach, std::vector<int> incl) {
  if (g0 < 0 || g0 >= a.nstates() || g1 < 0 || g1 >= a.nstates()) {
    throw InputError("attachment: g0/g1 out of range");
  }
  auto check_names = [](const std::vector<std::string>& names, const char* what) {
    for (size_t i = 0; i < names.size(); ++i) {
      if (names[i].empty()) throw InputError(std::string("attachment: empty ") + what + " name");
      for (size_t j = i + 1; j < names.size(); ++j) {
        if (names[i] == names[j]) {
          throw InputError(std::string("attachment: duplicate ") + what + " name '" + names[i] +
                           "'");
        }
      }
    }
  };
  check_names(boundary, "boundary");
  check_names(cells, "cell");
  if (attach.size() != boundary.size() || incl.size() != boundary.size()) {
    throw InputError("attachment: attach and incl must be defined on exactly the boundary");
  }
  for (size_t b = 0; b < boundary.size(); ++b) {
    int p = attach[b];
    if (p < 0 || p >= a.npaths()) {
      throw InputError("attachment: attach('" + boundary[b] + "') is not a path of the flow");
    }
    if (a.paths[p].src != g0 || a.paths[p].tgt != g1) {
      throw InputError("attachment: attach('" + boundary[b] + "') = " + path_desc(a, p) +
                       " does not run from g0 to g1");
    }
    if (incl[b] < 0 || incl[b] >= static_cast<int>(cells.size())) {
      throw InputError("attachment: incl('" + boundary[b] + "') is not a cell");
    }
  }
  GlobAttachment att;
  att.g0 = g0;
  att.g1 = g1;
  att.boundary = std::move(boundary);
  att.cells = std::move(cells);
  att.attach = std::move(attach);
  att.incl = std::move(incl);
  return att;
}

AttachedCellSet attached_cells(const DiscreteFlow& a, const GlobAttachment& att) {
  // Pushout in sets: start from P_{g0,g1} |_| cells and glue attach(b) to
  // incl(b) for every boundary element b.
  std::vector<int> homPaths;
  for (int p = 0; p < a.npaths(); ++p) {
    if (a.paths[p].src == att.g0 && a.paths[p].tgt == att.g1) homPaths.push_back(p);
  }
  const int nh = static_cast<int>(homPaths.size());
  const int nc = static_cast<int>(att.cells.size());
  std::vector<int> homSlot(a.npaths(), -1);
  for (int i = 0; i < nh; ++i) homSlot[homPaths[i]] = i;

  UnionFind uf(nh + nc);
  for (size_t b = 0; b < att.boundary.size(); ++b) {
    uf.unite(homSlot[att.attach[b]], nh + att.incl[b]);
  }

  AttachedCellSet t;
  t.fromPath.assign(a.npaths(), -1);
  t.fromCell.assign(nc, -1);
  std::vector<int> classOfRoot(nh + nc, -1);
  // Number classes in slot order so path-backed classes come first.
  for (int i = 0; i < nh + nc; ++i) {
    int r = uf.find(i);
    if (classOfRoot[r] < 0) classOfRoot[r] = t.count++;
    int cls = classOfRoot[r];
    if (i < nh) {
      t.fromPath[homPaths[i]] = cls;
    } else {
      t.fromCell[i - nh] = cls;
    }
  }
  // Canonical names: the least path id in the class if one exists, else the
  // least cell name.
  t.names.assign(t.count, "");
  std::vector<char> hasPathName(t.count, 0);
  for (int i = 0; i < nh; ++i) {
    int cls = t.fromPath[homPaths[i]];
    const std::string& id = a.paths[homPaths[i]].id;
    if (!hasPathName[cls] || id < t.names[cls]) t.names[cls] = id;
    hasPathName[cls] = 1;
  }
  for (int c = 0; c < nc; ++c) {
    int cls = t.fromCell[c];
    if (hasPathName[cls]) continue;
    if (t.names[cls].empty() || att.cells[c] < t.names[cls]) t.names[cls] = att.cells[c];
  }
  return t;
}

bool is_loop_free(const DiscreteFlow& a, const GlobAttachment& att) {
  const int ns = a.nstates();
  std::vector<std::vector<char>> edge(ns, std::vector<char>(ns, 0));
  for (const FlowPath& p : a.paths) edge[p.src][p.tgt] = 1;
  if (!att.cells.empty()) edge[att.g0][att.g1] = 1;
  // Kahn: the digraph is acyclic iff every state can be peeled off.
  std::vector<int> indeg(ns, 0);
  for (int s = 0; s < ns; ++s) {
    for (int t = 0; t < ns; ++t) {
      if (edge[s][t]) ++indeg[t];
    }
  }
  std::vector<int> queue;
  for (int s = 0; s < ns; ++s) {
    if (indeg[s] == 0) queue.push_back(s);
  }
  int peeled = 0;
  while (!queue.empty()) {
    int s = queue.back();
    queue.pop_back();
    ++peeled;
    for (int t = 0; t < ns; ++t) {
      if (edge[s][t] && --indeg[t] == 0) queue.push_back(t);
    }
  }
  return peeled == ns;
}

std::pair<int, int> letter_ends(const DiscreteFlow& a, const GlobAttachment& att, Letter l) {
  if (l.isCell) return {att.g0, att.g1};
  return {a.paths[l.idx].src, a.paths[l.idx].tgt};
}

std::string render_word(const DiscreteFlow& a, const AttachedCellSet& t, const PathWord& w) {
  std::string out;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) out += "*";
    if (w[i].isCell) {
      out += "[" + t.names[w[i].idx] + "]";
    } else {
      out += a.paths[w[i].idx].id;
    }
  }
  return out;
}

int GlobPushout::class_of_word(const PathWord& w) const {
  // The universe is sorted by (length, letters), so binary search applies.
  auto cmp = [](const PathWord& x, const PathWord& y) {
    if (x.size() != y.size()) return x.size() < y.size();
    return x < y;
  };
  auto it = std::lower_bound(universe.begin(), universe.end(), w, cmp);
  if (it == universe.end() || *it != w) return -1;
  return wordClass[it - universe.begin()];
}

namespace {

struct WordHash {
  size_t operator()(const PathWord& w) const {
    size_t h = 1469598103934665603ull;
    for (const Letter& l : w) {
      h ^= (static_cast<size_t>(l.idx) << 1) ^ (l.isCell ? 1u : 0u);
      h *= 1099511628211ull;
    }
    return h;
  }
};

// Shared congruence-closure engine for the two pushout flavours. Words are
// composable letter chains up to maxLen; the congruence is generated by the
// supplied contraction (adjacent pair -> letter) and identification
// (letter ~ letter) rules, closed under contexts by enumerating every
// position of every word. Expansion (the reverse of contraction) never
// leaves the universe when every maximal-length word is free of decomposable
// letters; capped runs that violate this are rejected by the caller via
// max_len_escape_witness.
struct WordEngine {
  std::vector<Letter> letters;
  std::vector<std::pair<int, int>> ends;  // parallel to letters
  // contract[i][j]: letter replacing adjacent (letters[i], letters[j]), -1 if none
  std::vector<std::vector<int>> contract;
  std::vector<std::vector<int>> sameAs;  // per letter: identified letters
  std::vector<char> decomposable;        // per letter: appears as some contraction result
  int maxLen = 0;

  std::vector<PathWord> universe;            // sorted by (length, letters)
  std::unordered_map<PathWord, int, WordHash> wordIndex;
  std::vector<int> wordClass;                // universe index -> class
  std::vector<PathWord> reps;                // class -> least member
  int nclasses = 0;

  int letter_slot(Letter l) const {
    for (size_t i = 0; i < letters.size(); ++i) {
      if (letters[i] == l) return static_cast<int>(i);
    }
    return -1;
  }

  void enumerate() {
    std::vector<std::vector<int>> bySrc;
    int maxState = 0;
    for (auto& e : ends) maxState = std::max({maxState, e.first + 1, e.second + 1});
    bySrc.assign(maxState, {});
    for (size_t i = 0; i < letters.size(); ++i) bySrc[ends[i].first].push_back(static_cast<int>(i));

    PathWord cur;
    std::function<void(int)> grow = [&](int state) {
      if (static_cast<int>(cur.size()) >= maxLen) return;
      for (int slot : bySrc[state]) {
        cur.push_back(letters[slot]);
        universe.push_back(cur);
        grow(ends[slot].second);
        cur.pop_back();
      }
    };
    if (maxLen >= 1) {
      for (int s = 0; s < maxState; ++s) {
        for (int slot : bySrc[s]) {
          cur.push_back(letters[slot]);
          universe.push_back(cur);
          grow(ends[slot].second);
          cur.pop_back();
        }
      }
    }
    std::sort(universe.begin(), universe.end(), [](const PathWord& x, const PathWord& y) {
      if (x.size() != y.size()) return x.size() < y.size();
      return x < y;
    });
    wordIndex.reserve(universe.size() * 2);
    for (size_t i = 0; i < universe.size(); ++i) wordIndex[universe[i]] = static_cast<int>(i);
  }

  // Returns a maximal-length universe word containing an escape-risky
  // letter, if any. A letter is risky when it is identified (possibly
  // through a chain of identifications) with a decomposable one: the word
  // then rewrites, without shrinking, to one that expands outside the
  // universe, so the closure below could miss identifications.
  std::optional<PathWord> max_len_escape_witness() {
    const int nl = static_cast<int>(letters.size());
    UnionFind uf(nl);
    for (int i = 0; i < nl; ++i) {
      for (int j : sameAs[i]) uf.unite(i, j);
    }
    std::vector<char> risky(nl, 0);
    for (int i = 0; i < nl; ++i) {
      if (decomposable[i]) risky[uf.find(i)] = 1;
    }
    for (auto it = universe.rbegin(); it != universe.rend(); ++it) {
      if (static_cast<int>(it->size()) < maxLen) break;
      for (Letter l : *it) {
        int slot = letter_slot(l);
        if (slot >= 0 && risky[uf.find(slot)]) return *it;
      }
    }
    return std::nullopt;
  }

  void close() {
    UnionFind uf(universe.size());
    PathWord scratch;
    for (size_t wi = 0; wi < universe.size(); ++wi) {
      const PathWord& w = universe[wi];
      for (size_t pos = 0; pos < w.size(); ++pos) {
        int slot = letter_slot(w[pos]);
        // Identifications at this position.
        for (int other : sameAs[slot]) {
          scratch = w;
          scratch[pos] = letters[other];
          auto it = wordIndex.find(scratch);
          if (it == wordIndex.end()) {
            throw std::logic_error("word engine: identified word left the universe");
          }
          uf.unite(static_cast<int>(wi), it->second);
        }
        // Contraction of the adjacent pair starting here.
        if (pos + 1 < w.size()) {
          int slot2 = letter_slot(w[pos + 1]);
          int c = contract[slot][slot2];
          if (c >= 0) {
            scratch.clear();
            scratch.insert(scratch.end(), w.begin(), w.begin() + pos);
            scratch.push_back(letters[c]);
            scratch.insert(scratch.end(), w.begin() + pos + 2, w.end());
            auto it = wordIndex.find(scratch);
            if (it == wordIndex.end()) {
              throw std::logic_error("word engine: contracted word left the universe");
            }
            uf.unite(static_cast<int>(wi), it->second);
          }
        }
      }
    }
    wordClass.assign(universe.size(), -1);
    std::vector<int> classOfRoot(universe.size(), -1);
    for (size_t wi = 0; wi < universe.size(); ++wi) {
      int r = uf.find(static_cast<int>(wi));
      if (classOfRoot[r] < 0) {
        classOfRoot[r] = nclasses++;
        reps.push_back(universe[wi]);  // first hit in sorted order is the least member
      }
      wordClass[wi] = classOfRoot[r];
    }
  }
};

std::string cap_error(const PathWord& w, const DiscreteFlow& a, const AttachedCellSet& t,
                      int cap) {
  std::ostringstream os;
  os << "cap " << cap << " is too small to close the word congruence: the maximal word "
     << render_word(a, t, w) << " contains a decomposable letter, so identifications can "
     << "escape the enumerated universe";
  return os.str();
}

}  // namespace

GlobPushout pushout_glob_oracle(const DiscreteFlow& a, const GlobAttachment& att,
                                std::optional<int> cap) {
  if (a.truncated) throw InputError("pushout: base flow has undefined composites");
  if (cap && *cap < 1) throw InputError("pushout: cap must be at least 1");
  bool loopFree = is_loop_free(a, att);
  if (!loopFree && !cap) {
    throw PreconditionError(
        "pushout: flow with attachment is not loop-free; path sets may be infinite, rerun with "
        "a cap");
  }

  AttachedCellSet t = attached_cells(a, att);

  WordEngine eng;
  // Letters: every path of the base flow, then every attached cell class.
  for (int p = 0; p < a.npaths(); ++p) {
    eng.letters.push_back({false, p});
    eng.ends.push_back({a.paths[p].src, a.paths[p].tgt});
  }
  for (int c = 0; c < t.count; ++c) {
    eng.letters.push_back({true, c});
    eng.ends.push_back({att.g0, att.g1});
  }
  const int nl = static_cast<int>(eng.letters.size());
  eng.contract.assign(nl, std::vector<int>(nl, -1));
  eng.sameAs.assign(nl, {});
  eng.decomposable.assign(nl, 0);
  for (int p = 0; p < a.npaths(); ++p) {
    for (int q = 0; q < a.npaths(); ++q) {
      if (a.compose_defined(p, q)) {
        eng.contract[p][q] = a.compose[p][q];
        eng.decomposable[a.compose[p][q]] = 1;
      }
    }
  }
  // A cell class that comes from a path is the same letter as that path.
  for (int p = 0; p < a.npaths(); ++p) {
    if (t.fromPath[p] >= 0) {
      eng.sameAs[p].push_back(a.npaths() + t.fromPath[p]);
      eng.sameAs[a.npaths() + t.fromPath[p]].push_back(p);
    }
  }
  eng.maxLen = cap ? *cap : a.nstates() - 1;
  eng.enumerate();
  if (cap) {
    if (auto w = eng.max_len_escape_witness()) throw PreconditionError(cap_error(*w, a, t, *cap));
  }
  eng.close();

  GlobPushout out;
  out.tcells = t;
  out.universe = eng.universe;
  out.wordClass = eng.wordClass;
  out.flow.states = a.states;
  out.flow.paths.resize(eng.nclasses);
  for (int c = 0; c < eng.nclasses; ++c) {
    const PathWord& rep = eng.reps[c];
    auto e0 = letter_ends(a, att, rep.front());
    auto e1 = letter_ends(a, att, rep.back());
    out.flow.paths[c] = {render_word(a, t, rep), e0.first, e1.second};
  }
  // Rendered ids can collide when input ids already contain the separators;
  // disambiguate deterministically rather than restricting inputs.
  {
    std::map<std::string, int> seen;
    for (auto& p : out.flow.paths) {
      int n = seen[p.id]++;
      if (n > 0) p.id += "#" + std::to_string(n + 1);
    }
  }
  out.flow.compose.assign(eng.nclasses, std::vector<int>(eng.nclasses, -1));
  bool partial = false;
  for (int c1 = 0; c1 < eng.nclasses; ++c1) {
    for (int c2 = 0; c2 < eng.nclasses; ++c2) {
      if (out.flow.paths[c1].tgt != out.flow.paths[c2].src) continue;
      PathWord cat = eng.reps[c1];
      cat.insert(cat.end(), eng.reps[c2].begin(), eng.reps[c2].end());
      auto it = eng.wordIndex.find(cat);
      if (it == eng.wordIndex.end()) {
        partial = true;  // concatenation exceeds the cap
        continue;
      }
      out.flow.compose[c1][c2] = eng.wordClass[it->second];
    }
  }
  out.flow.truncated = partial;
  validate_flow(out.flow);

  out.fromA.stateMap.resize(a.nstates());
  for (int s = 0; s < a.nstates(); ++s) out.fromA.stateMap[s] = s;
  out.fromA.pathMap.resize(a.npaths());
  for (int p = 0; p < a.npaths(); ++p) {
    auto it = eng.wordIndex.find(PathWord{{false, p}});
    if (it == eng.wordIndex.end()) throw std::logic_error("pushout: missing single-letter word");
    out.fromA.pathMap[p] = eng.wordClass[it->second];
  }
  out.cellToPath.resize(att.cells.size());
  for (size_t z = 0; z < att.cells.size(); ++z) {
    auto it = eng.wordIndex.find(PathWord{{true, t.fromCell[z]}});
    if (it == eng.wordIndex.end()) throw std::logic_error("pushout: missing single-cell word");
    out.cellToPath[z] = eng.wordClass[it->second];
  }
  if (!verify_flow_map(a, out.flow, out.fromA)) {
    throw std::logic_error("pushout: canonical map is not a flow map");
  }
  return out;
}

AddStatePushout pushout_add_state(const DiscreteFlow& a) {
  AddStatePushout out;
  out.flow = a;
  std::string fresh;
  for (int k = 0;; ++k) {
    fresh = "x" + std::to_string(k);
    bool clash = false;
    for (const std::string& s : a.states) clash = clash || s == fresh;
    if (!clash) break;
  }
  out.flow.states.push_back(fresh);
  out.fromA.stateMap.resize(a.nstates());
  for (int s = 0; s < a.nstates(); ++s) out.fromA.stateMap[s] = s;
  out.fromA.pathMap.resize(a.npaths());
  for (int p = 0; p < a.npaths(); ++p) out.fromA.pathMap[p] = p;
  validate_flow(out.flow);
  return out;
}

MergePushout pushout_merge_states(const DiscreteFlow& a, int s, int t, std::optional<int> cap) {
  if (a.truncated) throw InputError("merge: base flow has undefined composites");
  if (s < 0 || s >= a.nstates() || t < 0 || t >= a.nstates()) {
    throw InputError("merge: state index out of range");
  }
  if (cap && *cap < 1) throw InputError("merge: cap must be at least 1");
  MergePushout out;
  if (s == t) {
    out.flow = a;
    out.fromA.stateMap.resize(a.nstates());
    for (int i = 0; i < a.nstates(); ++i) out.fromA.stateMap[i] = i;
    out.fromA.pathMap.resize(a.npaths());
    for (int p = 0; p < a.npaths(); ++p) out.fromA.pathMap[p] = p;
    return out;
  }
  int lo = std::min(s, t), hi = std::max(s, t);
  std::vector<int> stateMap(a.nstates());
  std::vector<std::string> states;
  for (int i = 0; i < a.nstates(); ++i) {
    if (i == hi) {
      stateMap[i] = stateMap[lo];
      continue;
    }
    stateMap[i] = static_cast<int>(states.size());
    states.push_back(a.states[i]);
  }

  WordEngine eng;
  for (int p = 0; p < a.npaths(); ++p) {
    eng.letters.push_back({false, p});
    eng.ends.push_back({stateMap[a.paths[p].src], stateMap[a.paths[p].tgt]});
  }
  const int nl = a.npaths();
  eng.contract.assign(nl, std::vector<int>(nl, -1));
  eng.sameAs.assign(nl, {});
  eng.decomposable.assign(nl, 0);
  for (int p = 0; p < nl; ++p) {
    for (int q = 0; q < nl; ++q) {
      // Contraction uses the original composition, so only pairs that were
      // already composable before the merge contract.
      if (a.compose_defined(p, q)) {
        eng.contract[p][q] = a.compose[p][q];
        eng.decomposable[a.compose[p][q]] = 1;
      }
    }
  }

  // Loop-freeness of the merged state digraph.
  const int ns = static_cast<int>(states.size());
  bool loopFree = true;
  {
    std::vector<std::vector<char>> edge(ns, std::vector<char>(ns, 0));
    for (auto& e : eng.ends) edge[e.first][e.second] = 1;
    std::vector<int> indeg(ns, 0);
    for (int i = 0; i < ns; ++i) {
      for (int j = 0; j < ns; ++j) {
        if (edge[i][j]) ++indeg[j];
      }
    }
    std::vector<int> queue;
    for (int i = 0; i < ns; ++i) {
      if (indeg[i] == 0) queue.push_back(i);
    }
    int peeled = 0;
    while (!queue.empty()) {
      int i = queue.back();
      queue.pop_back();
      ++peeled;
      for (int j = 0; j < ns; ++j) {
        if (edge[i][j] && --indeg[j] == 0) queue.push_back(j);
      }
    }
    loopFree = peeled == ns;
  }
  if (!loopFree && !cap) {
    throw PreconditionError(
        "merge: identifying the two states creates a state loop; path sets may be infinite, "
        "rerun with a cap");
  }
  eng.maxLen = cap ? *cap : ns - 1;
  eng.enumerate();
  if (cap) {
    AttachedCellSet noCells;  // rendering only touches path letters here
    if (auto w = eng.max_len_escape_witness()) {
      throw PreconditionError(cap_error(*w, a, noCells, *cap));
    }
  }
  eng.close();

  AttachedCellSet noCells;
  out.flow.states = states;
  out.flow.paths.resize(eng.nclasses);
  for (int c = 0; c < eng.nclasses; ++c) {
    const PathWord& rep = eng.reps[c];
    out.flow.paths[c] = {render_word(a, noCells, rep), eng.ends[rep.front().idx].first,
                         eng.ends[rep.back().idx].second};
  }
  {
    std::map<std::string, int> seen;
    for (auto& p : out.flow.paths) {
      int n = seen[p.id]++;
      if (n > 0) p.id += "#" + std::to_string(n + 1);
    }
  }
  out.flow.compose.assign(eng.nclasses, std::vector<int>(eng.nclasses, -1));
  bool partial = false;
  for (int c1 = 0; c1 < eng.nclasses; ++c1) {
    for (int c2 = 0; c2 < eng.nclasses; ++c2) {
      if (out.flow.paths[c1].tgt != out.flow.paths[c2].src) continue;
      PathWord cat = eng.reps[c1];
      cat.insert(cat.end(), eng.reps[c2].begin(), eng.reps[c2].end());
      auto it = eng.wordIndex.find(cat);
      if (it == eng.wordIndex.end()) {
        partial = true;
        continue;
      }
      out.flow.compose[c1][c2] = eng.wordClass[it->second];
    }
  }
  out.flow.truncated = partial;
  validate_flow(out.flow);

  out.fromA.stateMap = stateMap;
  out.fromA.pathMap.resize(a.npaths());
  for (int p = 0; p < a.npaths(); ++p) {
    auto it = eng.wordIndex.find(PathWord{{false, p}});
    if (it == eng.wordIndex.end()) throw std::logic_error("merge: missing single-letter word");
    out.fromA.pathMap[p] = eng.wordClass[it->second];
  }
  for (int c = 0; c < eng.nclasses; ++c) {
    if (eng.reps[c].size() >= 2) out.newPaths.push_back(c);
  }
  if (!verify_flow_map(a, out.flow, out.fromA)) {
    throw std::logic_error("merge: canonical map is not a flow map");
  }
  return out;
}

FlowMap glob_pushout_mediate(const DiscreteFlow& a, const GlobAttachment& att,
                             const GlobPushout& po, const DiscreteFlow& y, const FlowMap& phi,
                             const std::vector<int>& cellImage) {
  if (y.truncated) throw InputError("mediate: target flow has an undefined composite");
  if (!verify_flow_map(a, y, phi)) {
    throw InputError("mediate: the given map on the base flow is not a flow map");
  }
  if (cellImage.size() != att.cells.size()) {
    throw InputError("mediate: cell images must be given for exactly the cells");
  }
  for (size_t z = 0; z < cellImage.size(); ++z) {
    int p = cellImage[z];
    if (p < 0 || p >= y.npaths()) {
      throw InputError("mediate: image of cell '" + att.cells[z] + "' is not a path");
    }
    if (y.paths[p].src != phi.stateMap[att.g0] || y.paths[p].tgt != phi.stateMap[att.g1]) {
      throw InputError("mediate: image of cell '" + att.cells[z] +
                       "' has the wrong endpoints");
    }
  }
  for (size_t b = 0; b < att.boundary.size(); ++b) {
    if (phi.pathMap[att.attach[b]] != cellImage[att.incl[b]]) {
      throw InputError("mediate: square does not commute at boundary element '" +
                       att.boundary[b] + "'");
    }
  }
  // Image of each attached cell class; the commuting square makes all
  // preimages agree.
  std::vector<int> classImage(po.tcells.count, -1);
  auto offer = [&](int cls, int img, const std::string& what) {
    if (classImage[cls] >= 0 && classImage[cls] != img) {
      throw InputError("mediate: inconsistent images within the attached cell class of " + what);
    }
    classImage[cls] = img;
  };
  for (int p = 0; p < a.npaths(); ++p) {
    if (po.tcells.fromPath[p] >= 0) offer(po.tcells.fromPath[p], phi.pathMap[p], a.paths[p].id);
  }
  for (size_t z = 0; z < att.cells.size(); ++z) {
    offer(po.tcells.fromCell[z], cellImage[z], att.cells[z]);
  }

  auto letter_image = [&](Letter l) {
    return l.isCell ? classImage[l.idx] : phi.pathMap[l.idx];
  };
  FlowMap h;
  h.stateMap = phi.stateMap;
  h.pathMap.assign(po.flow.npaths(), -1);
  for (size_t wi = 0; wi < po.universe.size(); ++wi) {
    const PathWord& w = po.universe[wi];
    int img = letter_image(w[0]);
    for (size_t i = 1; i < w.size(); ++i) img = y.compose_at(img, letter_image(w[i]));
    int cls = po.wordClass[wi];
    if (h.pathMap[cls] >= 0 && h.pathMap[cls] != img) {
      throw std::logic_error("mediate: image is not constant on a congruence class");
    }
    h.pathMap[cls] = img;
  }
  for (int c = 0; c < po.flow.npaths(); ++c) {
    if (h.pathMap[c] < 0) throw std::logic_error("mediate: class with no universe word");
  }
  if (!verify_flow_map(po.flow, y, h)) {
    throw std::logic_error("mediate: computed map is not a flow map");
  }
  return h;
}

}  // namespace flowspace
