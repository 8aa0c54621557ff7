#include "flowspace/reedy.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>
#include <unordered_set>

namespace flowspace {

PosetContext::PosetContext(std::vector<std::string> stateNames, const std::string& uName,
                           const std::string& vName)
    : states(std::move(stateNames)) {
  if (states.empty()) throw InputError("state set must be nonempty");
  for (const std::string& s : states) {
    // Labels must survive the `(src flag tgt)` literal format, which
    // tokenizes on whitespace and parentheses.
    if (s.empty()) throw InputError("state labels must be nonempty");
    for (char c : s) {
      if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')') {
        throw InputError("state label '" + s + "' contains a reserved character");
      }
    }
  }
  for (size_t i = 0; i < states.size(); ++i)
    for (size_t j = i + 1; j < states.size(); ++j)
      if (states[i] == states[j]) throw InputError("duplicate state label: " + states[i]);
  u = index_of(uName);
  v = index_of(vName);
}

int PosetContext::index_of(const std::string& name) const {
  for (size_t i = 0; i < states.size(); ++i)
    if (states[i] == name) return static_cast<int>(i);
  throw InputError("unknown state label: " + name);
}

int TupleObject::height() const {
  int h = 0;
  for (const Cell& c : cells) h += c.flag;
  return h;
}

std::strong_ordering TupleObject::operator<=>(const TupleObject& other) const {
  if (auto c = degree() <=> other.degree(); c != 0) return c;
  if (auto c = length() <=> other.length(); c != 0) return c;
  return std::lexicographical_compare_three_way(cells.begin(), cells.end(), other.cells.begin(),
                                                other.cells.end());
}

size_t TupleHash::operator()(const TupleObject& t) const {
  size_t h = 1469598103934665603ull;
  auto mix = [&h](size_t x) {
    h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  for (const Cell& c : t.cells) {
    mix(static_cast<size_t>(c.src));
    mix(static_cast<size_t>(c.flag));
    mix(static_cast<size_t>(c.tgt));
  }
  return h;
}

namespace {

void validate_cells(const PosetContext& ctx, const std::vector<Cell>& cells) {
  if (cells.empty()) throw InputError("tuple must have at least one cell");
  const int nstates = static_cast<int>(ctx.states.size());
  for (size_t i = 0; i < cells.size(); ++i) {
    const Cell& c = cells[i];
    if (c.src < 0 || c.src >= nstates || c.tgt < 0 || c.tgt >= nstates)
      throw InputError("cell state index outside context");
    if (c.flag != 0 && c.flag != 1) throw InputError("cell flag must be 0 or 1");
    if (c.flag == 1 && (c.src != ctx.u || c.tgt != ctx.v))
      throw InputError("flag-1 cell must be a (u,v) step");
    if (i + 1 < cells.size() && c.tgt != cells[i + 1].src)
      throw InputError("adjacent cells do not chain");
  }
}

}  // namespace

TupleObject make_tuple(const PosetContext& ctx, std::vector<Cell> cells) {
  validate_cells(ctx, cells);
  return TupleObject{std::move(cells)};
}

TupleObject parse_tuple(const PosetContext& ctx, const std::string& text) {
  std::vector<Cell> cells;
  size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos >= text.size()) break;
    if (text[pos] != '(') throw InputError("expected '(' in tuple text: " + text);
    size_t close = text.find(')', pos);
    if (close == std::string::npos) throw InputError("unbalanced '(' in tuple text: " + text);
    std::istringstream in(text.substr(pos + 1, close - pos - 1));
    std::string src, flag, tgt, extra;
    if (!(in >> src >> flag >> tgt) || (in >> extra))
      throw InputError("cell must be '(src flag tgt)': " + text);
    if (flag != "0" && flag != "1") throw InputError("cell flag must be 0 or 1: " + text);
    cells.push_back(Cell{ctx.index_of(src), flag == "1" ? 1 : 0, ctx.index_of(tgt)});
    pos = close + 1;
  }
  return make_tuple(ctx, std::move(cells));
}

std::string format_tuple(const PosetContext& ctx, const TupleObject& t) {
  std::string out;
  for (const Cell& c : t.cells) {
    out += '(';
    out += ctx.states[c.src];
    out += c.flag ? " 1 " : " 0 ";
    out += ctx.states[c.tgt];
    out += ')';
  }
  return out;
}

bool can_apply(const PosetContext& ctx, const TupleObject& obj, GeneratorArrow gen) {
  const int n = obj.length();
  const int i = gen.position;
  if (gen.kind == GenKind::Compose) {
    return i >= 1 && i + 1 <= n && obj.cells[i - 1].flag == 0 && obj.cells[i].flag == 0;
  }
  if (i < 1 || i > n) return false;
  const Cell& c = obj.cells[i - 1];
  return c.flag == 0 && c.src == ctx.u && c.tgt == ctx.v;
}

TupleObject apply_generator(const PosetContext& ctx, const TupleObject& obj, GeneratorArrow gen) {
  if (!can_apply(ctx, obj, gen))
    throw PreconditionError("generator not applicable at position " + std::to_string(gen.position) +
                            " of " + format_tuple(ctx, obj));
  std::vector<Cell> cells = obj.cells;
  const int i = gen.position - 1;  // 0-based
  if (gen.kind == GenKind::Compose) {
    cells[i] = Cell{cells[i].src, 0, cells[i + 1].tgt};
    cells.erase(cells.begin() + i + 1);
  } else {
    cells[i].flag = 1;
  }
  return TupleObject{std::move(cells)};
}

std::vector<GeneratorArrow> applicable_generators(const PosetContext& ctx, const TupleObject& obj) {
  std::vector<GeneratorArrow> out;
  const int n = obj.length();
  for (int i = 1; i < n; ++i)
    if (obj.cells[i - 1].flag == 0 && obj.cells[i].flag == 0)
      out.push_back({GenKind::Compose, i});
  for (int i = 1; i <= n; ++i) {
    const Cell& c = obj.cells[i - 1];
    if (c.flag == 0 && c.src == ctx.u && c.tgt == ctx.v) out.push_back({GenKind::Include, i});
  }
  return out;
}

TupleObject simplify(const PosetContext& ctx, const TupleObject& n) {
  (void)ctx;
  // Each maximal run of flag-0 cells collapses to a single flag-0 cell, which
  // is the common fixpoint of all merge orders.
  std::vector<Cell> cells;
  size_t i = 0;
  while (i < n.cells.size()) {
    if (n.cells[i].flag == 1) {
      cells.push_back(n.cells[i]);
      ++i;
      continue;
    }
    size_t j = i;
    while (j + 1 < n.cells.size() && n.cells[j + 1].flag == 0) ++j;
    cells.push_back(Cell{n.cells[i].src, 0, n.cells[j].tgt});
    i = j + 1;
  }
  return TupleObject{std::move(cells)};
}

TupleObject latch_base(const PosetContext& ctx, const TupleObject& n) {
  (void)ctx;
  std::vector<Cell> cells = n.cells;
  for (Cell& c : cells) c.flag = 0;
  return TupleObject{std::move(cells)};
}

std::vector<TupleObject> minus_closure(const PosetContext& ctx, const TupleObject& m) {
  std::unordered_set<TupleObject, TupleHash> seen;
  std::vector<TupleObject> stack{m};
  seen.insert(m);
  while (!stack.empty()) {
    TupleObject cur = std::move(stack.back());
    stack.pop_back();
    const int n = cur.length();
    for (int i = 1; i < n; ++i) {
      if (cur.cells[i - 1].flag != 0 || cur.cells[i].flag != 0) continue;
      TupleObject next = apply_generator(ctx, cur, {GenKind::Compose, i});
      if (seen.insert(next).second) stack.push_back(next);
    }
  }
  std::vector<TupleObject> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

bool same_chain_flags_leq(const TupleObject& k, const TupleObject& n) {
  if (k.length() != n.length()) return false;
  for (int i = 0; i < k.length(); ++i) {
    if (k.cells[i].src != n.cells[i].src || k.cells[i].tgt != n.cells[i].tgt) return false;
    if (k.cells[i].flag > n.cells[i].flag) return false;
  }
  return true;
}

void check_context(const PosetContext& ctx, const TupleObject& t, const char* which) {
  const int nstates = static_cast<int>(ctx.states.size());
  for (const Cell& c : t.cells) {
    if (c.src < 0 || c.src >= nstates || c.tgt < 0 || c.tgt >= nstates)
      throw InputError(std::string(which) + " tuple was built over a different context");
    if (c.flag == 1 && (c.src != ctx.u || c.tgt != ctx.v))
      throw InputError(std::string(which) + " tuple was built over a different context");
  }
}

}  // namespace

std::vector<TupleObject> factorization_middles(const PosetContext& ctx, const TupleObject& m,
                                               const TupleObject& n) {
  check_context(ctx, m, "left");
  check_context(ctx, n, "right");
  std::vector<TupleObject> out;
  if (n.length() > m.length()) return out;
  if (m.cells.front().src != n.cells.front().src || m.cells.back().tgt != n.cells.back().tgt)
    return out;
  for (const TupleObject& k : minus_closure(ctx, m))
    if (same_chain_flags_leq(k, n)) out.push_back(k);
  return out;  // minus_closure is sorted, so this is too
}

bool leq(const PosetContext& ctx, const TupleObject& m, const TupleObject& n) {
  return !factorization_middles(ctx, m, n).empty();
}

namespace {

// Finds a way to realize `middle` from `m` by merging blocks of cells:
// positions i_0 = 0 < i_1 < ... < i_M = length(m) with middle cell j spanning
// m's cells i_{j-1}+1 .. i_j. A block of size > 1 must be all flag 0; a
// singleton block must carry the exact flag. Leftmost-greedy backtracking,
// so the returned selection is deterministic. Returns the removed interior
// state indices, or false when no selection exists.
bool find_selection(const TupleObject& m, const TupleObject& middle, std::vector<int>& removed) {
  const int N = m.length();
  const int M = middle.length();
  std::vector<int> cut(M + 1, 0);
  cut[M] = N;

  auto block_ok = [&](int j, int lo, int hi) {
    // middle cell j (0-based) spans m cells lo..hi (0-based, inclusive)
    const Cell& d = middle.cells[j];
    if (m.cells[lo].src != d.src || m.cells[hi].tgt != d.tgt) return false;
    if (lo == hi) return m.cells[lo].flag == d.flag;
    if (d.flag != 0) return false;
    for (int t = lo; t <= hi; ++t)
      if (m.cells[t].flag != 0) return false;
    return true;
  };

  // returns true when blocks j..M-1 can cover m cells from `lo` onwards
  std::function<bool(int, int)> rec = [&](int j, int lo) -> bool {
    if (j == M) return lo == N;
    const int remainingBlocks = M - j - 1;
    for (int hi = lo; hi <= N - 1 - remainingBlocks; ++hi) {
      if (!block_ok(j, lo, hi)) continue;
      cut[j + 1] = hi + 1;
      if (rec(j + 1, hi + 1)) return true;
    }
    return false;
  };
  if (!rec(0, 0)) return false;

  removed.clear();
  std::vector<bool> kept(N + 1, false);
  for (int j = 0; j <= M; ++j) kept[cut[j]] = true;
  for (int i = 1; i < N; ++i)
    if (!kept[i]) removed.push_back(i);
  return true;
}

}  // namespace

ArrowFactorization factorize(const PosetContext& ctx, const TupleObject& m, const TupleObject& n) {
  std::vector<TupleObject> middles = factorization_middles(ctx, m, n);
  if (middles.empty())
    throw PreconditionError("no arrow " + format_tuple(ctx, m) + " -> " + format_tuple(ctx, n));
  ArrowFactorization f;
  f.middle = middles.front();  // least under the object ordering

  std::vector<int> removed;
  if (!find_selection(m, f.middle, removed))
    throw PreconditionError("internal: middle not realizable by a block selection");
  for (int i : removed) f.minusWord.push_back({GenKind::Compose, i});

  for (int i = 0; i < n.length(); ++i)
    if (f.middle.cells[i].flag < n.cells[i].flag) f.plusWord.push_back({GenKind::Include, i + 1});
  return f;
}

TupleObject apply_factorization(const PosetContext& ctx, const TupleObject& src,
                                const ArrowFactorization& f) {
  TupleObject cur = src;
  for (auto it = f.minusWord.rbegin(); it != f.minusWord.rend(); ++it)
    cur = apply_generator(ctx, cur, *it);
  if (!(cur == f.middle))
    throw PreconditionError("factorization minus word does not land on the middle");
  for (const GeneratorArrow& g : f.plusWord) cur = apply_generator(ctx, cur, g);
  return cur;
}

int Enumeration::index_of(const TupleObject& t) const {
  auto it = std::lower_bound(objects.begin(), objects.end(), t);
  if (it == objects.end() || !(*it == t)) return -1;
  return static_cast<int>(it - objects.begin());
}

Enumeration enumerate_up_to(const PosetContext& ctx, int maxDegree) {
  if (maxDegree < 1) throw PreconditionError("maxDegree must be >= 1");
  Enumeration e;
  const int nstates = static_cast<int>(ctx.states.size());

  // chains by DFS over states, then flag subsets on (u,v) steps within the
  // remaining degree budget
  std::vector<Cell> chain;
  std::function<void(int)> emitFlags = [&](int) {};
  std::function<void(size_t, int)> flags = [&](size_t at, int budget) {
    if (at == chain.size()) {
      e.objects.push_back(TupleObject{chain});
      return;
    }
    flags(at + 1, budget);
    if (budget > 0 && chain[at].src == ctx.u && chain[at].tgt == ctx.v) {
      chain[at].flag = 1;
      flags(at + 1, budget - 1);
      chain[at].flag = 0;
    }
  };
  std::function<void(int)> grow = [&](int last) {
    if (!chain.empty()) flags(0, maxDegree - static_cast<int>(chain.size()));
    if (static_cast<int>(chain.size()) + 1 > maxDegree) return;
    for (int next = 0; next < nstates; ++next) {
      chain.push_back(Cell{last, 0, next});
      grow(next);
      chain.pop_back();
    }
  };
  for (int first = 0; first < nstates; ++first) grow(first);

  std::sort(e.objects.begin(), e.objects.end());

  for (size_t idx = 0; idx < e.objects.size(); ++idx) {
    for (const GeneratorArrow& g : applicable_generators(ctx, e.objects[idx])) {
      TupleObject to = apply_generator(ctx, e.objects[idx], g);
      int j = e.index_of(to);
      if (j >= 0) e.covers.push_back({static_cast<int>(idx), j});
    }
  }
  std::sort(e.covers.begin(), e.covers.end());
  e.covers.erase(std::unique(e.covers.begin(), e.covers.end()), e.covers.end());
  return e;
}

std::vector<TupleObject> latching_category(const PosetContext& ctx, const TupleObject& n) {
  check_context(ctx, n, "latching");
  std::vector<int> ones;
  for (int i = 0; i < n.length(); ++i)
    if (n.cells[i].flag == 1) ones.push_back(i);
  std::vector<TupleObject> out;
  const int h = static_cast<int>(ones.size());
  for (int mask = 0; mask < (1 << h) - 1; ++mask) {
    TupleObject m = n;
    for (int b = 0; b < h; ++b)
      if (!(mask & (1 << b))) m.cells[ones[b]].flag = 0;
    out.push_back(std::move(m));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<TupleObject> matching_category(const PosetContext& ctx, const TupleObject& n) {
  std::vector<TupleObject> out;
  for (TupleObject& k : minus_closure(ctx, n))
    if (!(k == n)) out.push_back(std::move(k));
  return out;  // already sorted
}

}  // namespace flowspace
