#pragma once

#include <compare>
#include <string>
#include <vector>

#include "flowspace/errors.hpp"

namespace flowspace {

// Label universe for tuple objects: a finite state set S plus two marked
// states u and v (u = v is allowed). States are interned; everything below
// refers to them by index.
struct PosetContext {
  std::vector<std::string> states;
  int u = 0;
  int v = 0;

  PosetContext() = default;  // empty placeholder, set before use
  PosetContext(std::vector<std::string> stateNames, const std::string& uName,
               const std::string& vName);
  int index_of(const std::string& name) const;  // throws InputError if absent
};

// One step of a tuple: source state, a 0/1 flag, target state.
// flag = 1 is only legal when (src, tgt) = (u, v).
struct Cell {
  int src = 0;
  int flag = 0;
  int tgt = 0;
  auto operator<=>(const Cell&) const = default;
};

// A nonempty composable chain of cells. Ordering is (degree, length, cells),
// which keeps enumerations and canonical choices deterministic.
struct TupleObject {
  std::vector<Cell> cells;

  int length() const { return static_cast<int>(cells.size()); }
  int height() const;
  int degree() const { return length() + height(); }

  bool operator==(const TupleObject&) const = default;
  std::strong_ordering operator<=>(const TupleObject& other) const;
};

struct TupleHash {
  size_t operator()(const TupleObject& t) const;
};

// Validates adjacency, nonemptiness, state indices and the flag rule.
TupleObject make_tuple(const PosetContext& ctx, std::vector<Cell> cells);

// Text form: `(a 0 b)(b 1 c)`.
TupleObject parse_tuple(const PosetContext& ctx, const std::string& text);
std::string format_tuple(const PosetContext& ctx, const TupleObject& t);

enum class GenKind { Compose, Include };

// position is the 1-based index of the first affected cell:
//   Compose at i merges cells i and i+1 (both flags must be 0) into one
//   flag-0 cell; Include at i flips the flag of cell i from 0 to 1 (the cell
//   must be a (u,v) step).
struct GeneratorArrow {
  GenKind kind = GenKind::Compose;
  int position = 1;
  auto operator<=>(const GeneratorArrow&) const = default;
};

bool can_apply(const PosetContext& ctx, const TupleObject& obj, GeneratorArrow gen);
// Throws PreconditionError when the generator does not apply.
TupleObject apply_generator(const PosetContext& ctx, const TupleObject& obj, GeneratorArrow gen);
std::vector<GeneratorArrow> applicable_generators(const PosetContext& ctx, const TupleObject& obj);

// Merges adjacent flag-0 pairs until none remain. The result is independent
// of merge order (each maximal run of zero flags collapses to a single zero).
TupleObject simplify(const PosetContext& ctx, const TupleObject& n);

// Same cells with every flag cleared.
TupleObject latch_base(const PosetContext& ctx, const TupleObject& n);

// Everything reachable from m by Compose steps, m included, deduplicated and
// sorted. Bounded by the subsets of interior states of m, so at most 2^(n-1).
std::vector<TupleObject> minus_closure(const PosetContext& ctx, const TupleObject& m);

// The candidate factorization middles for an arrow m -> n: objects reachable
// from m by Compose steps whose state chain equals that of n and whose flags
// are pointwise <= those of n. Empty exactly when there is no arrow m -> n.
// A singleton means the two-sided factorization through that object is the
// unique one; multiple entries can occur when u = v (see factorize()).
std::vector<TupleObject> factorization_middles(const PosetContext& ctx, const TupleObject& m,
                                               const TupleObject& n);

// True iff an arrow m -> n exists, decided by factorization_middles.
bool leq(const PosetContext& ctx, const TupleObject& m, const TupleObject& n);

// An arrow m -> n split as Compose steps down to a middle object followed by
// Include steps up to n. minusWord holds strictly increasing positions and is
// applied highest position first (so earlier positions stay valid); plusWord
// holds the flag positions raised after the middle, in increasing order
// (flips at distinct positions commute).
struct ArrowFactorization {
  std::vector<GeneratorArrow> minusWord;
  TupleObject middle;
  std::vector<GeneratorArrow> plusWord;
};

// Canonical factorization of the arrow m -> n; throws PreconditionError when
// leq(m, n) is false. When several middles exist (possible only for u = v),
// the least object under TupleObject ordering is chosen, deterministically.
ArrowFactorization factorize(const PosetContext& ctx, const TupleObject& m, const TupleObject& n);

// Applies minusWord then plusWord to src, asserting each step.
TupleObject apply_factorization(const PosetContext& ctx, const TupleObject& src,
                                const ArrowFactorization& f);

// All objects of degree <= maxDegree, sorted, with the deduplicated pairs
// (from, to) connected by a single generator. Single generators change the
// degree by exactly one, so these pairs are the covers of the order.
struct Enumeration {
  std::vector<TupleObject> objects;
  std::vector<std::pair<int, int>> covers;

  int index_of(const TupleObject& t) const;  // -1 if absent
};
Enumeration enumerate_up_to(const PosetContext& ctx, int maxDegree);

// All m != n with the same state chain and flags pointwise <= flags of n.
// Cardinality 2^height(n) - 1.
std::vector<TupleObject> latching_category(const PosetContext& ctx, const TupleObject& n);

// All proper Compose-reachable targets of n. Empty iff n has no adjacent 0,0
// flag pair; otherwise simplify(n) is its terminal element.
std::vector<TupleObject> matching_category(const PosetContext& ctx, const TupleObject& n);

}  // namespace flowspace
