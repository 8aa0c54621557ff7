#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flowspace/errors.hpp"

namespace flowspace {

struct FlowPath {
  std::string id;
  int src = 0;
  int tgt = 0;
};

// A finite semicategory: states, finitely many paths each with src/tgt, and
// an associative composition defined exactly on the composable pairs
// (tgt p = src q). No identities. compose[p][q] holds the composite path
// index, or -1 off the composable pairs. Results of cap-truncated pushouts
// may leave composable entries undefined; they carry truncated = true and are
// the only values allowed to do so.
struct DiscreteFlow {
  std::vector<std::string> states;
  std::vector<FlowPath> paths;
  std::vector<std::vector<int>> compose;
  bool truncated = false;

  int nstates() const { return static_cast<int>(states.size()); }
  int npaths() const { return static_cast<int>(paths.size()); }
  bool composable(int p, int q) const { return paths[p].tgt == paths[q].src; }
  bool compose_defined(int p, int q) const { return composable(p, q) && compose[p][q] >= 0; }
  int compose_at(int p, int q) const;  // throws PreconditionError when undefined
  int path_index(const std::string& id) const;  // -1 if absent
};

// Validates and assembles a flow; throws InputError with a coordinate witness
// on the first violated equation (totality, endpoints, associativity).
DiscreteFlow make_flow(std::vector<std::string> states, std::vector<FlowPath> paths,
                       std::vector<std::vector<int>> compose, bool truncated = false);

// Internal consistency check of an already-built value; throws like make_flow.
void validate_flow(const DiscreteFlow& a);

// The flow with states {0, 1} and the given set as paths 0 -> 1. There are no
// composable pairs, hence no composition law.
DiscreteFlow make_glob(const std::vector<std::string>& z);

struct FlowMap {
  std::vector<int> stateMap;
  std::vector<int> pathMap;
};

// True iff f preserves src, tgt and every defined composite pointwise.
bool verify_flow_map(const DiscreteFlow& src, const DiscreteFlow& dst, const FlowMap& f);

// Attachment data for gluing a set of cells onto the (g0, g1) path set of a
// base flow: boundary elements map into P_{g0,g1} via attach and into the
// cells via incl. Neither map needs to be injective or surjective.
struct GlobAttachment {
  int g0 = 0;
  int g1 = 0;
  std::vector<std::string> boundary;
  std::vector<std::string> cells;
  std::vector<int> attach;  // boundary -> path index of the base flow
  std::vector<int> incl;    // boundary -> cell index
};

// Validates indices and that attach lands in P_{g0,g1}.
GlobAttachment make_attachment(const DiscreteFlow& a, int g0, int g1,
                               std::vector<std::string> boundary, std::vector<std::string> cells,
                               std::vector<int> attach, std::vector<int> incl);

// The pushout, in sets, of attach: boundary -> P_{g0,g1} along
// incl: boundary -> cells. fromPath is indexed by path ids of the base flow
// and is -1 off P_{g0,g1}.
struct AttachedCellSet {
  int count = 0;
  std::vector<int> fromPath;
  std::vector<int> fromCell;
  std::vector<std::string> names;  // canonical class names, see class_name()
};

AttachedCellSet attached_cells(const DiscreteFlow& a, const GlobAttachment& att);

// True iff the state digraph (an edge per nonempty hom set, plus g0 -> g1
// when cells are present) is acyclic. Acyclicity bounds every composable
// chain by |states| - 1 letters, which keeps path sets finite.
bool is_loop_free(const DiscreteFlow& a, const GlobAttachment& att);

// One letter of a free composite: either a path of the base flow or an
// attached cell class (endpoints (g0, g1)).
struct Letter {
  bool isCell = false;
  int idx = 0;
  auto operator<=>(const Letter&) const = default;
};
using PathWord = std::vector<Letter>;

// Result of gluing cells onto a flow. The path set is the word universe
// modulo the congruence generated by contracting adjacent base-flow letters
// through the base composition and by replacing a cell class that comes from
// a path with that path. Representatives are the least words under
// (length, letters) order; ids render as `p*[z]`-style strings.
struct GlobPushout {
  DiscreteFlow flow;
  FlowMap fromA;
  std::vector<int> cellToPath;  // cell index -> path of `flow`
  AttachedCellSet tcells;
  std::vector<PathWord> universe;
  std::vector<int> wordClass;   // universe index -> path of `flow`

  int class_of_word(const PathWord& w) const;  // -1 if outside the universe
};

// Computes the glued flow by explicit congruence closure over the bounded
// word universe. Requires loop-freeness, or a cap on word length; a capped
// run that cannot be trusted (a maximal-length word still contains a
// contractible letter pair or a decomposable letter, so identifications may
// escape the universe) throws PreconditionError.
GlobPushout pushout_glob_oracle(const DiscreteFlow& a, const GlobAttachment& att,
                                std::optional<int> cap = std::nullopt);

// Adds one fresh isolated state; paths and composition unchanged.
struct AddStatePushout {
  DiscreteFlow flow;
  FlowMap fromA;
};
AddStatePushout pushout_add_state(const DiscreteFlow& a);

// Identifies two states. The path set becomes the old paths plus the freely
// generated composites that the identification enables, computed by the same
// word engine (letters are old paths, contraction through the old
// composition only). newPaths lists the classes containing no single-letter
// word. Merging a state with itself is the identity operation.
struct MergePushout {
  DiscreteFlow flow;
  FlowMap fromA;
  std::vector<int> newPaths;
};
MergePushout pushout_merge_states(const DiscreteFlow& a, int s, int t,
                                  std::optional<int> cap = std::nullopt);

// The mediating flow map out of a glued flow, for a commuting square into y:
// phi on the base flow and cellImage on the cells (endpoint states are forced
// to phi(g0), phi(g1)). Throws InputError when the square does not commute or
// the data is not consistent on some congruence class; the returned map is
// the unique one compatible with the two canonical maps.
FlowMap glob_pushout_mediate(const DiscreteFlow& a, const GlobAttachment& att,
                             const GlobPushout& po, const DiscreteFlow& y, const FlowMap& phi,
                             const std::vector<int>& cellImage);

std::pair<int, int> letter_ends(const DiscreteFlow& a, const GlobAttachment& att, Letter l);
std::string render_word(const DiscreteFlow& a, const AttachedCellSet& t, const PathWord& w);

}  // namespace flowspace
