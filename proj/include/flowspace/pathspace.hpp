#pragma once

#include <string>
#include <utility>
#include <vector>

#include "flowspace/flows.hpp"
#include "flowspace/reedy.hpp"
#include "flowspace/set_diagrams.hpp"

namespace flowspace {

// The value of a tuple object: a product with one factor per cell. A flag-0
// cell (x, 0, y) contributes the path set of the (x, y) hom of the base
// flow, a flag-1 cell the attached cell classes. Elements of the product are
// encoded mixed-radix with the last coordinate fastest.
struct ValueTable {
  std::vector<std::vector<int>> factors;  // per cell: path indices, or T class ids
  int size = 1;

  int encode(const std::vector<int>& coords) const;   // coords are factor positions
  std::vector<int> decode(int element) const;          // element -> factor positions
  std::vector<int> elems(int element) const;           // element -> stored factor entries
};

// The set-valued diagram over the tuple poset for a loop-free flow with a
// globe attachment: the support is every composable chain of cells with
// nonempty value (finite by loop-freeness), arrows are realized by the
// composition of the base flow (merge steps) and by fromPath into the
// attached cells (flag flips). Construction validates functoriality: any two
// generator paths between the same objects realize the same function.
struct DfDiagram {
  DiscreteFlow a;
  GlobAttachment att;
  AttachedCellSet tcells;
  PosetContext ctx;
  std::vector<TupleObject> support;  // sorted by (degree, length, cells)
  std::vector<ValueTable> values;    // parallel to support
  std::vector<std::pair<std::pair<int, int>, GeneratorArrow>> coverArrows;
  SetDiagram diagram;

  int object_index(const TupleObject& n) const;  // -1 when absent
  ValueTable value_of(const TupleObject& n) const;  // works off-support too
};

DfDiagram build_df(const DiscreteFlow& a, const GlobAttachment& att);

// The same data with the identity attachment (boundary = cells = the (g0,g1)
// hom set, attach = incl = identity), whose attached cell classes are the
// hom set itself.
DfDiagram build_df_identity(const DiscreteFlow& a, int g0, int g1);

// Path space computed through the diagram: one colimit class per path,
// composition by concatenation of representatives with a full
// well-definedness check of the induced table.
struct ReedyPathspace {
  DfDiagram df;
  DiscreteFlow flow;
  FlowMap fromA;
  std::vector<int> cellToPath;
  ColimitResult colim;
  std::vector<std::pair<int, int>> classRep;  // per class: (support object, element)
};

ReedyPathspace pathspace_via_reedy(const DiscreteFlow& a, const GlobAttachment& att);

// Both constructions side by side, with the canonical correspondence
// (a word letter by letter is an element of the value of its cell chain).
// ok means: the correspondence is a well-defined bijection on path classes,
// is a flow map, and commutes with the canonical maps from the base flow and
// from the cells. On failure, message carries the witness.
struct CompareResult {
  bool ok = false;
  std::string message;
  FlowMap iso;  // oracle paths -> reedy paths, when ok
  GlobPushout oracle;
  ReedyPathspace reedy;
};

CompareResult compare_with_oracle(const DiscreteFlow& a, const GlobAttachment& att);

// A latching-style computation: a finite set with its comparison map into
// the value of the object (as element indices of that value).
struct LatchingResult {
  int size = 0;
  int targetSize = 0;
  std::vector<int> toTarget;
};

// Colimit over the proper flag subsets of n of the diagram values, with the
// canonical map into the value at n. Objects of height 0 have an empty
// latching category and yield the empty set.
LatchingResult latching_object(const DfDiagram& df, const TupleObject& n);

// The same set computed independently as the domain of the pushout product
// of the factor maps (empty -> hom set for flag 0, fromPath for flag 1):
// the colimit over the proper subsets of the coordinate cube.
LatchingResult latching_via_cube(const DiscreteFlow& a, const GlobAttachment& att,
                                 const TupleObject& n);

// The relative latching map at n: the pushout of the latching comparison of
// the identity diagram against the latching object of the attachment
// diagram, mapped into the value of n. All flags 0 forces a bijection; any
// flag 1 makes it canonically the latching comparison of the attachment
// diagram (the identity side contributes an isomorphism).
struct RelativeLatching {
  bool heightZero = false;
  bool isBijection = false;
  bool identifiedWithLatching = false;
  LatchingResult map;
};

RelativeLatching relative_latching_map(const DiscreteFlow& a, const GlobAttachment& att,
                                       const TupleObject& n);
// Same computation with both diagrams prebuilt (dfId must come from
// build_df_identity over the same flow and endpoints).
RelativeLatching relative_latching_map(const DfDiagram& dfF, const DfDiagram& dfId,
                                       const TupleObject& n);

// True iff the colimit of the path sets along an injective chain of flow
// maps is in canonical bijection with the path set of the last flow: every
// class traces to exactly one path there. Throws InputError when a
// connecting map is not injective on paths or not a flow map.
bool tower_pathspace_check(const std::vector<DiscreteFlow>& flows,
                           const std::vector<FlowMap>& maps);

// DOT rendering of the support poset; objects with raised flags (nonempty
// latching category) are drawn filled, edges carry the generator labels.
std::string df_to_dot(const DfDiagram& df);

}  // namespace flowspace
