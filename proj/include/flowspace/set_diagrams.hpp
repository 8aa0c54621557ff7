#pragma once

#include <string>
#include <utility>
#include <vector>

#include "flowspace/errors.hpp"

namespace flowspace {

// A finite poset given by named objects and cover pairs (lower, upper).
// Construction rejects cyclic cover data.
struct FinitePoset {
  std::vector<std::string> objects;
  std::vector<std::pair<int, int>> covers;

  FinitePoset() = default;
  FinitePoset(std::vector<std::string> objectNames, std::vector<std::pair<int, int>> coverPairs);
  int size() const { return static_cast<int>(objects.size()); }
};

// A diagram of finite sets over a finite poset. The set at object i is
// {0, ..., sizes[i]-1}; maps[k] is the function along covers[k], stored as a
// table. Construction checks that any two cover paths with equal endpoints
// compose to the same function (spanning-tree composites against every cover
// edge, which is equivalent by induction on path length).
struct SetDiagram {
  FinitePoset index;
  std::vector<int> sizes;
  std::vector<std::vector<int>> maps;

  SetDiagram() = default;
  SetDiagram(FinitePoset poset, std::vector<int> setSizes, std::vector<std::vector<int>> coverMaps);
};

// Colimit of a diagram: the disjoint union of all sets, quotiented by the
// equivalence generated by x ~ map(x) along every cover. Classes are numbered
// by first appearance of their least (object, element) member, so the result
// is deterministic.
struct ColimitResult {
  int apexSize = 0;
  std::vector<std::vector<int>> inject;        // inject[i][x] = class id
  std::vector<std::pair<int, int>> repr;       // class id -> least (object, element)
};

ColimitResult colimit(const SetDiagram& d);

// The unique mediating function out of the apex for a commuting family of
// legs into a test set. Throws InputError when the legs fail to commute with
// some cover map.
std::vector<int> cocone_factorization(const SetDiagram& d, const ColimitResult& c,
                                      const std::vector<std::vector<int>>& legs, int testSize);

// Disjoint sum: objects renamed "k:name" per component k. The colimit of the
// sum is the disjoint union of the component colimits.
SetDiagram sum_diagrams(const std::vector<SetDiagram>& ds);

// Metadata tying a sum's parts back to the components.
struct SumLayout {
  std::vector<int> objectBase;   // component -> first object index in the sum
};
SumLayout sum_layout(const std::vector<SetDiagram>& ds);

// Product diagram over the product poset: objects are pairs "i|j" with
// covers (cover, id) and (id, cover); the set at (i, j) is the cartesian
// product, elements encoded as xa * sizeB + xb; maps act coordinatewise.
SetDiagram product_diagram(const SetDiagram& a, const SetDiagram& b);

}  // namespace flowspace
