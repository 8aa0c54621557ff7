#include "flowspace/flows.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "flowspace/rng.hpp"

using namespace flowspace;

namespace {

// Brute-force enumeration of every flow map src -> dst. Only usable on tiny
// instances; serves as the oracle for existence/uniqueness of mediating maps.
std::vector<FlowMap> all_flow_maps(const DiscreteFlow& src, const DiscreteFlow& dst) {
  std::vector<FlowMap> out;
  std::vector<int> stateMap(src.nstates(), 0);
  std::vector<int> pathMap(src.npaths(), 0);
  auto tryPaths = [&](auto&& self, int p) -> void {
    if (p == src.npaths()) {
      FlowMap f{stateMap, pathMap};
      if (verify_flow_map(src, dst, f)) out.push_back(f);
      return;
    }
    for (int q = 0; q < dst.npaths(); ++q) {
      if (dst.paths[q].src != stateMap[src.paths[p].src]) continue;
      if (dst.paths[q].tgt != stateMap[src.paths[p].tgt]) continue;
      pathMap[p] = q;
      self(self, p + 1);
    }
  };
  auto tryStates = [&](auto&& self, int s) -> void {
    if (s == src.nstates()) {
      tryPaths(tryPaths, 0);
      return;
    }
    for (int t = 0; t < dst.nstates(); ++t) {
      stateMap[s] = t;
      self(self, s + 1);
    }
  };
  tryStates(tryStates, 0);
  return out;
}

// The flow whose paths are all nonempty directed walks of an acyclic edge
// list, composition by concatenation. Built independently of the word
// engine: walks are enumerated directly and compose is looked up by the
// concatenated edge sequence.
struct FreeDagFlow {
  DiscreteFlow flow;
  std::vector<std::vector<int>> walkEdges;  // per path, its edge sequence
};

FreeDagFlow free_dag_flow(int nstates, const std::vector<std::pair<int, int>>& edges) {
  FreeDagFlow out;
  for (int s = 0; s < nstates; ++s) out.flow.states.push_back("v" + std::to_string(s));
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
  std::sort(walks.begin(), walks.end());
  for (const auto& w : walks) {
    std::string id;
    for (int e : w) id += (id.empty() ? "" : "") + std::string("e") + std::to_string(e);
    out.flow.paths.push_back({id, edges[w.front()].first, edges[w.back()].second});
    out.walkEdges.push_back(w);
  }
  int np = out.flow.npaths();
  out.flow.compose.assign(np, std::vector<int>(np, -1));
  for (int p = 0; p < np; ++p) {
    for (int q = 0; q < np; ++q) {
      if (out.flow.paths[p].tgt != out.flow.paths[q].src) continue;
      std::vector<int> cat = out.walkEdges[p];
      cat.insert(cat.end(), out.walkEdges[q].begin(), out.walkEdges[q].end());
      auto it = std::lower_bound(out.walkEdges.begin(), out.walkEdges.end(), cat);
      REQUIRE(it != out.walkEdges.end());
      REQUIRE(*it == cat);
      out.flow.compose[p][q] = static_cast<int>(it - out.walkEdges.begin());
    }
  }
  validate_flow(out.flow);
  return out;
}

DiscreteFlow three_state_composite() {
  // p: 0 -> 1, q: 1 -> 2 and their composite r.
  std::vector<std::vector<int>> table(3, std::vector<int>(3, -1));
  table[0][1] = 2;  // p.q = r
  return make_flow({"s0", "s1", "s2"}, {{"p", 0, 1}, {"q", 1, 2}, {"r", 0, 2}}, table);
}

int path_by_id(const DiscreteFlow& f, const std::string& id) {
  int p = f.path_index(id);
  REQUIRE(p >= 0);
  return p;
}

}  // namespace

TEST_CASE("flow validation accepts lawful tables and pins down violations") {
  CHECK_NOTHROW(three_state_composite());
  CHECK_NOTHROW(make_glob({"z1", "z2"}));

  // Missing composite for a composable pair.
  std::vector<std::vector<int>> holey(3, std::vector<int>(3, -1));
  CHECK_THROWS_AS(
      make_flow({"s0", "s1", "s2"}, {{"p", 0, 1}, {"q", 1, 2}, {"r", 0, 2}}, holey),
      InputError);

  // Entry on a non-composable pair.
  std::vector<std::vector<int>> stray(3, std::vector<int>(3, -1));
  stray[0][1] = 2;
  stray[1][0] = 0;
  CHECK_THROWS_AS(
      make_flow({"s0", "s1", "s2"}, {{"p", 0, 1}, {"q", 1, 2}, {"r", 0, 2}}, stray),
      InputError);

  // Composite with mismatched endpoints.
  std::vector<std::vector<int>> bent(3, std::vector<int>(3, -1));
  bent[0][1] = 0;
  CHECK_THROWS_AS(
      make_flow({"s0", "s1", "s2"}, {{"p", 0, 1}, {"q", 1, 2}, {"r", 0, 2}}, bent),
      InputError);

  // Associativity violation, with the offending triple named in the message.
  std::vector<std::vector<int>> bad(2, std::vector<int>(2, 0));
  bad[0][0] = 0;  // a.a = a
  bad[0][1] = 0;  // a.b = a
  bad[1][0] = 1;  // b.a = b
  bad[1][1] = 0;  // b.b = a
  try {
    make_flow({"s"}, {{"a", 0, 0}, {"b", 0, 0}}, bad);
    FAIL("expected associativity rejection");
  } catch (const InputError& e) {
    std::string msg = e.what();
    CHECK(msg.find("associativity") != std::string::npos);
    CHECK(msg.find("b") != std::string::npos);
  }

  // Duplicate ids and bad endpoints.
  CHECK_THROWS_AS(make_flow({"s", "s"}, {}, {}), InputError);
  CHECK_THROWS_AS(make_flow({"s"}, {{"a", 0, 1}}, {{-1}}), InputError);
  CHECK_THROWS_AS(
      make_flow({"s0", "s1"}, {{"a", 0, 1}, {"a", 0, 1}},
                {{-1, -1}, {-1, -1}}),
      InputError);
}

TEST_CASE("compose_at distinguishes non-composable pairs from truncated holes") {
  DiscreteFlow a = three_state_composite();
  CHECK(a.compose_at(0, 1) == 2);
  CHECK_THROWS_AS(a.compose_at(1, 0), PreconditionError);

  DiscreteFlow trunc = a;
  trunc.truncated = true;
  trunc.compose[0][1] = -1;
  CHECK_NOTHROW(validate_flow(trunc));
  CHECK_THROWS_AS(trunc.compose_at(0, 1), PreconditionError);
}

TEST_CASE("attached cells compute the boundary gluing in sets") {
  DiscreteFlow a = make_flow({"s0", "s1"}, {{"p", 0, 1}, {"q", 0, 1}},
                             {{-1, -1}, {-1, -1}});
  GlobAttachment att = make_attachment(a, 0, 1, {"b1", "b2"}, {"z"}, {0, 1}, {0, 0});
  AttachedCellSet t = attached_cells(a, att);
  // p and q are glued through z into a single class named after the least
  // path id.
  CHECK(t.count == 1);
  CHECK(t.fromPath[0] == 0);
  CHECK(t.fromPath[1] == 0);
  CHECK(t.fromCell[0] == 0);
  CHECK(t.names[0] == "p");

  // With separate cells the paths stay distinct.
  GlobAttachment att2 = make_attachment(a, 0, 1, {"b1", "b2"}, {"z", "w"}, {0, 1}, {0, 1});
  AttachedCellSet t2 = attached_cells(a, att2);
  CHECK(t2.count == 2);
  CHECK(t2.fromPath[0] != t2.fromPath[1]);

  // Fresh cells with no boundary form their own classes.
  GlobAttachment att3 = make_attachment(a, 0, 1, {}, {"z"}, {}, {});
  AttachedCellSet t3 = attached_cells(a, att3);
  CHECK(t3.count == 3);
  CHECK(t3.names[t3.fromCell[0]] == "z");

  // Attachment validation.
  CHECK_THROWS_AS(make_attachment(a, 0, 1, {"b"}, {"z"}, {5}, {0}), InputError);
  CHECK_THROWS_AS(make_attachment(a, 1, 0, {"b"}, {"z"}, {0}, {0}), InputError);
  CHECK_THROWS_AS(make_attachment(a, 0, 1, {"b", "b"}, {"z"}, {0, 0}, {0, 0}), InputError);
}

TEST_CASE("loop-freeness is acyclicity of the state digraph with the glob edge") {
  DiscreteFlow a = three_state_composite();
  GlobAttachment att = make_attachment(a, 1, 2, {}, {"z"}, {}, {});
  CHECK(is_loop_free(a, att));

  // A self-loop path breaks it.
  std::vector<std::vector<int>> loopTable(1, std::vector<int>(1, 0));
  DiscreteFlow loop = make_flow({"s"}, {{"e", 0, 0}}, loopTable);
  GlobAttachment attLoop = make_attachment(loop, 0, 0, {}, {}, {}, {});
  CHECK_FALSE(is_loop_free(loop, attLoop));

  // Attaching a cell backwards across existing paths creates a cycle.
  GlobAttachment attBack = make_attachment(a, 2, 1, {}, {"z"}, {}, {});
  CHECK_FALSE(is_loop_free(a, attBack));
  // ... but only when there is actually a cell to attach.
  GlobAttachment attEmpty = make_attachment(a, 2, 1, {}, {}, {}, {});
  CHECK(is_loop_free(a, attEmpty));
}

TEST_CASE("glob pushout with a fresh cell adds exactly one new path") {
  DiscreteFlow a = make_flow({"s0", "s1"}, {{"p", 0, 1}}, {{-1}});
  GlobAttachment att = make_attachment(a, 0, 1, {}, {"z"}, {}, {});
  GlobPushout po = pushout_glob_oracle(a, att);
  REQUIRE(po.flow.npaths() == 2);
  CHECK(po.flow.paths[0].id == "p");
  CHECK(po.flow.paths[1].id == "[z]");
  CHECK(po.fromA.pathMap == std::vector<int>{0});
  CHECK(po.cellToPath == std::vector<int>{1});
  CHECK_FALSE(po.flow.truncated);
  CHECK(verify_flow_map(a, po.flow, po.fromA));
}

TEST_CASE("glob pushout keeps composites: new hom set {r, p*[z]}") {
  DiscreteFlow a = three_state_composite();
  GlobAttachment att = make_attachment(a, 1, 2, {}, {"z"}, {}, {});
  GlobPushout po = pushout_glob_oracle(a, att);

  REQUIRE(po.flow.npaths() == 5);
  std::vector<std::string> ids;
  for (auto& p : po.flow.paths) ids.push_back(p.id);
  CHECK(ids == std::vector<std::string>{"p", "q", "r", "[z]", "p*[z]"});

  // The (0, 2) hom set of the result.
  std::set<std::string> hom02;
  for (auto& p : po.flow.paths) {
    if (p.src == 0 && p.tgt == 2) hom02.insert(p.id);
  }
  CHECK(hom02 == std::set<std::string>{"r", "p*[z]"});

  int p = path_by_id(po.flow, "p");
  int z = path_by_id(po.flow, "[z]");
  int pz = path_by_id(po.flow, "p*[z]");
  int q = path_by_id(po.flow, "q");
  int r = path_by_id(po.flow, "r");
  CHECK(po.flow.compose[p][z] == pz);
  CHECK(po.flow.compose[p][q] == r);
  CHECK_FALSE(po.flow.truncated);

  // Word classes: [p, q] contracted to r, the cell word to [z].
  CHECK(po.class_of_word({{false, 0}, {false, 1}}) == r);
  CHECK(po.class_of_word({{true, po.tcells.fromCell[0]}}) == z);
  CHECK(po.class_of_word({{false, 2}, {false, 2}}) == -1);
}

TEST_CASE("glob pushout along an identity boundary is an isomorphism") {
  DiscreteFlow a = three_state_composite();
  // One boundary element, glued to r, included as the only cell.
  GlobAttachment att = make_attachment(a, 0, 2, {"b"}, {"c1"}, {2}, {0});
  GlobPushout po = pushout_glob_oracle(a, att);

  REQUIRE(po.flow.npaths() == a.npaths());
  // fromA is a bijection on paths preserving compose, i.e. an isomorphism.
  std::vector<int> seen(po.flow.npaths(), 0);
  for (int p = 0; p < a.npaths(); ++p) seen[po.fromA.pathMap[p]]++;
  for (int c : seen) CHECK(c == 1);
  for (int p = 0; p < a.npaths(); ++p) {
    for (int q = 0; q < a.npaths(); ++q) {
      if (!a.compose_defined(p, q)) continue;
      CHECK(po.flow.compose[po.fromA.pathMap[p]][po.fromA.pathMap[q]] ==
            po.fromA.pathMap[a.compose[p][q]]);
    }
  }
  CHECK(po.cellToPath[0] == po.fromA.pathMap[2]);
}

TEST_CASE("glob pushout glues two paths into one through a shared cell") {
  DiscreteFlow a = make_flow({"s0", "s1"}, {{"p", 0, 1}, {"q", 0, 1}},
                             {{-1, -1}, {-1, -1}});
  GlobAttachment att = make_attachment(a, 0, 1, {"b1", "b2"}, {"z"}, {0, 1}, {0, 0});
  GlobPushout po = pushout_glob_oracle(a, att);
  REQUIRE(po.flow.npaths() == 1);
  CHECK(po.flow.paths[0].id == "p");
  CHECK(po.fromA.pathMap == std::vector<int>{0, 0});
  CHECK(po.cellToPath == std::vector<int>{0});
}

TEST_CASE("pushouts without loop-freeness demand a cap") {
  std::vector<std::vector<int>> loopTable(1, std::vector<int>(1, 0));
  DiscreteFlow loop = make_flow({"s"}, {{"e", 0, 0}}, loopTable);
  GlobAttachment att = make_attachment(loop, 0, 0, {}, {}, {}, {});
  CHECK_THROWS_AS(pushout_glob_oracle(loop, att), PreconditionError);
  // Even with a cap, e is decomposable (e = e.e), so identifications escape
  // any finite universe and the run is rejected rather than silently wrong.
  CHECK_THROWS_AS(pushout_glob_oracle(loop, att, 3), PreconditionError);

  DiscreteFlow g = make_glob({"c"});
  CHECK_THROWS_AS(pushout_merge_states(g, 0, 1), PreconditionError);
}

TEST_CASE("merging glob endpoints under a cap enumerates the cell powers") {
  DiscreteFlow g = make_glob({"c"});
  MergePushout po = pushout_merge_states(g, 0, 1, 3);
  REQUIRE(po.flow.nstates() == 1);
  std::vector<std::string> ids;
  for (auto& p : po.flow.paths) ids.push_back(p.id);
  CHECK(ids == std::vector<std::string>{"c", "c*c", "c*c*c"});
  CHECK(po.flow.truncated);  // c*c composed with c*c exceeds the cap
  CHECK(po.newPaths == std::vector<int>{1, 2});

  int c = 0, cc = 1, ccc = 2;
  CHECK(po.flow.compose[c][c] == cc);
  CHECK(po.flow.compose[c][cc] == ccc);
  CHECK(po.flow.compose[cc][c] == ccc);
  CHECK(po.flow.compose[cc][cc] == -1);
  CHECK(po.flow.compose[ccc][c] == -1);

  // A bigger cap extends the enumeration and agrees on the shared prefix.
  MergePushout po5 = pushout_merge_states(g, 0, 1, 5);
  CHECK(po5.flow.npaths() == 5);
  for (int i = 0; i < 3; ++i) CHECK(po5.flow.paths[i].id == po.flow.paths[i].id);
}

TEST_CASE("merging across a bridge creates exactly the enabled composite") {
  DiscreteFlow a = make_flow({"s0", "s1", "s2", "s3"}, {{"p", 0, 1}, {"q", 2, 3}},
                             {{-1, -1}, {-1, -1}});
  MergePushout po = pushout_merge_states(a, 1, 2);
  REQUIRE(po.flow.nstates() == 3);
  CHECK(po.flow.states == std::vector<std::string>{"s0", "s1", "s3"});
  std::vector<std::string> ids;
  for (auto& p : po.flow.paths) ids.push_back(p.id);
  CHECK(ids == std::vector<std::string>{"p", "q", "p*q"});
  REQUIRE(po.newPaths.size() == 1);
  CHECK(po.flow.paths[po.newPaths[0]].id == "p*q");
  CHECK(po.flow.compose[0][1] == 2);
  CHECK_FALSE(po.flow.truncated);
  CHECK(verify_flow_map(a, po.flow, po.fromA));

  // Merging a state with itself changes nothing.
  MergePushout same = pushout_merge_states(a, 1, 1);
  CHECK(same.flow.npaths() == 2);
  CHECK(same.newPaths.empty());
  CHECK(same.flow.states == a.states);
}

TEST_CASE("merging respects existing composites instead of freely doubling them") {
  // p: 0 -> 1 and q: 1 -> 2 already compose to r. Merging 0 with an isolated
  // fresh state must not disturb anything.
  DiscreteFlow a = three_state_composite();
  AddStatePushout added = pushout_add_state(a);
  CHECK(added.flow.nstates() == 4);
  CHECK(added.flow.states[3] == "x0");
  CHECK(verify_flow_map(a, added.flow, added.fromA));

  MergePushout po = pushout_merge_states(added.flow, 0, 3);
  CHECK(po.flow.npaths() == 3);
  CHECK(po.newPaths.empty());
  for (int p = 0; p < 3; ++p) CHECK(po.fromA.pathMap[p] == p);
}

TEST_CASE("mediating map out of a glob pushout exists, commutes and is unique") {
  DiscreteFlow a = three_state_composite();
  GlobAttachment att = make_attachment(a, 1, 2, {}, {"z"}, {}, {});
  GlobPushout po = pushout_glob_oracle(a, att);

  SUBCASE("into the base flow itself, sending the cell to q") {
    FlowMap phi;
    phi.stateMap = {0, 1, 2};
    phi.pathMap = {0, 1, 2};
    std::vector<int> cellImage = {1};  // z -> q
    FlowMap h = glob_pushout_mediate(a, att, po, a, phi, cellImage);
    CHECK(verify_flow_map(po.flow, a, h));
    for (int p = 0; p < a.npaths(); ++p) CHECK(h.pathMap[po.fromA.pathMap[p]] == phi.pathMap[p]);
    CHECK(h.pathMap[po.cellToPath[0]] == 1);
    CHECK(h.pathMap[path_by_id(po.flow, "p*[z]")] == 2);  // p then q composes to r

    // Exhaustive uniqueness among all flow maps with the commuting property.
    int matching = 0;
    for (const FlowMap& g : all_flow_maps(po.flow, a)) {
      bool commutes = g.stateMap == phi.stateMap;
      for (int p = 0; p < a.npaths() && commutes; ++p) {
        commutes = g.pathMap[po.fromA.pathMap[p]] == phi.pathMap[p];
      }
      if (commutes && g.pathMap[po.cellToPath[0]] == cellImage[0]) {
        ++matching;
        CHECK(g.pathMap == h.pathMap);
      }
    }
    CHECK(matching == 1);
  }

  SUBCASE("into a left-zero semigroup separating the cell from the paths") {
    std::vector<std::vector<int>> lz(2, std::vector<int>(2));
    lz[0][0] = 0;
    lz[0][1] = 0;
    lz[1][0] = 1;
    lz[1][1] = 1;
    DiscreteFlow y = make_flow({"*"}, {{"e0", 0, 0}, {"e1", 0, 0}}, lz);
    FlowMap phi;
    phi.stateMap = {0, 0, 0};
    phi.pathMap = {0, 0, 0};
    std::vector<int> cellImage = {1};
    FlowMap h = glob_pushout_mediate(a, att, po, y, phi, cellImage);
    CHECK(verify_flow_map(po.flow, y, h));
    CHECK(h.pathMap[po.cellToPath[0]] == 1);
    // p*[z] maps to e0 * e1 = e0 in the left-zero law.
    CHECK(h.pathMap[path_by_id(po.flow, "p*[z]")] == 0);

    int matching = 0;
    for (const FlowMap& g : all_flow_maps(po.flow, y)) {
      bool commutes = true;
      for (int p = 0; p < a.npaths() && commutes; ++p) {
        commutes = g.pathMap[po.fromA.pathMap[p]] == phi.pathMap[p];
      }
      if (commutes && g.pathMap[po.cellToPath[0]] == cellImage[0]) {
        ++matching;
        CHECK(g.pathMap == h.pathMap);
      }
    }
    CHECK(matching == 1);
  }

  SUBCASE("a non-commuting square is rejected with the boundary witness") {
    GlobAttachment attB = make_attachment(a, 0, 2, {"b"}, {"c1"}, {2}, {0});
    GlobPushout poB = pushout_glob_oracle(a, attB);
    FlowMap phi;
    phi.stateMap = {0, 1, 2};
    phi.pathMap = {0, 1, 2};
    // r must go where the cell goes; sending the cell elsewhere breaks the
    // square. There is only one path (0, 2) in the base flow, so build a
    // target with two parallel ones.
    DiscreteFlow y =
        make_flow({"s0", "s1", "s2"},
                  {{"p", 0, 1}, {"q", 1, 2}, {"r", 0, 2}, {"r2", 0, 2}},
                  [] {
                    std::vector<std::vector<int>> t(4, std::vector<int>(4, -1));
                    t[0][1] = 2;
                    return t;
                  }());
    FlowMap phiY;
    phiY.stateMap = {0, 1, 2};
    phiY.pathMap = {0, 1, 2};
    CHECK_NOTHROW(glob_pushout_mediate(a, attB, poB, y, phiY, {2}));
    CHECK_THROWS_AS(glob_pushout_mediate(a, attB, poB, y, phiY, {3}), InputError);
  }
}

TEST_CASE("random loop-free pushouts satisfy the universal property") {
  Rng rng(0xf10e5u);
  for (int iter = 0; iter < 60; ++iter) {
    // Random DAG on up to 4 states with edges respecting the index order.
    int ns = 2 + static_cast<int>(rng.below(3));
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < ns; ++i) {
      for (int j = i + 1; j < ns; ++j) {
        if (rng.chance(1, 2)) edges.push_back({i, j});
      }
    }
    if (edges.empty()) edges.push_back({0, ns - 1});
    FreeDagFlow fd = free_dag_flow(ns, edges);
    const DiscreteFlow& a = fd.flow;

    // Random attachment along increasing states, so loop-freeness holds.
    int g0 = static_cast<int>(rng.below(ns - 1));
    int g1 = g0 + 1 + static_cast<int>(rng.below(ns - g0 - 1));
    std::vector<int> homPaths;
    for (int p = 0; p < a.npaths(); ++p) {
      if (a.paths[p].src == g0 && a.paths[p].tgt == g1) homPaths.push_back(p);
    }
    int ncells = static_cast<int>(rng.below(3)) + 1;
    std::vector<std::string> cells;
    for (int c = 0; c < ncells; ++c) cells.push_back("z" + std::to_string(c));
    std::vector<std::string> boundary;
    std::vector<int> attach, incl;
    if (!homPaths.empty()) {
      int nb = static_cast<int>(rng.below(3));
      for (int b = 0; b < nb; ++b) {
        boundary.push_back("b" + std::to_string(b));
        attach.push_back(homPaths[rng.below(homPaths.size())]);
        incl.push_back(static_cast<int>(rng.below(cells.size())));
      }
    }
    GlobAttachment att = make_attachment(a, g0, g1, boundary, cells, attach, incl);
    REQUIRE(is_loop_free(a, att));
    GlobPushout po = pushout_glob_oracle(a, att);
    CHECK_FALSE(po.flow.truncated);
    CHECK(verify_flow_map(a, po.flow, po.fromA));
    for (size_t z = 0; z < cells.size(); ++z) {
      CHECK(po.flow.paths[po.cellToPath[z]].src == g0);
      CHECK(po.flow.paths[po.cellToPath[z]].tgt == g1);
    }
    for (size_t b = 0; b < boundary.size(); ++b) {
      CHECK(po.fromA.pathMap[attach[b]] == po.cellToPath[incl[b]]);
    }

    // Mediate into the thin chain flow on ns states via the identity ranks.
    std::vector<FlowPath> chainPaths;
    for (int i = 0; i < ns; ++i) {
      for (int j = i + 1; j < ns; ++j) {
        chainPaths.push_back({"h" + std::to_string(i) + std::to_string(j), i, j});
      }
    }
    int cp = static_cast<int>(chainPaths.size());
    std::vector<std::vector<int>> chainTable(cp, std::vector<int>(cp, -1));
    auto chainAt = [&](int i, int j) {
      for (int k = 0; k < cp; ++k) {
        if (chainPaths[k].src == i && chainPaths[k].tgt == j) return k;
      }
      return -1;
    };
    for (int x = 0; x < cp; ++x) {
      for (int y = 0; y < cp; ++y) {
        if (chainPaths[x].tgt == chainPaths[y].src) {
          chainTable[x][y] = chainAt(chainPaths[x].src, chainPaths[y].tgt);
        }
      }
    }
    DiscreteFlow thin = make_flow(
        [&] {
          std::vector<std::string> names;
          for (int i = 0; i < ns; ++i) names.push_back("t" + std::to_string(i));
          return names;
        }(),
        chainPaths, chainTable);
    FlowMap phi;
    phi.stateMap.resize(ns);
    for (int i = 0; i < ns; ++i) phi.stateMap[i] = i;
    phi.pathMap.resize(a.npaths());
    for (int p = 0; p < a.npaths(); ++p) {
      phi.pathMap[p] = chainAt(a.paths[p].src, a.paths[p].tgt);
    }
    REQUIRE(verify_flow_map(a, thin, phi));
    std::vector<int> cellImage(cells.size(), chainAt(g0, g1));
    FlowMap h = glob_pushout_mediate(a, att, po, thin, phi, cellImage);
    CHECK(verify_flow_map(po.flow, thin, h));
    for (int p = 0; p < a.npaths(); ++p) {
      CHECK(h.pathMap[po.fromA.pathMap[p]] == phi.pathMap[p]);
    }
    for (size_t z = 0; z < cells.size(); ++z) {
      CHECK(h.pathMap[po.cellToPath[z]] == cellImage[z]);
    }
  }
}

TEST_CASE("pushout results are deterministic across repeated runs") {
  DiscreteFlow a = three_state_composite();
  GlobAttachment att = make_attachment(a, 1, 2, {}, {"z", "w"}, {}, {});
  GlobPushout po1 = pushout_glob_oracle(a, att);
  GlobPushout po2 = pushout_glob_oracle(a, att);
  REQUIRE(po1.flow.npaths() == po2.flow.npaths());
  for (int p = 0; p < po1.flow.npaths(); ++p) {
    CHECK(po1.flow.paths[p].id == po2.flow.paths[p].id);
  }
  CHECK(po1.flow.compose == po2.flow.compose);
  CHECK(po1.universe == po2.universe);
}
