#include "flowspace/pathspace.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <unordered_map>

#include "flowspace/union_find.hpp"

namespace flowspace {

namespace {

using HomTable = std::vector<std::vector<std::vector<int>>>;

HomTable hom_table(const DiscreteFlow& a) {
  HomTable hom(a.nstates(), std::vector<std::vector<int>>(a.nstates()));
  for (int p = 0; p < a.npaths(); ++p) hom[a.paths[p].src][a.paths[p].tgt].push_back(p);
  return hom;
}

ValueTable make_value_table(const HomTable& hom, int tcount, int g0, int g1,
                            const TupleObject& n) {
  static_cast<void>(g0);
  static_cast<void>(g1);
  ValueTable v;
  for (const Cell& c : n.cells) {
    if (c.flag == 0) {
      v.factors.push_back(hom[c.src][c.tgt]);
    } else {
      std::vector<int> ts(tcount);
      for (int t = 0; t < tcount; ++t) ts[t] = t;
      v.factors.push_back(std::move(ts));
    }
    v.size *= static_cast<int>(v.factors.back().size());
  }
  return v;
}

int factor_position(const std::vector<int>& factor, int entry) {
  auto it = std::lower_bound(factor.begin(), factor.end(), entry);
  if (it == factor.end() || *it != entry) {
    throw std::logic_error("value table: entry not present in its factor");
  }
  return static_cast<int>(it - factor.begin());
}

}  // namespace

int ValueTable::encode(const std::vector<int>& coords) const {
  int e = 0;
  for (size_t i = 0; i < factors.size(); ++i) {
    e = e * static_cast<int>(factors[i].size()) + coords[i];
  }
  return e;
}

std::vector<int> ValueTable::decode(int element) const {
  std::vector<int> coords(factors.size());
  for (size_t i = factors.size(); i-- > 0;) {
    int w = static_cast<int>(factors[i].size());
    coords[i] = element % w;
    element /= w;
  }
  return coords;
}

std::vector<int> ValueTable::elems(int element) const {
  std::vector<int> out = decode(element);
  for (size_t i = 0; i < factors.size(); ++i) out[i] = factors[i][out[i]];
  return out;
}

int DfDiagram::object_index(const TupleObject& n) const {
  auto it = std::lower_bound(support.begin(), support.end(), n);
  if (it == support.end() || !(*it == n)) return -1;
  return static_cast<int>(it - support.begin());
}

ValueTable DfDiagram::value_of(const TupleObject& n) const {
  return make_value_table(hom_table(a), tcells.count, att.g0, att.g1, n);
}

DfDiagram build_df(const DiscreteFlow& a, const GlobAttachment& att) {
  if (a.truncated) throw InputError("diagram: base flow has undefined composites");
  // Revalidate the attachment against this flow.
  make_attachment(a, att.g0, att.g1, att.boundary, att.cells, att.attach, att.incl);
  if (!is_loop_free(a, att)) {
    throw PreconditionError(
        "diagram: flow with attachment is not loop-free, the chain poset would be infinite");
  }

  DfDiagram df{a,
               att,
               attached_cells(a, att),
               PosetContext(a.states, a.states[att.g0], a.states[att.g1]),
               {},
               {},
               {},
               {}};
  HomTable hom = hom_table(a);

  // Support: every composable chain of cells whose factors are all nonempty.
  // Loop-freeness keeps the chains acyclic, hence finite.
  std::vector<Cell> cur;
  std::function<void(int)> grow = [&](int state) {
    for (int y = 0; y < a.nstates(); ++y) {
      if (hom[state][y].empty()) continue;
      cur.push_back({state, 0, y});
      df.support.push_back(TupleObject{cur});
      grow(y);
      cur.pop_back();
    }
    if (state == att.g0 && df.tcells.count > 0) {
      cur.push_back({att.g0, 1, att.g1});
      df.support.push_back(TupleObject{cur});
      grow(att.g1);
      cur.pop_back();
    }
  };
  for (int s = 0; s < a.nstates(); ++s) grow(s);
  std::sort(df.support.begin(), df.support.end());

  std::vector<int> sizes;
  for (const TupleObject& n : df.support) {
    df.values.push_back(make_value_table(hom, df.tcells.count, att.g0, att.g1, n));
    sizes.push_back(df.values.back().size);
  }

  std::vector<std::string> names;
  for (const TupleObject& n : df.support) names.push_back(format_tuple(df.ctx, n));

  std::vector<std::pair<int, int>> coverPairs;
  std::vector<std::vector<int>> coverMaps;
  for (int i = 0; i < static_cast<int>(df.support.size()); ++i) {
    for (GeneratorArrow g : applicable_generators(df.ctx, df.support[i])) {
      TupleObject target = apply_generator(df.ctx, df.support[i], g);
      int j = df.object_index(target);
      if (j < 0) {
        throw std::logic_error("diagram: generator left the support at " + names[i]);
      }
      std::vector<int> m(df.values[i].size);
      for (int e = 0; e < df.values[i].size; ++e) {
        std::vector<int> entries = df.values[i].elems(e);
        int k = g.position - 1;
        if (g.kind == GenKind::Compose) {
          entries[k] = a.compose_at(entries[k], entries[k + 1]);
          entries.erase(entries.begin() + k + 1);
        } else {
          entries[k] = df.tcells.fromPath[entries[k]];
        }
        std::vector<int> coords(entries.size());
        for (size_t c = 0; c < entries.size(); ++c) {
          coords[c] = factor_position(df.values[j].factors[c], entries[c]);
        }
        m[e] = df.values[j].encode(coords);
      }
      coverPairs.push_back({i, j});
      coverMaps.push_back(std::move(m));
      df.coverArrows.push_back({{i, j}, g});
    }
  }
  // The set-diagram constructor checks functoriality: every pair of
  // generator paths between the same two objects realizes the same function.
  df.diagram = SetDiagram(FinitePoset(names, coverPairs), sizes, coverMaps);
  return df;
}

DfDiagram build_df_identity(const DiscreteFlow& a, int g0, int g1) {
  if (g0 < 0 || g0 >= a.nstates() || g1 < 0 || g1 >= a.nstates()) {
    throw InputError("identity diagram: g0/g1 out of range");
  }
  std::vector<std::string> names;
  std::vector<int> attach, incl;
  for (int p = 0; p < a.npaths(); ++p) {
    if (a.paths[p].src == g0 && a.paths[p].tgt == g1) {
      incl.push_back(static_cast<int>(names.size()));
      names.push_back(a.paths[p].id);
      attach.push_back(p);
    }
  }
  GlobAttachment att = make_attachment(a, g0, g1, names, names, attach, incl);
  return build_df(a, att);
}

namespace {

std::string render_element(const DfDiagram& df, const TupleObject& obj,
                           const std::vector<int>& entries) {
  std::string out = format_tuple(df.ctx, obj) + "|";
  for (size_t i = 0; i < entries.size(); ++i) {
    if (i) out += ",";
    if (obj.cells[i].flag == 0) {
      out += df.a.paths[entries[i]].id;
    } else {
      out += "[" + df.tcells.names[entries[i]] + "]";
    }
  }
  return out;
}

}  // namespace

ReedyPathspace pathspace_via_reedy(const DiscreteFlow& a, const GlobAttachment& att) {
  ReedyPathspace out;
  out.df = build_df(a, att);
  const DfDiagram& df = out.df;
  out.colim = colimit(df.diagram);
  out.classRep = out.colim.repr;

  const int nclasses = out.colim.apexSize;
  out.flow.states = a.states;
  out.flow.truncated = false;
  out.flow.paths.resize(nclasses);
  for (int c = 0; c < nclasses; ++c) {
    auto [oi, e] = out.classRep[c];
    const TupleObject& obj = df.support[oi];
    out.flow.paths[c] = {render_element(df, obj, df.values[oi].elems(e)),
                         obj.cells.front().src, obj.cells.back().tgt};
  }
  {
    std::map<std::string, int> seen;
    for (auto& p : out.flow.paths) {
      int n = seen[p.id]++;
      if (n > 0) p.id += "#" + std::to_string(n + 1);
    }
  }

  // Composition: concatenation of elements, checked to be constant on
  // colimit classes while the table is filled.
  out.flow.compose.assign(nclasses, std::vector<int>(nclasses, -1));
  const int nobj = static_cast<int>(df.support.size());
  for (int i = 0; i < nobj; ++i) {
    for (int j = 0; j < nobj; ++j) {
      if (df.support[i].cells.back().tgt != df.support[j].cells.front().src) continue;
      std::vector<Cell> cells = df.support[i].cells;
      cells.insert(cells.end(), df.support[j].cells.begin(), df.support[j].cells.end());
      int k = df.object_index(TupleObject{cells});
      if (k < 0) throw std::logic_error("pathspace: concatenated chain left the support");
      for (int x = 0; x < df.values[i].size; ++x) {
        int cx = out.colim.inject[i][x];
        std::vector<int> px = df.values[i].decode(x);
        for (int y = 0; y < df.values[j].size; ++y) {
          int cy = out.colim.inject[j][y];
          // Factor lists of the concatenation are the two factor lists side
          // by side, so positions concatenate directly.
          std::vector<int> pc = px;
          const std::vector<int> py = df.values[j].decode(y);
          pc.insert(pc.end(), py.begin(), py.end());
          int cz = out.colim.inject[k][df.values[k].encode(pc)];
          int& slot = out.flow.compose[cx][cy];
          if (slot == -1) {
            slot = cz;
          } else if (slot != cz) {
            throw std::logic_error(
                "pathspace: composition is not well-defined on classes, witness elements " +
                render_element(df, df.support[i], df.values[i].elems(x)) + " . " +
                render_element(df, df.support[j], df.values[j].elems(y)));
          }
        }
      }
    }
  }
  validate_flow(out.flow);

  out.fromA.stateMap.resize(a.nstates());
  for (int s = 0; s < a.nstates(); ++s) out.fromA.stateMap[s] = s;
  out.fromA.pathMap.resize(a.npaths());
  for (int p = 0; p < a.npaths(); ++p) {
    TupleObject single{{Cell{a.paths[p].src, 0, a.paths[p].tgt}}};
    int oi = df.object_index(single);
    if (oi < 0) throw std::logic_error("pathspace: missing singleton object");
    int pos = factor_position(df.values[oi].factors[0], p);
    out.fromA.pathMap[p] = out.colim.inject[oi][pos];
  }
  out.cellToPath.resize(att.cells.size());
  if (!att.cells.empty()) {
    TupleObject cellObj{{Cell{att.g0, 1, att.g1}}};
    int oi = df.object_index(cellObj);
    if (oi < 0) throw std::logic_error("pathspace: missing cell object");
    for (size_t z = 0; z < att.cells.size(); ++z) {
      out.cellToPath[z] = out.colim.inject[oi][df.tcells.fromCell[z]];
    }
  }
  if (!verify_flow_map(a, out.flow, out.fromA)) {
    throw std::logic_error("pathspace: canonical map is not a flow map");
  }
  return out;
}

CompareResult compare_with_oracle(const DiscreteFlow& a, const GlobAttachment& att) {
  CompareResult res;
  res.oracle = pushout_glob_oracle(a, att);
  res.reedy = pathspace_via_reedy(a, att);
  const GlobPushout& po = res.oracle;
  const ReedyPathspace& rp = res.reedy;
  const DfDiagram& df = rp.df;

  auto fail = [&](const std::string& msg) {
    res.ok = false;
    res.message = msg;
    return res;
  };

  if (po.tcells.count != df.tcells.count || po.tcells.fromPath != df.tcells.fromPath ||
      po.tcells.fromCell != df.tcells.fromCell) {
    return fail("attached cell sets differ between the two constructions");
  }

  HomTable hom = hom_table(a);
  // Each universe word is an element of the value of its own cell chain.
  std::vector<int> phi(po.flow.npaths(), -1);
  std::vector<int> psi(rp.flow.npaths(), -1);
  for (size_t wi = 0; wi < po.universe.size(); ++wi) {
    const PathWord& w = po.universe[wi];
    std::vector<Cell> cells;
    std::vector<int> coords;
    for (const Letter& l : w) {
      if (l.isCell) {
        cells.push_back({att.g0, 1, att.g1});
        coords.push_back(l.idx);
      } else {
        cells.push_back({a.paths[l.idx].src, 0, a.paths[l.idx].tgt});
        coords.push_back(factor_position(hom[a.paths[l.idx].src][a.paths[l.idx].tgt], l.idx));
      }
    }
    int oi = df.object_index(TupleObject{cells});
    if (oi < 0) {
      return fail("word " + render_word(a, po.tcells, w) + " has no support object");
    }
    int rclass = rp.colim.inject[oi][df.values[oi].encode(coords)];
    int oclass = po.wordClass[wi];
    if (phi[oclass] == -1) {
      phi[oclass] = rclass;
    } else if (phi[oclass] != rclass) {
      return fail("correspondence is not constant on the class of word " +
                  render_word(a, po.tcells, w));
    }
    if (psi[rclass] != -1 && psi[rclass] != oclass) {
      return fail("two oracle classes land on diagram class '" + rp.flow.paths[rclass].id +
                  "', e.g. word " + render_word(a, po.tcells, w));
    }
    psi[rclass] = oclass;
  }
  for (int c = 0; c < po.flow.npaths(); ++c) {
    if (phi[c] == -1) return fail("oracle path '" + po.flow.paths[c].id + "' has no image");
  }
  for (int c = 0; c < rp.flow.npaths(); ++c) {
    if (psi[c] == -1) {
      return fail("diagram path '" + rp.flow.paths[c].id + "' is not hit by any word");
    }
  }

  FlowMap iso;
  iso.stateMap.resize(a.nstates());
  for (int s = 0; s < a.nstates(); ++s) iso.stateMap[s] = s;
  iso.pathMap = phi;
  if (!verify_flow_map(po.flow, rp.flow, iso)) {
    return fail("correspondence is a bijection but not a flow map");
  }
  for (int p = 0; p < a.npaths(); ++p) {
    if (phi[po.fromA.pathMap[p]] != rp.fromA.pathMap[p]) {
      return fail("correspondence does not commute with the canonical map at path '" +
                  a.paths[p].id + "'");
    }
  }
  for (size_t z = 0; z < att.cells.size(); ++z) {
    if (phi[po.cellToPath[z]] != rp.cellToPath[z]) {
      return fail("correspondence does not commute with the cell map at '" + att.cells[z] +
                  "'");
    }
  }
  res.ok = true;
  res.iso = std::move(iso);
  return res;
}

namespace {

// Internal latching computation keeping the colimit tables available.
struct LatchingComputation {
  std::vector<TupleObject> cat;
  std::vector<ValueTable> values;
  ColimitResult colim;
  LatchingResult result;
};

LatchingComputation latching_compute(const DfDiagram& df, const TupleObject& n) {
  make_tuple(df.ctx, n.cells);  // validates the object against this context
  LatchingComputation lc;
  lc.cat = latching_category(df.ctx, n);
  HomTable hom = hom_table(df.a);

  std::vector<std::string> names;
  std::vector<int> sizes;
  for (const TupleObject& m : lc.cat) {
    lc.values.push_back(make_value_table(hom, df.tcells.count, df.att.g0, df.att.g1, m));
    sizes.push_back(lc.values.back().size);
    names.push_back(format_tuple(df.ctx, m));
  }
  auto cat_index = [&](const TupleObject& m) {
    for (size_t i = 0; i < lc.cat.size(); ++i) {
      if (lc.cat[i] == m) return static_cast<int>(i);
    }
    return -1;
  };

  std::vector<std::pair<int, int>> coverPairs;
  std::vector<std::vector<int>> coverMaps;
  for (int i = 0; i < static_cast<int>(lc.cat.size()); ++i) {
    for (GeneratorArrow g : applicable_generators(df.ctx, lc.cat[i])) {
      if (g.kind != GenKind::Include) continue;  // merges leave the flag-subset family
      int j = cat_index(apply_generator(df.ctx, lc.cat[i], g));
      if (j < 0) continue;  // raised past n's flags, or up to n itself
      std::vector<int> m(lc.values[i].size);
      for (int e = 0; e < lc.values[i].size; ++e) {
        std::vector<int> entries = lc.values[i].elems(e);
        entries[g.position - 1] = df.tcells.fromPath[entries[g.position - 1]];
        std::vector<int> coords(entries.size());
        for (size_t c = 0; c < entries.size(); ++c) {
          coords[c] = factor_position(lc.values[j].factors[c], entries[c]);
        }
        m[e] = lc.values[j].encode(coords);
      }
      coverPairs.push_back({i, j});
      coverMaps.push_back(std::move(m));
    }
  }
  lc.colim = colimit(SetDiagram(FinitePoset(names, coverPairs), sizes, coverMaps));

  ValueTable target = make_value_table(hom, df.tcells.count, df.att.g0, df.att.g1, n);
  lc.result.size = lc.colim.apexSize;
  lc.result.targetSize = target.size;
  lc.result.toTarget.assign(lc.colim.apexSize, -1);
  for (int i = 0; i < static_cast<int>(lc.cat.size()); ++i) {
    for (int e = 0; e < lc.values[i].size; ++e) {
      std::vector<int> entries = lc.values[i].elems(e);
      for (int c = 0; c < static_cast<int>(entries.size()); ++c) {
        if (lc.cat[i].cells[c].flag == 0 && n.cells[c].flag == 1) {
          entries[c] = df.tcells.fromPath[entries[c]];
        }
      }
      std::vector<int> coords(entries.size());
      for (size_t c = 0; c < entries.size(); ++c) {
        coords[c] = factor_position(target.factors[c], entries[c]);
      }
      int img = target.encode(coords);
      int cls = lc.colim.inject[i][e];
      if (lc.result.toTarget[cls] == -1) {
        lc.result.toTarget[cls] = img;
      } else if (lc.result.toTarget[cls] != img) {
        throw std::logic_error("latching: comparison map is not constant on a class");
      }
    }
  }
  return lc;
}

}  // namespace

LatchingResult latching_object(const DfDiagram& df, const TupleObject& n) {
  return latching_compute(df, n).result;
}

LatchingResult latching_via_cube(const DiscreteFlow& a, const GlobAttachment& att,
                                 const TupleObject& n) {
  make_attachment(a, att.g0, att.g1, att.boundary, att.cells, att.attach, att.incl);
  AttachedCellSet tcells = attached_cells(a, att);
  PosetContext ctx(a.states, a.states[att.g0], a.states[att.g1]);
  make_tuple(ctx, n.cells);
  HomTable hom = hom_table(a);

  const int p1 = n.length();
  const int full = (1 << p1) - 1;
  // Proper subsets of the coordinate set, as bitmasks. Coordinate i's factor
  // map is (empty -> hom) for flag 0 and (hom(g0,g1) -> T) for flag 1; a
  // subset picks the codomain on its members and the domain elsewhere.
  auto subset_value = [&](int mask) {
    ValueTable v;
    for (int i = 0; i < p1; ++i) {
      const Cell& c = n.cells[i];
      if (mask >> i & 1) {
        if (c.flag == 0) {
          v.factors.push_back(hom[c.src][c.tgt]);
        } else {
          std::vector<int> ts(tcells.count);
          for (int t = 0; t < tcells.count; ++t) ts[t] = t;
          v.factors.push_back(std::move(ts));
        }
      } else {
        if (c.flag == 0) {
          v.factors.push_back({});
        } else {
          v.factors.push_back(hom[att.g0][att.g1]);
        }
      }
      v.size *= static_cast<int>(v.factors.back().size());
    }
    return v;
  };

  std::vector<ValueTable> values;
  std::vector<std::string> names;
  std::vector<int> sizes;
  for (int mask = 0; mask < full; ++mask) {
    values.push_back(subset_value(mask));
    sizes.push_back(values.back().size);
    std::string nm = "K";
    for (int i = 0; i < p1; ++i) nm += (mask >> i & 1) ? '1' : '0';
    names.push_back(nm);
  }

  std::vector<std::pair<int, int>> coverPairs;
  std::vector<std::vector<int>> coverMaps;
  for (int mask = 0; mask < full; ++mask) {
    for (int i = 0; i < p1; ++i) {
      if (mask >> i & 1) continue;
      int up = mask | (1 << i);
      if (up == full) continue;
      std::vector<int> m(values[mask].size);
      for (int e = 0; e < values[mask].size; ++e) {
        std::vector<int> entries = values[mask].elems(e);
        if (n.cells[i].flag == 1) entries[i] = tcells.fromPath[entries[i]];
        std::vector<int> coords(entries.size());
        for (size_t c = 0; c < entries.size(); ++c) {
          coords[c] = factor_position(values[up].factors[c], entries[c]);
        }
        m[e] = values[up].encode(coords);
      }
      coverPairs.push_back({mask, up});
      coverMaps.push_back(std::move(m));
    }
  }
  ColimitResult colim = colimit(SetDiagram(FinitePoset(names, coverPairs), sizes, coverMaps));

  ValueTable target = make_value_table(hom, tcells.count, att.g0, att.g1, n);
  LatchingResult out;
  out.size = colim.apexSize;
  out.targetSize = target.size;
  out.toTarget.assign(colim.apexSize, -1);
  for (int mask = 0; mask < full; ++mask) {
    for (int e = 0; e < values[mask].size; ++e) {
      std::vector<int> entries = values[mask].elems(e);
      for (int i = 0; i < p1; ++i) {
        if (!(mask >> i & 1) && n.cells[i].flag == 1) {
          entries[i] = tcells.fromPath[entries[i]];
        }
      }
      std::vector<int> coords(entries.size());
      for (size_t c = 0; c < entries.size(); ++c) {
        coords[c] = factor_position(target.factors[c], entries[c]);
      }
      int img = target.encode(coords);
      int cls = colim.inject[mask][e];
      if (out.toTarget[cls] == -1) {
        out.toTarget[cls] = img;
      } else if (out.toTarget[cls] != img) {
        throw std::logic_error("cube: comparison map is not constant on a class");
      }
    }
  }
  return out;
}

RelativeLatching relative_latching_map(const DiscreteFlow& a, const GlobAttachment& att,
                                       const TupleObject& n) {
  DfDiagram dfF = build_df(a, att);
  DfDiagram dfI = build_df_identity(a, att.g0, att.g1);
  return relative_latching_map(dfF, dfI, n);
}

RelativeLatching relative_latching_map(const DfDiagram& dfF, const DfDiagram& dfI,
                                       const TupleObject& n) {
  const DiscreteFlow& a = dfF.a;
  make_tuple(dfF.ctx, n.cells);

  LatchingComputation lf = latching_compute(dfF, n);
  LatchingComputation li = latching_compute(dfI, n);

  // The identity attachment's cell classes are the hom set itself; invert
  // its fromPath to translate elements back to paths.
  std::vector<int> pathOfIdClass(dfI.tcells.count, -1);
  for (int p = 0; p < a.npaths(); ++p) {
    if (dfI.tcells.fromPath[p] >= 0) {
      if (pathOfIdClass[dfI.tcells.fromPath[p]] != -1) {
        throw std::logic_error("relative latching: identity cell classes are not free");
      }
      pathOfIdClass[dfI.tcells.fromPath[p]] = p;
    }
  }

  ValueTable targetI = dfI.value_of(n);
  ValueTable targetF = dfF.value_of(n);
  // The natural map from the identity diagram's value to the attachment
  // diagram's value: translate every flag-1 coordinate through the cells.
  auto nuAt = [&](const TupleObject& obj, const ValueTable& from, const ValueTable& to,
                  int element) {
    std::vector<int> entries = from.elems(element);
    for (int c = 0; c < static_cast<int>(entries.size()); ++c) {
      if (obj.cells[c].flag == 1) {
        entries[c] = dfF.tcells.fromPath[pathOfIdClass[entries[c]]];
      }
    }
    std::vector<int> coords(entries.size());
    for (size_t c = 0; c < entries.size(); ++c) {
      coords[c] = factor_position(to.factors[c], entries[c]);
    }
    return to.encode(coords);
  };

  // Induced map on latching classes.
  std::vector<int> liToLf(li.colim.apexSize, -1);
  for (int i = 0; i < static_cast<int>(li.cat.size()); ++i) {
    for (int e = 0; e < li.values[i].size; ++e) {
      int img = lf.colim.inject[i][nuAt(li.cat[i], li.values[i], lf.values[i], e)];
      int cls = li.colim.inject[i][e];
      if (liToLf[cls] == -1) {
        liToLf[cls] = img;
      } else if (liToLf[cls] != img) {
        throw std::logic_error("relative latching: induced latching map ill-defined");
      }
    }
  }

  // Pushout of  L_n(attachment) <- L_n(identity) -> value_identity(n).
  const int offset = lf.result.size;
  UnionFind uf(offset + targetI.size);
  for (int e = 0; e < li.result.size; ++e) {
    uf.unite(liToLf[e], offset + li.result.toTarget[e]);
  }
  std::vector<int> classOfRoot(offset + targetI.size, -1);
  int napex = 0;
  std::vector<int> slotClass(offset + targetI.size);
  for (int i = 0; i < offset + targetI.size; ++i) {
    int r = uf.find(i);
    if (classOfRoot[r] < 0) classOfRoot[r] = napex++;
    slotClass[i] = classOfRoot[r];
  }

  RelativeLatching out;
  out.map.size = napex;
  out.map.targetSize = targetF.size;
  out.map.toTarget.assign(napex, -1);
  auto offer = [&](int cls, int img) {
    if (out.map.toTarget[cls] == -1) {
      out.map.toTarget[cls] = img;
    } else if (out.map.toTarget[cls] != img) {
      throw std::logic_error("relative latching: map ill-defined on the pushout");
    }
  };
  for (int e = 0; e < lf.result.size; ++e) offer(slotClass[e], lf.result.toTarget[e]);
  for (int x = 0; x < targetI.size; ++x) {
    offer(slotClass[offset + x], nuAt(n, targetI, targetF, x));
  }

  out.heightZero = n.height() == 0;
  // Bijectivity of the assembled map.
  {
    std::vector<char> hit(targetF.size, 0);
    bool inj = true;
    for (int c = 0; c < napex; ++c) {
      if (hit[out.map.toTarget[c]]) inj = false;
      hit[out.map.toTarget[c]] = 1;
    }
    bool surj = napex == targetF.size && inj;
    out.isBijection = inj && surj;
  }
  // Whether the attachment latching injects isomorphically into the pushout,
  // making the assembled map the latching comparison.
  {
    std::vector<char> seen(napex, 0);
    bool inj = true;
    for (int e = 0; e < lf.result.size; ++e) {
      if (seen[slotClass[e]]) inj = false;
      seen[slotClass[e]] = 1;
    }
    bool surj = true;
    for (int c = 0; c < napex; ++c) surj = surj && seen[c];
    out.identifiedWithLatching = inj && surj && lf.result.size == napex;
    if (out.identifiedWithLatching) {
      for (int e = 0; e < lf.result.size; ++e) {
        if (out.map.toTarget[slotClass[e]] != lf.result.toTarget[e]) {
          out.identifiedWithLatching = false;
        }
      }
    }
  }
  return out;
}

bool tower_pathspace_check(const std::vector<DiscreteFlow>& flows,
                           const std::vector<FlowMap>& maps) {
  if (flows.empty()) throw InputError("tower: need at least one flow");
  if (maps.size() + 1 != flows.size()) {
    throw InputError("tower: need exactly one connecting map per consecutive pair");
  }
  for (size_t i = 0; i < maps.size(); ++i) {
    if (!verify_flow_map(flows[i], flows[i + 1], maps[i])) {
      throw InputError("tower: connecting map " + std::to_string(i) + " is not a flow map");
    }
    std::vector<char> seen(flows[i + 1].npaths(), 0);
    for (int p : maps[i].pathMap) {
      if (seen[p]) {
        throw InputError("tower: connecting map " + std::to_string(i) +
                         " is not injective on paths");
      }
      seen[p] = 1;
    }
  }

  std::vector<int> offset(flows.size() + 1, 0);
  for (size_t i = 0; i < flows.size(); ++i) offset[i + 1] = offset[i] + flows[i].npaths();
  UnionFind uf(offset.back());
  for (size_t i = 0; i < maps.size(); ++i) {
    for (int p = 0; p < flows[i].npaths(); ++p) {
      uf.unite(offset[i] + p, offset[i + 1] + maps[i].pathMap[p]);
    }
  }
  // Forward image of every path in the last flow.
  std::vector<int> forward(offset.back());
  const size_t last = flows.size() - 1;
  for (int p = 0; p < flows[last].npaths(); ++p) forward[offset[last] + p] = p;
  for (size_t i = last; i-- > 0;) {
    for (int p = 0; p < flows[i].npaths(); ++p) {
      forward[offset[i] + p] = forward[offset[i + 1] + maps[i].pathMap[p]];
    }
  }

  // Classes must match the last path set exactly: one class per last path,
  // all members tracing forward to it.
  std::vector<int> classLast;
  std::vector<int> classOfRoot(offset.back(), -1);
  int nclasses = 0;
  bool ok = true;
  for (int s = 0; s < offset.back(); ++s) {
    int r = uf.find(s);
    if (classOfRoot[r] < 0) {
      classOfRoot[r] = nclasses++;
      classLast.push_back(forward[s]);
    } else if (classLast[classOfRoot[r]] != forward[s]) {
      ok = false;
    }
  }
  if (nclasses != flows[last].npaths()) ok = false;
  if (ok) {
    std::vector<char> hit(flows[last].npaths(), 0);
    for (int c = 0; c < nclasses; ++c) {
      if (hit[classLast[c]]) ok = false;
      hit[classLast[c]] = 1;
    }
  }
  return ok;
}

std::string df_to_dot(const DfDiagram& df) {
  auto escape = [](const std::string& s) {
    std::string out;
    for (char c : s) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out;
  };
  std::ostringstream os;
  os << "digraph support {\n  rankdir=BT;\n  node [shape=box];\n";
  for (size_t i = 0; i < df.support.size(); ++i) {
    os << "  n" << i << " [label=\"" << escape(format_tuple(df.ctx, df.support[i]))
       << "\\nsize " << df.values[i].size << "\"";
    if (df.support[i].height() > 0) os << ", style=filled, fillcolor=lightgrey";
    os << "];\n";
  }
  for (const auto& [pair, gen] : df.coverArrows) {
    os << "  n" << pair.first << " -> n" << pair.second << " [label=\""
       << (gen.kind == GenKind::Compose ? "c@" : "I@") << gen.position << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace flowspace
