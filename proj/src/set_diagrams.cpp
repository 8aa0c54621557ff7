#include "flowspace/set_diagrams.hpp"

#include <algorithm>

#include "flowspace/union_find.hpp"

namespace flowspace {

FinitePoset::FinitePoset(std::vector<std::string> objectNames,
                         std::vector<std::pair<int, int>> coverPairs)
    : objects(std::move(objectNames)), covers(std::move(coverPairs)) {
  const int n = size();
  std::vector<int> indeg(n, 0);
  std::vector<std::vector<int>> out(n);
  for (auto [lo, hi] : covers) {
    if (lo < 0 || lo >= n || hi < 0 || hi >= n) throw InputError("cover index out of range");
    if (lo == hi) throw InputError("cover from an object to itself");
    out[lo].push_back(hi);
    ++indeg[hi];
  }
  // Kahn's algorithm; leftovers mean a cycle
  std::vector<int> queue;
  for (int i = 0; i < n; ++i)
    if (indeg[i] == 0) queue.push_back(i);
  size_t done = 0;
  while (done < queue.size()) {
    int cur = queue[done++];
    for (int nxt : out[cur])
      if (--indeg[nxt] == 0) queue.push_back(nxt);
  }
  if (static_cast<int>(done) != n) throw InputError("cover relation has a cycle");
}

namespace {

void check_functorial(const SetDiagram& d) {
  const int n = d.index.size();
  std::vector<std::vector<std::pair<int, int>>> out(n);  // object -> (cover idx, target)
  for (size_t k = 0; k < d.index.covers.size(); ++k)
    out[d.index.covers[k].first].push_back({static_cast<int>(k), d.index.covers[k].second});

  // From each source object, walk a DFS tree carrying the composite function
  // and require every cover edge leaving a visited object to agree with it.
  for (int src = 0; src < n; ++src) {
    std::vector<std::vector<int>> comp(n);
    std::vector<bool> visited(n, false);
    std::vector<int> stack{src};
    comp[src].resize(d.sizes[src]);
    for (int x = 0; x < d.sizes[src]; ++x) comp[src][x] = x;
    visited[src] = true;
    while (!stack.empty()) {
      int cur = stack.back();
      stack.pop_back();
      for (auto [k, tgt] : out[cur]) {
        std::vector<int> next(d.sizes[src]);
        for (int x = 0; x < d.sizes[src]; ++x) next[x] = d.maps[k][comp[cur][x]];
        if (!visited[tgt]) {
          visited[tgt] = true;
          comp[tgt] = std::move(next);
          stack.push_back(tgt);
        } else if (comp[tgt] != next) {
          throw InputError("diagram is not functorial: two paths " + d.index.objects[src] +
                           " -> " + d.index.objects[tgt] + " disagree");
        }
      }
    }
  }
}

}  // namespace

SetDiagram::SetDiagram(FinitePoset poset, std::vector<int> setSizes,
                       std::vector<std::vector<int>> coverMaps)
    : index(std::move(poset)), sizes(std::move(setSizes)), maps(std::move(coverMaps)) {
  if (sizes.size() != static_cast<size_t>(index.size()))
    throw InputError("one set size per object required");
  if (maps.size() != index.covers.size()) throw InputError("one map per cover required");
  for (int s : sizes)
    if (s < 0) throw InputError("negative set size");
  for (size_t k = 0; k < maps.size(); ++k) {
    auto [lo, hi] = index.covers[k];
    if (maps[k].size() != static_cast<size_t>(sizes[lo]))
      throw InputError("map domain size mismatch on cover " + std::to_string(k));
    for (int y : maps[k])
      if (y < 0 || y >= sizes[hi]) throw InputError("map value out of codomain on cover " + std::to_string(k));
  }
  check_functorial(*this);
}

ColimitResult colimit(const SetDiagram& d) {
  const int n = d.index.size();
  std::vector<int> base(n + 1, 0);
  for (int i = 0; i < n; ++i) base[i + 1] = base[i] + d.sizes[i];
  UnionFind uf(base[n]);
  for (size_t k = 0; k < d.index.covers.size(); ++k) {
    auto [lo, hi] = d.index.covers[k];
    for (int x = 0; x < d.sizes[lo]; ++x) uf.unite(base[lo] + x, base[hi] + d.maps[k][x]);
  }
  ColimitResult res;
  std::vector<int> classOf(base[n], -1);
  res.inject.resize(n);
  for (int i = 0; i < n; ++i) {
    res.inject[i].resize(d.sizes[i]);
    for (int x = 0; x < d.sizes[i]; ++x) {
      int root = uf.find(base[i] + x);
      if (classOf[root] < 0) {
        classOf[root] = res.apexSize++;
        res.repr.push_back({i, x});
      }
      res.inject[i][x] = classOf[root];
    }
  }
  return res;
}

std::vector<int> cocone_factorization(const SetDiagram& d, const ColimitResult& c,
                                      const std::vector<std::vector<int>>& legs, int testSize) {
  const int n = d.index.size();
  if (legs.size() != static_cast<size_t>(n)) throw InputError("one leg per object required");
  for (int i = 0; i < n; ++i) {
    if (legs[i].size() != static_cast<size_t>(d.sizes[i])) throw InputError("leg domain mismatch");
    for (int y : legs[i])
      if (y < 0 || y >= testSize) throw InputError("leg value outside the test set");
  }
  for (size_t k = 0; k < d.index.covers.size(); ++k) {
    auto [lo, hi] = d.index.covers[k];
    for (int x = 0; x < d.sizes[lo]; ++x)
      if (legs[lo][x] != legs[hi][d.maps[k][x]])
        throw InputError("legs do not form a cocone: cover " + std::to_string(k) + " at element " +
                         std::to_string(x));
  }
  std::vector<int> h(c.apexSize);
  for (int cls = 0; cls < c.apexSize; ++cls) {
    auto [i, x] = c.repr[cls];
    h[cls] = legs[i][x];
  }
  return h;
}

SumLayout sum_layout(const std::vector<SetDiagram>& ds) {
  SumLayout layout;
  int base = 0;
  for (const SetDiagram& d : ds) {
    layout.objectBase.push_back(base);
    base += d.index.size();
  }
  return layout;
}

SetDiagram sum_diagrams(const std::vector<SetDiagram>& ds) {
  std::vector<std::string> objects;
  std::vector<std::pair<int, int>> covers;
  std::vector<int> sizes;
  std::vector<std::vector<int>> maps;
  int base = 0;
  for (size_t k = 0; k < ds.size(); ++k) {
    const SetDiagram& d = ds[k];
    for (const std::string& name : d.index.objects)
      objects.push_back(std::to_string(k) + ":" + name);
    for (auto [lo, hi] : d.index.covers) covers.push_back({base + lo, base + hi});
    sizes.insert(sizes.end(), d.sizes.begin(), d.sizes.end());
    maps.insert(maps.end(), d.maps.begin(), d.maps.end());
    base += d.index.size();
  }
  return SetDiagram(FinitePoset(std::move(objects), std::move(covers)), std::move(sizes),
                    std::move(maps));
}

SetDiagram product_diagram(const SetDiagram& a, const SetDiagram& b) {
  const int na = a.index.size(), nb = b.index.size();
  std::vector<std::string> objects;
  std::vector<int> sizes;
  objects.reserve(static_cast<size_t>(na) * nb);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j) {
      objects.push_back(a.index.objects[i] + "|" + b.index.objects[j]);
      sizes.push_back(a.sizes[i] * b.sizes[j]);
    }
  auto at = [nb](int i, int j) { return i * nb + j; };

  std::vector<std::pair<int, int>> covers;
  std::vector<std::vector<int>> maps;
  for (size_t k = 0; k < a.index.covers.size(); ++k) {
    auto [lo, hi] = a.index.covers[k];
    for (int j = 0; j < nb; ++j) {
      covers.push_back({at(lo, j), at(hi, j)});
      std::vector<int> f(static_cast<size_t>(a.sizes[lo]) * b.sizes[j]);
      for (int xa = 0; xa < a.sizes[lo]; ++xa)
        for (int xb = 0; xb < b.sizes[j]; ++xb)
          f[xa * b.sizes[j] + xb] = a.maps[k][xa] * b.sizes[j] + xb;
      maps.push_back(std::move(f));
    }
  }
  for (size_t k = 0; k < b.index.covers.size(); ++k) {
    auto [lo, hi] = b.index.covers[k];
    for (int i = 0; i < na; ++i) {
      covers.push_back({at(i, lo), at(i, hi)});
      std::vector<int> f(static_cast<size_t>(a.sizes[i]) * b.sizes[lo]);
      for (int xa = 0; xa < a.sizes[i]; ++xa)
        for (int xb = 0; xb < b.sizes[lo]; ++xb)
          f[xa * b.sizes[lo] + xb] = xa * b.sizes[hi] + b.maps[k][xb];
      maps.push_back(std::move(f));
    }
  }
  return SetDiagram(FinitePoset(std::move(objects), std::move(covers)), std::move(sizes),
                    std::move(maps));
}

}  // namespace flowspace
