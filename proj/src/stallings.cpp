#include <fillfn/stallings.hpp>

#include <numeric>

namespace fillfn {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(size_t(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[size_t(x)] != x) x = parent[size_t(x)] = parent[size_t(parent[size_t(x)])];
    return x;
  }
  bool unite(int x, int y) {
    x = find(x), y = find(y);
    if (x == y) return false;
    parent[size_t(y)] = x;
    return true;
  }
};

}  // namespace

SubgroupGraph::SubgroupGraph(const std::vector<Word>& generators, int ngens) : ngens_(ngens) {
  // Bouquet: one loop of fresh vertices per generator word, based at 0.
  struct Edge {
    int from, to, label;
  };
  std::vector<Edge> edges;
  int nv = 1;
  for (const Word& g : generators) {
    int prev = 0;
    for (size_t i = 0; i < g.size(); ++i) {
      int next = i + 1 == g.size() ? 0 : nv++;
      Letter l = g[i];
      if (letter_is_inverse(l))
        edges.push_back({next, prev, letter_gen(l)});
      else
        edges.push_back({prev, next, letter_gen(l)});
      prev = next;
    }
  }

  // Fold: identify endpoints of same-labeled edges sharing a tail or a
  // head, to a fixpoint.
  UnionFind uf(nv);
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::vector<int>> seen_out(size_t(nv), std::vector<int>(size_t(ngens), -1));
    std::vector<std::vector<int>> seen_in(size_t(nv), std::vector<int>(size_t(ngens), -1));
    for (const Edge& e : edges) {
      int f = uf.find(e.from), t = uf.find(e.to);
      int& o = seen_out[size_t(f)][size_t(e.label)];
      if (o == -1)
        o = t;
      else if (uf.unite(o, t))
        changed = true;
      int& i = seen_in[size_t(t)][size_t(e.label)];
      if (i == -1)
        i = f;
      else if (uf.unite(i, f))
        changed = true;
    }
  }

  // Compress representatives to contiguous ids with the base first.
  std::vector<int> id(size_t(nv), -1);
  id[size_t(uf.find(0))] = 0;
  int next = 1;
  for (int v = 0; v < nv; ++v) {
    int r = uf.find(v);
    if (id[size_t(r)] == -1) id[size_t(r)] = next++;
  }
  out_.assign(size_t(next), std::vector<int>(size_t(ngens), -1));
  in_.assign(size_t(next), std::vector<int>(size_t(ngens), -1));
  for (const Edge& e : edges) {
    int f = id[size_t(uf.find(e.from))], t = id[size_t(uf.find(e.to))];
    out_[size_t(f)][size_t(e.label)] = t;
    in_[size_t(t)][size_t(e.label)] = f;
  }
}

bool SubgroupGraph::membership(const Word& w) const {
  int v = 0;
  for (Letter l : free_reduce(w)) {
    int g = letter_gen(l);
    if (g >= ngens_) return false;
    v = letter_is_inverse(l) ? in_[size_t(v)][size_t(g)] : out_[size_t(v)][size_t(g)];
    if (v == -1) return false;
  }
  return v == 0;
}

}  // namespace fillfn
