#pragma once

#include <fillfn/word.hpp>

#include <vector>

namespace fillfn {

// Folded graph of a finitely generated subgroup of a free group
// (Stallings).  Folded: no vertex has two outgoing edges with the same
// label, nor two incoming.  Vertex 0 is the base.
class SubgroupGraph {
 public:
  SubgroupGraph(const std::vector<Word>& generators, int ngens);

  // w in <generators> as an element of the free group; w is freely
  // reduced first, then traced from the base vertex.
  bool membership(const Word& w) const;

  int vertex_count() const { return int(out_.size()); }
  int generator_count() const { return ngens_; }

 private:
  int ngens_;
  std::vector<std::vector<int>> out_;  // out_[v][g]: head of g-edge from v, -1 if none
  std::vector<std::vector<int>> in_;   // in_[v][g]: tail of g-edge into v, -1 if none
};

inline SubgroupGraph fold(const std::vector<Word>& generators, int ngens) {
  return SubgroupGraph(generators, ngens);
}

}  // namespace fillfn
