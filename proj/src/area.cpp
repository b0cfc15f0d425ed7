#include <fillfn/area.hpp>

#include <algorithm>
#include <cstdlib>
#include <queue>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

namespace fillfn {

namespace {

// m[g] = max |exp_g(r)| over relators: one application changes exp_g by
// at most m[g], and m[g] = 0 makes exp_g a derivation invariant.
std::vector<long> exponent_caps(const Presentation& p) {
  std::vector<long> m(size_t(p.alphabet.size()), 0);
  for (const Word& r : p.relators)
    for (int g = 0; g < p.alphabet.size(); ++g)
      m[size_t(g)] = std::max(m[size_t(g)], std::labs(exponent_sum(r, g)));
  return m;
}

long exp_heuristic(const Word& w, const std::vector<long>& caps) {
  long best = 0;
  for (size_t g = 0; g < caps.size(); ++g)
    if (caps[g] > 0) {
      long e = std::labs(exponent_sum(w, int(g)));
      best = std::max(best, (e + caps[g] - 1) / caps[g]);
    }
  return best;
}

// A nonempty reduced word has area one exactly when its cyclic core is a
// rotated relator; the returned step performs that single deletion.
std::optional<DerivationStep> one_cell_step(const Word& reduced, const Presentation& p) {
  CyclicForm cf = cyclic_reduce(reduced);
  for (int rel = 0; rel < int(p.relators.size()); ++rel) {
    if (p.relators[size_t(rel)].size() != cf.core.size()) continue;
    for (int sign : {1, -1})
      for (int rot = 0; rot < int(cf.core.size()); ++rot) {
        DerivationStep s{int(cf.prefix.size()), rel, rot, sign};
        if (rotated_relator(p, s) == cf.core) return s;
      }
  }
  return std::nullopt;
}

}  // namespace

AreaResult exact_area(const Word& w0, const Presentation& p, const SearchBudget& budget) {
  AreaResult res;
  res.ledger.start = w0;
  Word start = free_reduce(w0);
  if (start.empty()) {
    res.status = AreaStatus::Exact;
    res.area = 0;
    return res;
  }
  const std::vector<long> caps = exponent_caps(p);
  for (int g = 0; g < p.alphabet.size(); ++g)
    if (caps[size_t(g)] == 0 && exponent_sum(start, g) != 0) {
      res.status = AreaStatus::NoFilling;
      return res;
    }
  if (budget.max_depth < 1) {
    res.status = AreaStatus::NoFillingWithinDepth;
    return res;
  }
  if (std::optional<DerivationStep> s = one_cell_step(start, p)) {
    res.status = AreaStatus::Exact;
    res.area = 1;
    res.ledger.steps = {*s};
    return res;
  }
  if (budget.max_depth == 1) {
    res.status = AreaStatus::NoFillingWithinDepth;
    return res;
  }

  // Rotated relator variants, hoisted out of the search loop.
  std::vector<Word> variants;
  std::vector<DerivationStep> variant_steps;
  for (int rel = 0; rel < int(p.relators.size()); ++rel)
    for (int sign : {1, -1})
      for (int rot = 0; rot < int(p.relators[size_t(rel)].size()); ++rot) {
        DerivationStep s{0, rel, rot, sign};
        variants.push_back(rotated_relator(p, s));
        variant_steps.push_back(s);
      }

  // Iterative deepening: a cap-d round with admissible pruning is complete,
  // so exhausting it certifies area > d and the next round's first filling
  // is minimal. Tight caps keep both the frontier and the memory small.
  long used = 0;
  for (int cap = std::max(2, int(exp_heuristic(start, caps))); cap <= budget.max_depth;
       ++cap) {
    const size_t max_len = start.size() + size_t(cap) * p.max_relator_length();
    std::unordered_map<Word, long> dist;
    std::unordered_map<Word, std::pair<Word, DerivationStep>> parent;
    using Entry = std::tuple<long, long, size_t, Word>;  // (f, depth, length, word)
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> pq;
    dist.emplace(start, 0);
    pq.emplace(exp_heuristic(start, caps), 0, start.size(), start);
    ++used;

    while (!pq.empty()) {
      auto [f, g, len, w] = pq.top();
      pq.pop();
      auto it = dist.find(w);
      if (it == dist.end() || g > it->second) continue;
      // Earlier rounds certified area >= cap, so any filling found in this
      // round closes with its cap-th cell: a popped word at depth cap-1
      // fills iff one cell finishes it, which replaces expanding the whole
      // final layer with an O(|w|) test.
      if (g + 1 == cap) {
        std::optional<DerivationStep> last = one_cell_step(w, p);
        if (!last) continue;
        res.status = AreaStatus::Exact;
        res.area = cap;
        res.nodes = used;
        std::vector<DerivationStep> steps{*last};
        Word cur = w;
        while (cur != start) {
          const auto& [pw, st] = parent.at(cur);
          steps.push_back(st);
          cur = pw;
        }
        std::reverse(steps.begin(), steps.end());
        res.ledger.steps = std::move(steps);
        return res;
      }
      for (size_t vi = 0; vi < variants.size(); ++vi) {
        DerivationStep s = variant_steps[vi];
        for (int pos = 0; pos <= int(w.size()); ++pos) {
          Word w2 = apply_rotated_relator(w, variants[vi], size_t(pos));
          if (w2.size() > max_len || w2.empty()) continue;
          long g2 = g + 1;
          if (g2 + exp_heuristic(w2, caps) > cap) continue;
          auto [dit, fresh] = dist.emplace(w2, g2);
          if (!fresh && dit->second <= g2) continue;
          // Memory grows with created states, so budget them, not pops.
          if (fresh && ++used > budget.max_nodes) {
            res.status = AreaStatus::Unknown;
            res.nodes = used;
            return res;
          }
          dit->second = g2;
          s.position = pos;
          parent[w2] = {w, s};
          pq.emplace(g2 + exp_heuristic(w2, caps), g2, w2.size(), std::move(w2));
        }
      }
    }
  }
  res.status = AreaStatus::NoFillingWithinDepth;
  res.nodes = used;
  return res;
}

bool is_relator_cycle(const Word& w, const Presentation& p) {
  Word core = cyclic_reduce(w).core;
  if (core.empty()) return true;
  for (const Word& r0 : p.relators) {
    if (r0.size() != core.size()) continue;
    for (const Word& r : {r0, inverse(r0)})
      if ((r + r).find(core) != std::string::npos) return true;
  }
  return false;
}

AnnResult exact_ann(const Word& u0, const Word& v0, const Presentation& p, int conj_radius,
                    const SearchBudget& budget, const ProbeFilter& probe_trivial) {
  AnnResult res;
  res.radius = conj_radius;
  const Word u = free_reduce(u0), v = free_reduce(v0);
  if (u == v) {
    res.kind = AnnKind::Exact;
    res.value = 0;
    res.discharged = true;
    res.ledger.start = free_reduce(u + inverse(v));
    return res;
  }
  if (u.empty() || v.empty()) {
    // Degenerate inner boundary: the annular minimum is the plain area,
    // realized by the empty conjugator.
    AreaResult a = exact_area(u.empty() ? inverse(v) : u, p, budget);
    res.nodes = a.nodes;
    if (a.status == AreaStatus::Exact) {
      res.kind = AnnKind::Exact;
      res.value = a.area;
      res.ledger = std::move(a.ledger);
      res.discharged = true;
    }
    return res;
  }

  const long n = long(u.size() + v.size());
  const long M = long(p.max_relator_length());
  const Word vinv = inverse(v);
  long best = -1;
  Word best_gamma;
  AreaLedger best_ledger;
  std::unordered_set<Word> seen;
  std::vector<std::pair<Word, Word>> unknowns;  // (candidate, gamma)

  auto evaluate = [&](const Word& cand, const Word& gamma) -> bool {
    SearchBudget b = budget;
    if (best >= 0) b.max_depth = std::min(b.max_depth, int(best - 1));
    if (b.max_depth < 0) return false;
    AreaResult a = exact_area(cand, p, b);
    res.nodes += a.nodes;
    if (a.status == AreaStatus::Exact && (best < 0 || a.area < best)) {
      best = a.area;
      best_gamma = gamma;
      best_ledger = std::move(a.ledger);
      return true;
    }
    if (a.status == AreaStatus::Unknown) unknowns.emplace_back(cand, gamma);
    return false;
  };
  auto consider = [&](const Word& gamma) {
    Word cand = free_reduce(gamma + u + inverse(gamma) + vinv);
    if (!seen.insert(cand).second) return;
    if (probe_trivial && !probe_trivial(cand)) return;
    evaluate(cand, gamma);
  };

  // Conjugators in (length, lex) order; depth-first per length to keep
  // memory flat at large radii.
  const int nletters = 2 * p.alphabet.size();
  Word gamma;
  auto dfs = [&](auto&& self, int remaining) -> void {
    if (remaining == 0) {
      consider(gamma);
      return;
    }
    for (int l = 0; l < nletters; ++l) {
      if (!gamma.empty() && gamma.back() == letter_inv(Letter(l))) continue;
      gamma.push_back(Letter(l));
      self(self, remaining - 1);
      gamma.pop_back();
    }
  };
  for (int len = 0; len <= conj_radius; ++len) dfs(dfs, len);

  // Unknown candidates might still beat `best`: retry under the final
  // cap until the picture stabilizes.
  bool improved = true;
  while (improved && !unknowns.empty() && best != 0) {
    improved = false;
    std::vector<std::pair<Word, Word>> retry = std::move(unknowns);
    unknowns.clear();
    for (const auto& [cand, g] : retry)
      if (evaluate(cand, g)) improved = true;
  }
  if (best == 0) unknowns.clear();  // nothing can beat an empty filling

  res.value = best;
  res.conjugator = best_gamma;
  res.ledger = best_ledger;
  res.discharged = best >= 0 && unknowns.empty() && 2 * long(conj_radius) >= 2 * n + M * best;
  res.kind = res.discharged ? AnnKind::Exact : (best >= 0 ? AnnKind::Upper : AnnKind::Unknown);
  return res;
}

std::optional<bool> triangle_check(const Word& u, const Word& v, const Word& w,
                                   const Presentation& p, const SearchBudget& budget) {
  AreaResult uv = exact_area(free_reduce(u + inverse(v)), p, budget);
  AreaResult vw = exact_area(free_reduce(v + inverse(w)), p, budget);
  AreaResult uw = exact_area(free_reduce(u + inverse(w)), p, budget);
  if (uv.status != AreaStatus::Exact || vw.status != AreaStatus::Exact ||
      uw.status != AreaStatus::Exact)
    return std::nullopt;
  return std::labs(uv.area - vw.area) <= uw.area && uw.area <= uv.area + vw.area;
}

}  // namespace fillfn
