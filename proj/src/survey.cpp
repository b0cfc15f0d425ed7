#include <fillfn/survey.hpp>

#include <fillfn/conjugacy.hpp>
#include <fillfn/hnn.hpp>

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>
#include <utility>

namespace fillfn {

namespace {

bool cyclically_reduced(const Word& w) {
  return w.size() < 2 || letter_inv(w.front()) != w.back();
}

Word cyclic_reduce(Word w) {
  w = free_reduce(w);
  size_t cut = 0;
  while (w.size() - 2 * cut >= 2 && letter_inv(w[cut]) == w[w.size() - 1 - cut]) ++cut;
  return Word(w.begin() + cut, w.end() - cut);
}

Word least_rotation(const Word& w) {
  Word best = w;
  for (size_t r = 1; r < w.size(); ++r) {
    Word rot = w.substr(r) + w.substr(0, r);
    if (rot < best) best = std::move(rot);
  }
  return best;
}

// Canonical form under rotation; filling areas are rotation-invariant.
Word rotation_canonical(const Word& w) { return w.empty() ? w : least_rotation(w); }

// Canonical form under rotation and inversion, for area dedup.
Word cycle_canonical(const Word& w) {
  if (w.empty()) return w;
  return std::min(least_rotation(w), least_rotation(inverse(w)));
}

// Freely reduced words of exactly `len` letters, lex order; fn returning
// false aborts the walk.
template <typename F>
bool each_reduced_word(int nletters, int len, F&& fn) {
  Word w;
  auto dfs = [&](auto&& self, int rem) -> bool {
    if (rem == 0) return fn(w);
    for (int l = 0; l < nletters; ++l) {
      if (!w.empty() && w.back() == letter_inv(Letter(l))) continue;
      w.push_back(Letter(l));
      bool go = self(self, rem - 1);
      w.pop_back();
      if (!go) return false;
    }
    return true;
  };
  return dfs(dfs, len);
}

// Geodesic ball: index 0 is the identity, words are the lex-least geodesic
// spellings (FIFO expansion in letter order).
struct BallData {
  std::vector<Element> elems;
  std::vector<Word> words;
  std::vector<int> lens;
  std::unordered_map<std::string, size_t> index;
};

BallData element_ball(const GroupModel& m, int radius) {
  BallData b;
  const int nletters = int(2 * m.alphabet().size());
  std::vector<Element> letter_elem;
  letter_elem.reserve(nletters);
  for (int l = 0; l < nletters; ++l) letter_elem.push_back(m.eval_word(Word(1, Letter(l))));
  b.elems.push_back(m.identity());
  b.words.emplace_back();
  b.lens.push_back(0);
  b.index.emplace(m.canonical_key(b.elems[0]), 0);
  for (size_t head = 0; head < b.elems.size(); ++head) {
    if (b.lens[head] == radius) break;  // FIFO: lengths are nondecreasing
    for (int l = 0; l < nletters; ++l) {
      Element e = m.multiply(b.elems[head], letter_elem[l]);
      std::string key = m.canonical_key(e);
      if (b.index.count(key)) continue;
      b.index.emplace(std::move(key), b.elems.size());
      b.elems.push_back(std::move(e));
      b.words.push_back(b.words[head] + Letter(l));
      b.lens.push_back(b.lens[head] + 1);
    }
  }
  return b;
}

// Minimal conjugation depth from ball element `src` to every ball element
// reachable within `radius` single-letter conjugations.  Depths are exact
// minima; `complete` reports whether the search exhausted the radius.
struct OrbitResult {
  std::vector<long> depth;
  bool complete = true;
};

OrbitResult conj_orbit(const GroupModel& m, const BallData& ball, size_t src, int radius,
                       size_t state_cap) {
  OrbitResult r;
  r.depth.assign(ball.elems.size(), -1);
  r.depth[src] = 0;
  const int nletters = int(2 * m.alphabet().size());
  std::vector<Element> letter_elem;
  for (int l = 0; l < nletters; ++l) letter_elem.push_back(m.eval_word(Word(1, Letter(l))));
  std::deque<std::pair<Element, int>> queue;
  std::unordered_set<std::string> seen;
  seen.insert(m.canonical_key(ball.elems[src]));
  queue.emplace_back(ball.elems[src], 0);
  while (!queue.empty()) {
    auto [e, d] = std::move(queue.front());
    queue.pop_front();
    if (d == radius) continue;
    for (int l = 0; l < nletters; ++l) {
      Element c = m.multiply(m.multiply(letter_elem[l], e), letter_elem[letter_inv(Letter(l))]);
      std::string key = m.canonical_key(c);
      if (!seen.insert(key).second) continue;
      if (seen.size() > state_cap) {
        r.complete = false;
        return r;
      }
      auto it = ball.index.find(key);
      if (it != ball.index.end() && r.depth[it->second] < 0) r.depth[it->second] = d + 1;
      queue.emplace_back(std::move(c), d + 1);
    }
  }
  return r;
}

// Unordered element pairs within the ball with geodesic length sum <= n_max,
// classified by conjugation-orbit search plus the group's oracle.
struct PairRec {
  size_t i = 0, j = 0;
  int lensum = 0;
  long depth = -1;                // exact minimal conjugator length when >= 0
  std::optional<bool> conjugate;  // oracle verdict for unreached pairs
  bool certified = false;         // unreached via a complete orbit: depth > radius
};

std::vector<PairRec> pair_sweep(const GroupContext& g, const BallData& ball, int n_max,
                                int radius, size_t state_cap) {
  const GroupModel& m = *g.model;
  const size_t N = ball.elems.size();
  std::vector<PairRec> out;
  std::unordered_map<size_t, size_t> at;
  for (size_t i = 0; i < N; ++i)
    for (size_t j = i; j < N; ++j)
      if (ball.lens[i] + ball.lens[j] <= n_max) {
        at.emplace(i * N + j, out.size());
        out.push_back({i, j, ball.lens[i] + ball.lens[j], -1, std::nullopt, false});
      }

  // The identity is conjugate only to itself.
  for (PairRec& p : out)
    if (p.i == 0) {
      if (p.j == 0)
        p.depth = 0;
      else {
        p.conjugate = false;
        p.certified = true;
      }
    }

  std::vector<char> orbit_complete(N, 0);
  for (size_t i = 1; i < N; ++i) {
    if (ball.lens[i] + 1 > n_max) continue;  // no non-identity partner fits
    OrbitResult orb = conj_orbit(m, ball, i, radius, state_cap);
    orbit_complete[i] = orb.complete ? 1 : 2;
    for (size_t j = 1; j < N; ++j) {
      if (orb.depth[j] < 0) continue;
      auto it = at.find(std::min(i, j) * N + std::max(i, j));
      if (it == at.end()) continue;
      PairRec& p = out[it->second];
      if (p.depth < 0 || orb.depth[j] < p.depth) p.depth = orb.depth[j];
    }
  }

  for (PairRec& p : out) {
    if (p.depth >= 0 || p.conjugate.has_value()) continue;
    p.certified = orbit_complete[p.i] == 1 || orbit_complete[p.j] == 1;
    if (g.conjugate_oracle) p.conjugate = g.conjugate_oracle(ball.words[p.i], ball.words[p.j]);
  }

  std::sort(out.begin(), out.end(), [](const PairRec& a, const PairRec& b) {
    return std::tie(a.lensum, a.i, a.j) < std::tie(b.lensum, b.i, b.j);
  });
  return out;
}

// Interval accumulator for one growth-table cell: the true value lies in
// [lo, hi], with hi unbounded once `open` is set.
struct Acc {
  mpz_class lo = 0, hi = 0;
  bool open = false;
  void take_exact(const mpz_class& v) { take(v, v); }
  void take(const mpz_class& plo, const mpz_class& phi) {
    lo = std::max(lo, plo);
    hi = std::max(hi, phi);
  }
  void take_open(const mpz_class& plo) {
    lo = std::max(lo, plo);
    open = true;
  }
  void merge(const Acc& o) {
    lo = std::max(lo, o.lo);
    hi = std::max(hi, o.hi);
    open = open || o.open;
  }
  GrowthRow row(int n) const {
    GrowthRow r;
    r.n = n;
    if (open) {
      r.kind = RowKind::Lower;
      r.value = lo;
      r.lower_bound = lo;
    } else if (lo == hi) {
      r.kind = RowKind::Exact;
      r.value = hi;
      r.lower_bound = hi;
    } else {
      if (lo > hi) throw std::logic_error("survey: interval lower bound exceeds upper bound");
      r.kind = RowKind::Upper;
      r.value = hi;
      r.lower_bound = lo;
    }
    return r;
  }
};

// Per-generator ceiling |exp_g(w)| / max_r |exp_g(r)|: every relator cell
// moves the g-exponent by at most the denominator.
long exponent_floor(const Word& w, const Presentation& p, const std::vector<long>& relmax) {
  long lb = 0;
  for (int gidx = 0; gidx < int(p.alphabet.size()); ++gidx) {
    long diff = std::labs(exponent_sum(w, gidx));
    if (diff == 0) continue;
    if (relmax[gidx] == 0)
      throw std::logic_error("survey: exponent obstruction on a supposedly fillable word");
    lb = std::max(lb, (diff + relmax[gidx] - 1) / relmax[gidx]);
  }
  return lb;
}

std::vector<long> relator_exponent_maxima(const Presentation& p) {
  std::vector<long> relmax(size_t(p.alphabet.size()), 0);
  for (const Word& r : p.relators)
    for (int gidx = 0; gidx < int(p.alphabet.size()); ++gidx)
      relmax[gidx] = std::max(relmax[gidx], std::labs(exponent_sum(r, gidx)));
  return relmax;
}

// ---- conjugacy oracles ----

// Conjugacy in the affine model of BS(1,2): elements x -> 2^k x + q with q
// dyadic.  Conjugating (k, q) by (j, r) gives (k, 2^j q + r(1 - 2^k)), so
// for k = 0 the class invariant is the signed odd part of q, and for k != 0
// it is the orbit of q mod 2^|k| - 1 under multiplication by 2.
bool bs12_elements_conjugate(const Bs12Element& a, const Bs12Element& b) {
  if (a.k != b.k) return false;
  if (a.k == 0) {
    if (a.num == 0 || b.num == 0) return a.num == b.num;
    mpz_class x = a.num, y = b.num;
    while (mpz_even_p(x.get_mpz_t())) x >>= 1;
    while (mpz_even_p(y.get_mpz_t())) y >>= 1;
    return x == y;
  }
  const unsigned long K = static_cast<unsigned long>(std::labs(a.k));
  const mpz_class m = (mpz_class(1) << K) - 1;  // 2^K == 1 mod m
  auto residue = [&](const Bs12Element& e) {
    mpz_class r = e.num % m;
    if (r < 0) r += m;
    unsigned long exp = (K - static_cast<unsigned long>(e.den2) % K) % K;  // 2^{-den2}
    return mpz_class((r << exp) % m);
  };
  mpz_class ra = residue(a), rb = residue(b);
  for (unsigned long j = 0; j < K; ++j) {
    if (ra == rb) return true;
    ra = (ra * 2) % m;
  }
  return false;
}

std::optional<bool> heis_words_conjugate(const Word& u, const Word& v) {
  return heis_conjugator(u, v).status == ConjStatus::Conjugate;
}

std::optional<bool> bs12_words_conjugate(const Word& u, const Word& v) {
  return bs12_elements_conjugate(bs12_eval(u), bs12_eval(v));
}

// Direct products decide conjugacy componentwise.
std::optional<bool> g3_words_conjugate(const Word& u, const Word& v) {
  auto split = [](const Word& w) {
    std::pair<Word, Word> r;
    for (Letter l : w) {
      int gen = letter_gen(l);
      if (gen <= 2)
        r.first.push_back(l);
      else
        r.second.push_back(make_letter(gen - 3, letter_is_inverse(l)));
    }
    return r;
  };
  auto [u1, u2] = split(u);
  auto [v1, v2] = split(v);
  if (heis_conjugator(u1, v1).status != ConjStatus::Conjugate) return false;
  return bs12_elements_conjugate(bs12_eval(u2), bs12_eval(v2));
}

// Free groups: conjugate iff the cyclic reductions agree up to rotation.
std::optional<bool> free_words_conjugate(const Word& u, const Word& v) {
  return rotation_canonical(cyclic_reduce(u)) == rotation_canonical(cyclic_reduce(v));
}

}  // namespace

GroupContext group_context(const std::string& name) {
  GroupContext g;
  g.name = name;
  auto model_trivial = [&g]() {
    ModelPtr m = g.model;
    g.trivial = [m](const Word& w) { return m->word_is_identity(w); };
  };
  if (name == "G1") {
    g.pres = builtin_presentation("G1");
    g.model = builtin_model("G1");
    model_trivial();
    g.conjugate_oracle = heis_words_conjugate;
    return g;
  }
  if (name == "BS12" || name == "G2") {
    g.pres = builtin_presentation("BS12");
    g.model = builtin_model("BS12");
    model_trivial();
    g.conjugate_oracle = bs12_words_conjugate;
    return g;
  }
  if (name == "G3") {
    g.pres = builtin_presentation("G3");
    g.model = builtin_model("G3");
    model_trivial();
    g.conjugate_oracle = g3_words_conjugate;
    return g;
  }
  if (name == "G4") {
    g.pres = builtin_presentation("G4");
    g.trivial = [](const Word& w) { return g4_is_identity(w); };
    return g;
  }
  if (name == "A") {
    g.pres = builtin_presentation("A");
    g.trivial = [](const Word& w) { return a_is_identity(w); };
    return g;
  }
  if (name == "B") {
    g.pres = builtin_presentation("B");
    g.trivial = [](const Word& w) { return b_is_identity(w); };
    return g;
  }
  if (name == "C") {
    g.pres = builtin_presentation("C");
    g.trivial = [](const Word& w) { return free_reduce(w).empty(); };
    g.conjugate_oracle = free_words_conjugate;
    return g;
  }
  if (name == "E") {
    g.pres = builtin_presentation("E");
    g.trivial = [](const Word& w) { return e_is_identity(w); };
    return g;
  }
  if (name == "L") {
    g.pres = builtin_presentation("L");
    g.trivial = [](const Word& w) { return l_is_identity(w); };
    return g;
  }
  if (name == "G7" || name == "G8") {
    ModelPtr left = filiform_model(name == "G7" ? 3 : 4);
    ModelPtr right = g6m_model(20);
    g.model = builtin_model(name);
    model_trivial();
    FactorSolver sl = bfs_factor_solver(left, 6);
    FactorSolver sr = bfs_factor_solver(right, 6);
    g.conjugate_oracle = [left, right, sl, sr](const Word& u,
                                               const Word& v) -> std::optional<bool> {
      switch (free_product_conjugacy(u, v, left, right, sl, sr).status) {
        case ConjStatus::Conjugate: return true;
        case ConjStatus::NotConjugate: return false;
        default: return std::nullopt;
      }
    };
    return g;
  }
  if (name.rfind("G5:d=", 0) == 0 || name.rfind("G6:m=", 0) == 0) {
    g.model = builtin_model(name);
    model_trivial();
    return g;
  }
  throw std::invalid_argument("group_context: unknown group '" + name + "'");
}

const char* row_kind_name(RowKind k) {
  switch (k) {
    case RowKind::Exact: return "exact";
    case RowKind::Upper: return "upper";
    case RowKind::Lower: return "lower";
    default: return "unknown";
  }
}

namespace {

std::string render_table(const GrowthTable& t, char sep) {
  std::ostringstream o;
  o << "group" << sep << "function" << sep << "n" << sep << "value" << sep << "kind" << sep
    << "budget_nodes" << sep << "radius" << sep << "seed" << '\n';
  for (const GrowthRow& r : t.rows)
    o << t.group << sep << t.function << sep << r.n << sep << r.value.get_str() << sep
      << row_kind_name(r.kind) << sep << t.budget_nodes << sep << t.radius << sep << t.seed
      << '\n';
  return o.str();
}

}  // namespace

std::string table_to_csv(const GrowthTable& t) { return render_table(t, ','); }
std::string table_to_tsv(const GrowthTable& t) { return render_table(t, '\t'); }

std::string table_to_plot(const GrowthTable& t, RowKind kind) {
  std::ostringstream o;
  for (const GrowthRow& r : t.rows)
    if (r.kind == kind) o << r.n << ' ' << r.value.get_str() << '\n';
  return o.str();
}

GrowthTable survey_area(const GroupContext& g, int n_max, const SearchBudget& budget) {
  if (!g.pres) throw std::invalid_argument("survey_area: group '" + g.name + "' has no presentation");
  if (!g.trivial) throw std::invalid_argument("survey_area: group '" + g.name + "' has no word-problem decider");
  if (n_max < 0) throw std::invalid_argument("survey_area: n_max must be >= 0");
  const Presentation& p = *g.pres;
  const std::vector<long> relmax = relator_exponent_maxima(p);
  const int nletters = int(2 * p.alphabet.size());

  std::vector<Acc> per_len(n_max + 1);
  long examined = 0;
  int truncated_at = -1;
  for (int len = 1; len <= n_max && truncated_at < 0; ++len) {
    each_reduced_word(nletters, len, [&](const Word& w) {
      if (++examined > budget.max_nodes) {
        truncated_at = len;
        return false;
      }
      if (!cyclically_reduced(w) || cycle_canonical(w) != w) return true;
      if (!g.trivial(w)) return true;
      AreaResult a = exact_area(w, p, budget);
      switch (a.status) {
        case AreaStatus::Exact:
          per_len[len].take_exact(a.area);
          break;
        case AreaStatus::NoFilling:
          throw std::logic_error("survey_area: word-problem decider and area search disagree on '" +
                                 format_word(p.alphabet, w) + "'");
        case AreaStatus::NoFillingWithinDepth:
          per_len[len].take_open(budget.max_depth + 1);
          break;
        case AreaStatus::Unknown:
          per_len[len].take_open(std::max(1L, exponent_floor(w, p, relmax)));
          break;
      }
      return true;
    });
  }

  GrowthTable t{g.name, "area", {}, budget.max_nodes, 0, 0};
  Acc run;  // n = 0: only the empty word, area 0
  for (int n = 0; n <= n_max; ++n) {
    if (n >= 1) run.merge(per_len[n]);
    if (truncated_at >= 0 && n >= truncated_at) run.open = true;
    t.rows.push_back(run.row(n));
  }
  return t;
}

GrowthTable survey_cl(const GroupContext& g, int n_max, const std::function<int(int)>& radius_fn) {
  if (!g.model) throw std::invalid_argument("survey_cl: group '" + g.name + "' has no element model");
  if (n_max < 0) throw std::invalid_argument("survey_cl: n_max must be >= 0");
  int radius = 0;
  for (int n = 0; n <= n_max; ++n) radius = std::max(radius, radius_fn ? radius_fn(n) : n);

  BallData ball = element_ball(*g.model, n_max);
  std::vector<PairRec> pairs = pair_sweep(g, ball, n_max, radius, 500000);

  std::vector<Acc> per_n(n_max + 1);
  for (const PairRec& p : pairs) {
    if (p.depth >= 0)
      per_n[p.lensum].take_exact(p.depth);
    else if (!p.conjugate.has_value())
      per_n[p.lensum].take_open(0);  // undecided pair: flag, never drop
    else if (*p.conjugate)
      per_n[p.lensum].take_open(p.certified ? radius + 1 : 1);
  }

  GrowthTable t{g.name, "cl", {}, 0, radius, 0};
  Acc run;
  for (int n = 0; n <= n_max; ++n) {
    run.merge(per_n[n]);
    t.rows.push_back(run.row(n));
  }
  return t;
}

GrowthTable survey_ann(const GroupContext& g, int n_max, int conj_radius,
                       const SearchBudget& budget) {
  if (!g.pres) throw std::invalid_argument("survey_ann: group '" + g.name + "' has no presentation");
  if (!g.model) throw std::invalid_argument("survey_ann: group '" + g.name + "' has no element model");
  if (n_max < 0) throw std::invalid_argument("survey_ann: n_max must be >= 0");
  const Presentation& p = *g.pres;
  const GroupModel& m = *g.model;
  const std::vector<long> relmax = relator_exponent_maxima(p);
  const int nletters = int(2 * p.alphabet.size());

  BallData ball = element_ball(m, n_max);
  std::vector<PairRec> pairs = pair_sweep(g, ball, n_max, n_max, 500000);

  // Cyclically reduced spellings bucketed by element, rotation-deduped.
  std::vector<std::vector<Word>> bucket(ball.elems.size());
  bucket[0].emplace_back();
  for (int len = 1; len <= n_max; ++len) {
    each_reduced_word(nletters, len, [&](const Word& w) {
      if (!cyclically_reduced(w) || rotation_canonical(w) != w) return true;
      bucket[ball.index.at(m.canonical_key(m.eval_word(w)))].push_back(w);
      return true;
    });
  }

  auto pair_floor = [&](const Word& wu, const Word& wv) {
    long lb = wu == wv ? 0 : 1;  // distinct rotation classes are not freely conjugate
    return std::max(lb, exponent_floor(free_reduce(wu + inverse(wv)), p, relmax));
  };
  // Conjugator candidates that fail to conjugate u to v give probes the
  // area search can only reject by exhaustion; the model rejects them in
  // normal-form time, which is what makes useful radii affordable.
  ProbeFilter probe_trivial = [&m](const Word& w) { return m.word_is_identity(w); };

  std::vector<Acc> per_n(n_max + 1);
  for (const PairRec& pr : pairs) {
    const bool conj = pr.depth >= 0 || (pr.conjugate.has_value() && *pr.conjugate);
    if (!conj) {
      if (!pr.conjugate.has_value()) per_n[pr.lensum].take_open(0);  // undecided
      continue;
    }
    const std::vector<Word>& bu = bucket[pr.i];
    const std::vector<Word>& bv = bucket[pr.j];
    for (size_t x = 0; x < bu.size(); ++x) {
      for (size_t y = pr.i == pr.j ? x : 0; y < bv.size(); ++y) {
        const Word& wu = bu[x];
        const Word& wv = bv[y];
        const int lensum = int(wu.size() + wv.size());
        if (lensum > n_max) continue;
        AnnResult r = exact_ann(wu, wv, p, conj_radius, budget, probe_trivial);
        const long lb = pair_floor(wu, wv);
        if (r.value >= 0) {
          if (lb > r.value)
            throw std::logic_error("survey_ann: combinatorial lower bound exceeds searched minimum");
          if (r.kind == AnnKind::Exact || lb == r.value)
            per_n[lensum].take_exact(r.value);
          else
            per_n[lensum].take(lb, r.value);
        } else {
          per_n[lensum].take_open(std::max(lb, 1L));  // conjugate beyond the radius
        }
      }
    }
  }

  GrowthTable t{g.name, "ann", {}, budget.max_nodes, conj_radius, 0};
  Acc run;
  for (int n = 0; n <= n_max; ++n) {
    run.merge(per_n[n]);
    t.rows.push_back(run.row(n));
  }
  return t;
}

HeisWitness heis_witness(int n) {
  if (n < 1) throw std::invalid_argument("heis_witness: n must be >= 1");
  const Word a(1, make_letter(0, false));
  const Word b(1, make_letter(1, false));
  const Word c(1, make_letter(2, false));
  const long k = long(n) * n;
  HeisWitness w;
  w.u = b;
  w.v = b + pow(a, n) + pow(b, n) + pow(a, -n) + pow(b, -n);
  w.w = pow(a, k);
  w.companion_v = b + pow(c, k);
  if (!(heis_eval(w.w + w.u + inverse(w.w) + inverse(w.v)) == HeisElement{}))
    throw std::logic_error("heis_witness: conjugation probe is not the identity");
  auto [elem, ledger] = heis_eval_with_ledger(w.v + inverse(w.companion_v));
  if (!(elem == HeisElement{}) || !ledger.end.empty())
    throw std::logic_error("heis_witness: companion spelling differs from v");
  w.companion_ledger = std::move(ledger);
  return w;
}

G4Witness g4_witness(int n) {
  if (n < 1) throw std::invalid_argument("g4_witness: n must be >= 1");
  const Word a(1, make_letter(0, false));
  const Word b(1, make_letter(1, false));
  const Word c(1, make_letter(2, false));
  const Word d(1, make_letter(3, false));
  const Word s(1, make_letter(4, false));
  const long k = long(n) * n;
  G4Witness w;
  w.u = inverse(b) + pow(c, k) + s;
  w.v = inverse(b) + s;
  const Word x = pow(a, -k) + pow(d, k);  // s commutes with x; w.w = x^-1
  w.w = inverse(x);
  w.chain = {
      w.u + x,
      inverse(b) + pow(c, k) + pow(a, -k) + pow(d, k) + s,
      pow(a, -k) + inverse(b) + pow(d, k) + s,
      pow(a, -k) + pow(d, k) + inverse(b) + s,
      x + w.v,
  };
  for (size_t i = 0; i + 1 < w.chain.size(); ++i)
    if (!g4_is_identity(w.chain[i] + inverse(w.chain[i + 1])))
      throw std::logic_error("g4_witness: chain step " + std::to_string(i) + " fails");
  return w;
}

Bs12Witness bs12_witness(int n) {
  if (n < 1 || n > 20) throw std::invalid_argument("bs12_witness: n must be in [1, 20]");
  const Presentation p = builtin_presentation("BS12");
  const Word a(1, make_letter(0, false));
  const Word s(1, make_letter(1, false));
  Bs12Witness w;
  w.w = pow(a, n) + s + pow(a, -n) + pow(s, -(1L << n));
  // Leftmost "a s" rewrites: each step pushes one s across one a (doubling
  // it), and the greedy prefix match absorbs the final cancellations.
  LedgerBuilder lb(p, w.w);
  const Letter la = make_letter(0, false), ls = make_letter(1, false);
  for (;;) {
    size_t pos = Word::npos;
    for (size_t i = 0; i + 1 < lb.current.size(); ++i)
      if (lb.current[i] == la && lb.current[i + 1] == ls) {
        pos = i;
        break;
      }
    if (pos == Word::npos) break;
    lb.apply({int(pos), 0, 0, 1});
  }
  w.ledger = lb.finish();
  if (!w.ledger.end.empty())
    throw std::logic_error("bs12_witness: derivation did not reach the empty word");
  if (long(w.ledger.steps.size()) != (1L << n) - 1)
    throw std::logic_error("bs12_witness: derivation is not the doubling tree");
  return w;
}

std::vector<mpz_class> subnegative_closure(const std::vector<mpz_class>& t) {
  std::vector<mpz_class> g(t);
  for (size_t n = 1; n < g.size(); ++n)
    for (size_t k = 1; k < n; ++k) {
      mpz_class cand = g[k] + g[n - k];
      if (cand > g[n]) g[n] = std::move(cand);
    }
  return g;
}

GrowthFit fit_growth(const GrowthTable& t, FitModel model, RowKind kind) {
  std::vector<double> xs, ys;
  for (const GrowthRow& r : t.rows) {
    if (r.kind != kind || r.n < 1) continue;
    double v = r.value.get_d();
    if (v < 1) continue;
    xs.push_back(model == FitModel::Power ? std::log(double(r.n)) : double(r.n));
    ys.push_back(model == FitModel::Power ? std::log(v) : std::log2(v));
  }
  if (xs.size() < 4)
    throw InsufficientData("fit_growth: need at least 4 usable rows of kind '" +
                           std::string(row_kind_name(kind)) + "', have " +
                           std::to_string(xs.size()));
  const size_t m = xs.size();
  double mx = 0, my = 0;
  for (size_t i = 0; i < m; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= double(m);
  my /= double(m);
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < m; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  GrowthFit fit;
  fit.slope = sxx == 0 ? 0 : sxy / sxx;
  const double intercept = my - fit.slope * mx;
  double se = 0;
  for (size_t i = 0; i < m; ++i) {
    double e = ys[i] - (fit.slope * xs[i] + intercept);
    se += e * e;
  }
  fit.residual = std::sqrt(se / double(m));
  return fit;
}

namespace {

// [lo, hi] with hi possibly unbounded, from a table row.
struct RowBound {
  mpz_class lo;
  bool bounded = true;
  mpz_class hi;
};

RowBound row_bound(const GrowthRow& r) {
  switch (r.kind) {
    case RowKind::Exact: return {r.value, true, r.value};
    case RowKind::Upper: return {r.lower_bound, true, r.value};
    case RowKind::Lower: return {r.value, false, {}};
    default: return {0, false, {}};
  }
}

const GrowthRow* find_row(const GrowthTable& t, int n) {
  for (const GrowthRow& r : t.rows)
    if (r.n == n) return &r;
  return nullptr;
}

}  // namespace

bool BrickCorsonReport::pass() const {
  for (const Item& it : checked)
    if (!it.ok) return false;
  return true;
}

BrickCorsonReport brick_corson_check(const GrowthTable& area, const GrowthTable& cl,
                                     const GrowthTable& ann, long max_relator_length) {
  BrickCorsonReport rep;
  const mpz_class M = max_relator_length;
  // LHS <= RHS as intervals: certified when hi(LHS) <= lo(RHS), violated when
  // lo(LHS) > hi(RHS), undecidable otherwise.
  auto compare = [&rep](const std::string& name, int n, const RowBound& lhs, const RowBound& rhs) {
    if (lhs.bounded && lhs.hi <= rhs.lo)
      rep.checked.push_back({name, n, true, ""});
    else if (rhs.bounded && lhs.lo > rhs.hi)
      rep.checked.push_back({name, n, false, "interval violation"});
    else
      rep.skipped.push_back({name, n, true, "intervals overlap: undecidable"});
  };

  for (const GrowthRow& ar : area.rows) {
    const GrowthRow* an = find_row(ann, ar.n);
    if (!an) continue;
    compare("Area(n) <= Ann(n)", ar.n, row_bound(ar), row_bound(*an));
  }
  for (const GrowthRow& cr : cl.rows) {
    const GrowthRow* an = find_row(ann, cr.n);
    if (!an) continue;
    RowBound lhs = row_bound(cr), rhs = row_bound(*an);
    lhs.lo *= 2;
    lhs.hi *= 2;
    rhs.lo = cr.n + 2 * M * rhs.lo;
    rhs.hi = cr.n + 2 * M * rhs.hi;
    compare("2*CL(n) <= n + 2*M*Ann(n)", cr.n, lhs, rhs);
  }
  for (const GrowthRow& an : ann.rows) {
    const GrowthRow* cr = find_row(cl, an.n);
    if (!cr) continue;
    if (cr->kind != RowKind::Exact) {
      rep.skipped.push_back({"Ann(n) <= Area(2*CL(n) + n)", an.n, true, "CL(n) not exact"});
      continue;
    }
    const mpz_class arg = 2 * cr->value + an.n;
    if (!arg.fits_sint_p()) continue;
    const GrowthRow* ar = find_row(area, int(arg.get_si()));
    if (!ar) {
      rep.skipped.push_back(
          {"Ann(n) <= Area(2*CL(n) + n)", an.n, true, "area table has no row at 2*CL(n) + n"});
      continue;
    }
    compare("Ann(n) <= Area(2*CL(n) + n)", an.n, row_bound(an), row_bound(*ar));
  }
  return rep;
}

}  // namespace fillfn
