#include <fillfn/conjugacy.hpp>
#include <fillfn/hnn.hpp>

#include <cstdlib>
#include <deque>
#include <numeric>
#include <stdexcept>
#include <unordered_set>
#include <utility>

namespace fillfn {

namespace {

Word conjugation_probe(const ConjugacyCertificate& c) {
  return c.w + c.u + inverse(c.w) + inverse(c.v);
}

ConjugacyCertificate checked_cert(Word u, Word v, Word w,
                                  const std::function<bool(const Word&)>& trivial,
                                  std::optional<AreaLedger> ledger = std::nullopt,
                                  const Presentation* ledger_presentation = nullptr) {
  ConjugacyCertificate c{std::move(u), std::move(v), std::move(w), std::move(ledger)};
  if (!certificate_valid(c, trivial, ledger_presentation))
    throw std::logic_error("conjugacy certificate failed its construction check");
  return c;
}

// Letterwise automorphism of the Heisenberg presentation: a <-> b flips
// the commutator, so c must invert for [a,b]c^-1 to stay a relator.
Word heis_swap(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (Letter l : w) {
    int g = letter_gen(l);
    bool inv = letter_is_inverse(l);
    out += g == 2 ? make_letter(2, !inv) : make_letter(1 - g, inv);
  }
  return out;
}

long to_long(const mpz_class& z, const char* what) {
  if (!z.fits_slong_p()) throw std::overflow_error(std::string(what) + " exceeds machine range");
  return z.get_si();
}

mpq_class two_pow(long e) {
  mpz_class p = mpz_class(1) << static_cast<unsigned long>(std::labs(e));
  return e >= 0 ? mpq_class(p) : mpq_class(1, p);
}

}  // namespace

bool certificate_valid(const ConjugacyCertificate& c,
                       const std::function<bool(const Word&)>& trivial,
                       const Presentation* ledger_presentation) {
  Word probe = conjugation_probe(c);
  if (!trivial(probe)) return false;
  if (c.ledger) {
    if (!ledger_presentation) return false;
    if (free_reduce(c.ledger->start) != free_reduce(probe)) return false;
    if (!free_reduce(c.ledger->end).empty()) return false;
    if (!verify_ledger(*c.ledger, *ledger_presentation)) return false;
  }
  return true;
}

std::optional<std::pair<long, long>> bezout_bounded(long alpha, long beta, long gamma) {
  if (alpha == 0 && beta == 0)
    throw std::invalid_argument("bezout_bounded needs a nonzero coefficient");
  if (alpha == 0) return gamma % beta ? std::nullopt : std::optional{std::pair{gamma / beta, 0L}};
  if (beta == 0) return gamma % alpha ? std::nullopt : std::optional{std::pair{0L, gamma / alpha}};
  long g = std::gcd(alpha, beta);
  if (gamma % g) return std::nullopt;

  // Extended gcd on magnitudes: |alpha| p + |beta| q = g.
  long r0 = std::labs(alpha), r1 = std::labs(beta);
  long p0 = 1, p1 = 0, q0 = 0, q1 = 1;
  while (r1 != 0) {
    long q = r0 / r1;
    r0 = std::exchange(r1, r0 - q * r1);
    p0 = std::exchange(p1, p0 - q * p1);
    q0 = std::exchange(q1, q0 - q * q1);
  }
  long scale = gamma / g;
  long y = (alpha < 0 ? -p0 : p0) * scale;
  long x = (beta < 0 ? -q0 : q0) * scale;

  // Shift along the solution line to pin the larger coefficient's partner
  // at its least absolute residue; the other variable then absorbs gamma.
  if (std::labs(alpha) >= std::labs(beta)) {
    long m = std::labs(alpha / g);
    x %= m;
    if (2 * std::labs(x) > m) x -= (x > 0 ? m : -m);
    y = (gamma - beta * x) / alpha;
  } else {
    long m = std::labs(beta / g);
    y %= m;
    if (2 * std::labs(y) > m) y -= (y > 0 ? m : -m);
    x = (gamma - alpha * y) / beta;
  }
  return std::pair{x, y};
}

HeisConjugacyResult heis_conjugator(const Word& u_in, const Word& v_in, bool with_ledger) {
  static const Presentation g1 = builtin_presentation("G1");
  auto trivial = [](const Word& w) { return heis_eval(w) == HeisElement{}; };

  Word u = free_reduce(u_in), v = free_reduce(v_in);
  HeisElement U = heis_eval(u), V = heis_eval(v);
  HeisConjugacyResult res;
  if (U.alpha != V.alpha || U.beta != V.beta) return res;

  auto finish = [&](long x, long y, bool swapped, Word w) {
    res.status = ConjStatus::Conjugate;
    res.x = x;
    res.y = y;
    res.swapped = swapped;
    std::optional<AreaLedger> ledger;
    if (with_ledger) {
      Word probe = w + u_in + inverse(w) + inverse(v_in);
      ledger = heis_eval_with_ledger(probe).second;
    }
    res.cert = checked_cert(u_in, v_in, std::move(w), trivial, std::move(ledger), &g1);
    return res;
  };

  if (U.alpha == 0 && U.beta == 0) {
    if (U.gamma != V.gamma) return res;
    return finish(0, 0, false, Word());
  }

  // Solve in the frame where |alpha| >= |beta|: for w = a^x b^y,
  // w u w^-1 adds beta*x - alpha*y to gamma, so alpha*y - beta*x must
  // equal gamma_u - gamma_v.
  bool swapped = abs(U.alpha) < abs(U.beta);
  HeisElement SU = swapped ? heis_eval(heis_swap(u)) : U;
  HeisElement SV = swapped ? heis_eval(heis_swap(v)) : V;
  long alpha = to_long(SU.alpha, "alpha");
  long beta = to_long(SU.beta, "beta");
  long delta = to_long(mpz_class(SU.gamma - SV.gamma), "gamma gap");
  auto sol = bezout_bounded(alpha, beta, delta);
  if (!sol) return res;
  long x = -sol->first, y = sol->second;

  long n = long(u.size() + v.size());
  if (std::labs(x) > n || std::labs(y) > 2 * n * n)
    throw std::logic_error("solved conjugator escaped its stated bounds");
  Word w = pow(Word(1, make_letter(0, false)), x) + pow(Word(1, make_letter(1, false)), y);
  if (swapped) w = heis_swap(w);
  return finish(x, y, swapped, std::move(w));
}

Word b_corridor_word(const std::vector<long>& exponents, const Word& es) {
  if (exponents.size() != es.size())
    throw std::invalid_argument("corridor exponent and letter counts differ");
  Word out;
  for (size_t i = 0; i < es.size(); ++i) {
    out += pow(Word(1, make_letter(2, false)), exponents[i]);
    out += es[i];
  }
  return out;
}

BCorridorResult b_coefficient_conjugator(const std::vector<long>& chis,
                                         const std::vector<long>& xis, const Word& es) {
  size_t m = es.size();
  if (m == 0 || chis.size() != m || xis.size() != m)
    throw std::invalid_argument("corridor data must have equal positive length");
  for (Letter l : es)
    if (letter_gen(l) > 1)
      throw std::invalid_argument("corridor letters must avoid the stable letter");

  // mu_i = exponent sum of e_1..e_{i-1}; conjugating u by s^k multiplies
  // the s-block entering e_i by 2^{mu_i}-weighted shifts, which telescopes
  // to k (1 - 2^mu) = sum_i 2^{mu_i} (chi_i - xi_i).
  BCorridorResult res;
  mpq_class sum = 0;
  long mu = 0;
  for (size_t i = 0; i < m; ++i) {
    sum += two_pow(mu) * (chis[i] - xis[i]);
    mu += letter_is_inverse(es[i]) ? -1 : 1;
  }
  if (mu == 0) {
    res.degenerate = true;
    res.status = ConjStatus::NotFoundWithin;
    return res;
  }
  mpq_class k = sum / (1 - two_pow(mu));
  k.canonicalize();
  if (k.get_den() != 1) return res;  // NotConjugate
  res.status = ConjStatus::Conjugate;
  res.k = k.get_num();

  if (abs(res.k) <= 1024) {
    Word w = pow(Word(1, make_letter(2, false)), -res.k.get_si());
    Word probe = w + b_corridor_word(chis, es) + inverse(w) + inverse(b_corridor_word(xis, es));
    if (!b_is_identity(probe)) throw std::logic_error("corridor coefficient failed verification");
  }
  return res;
}

ConjugacyCertificate direct_product_conjugator(const ConjugacyCertificate& c1,
                                               const ConjugacyCertificate& c2,
                                               const Presentation& product,
                                               const Presentation& factor1,
                                               const Presentation& factor2) {
  if (!c1.ledger || !c2.ledger)
    throw std::invalid_argument("both factor certificates must carry ledgers");
  size_t L = size_t(factor1.alphabet.size()), R = size_t(factor2.alphabet.size());
  if (size_t(product.alphabet.size()) != L + R)
    throw std::invalid_argument("product alphabet does not split into the factors");
  auto lift2 = [&](const Word& w) {
    Word out;
    out.reserve(w.size());
    for (Letter l : w) out += make_letter(letter_gen(l) + int(L), letter_is_inverse(l));
    return out;
  };
  size_t n1 = factor1.relators.size(), n2 = factor2.relators.size();
  if (product.relators.size() < n1 + n2)
    throw std::invalid_argument("product presentation is missing factor relators");
  for (size_t i = 0; i < n1; ++i)
    if (product.relators[i] != factor1.relators[i])
      throw std::invalid_argument("factor-1 relators must lead the product presentation");
  for (size_t j = 0; j < n2; ++j)
    if (product.relators[n1 + j] != lift2(factor2.relators[j]))
      throw std::invalid_argument("factor-2 relators must follow factor 1's");

  auto check_factor = [](const ConjugacyCertificate& c, const Presentation& p) {
    Word probe = c.w + c.u + inverse(c.w) + inverse(c.v);
    if (free_reduce(c.ledger->start) != free_reduce(probe) ||
        !free_reduce(c.ledger->end).empty() || !verify_ledger(*c.ledger, p))
      throw std::invalid_argument("factor certificate ledger is invalid");
  };
  check_factor(c1, factor1);
  check_factor(c2, factor2);

  // One-step transposition table: rule[y][x] rewrites the adjacent pair
  // y x (y in factor 2, x in factor 1) to x y via a commutation relator.
  struct Swap {
    int relator = -1, rotation = 0, sign = 1;
  };
  std::vector<std::vector<Swap>> rule(2 * R, std::vector<Swap>(2 * L));
  for (size_t y = 0; y < 2 * R; ++y)
    for (size_t x = 0; x < 2 * L; ++x) {
      Word fixture{Letter(2 * L + y), Letter(x)};
      Word target{Letter(x), Letter(2 * L + y)};
      Swap& s = rule[y][x];
      for (size_t rel = n1 + n2; rel < product.relators.size() && s.relator < 0; ++rel)
        for (int sign : {1, -1})
          for (size_t rot = 0; rot < product.relators[rel].size(); ++rot)
            if (apply_relator(fixture, {0, int(rel), int(rot), sign}, product) == target) {
              s = {int(rel), int(rot), sign};
              break;
            }
      if (s.relator < 0)
        throw std::invalid_argument("product presentation lacks a commutation relator");
    }

  Word u = c1.u + lift2(c2.u);
  Word v = c1.v + lift2(c2.v);
  Word w = c1.w + lift2(c2.w);
  LedgerBuilder lb(product, w + u + inverse(w) + inverse(v));

  // Sort factor-1 letters to the front.  Each application removes at
  // least one factor-2-before-factor-1 inversion, and the free reductions
  // inside apply_relator stay within one factor, so the final blocks are
  // exactly the freely reduced factor probes.
  auto in_factor2 = [&](Letter l) { return letter_gen(l) >= int(L); };
  for (bool sorted = false; !sorted;) {
    sorted = true;
    for (size_t i = 0; i + 1 < lb.current.size(); ++i)
      if (in_factor2(lb.current[i]) && !in_factor2(lb.current[i + 1])) {
        const Swap& s = rule[size_t(lb.current[i]) - 2 * L][size_t(lb.current[i + 1])];
        lb.apply({int(i), s.relator, s.rotation, s.sign});
        sorted = false;
        break;
      }
  }
  for (const DerivationStep& st : c1.ledger->steps) lb.apply(st);
  for (DerivationStep st : c2.ledger->steps) {
    st.relator += int(n1);
    lb.apply(st);
  }
  AreaLedger ledger = lb.finish();
  if (!ledger.end.empty()) throw std::logic_error("product ledger did not close");

  // The ledger replay to the empty word is itself the triviality proof.
  return checked_cert(std::move(u), std::move(v), std::move(w),
                      [](const Word&) { return true; }, std::move(ledger), &product);
}

FreeConjugacyResult free_product_conjugacy(const Word& u, const Word& v, const ModelPtr& left,
                                           const ModelPtr& right, const FactorSolver& solve_left,
                                           const FactorSolver& solve_right) {
  ModelPtr model = free_product_model(left, right);
  size_t L = left->alphabet().size();
  auto lift = [&](const Word& w, int factor) {
    if (factor == 0) return w;
    Word out;
    out.reserve(w.size());
    for (Letter l : w) out += make_letter(letter_gen(l) + int(L), letter_is_inverse(l));
    return out;
  };
  auto factor_word = [&](const Element& syl, int factor) {
    return factor == 0 ? left->element_to_word(syl) : right->element_to_word(syl);
  };
  auto syllable_word = [&](const Element& syl, int factor) {
    return lift(factor_word(syl, factor), factor);
  };

  // Conjugate away equal-factor ends; q tracks q * original * q^-1.
  auto cyclic = [&](const Word& w0) {
    Element cur = model->eval_word(w0);
    Word q;
    for (;;) {
      const FreeElement& f = std::get<FreeElement>(cur.v);
      size_t k = f.syllables.size();
      if (k < 2 || (f.first + int(k) - 1) % 2 != f.first) return std::pair{cur, q};
      Element s1{FreeElement{f.first, {f.syllables.front()}}};
      q = inverse(syllable_word(f.syllables.front(), f.first)) + q;
      cur = model->multiply(model->multiply(model->inverse(s1), cur), s1);
    }
  };

  auto [cu, qu] = cyclic(u);
  auto [cv, qv] = cyclic(v);
  const FreeElement& fu = std::get<FreeElement>(cu.v);
  const FreeElement& fv = std::get<FreeElement>(cv.v);

  FreeConjugacyResult res;
  auto conjugate = [&](Word mid) {
    res.status = ConjStatus::Conjugate;
    res.cert = checked_cert(u, v, inverse(qv) + std::move(mid) + qu,
                            [&](const Word& p) { return model->word_is_identity(p); });
    return res;
  };

  size_t k = fu.syllables.size();
  if (k != fv.syllables.size()) return res;  // syllable length is a class invariant
  if (k == 0) return conjugate(Word());
  if (k == 1) {
    if (fu.first != fv.first) return res;
    FactorConjugacy fc = (fu.first == 0 ? solve_left : solve_right)(
        factor_word(fu.syllables[0], fu.first), factor_word(fv.syllables[0], fv.first));
    res.status = fc.status;
    if (fc.status != ConjStatus::Conjugate) return res;
    return conjugate(lift(fc.w, fu.first));
  }

  // Cyclically reduced with >= 2 syllables: conjugate iff some rotation
  // matches syllable by syllable, witnessed by (s_1 .. s_r)^-1.
  for (size_t r = 0; r < k; ++r) {
    if ((fu.first + int(r)) % 2 != fv.first) continue;
    bool match = true;
    for (size_t i = 0; i < k && match; ++i) match = fu.syllables[(r + i) % k] == fv.syllables[i];
    if (!match) continue;
    Word prefix;
    for (size_t i = 0; i < r; ++i)
      prefix += syllable_word(fu.syllables[i], (fu.first + int(i)) % 2);
    return conjugate(inverse(prefix));
  }
  return res;
}

FactorSolver bfs_factor_solver(ModelPtr model, int radius) {
  return [model = std::move(model), radius](const Word& a, const Word& b) {
    ClBfsResult r = cl_bfs(*model, a, b, radius);
    FactorConjugacy out;
    out.status = r.found ? ConjStatus::Conjugate : ConjStatus::NotFoundWithin;
    if (r.found) out.w = r.w;
    return out;
  };
}

ClBfsResult cl_bfs(const GroupModel& model, const Word& u, const Word& v, int radius) {
  Element U = model.eval_word(u), V = model.eval_word(v);
  size_t ngens = model.alphabet().size();
  std::vector<Element> gen;
  gen.reserve(2 * ngens);
  for (size_t l = 0; l < 2 * ngens; ++l) gen.push_back(model.eval_word(Word(1, Letter(l))));

  // FIFO over elements with letters pushed in byte order keeps each level
  // in word order, so the first hit is the lex-least shortest conjugator.
  std::deque<std::pair<Element, Word>> queue;
  std::unordered_set<std::string> seen;
  queue.emplace_back(model.identity(), Word());
  seen.insert(model.canonical_key(model.identity()));
  while (!queue.empty()) {
    auto [g, w] = std::move(queue.front());
    queue.pop_front();
    if (model.multiply(model.multiply(g, U), model.inverse(g)) == V)
      return {true, long(w.size()), w};
    if (int(w.size()) >= radius) continue;
    for (size_t l = 0; l < 2 * ngens; ++l) {
      Element h = model.multiply(g, gen[l]);
      if (seen.insert(model.canonical_key(h)).second) queue.emplace_back(std::move(h), w + Letter(l));
    }
  }
  return {};
}

G4SearchResult g4_conjugator_search(const Word& u, const Word& v, int max_len) {
  ModelPtr heis = heis_model();
  ModelPtr bs = bs12_model();

  // Per-letter generator images under the two retract homomorphisms;
  // G4's a, b, c coincide with the Heisenberg letters, D1 renames d to a
  // and s to BS(1,2)'s s.
  std::vector<Element> hgen(10, heis->identity()), dgen(10, bs->identity());
  for (bool inv : {false, true}) {
    for (int g = 0; g < 3; ++g)
      hgen[size_t(make_letter(g, inv))] = heis->eval_word(Word(1, make_letter(g, inv)));
    dgen[size_t(make_letter(0, inv))] = bs->eval_word(Word(1, make_letter(0, inv)));
    dgen[size_t(make_letter(3, inv))] = bs->eval_word(Word(1, make_letter(0, inv)));
    dgen[size_t(make_letter(4, inv))] = bs->eval_word(Word(1, make_letter(1, inv)));
  }
  auto image = [](const ModelPtr& m, const std::vector<Element>& g, const Word& w) {
    Element e = m->identity();
    for (Letter l : w) e = m->multiply(e, g[size_t(l)]);
    return e;
  };
  Element HU = image(heis, hgen, u), HV = image(heis, hgen, v);
  Element DU = image(bs, dgen, u), DV = image(bs, dgen, v);

  Word cand;
  std::vector<Element> hs{heis->identity()}, ds{bs->identity()};
  auto admissible = [&]() {
    return heis->multiply(heis->multiply(hs.back(), HU), heis->inverse(hs.back())) == HV &&
           bs->multiply(bs->multiply(ds.back(), DU), bs->inverse(ds.back())) == DV;
  };
  G4SearchResult res;
  // Length-then-lex over freely reduced words; the retract conditions are
  // necessary, so pruning never skips a true conjugator.
  auto dfs = [&](auto&& self, int remaining) -> bool {
    if (remaining == 0) {
      if (!admissible()) return false;
      if (!g4_is_identity(cand + u + inverse(cand) + inverse(v))) return false;
      res.found = true;
      res.cert = checked_cert(u, v, cand, [](const Word& p) { return g4_is_identity(p); });
      return true;
    }
    for (size_t l = 0; l < 10; ++l) {
      if (!cand.empty() && Letter(l) == letter_inv(cand.back())) continue;
      cand += Letter(l);
      hs.push_back(heis->multiply(hs[hs.size() - 1], hgen[l]));
      ds.push_back(bs->multiply(ds[ds.size() - 1], dgen[l]));
      if (self(self, remaining - 1)) return true;
      cand.pop_back();
      hs.pop_back();
      ds.pop_back();
    }
    return false;
  };
  for (int len = 0; len <= max_len && !res.found; ++len) dfs(dfs, len);
  return res;
}

}  // namespace fillfn
