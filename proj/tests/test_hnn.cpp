#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fillfn/hnn.hpp>
#include <fillfn/models.hpp>
#include <fillfn/stallings.hpp>

#include <gmpxx.h>

#include <algorithm>
#include <cstdlib>
#include <map>

#include "test_util.hpp"

using namespace fillfn;

namespace {

const Presentation& pres(const char* name) {
  static std::map<std::string, Presentation> cache;
  auto [it, fresh] = cache.try_emplace(name);
  if (fresh) it->second = builtin_presentation(name);
  return it->second;
}

Word W(const char* group, const char* text) { return pres(group).parse(text); }

// Same element, messier spelling: random relator applications (any
// position, rotation, and sign; an unmatched application inserts the
// whole inverted relator) plus stray x x^-1 pairs.
Word thicken(Word w, const Presentation& p, std::mt19937_64& rng, int steps) {
  std::uniform_int_distribution<int> rel(0, int(p.relators.size()) - 1);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int i = 0; i < steps; ++i) {
    if (coin(rng)) {
      std::uniform_int_distribution<size_t> at(0, w.size());
      std::uniform_int_distribution<int> gen(0, p.alphabet.size() - 1);
      Letter l = make_letter(gen(rng), coin(rng));
      Word pair{l, letter_inv(l)};
      w.insert(at(rng), pair);
    } else {
      int r = rel(rng);
      std::uniform_int_distribution<int> rot(0, int(p.relators[size_t(r)].size()) - 1);
      std::uniform_int_distribution<int> at(0, int(w.size()));
      w = apply_relator(w, DerivationStep{at(rng), r, rot(rng), coin(rng) ? 1 : -1}, p);
    }
  }
  return w;
}

bool no_pinch_left(const BrittonWord& w, const HnnSpec& spec) {
  for (size_t i = 0; i + 1 < w.letters.size(); ++i) {
    if (w.letters[i + 1] != letter_inv(w.letters[i])) continue;
    const StableLetter* t = spec.find(w.letters[i]);
    if (letter_is_inverse(w.letters[i]) ? t->in_image(w.base[i + 1])
                                        : t->in_domain(w.base[i + 1]))
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("folded subgroup graphs decide membership in free groups") {
  // Letters 0 = c, 1 = s.
  auto lt = [](int g, bool inv) { return make_letter(g, inv); };
  SubgroupGraph cs2 = fold({Word{lt(0, false)}, Word{lt(1, false), lt(1, false)}}, 2);
  CHECK(cs2.vertex_count() == 2);
  CHECK(cs2.membership(Word{}));
  CHECK(cs2.membership(Word{lt(0, false)}));
  CHECK(cs2.membership(Word{lt(1, false), lt(1, false)}));
  CHECK_FALSE(cs2.membership(Word{lt(1, false)}));
  CHECK_FALSE(cs2.membership(Word{lt(1, false), lt(0, false), lt(1, false)}));
  CHECK(cs2.membership(Word{lt(1, false), lt(1, false), lt(0, false), lt(1, true), lt(1, true)}));

  // Membership in <c, s^2> is exactly the s-run parity criterion.
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 2000; ++trial) {
    Word w = free_reduce(testutil::random_word(rng, 2, 1 + trial % 12));
    bool even_runs = true;
    for (size_t i = 0; i < w.size();) {
      if (letter_gen(w[i]) != 1) {
        ++i;
        continue;
      }
      size_t j = i;
      while (j < w.size() && w[j] == w[i]) ++j;
      if ((j - i) % 2) even_runs = false;
      i = j;
    }
    CHECK(cs2.membership(w) == even_runs);
  }

  SubgroupGraph all = fold({Word{lt(0, false)}, Word{lt(1, false)}}, 2);
  CHECK(all.vertex_count() == 1);
  for (int trial = 0; trial < 50; ++trial)
    CHECK(all.membership(testutil::random_word(rng, 2, trial % 9)));
}

TEST_CASE("britton reduction cancels exactly the legal pinches") {
  const HnnSpec& e = e_hnn_spec();

  BrittonWord r = britton_reduce(britton_split(W("E", "a s a^-1"), e), e);
  CHECK(r.letters.empty());
  CHECK(free_reduce(r.join()) == W("E", "s^2"));

  r = britton_reduce(britton_split(W("E", "a^-1 s a"), e), e);
  CHECK(r.letters.size() == 2);
  CHECK(no_pinch_left(r, e));

  r = britton_reduce(britton_split(W("E", "d^-1 s^2 d"), e), e);
  CHECK(r.letters.empty());
  CHECK(free_reduce(r.join()) == W("E", "s"));

  // d moves only powers of s; a c-letter blocks the pinch.
  r = britton_reduce(britton_split(W("E", "d c d^-1"), e), e);
  CHECK(r.letters.size() == 2);

  // Rewrites reject interiors their membership oracles would not accept.
  const StableLetter* a = e.find(make_letter(0, false));
  const StableLetter* d = e.find(make_letter(2, false));
  CHECK_THROWS_AS(a->backward(W("E", "s")), MalformedPinch);
  CHECK_THROWS_AS(d->forward(W("E", "c")), MalformedPinch);
  CHECK_THROWS_AS(d->backward(W("E", "s^3")), MalformedPinch);
}

TEST_CASE("stable-letter rewrites are homomorphisms matched by the group") {
  std::mt19937_64 rng(77);
  const HnnSpec& e = e_hnn_spec();
  const StableLetter* ea = e.find(make_letter(0, false));
  const StableLetter* ed = e.find(make_letter(2, false));

  for (int trial = 0; trial < 500; ++trial) {
    // a's domain is the whole base; sample words over {c,s}.
    Word u = map_alphabet(testutil::random_word(rng, 2, 1 + trial % 10),
                          Alphabet{{"c", "s"}}, pres("E").alphabet);
    Word v = map_alphabet(testutil::random_word(rng, 2, 1 + (trial * 7) % 10),
                          Alphabet{{"c", "s"}}, pres("E").alphabet);
    CHECK(free_reduce(ea->forward(u) + ea->forward(v)) == free_reduce(ea->forward(u + v)));
    CHECK(ea->in_image(ea->forward(u)));
    CHECK(free_reduce(ea->backward(ea->forward(u))) == free_reduce(u));
    CHECK(e_is_identity(W("E", "a") + u + W("E", "a^-1") + inverse(ea->forward(u))));
  }
  for (long k = -6; k <= 6; ++k) {
    Word u = pow(W("E", "s"), k);
    CHECK(ed->in_domain(u));
    CHECK(ed->in_image(ed->forward(u)));
    CHECK(free_reduce(ed->backward(ed->forward(u))) == free_reduce(u));
    CHECK(e_is_identity(W("E", "d") + u + W("E", "d^-1") + inverse(ed->forward(u))));
  }

  const HnnSpec& g4 = g4_hnn_spec();
  const StableLetter* gb = g4.find(make_letter(1, false));
  for (int trial = 0; trial < 120; ++trial) {
    // Domain elements of the b-pinch: <a,c,d> elements, spelled with
    // spurious s-letters that cancel in E.
    Word sig_e = map_alphabet(testutil::random_word(rng, 3, 1 + trial % 7),
                              Alphabet{{"a", "c", "d"}}, pres("E").alphabet);
    Word ue = thicken(sig_e, pres("E"), rng, trial % 4);
    Word u = map_alphabet(ue, pres("E").alphabet, pres("G4").alphabet);
    REQUIRE(gb->in_domain(u));
    CHECK(gb->in_domain(gb->forward(u)));
    CHECK(g4_is_identity(W("G4", "b") + u + W("G4", "b^-1") + inverse(gb->forward(u))));
    CHECK(g4_is_identity(W("G4", "b^-1") + u + W("G4", "b") + inverse(gb->backward(u))));
    Word back = map_alphabet(gb->backward(gb->forward(u)), pres("G4").alphabet,
                             pres("E").alphabet);
    CHECK(e_is_identity(back + inverse(ue)));
  }
}

TEST_CASE("word problems across the tower agree on the named examples") {
  CHECK(e_is_identity(W("E", "a c a^-1 c^-1")));
  CHECK(e_is_identity(W("E", "a s a^-1 s^-2")));
  CHECK(e_is_identity(W("E", "d s d^-1 s^-2")));
  CHECK_FALSE(e_is_identity(W("E", "a^-1 s a s^-1")));
  CHECK_FALSE(e_is_identity(W("E", "s")));
  for (const Word& r : pres("E").relators) CHECK(e_is_identity(r));

  CHECK(g4_is_identity(W("G4", "b d b^-1 d^-1")));
  CHECK(g4_is_identity(W("G4", "b a b^-1 a^-1 c")));
  CHECK_FALSE(g4_is_identity(W("G4", "b s b^-1 s^-1")));
  CHECK_FALSE(g4_is_identity(W("G4", "c")));
  for (const Word& r : pres("G4").relators) CHECK(g4_is_identity(r));

  CHECK(a_is_identity(W("A", "b d b^-1 d^-1")));
  CHECK(a_is_identity(W("A", "b a b^-1 a^-1 c")));
  CHECK_FALSE(a_is_identity(W("A", "b a b^-1 a^-1")));
  for (const Word& r : pres("A").relators) CHECK(a_is_identity(r));

  CHECK(b_is_identity(W("B", "a s a^-1 d s^-1 d^-1")));
  CHECK(b_is_identity(W("B", "a s a^-1 s^-2")));
  CHECK_FALSE(b_is_identity(W("B", "a d a^-1 d^-1")));
  for (const Word& r : pres("B").relators) CHECK(b_is_identity(r));

  CHECK(l_is_identity(W("L", "b c b^-1 c^-1")));
  CHECK_FALSE(l_is_identity(W("L", "b s b^-1 s^-1")));
  for (const Word& r : pres("L").relators) CHECK(l_is_identity(r));

  CHECK(k_is_identity(W("A", "a c a^-1 c^-1")));
  CHECK_FALSE(k_is_identity(W("A", "a d a^-1 d^-1")));
}

TEST_CASE("subgroup word problems restrict the ambient one") {
  std::mt19937_64 rng(4099);
  ModelPtr heis = heis_model();
  ModelPtr bs = bs12_model();

  auto check_embedding = [&](const char* sub, int ngens, auto&& sub_trivial) {
    for (int trial = 0; trial < 400; ++trial) {
      Word w = testutil::random_word(rng, ngens, 1 + trial % 12);
      Word in_g4 = map_alphabet(w, pres(sub).alphabet, pres("G4").alphabet);
      CHECK(sub_trivial(w) == g4_is_identity(in_g4));
    }
  };
  check_embedding("G1", 3, [&](const Word& w) { return heis->word_is_identity(w); });
  check_embedding("L", 3, l_is_identity);
  check_embedding("B", 3, b_is_identity);
  check_embedding("E", 4, e_is_identity);
  check_embedding("A", 4, a_is_identity);
  check_embedding("BS12", 2, [&](const Word& w) { return bs->word_is_identity(w); });

  // The two affine slices of E, <a,s> and <d,s>.
  for (int trial = 0; trial < 400; ++trial) {
    Word w = testutil::random_word(rng, 2, 1 + trial % 12);
    CHECK(bs->word_is_identity(w) ==
          e_is_identity(map_alphabet(w, pres("BS12").alphabet, pres("E").alphabet)));
    Word ds;
    for (Letter l : w)
      ds.push_back(make_letter(letter_gen(l) == 0 ? 2 : 3, letter_is_inverse(l)));
    CHECK(bs->word_is_identity(w) == e_is_identity(ds));
  }

  // Thickened trivial words stay trivial; their free inverses too.
  for (int trial = 0; trial < 200; ++trial) {
    Word w = thicken(Word{}, pres("G4"), rng, 2 + trial % 6);
    CHECK(g4_is_identity(w));
    Word u = testutil::random_word(rng, 5, 1 + trial % 10);
    CHECK(g4_is_identity(u + inverse(u)));
  }
}

TEST_CASE("britton reduction preserves the element along every retract") {
  std::mt19937_64 rng(555);
  const HnnSpec& g4 = g4_hnn_spec();
  ModelPtr heis = heis_model();
  ModelPtr bs = bs12_model();
  for (int trial = 0; trial < 300; ++trial) {
    Word w = testutil::random_word(rng, 5, 1 + trial % 14);
    BrittonWord r = britton_reduce(britton_split(w, g4), g4);
    CHECK(no_pinch_left(r, g4));
    Word u = r.join();
    CHECK(heis->eval_word(retract(w, Retraction::Heis)) ==
          heis->eval_word(retract(u, Retraction::Heis)));
    Word dw = map_alphabet(retract(w, Retraction::D1), pres("G4").alphabet,
                           pres("BS12").alphabet);
    Word du = map_alphabet(retract(u, Retraction::D1), pres("G4").alphabet,
                           pres("BS12").alphabet);
    CHECK(bs->eval_word(dw) == bs->eval_word(du));
  }
}

TEST_CASE("retractions fix their targets and kill the complements") {
  CHECK(retract(W("G4", "b^-1 c s"), Retraction::Heis) == W("G4", "b^-1 c"));
  CHECK(retract(W("G4", "s"), Retraction::Heis).empty());
  CHECK(retract(W("G4", "a^-1 d"), Retraction::D1) == W("G4", "a^-1 a"));
  CHECK(free_reduce(retract(W("G4", "a^-1 d"), Retraction::D1)).empty());
  CHECK(retract(W("G4", "a b c d s"), Retraction::A) == W("G4", "a b c d"));
  CHECK(retract(W("G4", "a b c d s"), Retraction::B) == W("G4", "a d s"));

  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    Word u = testutil::random_word(rng, 5, trial % 9);
    Word v = testutil::random_word(rng, 5, (trial * 5) % 9);
    for (Retraction rho : {Retraction::Heis, Retraction::D1, Retraction::A, Retraction::B}) {
      CHECK(retract(u + v, rho) == retract(u, rho) + retract(v, rho));
      CHECK(retract(retract(u, rho), rho) == retract(u, rho));
    }
    // Words already inside the target alphabet are fixed.
    Word h = testutil::random_word(rng, 3, trial % 8);
    CHECK(retract(h, Retraction::Heis) == h);
    Word a4 = testutil::random_word(rng, 4, trial % 8);
    CHECK(retract(a4, Retraction::A) == a4);
  }
}

TEST_CASE("s-free representatives exist exactly on the base slice") {
  CHECK_FALSE(acd_representative(W("G4", "s")).has_value());
  CHECK_FALSE(acd_representative(W("G4", "b")).has_value());
  CHECK(acd_representative(W("G4", "a c^-1 d")).has_value());
  // b a b^-1 = c^-1 a lands back in <a,c,d>.
  std::optional<Word> rep = acd_representative(W("G4", "b a b^-1"));
  REQUIRE(rep.has_value());
  CHECK(k_is_identity(*rep + inverse(W("G4", "c^-1 a"))));

  std::mt19937_64 rng(808);
  for (int trial = 0; trial < 1000; ++trial) {
    Word sigma0 = map_alphabet(testutil::random_word(rng, 3, 1 + trial % 8),
                               Alphabet{{"a", "c", "d"}}, pres("G4").alphabet);
    Word w = thicken(sigma0, pres("G4"), rng, 1 + trial % 6);
    long n = long(w.size());
    std::optional<Word> s = acd_representative(w);
    REQUIRE(s.has_value());
    CHECK(letter_count(*s, 0) + letter_count(*s, 3) <= n);
    CHECK(letter_count(*s, 2) <= 3 * n * n);
    CHECK(letter_count(*s, 1) == 0);
    CHECK(letter_count(*s, 4) == 0);
    CHECK(g4_is_identity(w + inverse(*s)));
  }
}

TEST_CASE("free product normal forms recover their syllables") {
  LNormalForm nf = l_normal_form(W("L", "b c s b"));
  CHECK(nf.bc == std::vector<std::pair<long, long>>{{1, 1}, {1, 0}});
  CHECK(nf.mu == std::vector<long>{1});
  CHECK(l_is_identity(W("L", "b c s b") + inverse(nf.to_word())));

  nf = l_normal_form(W("L", "b s s^-1 c"));
  CHECK(nf.bc == std::vector<std::pair<long, long>>{{1, 1}});
  CHECK(nf.mu.empty());

  nf = l_normal_form(Word{});
  CHECK(nf.bc == std::vector<std::pair<long, long>>{{0, 0}});
  CHECK(nf.mu.empty());

  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 500; ++trial) {
    Word w = testutil::random_word(rng, 3, trial % 14);
    LNormalForm f = l_normal_form(w);
    CHECK(f.bc.size() == f.mu.size() + 1);
    for (size_t i = 0; i < f.mu.size(); ++i) {
      CHECK(f.mu[i] != 0);
      if (i + 1 < f.mu.size()) CHECK(f.bc[i + 1] != std::pair<long, long>(0, 0));
    }
    CHECK(l_is_identity(w + inverse(f.to_word())));
    CHECK(l_is_identity(w) == (f.bc == std::vector<std::pair<long, long>>{{0, 0}}));
  }
}

TEST_CASE("syllable data is polynomial in any ambient spelling") {
  std::mt19937_64 rng(4242);
  const Presentation& g4 = pres("G4");

  for (int trial = 0; trial < 60; ++trial) {
    std::uniform_int_distribution<int> syl(1, 3), small(1, 3), lam(0, 7);
    int k = syl(rng);
    std::vector<std::pair<long, long>> bc;
    std::vector<long> mu;
    Word v;  // over G4, same element spelled with compressions
    auto sgn = [&] { return small(rng) % 2 ? 1 : -1; };
    for (int i = 0; i <= k; ++i) {
      long beta = small(rng) * sgn(), x = small(rng) * sgn(), y = small(rng) * sgn();
      bc.emplace_back(beta, x * y);
      v += pow(W("G4", "b"), beta);
      v += pow(W("G4", "a"), x) + pow(W("G4", "b"), y) + pow(W("G4", "a"), -x) +
           pow(W("G4", "b"), -y);
      if (i == k) break;
      long lambda = lam(rng), m = small(rng) * sgn();
      mu.push_back(m * (1L << lambda));
      v += pow(W("G4", "a"), lambda) + pow(W("G4", "s"), m) + pow(W("G4", "a"), -lambda);
    }
    LNormalForm f;
    f.bc = bc;
    f.mu = mu;
    Word u = f.to_word();
    CHECK(l_normal_form(u).bc == bc);
    CHECK(l_normal_form(u).mu == mu);
    CHECK(g4_is_identity(map_alphabet(u, pres("L").alphabet, g4.alphabet) + inverse(v)));

    long n = long(v.size());
    long sum_beta = 0, sum_gamma = 0;
    mpz_class sum_mu = 0;
    for (auto [b, c] : bc) sum_beta += std::labs(b), sum_gamma += std::labs(c);
    for (long m : mu) sum_mu += std::labs(m);
    CHECK(sum_beta <= n);
    CHECK(sum_gamma <= n * n);
    CHECK(sum_mu <= mpz_class(1) << size_t(n));
  }

  // The same bounds hold when the spelling is a thickened plain word.
  for (int trial = 0; trial < 60; ++trial) {
    Word u0 = testutil::random_word(rng, 3, 1 + trial % 8);
    Word v = thicken(map_alphabet(u0, pres("L").alphabet, g4.alphabet), g4, rng, trial % 5);
    LNormalForm f = l_normal_form(u0);
    long n = long(v.size());
    long sum_beta = 0, sum_gamma = 0;
    mpz_class sum_mu = 0;
    for (auto [b, c] : f.bc) sum_beta += std::labs(b), sum_gamma += std::labs(c);
    for (long m : f.mu) sum_mu += std::labs(m);
    CHECK(sum_beta <= n);
    CHECK(sum_gamma <= n * n);
    CHECK(sum_mu <= mpz_class(1) << size_t(n));
    CHECK(g4_is_identity(map_alphabet(u0, pres("L").alphabet, g4.alphabet) + inverse(v)));
  }
}

TEST_CASE("constructive reduction certifies its own step bound") {
  const Presentation& e = pres("E");

  AreaLedger led = e_reduce_with_ledger(W("E", "a s a^-1 s^-2"));
  CHECK(led.steps.size() == 1);
  CHECK(led.end.empty());
  CHECK(verify_ledger(led, e));

  led = e_reduce_with_ledger(W("E", "a^2 s a^-2 s^-4"));
  CHECK(led.steps.size() == 3);
  CHECK(led.end.empty());
  CHECK(verify_ledger(led, e));

  // Doubling towers: a^k s a^-k s^(-2^k) costs 2^k - 1 crossings.
  for (long k = 3; k <= 8; ++k) {
    Word w = pow(W("E", "a"), k) + W("E", "s") + pow(W("E", "a"), -k) +
             pow(W("E", "s"), -(1L << k));
    led = e_reduce_with_ledger(w);
    CHECK(long(led.steps.size()) == (1L << k) - 1);
    CHECK(led.end.empty());
    CHECK(verify_ledger(led, e));
  }

  led = e_reduce_with_ledger(W("E", "a^-1 s a s^-1"));
  CHECK_FALSE(led.end.empty());
  CHECK(verify_ledger(led, e));

  std::mt19937_64 rng(606);
  for (int trial = 0; trial < 400; ++trial) {
    Word w = testutil::random_word(rng, 4, 1 + trial % 14);
    AreaLedger l = e_reduce_with_ledger(w);
    REQUIRE(verify_ledger(l, e));
    CHECK(l.end.empty() == e_is_identity(w));
    long stable = letter_count(w, 0) + letter_count(w, 2);
    long base = letter_count(w, 1) + letter_count(w, 3);
    CHECK(long(l.steps.size()) <= base * (1L << std::min(stable, 40L)));
  }
}
