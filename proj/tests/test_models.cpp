#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fillfn/area.hpp>
#include <fillfn/models.hpp>
#include <fillfn/oracles.hpp>

#include <unordered_map>

#include "test_util.hpp"

using namespace fillfn;

namespace {

mpz_class pw2(long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, static_cast<unsigned long>(e));
  return r;
}

mpq_class bs12_q(const Bs12Element& b) { return mpq_class(b.num) / mpq_class(pw2(b.den2)); }

mpq_class bs12_scale(const Bs12Element& b) {
  return b.k >= 0 ? mpq_class(pw2(b.k)) : mpq_class(1) / mpq_class(pw2(-b.k));
}

}  // namespace

TEST_CASE("heisenberg coordinates count commutator crossings") {
  Presentation g1 = builtin_presentation("G1");
  CHECK(heis_eval(g1.parse("c")) == HeisElement{0, 0, 1});
  CHECK(heis_eval(g1.parse("b a")) == HeisElement{1, 1, -1});
  CHECK(heis_eval(g1.parse("a b c^-1")) == HeisElement{1, 1, -1});
  CHECK(heis_eval(g1.parse("a^2 b^2 a^-2 b^-2")) == HeisElement{0, 0, 4});
  for (const Word& r : g1.relators) CHECK(heis_eval(r) == HeisElement{});
  CHECK_THROWS_AS(heis_eval(Word(1, make_letter(3, false))), ParseError);
}

TEST_CASE("affine model doubles and translates") {
  Presentation bs = builtin_presentation("BS12");
  CHECK(bs12_eval(bs.parse("a s a^-1 s^-2")) == Bs12Element{});
  CHECK(bs12_eval(bs.parse("s a")) == Bs12Element{1, 1, 0});
  CHECK(bs12_eval(bs.parse("a^5 s a^-5")) == Bs12Element{0, 32, 0});
  CHECK(bs12_eval(bs.parse("a^-1 s a")) == Bs12Element{0, 1, 1});
  CHECK(bs12_eval(bs.parse("a^-2 s^3 a^2")) == Bs12Element{0, 3, 2});
  // s^4 a^-2 maps x to x/4 + 4: k = -2, q = 4 (a whole number, so den2 = 0).
  CHECK(bs12_eval(bs.parse("s^4 a^-2")) == Bs12Element{-2, 4, 0});
  CHECK(bs12_q(bs12_eval(bs.parse("s^4 a^-2"))) == 4);

  // Normal form a^-e s^n a^(e+k) inverts evaluation.
  ModelPtr m = bs12_model();
  Element g = m->eval_word(bs.parse("a^-2 s^3 a^-1"));
  Word nf = m->element_to_word(g);
  CHECK(bs.format(nf) == "a^-2 s^3 a^-1");
  CHECK(m->eval_word(nf) == g);
}

TEST_CASE("filiform conjugation pushes down the chain") {
  ModelPtr m = filiform_model(3);
  const Alphabet& al = m->alphabet();
  auto parse = [&](const char* s) { return parse_word(al, s); };
  CHECK(filiform_eval(parse("t a2 t^-1"), 3) == FiliformElement{{1, 1, 0}, 0});
  CHECK(filiform_eval(parse("t a1 t^-1"), 3) == FiliformElement{{1, 0, 0}, 0});
  CHECK(filiform_eval(parse("t^2 a2 t^-2"), 3) == FiliformElement{{2, 1, 0}, 0});
  CHECK(filiform_eval(parse("t^-1 a2 t"), 3) == FiliformElement{{-1, 1, 0}, 0});
  CHECK(filiform_eval(parse("t^2 a3 t^-2"), 3) == FiliformElement{{1, 2, 1}, 0});
  for (int d : {1, 2, 3, 4}) {
    Presentation p = builtin_presentation("G5:d=" + std::to_string(d));
    for (const Word& r : p.relators) CHECK(filiform_eval(r, d) == filiform_eval(Word{}, d));
  }
}

TEST_CASE("central extension cocycle matches the defining relations") {
  ModelPtr m = g6m_model(2);
  auto parse = [&](const char* s) { return parse_word(m->alphabet(), s); };
  CHECK(g6m_eval(parse("b1 a1 b1^-1 a1^-1"), 2) == g6m_eval(parse("c1"), 2));
  CHECK(g6m_eval(parse("b2 a2 b2^-1 a2^-1"), 2) == g6m_eval(Word{}, 2));
  CHECK(g6m_eval(parse("b2 a1 b2^-1 a1^-1"), 2) == g6m_eval(parse("c2^-1"), 2));
  for (int mm : {1, 2, 3, 20}) {
    Presentation p = builtin_presentation("G6:m=" + std::to_string(mm));
    for (const Word& r : p.relators) CHECK(g6m_eval(r, mm) == g6m_eval(Word{}, mm));
  }
}

TEST_CASE("direct product evaluates factors independently") {
  ModelPtr g3 = builtin_model("G3");
  Presentation p = builtin_presentation("G3");
  for (const Word& r : p.relators) CHECK(g3->word_is_identity(r));
  CHECK(g3->canonical_key(g3->eval_word(p.parse("a s a^-1"))) ==
        g3->canonical_key(g3->eval_word(p.parse("s"))));
  CHECK_FALSE(g3->word_is_identity(p.parse("a b a^-1 b^-1")));  // c is not killed
  CHECK(g3->word_is_identity(p.parse("a b a^-1 b^-1 c^-1")));

  // The generic merged-alphabet product has the same element semantics.
  Element via = product_eval(p.parse("a s a^-1"), heis_model(), bs12_model(), ProductKind::Direct);
  CHECK(g3->canonical_key(via) == g3->canonical_key(g3->eval_word(p.parse("s"))));
}

TEST_CASE("free product reduces to alternating syllables") {
  ModelPtr g7 = builtin_model("G7");
  const Alphabet& al = g7->alphabet();
  // Left factor keeps its names; clashing right names gain primes.
  CHECK(al.size() == 4 + 42);
  CHECK(al.name_of(0) == "a1");
  CHECK(al.name_of(3) == "t");
  CHECK(al.name_of(4) == "a1'");
  CHECK(al.name_of(6) == "a3'");
  CHECK(al.name_of(7) == "a4");
  CHECK(al.name_of(24) == "b1");

  auto parse = [&](const char* s) { return parse_word(al, s); };
  auto syllables = [&](const char* s) {
    return std::get<FreeElement>(g7->eval_word(parse(s)).v).syllables.size();
  };
  CHECK(syllables("t b1 t^-1") == 3);
  CHECK(syllables("a1 a1' a1 a1'") == 4);
  CHECK(syllables("t a1 b1 c3") == 2);  // t a1 merge left, b1 c3 merge right
  CHECK(g7->word_is_identity(parse("t b1 b1^-1 t^-1")));
  CHECK(g7->word_is_identity(parse("a1 b2 a2' a2'^-1 b2^-1 a1^-1")));
  CHECK_FALSE(g7->word_is_identity(parse("a1 b1 a1^-1 b1^-1")));

  Element g = g7->eval_word(parse("t b1 a2 c17^-1 t"));
  CHECK(g7->multiply(g, g7->inverse(g)) == g7->identity());
  CHECK(g7->eval_word(g7->element_to_word(g)) == g);

  // Seam cancellation cascades across several syllables.
  Element left = g7->eval_word(parse("a1 b1 t"));
  Element right = g7->eval_word(parse("t^-1 b1^-1 a1^-1 c4"));
  Element prod = g7->multiply(left, right);
  CHECK(prod == g7->eval_word(parse("c4")));
}

TEST_CASE("evaluation is a homomorphism respecting inverses") {
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  for (const char* name : {"G1", "BS12", "G5:d=3", "G6:m=2", "G3", "G7"}) {
    ModelPtr m = builtin_model(name);
    int ng = m->alphabet().size();
    std::uniform_int_distribution<int> len(0, 16);
    for (int i = 0; i < 10000; ++i) {
      Word u = testutil::random_word(rng, ng, len(rng));
      Word v = testutil::random_word(rng, ng, len(rng));
      Element prod = m->multiply(m->eval_word(u), m->eval_word(v));
      if (!(m->eval_word(u + v) == prod)) {
        CAPTURE(name);
        REQUIRE(m->eval_word(u + v) == prod);
      }
      if (!(m->eval_word(inverse(u)) == m->inverse(m->eval_word(u)))) {
        CAPTURE(name);
        REQUIRE(m->eval_word(inverse(u)) == m->inverse(m->eval_word(u)));
      }
    }
    CHECK(m->eval_word(Word{}) == m->identity());
  }
}

TEST_CASE("models agree with the independent oracles") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> len(0, 20);

  for (int i = 0; i < 10000; ++i) {
    Word w = testutil::random_word(rng, 3, len(rng));
    HeisElement g = heis_eval(w);
    oracles::Mat3 M = oracles::heis_matrix_eval(w);
    REQUIRE(g.alpha == M[0][1]);
    REQUIRE(g.beta == M[1][2]);
    REQUIRE(g.gamma == M[0][2] - g.alpha * g.beta);
  }

  for (int i = 0; i < 10000; ++i) {
    Word w = testutil::random_word(rng, 2, len(rng));
    Bs12Element g = bs12_eval(w);
    if (g.den2 > 0) REQUIRE(mpz_odd_p(g.num.get_mpz_t()));
    oracles::AffinePoints pts = oracles::bs12_affine_eval(w);
    REQUIRE(bs12_q(g) == pts.at0);
    REQUIRE(bs12_scale(g) == pts.at1 - pts.at0);
  }

  // Coordinates (v, m) are the last column and the superdiagonal entry of
  // the unipotent block, and they determine the element.
  const int d = 3;
  for (int i = 0; i < 10000; ++i) {
    Word w = testutil::random_word(rng, d + 1, len(rng));
    FiliformElement g = filiform_eval(w, d);
    oracles::MatN M = oracles::filiform_matrix_eval(w, d);
    for (int r = 0; r < d; ++r) REQUIRE(g.v[size_t(r)] == M[size_t(r)][size_t(d)]);
    REQUIRE(mpz_class(g.m) == M[d - 2][d - 1]);
  }

  const int mm = 2;
  for (int i = 0; i < 10000; ++i) {
    Word w = testutil::random_word(rng, 2 * mm + 2, len(rng));
    CentralExtElement g = g6m_eval(w, mm);
    std::vector<mpz_class> nf = oracles::g6m_pushed_normal_form(w, mm);
    REQUIRE(nf.size() == size_t(2 * mm + 2));
    for (int j = 0; j < mm; ++j) {
      REQUIRE(g.x[size_t(j)] == nf[size_t(j)]);
      REQUIRE(g.z[size_t(j)] == nf[size_t(mm + 2 + j)]);
    }
    REQUIRE(g.y[0] == nf[size_t(mm)]);
    REQUIRE(g.y[1] == nf[size_t(mm + 1)]);
  }
}

TEST_CASE("heisenberg coordinates obey the length bounds") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> len(0, 40);
  for (int i = 0; i < 10000; ++i) {
    int n = len(rng);
    Word w = testutil::random_reduced_word(rng, 3, n);
    HeisElement g = heis_eval(w);
    CHECK(abs(g.alpha) <= n);
    CHECK(abs(g.beta) <= n);
    CHECK(abs(g.gamma) <= mpz_class(n) * n);
  }
  // The quadratic bound is asymptotically achieved by commutator powers.
  Word w;
  for (int rep = 0; rep < 10; ++rep) w.push_back(make_letter(0, false));
  for (int rep = 0; rep < 10; ++rep) w.push_back(make_letter(1, false));
  for (int rep = 0; rep < 10; ++rep) w.push_back(make_letter(0, true));
  for (int rep = 0; rep < 10; ++rep) w.push_back(make_letter(1, true));
  CHECK(heis_eval(w) == HeisElement{0, 0, 100});
}

TEST_CASE("normal-form words invert evaluation") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> len(0, 12);
  for (const char* name : {"G1", "BS12", "G5:d=3", "G6:m=2", "G3", "G7"}) {
    ModelPtr m = builtin_model(name);
    CHECK(m->element_to_word(m->identity()).empty());
    for (int i = 0; i < 2000; ++i) {
      Word w = testutil::random_word(rng, m->alphabet().size(), len(rng));
      Element g = m->eval_word(w);
      Word nf = m->element_to_word(g);
      if (!is_freely_reduced(nf)) {
        CAPTURE(name);
        REQUIRE(is_freely_reduced(nf));
      }
      if (!(m->eval_word(nf) == g)) {
        CAPTURE(name);
        REQUIRE(m->eval_word(nf) == g);
      }
    }
  }
}

TEST_CASE("canonical keys separate elements") {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> len(0, 10);
  for (const char* name : {"G1", "BS12", "G5:d=3", "G6:m=2", "G3", "G7"}) {
    ModelPtr m = builtin_model(name);
    // Two words with the same key must have the same normal form; two
    // with different keys must evaluate to different elements.
    std::unordered_map<std::string, Word> seen;
    for (int i = 0; i < 4000; ++i) {
      Word w = testutil::random_word(rng, m->alphabet().size(), len(rng));
      Element g = m->eval_word(w);
      std::string key = m->canonical_key(g);
      Word nf = m->element_to_word(g);
      auto [it, fresh] = seen.emplace(key, nf);
      if (!fresh && it->second != nf) {
        CAPTURE(name);
        REQUIRE(it->second == nf);
      }
      REQUIRE(m->eval_word(it->second) == g);
    }
    CHECK(m->canonical_key(m->eval_word(Word{})) == m->canonical_key(m->identity()));
  }
}

TEST_CASE("model word problem matches the filling search") {
  Presentation g1 = builtin_presentation("G1");
  ModelPtr m = builtin_model("G1");
  SearchBudget full;
  full.max_nodes = 300000;
  full.max_depth = 6;
  SearchBudget tiny;
  tiny.max_nodes = 2000;
  tiny.max_depth = 3;
  long trivial = 0;
  std::vector<Word> level{Word{}};
  for (int n = 0; n <= 6; ++n) {
    std::vector<Word> next;
    for (const Word& w : level) {
      if (m->word_is_identity(w)) {
        REQUIRE(exact_area(w, g1, full).status == AreaStatus::Exact);
        ++trivial;
      } else {
        REQUIRE(exact_area(w, g1, tiny).status != AreaStatus::Exact);
      }
      if (n < 6)
        for (int l = 0; l < 6; ++l) {
          if (!w.empty() && w.back() == letter_inv(Letter(l))) continue;
          next.push_back(w + Letter(l));
        }
    }
    level = std::move(next);
  }
  CHECK(trivial > 20);
}

namespace {

Word commutator_family(int n) {
  Word w;
  auto run = [&](int gen, bool inv, long reps) {
    for (long i = 0; i < reps; ++i) w.push_back(make_letter(gen, inv));
  };
  run(0, false, n);
  run(1, false, n);
  run(0, true, n);
  run(1, true, n);
  run(2, true, long(n) * n);
  return w;
}

}  // namespace

TEST_CASE("ledger evaluation sorts words with a replayable derivation") {
  Presentation g1 = builtin_presentation("G1");
  ModelPtr m = builtin_model("G1");

  struct Fixture {
    const char* word;
    size_t steps;
    const char* end;
  };
  // A relator cycle costs one deletion; "b a" needs the exchange plus two
  // commutations, and no two-step derivation reaches the normal form.
  for (const Fixture& f : {Fixture{"b a", 3, "a b c^-1"},
                           Fixture{"a b a^-1 b^-1 c^-1", 1, ""},
                           Fixture{"a^2 b^2 a^-2 b^-2 c^-4", 20, ""},
                           Fixture{"c a", 1, "a c"},
                           Fixture{"c b a", 5, "a b"}}) {
    auto [g, led] = heis_eval_with_ledger(g1.parse(f.word));
    CAPTURE(f.word);
    CHECK(led.steps.size() == f.steps);
    CHECK(led.end == g1.parse(f.end));
    CHECK(verify_ledger(led, g1));
    CHECK(g == heis_eval(g1.parse(f.word)));
  }

  // The commutator family takes exactly 2n^3 + n^2 steps: n^2 created
  // c-letters travel O(n) cells each, plus the n^2 exchanges themselves.
  // (n = 1 is the relator itself and short-circuits to one deletion.)
  for (int n : {2, 3, 5, 8, 12}) {
    auto [g, led] = heis_eval_with_ledger(commutator_family(n));
    CAPTURE(n);
    CHECK(led.steps.size() == size_t(2L * n * n * n + long(n) * n));
    CHECK(led.end.empty());
    CHECK(verify_ledger(led, g1));
  }

  std::mt19937_64 rng(20);
  std::uniform_int_distribution<int> len(0, 30);
  for (int i = 0; i < 2000; ++i) {
    int n = len(rng);
    Word w = testutil::random_word(rng, 3, n);
    auto [g, led] = heis_eval_with_ledger(w);
    REQUIRE(verify_ledger(led, g1));
    REQUIRE(led.steps.size() <= size_t(2L * n * n * n));
    REQUIRE(led.end == m->element_to_word(Element{g}));
  }
}

TEST_CASE("built-in model registry") {
  for (const char* name : {"G1", "G2", "BS12", "G3", "G5:d=3", "G5:d=7", "G6:m=2", "G7", "G8"})
    CHECK(has_builtin_model(name));
  for (const char* name : {"G4", "A", "B", "C", "E", "L", "G9", ""})
    CHECK_FALSE(has_builtin_model(name));
  CHECK_THROWS_AS(builtin_model("G4"), ParseError);

  // Where both a presentation and a model exist, the alphabets agree, so
  // parsed words mean the same thing on both sides.
  for (const char* name : {"G1", "BS12", "G3", "G5:d=3", "G6:m=2"})
    CHECK(builtin_model(name)->alphabet().names == builtin_presentation(name).alphabet.names);

  CHECK(builtin_model("G8")->alphabet().size() == 5 + 42);
}
