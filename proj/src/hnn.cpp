#include <fillfn/hnn.hpp>

#include <fillfn/models.hpp>
#include <fillfn/stallings.hpp>

#include <array>
#include <cstdlib>
#include <limits>
#include <map>

namespace fillfn {

namespace {

// Letter indices in the built-in alphabets.
// E = {a, c, d, s}
constexpr int EA = 0, EC = 1, ED = 2, ES = 3;
// G4 = {a, b, c, d, s}; A shares the first four.
constexpr int GA = 0, GB = 1, GC = 2, GD = 3, GS = 4;
// L = {b, c, s}
constexpr int LB = 0, LC = 1, LS = 2;

Word keep_letters(const Word& w, unsigned keep_mask) {
  Word out;
  for (Letter l : w)
    if (keep_mask & (1u << letter_gen(l))) out.push_back(l);
  return out;
}

Word g4_to_e(const Word& w) {
  static const std::array<int, 5> table{EA, -1, EC, ED, ES};
  Word out;
  out.reserve(w.size());
  for (Letter l : w) out.push_back(make_letter(table[size_t(letter_gen(l))], letter_is_inverse(l)));
  return out;
}

// <c, s^2> <= F(c,s), folded once; graph letters are c -> 0, s -> 1.
const SubgroupGraph& cs2_graph() {
  static const SubgroupGraph g(
      {Word{make_letter(0, false)}, Word{make_letter(1, false), make_letter(1, false)}}, 2);
  return g;
}

bool in_cs2(const Word& u) {
  Word mapped;
  mapped.reserve(u.size());
  for (Letter l : u) mapped.push_back(make_letter(letter_gen(l) == EC ? 0 : 1, letter_is_inverse(l)));
  return cs2_graph().membership(mapped);
}

// s-power recognition on E base words: returns false unless the free
// reduction is a (possibly empty) power of s; then *exponent is signed.
bool s_power(const Word& u, long* exponent) {
  Word r = free_reduce(u);
  for (Letter l : r)
    if (letter_gen(l) != ES) return false;
  *exponent = r.empty() ? 0 : (letter_is_inverse(r[0]) ? -long(r.size()) : long(r.size()));
  return true;
}

Word double_s(const Word& u) {
  Word out;
  out.reserve(2 * u.size());
  for (Letter l : u) {
    out.push_back(l);
    if (letter_gen(l) == ES) out.push_back(l);
  }
  return out;
}

Word halve_s_runs(const Word& u0) {
  Word u = free_reduce(u0), out;
  size_t i = 0;
  while (i < u.size()) {
    if (letter_gen(u[i]) != ES) {
      out.push_back(u[i++]);
      continue;
    }
    size_t j = i;
    while (j < u.size() && u[j] == u[i]) ++j;
    if ((j - i) % 2) throw MalformedPinch("odd s-run accepted as a <c,s^2> member");
    out.append((j - i) / 2, u[i]);
    i = j;
  }
  return out;
}

// b x b^-1 on {a,c,d} letters: a -> c^-1 a; the inverse map for back.
Word twist_acd(const Word& u, bool back) {
  Word out;
  for (Letter l : u) {
    if (letter_gen(l) != GA) {
      out.push_back(l);
      continue;
    }
    Letter c = make_letter(GC, back == letter_is_inverse(l));
    if (letter_is_inverse(l)) {
      out.push_back(l);
      out.push_back(c);
    } else {
      out.push_back(c);
      out.push_back(l);
    }
  }
  return out;
}

// Free product of two abelian blocks: trivial iff the syllable stack
// cancels out.  block(gen) selects the side.
template <typename BlockOf>
bool abelian_blocks_trivial(const Word& w, BlockOf block) {
  struct Syll {
    int blk;
    std::map<int, long> exp;
  };
  std::vector<Syll> st;
  for (Letter l : w) {
    int g = letter_gen(l), b = block(g);
    if (st.empty() || st.back().blk != b) st.push_back({b, {}});
    long& e = st.back().exp[g];
    e += letter_is_inverse(l) ? -1 : 1;
    if (e == 0) st.back().exp.erase(g);
    if (st.back().exp.empty()) st.pop_back();
  }
  return st.empty();
}

}  // namespace

const StableLetter* HnnSpec::find(Letter l) const {
  for (const StableLetter& t : stable)
    if (t.gen == letter_gen(l)) return &t;
  return nullptr;
}

Word BrittonWord::join() const {
  Word out = base.at(0);
  for (size_t i = 0; i < letters.size(); ++i) {
    out.push_back(letters[i]);
    out += base.at(i + 1);
  }
  return out;
}

BrittonWord britton_split(const Word& w, const HnnSpec& spec) {
  BrittonWord out;
  out.base.emplace_back();
  for (Letter l : w) {
    if (spec.find(l)) {
      out.letters.push_back(l);
      out.base.emplace_back();
    } else {
      out.base.back().push_back(l);
    }
  }
  return out;
}

BrittonWord britton_reduce(BrittonWord w, const HnnSpec& spec) {
  size_t i = 0;
  while (i + 1 < w.letters.size()) {
    Letter x = w.letters[i];
    if (w.letters[i + 1] != letter_inv(x)) {
      ++i;
      continue;
    }
    const StableLetter* t = spec.find(x);
    const Word& u = w.base[i + 1];
    bool positive = !letter_is_inverse(x);
    if (positive ? !t->in_domain(u) : !t->in_image(u)) {
      ++i;
      continue;
    }
    Word image = positive ? t->forward(u) : t->backward(u);
    w.base[i] += image;
    w.base[i] += w.base[i + 2];
    w.base.erase(w.base.begin() + long(i) + 1, w.base.begin() + long(i) + 3);
    w.letters.erase(w.letters.begin() + long(i), w.letters.begin() + long(i) + 2);
    if (i > 0) --i;
  }
  return w;
}

const HnnSpec& e_hnn_spec() {
  static const HnnSpec spec = [] {
    HnnSpec s;
    s.alphabet = builtin_presentation("E").alphabet;
    s.base_is_identity = [](const Word& u) { return free_reduce(u).empty(); };

    StableLetter a;
    a.gen = EA;
    a.in_domain = [](const Word&) { return true; };
    a.in_image = [](const Word& u) { return in_cs2(free_reduce(u)); };
    a.forward = [](const Word& u) { return double_s(u); };
    a.backward = [](const Word& u) { return halve_s_runs(u); };

    StableLetter d;
    d.gen = ED;
    d.in_domain = [](const Word& u) {
      long k;
      return s_power(u, &k);
    };
    d.in_image = [](const Word& u) {
      long k;
      return s_power(u, &k) && k % 2 == 0;
    };
    d.forward = [](const Word& u) {
      long k;
      if (!s_power(u, &k)) throw MalformedPinch("d-pinch interior is not a power of s");
      return double_s(free_reduce(u));
    };
    d.backward = [](const Word& u) {
      long k;
      if (!s_power(u, &k) || k % 2) throw MalformedPinch("d-pinch interior is not an even power of s");
      return halve_s_runs(u);
    };

    s.stable = {a, d};
    return s;
  }();
  return spec;
}

bool e_is_identity(const Word& w) {
  const HnnSpec& spec = e_hnn_spec();
  BrittonWord r = britton_reduce(britton_split(free_reduce(w), spec), spec);
  return r.letters.empty() && spec.base_is_identity(r.join());
}

const HnnSpec& g4_hnn_spec() {
  static const HnnSpec spec = [] {
    HnnSpec s;
    s.alphabet = builtin_presentation("G4").alphabet;
    s.base_is_identity = [](const Word& u) { return e_is_identity(g4_to_e(u)); };

    // g in K = <a,c,d> iff killing s fixes g in E (killing s retracts E
    // onto K), so the s-free candidate doubles as the rewrite input.
    auto in_k = [](const Word& u) {
      Word sigma = keep_letters(u, (1u << GA) | (1u << GC) | (1u << GD));
      return e_is_identity(g4_to_e(u + inverse(sigma)));
    };

    StableLetter b;
    b.gen = GB;
    b.in_domain = in_k;
    b.in_image = in_k;
    b.forward = [](const Word& u) {
      return twist_acd(keep_letters(u, (1u << GA) | (1u << GC) | (1u << GD)), false);
    };
    b.backward = [](const Word& u) {
      return twist_acd(keep_letters(u, (1u << GA) | (1u << GC) | (1u << GD)), true);
    };
    s.stable = {b};
    return s;
  }();
  return spec;
}

bool g4_is_identity(const Word& w) {
  const HnnSpec& spec = g4_hnn_spec();
  BrittonWord r = britton_reduce(britton_split(free_reduce(w), spec), spec);
  return r.letters.empty() && spec.base_is_identity(r.join());
}

const HnnSpec& a_hnn_spec() {
  static const HnnSpec spec = [] {
    HnnSpec s;
    s.alphabet = builtin_presentation("A").alphabet;
    s.base_is_identity = k_is_identity;

    StableLetter b;
    b.gen = GB;
    b.in_domain = [](const Word&) { return true; };
    b.in_image = [](const Word&) { return true; };
    b.forward = [](const Word& u) { return twist_acd(u, false); };
    b.backward = [](const Word& u) { return twist_acd(u, true); };
    s.stable = {b};
    return s;
  }();
  return spec;
}

bool a_is_identity(const Word& w) {
  const HnnSpec& spec = a_hnn_spec();
  BrittonWord r = britton_reduce(britton_split(free_reduce(w), spec), spec);
  return r.letters.empty() && spec.base_is_identity(r.join());
}

bool k_is_identity(const Word& w) {
  return abelian_blocks_trivial(w, [](int g) { return g == GD ? 1 : 0; });
}

bool l_is_identity(const Word& w) {
  return abelian_blocks_trivial(w, [](int g) { return g == LS ? 1 : 0; });
}

bool b_is_identity(const Word& w) {
  // Amalgam of D1 = <a,s> and D2 = <d,s> along <s>: the syllable stack
  // keeps non-<s> syllables in alternating factors, so by the normal
  // form theorem the word is trivial iff the stack empties.
  struct Syll {
    int f;
    Bs12Element e;
  };
  auto in_s = [](const Bs12Element& e) { return e.k == 0 && e.den2 == 0; };
  auto ident = [](const Bs12Element& e) { return e.k == 0 && e.num == 0; };
  std::vector<Syll> st;
  auto push = [&](int f, Bs12Element e) {
    while (true) {
      if (ident(e)) return;
      if (st.empty()) {
        st.push_back({f, std::move(e)});
        return;
      }
      Syll& t = st.back();
      if (t.f != f && !in_s(e) && !in_s(t.e)) {
        st.push_back({f, std::move(e)});
        return;
      }
      f = t.f == f ? f : (in_s(e) ? t.f : f);
      e = bs12_mul(t.e, e);
      st.pop_back();
    }
  };
  for (Letter l : w) {
    long sign = letter_is_inverse(l) ? -1 : 1;
    switch (letter_gen(l)) {
      case 0: push(1, Bs12Element{sign, 0, 0}); break;  // a
      case 1: push(2, Bs12Element{sign, 0, 0}); break;  // d
      default: push(1, Bs12Element{0, sign, 0}); break;  // s, factor tag unused
    }
  }
  return st.empty();
}

LNormalForm l_normal_form(const Word& w) {
  struct Syll {
    bool is_s;
    std::array<long, 3> exp{};
  };
  std::vector<Syll> st;
  for (Letter l : w) {
    int g = letter_gen(l);
    bool is_s = g == LS;
    if (st.empty() || st.back().is_s != is_s) st.push_back({is_s, {}});
    st.back().exp[size_t(g)] += letter_is_inverse(l) ? -1 : 1;
    if (st.back().exp == std::array<long, 3>{}) st.pop_back();
  }
  LNormalForm out;
  out.bc.emplace_back(0, 0);
  for (const Syll& y : st) {
    if (y.is_s) {
      out.mu.push_back(y.exp[LS]);
      out.bc.emplace_back(0, 0);
    } else {
      out.bc.back() = {y.exp[LB], y.exp[LC]};
    }
  }
  return out;
}

Word LNormalForm::to_word() const {
  auto run = [](Word& w, int gen, long e) {
    w.append(size_t(std::labs(e)), make_letter(gen, e < 0));
  };
  Word out;
  for (size_t i = 0; i < bc.size(); ++i) {
    run(out, LB, bc[i].first);
    run(out, LC, bc[i].second);
    if (i < mu.size()) run(out, LS, mu[i]);
  }
  return out;
}

Word retract(const Word& w, Retraction which) {
  Word out;
  for (Letter l : w) {
    int g = letter_gen(l);
    bool inv = letter_is_inverse(l);
    switch (which) {
      case Retraction::Heis:
        if (g == GD || g == GS) continue;
        break;
      case Retraction::A:
        if (g == GS) continue;
        break;
      case Retraction::B:
        if (g == GB || g == GC) continue;
        break;
      case Retraction::D1:
        if (g == GB || g == GC) continue;
        if (g == GD) {
          out.push_back(make_letter(GA, inv));
          continue;
        }
        break;
    }
    out.push_back(l);
  }
  return out;
}

std::optional<Word> acd_representative(const Word& w) {
  const HnnSpec& spec = g4_hnn_spec();
  BrittonWord r = britton_reduce(britton_split(free_reduce(w), spec), spec);
  if (!r.letters.empty()) return std::nullopt;
  Word u = r.join();
  Word sigma = keep_letters(u, (1u << GA) | (1u << GC) | (1u << GD));
  if (!e_is_identity(g4_to_e(u + inverse(sigma)))) return std::nullopt;
  return free_reduce(sigma);
}

// --- constructive E reduction ------------------------------------------------

namespace {

struct CrossRule {
  int relator = -1, rotation = 0, sign = 1;
};

// Every Britton crossing in E is one relation: a stable letter moves
// right past one base letter (s-letters double or halve as they cross).
// Rules are recovered by replaying candidates against apply_relator.
struct CrossTable {
  Presentation e = builtin_presentation("E");
  CrossRule rule[8][8];

  CrossTable() {
    auto lt = [](int gen, bool inv) { return make_letter(gen, inv); };
    struct Fix {
      Word fixture, target;
    };
    std::vector<Fix> fixes;
    for (bool ai : {false, true})
      for (bool ci : {false, true})
        fixes.push_back({Word{lt(EA, ai), lt(EC, ci)}, Word{lt(EC, ci), lt(EA, ai)}});
    for (int g : {EA, ED})
      for (bool si : {false, true}) {
        fixes.push_back(
            {Word{lt(g, false), lt(ES, si)}, Word{lt(ES, si), lt(ES, si), lt(g, false)}});
        fixes.push_back(
            {Word{lt(g, true), lt(ES, si), lt(ES, si)}, Word{lt(ES, si), lt(g, true)}});
      }
    for (const Fix& f : fixes) {
      CrossRule& r = rule[int(f.fixture[0])][int(f.fixture[1])];
      for (int rel = 0; rel < 3 && r.relator < 0; ++rel)
        for (int sign : {1, -1})
          for (int rot = 0; rot < int(e.relators[size_t(rel)].size()); ++rot) {
            DerivationStep s{0, rel, rot, sign};
            if (apply_relator(f.fixture, s, e) == f.target) {
              r = {rel, rot, sign};
              break;
            }
          }
      if (r.relator < 0) throw std::logic_error("no one-relation crossing found");
    }
  }
};

const CrossTable& cross_table() {
  static const CrossTable t;
  return t;
}

bool e_stable_gen(Letter l) { return letter_gen(l) == EA || letter_gen(l) == ED; }

// Leftmost legal pinch in a freely reduced E-word: position of the
// opening stable letter, or npos.
size_t find_legal_pinch(const Word& w) {
  size_t prev = Word::npos;
  for (size_t i = 0; i < w.size(); ++i) {
    if (!e_stable_gen(w[i])) continue;
    if (prev != Word::npos && w[i] == letter_inv(w[prev])) {
      Word u = w.substr(prev + 1, i - prev - 1);
      bool legal = false;
      long k = 0;
      if (letter_gen(w[prev]) == EA)
        legal = letter_is_inverse(w[prev]) ? in_cs2(u) : true;
      else
        legal = s_power(u, &k) && (letter_is_inverse(w[prev]) ? k % 2 == 0 : true);
      if (legal) return prev;
    }
    prev = i;
  }
  return Word::npos;
}

}  // namespace

AreaLedger e_reduce_with_ledger(const Word& w) {
  const CrossTable& t = cross_table();
  LedgerBuilder lb(t.e, w);
  long expn = letter_count(lb.current, EA) + letter_count(lb.current, ED);
  long cap = expn >= 40
                 ? std::numeric_limits<long>::max()
                 : (letter_count(lb.current, EC) + letter_count(lb.current, ES)) * (1L << expn);
  for (size_t p; (p = find_legal_pinch(lb.current)) != Word::npos;) {
    const CrossRule& r = t.rule[int(lb.current[p])][int(lb.current[p + 1])];
    if (r.relator < 0) throw std::logic_error("missing crossing rule");
    lb.apply(DerivationStep{int(p), r.relator, r.rotation, r.sign});
    if (long(lb.ledger.steps.size()) > cap)
      throw std::logic_error("crossing count exceeded the pinch bound");
  }
  return lb.finish();
}

}  // namespace fillfn
