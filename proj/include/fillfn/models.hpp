#pragma once

#include <fillfn/presentation.hpp>
#include <fillfn/word.hpp>

#include <gmpxx.h>

#include <array>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace fillfn {

// Exact normal-form models of the groups whose word problems the search
// routines need answered instantly.  Each model evaluates words into a
// coordinate type with an exact group law; evaluation is a monoid
// homomorphism respecting inverses, and canonical_key is injective on
// elements, so key equality decides the word problem.

// Integer Heisenberg coordinates: the element a^alpha b^beta c^gamma,
// with [a,b] = c central.  (a1,b1,g1)(a2,b2,g2) =
// (a1+a2, b1+b2, g1+g2-a2*b1).
struct HeisElement {
  mpz_class alpha, beta, gamma;
  bool operator==(const HeisElement&) const = default;
};

// BS(1,2) as dyadic affine maps x -> 2^k x + q; a doubles, s adds 1.
// q = num / 2^den2 in lowest terms: den2 >= 0, and num is odd whenever
// den2 > 0 (num = 0 forces den2 = 0).
struct Bs12Element {
  long k = 0;
  mpz_class num;
  long den2 = 0;
  bool operator==(const Bs12Element&) const = default;
};

// Filiform nilpotent coordinates (v, m) = a^v t^m where t acts by
// phi(e_i) = e_i + e_{i-1}, phi(e_1) = e_1:
// (v1,m1)(v2,m2) = (v1 + phi^m1(v2), m1+m2).
struct FiliformElement {
  std::vector<mpz_class> v;
  long m = 0;
  bool operator==(const FiliformElement&) const = default;
};

// Central extension Z^m x Z^2 by Z^m: coordinates (x, y, z) = a^x b^y c^z
// with [b1,a_i] = c_i and [b2,a_i] = c_{i+1}^-1 (i < m), [b2,a_m] = 1.
// (x,y,z)(x',y',z') = (x+x', y+y', z+z'+B(y,x')) where B(y,x')_1 = y1*x'_1
// and B(y,x')_j = y1*x'_j - y2*x'_{j-1}.
struct CentralExtElement {
  std::vector<mpz_class> x;
  std::array<mpz_class, 2> y;
  std::vector<mpz_class> z;
  bool operator==(const CentralExtElement&) const = default;
};

struct Element;

// Direct product: one coordinate per factor.
struct DirectElement {
  std::vector<Element> parts;
  bool operator==(const DirectElement&) const;
};

// Free product in reduced syllable form: syllable i lies in factor
// (first + i) % 2, no syllable is the identity, factors alternate.
// The empty sequence (with first = 0) is the identity.
struct FreeElement {
  int first = 0;
  std::vector<Element> syllables;
  bool operator==(const FreeElement&) const;
};

struct Element {
  std::variant<HeisElement, Bs12Element, FiliformElement, CentralExtElement, DirectElement,
               FreeElement>
      v;
  bool operator==(const Element&) const;
};

// Direct coordinate evaluators for words over each group's own alphabet.
HeisElement heis_eval(const Word& w);                 // a, b, c
Bs12Element bs12_eval(const Word& w);                 // a, s
FiliformElement filiform_eval(const Word& w, int d);  // a1..ad, t
CentralExtElement g6m_eval(const Word& w, int m);     // a1..am, b1, b2, c1..cm

// Coordinate arithmetic, shared with the amalgam and conjugacy machinery.
HeisElement heis_mul(const HeisElement& g, const HeisElement& h);
HeisElement heis_inv(const HeisElement& g);
Bs12Element bs12_mul(const Bs12Element& g, const Bs12Element& h);
Bs12Element bs12_inv(const Bs12Element& g);

// Normal form together with a replayable derivation from w to the word
// a^alpha b^beta c^gamma, applying one defining relation per step; the
// step count follows the cubic shuffling schedule (<= 2|w|^3).
std::pair<HeisElement, AreaLedger> heis_eval_with_ledger(const Word& w);

class GroupModel {
 public:
  virtual ~GroupModel() = default;
  virtual const Alphabet& alphabet() const = 0;
  virtual Element identity() const = 0;
  virtual Element eval_word(const Word& w) const = 0;
  virtual Element multiply(const Element& g, const Element& h) const = 0;
  virtual Element inverse(const Element& g) const = 0;
  // Canonical normal-form word (not geodesic); eval_word inverts it.
  virtual Word element_to_word(const Element& g) const = 0;
  // Injective printable key; equal keys <=> equal elements.
  virtual std::string canonical_key(const Element& g) const = 0;

  bool is_identity(const Element& g) const { return g == identity(); }
  bool word_is_identity(const Word& w) const { return is_identity(eval_word(w)); }
};

using ModelPtr = std::shared_ptr<const GroupModel>;

ModelPtr heis_model();
ModelPtr bs12_model();
ModelPtr filiform_model(int d);
ModelPtr g6m_model(int m);

// Left-factor names survive; clashing right-factor names gain primes.
Alphabet merge_alphabets(const Alphabet& left, const Alphabet& right);

ModelPtr direct_product_model(ModelPtr left, ModelPtr right);
ModelPtr direct_product_model(ModelPtr left, ModelPtr right, Alphabet alphabet);
ModelPtr free_product_model(ModelPtr left, ModelPtr right);
ModelPtr free_product_model(ModelPtr left, ModelPtr right, Alphabet alphabet);

enum class ProductKind { Direct, Free };
Element product_eval(const Word& w, const ModelPtr& left, const ModelPtr& right, ProductKind kind);

// Models for the built-in groups that admit one: G1, G2/BS12, G3,
// G5:d=N, G6:m=N, G7, G8.
ModelPtr builtin_model(const std::string& name);
bool has_builtin_model(const std::string& name);

}  // namespace fillfn
