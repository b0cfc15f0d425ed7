#pragma once

#include <fillfn/presentation.hpp>
#include <fillfn/word.hpp>

#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fillfn {

// A membership oracle accepted a pinch interior that the rewrite then
// could not carry across: the tower description is inconsistent.
struct MalformedPinch : std::logic_error {
  using std::logic_error::logic_error;
};

// One stable letter t of an HNN extension: t w t^-1 = forward(w) for w in
// the domain subgroup of the base, t^-1 w t = backward(w) for w in the
// image subgroup.
struct StableLetter {
  int gen;
  std::function<bool(const Word&)> in_domain;
  std::function<bool(const Word&)> in_image;
  std::function<Word(const Word&)> forward;
  std::function<Word(const Word&)> backward;
};

struct HnnSpec {
  Alphabet alphabet;
  // Word problem of the base group, on stable-letter-free words.
  std::function<bool(const Word&)> base_is_identity;
  std::vector<StableLetter> stable;

  const StableLetter* find(Letter l) const;
};

// Alternating form base[0] letters[0] base[1] ... letters[k-1] base[k];
// britton_reduce leaves no pinch t^e u t^-e with u in the associated
// subgroup, so by Britton's lemma surviving stable letters certify
// nontriviality.
struct BrittonWord {
  std::vector<Word> base;
  std::vector<Letter> letters;

  Word join() const;
  bool operator==(const BrittonWord&) const = default;
};

BrittonWord britton_split(const Word& w, const HnnSpec& spec);
BrittonWord britton_reduce(BrittonWord w, const HnnSpec& spec);

// E = <a,c,d,s | [a,c], asa^-1 s^-2, dsd^-1 s^-2>: base F(c,s), stable
// letters a (s -> s^2 fixing c; image <c,s^2>) and d (s -> s^2; domain
// <s>, image <s^2>).
const HnnSpec& e_hnn_spec();
// G4 over base E with stable letter b acting on K = <a,c,d> by
// a -> c^-1 a, fixing c and d.
const HnnSpec& g4_hnn_spec();
// A = <a,b,c,d | [a,b]c^-1, [a,c], [b,c], [b,d]> over base K with the
// same stable-letter action; every pinch is legal.
const HnnSpec& a_hnn_spec();

// Word problems.  Each takes words over its own group's alphabet
// (e_is_identity over E's, g4 over G4's, a over A's, b over B's,
// l over L's, k over {a,c,d} with the A/G4 letter indices).
bool e_is_identity(const Word& w);
bool g4_is_identity(const Word& w);
bool a_is_identity(const Word& w);
bool b_is_identity(const Word& w);
bool l_is_identity(const Word& w);
bool k_is_identity(const Word& w);

// Britton reduction of an E-word as a replayable derivation; end is the
// reduced word (empty iff trivial).  Step count is bounded by
// (|w|_c + |w|_s) * 2^(|w|_a + |w|_d).
AreaLedger e_reduce_with_ledger(const Word& w);

// Normal form of an element of L = Z^2 * Z presented by a word over
// {b,c,s}: b^beta0 c^gamma0 s^mu1 b^beta1 c^gamma1 ... s^muk b^betak c^gammak,
// interior syllables nonzero.
struct LNormalForm {
  std::vector<std::pair<long, long>> bc;  // (beta_i, gamma_i), mu.size()+1 entries
  std::vector<long> mu;

  Word to_word() const;
};
LNormalForm l_normal_form(const Word& w);

// Retractions of G4 onto named subgroups, as maps on words over G4's
// alphabet: Heis kills d and s; D1 kills b and c and renames d to a;
// A kills s; B kills b and c.
enum class Retraction { Heis, D1, A, B };
Word retract(const Word& w, Retraction which);

// s- and b-free word over {a,c,d} equal to w in G4, or nullopt when the
// element lies outside <a,c,d>.  For |w| = n the result sigma satisfies
// |sigma|_a + |sigma|_d <= n and |sigma|_c <= 3n^2.
std::optional<Word> acd_representative(const Word& w);

}  // namespace fillfn
