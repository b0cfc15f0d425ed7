#pragma once

#include <fillfn/models.hpp>
#include <fillfn/presentation.hpp>
#include <fillfn/word.hpp>

#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace fillfn {

// Conjugation convention, artifact-wide: w conjugates u to v when
// w u w^-1 = v.  Solvers that are naturally stated the other way round
// translate at their boundary and say so next to their declaration.

// Transportable witness that u and v are conjugate.  The optional ledger
// derives w u w^-1 v^-1 to the empty word one relator application at a
// time, making the certificate checkable without any group theory.
struct ConjugacyCertificate {
  Word u, v, w;
  std::optional<AreaLedger> ledger;
};

// True iff trivial(w u w^-1 v^-1), and, when a ledger is attached, the
// ledger replays from that word to the empty word.  Solvers call this at
// construction time and throw std::logic_error if their own output fails.
bool certificate_valid(const ConjugacyCertificate& c,
                       const std::function<bool(const Word&)>& trivial,
                       const Presentation* ledger_presentation = nullptr);

enum class ConjStatus { Conjugate, NotConjugate, NotFoundWithin };

// Solves alpha*y + beta*x = gamma over the integers.  When
// |gamma| <= max(|alpha|, |beta|) the solution satisfies
// |x|, |y| <= max(|alpha|, |beta|); larger gamma is first reduced by
// shifting y in steps of alpha (or x in steps of beta when alpha = 0).
// nullopt iff gcd(alpha, beta) does not divide gamma.  Requires alpha,
// beta not both zero.
std::optional<std::pair<long, long>> bezout_bounded(long alpha, long beta, long gamma);

// Constructive conjugacy in the Heisenberg group.  For conjugate u, v
// with n = |u| + |v| the certificate conjugator spells a^x b^y — in the
// a/b-swapped spelling b^x a^y when |alpha| < |beta|, via the
// automorphism a <-> b, c -> c^-1 — with |x| <= n and |y| <= 2n^2.
struct HeisConjugacyResult {
  ConjStatus status = ConjStatus::NotConjugate;
  std::optional<ConjugacyCertificate> cert;
  long x = 0, y = 0;
  bool swapped = false;
};
// with_ledger additionally derives w u w^-1 v^-1 to the empty word by the
// cubic shuffling schedule (costs O(|probe|^3) steps; off by default).
HeisConjugacyResult heis_conjugator(const Word& u, const Word& v, bool with_ledger = false);

// Coefficient of the s-power conjugator for corridor-form words in
// B = <a,d,s | asa^-1 s^-2, dsd^-1 s^-2>: u = s^chi_1 e_1 ... s^chi_m e_m
// and v = s^xi_1 e_1 ... s^xi_m e_m with each e_i in {a,d}^+-1 share the
// stable-letter skeleton, and s^-k u s^k = v forces
// k = (1/(1-2^mu)) * sum_i 2^(mu_i) (chi_i - xi_i), where mu_i is the
// exponent sum of e_1..e_(i-1) and mu the total.  Degenerate when mu = 0
// (k is then not determined by this formula); NotConjugate when the
// formula's k is not an integer.  Note the k convention: the artifact
// conjugator is w = s^-k.
struct BCorridorResult {
  ConjStatus status = ConjStatus::NotConjugate;
  bool degenerate = false;
  mpz_class k;
};
BCorridorResult b_coefficient_conjugator(const std::vector<long>& chis,
                                         const std::vector<long>& xis, const Word& es);
// The corridor word s^chi_1 e_1 ... s^chi_m e_m over B's alphabet.
Word b_corridor_word(const std::vector<long>& exponents, const Word& es);

// Certificate for (u1 u2, v1 v2) with conjugator w1 w2, for a direct
// product presentation laid out as [factor1 relators][factor2 relators,
// generators shifted past factor1's][commutation relators].  Both inputs
// must carry ledgers (throws std::invalid_argument otherwise); the output
// ledger sorts the two factors apart with one commutation relator per
// transposition and then replays the factor ledgers, so its step count is
// at most cost1 + cost2 + (factor-1 letters)*(factor-2 letters) of the
// conjugation word.
ConjugacyCertificate direct_product_conjugator(const ConjugacyCertificate& c1,
                                               const ConjugacyCertificate& c2,
                                               const Presentation& product,
                                               const Presentation& factor1,
                                               const Presentation& factor2);

// Conjugacy in a free product via cyclic syllable rotation: elements are
// put in reduced syllable form, cyclically reduced by syllable
// conjugation, and compared across rotations; single syllables defer to
// the factor solvers.  A factor solver returns its status plus, when
// Conjugate, a conjugator word over the factor's own alphabet.
struct FactorConjugacy {
  ConjStatus status = ConjStatus::NotConjugate;
  Word w;
};
using FactorSolver = std::function<FactorConjugacy(const Word&, const Word&)>;

struct FreeConjugacyResult {
  ConjStatus status = ConjStatus::NotConjugate;
  std::optional<ConjugacyCertificate> cert;
};
FreeConjugacyResult free_product_conjugacy(const Word& u, const Word& v, const ModelPtr& left,
                                           const ModelPtr& right, const FactorSolver& solve_left,
                                           const FactorSolver& solve_right);
// Factor solver backed by cl_bfs on a model.
FactorSolver bfs_factor_solver(ModelPtr model, int radius);

// Exact shortest conjugator by breadth-first search over the element
// ball of the model's Cayley graph, deduplicated by canonical key.
// Returns the minimal |w| <= radius with w u w^-1 = v and the
// lexicographically least such w; found = false means no conjugator of
// length <= radius exists, which is not a proof of non-conjugacy.
struct ClBfsResult {
  bool found = false;
  long length = -1;
  Word w;
};
ClBfsResult cl_bfs(const GroupModel& model, const Word& u, const Word& v, int radius);

// Bounded conjugator search in G4: freely reduced candidate words are
// enumerated by length then lex, kept only when their Heisenberg and D1
// retracts conjugate the retracts of u to those of v in the coordinate
// models (a necessary condition, so no true conjugator is pruned), and
// confirmed with g4_is_identity.  Exhaustive within max_len: found =
// false means no conjugator word of length <= max_len exists.
struct G4SearchResult {
  bool found = false;
  std::optional<ConjugacyCertificate> cert;
};
G4SearchResult g4_conjugator_search(const Word& u, const Word& v, int max_len);

}  // namespace fillfn
