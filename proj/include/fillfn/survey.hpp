#pragma once

#include <fillfn/area.hpp>
#include <fillfn/models.hpp>
#include <fillfn/presentation.hpp>
#include <fillfn/word.hpp>

#include <gmpxx.h>

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fillfn {

// A group packaged for surveying: a finite presentation for filling areas,
// a word-problem decider, and optionally an element model (canonical keys
// for ball/orbit enumeration) plus a total conjugacy oracle.
struct GroupContext {
  std::string name;
  std::optional<Presentation> pres;  // required by area/ann surveys
  ModelPtr model;                    // required by cl surveys; may be null
  std::function<bool(const Word&)> trivial;
  // Conjugacy oracle on words; nullopt result = undecided (rows get flagged).
  // A null function leaves every pair the ball search cannot reach undecided.
  std::function<std::optional<bool>(const Word&, const Word&)> conjugate_oracle;
};

// Contexts by group name: G1, G2/BS12, G3, G4, A, B, C, E, L, G5:d=<d>,
// G6:m=<m>, G7, G8.  Throws std::invalid_argument for unknown names.
GroupContext group_context(const std::string& name);

enum class RowKind { Exact, Upper, Lower, Unknown };
const char* row_kind_name(RowKind k);

// One measured value of a growth function at argument n.  The true value
// equals `value` for Exact rows, lies in [lower_bound, value] for Upper
// rows, and is at least `value` for Lower rows.
struct GrowthRow {
  int n = 0;
  mpz_class value;
  RowKind kind = RowKind::Exact;
  mpz_class lower_bound;
};

struct GrowthTable {
  std::string group;
  std::string function;         // "area", "cl", or "ann"
  std::vector<GrowthRow> rows;  // one row per n in [0, n_max], sorted by n
  long budget_nodes = 0;
  int radius = 0;
  unsigned long seed = 0;
};

// CSV/TSV with header group,function,n,value,kind,budget_nodes,radius,seed;
// values are decimal integers.
std::string table_to_csv(const GrowthTable& t);
std::string table_to_tsv(const GrowthTable& t);
// Two-column "n value" lines restricted to rows of one kind.
std::string table_to_plot(const GrowthTable& t, RowKind kind);

// Dehn function column: for each n <= n_max the maximum of exact_area over
// null-homotopic words of length <= n, enumerated as cyclically reduced
// words up to rotation and inversion (area is invariant under both).
// Budget-limited cells degrade the row kind instead of being dropped.
GrowthTable survey_area(const GroupContext& g, int n_max, const SearchBudget& budget = {});

// Conjugator length column: for each n <= n_max the maximum over conjugate
// pairs with |u| + |v| <= n of the minimal conjugator length.  Ground truth
// comes from conjugation-orbit search over the element ball (exact minimal
// depths) plus the context's conjugacy oracle for pairs the orbit search
// does not reach; rows with undecided pairs are flagged Lower, never
// dropped.  Requires g.model.
GrowthTable survey_cl(const GroupContext& g, int n_max, const std::function<int(int)>& radius_fn);

// Annular column: for each n <= n_max the maximum of exact_ann over
// conjugate word pairs |u| + |v| <= n (cyclically reduced, up to rotation).
// Each pair contributes an interval [combinatorial lower bound, searched
// minimum]; a row is Exact when the interval collapses, Upper when the
// radius caveat is undischarged, Lower when some pair stayed unresolved.
// Requires g.pres and g.model.
GrowthTable survey_ann(const GroupContext& g, int n_max, int conj_radius,
                       const SearchBudget& budget = {});

// Conjugate pair b ~ b [a^n, b^n] in the integral Heisenberg group with
// conjugator a^{n^2}, verified on the model at construction.  companion_v
// spells the same element as v in the form b c^{n^2}; companion_ledger
// derives v * companion_v^-1 to the empty word (cubically many steps).
struct HeisWitness {
  Word u, v, w;  // w u w^-1 = v
  Word companion_v;
  AreaLedger companion_ledger;
};
HeisWitness heis_witness(int n);  // n >= 1

// Conjugate pair b^-1 c^{n^2} s ~ b^-1 s in the rank-5 amalgam with
// conjugator w = d^{-n^2} a^{n^2}.  chain holds five spellings of the same
// element leading from u * w^-1 to w^-1 * v; construction verifies each
// consecutive quotient with the amalgam's word-problem decider.
struct G4Witness {
  Word u, v, w;  // w u w^-1 = v
  std::vector<Word> chain;
};
G4Witness g4_witness(int n);  // n >= 1

// The word a^n s a^-n s^{-2^n} (trivial in BS(1,2)) together with the
// doubling-tree derivation to the empty word in exactly 2^n - 1 steps.
struct Bs12Witness {
  Word w;
  AreaLedger ledger;
};
Bs12Witness bs12_witness(int n);  // 1 <= n <= 20

// Minimal superadditive majorant on [0, N]: the least g >= t with
// g(n + m) >= g(n) + g(m) whenever n + m <= N and n, m >= 1.
std::vector<mpz_class> subnegative_closure(const std::vector<mpz_class>& t);

struct InsufficientData : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class FitModel { Power, Exp };

struct GrowthFit {
  double slope = 0;     // exponent (Power: log value vs log n) or base-2
                        // logarithm of the growth base (Exp: log2 value vs n)
  double residual = 0;  // root-mean-square regression residual
};

// Least-squares fit over the table rows of the requested kind with n >= 1
// and value >= 1; throws InsufficientData below four usable rows.  Kinds
// are never mixed in one fit.
GrowthFit fit_growth(const GrowthTable& t, FitModel model, RowKind kind = RowKind::Exact);

// Row-wise consistency of the three columns: Area(n) <= Ann(n),
// 2*CL(n) <= n + 2*M*Ann(n), and Ann(n) <= Area(2*CL(n) + n) where the
// right-hand side is known.  Rows compare as intervals, so Upper/Lower
// rows are checked when decidable and recorded as skipped otherwise.
struct BrickCorsonReport {
  struct Item {
    std::string inequality;
    int n = 0;
    bool ok = true;
    std::string note;
  };
  std::vector<Item> checked;
  std::vector<Item> skipped;
  bool pass() const;
};
BrickCorsonReport brick_corson_check(const GrowthTable& area, const GrowthTable& cl,
                                     const GrowthTable& ann, long max_relator_length);

}  // namespace fillfn
