#pragma once

#include <fillfn/presentation.hpp>

#include <functional>
#include <optional>

namespace fillfn {

struct SearchBudget {
  long max_nodes = 200000;
  int max_depth = 64;
};

enum class AreaStatus {
  Exact,                // minimal area found, ledger attached
  NoFilling,            // provably not null-homotopic (exponent-sum obstruction)
  NoFillingWithinDepth,  // complete search: no filling with <= max_depth cells
  Unknown               // node budget exhausted
};

struct AreaResult {
  AreaStatus status = AreaStatus::Unknown;
  long area = -1;     // valid when Exact
  AreaLedger ledger;  // valid when Exact: derivation w -> empty
  long nodes = 0;
};

// Minimal number of relator applications taking w to the empty word, by
// iterative-deepening search over freely reduced words with an admissible
// per-generator exponent-sum heuristic, so a returned value is exact.
// Completeness per round: a k-cell filling only visits words of length
// <= |w| + k*(longest relator), which bounds each round's state space.
AreaResult exact_area(const Word& w, const Presentation& p, const SearchBudget& budget = {});

// Area(w) <= 1 combinatorially: w's cyclic core is empty or a rotation
// of a relator or of an inverted relator.
bool is_relator_cycle(const Word& w, const Presentation& p);

enum class AnnKind { Exact, Upper, Unknown };

struct AnnResult {
  AnnKind kind = AnnKind::Unknown;
  long value = -1;
  Word conjugator;    // gamma realizing value
  AreaLedger ledger;  // filling of gamma u gamma^-1 v^-1
  int radius = 0;
  bool discharged = false;  // the enumeration radius provably dominates
  long nodes = 0;
};

// Certifies probes before the area search: must return false only when
// the word is provably not null-homotopic (e.g. a normal-form check in
// an exact model of the group).  Skipped probes have no filling, so the
// minimum and the discharge bookkeeping are unchanged.
using ProbeFilter = std::function<bool(const Word&)>;

// Minimum of Area(gamma u gamma^-1 v^-1) over freely reduced conjugators
// |gamma| <= conj_radius.  The result is an upper bound on the annular
// area unless discharged: cutting a minimal annular diagram of area V
// along a shortest path and rebasing both boundaries yields a conjugator
// of length <= |u|+|v| + M*V/2, so once 2*conj_radius >= 2(|u|+|v|) +
// M*V (and no candidate search was left Unknown) the minimum is exact.
// Without a filter every candidate that fails to conjugate u to v costs
// a full failed search, so passing one is what makes large radii usable.
AnnResult exact_ann(const Word& u, const Word& v, const Presentation& p, int conj_radius,
                    const SearchBudget& budget = {}, const ProbeFilter& probe_trivial = {});

// For u = v = w in the group: |Area(uv^-1) - Area(vw^-1)| <= Area(uw^-1)
// <= Area(uv^-1) + Area(vw^-1).  nullopt when any area is unresolved.
std::optional<bool> triangle_check(const Word& u, const Word& v, const Word& w,
                                   const Presentation& p, const SearchBudget& budget = {});

}  // namespace fillfn
