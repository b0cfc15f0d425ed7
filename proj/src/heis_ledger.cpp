#include <fillfn/area.hpp>
#include <fillfn/models.hpp>
#include <fillfn/presentation.hpp>

#include <stdexcept>

namespace fillfn {

namespace {

struct SwapRule {
  int relator = -1, rotation = 0, sign = 1;
};

// A sorted fully reduced word over a < b < c is the normal form
// a^alpha b^beta c^gamma.  The normalizer repeatedly fixes the leftmost
// descent.  c-letters commute past a and b in one relation each.  For the
// Heisenberg pairs the single-relation rewrites differ per sign pattern
// (the relator offers no other one-step exchanges):
//     b a     -> c^-1 a b
//     b a^-1  -> a^-1 c b
//     b^-1 a^-1 -> a^-1 b^-1 c^-1
//     b^-1 a  -> a b^-1 a^-1 c a   (no one-step exchange exists; the
//                                   bracket collapses when the follow-up
//                                   commutation moves c past the final a)
// The created c then bubbles right on later iterations.
Word swap_target(Letter x, Letter y) {
  if (letter_gen(x) == 2) return {y, x};
  bool ix = letter_is_inverse(x), iy = letter_is_inverse(y);
  Letter c = make_letter(2, false), cinv = make_letter(2, true);
  if (!ix && !iy) return {cinv, y, x};
  if (!ix && iy) return {y, c, x};
  if (ix && iy) return {y, x, cinv};
  return {y, x, letter_inv(y), c, y};
}

struct SwapTable {
  Presentation g1 = builtin_presentation("G1");
  SwapRule rule[6][6];

  // Each rule is found by replaying candidates against apply_relator, so
  // the table cannot drift from the step semantics.
  SwapTable() {
    for (int x = 0; x < 6; ++x)
      for (int y = 0; y < 6; ++y) {
        if (letter_gen(Letter(x)) <= letter_gen(Letter(y))) continue;
        Word fixture{Letter(x), Letter(y)};
        Word want = swap_target(Letter(x), Letter(y));
        for (int rel = 0; rel < 3 && rule[x][y].relator < 0; ++rel)
          for (int sign : {1, -1})
            for (int rot = 0; rot < int(g1.relators[size_t(rel)].size()); ++rot) {
              DerivationStep s{0, rel, rot, sign};
              if (apply_relator(fixture, s, g1) == want) {
                rule[x][y] = {rel, rot, sign};
                break;
              }
            }
        if (rule[x][y].relator < 0) throw std::logic_error("no one-relation exchange found");
      }
  }
};

const SwapTable& swap_table() {
  static const SwapTable t;
  return t;
}

DerivationStep single_deletion_step(const Word& w, const Presentation& p) {
  for (int rel = 0; rel < int(p.relators.size()); ++rel)
    for (int sign : {1, -1})
      for (int rot = 0; rot < int(p.relators[size_t(rel)].size()); ++rot)
        for (size_t pos = 0; pos <= w.size(); ++pos) {
          DerivationStep s{int(pos), rel, rot, sign};
          if (apply_relator(w, s, p).empty()) return s;
        }
  throw std::logic_error("relator cycle without a one-step deletion");
}

}  // namespace

std::pair<HeisElement, AreaLedger> heis_eval_with_ledger(const Word& w) {
  const SwapTable& t = swap_table();
  LedgerBuilder lb(t.g1, w);

  // A word that is itself a cell boundary needs exactly one deletion.
  if (!lb.current.empty() && is_relator_cycle(lb.current, t.g1)) {
    lb.apply(single_deletion_step(lb.current, t.g1));
    return {heis_eval(w), lb.finish()};
  }

  size_t i = 0;
  while (i + 1 < lb.current.size()) {
    Letter x = lb.current[i], y = lb.current[i + 1];
    if (letter_gen(x) <= letter_gen(y)) {
      ++i;
      continue;
    }
    size_t before = lb.current.size();
    const SwapRule& r = t.rule[int(x)][int(y)];
    lb.apply(DerivationStep{int(i), r.relator, r.rotation, r.sign});
    if (letter_gen(x) == 1 && letter_is_inverse(x) && !letter_is_inverse(y)) {
      // Collapse the bracket right away: rescanning first would find the
      // inner b^-1 a^-1 descent and undo the exchange, cycling forever.
      // The spliced-in "a" can cancel one a^-1 at the left seam (never
      // more: a b-or-c letter before it would have been the leftmost
      // descent), and the trailing "a" never cancels, so the c sits at a
      // known offset.
      size_t cpos;
      if (lb.current.size() == before + 3)
        cpos = i + 3;
      else if (lb.current.size() == before + 1)
        cpos = i + 1;
      else
        throw std::logic_error("unexpected reduction around the exchange bracket");
      const SwapRule& rc = t.rule[int(make_letter(2, false))][int(make_letter(0, false))];
      lb.apply(DerivationStep{int(cpos), rc.relator, rc.rotation, rc.sign});
    }
    // Cancellation can expose a descent at the seam; everything left of
    // the resumption point is untouched and still ascending.
    size_t shrink = before > lb.current.size() ? before - lb.current.size() : 0;
    i = i > shrink + 2 ? i - shrink - 2 : 0;
  }
  return {heis_eval(w), lb.finish()};
}

}  // namespace fillfn
