#pragma once

#include <fillfn/word.hpp>

namespace fillfn {

struct DuplicateGenerator : ParseError {
  using ParseError::ParseError;
};
struct UnknownSymbolInRelator : ParseError {
  using ParseError::ParseError;
};
struct NotApplicable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Presentation {
  std::string name;
  Alphabet alphabet;
  std::vector<Word> relators;  // non-empty, freely and cyclically reduced

  Word parse(const std::string& text) const { return parse_word(alphabet, text); }
  std::string format(const Word& w) const { return format_word(alphabet, w); }
  size_t max_relator_length() const;
};

Presentation make_presentation(const std::string& name, const std::vector<std::string>& gens,
                               const std::vector<std::string>& relator_texts);

// Built-ins: G1, BS12, G3, G4, G5:d=N, G6:m=N, A, B, C, E, L.
Presentation builtin_presentation(const std::string& name);
bool is_builtin_presentation(const std::string& name);

// Line-oriented file format: `generators: a b c`, one `relator: ...` per
// line, `#` comments.  Relators are cyclically reduced on load, with a
// warning on stderr if that changed them.
Presentation load_presentation(const std::string& path);

// One relator application (= one 2-cell).  The relator is inverted when
// sign < 0, rotated left, and split r = r1 r2 with r1 the longest prefix
// matching w at `position`; r1 is replaced by r2^-1 and the result freely
// reduced.  r1 may be empty (pure insertion of r^-1); a sub-maximal split
// freely reduces to the same word, so the greedy split loses nothing.
struct DerivationStep {
  int position = 0;
  int relator = 0;
  int rotation = 0;
  int sign = 1;
};

Word rotated_relator(const Presentation& p, const DerivationStep& s);
Word apply_relator(const Word& w, const DerivationStep& s, const Presentation& p);
// Same semantics with the rotated relator precomputed (search hot path).
Word apply_rotated_relator(const Word& w, const Word& rotated, size_t position);

// Machine-checkable witness that Area(start * end^-1) <= steps.size().
struct AreaLedger {
  Word start;
  Word end;
  std::vector<DerivationStep> steps;
};

bool verify_ledger(const AreaLedger& l, const Presentation& p);

// Applies steps as they are recorded, so emitters can assert intermediate
// states instead of discovering a bad rotation at verification time.
struct LedgerBuilder {
  explicit LedgerBuilder(const Presentation& p, Word start)
      : pres(&p), current(free_reduce(start)) {
    ledger.start = std::move(start);
  }
  void apply(const DerivationStep& s) {
    current = apply_relator(current, s, *pres);
    ledger.steps.push_back(s);
  }
  AreaLedger finish() {
    ledger.end = current;
    return ledger;
  }

  const Presentation* pres;
  AreaLedger ledger;
  Word current;
};

}  // namespace fillfn
