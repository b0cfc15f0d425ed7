#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fillfn {

// A word over a finite symmetric alphabet, one byte per letter:
// generator i is 2*i, its inverse 2*i+1.  Byte order therefore equals
// the enumeration order a < a^-1 < b < b^-1 < ..., which every
// shortest/lex-least search relies on.
using Word = std::string;
using Letter = char;

inline Letter make_letter(int gen, bool inv) { return Letter(2 * gen + (inv ? 1 : 0)); }
inline int letter_gen(Letter l) { return int(static_cast<unsigned char>(l)) / 2; }
inline bool letter_is_inverse(Letter l) { return static_cast<unsigned char>(l) & 1; }
inline Letter letter_inv(Letter l) { return Letter(static_cast<unsigned char>(l) ^ 1); }

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Alphabet {
  std::vector<std::string> names;

  int size() const { return int(names.size()); }
  std::optional<int> index_of(const std::string& name) const;
  const std::string& name_of(int gen) const { return names.at(gen); }
};

Word inverse(const Word& w);
Word free_reduce(const Word& w);
bool is_freely_reduced(const Word& w);

// w = prefix * core * prefix^-1 with core cyclically reduced.
struct CyclicForm {
  Word core;
  Word prefix;
};
CyclicForm cyclic_reduce(const Word& w);

Word pow(const Word& w, long k);
long exponent_sum(const Word& w, int gen);
long letter_count(const Word& w, int gen);

// Literal syntax: whitespace-separated tokens `name` or `name^k`
// (k a possibly negative integer); `1` is the empty word.
Word parse_word(const Alphabet& ab, const std::string& text);
std::string format_word(const Alphabet& ab, const Word& w);

// Re-index w letter by letter, matching generator names; throws
// ParseError on a name absent from `to`.
Word map_alphabet(const Word& w, const Alphabet& from, const Alphabet& to);

}  // namespace fillfn
