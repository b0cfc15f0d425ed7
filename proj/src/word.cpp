#include <fillfn/word.hpp>

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace fillfn {

std::optional<int> Alphabet::index_of(const std::string& name) const {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) return std::nullopt;
  return int(it - names.begin());
}

Word inverse(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(letter_inv(*it));
  return out;
}

Word free_reduce(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (Letter l : w) {
    if (!out.empty() && out.back() == letter_inv(l))
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

bool is_freely_reduced(const Word& w) {
  for (size_t i = 0; i + 1 < w.size(); ++i)
    if (w[i] == letter_inv(w[i + 1])) return false;
  return true;
}

CyclicForm cyclic_reduce(const Word& w0) {
  Word w = free_reduce(w0);
  size_t i = 0, j = w.size();
  while (j - i >= 2 && w[i] == letter_inv(w[j - 1])) ++i, --j;
  return {w.substr(i, j - i), w.substr(0, i)};
}

Word pow(const Word& w, long k) {
  Word base = k < 0 ? inverse(w) : w;
  Word out;
  for (long i = std::labs(k); i > 0; --i) out += base;
  return out;
}

long exponent_sum(const Word& w, int gen) {
  long s = 0;
  for (Letter l : w)
    if (letter_gen(l) == gen) s += letter_is_inverse(l) ? -1 : 1;
  return s;
}

long letter_count(const Word& w, int gen) {
  long s = 0;
  for (Letter l : w)
    if (letter_gen(l) == gen) ++s;
  return s;
}

Word parse_word(const Alphabet& ab, const std::string& text) {
  Word out;
  std::istringstream ss(text);
  std::string tok;
  while (ss >> tok) {
    if (tok == "1") continue;
    auto caret = tok.find('^');
    std::string name = tok.substr(0, caret);
    long exp = 1;
    if (caret != std::string::npos) {
      const std::string es = tok.substr(caret + 1);
      size_t pos = 0;
      try {
        exp = std::stol(es, &pos);
      } catch (const std::exception&) {
        pos = std::string::npos;
      }
      if (pos != es.size()) throw ParseError("bad exponent in token '" + tok + "'");
    }
    auto gen = ab.index_of(name);
    if (!gen) throw ParseError("unknown generator '" + name + "'");
    Letter l = make_letter(*gen, exp < 0);
    out.append(size_t(std::labs(exp)), l);
  }
  return out;
}

std::string format_word(const Alphabet& ab, const Word& w) {
  if (w.empty()) return "1";
  std::string out;
  size_t i = 0;
  while (i < w.size()) {
    size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    long exp = long(j - i) * (letter_is_inverse(w[i]) ? -1 : 1);
    if (!out.empty()) out += ' ';
    out += ab.name_of(letter_gen(w[i]));
    if (exp != 1) out += '^' + std::to_string(exp);
    i = j;
  }
  return out;
}

Word map_alphabet(const Word& w, const Alphabet& from, const Alphabet& to) {
  std::vector<int> table(size_t(from.size()));
  for (int g = 0; g < from.size(); ++g) {
    auto t = to.index_of(from.name_of(g));
    table[size_t(g)] = t ? *t : -1;
  }
  Word out;
  out.reserve(w.size());
  for (Letter l : w) {
    int t = table[size_t(letter_gen(l))];
    if (t < 0) throw ParseError("generator '" + from.name_of(letter_gen(l)) + "' has no image");
    out.push_back(make_letter(t, letter_is_inverse(l)));
  }
  return out;
}

}  // namespace fillfn
