#include <fillfn/presentation.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fillfn {

size_t Presentation::max_relator_length() const {
  size_t m = 0;
  for (const Word& r : relators) m = std::max(m, r.size());
  return m;
}

Presentation make_presentation(const std::string& name, const std::vector<std::string>& gens,
                               const std::vector<std::string>& relator_texts) {
  Presentation p;
  p.name = name;
  for (const std::string& g : gens) {
    if (p.alphabet.index_of(g)) throw DuplicateGenerator("duplicate generator '" + g + "'");
    p.alphabet.names.push_back(g);
  }
  for (const std::string& text : relator_texts) {
    Word r = cyclic_reduce(parse_word(p.alphabet, text)).core;
    if (r.empty()) throw ParseError("relator '" + text + "' is trivial");
    p.relators.push_back(r);
  }
  return p;
}

namespace {

std::string com(const std::string& x, const std::string& y) {
  return x + " " + y + " " + x + "^-1 " + y + "^-1";
}

Presentation make_g5(int d) {
  if (d < 1) throw ParseError("G5 needs d >= 1");
  std::vector<std::string> gens;
  for (int i = 1; i <= d; ++i) gens.push_back("a" + std::to_string(i));
  gens.push_back("t");
  std::vector<std::string> rels;
  for (int i = 2; i <= d; ++i) {
    std::string ai = "a" + std::to_string(i), ap = "a" + std::to_string(i - 1);
    rels.push_back("t " + ai + " t^-1 " + ap + "^-1 " + ai + "^-1");
  }
  rels.push_back(com("a1", "t"));
  for (int i = 1; i < d; ++i)
    for (int j = i + 1; j <= d; ++j) rels.push_back(com("a" + std::to_string(i), "a" + std::to_string(j)));
  return make_presentation("G5:d=" + std::to_string(d), gens, rels);
}

Presentation make_g6(int m) {
  if (m < 1) throw ParseError("G6 needs m >= 1");
  std::vector<std::string> gens;
  for (int i = 1; i <= m; ++i) gens.push_back("a" + std::to_string(i));
  gens.push_back("b1");
  gens.push_back("b2");
  for (int i = 1; i <= m; ++i) gens.push_back("c" + std::to_string(i));
  auto a = [](int i) { return "a" + std::to_string(i); };
  auto c = [](int i) { return "c" + std::to_string(i); };
  std::vector<std::string> rels;
  for (int i = 1; i <= m; ++i) rels.push_back(com("b1", a(i)) + " " + c(i) + "^-1");
  for (int i = 1; i < m; ++i) rels.push_back(com("b2", a(i)) + " " + c(i + 1));
  rels.push_back(com("b2", a(m)));
  for (int i = 1; i < m; ++i)
    for (int j = i + 1; j <= m; ++j) rels.push_back(com(a(i), a(j)));
  rels.push_back(com("b1", "b2"));
  for (int i = 1; i < m; ++i)
    for (int j = i + 1; j <= m; ++j) rels.push_back(com(c(i), c(j)));
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= m; ++j) rels.push_back(com("b" + std::to_string(i), c(j)));
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= m; ++j) rels.push_back(com(a(i), c(j)));
  return make_presentation("G6:m=" + std::to_string(m), gens, rels);
}

}  // namespace

Presentation builtin_presentation(const std::string& name) {
  if (name == "G1")
    return make_presentation("G1", {"a", "b", "c"},
                             {com("a", "c"), com("b", "c"), com("a", "b") + " c^-1"});
  if (name == "BS12" || name == "G2")
    return make_presentation("BS12", {"a", "s"}, {"a s a^-1 s^-2"});
  if (name == "G3")
    return make_presentation(
        "G3", {"a", "b", "c", "x", "s"},
        {com("a", "c"), com("b", "c"), com("a", "b") + " c^-1", "x s x^-1 s^-2", com("a", "x"),
         com("a", "s"), com("b", "x"), com("b", "s"), com("c", "x"), com("c", "s")});
  if (name == "G4")
    return make_presentation("G4", {"a", "b", "c", "d", "s"},
                             {com("a", "b") + " c^-1", com("a", "c"), com("b", "c"), com("b", "d"),
                              "a s a^-1 s^-2", "d s d^-1 s^-2"});
  if (name == "A")
    return make_presentation(
        "A", {"a", "b", "c", "d"},
        {com("a", "b") + " c^-1", com("a", "c"), com("b", "c"), com("b", "d")});
  if (name == "B") return make_presentation("B", {"a", "d", "s"}, {"a s a^-1 s^-2", "d s d^-1 s^-2"});
  if (name == "C") return make_presentation("C", {"a", "d"}, {});
  if (name == "E")
    return make_presentation("E", {"a", "c", "d", "s"},
                             {com("a", "c"), "a s a^-1 s^-2", "d s d^-1 s^-2"});
  if (name == "L") return make_presentation("L", {"b", "c", "s"}, {com("b", "c")});
  if (name.rfind("G5:d=", 0) == 0) return make_g5(std::stoi(name.substr(5)));
  if (name.rfind("G6:m=", 0) == 0) return make_g6(std::stoi(name.substr(5)));
  throw ParseError("unknown built-in presentation '" + name + "'");
}

bool is_builtin_presentation(const std::string& name) {
  try {
    builtin_presentation(name);
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

Presentation load_presentation(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open presentation file '" + path + "'");
  Presentation p;
  auto slash = path.find_last_of('/');
  p.name = path.substr(slash == std::string::npos ? 0 : slash + 1);

  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) -> std::string {
    return path + ":" + std::to_string(lineno) + ": " + msg;
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string key;
    if (!(ss >> key)) continue;
    std::string rest;
    std::getline(ss, rest);
    if (key == "generators:") {
      std::istringstream gs(rest);
      std::string g;
      while (gs >> g) {
        if (p.alphabet.index_of(g)) throw DuplicateGenerator(fail("duplicate generator '" + g + "'"));
        p.alphabet.names.push_back(g);
      }
    } else if (key == "relator:") {
      Word r;
      try {
        r = parse_word(p.alphabet, rest);
      } catch (const ParseError& e) {
        if (std::string(e.what()).find("unknown generator") != std::string::npos)
          throw UnknownSymbolInRelator(fail(e.what()));
        throw ParseError(fail(e.what()));
      }
      Word core = cyclic_reduce(r).core;
      if (core.empty()) throw ParseError(fail("relator is empty or freely trivial"));
      if (core != r)
        std::cerr << path << ":" << lineno << ": warning: relator cyclically reduced to '"
                  << p.format(core) << "'\n";
      p.relators.push_back(core);
    } else {
      throw ParseError(fail("expected 'generators:' or 'relator:', got '" + key + "'"));
    }
  }
  if (p.alphabet.size() == 0) throw ParseError("no generators in '" + path + "'");
  return p;
}

Word rotated_relator(const Presentation& p, const DerivationStep& s) {
  if (s.relator < 0 || s.relator >= int(p.relators.size()))
    throw NotApplicable("relator index out of range");
  Word r = p.relators[size_t(s.relator)];
  if (s.sign < 0) r = inverse(r);
  int n = int(r.size());
  int k = ((s.rotation % n) + n) % n;
  return r.substr(size_t(k)) + r.substr(0, size_t(k));
}

Word apply_rotated_relator(const Word& w, const Word& r, size_t pos) {
  size_t m = 0;
  while (m < r.size() && pos + m < w.size() && w[pos + m] == r[m]) ++m;
  Word out;
  out.reserve(w.size() + r.size());
  out.append(w, 0, pos);
  out += inverse(r.substr(m));
  out.append(w, pos + m, w.size() - pos - m);
  return free_reduce(out);
}

Word apply_relator(const Word& w, const DerivationStep& s, const Presentation& p) {
  if (s.position < 0 || size_t(s.position) > w.size())
    throw NotApplicable("position out of range");
  return apply_rotated_relator(w, rotated_relator(p, s), size_t(s.position));
}

bool verify_ledger(const AreaLedger& l, const Presentation& p) {
  Word w = free_reduce(l.start);
  for (const DerivationStep& s : l.steps) {
    try {
      w = apply_relator(w, s, p);
    } catch (const NotApplicable&) {
      return false;
    }
  }
  return w == free_reduce(l.end);
}

}  // namespace fillfn
