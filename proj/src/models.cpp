#include <fillfn/models.hpp>

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace fillfn {

bool DirectElement::operator==(const DirectElement& o) const { return parts == o.parts; }
bool FreeElement::operator==(const FreeElement& o) const {
  return first == o.first && syllables == o.syllables;
}
bool Element::operator==(const Element& o) const { return v == o.v; }

namespace {

// Words materialized from coordinates would exceed memory long before
// this throws; the guard keeps the failure mode honest.
void append_pow(Word& w, int gen, const mpz_class& e) {
  if (!e.fits_slong_p()) throw std::length_error("exponent too large to write out as a word");
  long n = e.get_si();
  Letter l = make_letter(gen, n < 0);
  unsigned long reps = n < 0 ? -static_cast<unsigned long>(n) : static_cast<unsigned long>(n);
  for (unsigned long i = 0; i < reps; ++i) w.push_back(l);
}

std::string join(const std::vector<mpz_class>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += v[i].get_str();
  }
  return s;
}

[[noreturn]] void bad_letter(const char* model) {
  throw ParseError(std::string("letter outside the ") + model + " alphabet");
}

}  // namespace

// --- Heisenberg -----------------------------------------------------------

HeisElement heis_mul(const HeisElement& g, const HeisElement& h) {
  return {g.alpha + h.alpha, g.beta + h.beta, g.gamma + h.gamma - h.alpha * g.beta};
}

HeisElement heis_inv(const HeisElement& g) {
  return {-g.alpha, -g.beta, -g.gamma - g.alpha * g.beta};
}

// --- BS(1,2) ---------------------------------------------------------------

namespace {

void bs12_normalize(Bs12Element& g) {
  if (g.num == 0) {
    g.den2 = 0;
    return;
  }
  while (g.den2 > 0 && mpz_even_p(g.num.get_mpz_t())) {
    g.num >>= 1;
    --g.den2;
  }
}

}  // namespace

Bs12Element bs12_mul(const Bs12Element& g, const Bs12Element& h) {
  // q = q1 + 2^k1 q2 over the common denominator 2^E.
  long E = std::max({g.den2, h.den2 - g.k, 0L});
  mpz_class n = (g.num << static_cast<unsigned long>(E - g.den2)) +
                (h.num << static_cast<unsigned long>(E - h.den2 + g.k));
  Bs12Element r{g.k + h.k, std::move(n), E};
  bs12_normalize(r);
  return r;
}

Bs12Element bs12_inv(const Bs12Element& g) {
  // (k, q)^-1 = (-k, -q / 2^k).
  Bs12Element r;
  r.k = -g.k;
  long e = g.den2 + g.k;
  if (e >= 0) {
    r.num = -g.num;
    r.den2 = e;
  } else {
    r.num = -(g.num << static_cast<unsigned long>(-e));
    r.den2 = 0;
  }
  bs12_normalize(r);
  return r;
}

namespace {

// --- Filiform ---------------------------------------------------------------

// phi = 1 + N with N e_i = e_{i-1}; phi^m = sum_j C(m,j) N^j, exact for
// negative m too (generalized binomials of an integer are integers).
std::vector<mpz_class> phi_pow(const std::vector<mpz_class>& v, long m) {
  int d = int(v.size());
  std::vector<mpz_class> r = v;
  mpz_class coeff = 1;
  for (int j = 1; j < d; ++j) {
    coeff *= mpz_class(m) - (j - 1);
    coeff /= j;
    if (coeff == 0) break;
    for (int i = 0; i + j < d; ++i) r[i] += coeff * v[i + j];
  }
  return r;
}

FiliformElement filiform_mul(const FiliformElement& g, const FiliformElement& h) {
  FiliformElement r;
  r.v = phi_pow(h.v, g.m);
  for (size_t i = 0; i < r.v.size(); ++i) r.v[i] += g.v[i];
  r.m = g.m + h.m;
  return r;
}

FiliformElement filiform_inv(const FiliformElement& g) {
  FiliformElement r;
  r.v = phi_pow(g.v, -g.m);
  for (mpz_class& c : r.v) c = -c;
  r.m = -g.m;
  return r;
}

// --- Central extension -------------------------------------------------------

std::vector<mpz_class> g6m_cocycle(const std::array<mpz_class, 2>& y,
                                   const std::vector<mpz_class>& x) {
  std::vector<mpz_class> b(x.size());
  for (size_t j = 0; j < x.size(); ++j) {
    b[j] = y[0] * x[j];
    if (j > 0) b[j] -= y[1] * x[j - 1];
  }
  return b;
}

CentralExtElement g6m_mul(const CentralExtElement& g, const CentralExtElement& h) {
  CentralExtElement r = g;
  for (size_t i = 0; i < r.x.size(); ++i) r.x[i] += h.x[i];
  r.y[0] += h.y[0];
  r.y[1] += h.y[1];
  std::vector<mpz_class> b = g6m_cocycle(g.y, h.x);
  for (size_t i = 0; i < r.z.size(); ++i) r.z[i] += h.z[i] + b[i];
  return r;
}

CentralExtElement g6m_inv(const CentralExtElement& g) {
  CentralExtElement r;
  r.x.resize(g.x.size());
  r.z = g6m_cocycle(g.y, g.x);
  for (size_t i = 0; i < g.x.size(); ++i) {
    r.x[i] = -g.x[i];
    r.z[i] -= g.z[i];
  }
  r.y = {-g.y[0], -g.y[1]};
  return r;
}

// --- Concrete models ---------------------------------------------------------

class HeisModel final : public GroupModel {
 public:
  const Alphabet& alphabet() const override { return alpha_; }
  Element identity() const override { return Element{HeisElement{}}; }
  Element eval_word(const Word& w) const override { return Element{heis_eval(w)}; }
  Element multiply(const Element& g, const Element& h) const override {
    return Element{heis_mul(get(g), get(h))};
  }
  Element inverse(const Element& g) const override { return Element{heis_inv(get(g))}; }
  Word element_to_word(const Element& g) const override {
    const HeisElement& e = get(g);
    Word w;
    append_pow(w, 0, e.alpha);
    append_pow(w, 1, e.beta);
    append_pow(w, 2, e.gamma);
    return w;
  }
  std::string canonical_key(const Element& g) const override {
    const HeisElement& e = get(g);
    return "h:" + e.alpha.get_str() + "," + e.beta.get_str() + "," + e.gamma.get_str();
  }

 private:
  static const HeisElement& get(const Element& g) { return std::get<HeisElement>(g.v); }
  Alphabet alpha_{{"a", "b", "c"}};
};

class Bs12Model final : public GroupModel {
 public:
  const Alphabet& alphabet() const override { return alpha_; }
  Element identity() const override { return Element{Bs12Element{}}; }
  Element eval_word(const Word& w) const override { return Element{bs12_eval(w)}; }
  Element multiply(const Element& g, const Element& h) const override {
    return Element{bs12_mul(get(g), get(h))};
  }
  Element inverse(const Element& g) const override { return Element{bs12_inv(get(g))}; }
  Word element_to_word(const Element& g) const override {
    // q = n / 2^e gives a^-e s^n a^(e+k); n = 0 forces e = 0, so the
    // word is freely reduced.
    const Bs12Element& b = get(g);
    Word w;
    append_pow(w, 0, -b.den2);
    append_pow(w, 1, b.num);
    append_pow(w, 0, b.den2 + b.k);
    return w;
  }
  std::string canonical_key(const Element& g) const override {
    const Bs12Element& b = get(g);
    return "b:" + std::to_string(b.k) + ":" + b.num.get_str() + "/" + std::to_string(b.den2);
  }

 private:
  static const Bs12Element& get(const Element& g) { return std::get<Bs12Element>(g.v); }
  Alphabet alpha_{{"a", "s"}};
};

class FiliformModel final : public GroupModel {
 public:
  explicit FiliformModel(int d) : d_(d) {
    if (d < 1) throw ParseError("filiform model needs d >= 1");
    for (int i = 1; i <= d; ++i) alpha_.names.push_back("a" + std::to_string(i));
    alpha_.names.push_back("t");
  }
  const Alphabet& alphabet() const override { return alpha_; }
  Element identity() const override {
    return Element{FiliformElement{std::vector<mpz_class>(size_t(d_)), 0}};
  }
  Element eval_word(const Word& w) const override { return Element{filiform_eval(w, d_)}; }
  Element multiply(const Element& g, const Element& h) const override {
    return Element{filiform_mul(get(g), get(h))};
  }
  Element inverse(const Element& g) const override { return Element{filiform_inv(get(g))}; }
  Word element_to_word(const Element& g) const override {
    const FiliformElement& e = get(g);
    Word w;
    for (int i = 0; i < d_; ++i) append_pow(w, i, e.v[size_t(i)]);
    append_pow(w, d_, e.m);
    return w;
  }
  std::string canonical_key(const Element& g) const override {
    const FiliformElement& e = get(g);
    return "v:" + std::to_string(e.m) + ":" + join(e.v);
  }

 private:
  static const FiliformElement& get(const Element& g) { return std::get<FiliformElement>(g.v); }
  int d_;
  Alphabet alpha_;
};

class G6mModel final : public GroupModel {
 public:
  explicit G6mModel(int m) : m_(m) {
    if (m < 1) throw ParseError("central-extension model needs m >= 1");
    for (int i = 1; i <= m; ++i) alpha_.names.push_back("a" + std::to_string(i));
    alpha_.names.push_back("b1");
    alpha_.names.push_back("b2");
    for (int i = 1; i <= m; ++i) alpha_.names.push_back("c" + std::to_string(i));
  }
  const Alphabet& alphabet() const override { return alpha_; }
  Element identity() const override {
    CentralExtElement e;
    e.x.resize(size_t(m_));
    e.z.resize(size_t(m_));
    return Element{std::move(e)};
  }
  Element eval_word(const Word& w) const override { return Element{g6m_eval(w, m_)}; }
  Element multiply(const Element& g, const Element& h) const override {
    return Element{g6m_mul(get(g), get(h))};
  }
  Element inverse(const Element& g) const override { return Element{g6m_inv(get(g))}; }
  Word element_to_word(const Element& g) const override {
    const CentralExtElement& e = get(g);
    Word w;
    for (int i = 0; i < m_; ++i) append_pow(w, i, e.x[size_t(i)]);
    append_pow(w, m_, e.y[0]);
    append_pow(w, m_ + 1, e.y[1]);
    for (int i = 0; i < m_; ++i) append_pow(w, m_ + 2 + i, e.z[size_t(i)]);
    return w;
  }
  std::string canonical_key(const Element& g) const override {
    const CentralExtElement& e = get(g);
    return "z:" + join(e.x) + ";" + e.y[0].get_str() + "," + e.y[1].get_str() + ";" + join(e.z);
  }

 private:
  static const CentralExtElement& get(const Element& g) { return std::get<CentralExtElement>(g.v); }
  int m_;
  Alphabet alpha_;
};

// --- Products ----------------------------------------------------------------

class DirectProductModel final : public GroupModel {
 public:
  DirectProductModel(ModelPtr left, ModelPtr right, Alphabet alpha)
      : fac_{std::move(left), std::move(right)},
        alpha_(std::move(alpha)),
        nl_(fac_[0]->alphabet().size()) {
    if (alpha_.size() != nl_ + fac_[1]->alphabet().size())
      throw ParseError("product alphabet size does not match the factors");
  }
  const Alphabet& alphabet() const override { return alpha_; }
  Element identity() const override {
    return Element{DirectElement{{fac_[0]->identity(), fac_[1]->identity()}}};
  }
  Element eval_word(const Word& w) const override {
    // Factors commute, so the two subwords evaluate independently.
    Word wl, wr;
    for (Letter l : w) {
      int gen = letter_gen(l);
      if (gen < nl_)
        wl.push_back(l);
      else
        wr.push_back(make_letter(gen - nl_, letter_is_inverse(l)));
    }
    return Element{DirectElement{{fac_[0]->eval_word(wl), fac_[1]->eval_word(wr)}}};
  }
  Element multiply(const Element& g, const Element& h) const override {
    const DirectElement &a = get(g), &b = get(h);
    return Element{DirectElement{
        {fac_[0]->multiply(a.parts[0], b.parts[0]), fac_[1]->multiply(a.parts[1], b.parts[1])}}};
  }
  Element inverse(const Element& g) const override {
    const DirectElement& a = get(g);
    return Element{DirectElement{{fac_[0]->inverse(a.parts[0]), fac_[1]->inverse(a.parts[1])}}};
  }
  Word element_to_word(const Element& g) const override {
    const DirectElement& a = get(g);
    Word w = fac_[0]->element_to_word(a.parts[0]);
    for (Letter l : fac_[1]->element_to_word(a.parts[1]))
      w.push_back(make_letter(letter_gen(l) + nl_, letter_is_inverse(l)));
    return w;
  }
  std::string canonical_key(const Element& g) const override {
    const DirectElement& a = get(g);
    return "d(" + fac_[0]->canonical_key(a.parts[0]) + ")(" + fac_[1]->canonical_key(a.parts[1]) +
           ")";
  }

 private:
  static const DirectElement& get(const Element& g) { return std::get<DirectElement>(g.v); }
  ModelPtr fac_[2];
  Alphabet alpha_;
  int nl_;
};

class FreeProductModel final : public GroupModel {
 public:
  FreeProductModel(ModelPtr left, ModelPtr right, Alphabet alpha)
      : fac_{std::move(left), std::move(right)},
        alpha_(std::move(alpha)),
        nl_(fac_[0]->alphabet().size()) {
    if (alpha_.size() != nl_ + fac_[1]->alphabet().size())
      throw ParseError("product alphabet size does not match the factors");
  }
  const Alphabet& alphabet() const override { return alpha_; }
  Element identity() const override { return Element{FreeElement{}}; }
  Element eval_word(const Word& w) const override {
    FreeElement r;
    for (Letter l : w) {
      int gen = letter_gen(l);
      int fac = gen < nl_ ? 0 : 1;
      Word single(1, fac == 0 ? l : make_letter(gen - nl_, letter_is_inverse(l)));
      absorb(r, fac, fac_[fac]->eval_word(single));
    }
    return Element{std::move(r)};
  }
  Element multiply(const Element& g, const Element& h) const override {
    const FreeElement& b = get(h);
    FreeElement r = get(g);
    for (size_t i = 0; i < b.syllables.size(); ++i)
      absorb(r, int(b.first + i) % 2, b.syllables[i]);
    return Element{std::move(r)};
  }
  Element inverse(const Element& g) const override {
    const FreeElement& a = get(g);
    FreeElement r;
    size_t n = a.syllables.size();
    if (n) r.first = int(a.first + n - 1) % 2;
    for (size_t i = n; i-- > 0;)
      r.syllables.push_back(fac_[(a.first + i) % 2]->inverse(a.syllables[i]));
    return Element{std::move(r)};
  }
  Word element_to_word(const Element& g) const override {
    const FreeElement& a = get(g);
    Word w;
    for (size_t i = 0; i < a.syllables.size(); ++i) {
      int fac = int(a.first + i) % 2;
      Word sw = fac_[fac]->element_to_word(a.syllables[i]);
      if (fac == 0)
        w += sw;
      else
        for (Letter l : sw) w.push_back(make_letter(letter_gen(l) + nl_, letter_is_inverse(l)));
    }
    return w;
  }
  std::string canonical_key(const Element& g) const override {
    const FreeElement& a = get(g);
    std::string k = "f" + std::to_string(a.first);
    for (size_t i = 0; i < a.syllables.size(); ++i)
      k += "(" + fac_[(a.first + i) % 2]->canonical_key(a.syllables[i]) + ")";
    return k;
  }

 private:
  static const FreeElement& get(const Element& g) { return std::get<FreeElement>(g.v); }

  // Appends one non-identity syllable of the given factor, merging with
  // the tail; a merge that cancels exposes the previous syllable, whose
  // factor alternates, so a single pop keeps the form reduced.
  void absorb(FreeElement& r, int fac, const Element& s) const {
    if (fac_[fac]->is_identity(s)) return;
    if (!r.syllables.empty() && (r.first + int(r.syllables.size()) - 1) % 2 == fac) {
      Element merged = fac_[fac]->multiply(r.syllables.back(), s);
      if (fac_[fac]->is_identity(merged)) {
        r.syllables.pop_back();
        if (r.syllables.empty()) r.first = 0;
        return;
      }
      r.syllables.back() = std::move(merged);
      return;
    }
    if (r.syllables.empty()) r.first = fac;
    r.syllables.push_back(s);
  }

  ModelPtr fac_[2];
  Alphabet alpha_;
  int nl_;
};

}  // namespace

HeisElement heis_eval(const Word& w) {
  HeisElement g;
  for (Letter l : w) {
    HeisElement h;
    mpz_class s = letter_is_inverse(l) ? -1 : 1;
    switch (letter_gen(l)) {
      case 0: h.alpha = s; break;
      case 1: h.beta = s; break;
      case 2: h.gamma = s; break;
      default: bad_letter("Heisenberg");
    }
    g = heis_mul(g, h);
  }
  return g;
}

Bs12Element bs12_eval(const Word& w) {
  Bs12Element g;
  for (Letter l : w) {
    Bs12Element h;
    bool inv = letter_is_inverse(l);
    switch (letter_gen(l)) {
      case 0: h.k = inv ? -1 : 1; break;
      case 1: h.num = inv ? -1 : 1; break;
      default: bad_letter("BS(1,2)");
    }
    g = bs12_mul(g, h);
  }
  return g;
}

FiliformElement filiform_eval(const Word& w, int d) {
  FiliformElement g;
  g.v.resize(size_t(d));
  for (Letter l : w) {
    FiliformElement h;
    h.v.resize(size_t(d));
    int gen = letter_gen(l);
    long s = letter_is_inverse(l) ? -1 : 1;
    if (gen < d)
      h.v[size_t(gen)] = s;
    else if (gen == d)
      h.m = s;
    else
      bad_letter("filiform");
    g = filiform_mul(g, h);
  }
  return g;
}

CentralExtElement g6m_eval(const Word& w, int m) {
  CentralExtElement g;
  g.x.resize(size_t(m));
  g.z.resize(size_t(m));
  for (Letter l : w) {
    CentralExtElement h;
    h.x.resize(size_t(m));
    h.z.resize(size_t(m));
    int gen = letter_gen(l);
    long s = letter_is_inverse(l) ? -1 : 1;
    if (gen < m)
      h.x[size_t(gen)] = s;
    else if (gen < m + 2)
      h.y[size_t(gen - m)] = s;
    else if (gen < 2 * m + 2)
      h.z[size_t(gen - m - 2)] = s;
    else
      bad_letter("central-extension");
    g = g6m_mul(g, h);
  }
  return g;
}

ModelPtr heis_model() {
  static const ModelPtr m = std::make_shared<HeisModel>();
  return m;
}

ModelPtr bs12_model() {
  static const ModelPtr m = std::make_shared<Bs12Model>();
  return m;
}

ModelPtr filiform_model(int d) { return std::make_shared<FiliformModel>(d); }

ModelPtr g6m_model(int m) { return std::make_shared<G6mModel>(m); }

Alphabet merge_alphabets(const Alphabet& left, const Alphabet& right) {
  Alphabet m = left;
  for (const std::string& n : right.names) {
    std::string cand = n;
    while (m.index_of(cand)) cand += "'";
    m.names.push_back(cand);
  }
  return m;
}

ModelPtr direct_product_model(ModelPtr left, ModelPtr right, Alphabet alphabet) {
  return std::make_shared<DirectProductModel>(std::move(left), std::move(right),
                                              std::move(alphabet));
}

ModelPtr direct_product_model(ModelPtr left, ModelPtr right) {
  Alphabet a = merge_alphabets(left->alphabet(), right->alphabet());
  return direct_product_model(std::move(left), std::move(right), std::move(a));
}

ModelPtr free_product_model(ModelPtr left, ModelPtr right, Alphabet alphabet) {
  return std::make_shared<FreeProductModel>(std::move(left), std::move(right),
                                            std::move(alphabet));
}

ModelPtr free_product_model(ModelPtr left, ModelPtr right) {
  Alphabet a = merge_alphabets(left->alphabet(), right->alphabet());
  return free_product_model(std::move(left), std::move(right), std::move(a));
}

Element product_eval(const Word& w, const ModelPtr& left, const ModelPtr& right,
                     ProductKind kind) {
  ModelPtr m = kind == ProductKind::Direct ? direct_product_model(left, right)
                                           : free_product_model(left, right);
  return m->eval_word(w);
}

ModelPtr builtin_model(const std::string& name) {
  if (name == "G1") return heis_model();
  if (name == "BS12" || name == "G2") return bs12_model();
  if (name == "G3")
    return direct_product_model(heis_model(), bs12_model(), Alphabet{{"a", "b", "c", "x", "s"}});
  if (name == "G7") return free_product_model(filiform_model(3), g6m_model(20));
  if (name == "G8") return free_product_model(filiform_model(4), g6m_model(20));
  if (name.rfind("G5:d=", 0) == 0) return filiform_model(std::stoi(name.substr(5)));
  if (name.rfind("G6:m=", 0) == 0) return g6m_model(std::stoi(name.substr(5)));
  throw ParseError("no built-in model for '" + name + "'");
}

bool has_builtin_model(const std::string& name) {
  try {
    builtin_model(name);
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace fillfn
