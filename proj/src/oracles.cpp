#include <fillfn/oracles.hpp>

#include <stdexcept>

namespace fillfn::oracles {

namespace {

Mat3 mat3_identity() {
  Mat3 m{};
  for (int i = 0; i < 3; ++i) m[size_t(i)][size_t(i)] = 1;
  return m;
}

Mat3 mat3_mul(const Mat3& a, const Mat3& b) {
  Mat3 out{};
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k)
      for (int j = 0; j < 3; ++j) out[size_t(i)][size_t(j)] += a[size_t(i)][size_t(k)] * b[size_t(k)][size_t(j)];
  return out;
}

Mat3 mat3_elementary(int row, int col, int val) {
  Mat3 m = mat3_identity();
  m[size_t(row)][size_t(col)] = val;
  return m;
}

}  // namespace

Mat3 heis_matrix_eval(const Word& w) {
  // a = E12, b = E23, c = E13; then a b a^-1 b^-1 = c.
  static const std::array<std::pair<int, int>, 3> slot{{{0, 1}, {1, 2}, {0, 2}}};
  Mat3 acc = mat3_identity();
  for (Letter l : w) {
    auto [r, c] = slot.at(size_t(letter_gen(l)));
    acc = mat3_mul(acc, mat3_elementary(r, c, letter_is_inverse(l) ? -1 : 1));
  }
  return acc;
}

bool heis_matrix_is_identity(const Word& w) { return heis_matrix_eval(w) == mat3_identity(); }

AffinePoints bs12_affine_eval(const Word& w) {
  // eval(gh) = eval(g) o eval(h); a: x -> 2x, s: x -> x+1.
  AffinePoints acc{0, 1};
  auto compose = [](const AffinePoints& g, const AffinePoints& h) {
    mpq_class slope = g.at1 - g.at0;
    return AffinePoints{g.at0 + slope * h.at0, g.at0 + slope * h.at1};
  };
  for (Letter l : w) {
    AffinePoints f;
    if (letter_gen(l) == 0)
      f = letter_is_inverse(l) ? AffinePoints{0, mpq_class(1, 2)} : AffinePoints{0, 2};
    else if (letter_gen(l) == 1)
      f = letter_is_inverse(l) ? AffinePoints{-1, 0} : AffinePoints{1, 2};
    else
      throw std::out_of_range("bs12 oracle: bad letter");
    acc = compose(acc, f);
  }
  return acc;
}

bool bs12_affine_is_identity(const Word& w) {
  return bs12_affine_eval(w) == AffinePoints{0, 1};
}

namespace {

MatN matn_zero(int n) { return MatN(size_t(n), std::vector<mpz_class>(size_t(n))); }

MatN matn_identity(int n) {
  MatN m = matn_zero(n);
  for (int i = 0; i < n; ++i) m[size_t(i)][size_t(i)] = 1;
  return m;
}

MatN matn_mul(const MatN& a, const MatN& b) {
  int n = int(a.size());
  MatN out = matn_zero(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      if (a[size_t(i)][size_t(k)] == 0) continue;
      for (int j = 0; j < n; ++j)
        out[size_t(i)][size_t(j)] += a[size_t(i)][size_t(k)] * b[size_t(k)][size_t(j)];
    }
  return out;
}

}  // namespace

MatN filiform_matrix_eval(const Word& w, int d) {
  // Block matrix [[phi^eps, v],[0,1]]; phi has 1s on the diagonal and at
  // (j-1, j), so phi e_j = e_j + e_{j-1} for j >= 1 (0-indexed).
  MatN t = matn_identity(d + 1), tinv = matn_identity(d + 1);
  for (int j = 1; j < d; ++j) t[size_t(j - 1)][size_t(j)] = 1;
  // phi^-1 = sum (-N)^i for the nilpotent superdiagonal N.
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < j; ++i) tinv[size_t(i)][size_t(j)] = ((j - i) % 2 ? -1 : 1);
  MatN acc = matn_identity(d + 1);
  for (Letter l : w) {
    int g = letter_gen(l);
    MatN f;
    if (g == d)
      f = letter_is_inverse(l) ? tinv : t;
    else {
      f = matn_identity(d + 1);
      f[size_t(g)][size_t(d)] = letter_is_inverse(l) ? -1 : 1;
    }
    acc = matn_mul(acc, f);
  }
  return acc;
}

bool filiform_matrix_is_identity(const Word& w, int d) {
  return filiform_matrix_eval(w, d) == matn_identity(d + 1);
}

namespace {

// Letters of G6:m classified: a_i < b_k < c_j, i.e. class 0, 1, 2.
struct G6Letter {
  int cls;
  int idx;  // a: 1..m, b: 1..2, c: 1..m
  int sign;
};

G6Letter g6_classify(Letter l, int m) {
  int g = letter_gen(l), sign = letter_is_inverse(l) ? -1 : 1;
  if (g < m) return {0, g + 1, sign};
  if (g < m + 2) return {1, g - m + 1, sign};
  if (g < 2 * m + 2) return {2, g - m - 1, sign};
  throw std::out_of_range("g6m oracle: bad letter");
}

}  // namespace

std::vector<mpz_class> g6m_pushed_normal_form(const Word& w, int m) {
  std::vector<G6Letter> ls;
  for (Letter l : w) ls.push_back(g6_classify(l, m));

  // Bubble adjacent out-of-order letters using one defining relation per
  // swap; only b^eps a_i^delta swaps create central letters.
  bool moved = true;
  while (moved) {
    moved = false;
    for (size_t i = 0; i + 1 < ls.size(); ++i) {
      G6Letter p = ls[i], q = ls[i + 1];
      if (p.cls == q.cls && p.idx == q.idx && p.sign == -q.sign) {
        ls.erase(ls.begin() + long(i), ls.begin() + long(i) + 2);
        moved = true;
        break;
      }
      if (p.cls > q.cls || (p.cls == q.cls && p.idx > q.idx)) {
        ls[i] = q;
        ls[i + 1] = p;
        if (p.cls == 1 && q.cls == 0) {
          // b1 a_i = a_i b1 c_i;  b2 a_i = a_i b2 c_{i+1}^-1 (i < m).
          if (p.idx == 1)
            ls.insert(ls.begin() + long(i) + 2, {2, q.idx, p.sign * q.sign});
          else if (q.idx < m)
            ls.insert(ls.begin() + long(i) + 2, {2, q.idx + 1, -p.sign * q.sign});
        }
        moved = true;
        break;
      }
    }
  }

  std::vector<mpz_class> out(size_t(2 * m + 2));
  for (const G6Letter& l : ls) {
    size_t base = l.cls == 0 ? 0 : (l.cls == 1 ? size_t(m) : size_t(m) + 2);
    out[base + size_t(l.idx) - 1] += l.sign;
  }
  return out;
}

bool g6m_pushed_is_identity(const Word& w, int m) {
  for (const mpz_class& v : g6m_pushed_normal_form(w, m))
    if (v != 0) return false;
  return true;
}

}  // namespace fillfn::oracles
