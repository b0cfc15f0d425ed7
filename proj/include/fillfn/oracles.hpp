#pragma once

#include <fillfn/word.hpp>

#include <gmpxx.h>

#include <array>
#include <vector>

// Independent representations used only to cross-check the group models.
// Each one evaluates words by a different mechanism than the model it
// validates (explicit matrices, function composition, one-relation-at-a-
// time rewriting), so shared bugs are unlikely.
namespace fillfn::oracles {

// Unitriangular 3x3 integer matrices, a = E12, b = E23, c = E13.
using Mat3 = std::array<std::array<mpz_class, 3>, 3>;
Mat3 heis_matrix_eval(const Word& w);
bool heis_matrix_is_identity(const Word& w);

// Dyadic affine maps x -> 2^k x + q as actual functions: an affine map is
// determined by its images of 0 and 1, and words compose functionally.
struct AffinePoints {
  mpq_class at0, at1;
  bool operator==(const AffinePoints&) const = default;
};
AffinePoints bs12_affine_eval(const Word& w);
bool bs12_affine_is_identity(const Word& w);

// (d+1)x(d+1) integer matrices: t the unipotent block phi (e_i -> e_i +
// e_{i-1}), a_i the translation by e_i.
using MatN = std::vector<std::vector<mpz_class>>;
MatN filiform_matrix_eval(const Word& w, int d);
bool filiform_matrix_is_identity(const Word& w, int d);

// Central-extension normal form computed by literal relation pushing:
// adjacent out-of-order letters are swapped one defining relation at a
// time until the word is sorted into a-, b-, c-blocks.  Returns exponent
// vectors (x_1..x_m, y_1, y_2, z_1..z_m).
std::vector<mpz_class> g6m_pushed_normal_form(const Word& w, int m);
bool g6m_pushed_is_identity(const Word& w, int m);

}  // namespace fillfn::oracles
