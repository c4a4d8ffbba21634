#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/gf.hpp"

namespace fgi {

using Vec = std::vector<int>;
using Mat = std::vector<Vec>;  // row vectors over a GF

// --- basic linear algebra -------------------------------------------------

Mat rref(const GF& f, Mat m);           // reduced row echelon form, zero rows dropped
int rank(const GF& f, const Mat& m);
Mat kernel_basis(const GF& f, const Mat& m);  // right null space, rref rows
bool in_span(const GF& f, const Mat& rref_basis, const Vec& v);
Vec mat_apply(const GF& f, const Mat& m, const Vec& v);  // m is row-major map rows x cols
std::vector<Vec> span_elements(const GF& f, const Mat& basis, int ambient);

// --- Pluecker coding ------------------------------------------------------

// Projective point in the d-th exterior power of the ambient space; coords
// are indexed by d-subsets of columns in lexicographic order and normalized
// so that the first nonzero coordinate is 1. `empty` marks the designated
// code of the zero subspace (used by the point-set coder when nothing
// vanishes).
struct SubspaceCode {
  int q = 0;
  int ambient_dim = 0;
  int degree = 0;
  bool empty = false;
  Vec coords;
};

std::vector<std::vector<int>> d_subsets(int n, int d);  // lex order

SubspaceCode code_subspace(const GF& f, const Mat& spanning, int ambient_dim);
Mat decode_subspace(const GF& f, const SubspaceCode& code);  // rref basis

// --- flags ----------------------------------------------------------------

struct FlaggedSpace {
  int q = 0;
  int dim = 0;
  std::vector<std::string> basis_labels;
  std::vector<Mat> flag;  // flag[i] = rref basis of W_{i+1}, i = 0..dim-1
};

FlaggedSpace standard_flag(const GF& f, int n, const std::string& label_prefix);
FlaggedSpace flag_tensor(const GF& f, const FlaggedSpace& v, const FlaggedSpace& w);
FlaggedSpace flag_dual(const GF& f, const FlaggedSpace& v);
void check_flag(const GF& f, const FlaggedSpace& v);  // strict chain, dim i at step i

// Element code of a line in a flagged space: the level k plus the unique
// vector of U congruent to the canonical generator of W_{k+1}/W_k.
struct LineCode {
  int level = 0;  // the k with U <= W_{k+1}, U not <= W_k
  Vec element;    // representative in ambient coordinates
};

LineCode code_flagged_line(const GF& f, const Vec& generator, const FlaggedSpace& w);

// --- point-set coding -----------------------------------------------------

struct PointSetCode {
  SubspaceCode code;       // code of the vanishing space in coefficient space
  int monomial_count = 0;  // dimension of the reduced-polynomial space used
  bool complete = false;   // degree cap reached n(q-1)
};

PointSetCode code_point_set(const GF& f, int n, const std::vector<Vec>& points,
                            int degree_cap);

// --- root torsors ----------------------------------------------------------

struct RootTorsor {
  int q = 0;
  int m = 0;
  int class_count = 0;                 // gcd(m, q-1)
  std::vector<std::vector<int>> classes;  // partition of k^* by (k^*)^m-conjugacy
  std::vector<int> mu_m;               // m-th roots of unity
  std::vector<int> t_map;              // t(w) = w^m on scalar coordinates, w in k^*
};

RootTorsor root_torsor(const GF& f, int m);

}  // namespace fgi
