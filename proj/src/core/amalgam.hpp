#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "core/structure.hpp"

namespace fgi {

// Faces are keyed by subset bitmask over ground indices 0..n-1.
using Mask = std::uint32_t;

struct AmalgamationProblem {
  int n = 0;
  std::string theory;  // pure_set | vector_space | parity
  int q = 2;           // field order for vector_space
  std::map<Mask, FiniteStructure> faces;
  // u -> v element maps (global indices), for every present pair u < v
  std::map<std::pair<Mask, Mask>, std::vector<int>> embeddings;
};

struct Solution {
  FiniteStructure top;
  std::map<Mask, std::vector<int>> into_top;
};

struct SolutionSet {
  std::vector<Solution> solutions;
};

class TheoryPlugin {
public:
  virtual ~TheoryPlugin() = default;
  virtual std::string name() const = 0;
  virtual bool is_instance(const FiniteStructure& s) const = 0;
  // acl-proxy closure of a global-element set inside an instance
  virtual std::vector<int> closure(const FiniteStructure& s,
                                   std::vector<int> base) const = 0;
  virtual bool independent(const FiniteStructure& ambient, const std::vector<int>& a,
                           const std::vector<int>& b, const std::vector<int>& c) const = 0;
  // candidate tops with embeddings for every face; solve() filters and dedups
  virtual std::vector<Solution> completions(const AmalgamationProblem& p) const = 0;
  virtual std::vector<AmalgamationProblem> generate(int n, int bound) const = 0;
};

std::unique_ptr<TheoryPlugin> make_plugin(const std::string& name, int q = 2);

// --- problems ---------------------------------------------------------------

void validate_problem(const AmalgamationProblem& p, bool partial_ok = false);
SolutionSet solve(const AmalgamationProblem& p);

bool solutions_equivalent(const AmalgamationProblem& p, const Solution& s1,
                          const Solution& s2);

AmalgamationProblem permute_problem(const AmalgamationProblem& p,
                                    const std::vector<int>& perm);

// --- n-existence / n-uniqueness ----------------------------------------------

struct NPropertyReport {
  int n = 0;
  bool existence = true;
  bool uniqueness = true;
  int problems_checked = 0;
  std::vector<int> solution_counts;
  std::optional<AmalgamationProblem> existence_witness;   // 0 solutions
  std::optional<AmalgamationProblem> uniqueness_witness;  // >= 2 solutions
};

NPropertyReport check_n_property(const TheoryPlugin& plugin, int n, int bound);

// --- the 3-dimensional conditions ---------------------------------------------

struct ThreeULReport {
  bool condition1 = false;  // a(12) ^ dcl(a13,a23) against dcl(a1,a2), inside the top
  bool condition2 = false;  // orbit rendering of the type implication
  bool agree = false;
};

ThreeULReport check_3ul(const AmalgamationProblem& p, const Solution& sol);

struct SUReport {
  bool condition3 = false;  // dcl-intersection at u0 = {1..n-1}
  bool condition4 = false;  // relative automorphism restriction is surjective
  bool agree = false;
};

SUReport check_su(const AmalgamationProblem& p, const Solution& sol);

// --- twisting and automorphic problems -----------------------------------------

// sigma permutes the globals of faces(u0) and must fix every proper subface
// image pointwise.
Solution twist_solution(const AmalgamationProblem& p, const Solution& sol, Mask u0,
                        const std::vector<int>& sigma);

struct AutomorphicProblem {
  AmalgamationProblem problem;
  std::map<Mask, std::vector<int>> sigma;  // compatible family, all faces
};

void validate_automorphic(const AutomorphicProblem& ap);

struct AutomorphicResult {
  bool solved = false;
  std::string failure;  // NoBaseSolution | NoEquivariantExtension
  Solution solution;
  std::vector<int> top_sigma;
};

AutomorphicResult solve_with_automorphism(const AutomorphicProblem& ap);

// --- step-up ------------------------------------------------------------------

struct StepUpResult {
  bool success = false;
  Mask failed_face = 0;  // when a sub-problem had no solution
  // completed functor: faces for every subset of {0..n+k-1} incl. the top
  std::map<Mask, FiniteStructure> faces;
  std::map<std::pair<Mask, Mask>, std::vector<int>> embeddings;
};

// `partial` provides faces for every u with |u| < n over ground size n+k.
StepUpResult stepup_solve(const TheoryPlugin& plugin, const AmalgamationProblem& partial,
                          int n, int k);

// --- generators ----------------------------------------------------------------

AmalgamationProblem generate_pure_set(int n, const std::vector<int>& sizes = {});
AmalgamationProblem generate_vector_space(int q, int n, const std::vector<int>& dims = {});
// parity bits: one per 3-subset of the ground set, lexicographic order;
// empty means all even
AmalgamationProblem generate_parity(int n, const std::vector<int>& parity_bits = {});

}  // namespace fgi
