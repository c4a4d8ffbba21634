#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/smallgroup.hpp"

namespace fgi {

// Multi-sorted finite structure. Elements of sort s are 0..size-1; a global
// index runs over all sorts in declaration order. Automorphisms preserve
// every sort setwise by definition.
struct FiniteStructure {
  struct Sort {
    std::string name;
    int size = 0;
  };
  struct Relation {
    std::string name;
    std::vector<int> sorts;                  // signature, sort indices
    std::vector<std::vector<int>> tuples;    // local indices, kept sorted+unique
  };
  struct Function {
    std::string name;
    std::vector<int> domain;  // sort indices
    int codomain = 0;
    std::map<std::vector<int>, int> table;  // total on the domain product
  };
  struct Constant {
    std::string name;
    int sort = 0;
    int elem = 0;
  };

  std::vector<Sort> sorts;
  std::vector<Relation> relations;
  std::vector<Function> functions;
  std::vector<Constant> constants;

  int sort_index(const std::string& name) const;
  int total_size() const;
  int sort_offset(int sort) const;
  int global(int sort, int local) const { return sort_offset(sort) + local; }
  std::pair<int, int> local(int global) const;  // (sort, local)

  void validate() const;  // signatures respected, functions total
  void normalize();       // sort and dedup relation tuples
};

inline constexpr int kDefaultSizeLimit = 64;

// Full automorphism group as explicit global permutations, identity first,
// lexicographically ordered. `fix` elements are fixed pointwise; `stabilize`
// names sorts, which the search keeps setwise anyway, and is validated for
// existence only.
struct AutGroup {
  int degree = 0;
  std::vector<std::vector<int>> elements;

  int order() const { return static_cast<int>(elements.size()); }
  Group abstract() const;  // composition table over element indices
  std::vector<std::vector<int>> orbits() const;
  std::vector<int> orbit_of(int g) const;
};

AutGroup automorphism_group(const FiniteStructure& s, const std::vector<int>& fix = {},
                            const std::vector<std::string>& stabilize = {},
                            int size_limit = kDefaultSizeLimit);

// Elements fixed by every automorphism fixing `base` pointwise.
std::vector<int> dcl(const FiniteStructure& s, const std::vector<int>& base,
                     int size_limit = kDefaultSizeLimit);

// First isomorphism s1 -> s2 (deterministic order) restricting to the given
// pairs, or nothing after exhaustive search.
std::optional<std::vector<int>> iso_over(const FiniteStructure& s1,
                                         const FiniteStructure& s2,
                                         const std::vector<std::pair<int, int>>& part,
                                         int size_limit = kDefaultSizeLimit);

// Induced structure on a subset of the sorts; relations and functions whose
// signatures leave the kept sorts are dropped.
FiniteStructure restrict_to_sorts(const FiniteStructure& s,
                                  const std::vector<std::string>& kept);

}  // namespace fgi
