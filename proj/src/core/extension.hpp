#pragma once

#include <optional>
#include <vector>

#include "core/groupoid.hpp"
#include "core/smallgroup.hpp"

namespace fgi {

// --- canonical extension of a groupoid along a supergroup -------------------

struct ExtensionInput {
  FiniteGroupoid base;
  int basepoint = 0;
  Group supergroup;
  // image in the supergroup of each vertex morphism of Mor(*,*), listed in
  // hom(basepoint, basepoint) order
  std::vector<int> embedding;
};

struct ExtensionResult {
  FiniteGroupoid groupoid;
  // base morphism index -> extension morphism index, via (f v^{-1}, e, v)
  std::vector<int> base_embedding;
};

ExtensionResult extend_groupoid(const ExtensionInput& input);

// class of an arbitrary triple (f, g, h) in the extension, for tests probing
// representative independence
int extension_class_of(const ExtensionInput& input, const ExtensionResult& ext, int f,
                       int g, int h);

// --- cocycle data and twisted groupoids --------------------------------------

struct CocycleData {
  Group group;    // G
  Group kernel;   // K, abelian
  int carrier_size = 0;
  // right action: action[x][g] = x . g
  std::vector<std::vector<int>> action;
  // c[g][h] in K, normalized so c(e,.) = c(.,e) = 0
  std::vector<std::vector<int>> cocycle;
  bool normalization_shifted = false;  // set when input needed the standard shift

  // carrier = G acting on itself by right translation
  static CocycleData regular(const Group& g, const Group& k,
                             std::vector<std::vector<int>> c);
};

// Normalizes by the standard shift and checks the cocycle identity and the
// regularity of the action; throws NotACocycle / NotRegular.
CocycleData validate_cocycle(CocycleData data);

struct CocycleGroupoid {
  FiniteGroupoid groupoid;
  ConcreteFunctor functor_;
  CocycleData data;  // validated, normalized
  std::vector<int> mor_carrier_src, mor_carrier_dst, mor_label;  // per morphism
  std::vector<int> mor_gelt;                                     // g_{xy} per morphism
  // the commutant of the carrier action, lifted to groupoid automorphisms;
  // this is the uniformity family for coherent-section search
  std::vector<GroupoidSymmetry> translations;
};

CocycleGroupoid groupoid_from_cocycle(const CocycleData& data);

struct CoboundaryResult {
  bool split = false;
  std::vector<int> witness;  // b: G -> K with b(e) = 0, when split
};

// Exhaustive search over the |K|^(|G|-1) normalized 1-cochains.
CoboundaryResult is_coboundary(const CocycleData& data);

// All normalized 2-cocycles G x G -> K, lexicographically ordered.
std::vector<std::vector<std::vector<int>>> all_normalized_cocycles(const Group& g,
                                                                   const Group& k);

}  // namespace fgi
