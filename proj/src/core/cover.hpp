#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/extension.hpp"
#include "core/groupoid.hpp"
#include "core/structure.hpp"

namespace fgi {

// The cover groupoid: one new object per iso-class, carrying tagged copies
// of the representative's hom-sets and fiber.
struct CoverStructure {
  FiniteGroupoid groupoid;   // objects 0..n-1 are the originals, stars follow
  ConcreteFunctor functor_;
  std::vector<int> j_morphisms;  // original morphism -> cover morphism
  std::vector<int> stars;        // per iso-class
  std::vector<int> rho;          // cover object -> copied original object
  int original_objects = 0;

  // carried when the input groupoid came from cocycle data; the attachment
  // needs it to name its transport relations
  std::optional<CocycleData> presentation;
};

CoverStructure build_cover(const FiniteGroupoid& g, const ConcreteFunctor& f,
                           const std::vector<int>& representatives = {});
CoverStructure build_cover(const CocycleGroupoid& cg,
                           const std::vector<int>& representatives = {});

// Three-sorted rendering (obj, mor, fib) with the category maps as relations
// and the j-image marked; this is the serialized form and the carrier of the
// uniqueness-up-to-isomorphism checks.
FiniteStructure cover_to_structure(const CoverStructure& cover);

// Pinned pairs for iso_over between two builds of the same cover: the
// embedded groupoid (objects, morphisms, original fibers) pointwise.
std::vector<std::pair<int, int>> cover_embedded_part(const CoverStructure& a,
                                                     const CoverStructure& b);

// Base whose automorphism group is exactly G: the carrier with one relation
// per group element.
FiniteStructure make_cayley_base(const Group& g, const std::string& sort_name = "pt");

// One structure holding the base and the fibers of the embedded groupoid,
// linked by labeled transport relations derived from the cover's cocycle
// presentation. Base sorts come first.
struct AttachedCover {
  FiniteStructure combined;
  std::vector<std::string> base_sorts;
  std::string fiber_sort;
};

AttachedCover attach_to_base(const FiniteStructure& base, const CoverStructure& cover,
                             const std::vector<int>& anchor);

// Degenerate attachment: no cover, N = base.
AttachedCover attach_to_base(const FiniteStructure& base);

struct SplitReport {
  int total_order = 0;
  int kernel_order = 0;
  int image_order = 0;
  int base_aut_order = 0;
  bool surjective = false;
  std::string kernel_name;
  std::string total_name;
  bool split = false;
  std::vector<std::vector<int>> complement;  // witness permutations when split
  bool almost_split = false;
  int naming_bound = 0;
  std::vector<int> kernel_orders;  // element orders of the full group
};

SplitReport check_exact_sequence(const FiniteStructure& n,
                                 const std::vector<std::string>& base_sorts,
                                 int size_limit = kDefaultSizeLimit);

SplitReport is_split(const FiniteStructure& n, const std::vector<std::string>& base_sorts,
                     int naming_bound, int size_limit = kDefaultSizeLimit);

// Distinct restrictions of base-fixing automorphisms to one original fiber;
// compare with the vertex-group order (Lemma cover's kernel identification).
int kernel_fiber_order(const FiniteStructure& n,
                       const std::vector<std::string>& base_sorts,
                       const std::string& fiber_sort, int fiber_lo, int fiber_hi,
                       int size_limit = kDefaultSizeLimit);

}  // namespace fgi
