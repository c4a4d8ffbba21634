#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/smallgroup.hpp"

namespace fgi {

// Raw tables as they arrive from a manifest; validate() turns them into a
// FiniteGroupoid or throws AxiomViolation with the witnessing data.
struct RawGroupoid {
  int n_objects = 0;
  struct RawMor {
    int id = 0, src = 0, dst = 0;
  };
  std::vector<RawMor> morphisms;
  std::vector<std::array<int, 3>> compose;   // (g, f, g o f) by morphism id
  std::vector<std::pair<int, int>> identity;  // (object, morphism id)
};

class FiniteGroupoid {
public:
  static FiniteGroupoid validate(const RawGroupoid& raw);

  int objects() const { return n_objects_; }
  int morphisms() const { return static_cast<int>(src_.size()); }
  int src(int m) const { return src_[m]; }
  int dst(int m) const { return dst_[m]; }
  int ext_id(int m) const { return ext_id_[m]; }
  int identity(int a) const { return identity_[a]; }
  int inverse(int m) const { return inverse_[m]; }
  // g o f for f: a->b, g: b->c; -1 when not composable
  int compose(int g, int f) const { return compose_[g][f]; }
  const std::vector<int>& hom(int a, int b) const { return hom_[a * n_objects_ + b]; }

  bool connected() const;
  std::vector<int> iso_class_of() const;  // object -> class index

  // vertex group Mor(a,a) as an abstract table; `elems` receives the
  // morphism indices in table order
  Group vertex_group(int a, std::vector<int>* elems = nullptr) const;

  // conjugation transport G_b -> G_a along h in Mor(a,b), as a map on
  // vertex morphism indices
  std::map<int, int> transport(int h) const;

  RawGroupoid to_raw() const;

private:
  int n_objects_ = 0;
  std::vector<int> src_, dst_, ext_id_, identity_, inverse_;
  std::vector<std::vector<int>> compose_;
  std::vector<std::vector<int>> hom_;

  friend FiniteGroupoid assemble_groupoid(int n_objects, std::vector<int> src,
                                          std::vector<int> dst,
                                          std::vector<std::vector<int>> compose);
};

// Builds and validates a groupoid from already-indexed tables (internal
// constructors); identities/inverses are located, laws checked.
FiniteGroupoid assemble_groupoid(int n_objects, std::vector<int> src,
                                 std::vector<int> dst,
                                 std::vector<std::vector<int>> compose);

FiniteGroupoid pair_groupoid(int n);
FiniteGroupoid group_as_groupoid(const Group& g);

// --- concrete functors ------------------------------------------------------

struct ConcreteFunctor {
  std::vector<int> fiber_size;              // per object
  std::vector<std::vector<int>> action;     // per morphism: src fiber -> dst fiber
};

void validate_functor(const FiniteGroupoid& g, const ConcreteFunctor& f);
bool functor_faithful(const FiniteGroupoid& g, const ConcreteFunctor& f);

// --- classification ----------------------------------------------------------

struct VertexInfo {
  int object = 0;
  int order = 0;
  std::vector<int> order_multiset;
  std::string iso_name;
  bool abelian = false;
  bool solvable = false;
};

struct GroupoidReport {
  std::vector<std::vector<int>> iso_classes;  // object lists
  std::vector<VertexInfo> vertex_info;        // one per iso-class representative
  bool connected = false;
  bool abelian = false;
  bool solvable = false;
};

GroupoidReport classify(const FiniteGroupoid& g);

// --- quotients ---------------------------------------------------------------

// per-object subsets of Mor(a,a), by morphism index
using NormalSystem = std::vector<std::vector<int>>;

void validate_normal_system(const FiniteGroupoid& g, const NormalSystem& n);
FiniteGroupoid quotient_by_normal_system(const FiniteGroupoid& g,
                                         const NormalSystem& n,
                                         std::vector<int>* class_of = nullptr);

// --- collapse of trivial groupoids ---------------------------------------------

struct CollapseResult {
  int set_size = 0;
  // bijection fiber(a) -> S per object
  std::vector<std::vector<int>> to_quotient;
};

CollapseResult collapse_trivial(const FiniteGroupoid& g, const ConcreteFunctor& f);

// --- coherent sections --------------------------------------------------------

struct GroupoidSymmetry {
  std::vector<int> on_objects;
  std::vector<int> on_morphisms;
};

void validate_symmetry(const FiniteGroupoid& g, const GroupoidSymmetry& s);

// Searches for s(a,b) in Mor(a,b) with s(a,a) = id and s(b,c) o s(a,b) =
// s(a,c), invariant under every symmetry in `uniformity`. Backtracking over a
// spanning tree of objects; the returned vector is indexed a*n+b. A bare
// connected groupoid (empty `uniformity`) always admits one; the uniformity
// family is what carries the splitting obstruction at this scale.
std::optional<std::vector<int>> find_coherent_section(
    const FiniteGroupoid& g, const std::vector<GroupoidSymmetry>& uniformity = {});

// --- equivalence of concrete groupoids -----------------------------------------

bool equivalent_concrete_groupoids(const FiniteGroupoid& g1, const ConcreteFunctor& f1,
                                   const FiniteGroupoid& g2, const ConcreteFunctor& f2);

}  // namespace fgi
