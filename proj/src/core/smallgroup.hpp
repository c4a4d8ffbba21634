#pragma once

#include <optional>
#include <string>
#include <vector>

namespace fgi {

// A finite group as a multiplication table over indices 0..n-1.
// Tables are validated on construction via from_table(); the named
// constructors build already-lawful tables.
class Group {
public:
  Group() = default;

  static Group from_table(const std::vector<std::vector<int>>& mul);
  static Group cyclic(int n);
  static Group direct_product(const Group& a, const Group& b);
  static Group symmetric(int n);  // n <= 5
  static Group klein4() { return direct_product(cyclic(2), cyclic(2)); }

  int order() const { return static_cast<int>(mul_.size()); }
  int identity() const { return id_; }
  int mul(int a, int b) const { return mul_[a][b]; }
  int inv(int a) const { return inv_[a]; }

  int element_order(int a) const;
  std::vector<int> order_multiset() const;  // sorted element orders
  bool is_abelian() const;
  bool is_solvable() const;

  // Subgroup generated by `gens`, as a sorted element list.
  std::vector<int> closure(std::vector<int> gens) const;
  // Every subgroup, each a sorted element list, lattice-enumerated.
  std::vector<std::vector<int>> all_subgroups() const;
  // Commutator subgroup [G,G].
  std::vector<int> derived_subgroup() const;

  // Abstract-isomorphism test by exhaustive bijection search; intended for
  // orders <= ~24.
  static std::optional<std::vector<int>> isomorphism(const Group& a, const Group& b);

  // Name lookup for orders <= 15 (order + element-order multiset is enough
  // at that size); larger groups get an "order<N>" fingerprint string.
  std::string iso_name() const;

private:
  std::vector<std::vector<int>> mul_;
  int id_ = 0;
  std::vector<int> inv_;

  void finish();  // computes id_/inv_, checks group laws
};

}  // namespace fgi
