#pragma once

#include <vector>

namespace fgi {

// Arithmetic for GF(q), q = p^k a prime power. Elements are encoded as
// integers 0..q-1; for k > 1 the encoding is base-p digit vectors of the
// polynomial representation modulo a monic irreducible found by search.
class GF {
public:
  explicit GF(int q);

  int q() const { return q_; }
  int p() const { return p_; }
  int deg() const { return k_; }

  int add(int a, int b) const { return add_[a][b]; }
  int sub(int a, int b) const { return add_[a][neg_[b]]; }
  int neg(int a) const { return neg_[a]; }
  int mul(int a, int b) const { return mul_[a][b]; }
  int inv(int a) const;
  int pow(int a, int e) const;

private:
  int q_ = 0, p_ = 0, k_ = 0;
  std::vector<std::vector<int>> add_, mul_;
  std::vector<int> neg_, inv_;
};

}  // namespace fgi
