#include "core/smallgroup.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "core/error.hpp"

namespace fgi {

void Group::finish() {
  const int n = order();
  if (n == 0) throw DomainError("BadGroupTable", "empty multiplication table");
  for (int a = 0; a < n; ++a) {
    if (static_cast<int>(mul_[a].size()) != n)
      throw DomainError("BadGroupTable", "table is not square");
    for (int b = 0; b < n; ++b)
      if (mul_[a][b] < 0 || mul_[a][b] >= n)
        throw DomainError("BadGroupTable", "entry out of range");
  }
  id_ = -1;
  for (int e = 0; e < n; ++e) {
    bool ok = true;
    for (int a = 0; a < n && ok; ++a) ok = mul_[e][a] == a && mul_[a][e] == a;
    if (ok) {
      id_ = e;
      break;
    }
  }
  if (id_ < 0) throw DomainError("BadGroupTable", "no identity element");
  inv_.assign(n, -1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b)
      if (mul_[a][b] == id_ && mul_[b][a] == id_) {
        inv_[a] = b;
        break;
      }
    if (inv_[a] < 0)
      throw DomainError("BadGroupTable", "element without inverse",
                        json{{"element", a}});
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (mul_[mul_[a][b]][c] != mul_[a][mul_[b][c]])
          throw DomainError("BadGroupTable", "associativity fails",
                            json{{"triple", {a, b, c}}});
}

Group Group::from_table(const std::vector<std::vector<int>>& mul) {
  Group g;
  g.mul_ = mul;
  g.finish();
  return g;
}

Group Group::cyclic(int n) {
  Group g;
  g.mul_.assign(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) g.mul_[a][b] = (a + b) % n;
  g.finish();
  return g;
}

Group Group::direct_product(const Group& a, const Group& b) {
  const int na = a.order(), nb = b.order();
  Group g;
  g.mul_.assign(na * nb, std::vector<int>(na * nb));
  for (int x = 0; x < na * nb; ++x)
    for (int y = 0; y < na * nb; ++y) {
      int xa = x / nb, xb = x % nb, ya = y / nb, yb = y % nb;
      g.mul_[x][y] = a.mul(xa, ya) * nb + b.mul(xb, yb);
    }
  g.finish();
  return g;
}

namespace {

void all_perms(int n, std::vector<std::vector<int>>& out) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
}

}  // namespace

Group Group::symmetric(int n) {
  std::vector<std::vector<int>> perms;
  all_perms(n, perms);
  std::map<std::vector<int>, int> index;
  for (size_t i = 0; i < perms.size(); ++i) index[perms[i]] = static_cast<int>(i);
  const int m = static_cast<int>(perms.size());
  Group g;
  g.mul_.assign(m, std::vector<int>(m));
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y) {
      std::vector<int> comp(n);
      for (int i = 0; i < n; ++i) comp[i] = perms[x][perms[y][i]];
      g.mul_[x][y] = index[comp];
    }
  g.finish();
  return g;
}

int Group::element_order(int a) const {
  int k = 1, x = a;
  while (x != id_) {
    x = mul_[x][a];
    ++k;
  }
  return k;
}

std::vector<int> Group::order_multiset() const {
  std::vector<int> v(order());
  for (int a = 0; a < order(); ++a) v[a] = element_order(a);
  std::sort(v.begin(), v.end());
  return v;
}

bool Group::is_abelian() const {
  for (int a = 0; a < order(); ++a)
    for (int b = a + 1; b < order(); ++b)
      if (mul_[a][b] != mul_[b][a]) return false;
  return true;
}

std::vector<int> Group::closure(std::vector<int> gens) const {
  std::set<int> seen{id_};
  std::vector<int> frontier{id_};
  for (int g : gens)
    if (seen.insert(g).second) frontier.push_back(g);
  while (!frontier.empty()) {
    std::vector<int> next;
    for (int x : frontier)
      for (int g : gens) {
        int y = mul_[x][g];
        if (seen.insert(y).second) next.push_back(y);
        y = mul_[g][x];
        if (seen.insert(y).second) next.push_back(y);
      }
    frontier = std::move(next);
  }
  return std::vector<int>(seen.begin(), seen.end());
}

std::vector<int> Group::derived_subgroup() const {
  std::vector<int> comms;
  for (int a = 0; a < order(); ++a)
    for (int b = 0; b < order(); ++b)
      comms.push_back(mul_[mul_[a][b]][inv_[mul_[b][a]]]);
  std::sort(comms.begin(), comms.end());
  comms.erase(std::unique(comms.begin(), comms.end()), comms.end());
  return closure(comms);
}

bool Group::is_solvable() const {
  std::vector<int> cur(order());
  std::iota(cur.begin(), cur.end(), 0);
  while (cur.size() > 1) {
    // restrict to the subgroup `cur` and take its derived subgroup
    std::map<int, int> local;
    for (size_t i = 0; i < cur.size(); ++i) local[cur[i]] = static_cast<int>(i);
    std::vector<std::vector<int>> sub(cur.size(), std::vector<int>(cur.size()));
    for (size_t i = 0; i < cur.size(); ++i)
      for (size_t j = 0; j < cur.size(); ++j) sub[i][j] = local[mul_[cur[i]][cur[j]]];
    Group h = from_table(sub);
    std::vector<int> der = h.derived_subgroup();
    if (der.size() == cur.size()) return false;  // perfect subgroup
    std::vector<int> lifted;
    for (int d : der) lifted.push_back(cur[d]);
    cur = lifted;
  }
  return true;
}

std::vector<std::vector<int>> Group::all_subgroups() const {
  std::set<std::vector<int>> found;
  std::vector<std::vector<int>> frontier;
  std::vector<int> triv{id_};
  found.insert(triv);
  frontier.push_back(triv);
  while (!frontier.empty()) {
    std::vector<std::vector<int>> next;
    for (const auto& h : frontier) {
      for (int g = 0; g < order(); ++g) {
        if (std::binary_search(h.begin(), h.end(), g)) continue;
        std::vector<int> gens = h;
        gens.push_back(g);
        std::vector<int> k = closure(gens);
        if (found.insert(k).second) next.push_back(k);
      }
    }
    frontier = std::move(next);
  }
  return std::vector<std::vector<int>>(found.begin(), found.end());
}

std::optional<std::vector<int>> Group::isomorphism(const Group& a, const Group& b) {
  if (a.order() != b.order()) return std::nullopt;
  if (a.order_multiset() != b.order_multiset()) return std::nullopt;
  const int n = a.order();
  // backtracking over images, elements in index order
  std::vector<int> img(n, -1), used(n, 0);
  std::vector<int> aorder(n), border(n);
  for (int i = 0; i < n; ++i) aorder[i] = a.element_order(i);
  for (int i = 0; i < n; ++i) border[i] = b.element_order(i);

  auto consistent = [&](int x) {
    for (int y = 0; y < n; ++y) {
      if (img[y] < 0) continue;
      int xy = a.mul(x, y), yx = a.mul(y, x);
      if (img[xy] >= 0 && img[xy] != b.mul(img[x], img[y])) return false;
      if (img[yx] >= 0 && img[yx] != b.mul(img[y], img[x])) return false;
    }
    return true;
  };

  std::vector<int> stack;
  auto rec = [&](auto&& self, int x) -> bool {
    if (x == n) return true;
    if (img[x] >= 0) return self(self, x + 1);
    for (int t = 0; t < n; ++t) {
      if (used[t] || aorder[x] != border[t]) continue;
      img[x] = t;
      used[t] = 1;
      if (consistent(x) && self(self, x + 1)) return true;
      img[x] = -1;
      used[t] = 0;
    }
    return false;
  };
  img[a.identity()] = b.identity();
  used[b.identity()] = 1;
  if (rec(rec, 0)) return img;
  return std::nullopt;
}

std::string Group::iso_name() const {
  const int n = order();
  const auto om = order_multiset();
  auto count = [&](int k) { return std::count(om.begin(), om.end(), k); };
  if (n <= 15) {
    switch (n) {
      case 1: return "Z1";
      case 2: return "Z2";
      case 3: return "Z3";
      case 4: return count(4) ? "Z4" : "Z2xZ2";
      case 5: return "Z5";
      case 6: return is_abelian() ? "Z6" : "S3";
      case 7: return "Z7";
      case 8:
        if (count(8)) return "Z8";
        if (is_abelian()) return count(4) ? "Z4xZ2" : "Z2xZ2xZ2";
        return count(2) == 1 ? "Q8" : "D4";
      case 9: return count(9) ? "Z9" : "Z3xZ3";
      case 10: return is_abelian() ? "Z10" : "D5";
      case 11: return "Z11";
      case 12:
        if (count(12)) return "Z12";
        if (is_abelian()) return "Z6xZ2";
        if (count(3) == 8) return "A4";
        return count(2) == 7 ? "D6" : "Dic3";
      case 13: return "Z13";
      case 14: return is_abelian() ? "Z14" : "D7";
      case 15: return "Z15";
    }
  }
  std::ostringstream os;
  os << "order" << n << ":[";
  for (size_t i = 0; i < om.size(); ++i) os << (i ? "," : "") << om[i];
  os << "]";
  return os.str();
}

}  // namespace fgi
