#include "core/groupoid.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "core/error.hpp"

namespace fgi {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

static void check_groupoid_laws(int n_objects, const std::vector<int>& src,
                                const std::vector<int>& dst,
                                const std::vector<std::vector<int>>& compose,
                                const std::vector<int>& ext_id,
                                std::vector<int>& identity_out,
                                std::vector<int>& inverse_out) {
  const int m = static_cast<int>(src.size());
  auto name = [&](int i) { return ext_id.empty() ? i : ext_id[i]; };

  for (int g = 0; g < m; ++g)
    for (int f = 0; f < m; ++f) {
      bool composable = dst[f] == src[g];
      int r = compose[g][f];
      if (composable) {
        if (r < 0)
          throw DomainError("AxiomViolation", "compose undefined on a composable pair",
                            json{{"g", name(g)}, {"f", name(f)}});
        if (src[r] != src[f] || dst[r] != dst[g])
          throw DomainError("AxiomViolation", "compose lands outside the hom-set",
                            json{{"g", name(g)}, {"f", name(f)}, {"result", name(r)}});
      } else if (r >= 0) {
        throw DomainError("AxiomViolation", "compose defined on a non-composable pair",
                          json{{"g", name(g)}, {"f", name(f)}});
      }
    }

  identity_out.assign(n_objects, -1);
  for (int a = 0; a < n_objects; ++a) {
    for (int e = 0; e < m; ++e) {
      if (src[e] != a || dst[e] != a) continue;
      bool unit = true;
      for (int f = 0; f < m && unit; ++f) {
        if (dst[f] == a && compose[e][f] != f) unit = false;
        if (src[f] == a && compose[f][e] != f) unit = false;
      }
      if (unit) {
        identity_out[a] = e;
        break;
      }
    }
    if (identity_out[a] < 0)
      throw DomainError("AxiomViolation", "object has no two-sided unit",
                        json{{"object", a}});
  }

  for (int h = 0; h < m; ++h)
    for (int g = 0; g < m; ++g) {
      if (dst[g] != src[h]) continue;
      for (int f = 0; f < m; ++f) {
        if (dst[f] != src[g]) continue;
        if (compose[compose[h][g]][f] != compose[h][compose[g][f]])
          throw DomainError("AxiomViolation", "associativity fails",
                            json{{"h", name(h)}, {"g", name(g)}, {"f", name(f)}});
      }
    }

  inverse_out.assign(m, -1);
  for (int f = 0; f < m; ++f) {
    for (int g = 0; g < m; ++g) {
      if (src[g] != dst[f] || dst[g] != src[f]) continue;
      if (compose[g][f] == identity_out[src[f]] && compose[f][g] == identity_out[dst[f]]) {
        inverse_out[f] = g;
        break;
      }
    }
    if (inverse_out[f] < 0)
      throw DomainError("AxiomViolation", "morphism has no two-sided inverse",
                        json{{"morphism", name(f)}});
  }
}

FiniteGroupoid FiniteGroupoid::validate(const RawGroupoid& raw) {
  if (raw.n_objects <= 0)
    throw DomainError("AxiomViolation", "groupoid needs at least one object");
  std::map<int, int> idx;
  for (const auto& mor : raw.morphisms) {
    if (idx.count(mor.id))
      throw DomainError("AxiomViolation", "duplicate morphism id", json{{"id", mor.id}});
    if (mor.src < 0 || mor.src >= raw.n_objects || mor.dst < 0 || mor.dst >= raw.n_objects)
      throw DomainError("AxiomViolation", "morphism endpoints out of range",
                        json{{"id", mor.id}});
    idx[mor.id] = static_cast<int>(idx.size());
  }
  const int m = static_cast<int>(raw.morphisms.size());
  std::vector<int> src(m), dst(m), ext(m);
  for (const auto& mor : raw.morphisms) {
    int i = idx[mor.id];
    src[i] = mor.src;
    dst[i] = mor.dst;
    ext[i] = mor.id;
  }
  std::vector<std::vector<int>> compose(m, std::vector<int>(m, -1));
  for (const auto& entry : raw.compose) {
    auto need = [&](int id) {
      auto it = idx.find(id);
      if (it == idx.end())
        throw DomainError("AxiomViolation", "compose references unknown morphism",
                          json{{"id", id}});
      return it->second;
    };
    compose[need(entry[0])][need(entry[1])] = need(entry[2]);
  }

  FiniteGroupoid g;
  g.n_objects_ = raw.n_objects;
  g.src_ = src;
  g.dst_ = dst;
  g.ext_id_ = ext;
  g.compose_ = compose;
  check_groupoid_laws(raw.n_objects, src, dst, compose, ext, g.identity_, g.inverse_);

  // the identity list, when supplied, must agree
  for (auto [obj, id] : raw.identity) {
    if (obj < 0 || obj >= raw.n_objects || !idx.count(id) ||
        g.identity_[obj] != idx[id])
      throw DomainError("AxiomViolation", "declared identity is not a unit",
                        json{{"object", obj}, {"id", id}});
  }

  g.hom_.assign(raw.n_objects * raw.n_objects, {});
  for (int i = 0; i < m; ++i) g.hom_[src[i] * raw.n_objects + dst[i]].push_back(i);
  return g;
}

FiniteGroupoid assemble_groupoid(int n_objects, std::vector<int> src,
                                 std::vector<int> dst,
                                 std::vector<std::vector<int>> compose) {
  FiniteGroupoid g;
  g.n_objects_ = n_objects;
  g.src_ = std::move(src);
  g.dst_ = std::move(dst);
  g.compose_ = std::move(compose);
  const int m = static_cast<int>(g.src_.size());
  g.ext_id_.resize(m);
  std::iota(g.ext_id_.begin(), g.ext_id_.end(), 0);
  check_groupoid_laws(n_objects, g.src_, g.dst_, g.compose_, g.ext_id_, g.identity_,
                      g.inverse_);
  g.hom_.assign(n_objects * n_objects, {});
  for (int i = 0; i < m; ++i) g.hom_[g.src_[i] * n_objects + g.dst_[i]].push_back(i);
  return g;
}

bool FiniteGroupoid::connected() const {
  auto cls = iso_class_of();
  return std::all_of(cls.begin(), cls.end(), [&](int c) { return c == cls[0]; });
}

std::vector<int> FiniteGroupoid::iso_class_of() const {
  UnionFind uf(n_objects_);
  for (int i = 0; i < morphisms(); ++i) uf.unite(src_[i], dst_[i]);
  std::map<int, int> renumber;
  std::vector<int> out(n_objects_);
  for (int a = 0; a < n_objects_; ++a) {
    int root = uf.find(a);
    auto [it, fresh] = renumber.emplace(root, static_cast<int>(renumber.size()));
    out[a] = it->second;
    (void)fresh;
  }
  return out;
}

Group FiniteGroupoid::vertex_group(int a, std::vector<int>* elems) const {
  const auto& loop = hom(a, a);
  std::map<int, int> local;
  for (size_t i = 0; i < loop.size(); ++i) local[loop[i]] = static_cast<int>(i);
  std::vector<std::vector<int>> table(loop.size(), std::vector<int>(loop.size()));
  for (size_t i = 0; i < loop.size(); ++i)
    for (size_t j = 0; j < loop.size(); ++j)
      table[i][j] = local[compose_[loop[i]][loop[j]]];
  if (elems) *elems = loop;
  return Group::from_table(table);
}

std::map<int, int> FiniteGroupoid::transport(int h) const {
  // x in Mor(b,b) maps to h^{-1} o x o h in Mor(a,a), h: a -> b
  const int a = src_[h], b = dst_[h];
  std::map<int, int> out;
  for (int x : hom(b, b)) out[x] = compose_[inverse_[h]][compose_[x][h]];
  (void)a;
  return out;
}

RawGroupoid FiniteGroupoid::to_raw() const {
  RawGroupoid raw;
  raw.n_objects = n_objects_;
  for (int i = 0; i < morphisms(); ++i)
    raw.morphisms.push_back({ext_id_[i], src_[i], dst_[i]});
  for (int g = 0; g < morphisms(); ++g)
    for (int f = 0; f < morphisms(); ++f)
      if (compose_[g][f] >= 0)
        raw.compose.push_back({ext_id_[g], ext_id_[f], ext_id_[compose_[g][f]]});
  for (int a = 0; a < n_objects_; ++a) raw.identity.push_back({a, ext_id_[identity_[a]]});
  return raw;
}

FiniteGroupoid pair_groupoid(int n) {
  std::vector<int> src, dst;
  std::vector<std::vector<int>> table(n * n, std::vector<int>(n * n, -1));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      src.push_back(a);
      dst.push_back(b);
    }
  auto id_of = [&](int a, int b) { return a * n + b; };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) table[id_of(b, c)][id_of(a, b)] = id_of(a, c);
  return assemble_groupoid(n, src, dst, table);
}

FiniteGroupoid group_as_groupoid(const Group& g) {
  const int n = g.order();
  std::vector<int> src(n, 0), dst(n, 0);
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) table[a][b] = g.mul(a, b);
  return assemble_groupoid(1, src, dst, table);
}

void validate_functor(const FiniteGroupoid& g, const ConcreteFunctor& f) {
  if (static_cast<int>(f.fiber_size.size()) != g.objects())
    throw DomainError("BadFunctor", "fiber count differs from object count");
  if (static_cast<int>(f.action.size()) != g.morphisms())
    throw DomainError("BadFunctor", "action count differs from morphism count");
  for (int m = 0; m < g.morphisms(); ++m) {
    const auto& act = f.action[m];
    int a = g.src(m), b = g.dst(m);
    if (static_cast<int>(act.size()) != f.fiber_size[a])
      throw DomainError("BadFunctor", "action domain has wrong size",
                        json{{"morphism", g.ext_id(m)}});
    std::vector<bool> hit(f.fiber_size[b], false);
    for (int x : act) {
      if (x < 0 || x >= f.fiber_size[b] || hit[x])
        throw DomainError("BadFunctor", "action is not a bijection",
                          json{{"morphism", g.ext_id(m)}});
      hit[x] = true;
    }
    if (f.fiber_size[a] != f.fiber_size[b])
      throw DomainError("BadFunctor", "bijection between fibers of different size",
                        json{{"morphism", g.ext_id(m)}});
  }
  for (int a = 0; a < g.objects(); ++a) {
    const auto& act = f.action[g.identity(a)];
    for (int x = 0; x < f.fiber_size[a]; ++x)
      if (act[x] != x)
        throw DomainError("BadFunctor", "identity acts nontrivially",
                          json{{"object", a}});
  }
  for (int gf = 0; gf < g.morphisms(); ++gf)
    for (int ff = 0; ff < g.morphisms(); ++ff) {
      int c = g.compose(gf, ff);
      if (c < 0) continue;
      for (int x = 0; x < f.fiber_size[g.src(ff)]; ++x)
        if (f.action[c][x] != f.action[gf][f.action[ff][x]])
          throw DomainError("BadFunctor", "functoriality fails",
                            json{{"g", g.ext_id(gf)}, {"f", g.ext_id(ff)}});
    }
}

bool functor_faithful(const FiniteGroupoid& g, const ConcreteFunctor& f) {
  for (int a = 0; a < g.objects(); ++a)
    for (int b = 0; b < g.objects(); ++b) {
      const auto& hs = g.hom(a, b);
      for (size_t i = 0; i < hs.size(); ++i)
        for (size_t j = i + 1; j < hs.size(); ++j)
          if (f.action[hs[i]] == f.action[hs[j]]) return false;
    }
  return true;
}

GroupoidReport classify(const FiniteGroupoid& g) {
  GroupoidReport rep;
  auto cls = g.iso_class_of();
  int n_classes = *std::max_element(cls.begin(), cls.end()) + 1;
  rep.iso_classes.assign(n_classes, {});
  for (int a = 0; a < g.objects(); ++a) rep.iso_classes[cls[a]].push_back(a);
  rep.connected = n_classes == 1;
  rep.abelian = true;
  rep.solvable = true;
  for (const auto& members : rep.iso_classes) {
    int a = members.front();
    Group v = g.vertex_group(a);
    VertexInfo info;
    info.object = a;
    info.order = v.order();
    info.order_multiset = v.order_multiset();
    info.iso_name = v.iso_name();
    info.abelian = v.is_abelian();
    info.solvable = v.is_solvable();
    rep.abelian = rep.abelian && info.abelian;
    rep.solvable = rep.solvable && info.solvable;
    rep.vertex_info.push_back(info);
  }
  return rep;
}

void validate_normal_system(const FiniteGroupoid& g, const NormalSystem& n) {
  if (static_cast<int>(n.size()) != g.objects())
    throw DomainError("NotNormal", "system must name one subset per object");
  for (int a = 0; a < g.objects(); ++a) {
    std::set<int> na(n[a].begin(), n[a].end());
    for (int x : na)
      if (g.src(x) != a || g.dst(x) != a)
        throw DomainError("NotNormal", "element outside the vertex hom-set",
                          json{{"object", a}, {"morphism", g.ext_id(x)}});
    if (!na.count(g.identity(a)))
      throw DomainError("NotNormal", "subset misses the identity", json{{"object", a}});
    for (int x : na) {
      if (!na.count(g.inverse(x)))
        throw DomainError("NotNormal", "subset not closed under inverse",
                          json{{"object", a}, {"morphism", g.ext_id(x)}});
      for (int y : na)
        if (!na.count(g.compose(x, y)))
          throw DomainError("NotNormal", "subset not closed under composition",
                            json{{"object", a}});
    }
    for (int v : g.hom(a, a))
      for (int x : na) {
        int conj = g.compose(g.inverse(v), g.compose(x, v));
        if (!na.count(conj))
          throw DomainError("NotNormal", "subset not normal in the vertex group",
                            json{{"object", a}, {"conjugator", g.ext_id(v)},
                                 {"morphism", g.ext_id(x)}});
      }
  }
  for (int h = 0; h < g.morphisms(); ++h) {
    int a = g.src(h), b = g.dst(h);
    std::set<int> nb(n[b].begin(), n[b].end());
    std::set<int> image;
    for (int x : n[a]) image.insert(g.compose(h, g.compose(x, g.inverse(h))));
    if (image != nb)
      throw DomainError("NotTransportStable", "h N_a h^{-1} differs from N_b",
                        json{{"h", g.ext_id(h)}, {"from", a}, {"to", b}});
  }
}

FiniteGroupoid quotient_by_normal_system(const FiniteGroupoid& g, const NormalSystem& n,
                                         std::vector<int>* class_of_out) {
  validate_normal_system(g, n);
  std::vector<std::set<int>> nset(g.objects());
  for (int a = 0; a < g.objects(); ++a) nset[a].insert(n[a].begin(), n[a].end());

  std::vector<int> class_of(g.morphisms(), -1);
  std::vector<int> rep;  // class -> representative morphism
  for (int f = 0; f < g.morphisms(); ++f) {
    if (class_of[f] >= 0) continue;
    int c = static_cast<int>(rep.size());
    rep.push_back(f);
    for (int h = f; h < g.morphisms(); ++h) {
      if (class_of[h] >= 0 || g.src(h) != g.src(f) || g.dst(h) != g.dst(f)) continue;
      if (nset[g.src(f)].count(g.compose(g.inverse(h), f))) class_of[h] = c;
    }
  }

  const int m2 = static_cast<int>(rep.size());
  std::vector<int> src(m2), dst(m2);
  for (int c = 0; c < m2; ++c) {
    src[c] = g.src(rep[c]);
    dst[c] = g.dst(rep[c]);
  }
  std::vector<std::vector<int>> table(m2, std::vector<int>(m2, -1));
  for (int c2 = 0; c2 < m2; ++c2)
    for (int c1 = 0; c1 < m2; ++c1) {
      if (dst[c1] != src[c2]) continue;
      table[c2][c1] = class_of[g.compose(rep[c2], rep[c1])];
    }
  if (class_of_out) *class_of_out = class_of;
  return assemble_groupoid(g.objects(), src, dst, table);
}

CollapseResult collapse_trivial(const FiniteGroupoid& g, const ConcreteFunctor& f) {
  if (!g.connected()) throw DomainError("NotConnected", "groupoid is not connected");
  for (int a = 0; a < g.objects(); ++a)
    if (g.hom(a, a).size() != 1)
      throw DomainError("NontrivialVertexGroup", "vertex group is not trivial",
                        json{{"object", a}});
  validate_functor(g, f);

  std::vector<int> offset(g.objects() + 1, 0);
  for (int a = 0; a < g.objects(); ++a) offset[a + 1] = offset[a] + f.fiber_size[a];
  UnionFind uf(offset.back());
  for (int m = 0; m < g.morphisms(); ++m) {
    int a = g.src(m), b = g.dst(m);
    for (int d = 0; d < f.fiber_size[a]; ++d)
      uf.unite(offset[a] + d, offset[b] + f.action[m][d]);
  }
  std::map<int, int> renumber;
  CollapseResult out;
  out.to_quotient.assign(g.objects(), {});
  for (int a = 0; a < g.objects(); ++a) {
    out.to_quotient[a].resize(f.fiber_size[a]);
    for (int d = 0; d < f.fiber_size[a]; ++d) {
      int root = uf.find(offset[a] + d);
      auto [it, fresh] = renumber.emplace(root, static_cast<int>(renumber.size()));
      (void)fresh;
      out.to_quotient[a][d] = it->second;
    }
  }
  out.set_size = static_cast<int>(renumber.size());
  return out;
}

void validate_symmetry(const FiniteGroupoid& g, const GroupoidSymmetry& s) {
  if (static_cast<int>(s.on_objects.size()) != g.objects() ||
      static_cast<int>(s.on_morphisms.size()) != g.morphisms())
    throw DomainError("BadSymmetry", "permutation sizes do not match");
  for (int m = 0; m < g.morphisms(); ++m) {
    int im = s.on_morphisms[m];
    if (g.src(im) != s.on_objects[g.src(m)] || g.dst(im) != s.on_objects[g.dst(m)])
      throw DomainError("BadSymmetry", "morphism permutation breaks typing",
                        json{{"morphism", g.ext_id(m)}});
  }
  for (int gm = 0; gm < g.morphisms(); ++gm)
    for (int fm = 0; fm < g.morphisms(); ++fm) {
      int c = g.compose(gm, fm);
      if (c < 0) continue;
      if (g.compose(s.on_morphisms[gm], s.on_morphisms[fm]) != s.on_morphisms[c])
        throw DomainError("BadSymmetry", "permutation is not an automorphism",
                          json{{"g", g.ext_id(gm)}, {"f", g.ext_id(fm)}});
    }
}

std::optional<std::vector<int>> find_coherent_section(
    const FiniteGroupoid& g, const std::vector<GroupoidSymmetry>& uniformity) {
  if (!g.connected()) throw DomainError("NotConnected", "groupoid is not connected");
  for (const auto& s : uniformity) validate_symmetry(g, s);

  const int n = g.objects();
  // spanning tree rooted at object 0
  std::vector<int> parent(n, -1), order;
  std::vector<bool> seen(n, false);
  seen[0] = true;
  order.push_back(0);
  for (size_t head = 0; head < order.size(); ++head) {
    int a = order[head];
    for (int b = 0; b < n; ++b)
      if (!seen[b] && !g.hom(a, b).empty()) {
        seen[b] = true;
        parent[b] = a;
        order.push_back(b);
      }
  }

  std::vector<int> tree_nodes(order.begin() + 1, order.end());
  std::vector<int> choice(tree_nodes.size(), 0);
  std::vector<int> t(n, -1);  // t[x] = s(0, x)

  auto build_and_check = [&]() -> std::optional<std::vector<int>> {
    t[0] = g.identity(0);
    for (size_t i = 0; i < tree_nodes.size(); ++i) {
      int b = tree_nodes[i], a = parent[b];
      int edge = g.hom(a, b)[choice[i]];
      t[b] = g.compose(edge, t[a]);
    }
    std::vector<int> s(n * n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) s[a * n + b] = g.compose(t[b], g.inverse(t[a]));
    for (int a = 0; a < n; ++a) {
      if (s[a * n + a] != g.identity(a)) return std::nullopt;
      for (int b = 0; b < n; ++b) {
        if (s[b * n + a] != g.inverse(s[a * n + b])) return std::nullopt;
        for (int c = 0; c < n; ++c)
          if (g.compose(s[b * n + c], s[a * n + b]) != s[a * n + c]) return std::nullopt;
      }
    }
    for (const auto& sym : uniformity)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          int ia = sym.on_objects[a], ib = sym.on_objects[b];
          if (s[ia * n + ib] != sym.on_morphisms[s[a * n + b]]) return std::nullopt;
        }
    return s;
  };

  // lexicographic enumeration of tree-edge assignments
  while (true) {
    auto res = build_and_check();
    if (res) return res;
    int i = static_cast<int>(tree_nodes.size()) - 1;
    while (i >= 0) {
      int b = tree_nodes[i], a = parent[b];
      if (++choice[i] < static_cast<int>(g.hom(a, b).size())) break;
      choice[i] = 0;
      --i;
    }
    if (i < 0) break;
  }
  return std::nullopt;
}

namespace {

// equivariant pair (phi, beta) between the vertex actions of two objects
bool matching_vertex_action(const FiniteGroupoid& g1, const ConcreteFunctor& f1, int a,
                            const FiniteGroupoid& g2, const ConcreteFunctor& f2, int b) {
  std::vector<int> e1, e2;
  Group v1 = g1.vertex_group(a, &e1);
  Group v2 = g2.vertex_group(b, &e2);
  if (v1.order() != v2.order() || f1.fiber_size[a] != f2.fiber_size[b]) return false;

  const int k = v1.order(), fs = f1.fiber_size[a];
  std::vector<int> phi(k, -1), used(k, 0);
  std::vector<int> beta(fs, -1), busy(fs, 0);

  auto phi_ok = [&](int x) {
    for (int y = 0; y < k; ++y) {
      if (phi[y] < 0) continue;
      int xy = v1.mul(x, y), yx = v1.mul(y, x);
      if (phi[xy] >= 0 && phi[xy] != v2.mul(phi[x], phi[y])) return false;
      if (phi[yx] >= 0 && phi[yx] != v2.mul(phi[y], phi[x])) return false;
    }
    return true;
  };

  auto rec = [&](auto&& self, int x) -> bool {
    if (x == k) {
      std::fill(beta.begin(), beta.end(), -1);
      std::fill(busy.begin(), busy.end(), 0);
      // full equivariance check inside beta search
      auto full = [&](auto&& inner, int d) -> bool {
        if (d == fs) {
          for (int i = 0; i < k; ++i)
            for (int dd = 0; dd < fs; ++dd)
              if (beta[f1.action[e1[i]][dd]] != f2.action[e2[phi[i]]][beta[dd]])
                return false;
          return true;
        }
        for (int e = 0; e < fs; ++e) {
          if (busy[e]) continue;
          beta[d] = e;
          busy[e] = 1;
          bool consistent = true;
          for (int i = 0; i < k && consistent; ++i) {
            int dd = f1.action[e1[i]][d];
            if (beta[dd] >= 0 && beta[dd] != f2.action[e2[phi[i]]][e]) consistent = false;
          }
          if (consistent && inner(inner, d + 1)) return true;
          beta[d] = -1;
          busy[e] = 0;
        }
        return false;
      };
      return full(full, 0);
    }
    if (phi[x] >= 0) return self(self, x + 1);
    for (int y = 0; y < k; ++y) {
      if (used[y] || v1.element_order(x) != v2.element_order(y)) continue;
      phi[x] = y;
      used[y] = 1;
      if (phi_ok(x) && self(self, x + 1)) return true;
      phi[x] = -1;
      used[y] = 0;
    }
    return false;
  };
  phi[v1.identity()] = v2.identity();
  used[v2.identity()] = 1;
  return rec(rec, 0);
}

}  // namespace

bool equivalent_concrete_groupoids(const FiniteGroupoid& g1, const ConcreteFunctor& f1,
                                   const FiniteGroupoid& g2, const ConcreteFunctor& f2) {
  validate_functor(g1, f1);
  validate_functor(g2, f2);
  auto rep1 = classify(g1), rep2 = classify(g2);
  const size_t k = rep1.iso_classes.size();
  if (k != rep2.iso_classes.size()) return false;

  // class-by-class matching with backtracking
  std::vector<int> match(k, -1), used(k, 0);
  auto rec = [&](auto&& self, size_t i) -> bool {
    if (i == k) return true;
    int a = rep1.iso_classes[i].front();
    for (size_t j = 0; j < k; ++j) {
      if (used[j]) continue;
      int b = rep2.iso_classes[j].front();
      if (matching_vertex_action(g1, f1, a, g2, f2, b)) {
        match[i] = static_cast<int>(j);
        used[j] = 1;
        if (self(self, i + 1)) return true;
        match[i] = -1;
        used[j] = 0;
      }
    }
    return false;
  };
  return rec(rec, 0);
}

}  // namespace fgi
