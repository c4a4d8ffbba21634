#include "core/extension.hpp"

#include <algorithm>
#include <numeric>

#include "core/error.hpp"

namespace fgi {

namespace {

struct TripleSpace {
  // triples (f, g, h) with f in Mor0(*, b), g in G, h in Mor0(a, *)
  std::vector<std::array<int, 3>> triples;
  std::vector<int> class_of;
  std::vector<int> rep;  // class -> triple index
};

}  // namespace

ExtensionResult extend_groupoid(const ExtensionInput& input) {
  const FiniteGroupoid& base = input.base;
  const Group& G = input.supergroup;
  const int star = input.basepoint;
  if (star < 0 || star >= base.objects())
    throw DomainError("NotEmbedding", "basepoint out of range");
  if (!base.connected())
    throw DomainError("NotConnected", "extension base must be connected");

  std::vector<int> vertex = base.hom(star, star);
  if (input.embedding.size() != vertex.size())
    throw DomainError("NotEmbedding", "embedding must cover the vertex group");
  std::map<int, int> emb;  // vertex morphism -> supergroup element
  std::vector<int> seen(G.order(), 0);
  for (size_t i = 0; i < vertex.size(); ++i) {
    int img = input.embedding[i];
    if (img < 0 || img >= G.order() || seen[img])
      throw DomainError("NotEmbedding", "embedding is not injective",
                        json{{"vertex", base.ext_id(vertex[i])}});
    seen[img] = 1;
    emb[vertex[i]] = img;
  }
  for (int x : vertex)
    for (int y : vertex)
      if (emb[base.compose(x, y)] != G.mul(emb[x], emb[y]))
        throw DomainError("NotEmbedding", "embedding is not a homomorphism",
                          json{{"x", base.ext_id(x)}, {"y", base.ext_id(y)}});
  if (emb[base.identity(star)] != G.identity())
    throw DomainError("NotEmbedding", "embedding moves the identity");

  const int n = base.objects();
  // equivalence: (f,g,h) ~ (f',g',h')  iff  emb(f'^-1 f) g = g' emb(h' h^-1)
  auto related = [&](const std::array<int, 3>& t1, const std::array<int, 3>& t2) {
    int lhs = G.mul(emb.at(base.compose(base.inverse(t2[0]), t1[0])), t1[1]);
    int rhs = G.mul(t2[1], emb.at(base.compose(t2[2], base.inverse(t1[2]))));
    return lhs == rhs;
  };

  std::vector<TripleSpace> spaces(n * n);
  std::vector<int> mor_src, mor_dst;
  std::vector<std::pair<int, int>> mor_home;  // (space, class)
  std::vector<std::vector<int>> class_to_mor(n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      TripleSpace& sp = spaces[a * n + b];
      for (int f : base.hom(star, b))
        for (int g = 0; g < G.order(); ++g)
          for (int h : base.hom(a, star)) sp.triples.push_back({f, g, h});
      const int t = static_cast<int>(sp.triples.size());
      sp.class_of.assign(t, -1);

      // the relation must be an equivalence; verify while partitioning
      for (int i = 0; i < t; ++i)
        if (!related(sp.triples[i], sp.triples[i]))
          throw DomainError("NotEmbedding", "~ fails reflexivity");
      for (int i = 0; i < t; ++i)
        for (int j = 0; j < t; ++j)
          if (related(sp.triples[i], sp.triples[j]) !=
              related(sp.triples[j], sp.triples[i]))
            throw DomainError("NotEmbedding", "~ fails symmetry");
      for (int i = 0; i < t; ++i)
        for (int j = 0; j < t; ++j) {
          if (!related(sp.triples[i], sp.triples[j])) continue;
          for (int k = 0; k < t; ++k)
            if (related(sp.triples[j], sp.triples[k]) &&
                !related(sp.triples[i], sp.triples[k]))
              throw DomainError("NotEmbedding", "~ fails transitivity");
        }

      for (int i = 0; i < t; ++i) {
        if (sp.class_of[i] >= 0) continue;
        int c = static_cast<int>(sp.rep.size());
        sp.rep.push_back(i);
        for (int j = i; j < t; ++j)
          if (sp.class_of[j] < 0 && related(sp.triples[i], sp.triples[j]))
            sp.class_of[j] = c;
        class_to_mor[a * n + b].push_back(static_cast<int>(mor_src.size()));
        mor_src.push_back(a);
        mor_dst.push_back(b);
        mor_home.push_back({a * n + b, c});
      }
    }

  const int m = static_cast<int>(mor_src.size());
  auto locate = [&](int a, int b, std::array<int, 3> t) {
    const TripleSpace& sp = spaces[a * n + b];
    for (size_t c = 0; c < sp.rep.size(); ++c)
      if (related(sp.triples[sp.rep[c]], t)) return class_to_mor[a * n + b][c];
    throw DomainError("NotEmbedding", "triple fell outside every class");
  };

  std::vector<std::vector<int>> table(m, std::vector<int>(m, -1));
  for (int m2 = 0; m2 < m; ++m2)
    for (int m1 = 0; m1 < m; ++m1) {
      if (mor_dst[m1] != mor_src[m2]) continue;
      const auto& [sp2, c2] = mor_home[m2];
      const auto& [sp1, c1] = mor_home[m1];
      auto t2 = spaces[sp2].triples[spaces[sp2].rep[c2]];  // (j', g', f')
      auto t1 = spaces[sp1].triples[spaces[sp1].rep[c1]];  // (f, g, h)
      int mid = emb.at(base.compose(t2[2], t1[0]));        // f' f in Mor0(*,*)
      int g = G.mul(t2[1], G.mul(mid, t1[1]));
      table[m2][m1] = locate(mor_src[m1], mor_dst[m2], {t2[0], g, t1[2]});
    }

  ExtensionResult out;
  out.groupoid = assemble_groupoid(n, mor_src, mor_dst, table);
  out.base_embedding.assign(base.morphisms(), -1);
  for (int f = 0; f < base.morphisms(); ++f) {
    int a = base.src(f), b = base.dst(f);
    int v = base.hom(a, star).front();
    int fv = base.compose(f, base.inverse(v));  // * -> b
    out.base_embedding[f] = locate(a, b, {fv, G.identity(), v});
  }
  return out;
}

int extension_class_of(const ExtensionInput& input, const ExtensionResult& ext, int f,
                       int g, int h) {
  const FiniteGroupoid& base = input.base;
  const int a = base.src(h), b = base.dst(f);
  // recompute by locating against the extension's hom-set, using the same
  // equivalence as the construction
  std::vector<int> vertex = base.hom(input.basepoint, input.basepoint);
  std::map<int, int> emb;
  for (size_t i = 0; i < vertex.size(); ++i) emb[vertex[i]] = input.embedding[i];
  const Group& G = input.supergroup;
  auto related = [&](std::array<int, 3> t1, std::array<int, 3> t2) {
    int lhs = G.mul(emb.at(base.compose(base.inverse(t2[0]), t1[0])), t1[1]);
    int rhs = G.mul(t2[1], emb.at(base.compose(t2[2], base.inverse(t1[2]))));
    return lhs == rhs;
  };
  // probe each extension morphism in Mor(a,b) through the base embedding of
  // a reference path; simplest faithful approach: rebuild representative
  // triples the same way extend_groupoid enumerates them
  std::vector<std::array<int, 3>> triples;
  for (int ff : base.hom(input.basepoint, b))
    for (int gg = 0; gg < G.order(); ++gg)
      for (int hh : base.hom(a, input.basepoint)) triples.push_back({ff, gg, hh});
  std::vector<int> class_of(triples.size(), -1);
  std::vector<int> reps;
  for (size_t i = 0; i < triples.size(); ++i) {
    if (class_of[i] >= 0) continue;
    int c = static_cast<int>(reps.size());
    reps.push_back(static_cast<int>(i));
    for (size_t j = i; j < triples.size(); ++j)
      if (class_of[j] < 0 && related(triples[i], triples[j]))
        class_of[j] = c;
  }
  for (size_t c = 0; c < reps.size(); ++c)
    if (related(triples[reps[c]], {f, g, h}))
      return ext.groupoid.hom(a, b)[c];
  throw DomainError("NotEmbedding", "triple not located");
}

CocycleData CocycleData::regular(const Group& g, const Group& k,
                                 std::vector<std::vector<int>> c) {
  CocycleData data;
  data.group = g;
  data.kernel = k;
  data.carrier_size = g.order();
  data.action.assign(g.order(), std::vector<int>(g.order()));
  for (int x = 0; x < g.order(); ++x)
    for (int h = 0; h < g.order(); ++h) data.action[x][h] = g.mul(x, h);
  data.cocycle = std::move(c);
  return data;
}

CocycleData validate_cocycle(CocycleData data) {
  const Group& G = data.group;
  const Group& K = data.kernel;
  if (!K.is_abelian()) throw DomainError("NotACocycle", "kernel must be abelian");
  if (static_cast<int>(data.cocycle.size()) != G.order())
    throw DomainError("NotACocycle", "cocycle table has wrong shape");
  for (const auto& row : data.cocycle) {
    if (static_cast<int>(row.size()) != G.order())
      throw DomainError("NotACocycle", "cocycle table has wrong shape");
    for (int v : row)
      if (v < 0 || v >= K.order())
        throw DomainError("NotACocycle", "cocycle value outside the kernel");
  }

  const int e = G.identity();
  int shift = data.cocycle[e][e];
  if (shift != K.identity()) {
    for (auto& row : data.cocycle)
      for (int& v : row) v = K.mul(v, K.inv(shift));
    data.normalization_shifted = true;
  }
  for (int g = 0; g < G.order(); ++g) {
    if (data.cocycle[e][g] != K.identity() || data.cocycle[g][e] != K.identity())
      throw DomainError("NotACocycle", "normalization fails after the standard shift",
                        json{{"g", g}});
  }
  for (int g = 0; g < G.order(); ++g)
    for (int h = 0; h < G.order(); ++h)
      for (int k = 0; k < G.order(); ++k) {
        int lhs = K.mul(data.cocycle[g][h], data.cocycle[G.mul(g, h)][k]);
        int rhs = K.mul(data.cocycle[h][k], data.cocycle[g][G.mul(h, k)]);
        if (lhs != rhs)
          throw DomainError("NotACocycle", "cocycle identity fails",
                            json{{"triple", {g, h, k}}});
      }

  // regular right action
  if (static_cast<int>(data.action.size()) != data.carrier_size)
    throw DomainError("NotRegular", "action table has wrong shape");
  if (data.carrier_size != G.order())
    throw DomainError("NotRegular", "carrier size differs from the group order");
  for (int x = 0; x < data.carrier_size; ++x) {
    if (static_cast<int>(data.action[x].size()) != G.order())
      throw DomainError("NotRegular", "action table has wrong shape");
    if (data.action[x][G.identity()] != x)
      throw DomainError("NotRegular", "identity moves a carrier point",
                        json{{"x", x}});
    for (int g = 0; g < G.order(); ++g)
      for (int h = 0; h < G.order(); ++h)
        if (data.action[data.action[x][g]][h] != data.action[x][G.mul(g, h)])
          throw DomainError("NotRegular", "not a right action",
                            json{{"x", x}, {"g", g}, {"h", h}});
  }
  for (int x = 0; x < data.carrier_size; ++x)
    for (int y = 0; y < data.carrier_size; ++y) {
      int count = 0;
      for (int g = 0; g < G.order(); ++g)
        if (data.action[x][g] == y) ++count;
      if (count != 1)
        throw DomainError("NotRegular", "action is not simply transitive",
                          json{{"x", x}, {"y", y}});
    }
  return data;
}

CocycleGroupoid groupoid_from_cocycle(const CocycleData& input) {
  CocycleData data = validate_cocycle(input);
  const Group& G = data.group;
  const Group& K = data.kernel;
  const int X = data.carrier_size, kk = K.order();

  auto step = [&](int x, int y) {  // g with y = x . g
    for (int g = 0; g < G.order(); ++g)
      if (data.action[x][g] == y) return g;
    throw DomainError("NotRegular", "no step element");
  };
  // gamma_x identifies the carrier with G from carrier point 0
  std::vector<int> gamma(X);
  for (int x = 0; x < X; ++x) gamma[x] = step(0, x);

  const int m = X * X * kk;
  std::vector<int> src(m), dst(m), label(m), gelt(m);
  auto mid = [&](int x, int y, int k) { return (x * X + y) * kk + k; };
  for (int x = 0; x < X; ++x)
    for (int y = 0; y < X; ++y)
      for (int k = 0; k < kk; ++k) {
        int i = mid(x, y, k);
        src[i] = x;
        dst[i] = y;
        label[i] = k;
        gelt[i] = step(x, y);
      }
  std::vector<std::vector<int>> table(m, std::vector<int>(m, -1));
  for (int x = 0; x < X; ++x)
    for (int y = 0; y < X; ++y)
      for (int z = 0; z < X; ++z) {
        int gxy = step(x, y), gyz = step(y, z);
        int tw = data.cocycle[gxy][gyz];
        for (int k1 = 0; k1 < kk; ++k1)
          for (int k2 = 0; k2 < kk; ++k2)
            table[mid(y, z, k2)][mid(x, y, k1)] =
                mid(x, z, K.mul(K.mul(k1, k2), tw));
      }

  CocycleGroupoid out;
  out.groupoid = assemble_groupoid(X, src, dst, table);
  out.data = data;
  out.mor_carrier_src = src;
  out.mor_carrier_dst = dst;
  out.mor_label = label;
  out.mor_gelt = gelt;

  // fibers are copies of K; the morphism (x,y,k) acts by t + k + c(gamma_x, g_xy)
  out.functor_.fiber_size.assign(X, kk);
  out.functor_.action.resize(m);
  for (int i = 0; i < m; ++i) {
    int tw = data.cocycle[gamma[src[i]]][gelt[i]];
    out.functor_.action[i].resize(kk);
    for (int t = 0; t < kk; ++t)
      out.functor_.action[i][t] = K.mul(K.mul(t, label[i]), tw);
  }
  validate_functor(out.groupoid, out.functor_);

  // the commutant of the right action: x0 . g -> z0 . g, one symmetry per z0
  for (int z0 = 0; z0 < X; ++z0) {
    GroupoidSymmetry sym;
    sym.on_objects.resize(X);
    for (int x = 0; x < X; ++x) sym.on_objects[x] = data.action[z0][gamma[x]];
    sym.on_morphisms.resize(m);
    for (int i = 0; i < m; ++i)
      sym.on_morphisms[i] =
          mid(sym.on_objects[src[i]], sym.on_objects[dst[i]], label[i]);
    validate_symmetry(out.groupoid, sym);
    out.translations.push_back(sym);
  }
  return out;
}

CoboundaryResult is_coboundary(const CocycleData& input) {
  CocycleData data = validate_cocycle(input);
  const Group& G = data.group;
  const Group& K = data.kernel;
  const int n = G.order(), kk = K.order();
  const int e = G.identity();

  std::vector<int> nonid;
  for (int g = 0; g < n; ++g)
    if (g != e) nonid.push_back(g);

  std::vector<int> b(n, K.identity());
  long long total = 1;
  for (size_t i = 0; i < nonid.size(); ++i) total *= kk;
  for (long long code = 0; code < total; ++code) {
    long long t = code;
    for (int g : nonid) {
      b[g] = static_cast<int>(t % kk);
      t /= kk;
    }
    bool ok = true;
    for (int g = 0; g < n && ok; ++g)
      for (int h = 0; h < n && ok; ++h) {
        int want = K.mul(K.mul(b[g], b[h]), K.inv(b[G.mul(g, h)]));
        ok = data.cocycle[g][h] == want;
      }
    if (ok) return {true, b};
  }
  return {false, {}};
}

std::vector<std::vector<std::vector<int>>> all_normalized_cocycles(const Group& G,
                                                                   const Group& K) {
  const int n = G.order(), kk = K.order();
  const int e = G.identity();
  std::vector<std::pair<int, int>> free_slots;
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      if (g != e && h != e) free_slots.push_back({g, h});

  std::vector<std::vector<std::vector<int>>> out;
  std::vector<std::vector<int>> c(n, std::vector<int>(n, K.identity()));
  long long total = 1;
  for (size_t i = 0; i < free_slots.size(); ++i) total *= kk;
  for (long long code = 0; code < total; ++code) {
    long long t = code;
    for (auto [g, h] : free_slots) {
      c[g][h] = static_cast<int>(t % kk);
      t /= kk;
    }
    bool ok = true;
    for (int g = 0; g < n && ok; ++g)
      for (int h = 0; h < n && ok; ++h)
        for (int k = 0; k < n && ok; ++k)
          ok = K.mul(c[g][h], c[G.mul(g, h)][k]) == K.mul(c[h][k], c[g][G.mul(h, k)]);
    if (ok) out.push_back(c);
  }
  return out;
}

}  // namespace fgi
