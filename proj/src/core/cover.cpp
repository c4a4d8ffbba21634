#include "core/cover.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "core/error.hpp"

namespace fgi {

CoverStructure build_cover(const FiniteGroupoid& g, const ConcreteFunctor& f,
                           const std::vector<int>& representatives) {
  validate_functor(g, f);
  auto cls = g.iso_class_of();
  const int n_classes = *std::max_element(cls.begin(), cls.end()) + 1;
  std::vector<int> reps(n_classes, -1);
  if (!representatives.empty()) {
    if (static_cast<int>(representatives.size()) != n_classes)
      throw DomainError("BadRepresentatives", "one representative per iso-class");
    for (int c = 0; c < n_classes; ++c) {
      if (cls[representatives[c]] != c)
        throw DomainError("BadRepresentatives", "representative in the wrong class",
                          json{{"class", c}});
      reps[c] = representatives[c];
    }
  } else {
    for (int a = g.objects() - 1; a >= 0; --a) reps[cls[a]] = a;
  }

  const int n = g.objects();
  CoverStructure out;
  out.original_objects = n;
  out.rho.resize(n + n_classes);
  std::iota(out.rho.begin(), out.rho.begin() + n, 0);
  for (int c = 0; c < n_classes; ++c) {
    out.stars.push_back(n + c);
    out.rho[n + c] = reps[c];
  }

  const int n2 = n + n_classes;
  // morphisms: tagged copies (m, (a,b)) with m in hom(rho a, rho b)
  std::vector<int> src, dst, of_orig;
  std::vector<std::vector<int>> index(n2 * n2);
  std::map<std::pair<int, std::pair<int, int>>, int> lookup;
  for (int a = 0; a < n2; ++a)
    for (int b = 0; b < n2; ++b)
      for (int m : g.hom(out.rho[a], out.rho[b])) {
        int i = static_cast<int>(src.size());
        src.push_back(a);
        dst.push_back(b);
        of_orig.push_back(m);
        index[a * n2 + b].push_back(i);
        lookup[{m, {a, b}}] = i;
      }
  const int mm = static_cast<int>(src.size());
  std::vector<std::vector<int>> table(mm, std::vector<int>(mm, -1));
  for (int m2 = 0; m2 < mm; ++m2)
    for (int m1 = 0; m1 < mm; ++m1) {
      if (dst[m1] != src[m2]) continue;
      int comp = g.compose(of_orig[m2], of_orig[m1]);
      table[m2][m1] = lookup.at({comp, {src[m1], dst[m2]}});
    }
  out.groupoid = assemble_groupoid(n2, src, dst, table);

  out.functor_.fiber_size.resize(n2);
  for (int a = 0; a < n2; ++a) out.functor_.fiber_size[a] = f.fiber_size[out.rho[a]];
  out.functor_.action.resize(mm);
  for (int i = 0; i < mm; ++i) out.functor_.action[i] = f.action[of_orig[i]];
  validate_functor(out.groupoid, out.functor_);

  out.j_morphisms.resize(g.morphisms());
  for (int m = 0; m < g.morphisms(); ++m)
    out.j_morphisms[m] = lookup.at({m, {g.src(m), g.dst(m)}});
  return out;
}

CoverStructure build_cover(const CocycleGroupoid& cg,
                           const std::vector<int>& representatives) {
  CoverStructure out = build_cover(cg.groupoid, cg.functor_, representatives);
  out.presentation = cg.data;
  return out;
}

FiniteStructure cover_to_structure(const CoverStructure& cover) {
  const FiniteGroupoid& g = cover.groupoid;
  FiniteStructure s;
  int fib_total = 0;
  std::vector<int> fib_offset(g.objects() + 1, 0);
  for (int a = 0; a < g.objects(); ++a) {
    fib_offset[a + 1] = fib_offset[a] + cover.functor_.fiber_size[a];
    fib_total = fib_offset[a + 1];
  }
  s.sorts = {{"obj", g.objects()}, {"mor", g.morphisms()}, {"fib", fib_total}};

  FiniteStructure::Function i0{"i0", {1}, 0, {}}, i1{"i1", {1}, 0, {}},
      idm{"id", {0}, 1, {}}, r{"r", {2}, 0, {}};
  for (int m = 0; m < g.morphisms(); ++m) {
    i0.table[{m}] = g.src(m);
    i1.table[{m}] = g.dst(m);
  }
  for (int a = 0; a < g.objects(); ++a) idm.table[{a}] = g.identity(a);
  for (int a = 0; a < g.objects(); ++a)
    for (int d = 0; d < cover.functor_.fiber_size[a]; ++d)
      r.table[{fib_offset[a] + d}] = a;
  s.functions = {i0, i1, idm, r};

  FiniteStructure::Relation comp{"comp", {1, 1, 1}, {}}, act{"act", {2, 1, 2}, {}},
      jobj{"jobj", {0}, {}}, jmor{"jmor", {1}, {}}, star{"star", {0}, {}};
  for (int m2 = 0; m2 < g.morphisms(); ++m2)
    for (int m1 = 0; m1 < g.morphisms(); ++m1)
      if (g.compose(m2, m1) >= 0) comp.tuples.push_back({m2, m1, g.compose(m2, m1)});
  for (int m = 0; m < g.morphisms(); ++m) {
    int a = g.src(m), b = g.dst(m);
    for (int d = 0; d < cover.functor_.fiber_size[a]; ++d)
      act.tuples.push_back(
          {fib_offset[a] + d, m, fib_offset[b] + cover.functor_.action[m][d]});
  }
  for (int a = 0; a < cover.original_objects; ++a) jobj.tuples.push_back({a});
  for (int m : cover.j_morphisms) jmor.tuples.push_back({m});
  for (int st : cover.stars) star.tuples.push_back({st});
  std::sort(jmor.tuples.begin(), jmor.tuples.end());
  s.relations = {comp, act, jobj, jmor, star};
  s.normalize();
  s.validate();
  return s;
}

std::vector<std::pair<int, int>> cover_embedded_part(const CoverStructure& a,
                                                     const CoverStructure& b) {
  if (a.original_objects != b.original_objects)
    throw DomainError("BadRepresentatives", "covers of different groupoids");
  FiniteStructure sa = cover_to_structure(a), sb = cover_to_structure(b);
  std::vector<std::pair<int, int>> part;
  // original objects occupy the same indices
  for (int o = 0; o < a.original_objects; ++o)
    part.push_back({sa.global(0, o), sb.global(0, o)});
  for (size_t m = 0; m < a.j_morphisms.size(); ++m)
    part.push_back({sa.global(1, a.j_morphisms[m]), sb.global(1, b.j_morphisms[m])});
  // original fibers occupy the leading block of fib in both builds
  int fib_orig = 0;
  for (int o = 0; o < a.original_objects; ++o) fib_orig += a.functor_.fiber_size[o];
  for (int d = 0; d < fib_orig; ++d) part.push_back({sa.global(2, d), sb.global(2, d)});
  return part;
}

FiniteStructure make_cayley_base(const Group& g, const std::string& sort_name) {
  FiniteStructure s;
  s.sorts = {{sort_name, g.order()}};
  for (int h = 0; h < g.order(); ++h) {
    if (h == g.identity()) continue;
    FiniteStructure::Relation r{"cay" + std::to_string(h), {0, 0}, {}};
    for (int x = 0; x < g.order(); ++x) r.tuples.push_back({x, g.mul(x, h)});
    s.relations.push_back(r);
  }
  s.normalize();
  s.validate();
  return s;
}

AttachedCover attach_to_base(const FiniteStructure& base) {
  AttachedCover out;
  out.combined = base;
  for (const auto& s : base.sorts) out.base_sorts.push_back(s.name);
  return out;
}

AttachedCover attach_to_base(const FiniteStructure& base, const CoverStructure& cover,
                             const std::vector<int>& anchor) {
  base.validate();
  if (!cover.presentation)
    throw DomainError("MissingPresentation",
                      "attachment needs the cover's cocycle presentation");
  const CocycleData& data = *cover.presentation;
  const Group& K = data.kernel;
  const Group& G = data.group;
  const int X = data.carrier_size, kk = K.order();
  if (static_cast<int>(anchor.size()) != cover.original_objects ||
      cover.original_objects != X)
    throw DomainError("AnchorMismatch", "anchor must list every groupoid object");

  std::set<int> used;
  int anchor_sort = -1;
  for (int x = 0; x < X; ++x) {
    int gidx = anchor[x];
    if (gidx < 0 || gidx >= base.total_size())
      throw DomainError("AnchorMismatch", "anchor out of range", json{{"object", x}});
    if (!used.insert(gidx).second)
      throw DomainError("AnchorMismatch", "anchor is not injective",
                        json{{"object", x}});
    int sort = base.local(gidx).first;
    if (anchor_sort >= 0 && sort != anchor_sort)
      throw DomainError("AnchorMismatch", "anchors span several sorts");
    anchor_sort = sort;
  }

  auto step = [&](int x, int y) {
    for (int g = 0; g < G.order(); ++g)
      if (data.action[x][g] == y) return g;
    throw DomainError("NotRegular", "no step element");
  };
  std::vector<int> gamma(X);
  for (int x = 0; x < X; ++x) gamma[x] = step(0, x);

  AttachedCover out;
  out.combined = base;
  for (const auto& s : base.sorts) out.base_sorts.push_back(s.name);
  out.fiber_sort = "fib";
  const int fib_sort = static_cast<int>(out.combined.sorts.size());
  out.combined.sorts.push_back({"fib", X * kk});
  auto fid = [&](int x, int t) { return x * kk + t; };

  FiniteStructure::Function at{"at", {fib_sort}, anchor_sort, {}};
  for (int x = 0; x < X; ++x) {
    int local = base.local(anchor[x]).second;
    for (int t = 0; t < kk; ++t) at.table[{fid(x, t)}] = local;
  }
  out.combined.functions.push_back(at);

  // labeled transport relations: (x,t) -> (x.g, t + k + c(gamma_x, g))
  for (int k = 0; k < kk; ++k)
    for (int g = 0; g < G.order(); ++g) {
      FiniteStructure::Relation tr{
          "tr_k" + std::to_string(k) + "_g" + std::to_string(g),
          {fib_sort, fib_sort},
          {}};
      for (int x = 0; x < X; ++x) {
        int y = data.action[x][g];
        int tw = data.cocycle[gamma[x]][g];
        for (int t = 0; t < kk; ++t)
          tr.tuples.push_back({fid(x, t), fid(y, K.mul(K.mul(t, k), tw))});
      }
      out.combined.relations.push_back(tr);
    }
  out.combined.normalize();
  out.combined.validate();
  return out;
}

namespace {

struct ExactData {
  AutGroup full;
  std::vector<int> base_globals;
  std::vector<std::vector<int>> restrictions;   // per element, on base_globals
  std::vector<int> kernel_members;              // indices into full.elements
  std::set<std::vector<int>> image;
  int base_aut_order = 0;
};

ExactData exact_data(const FiniteStructure& n, const std::vector<std::string>& base_sorts,
                     int size_limit) {
  ExactData d;
  d.full = automorphism_group(n, {}, {}, size_limit);
  for (const auto& name : base_sorts) {
    int s = n.sort_index(name);
    for (int i = 0; i < n.sorts[s].size; ++i) d.base_globals.push_back(n.global(s, i));
  }
  for (size_t i = 0; i < d.full.elements.size(); ++i) {
    std::vector<int> restr;
    bool is_id = true;
    for (int g : d.base_globals) {
      restr.push_back(d.full.elements[i][g]);
      is_id = is_id && d.full.elements[i][g] == g;
    }
    d.restrictions.push_back(restr);
    d.image.insert(restr);
    if (is_id) d.kernel_members.push_back(static_cast<int>(i));
  }
  FiniteStructure m = restrict_to_sorts(n, base_sorts);
  d.base_aut_order = automorphism_group(m, {}, {}, size_limit).order();
  return d;
}

}  // namespace

SplitReport check_exact_sequence(const FiniteStructure& n,
                                 const std::vector<std::string>& base_sorts,
                                 int size_limit) {
  ExactData d = exact_data(n, base_sorts, size_limit);
  SplitReport rep;
  rep.total_order = d.full.order();
  rep.kernel_order = static_cast<int>(d.kernel_members.size());
  rep.image_order = static_cast<int>(d.image.size());
  rep.base_aut_order = d.base_aut_order;
  rep.surjective = rep.image_order == rep.base_aut_order;
  if (rep.total_order > 0) {
    Group total = d.full.abstract();
    rep.total_name = total.iso_name();
    for (int i = 0; i < total.order(); ++i)
      rep.kernel_orders.push_back(total.element_order(i));
    std::sort(rep.kernel_orders.begin(), rep.kernel_orders.end());
    // kernel as a subgroup table
    std::map<int, int> local;
    for (size_t i = 0; i < d.kernel_members.size(); ++i)
      local[d.kernel_members[i]] = static_cast<int>(i);
    std::vector<std::vector<int>> ktab(d.kernel_members.size(),
                                       std::vector<int>(d.kernel_members.size()));
    std::map<std::vector<int>, int> index;
    for (size_t i = 0; i < d.full.elements.size(); ++i)
      index[d.full.elements[i]] = static_cast<int>(i);
    for (size_t i = 0; i < d.kernel_members.size(); ++i)
      for (size_t j = 0; j < d.kernel_members.size(); ++j) {
        std::vector<int> comp(d.full.degree);
        for (int e = 0; e < d.full.degree; ++e)
          comp[e] =
              d.full.elements[d.kernel_members[i]][d.full.elements[d.kernel_members[j]][e]];
        ktab[i][j] = local.at(index.at(comp));
      }
    rep.kernel_name = Group::from_table(ktab).iso_name();
  }
  return rep;
}

SplitReport is_split(const FiniteStructure& n, const std::vector<std::string>& base_sorts,
                     int naming_bound, int size_limit) {
  ExactData d = exact_data(n, base_sorts, size_limit);
  SplitReport rep = check_exact_sequence(n, base_sorts, size_limit);
  rep.naming_bound = naming_bound;

  Group total = d.full.abstract();
  auto try_split = [&](const std::vector<int>& allowed) {
    // subgroups of the allowed subset mapping injectively onto the image
    std::set<int> allow(allowed.begin(), allowed.end());
    // restrict the abstract group to `allowed` and enumerate its subgroups
    std::map<int, int> local;
    for (size_t i = 0; i < allowed.size(); ++i) local[allowed[i]] = static_cast<int>(i);
    std::vector<std::vector<int>> tab(allowed.size(), std::vector<int>(allowed.size()));
    for (size_t i = 0; i < allowed.size(); ++i)
      for (size_t j = 0; j < allowed.size(); ++j) {
        int prod = total.mul(allowed[i], allowed[j]);
        if (!allow.count(prod)) return std::optional<std::vector<int>>();  // not closed
        tab[i][j] = local[prod];
      }
    Group sub = Group::from_table(tab);
    for (const auto& h : sub.all_subgroups()) {
      if (static_cast<int>(h.size()) != rep.image_order) continue;
      std::set<std::vector<int>> restr;
      for (int e : h) restr.insert(d.restrictions[allowed[e]]);
      if (static_cast<int>(restr.size()) == rep.image_order) {
        std::vector<int> members;
        for (int e : h) members.push_back(allowed[e]);
        return std::optional<std::vector<int>>(members);
      }
    }
    return std::optional<std::vector<int>>();
  };

  std::vector<int> everyone(d.full.order());
  std::iota(everyone.begin(), everyone.end(), 0);
  auto witness = try_split(everyone);
  rep.split = witness.has_value();
  if (witness)
    for (int e : *witness) rep.complement.push_back(d.full.elements[e]);

  // almost split: additionally fix every element with a small full-group orbit
  std::vector<int> small;
  auto orbits = d.full.orbits();
  for (const auto& orb : orbits)
    if (static_cast<int>(orb.size()) <= naming_bound)
      for (int e : orb) small.push_back(e);
  std::vector<int> stab;
  for (int i = 0; i < d.full.order(); ++i) {
    bool ok = true;
    for (int e : small) ok = ok && d.full.elements[i][e] == e;
    if (ok) stab.push_back(i);
  }
  rep.almost_split = try_split(stab).has_value();
  return rep;
}

int kernel_fiber_order(const FiniteStructure& n,
                       const std::vector<std::string>& base_sorts,
                       const std::string& fiber_sort, int fiber_lo, int fiber_hi,
                       int size_limit) {
  ExactData d = exact_data(n, base_sorts, size_limit);
  int s = n.sort_index(fiber_sort);
  std::set<std::vector<int>> restr;
  for (int i : d.kernel_members) {
    std::vector<int> r;
    for (int e = fiber_lo; e < fiber_hi; ++e) r.push_back(d.full.elements[i][n.global(s, e)]);
    restr.insert(r);
  }
  return static_cast<int>(restr.size());
}

}  // namespace fgi
