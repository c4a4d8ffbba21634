#include "core/structure.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "core/error.hpp"

namespace fgi {

int FiniteStructure::sort_index(const std::string& name) const {
  for (size_t i = 0; i < sorts.size(); ++i)
    if (sorts[i].name == name) return static_cast<int>(i);
  throw DomainError("UnknownSort", "no sort named " + name);
}

int FiniteStructure::total_size() const {
  int t = 0;
  for (const auto& s : sorts) t += s.size;
  return t;
}

int FiniteStructure::sort_offset(int sort) const {
  int t = 0;
  for (int i = 0; i < sort; ++i) t += sorts[i].size;
  return t;
}

std::pair<int, int> FiniteStructure::local(int global) const {
  for (size_t i = 0; i < sorts.size(); ++i) {
    if (global < sorts[i].size) return {static_cast<int>(i), global};
    global -= sorts[i].size;
  }
  throw DomainError("BadElement", "global index out of range");
}

void FiniteStructure::validate() const {
  std::set<std::string> names;
  for (const auto& s : sorts) {
    if (s.size < 0) throw DomainError("BadStructure", "negative sort size");
    if (!names.insert(s.name).second)
      throw DomainError("BadStructure", "duplicate sort name " + s.name);
  }
  for (const auto& r : relations) {
    for (int s : r.sorts)
      if (s < 0 || s >= static_cast<int>(sorts.size()))
        throw DomainError("BadStructure", "relation signature names no sort");
    for (const auto& t : r.tuples) {
      if (t.size() != r.sorts.size())
        throw DomainError("BadStructure", "tuple arity mismatch in " + r.name);
      for (size_t i = 0; i < t.size(); ++i)
        if (t[i] < 0 || t[i] >= sorts[r.sorts[i]].size)
          throw DomainError("BadStructure", "tuple out of range in " + r.name);
    }
  }
  for (const auto& f : functions) {
    for (int s : f.domain)
      if (s < 0 || s >= static_cast<int>(sorts.size()))
        throw DomainError("BadStructure", "function domain names no sort");
    if (f.codomain < 0 || f.codomain >= static_cast<int>(sorts.size()))
      throw DomainError("BadStructure", "function codomain names no sort");
    long long expect = 1;
    for (int s : f.domain) expect *= sorts[s].size;
    if (static_cast<long long>(f.table.size()) != expect)
      throw DomainError("BadStructure", "function " + f.name + " is not total");
    for (const auto& [args, val] : f.table) {
      if (args.size() != f.domain.size())
        throw DomainError("BadStructure", "function arity mismatch in " + f.name);
      for (size_t i = 0; i < args.size(); ++i)
        if (args[i] < 0 || args[i] >= sorts[f.domain[i]].size)
          throw DomainError("BadStructure", "function argument out of range");
      if (val < 0 || val >= sorts[f.codomain].size)
        throw DomainError("BadStructure", "function value out of range");
    }
  }
  for (const auto& c : constants) {
    if (c.sort < 0 || c.sort >= static_cast<int>(sorts.size()) || c.elem < 0 ||
        c.elem >= sorts[c.sort].size)
      throw DomainError("BadStructure", "constant out of range: " + c.name);
  }
}

void FiniteStructure::normalize() {
  for (auto& r : relations) {
    std::sort(r.tuples.begin(), r.tuples.end());
    r.tuples.erase(std::unique(r.tuples.begin(), r.tuples.end()), r.tuples.end());
  }
}

namespace {

// uniform tuple view: every relation and function graph as global-index tuples
struct SearchTables {
  // per relation: tuples of global indices
  std::vector<std::vector<std::vector<int>>> tuples;
  // membership sets for O(log) lookup
  std::vector<std::set<std::vector<int>>> members;
  // touching[e] -> list of (relation, tuple index)
  std::vector<std::vector<std::pair<int, int>>> touching;
};

SearchTables build_tables(const FiniteStructure& s) {
  SearchTables t;
  auto add_relation = [&](const std::vector<int>& sig,
                          const std::vector<std::vector<int>>& tuples) {
    std::vector<std::vector<int>> glob;
    for (const auto& tup : tuples) {
      std::vector<int> g(tup.size());
      for (size_t i = 0; i < tup.size(); ++i) g[i] = s.global(sig[i], tup[i]);
      glob.push_back(g);
    }
    t.tuples.push_back(glob);
    t.members.emplace_back(glob.begin(), glob.end());
  };
  for (const auto& r : s.relations) add_relation(r.sorts, r.tuples);
  for (const auto& f : s.functions) {
    std::vector<int> sig = f.domain;
    sig.push_back(f.codomain);
    std::vector<std::vector<int>> tuples;
    for (const auto& [args, val] : f.table) {
      std::vector<int> tup = args;
      tup.push_back(val);
      tuples.push_back(tup);
    }
    add_relation(sig, tuples);
  }
  t.touching.assign(s.total_size(), {});
  for (size_t r = 0; r < t.tuples.size(); ++r)
    for (size_t i = 0; i < t.tuples[r].size(); ++i) {
      std::set<int> seen;
      for (int e : t.tuples[r][i])
        if (seen.insert(e).second)
          t.touching[e].push_back({static_cast<int>(r), static_cast<int>(i)});
    }
  return t;
}

// 1-dimensional color refinement on the incidence structure; colors are
// ranked by signature content so that corresponding elements of isomorphic
// structures receive equal colors.
std::vector<long long> refine_colors(const FiniteStructure& s, const SearchTables& t,
                                     std::vector<long long> color) {
  const int n = s.total_size();
  auto classes = [&](const std::vector<long long>& c) {
    std::set<long long> d(c.begin(), c.end());
    return d.size();
  };
  for (int round = 0; round < n; ++round) {
    std::vector<std::vector<long long>> sig(n);
    for (int e = 0; e < n; ++e) sig[e].push_back(color[e]);
    for (size_t r = 0; r < t.tuples.size(); ++r)
      for (const auto& tup : t.tuples[r])
        for (size_t p = 0; p < tup.size(); ++p) {
          long long h = static_cast<long long>(r) * 131 + static_cast<long long>(p);
          for (int q : tup) h = h * 1000003 + color[q];
          sig[tup[p]].push_back(h);
        }
    for (int e = 0; e < n; ++e) std::sort(sig[e].begin() + 1, sig[e].end());
    std::vector<std::vector<long long>> ranked = sig;
    std::sort(ranked.begin(), ranked.end());
    ranked.erase(std::unique(ranked.begin(), ranked.end()), ranked.end());
    std::vector<long long> packed(n);
    for (int e = 0; e < n; ++e)
      packed[e] = std::lower_bound(ranked.begin(), ranked.end(), sig[e]) -
                  ranked.begin();
    if (classes(packed) == classes(color)) {
      color = packed;
      break;
    }
    color = packed;
  }
  return color;
}

struct SearchContext {
  const FiniteStructure* s1 = nullptr;
  const FiniteStructure* s2 = nullptr;
  SearchTables t1, t2;
  std::vector<long long> color1, color2;
  int n = 0;
  std::vector<int> fwd, bwd;

  bool assign_ok(int a, int b) const {
    // forward: fully-mapped tuples through a must land in the target relation
    for (auto [r, i] : t1.touching[a]) {
      const auto& tup = t1.tuples[r][i];
      std::vector<int> img(tup.size());
      bool full = true;
      for (size_t p = 0; p < tup.size() && full; ++p) {
        int e = tup[p];
        int ie = (e == a) ? b : fwd[e];
        if (ie < 0)
          full = false;
        else
          img[p] = ie;
      }
      if (full && !t2.members[r].count(img)) return false;
    }
    // backward: fully-preimaged target tuples through b must come from tuples
    for (auto [r, i] : t2.touching[b]) {
      const auto& tup = t2.tuples[r][i];
      std::vector<int> pre(tup.size());
      bool full = true;
      for (size_t p = 0; p < tup.size() && full; ++p) {
        int e = tup[p];
        int pe = (e == b) ? a : bwd[e];
        if (pe < 0)
          full = false;
        else
          pre[p] = pe;
      }
      if (full && !t1.members[r].count(pre)) return false;
    }
    return true;
  }
};

}  // namespace

static void enumerate_maps(SearchContext& ctx, bool first_only,
                           std::vector<std::vector<int>>& results) {
  // next unmapped element, smallest global index
  int a = -1;
  for (int e = 0; e < ctx.n; ++e)
    if (ctx.fwd[e] < 0) {
      a = e;
      break;
    }
  if (a < 0) {
    results.push_back(ctx.fwd);
    return;
  }
  auto [sort_a, loc_a] = ctx.s1->local(a);
  (void)loc_a;
  for (int b = 0; b < ctx.n; ++b) {
    if (ctx.bwd[b] >= 0) continue;
    auto [sort_b, loc_b] = ctx.s2->local(b);
    (void)loc_b;
    if (sort_b != sort_a) continue;
    if (ctx.color1[a] != ctx.color2[b]) continue;
    if (!ctx.assign_ok(a, b)) continue;
    ctx.fwd[a] = b;
    ctx.bwd[b] = a;
    enumerate_maps(ctx, first_only, results);
    ctx.fwd[a] = -1;
    ctx.bwd[b] = -1;
    if (first_only && !results.empty()) return;
  }
}

static std::vector<long long> initial_colors(const FiniteStructure& s) {
  const int n = s.total_size();
  std::vector<long long> color(n);
  for (int e = 0; e < n; ++e) color[e] = s.local(e).first;
  long long next = s.sorts.size();
  for (const auto& c : s.constants) color[s.global(c.sort, c.elem)] = next++;
  return color;
}

AutGroup automorphism_group(const FiniteStructure& s, const std::vector<int>& fix,
                            const std::vector<std::string>& stabilize,
                            int size_limit) {
  s.validate();
  if (s.total_size() > size_limit)
    throw DomainError("SizeLimitExceeded", "universe larger than the configured bound",
                      json{{"size", s.total_size()}, {"limit", size_limit}});
  for (const auto& name : stabilize) s.sort_index(name);  // existence only

  SearchContext ctx;
  ctx.s1 = ctx.s2 = &s;
  ctx.t1 = ctx.t2 = build_tables(s);
  ctx.n = s.total_size();
  auto color = initial_colors(s);
  long long next = 1 + *std::max_element(color.begin(), color.end());
  for (int e : fix) {
    if (e < 0 || e >= ctx.n) throw DomainError("BadElement", "fix element out of range");
    color[e] = next++;
  }
  ctx.color1 = ctx.color2 = refine_colors(s, ctx.t1, color);
  ctx.fwd.assign(ctx.n, -1);
  ctx.bwd.assign(ctx.n, -1);

  std::vector<std::vector<int>> results;
  enumerate_maps(ctx, false, results);
  std::sort(results.begin(), results.end());
  AutGroup out;
  out.degree = ctx.n;
  out.elements = std::move(results);
  return out;
}

Group AutGroup::abstract() const {
  std::map<std::vector<int>, int> index;
  for (size_t i = 0; i < elements.size(); ++i)
    index[elements[i]] = static_cast<int>(i);
  std::vector<std::vector<int>> table(elements.size(),
                                      std::vector<int>(elements.size()));
  for (size_t i = 0; i < elements.size(); ++i)
    for (size_t j = 0; j < elements.size(); ++j) {
      std::vector<int> comp(degree);
      for (int e = 0; e < degree; ++e) comp[e] = elements[i][elements[j][e]];
      auto it = index.find(comp);
      if (it == index.end())
        throw DomainError("BadGroupTable", "automorphism set not closed");
      table[i][j] = it->second;
    }
  return Group::from_table(table);
}

std::vector<std::vector<int>> AutGroup::orbits() const {
  std::vector<std::vector<int>> out;
  std::vector<bool> seen(degree, false);
  for (int e = 0; e < degree; ++e) {
    if (seen[e]) continue;
    std::set<int> orb{e};
    std::vector<int> frontier{e};
    while (!frontier.empty()) {
      std::vector<int> next;
      for (int x : frontier)
        for (const auto& g : elements)
          if (orb.insert(g[x]).second) next.push_back(g[x]);
      frontier = std::move(next);
    }
    for (int x : orb) seen[x] = true;
    out.emplace_back(orb.begin(), orb.end());
  }
  return out;
}

std::vector<int> AutGroup::orbit_of(int e) const {
  std::set<int> orb{e};
  std::vector<int> frontier{e};
  while (!frontier.empty()) {
    std::vector<int> next;
    for (int x : frontier)
      for (const auto& g : elements)
        if (orb.insert(g[x]).second) next.push_back(g[x]);
    frontier = std::move(next);
  }
  return std::vector<int>(orb.begin(), orb.end());
}

std::vector<int> dcl(const FiniteStructure& s, const std::vector<int>& base,
                     int size_limit) {
  AutGroup g = automorphism_group(s, base, {}, size_limit);
  std::vector<int> out;
  for (int e = 0; e < g.degree; ++e) {
    bool fixed = true;
    for (const auto& perm : g.elements) fixed = fixed && perm[e] == e;
    if (fixed) out.push_back(e);
  }
  return out;
}

std::optional<std::vector<int>> iso_over(const FiniteStructure& s1,
                                         const FiniteStructure& s2,
                                         const std::vector<std::pair<int, int>>& part,
                                         int size_limit) {
  s1.validate();
  s2.validate();
  if (s1.total_size() > size_limit || s2.total_size() > size_limit)
    throw DomainError("SizeLimitExceeded", "universe larger than the configured bound");
  if (s1.sorts.size() != s2.sorts.size() || s1.relations.size() != s2.relations.size() ||
      s1.functions.size() != s2.functions.size())
    return std::nullopt;
  for (size_t i = 0; i < s1.sorts.size(); ++i)
    if (s1.sorts[i].name != s2.sorts[i].name || s1.sorts[i].size != s2.sorts[i].size)
      return std::nullopt;
  for (size_t i = 0; i < s1.relations.size(); ++i)
    if (s1.relations[i].name != s2.relations[i].name ||
        s1.relations[i].sorts != s2.relations[i].sorts ||
        s1.relations[i].tuples.size() != s2.relations[i].tuples.size())
      return std::nullopt;
  for (size_t i = 0; i < s1.functions.size(); ++i)
    if (s1.functions[i].name != s2.functions[i].name ||
        s1.functions[i].domain != s2.functions[i].domain ||
        s1.functions[i].codomain != s2.functions[i].codomain)
      return std::nullopt;

  SearchContext ctx;
  ctx.s1 = &s1;
  ctx.s2 = &s2;
  ctx.t1 = build_tables(s1);
  ctx.t2 = build_tables(s2);
  ctx.n = s1.total_size();
  if (s2.total_size() != ctx.n) return std::nullopt;
  ctx.color1 = refine_colors(s1, ctx.t1, initial_colors(s1));
  ctx.color2 = refine_colors(s2, ctx.t2, initial_colors(s2));
  ctx.fwd.assign(ctx.n, -1);
  ctx.bwd.assign(ctx.n, -1);
  for (auto [a, b] : part) {
    if (a < 0 || a >= ctx.n || b < 0 || b >= ctx.n)
      throw DomainError("BadElement", "part element out of range");
    if (s1.local(a).first != s2.local(b).first) return std::nullopt;
    if (ctx.fwd[a] >= 0 && ctx.fwd[a] != b) return std::nullopt;
    if (ctx.bwd[b] >= 0 && ctx.bwd[b] != a) return std::nullopt;
    if (!ctx.assign_ok(a, b)) return std::nullopt;
    ctx.fwd[a] = b;
    ctx.bwd[b] = a;
  }
  std::vector<std::vector<int>> results;
  enumerate_maps(ctx, true, results);
  if (results.empty()) return std::nullopt;

  // verify tuple-by-tuple before returning
  const auto& iso = results.front();
  for (size_t r = 0; r < ctx.t1.tuples.size(); ++r) {
    if (ctx.t1.tuples[r].size() != ctx.t2.tuples[r].size())
      throw DomainError("InternalError", "relation size drifted");
    for (const auto& tup : ctx.t1.tuples[r]) {
      std::vector<int> img(tup.size());
      for (size_t p = 0; p < tup.size(); ++p) img[p] = iso[tup[p]];
      if (!ctx.t2.members[r].count(img))
        throw DomainError("InternalError", "returned map fails verification");
    }
  }
  return iso;
}

FiniteStructure restrict_to_sorts(const FiniteStructure& s,
                                  const std::vector<std::string>& kept) {
  std::set<int> keep;
  for (const auto& name : kept) keep.insert(s.sort_index(name));
  FiniteStructure out;
  std::map<int, int> renum;
  for (size_t i = 0; i < s.sorts.size(); ++i)
    if (keep.count(static_cast<int>(i))) {
      renum[static_cast<int>(i)] = static_cast<int>(out.sorts.size());
      out.sorts.push_back(s.sorts[i]);
    }
  for (const auto& r : s.relations) {
    bool ok = std::all_of(r.sorts.begin(), r.sorts.end(),
                          [&](int x) { return keep.count(x) > 0; });
    if (!ok) continue;
    FiniteStructure::Relation nr = r;
    for (int& x : nr.sorts) x = renum[x];
    out.relations.push_back(nr);
  }
  for (const auto& f : s.functions) {
    bool ok = keep.count(f.codomain) &&
              std::all_of(f.domain.begin(), f.domain.end(),
                          [&](int x) { return keep.count(x) > 0; });
    if (!ok) continue;
    FiniteStructure::Function nf = f;
    for (int& x : nf.domain) x = renum[x];
    nf.codomain = renum[nf.codomain];
    out.functions.push_back(nf);
  }
  for (const auto& c : s.constants) {
    if (!keep.count(c.sort)) continue;
    FiniteStructure::Constant nc = c;
    nc.sort = renum[nc.sort];
    out.constants.push_back(nc);
  }
  return out;
}

}  // namespace fgi
