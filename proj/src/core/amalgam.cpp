#include "core/amalgam.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

#include "core/error.hpp"
#include "core/gf.hpp"

namespace fgi {

namespace {

int popcount(Mask m) { return __builtin_popcount(m); }

std::vector<int> bits_of(Mask m) {
  std::vector<int> out;
  for (int i = 0; m; ++i, m >>= 1)
    if (m & 1) out.push_back(i);
  return out;
}

std::string mask_name(Mask m) {
  std::string s = "{";
  for (int b : bits_of(m)) s += std::to_string(b + 1) + ",";
  if (s.size() > 1) s.pop_back();
  return s + "}";
}

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<int> set_union(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return sorted_unique(out);
}

std::vector<int> set_intersect(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<int> image_of(const std::vector<int>& map) {
  return sorted_unique(map);
}

// strong embedding: injective, sort-preserving, relations both ways,
// functions forward
void check_strong_embedding(const FiniteStructure& a, const FiniteStructure& b,
                            const std::vector<int>& emb, const std::string& what) {
  if (static_cast<int>(emb.size()) != a.total_size())
    throw DomainError("FunctorialityError", what + ": embedding has wrong length");
  std::set<int> seen;
  for (int e = 0; e < a.total_size(); ++e) {
    int t = emb[e];
    if (t < 0 || t >= b.total_size() || !seen.insert(t).second)
      throw DomainError("FunctorialityError", what + ": not injective");
    if (a.local(e).first != b.local(t).first)
      throw DomainError("FunctorialityError", what + ": sort not preserved");
  }
  if (a.relations.size() != b.relations.size() || a.functions.size() != b.functions.size())
    throw DomainError("FunctorialityError", what + ": signature mismatch");
  std::set<int> img(emb.begin(), emb.end());
  for (size_t r = 0; r < a.relations.size(); ++r) {
    const auto& ra = a.relations[r];
    const auto& rb = b.relations[r];
    if (ra.name != rb.name)
      throw DomainError("FunctorialityError", what + ": relation names differ");
    std::set<std::vector<int>> btup;
    for (const auto& t : rb.tuples) {
      std::vector<int> g(t.size());
      for (size_t i = 0; i < t.size(); ++i) g[i] = b.global(rb.sorts[i], t[i]);
      btup.insert(g);
    }
    for (const auto& t : ra.tuples) {
      std::vector<int> g(t.size());
      for (size_t i = 0; i < t.size(); ++i) g[i] = emb[a.global(ra.sorts[i], t[i])];
      if (!btup.count(g))
        throw DomainError("FunctorialityError", what + ": relation not preserved");
    }
    // fullness
    std::set<std::vector<int>> atup;
    for (const auto& t : ra.tuples) {
      std::vector<int> g(t.size());
      for (size_t i = 0; i < t.size(); ++i) g[i] = emb[a.global(ra.sorts[i], t[i])];
      atup.insert(g);
    }
    for (const auto& g : btup) {
      bool inside = std::all_of(g.begin(), g.end(), [&](int x) { return img.count(x); });
      if (inside && !atup.count(g))
        throw DomainError("FunctorialityError", what + ": embedding not full");
    }
  }
  for (size_t fi = 0; fi < a.functions.size(); ++fi) {
    const auto& fa = a.functions[fi];
    const auto& fb = b.functions[fi];
    if (fa.name != fb.name)
      throw DomainError("FunctorialityError", what + ": function names differ");
    for (const auto& [args, val] : fa.table) {
      std::vector<int> bargs(args.size());
      for (size_t i = 0; i < args.size(); ++i)
        bargs[i] = b.local(emb[a.global(fa.domain[i], args[i])]).second;
      int bval = fb.table.at(bargs);
      if (b.global(fb.codomain, bval) != emb[a.global(fa.codomain, val)])
        throw DomainError("FunctorialityError", what + ": function not preserved");
    }
  }
}

// --- set-level pushout of the face diagram ------------------------------------

struct Pushout {
  std::map<Mask, std::vector<int>> cls;  // face global -> class id
  std::vector<int> class_sort;
  std::vector<std::pair<Mask, int>> class_origin;  // first (face, elem)
  int n_classes = 0;
};

Pushout face_pushout(const AmalgamationProblem& p) {
  // nodes (u, e) united along embeddings
  std::vector<std::pair<Mask, int>> nodes;
  std::map<Mask, int> offset;
  for (const auto& [u, st] : p.faces) {
    offset[u] = static_cast<int>(nodes.size());
    for (int e = 0; e < st.total_size(); ++e) nodes.push_back({u, e});
  }
  std::vector<int> parent(nodes.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [uv, emb] : p.embeddings) {
    auto [u, v] = uv;
    for (int e = 0; e < static_cast<int>(emb.size()); ++e)
      parent[find(offset[u] + e)] = find(offset[v] + emb[e]);
  }
  Pushout out;
  std::map<int, int> renumber;
  for (size_t i = 0; i < nodes.size(); ++i) {
    int root = find(static_cast<int>(i));
    if (!renumber.count(root)) {
      renumber[root] = out.n_classes++;
      auto [u, e] = nodes[i];
      out.class_sort.push_back(p.faces.at(u).local(e).first);
      out.class_origin.push_back(nodes[i]);
    }
  }
  for (const auto& [u, st] : p.faces) {
    std::vector<int> m(st.total_size());
    for (int e = 0; e < st.total_size(); ++e) m[e] = renumber[find(offset[u] + e)];
    out.cls[u] = m;
  }
  return out;
}

// --- pure sets -----------------------------------------------------------------

FiniteStructure pure_set_structure(int size) {
  FiniteStructure s;
  s.sorts = {{"pt", size}};
  s.validate();
  return s;
}

class PureSetPlugin : public TheoryPlugin {
public:
  std::string name() const override { return "pure_set"; }

  bool is_instance(const FiniteStructure& s) const override {
    return s.sorts.size() == 1 && s.sorts[0].name == "pt" && s.relations.empty() &&
           s.functions.empty() && s.constants.empty();
  }

  std::vector<int> closure(const FiniteStructure&, std::vector<int> base) const override {
    return sorted_unique(std::move(base));
  }

  bool independent(const FiniteStructure&, const std::vector<int>& a,
                   const std::vector<int>& b, const std::vector<int>& c) const override {
    return set_intersect(a, b) == c;
  }

  std::vector<Solution> completions(const AmalgamationProblem& p) const override {
    Pushout po = face_pushout(p);
    Solution sol;
    sol.top = pure_set_structure(po.n_classes);
    for (const auto& [u, m] : po.cls) sol.into_top[u] = m;
    return {sol};
  }

  std::vector<AmalgamationProblem> generate(int n, int bound) const override {
    std::vector<AmalgamationProblem> out;
    std::vector<int> sizes(n, 1);
    while (true) {
      int total = std::accumulate(sizes.begin(), sizes.end(), 0);
      if (total <= bound) out.push_back(generate_pure_set(n, sizes));
      int i = n - 1;
      while (i >= 0 && sizes[i] == 2) sizes[i--] = 1;
      if (i < 0) break;
      ++sizes[i];
    }
    return out;
  }
};

// --- vector spaces ---------------------------------------------------------------

FiniteStructure vector_space_structure(int q, int dim) {
  GF f(q);
  int size = 1;
  for (int i = 0; i < dim; ++i) size *= q;
  FiniteStructure s;
  s.sorts = {{"vec", size}};
  auto digit = [&](int v, int pos) {
    for (int i = 0; i < pos; ++i) v /= q;
    return v % q;
  };
  FiniteStructure::Function add{"add", {0, 0}, 0, {}};
  for (int x = 0; x < size; ++x)
    for (int y = 0; y < size; ++y) {
      int z = 0, w = 1;
      for (int d = 0; d < dim; ++d) {
        z += f.add(digit(x, d), digit(y, d)) * w;
        w *= q;
      }
      add.table[{x, y}] = z;
    }
  s.functions.push_back(add);
  for (int c = 0; c < q; ++c) {
    FiniteStructure::Function smul{"smul" + std::to_string(c), {0}, 0, {}};
    for (int x = 0; x < size; ++x) {
      int z = 0, w = 1;
      for (int d = 0; d < dim; ++d) {
        z += f.mul(c, digit(x, d)) * w;
        w *= q;
      }
      smul.table[{x}] = z;
    }
    s.functions.push_back(smul);
  }
  s.constants.push_back({"zero", 0, 0});
  s.validate();
  return s;
}

class VectorSpacePlugin : public TheoryPlugin {
public:
  explicit VectorSpacePlugin(int q) : q_(q), f_(q) {}

  std::string name() const override { return "vector_space"; }

  bool is_instance(const FiniteStructure& s) const override {
    if (s.sorts.size() != 1 || s.sorts[0].name != "vec") return false;
    if (!s.relations.empty()) return false;
    if (s.constants.size() != 1 || s.constants[0].name != "zero") return false;
    if (static_cast<int>(s.functions.size()) != 1 + q_) return false;
    int n = s.sorts[0].size, t = n;
    while (t > 1) {
      if (t % q_) return false;
      t /= q_;
    }
    const auto* add = find_fn(s, "add");
    if (!add || add->domain.size() != 2) return false;
    int zero = s.constants[0].elem;
    for (int x = 0; x < n; ++x) {
      if (add->table.at({x, zero}) != x) return false;
      for (int y = 0; y < n; ++y)
        if (add->table.at({x, y}) != add->table.at({y, x})) return false;
    }
    for (int c = 0; c < q_; ++c) {
      const auto* sm = find_fn(s, "smul" + std::to_string(c));
      if (!sm || sm->domain.size() != 1) return false;
      for (int x = 0; x < n; ++x) {
        if (c == 1 && sm->table.at({x}) != x) return false;
        if (c == 0 && sm->table.at({x}) != zero) return false;
      }
    }
    for (int a = 0; a < q_; ++a)
      for (int b = 0; b < q_; ++b) {
        const auto* sa = find_fn(s, "smul" + std::to_string(a));
        const auto* sb = find_fn(s, "smul" + std::to_string(b));
        const auto* sab = find_fn(s, "smul" + std::to_string(f_.mul(a, b)));
        const auto* sapb = find_fn(s, "smul" + std::to_string(f_.add(a, b)));
        for (int x = 0; x < n; ++x) {
          if (sa->table.at({sb->table.at({x})}) != sab->table.at({x})) return false;
          if (add->table.at({sa->table.at({x}), sb->table.at({x})}) !=
              sapb->table.at({x}))
            return false;
        }
      }
    // associativity of add plus inverses follow from the group checks below
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z)
          if (add->table.at({add->table.at({x, y}), z}) !=
              add->table.at({x, add->table.at({y, z})}))
            return false;
    return true;
  }

  std::vector<int> closure(const FiniteStructure& s,
                           std::vector<int> base) const override {
    std::set<int> out(base.begin(), base.end());
    for (const auto& c : s.constants) out.insert(s.global(c.sort, c.elem));
    const auto* add = find_fn(s, "add");
    bool grew = true;
    while (grew) {
      grew = false;
      std::vector<int> cur(out.begin(), out.end());
      for (int x : cur)
        for (int y : cur) {
          int z = s.global(0, add->table.at({s.local(x).second, s.local(y).second}));
          if (out.insert(z).second) grew = true;
        }
      for (int c = 0; c < q_; ++c) {
        const auto* sm = find_fn(s, "smul" + std::to_string(c));
        for (int x : cur) {
          int z = s.global(0, sm->table.at({s.local(x).second}));
          if (out.insert(z).second) grew = true;
        }
      }
    }
    return std::vector<int>(out.begin(), out.end());
  }

  bool independent(const FiniteStructure& ambient, const std::vector<int>& a,
                   const std::vector<int>& b, const std::vector<int>& c) const override {
    if (set_intersect(a, b) != c) return false;
    auto span = closure(ambient, set_union(a, b));
    long long lhs = static_cast<long long>(span.size()) * c.size();
    long long rhs = static_cast<long long>(a.size()) * b.size();
    return lhs == rhs;
  }

  std::vector<Solution> completions(const AmalgamationProblem& p) const override {
    // dimensions of the singleton faces
    std::vector<int> dims(p.n, 0);
    for (int i = 0; i < p.n; ++i) {
      const auto& face = p.faces.at(Mask(1) << i);
      int sz = face.sorts[0].size, d = 0;
      while (sz > 1) {
        sz /= q_;
        ++d;
      }
      dims[i] = d;
    }
    int total_dim = std::accumulate(dims.begin(), dims.end(), 0);
    std::vector<int> block(p.n, 0);
    for (int i = 1; i < p.n; ++i) block[i] = block[i - 1] + dims[i - 1];

    Solution sol;
    sol.top = vector_space_structure(q_, total_dim);

    // basis of each singleton face: greedy over the face's own span
    std::map<int, std::vector<int>> face_basis;  // ground index -> local elems
    for (int i = 0; i < p.n; ++i) {
      const auto& face = p.faces.at(Mask(1) << i);
      std::vector<int> basis;
      std::set<int> spanned{s_closure_zero(face)};
      for (int e = 0; e < face.sorts[0].size && static_cast<int>(basis.size()) < dims[i];
           ++e) {
        if (spanned.count(e)) continue;
        basis.push_back(e);
        auto cl = closure(face, locals_to_globals(face, basis));
        spanned.clear();
        for (int g : cl) spanned.insert(face.local(g).second);
      }
      if (static_cast<int>(basis.size()) != dims[i]) return {};
      face_basis[i] = basis;
    }

    for (const auto& [u, face] : p.faces) {
      // images of the singleton bases inside this face, with top coordinates
      std::vector<std::pair<int, int>> gens;  // (face local elem, top block pos)
      for (int i : bits_of(u)) {
        const Mask s = Mask(1) << i;
        const auto& sing = p.faces.at(s);
        for (size_t t = 0; t < face_basis[i].size(); ++t) {
          int loc = sing.global(0, face_basis[i][t]);
          int img = (u == s) ? loc : p.embeddings.at({s, u})[loc];
          gens.push_back({face.local(img).second, block[i] + static_cast<int>(t)});
        }
      }
      // enumerate coordinates over the generators
      const auto* add = find_fn(face, "add");
      int combos = 1;
      for (size_t t = 0; t < gens.size(); ++t) combos *= q_;
      std::vector<int> to_top(face.total_size(), -1);
      int zero_local = face.constants[0].elem;
      for (int code = 0; code < combos; ++code) {
        int t = code, acc = zero_local, top_elem = 0;
        for (const auto& [loc, pos] : gens) {
          int coef = t % q_;
          t /= q_;
          const auto* sm = find_fn(face, "smul" + std::to_string(coef));
          acc = add->table.at({acc, sm->table.at({loc})});
          top_elem += coef * pow_int(q_, pos);
        }
        if (to_top[acc] >= 0 && to_top[acc] != top_elem) return {};
        to_top[acc] = top_elem;
      }
      if (std::count(to_top.begin(), to_top.end(), -1) > 0) return {};
      sol.into_top[u] = to_top;
    }
    return {sol};
  }

  std::vector<AmalgamationProblem> generate(int n, int bound) const override {
    std::vector<AmalgamationProblem> out;
    int face_size = pow_int(q_, n - 1);
    if (face_size <= bound) out.push_back(generate_vector_space(q_, n));
    return out;
  }

private:
  int q_;
  GF f_;

  static const FiniteStructure::Function* find_fn(const FiniteStructure& s,
                                                  const std::string& name) {
    for (const auto& f : s.functions)
      if (f.name == name) return &f;
    return nullptr;
  }
  static int pow_int(int b, int e) {
    int r = 1;
    while (e-- > 0) r *= b;
    return r;
  }
  static int s_closure_zero(const FiniteStructure& face) {
    return face.constants[0].elem;
  }
  static std::vector<int> locals_to_globals(const FiniteStructure& s,
                                            const std::vector<int>& locals) {
    std::vector<int> out;
    for (int e : locals) out.push_back(s.global(0, e));
    return out;
  }
};

// --- parity covers ---------------------------------------------------------------

struct ParityView {
  int n_pts = 0;
  // fiber set -> (pair of points, the two fib locals in index order)
  std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>> fibers;
  std::vector<int> fiber_of;  // fib local -> fiber set index
  std::vector<int> lambda0;   // fib local -> reference bit (index inside its fiber)
};

std::optional<ParityView> parity_view(const FiniteStructure& s) {
  if (s.sorts.size() != 2 || s.sorts[0].name != "pt" || s.sorts[1].name != "fib")
    return std::nullopt;
  if (s.relations.size() != 2 || s.relations[0].name != "ends" ||
      s.relations[1].name != "tri" || !s.functions.empty() || !s.constants.empty())
    return std::nullopt;
  const auto& ends = s.relations[0];
  if (ends.sorts != std::vector<int>{1, 0, 0}) return std::nullopt;
  const int nf = s.sorts[1].size;
  ParityView v;
  v.n_pts = s.sorts[0].size;
  std::vector<std::pair<int, int>> pair_of(nf, {-1, -1});
  std::vector<int> degree(nf, 0);
  for (const auto& t : ends.tuples) {
    int f = t[0], p = t[1], q = t[2];
    if (p == q) return std::nullopt;
    ++degree[f];
    int lo = std::min(p, q), hi = std::max(p, q);
    if (pair_of[f].first >= 0 && pair_of[f] != std::make_pair(lo, hi))
      return std::nullopt;
    pair_of[f] = {lo, hi};
  }
  for (int f = 0; f < nf; ++f)
    if (degree[f] != 2 || pair_of[f].first < 0) return std::nullopt;

  std::map<std::pair<int, int>, std::vector<int>> groups;
  for (int f = 0; f < nf; ++f) groups[pair_of[f]].push_back(f);
  // complete fibration: every point pair carries exactly two fiber elements
  for (int p = 0; p < v.n_pts; ++p)
    for (int q = p + 1; q < v.n_pts; ++q) {
      auto it = groups.find({p, q});
      if (it == groups.end() || it->second.size() != 2) return std::nullopt;
    }
  if (static_cast<int>(groups.size()) * 2 != nf) return std::nullopt;

  v.fiber_of.assign(nf, -1);
  v.lambda0.assign(nf, 0);
  for (const auto& [pq, mem] : groups) {
    int idx = static_cast<int>(v.fibers.size());
    v.fibers.push_back({pq, {mem[0], mem[1]}});
    v.fiber_of[mem[0]] = idx;
    v.fiber_of[mem[1]] = idx;
    v.lambda0[mem[1]] = 1;
  }
  return v;
}

class ParityPlugin : public TheoryPlugin {
public:
  std::string name() const override { return "parity"; }

  bool is_instance(const FiniteStructure& s) const override {
    auto v = parity_view(s);
    if (!v) return false;
    const auto& tri = s.relations[1];
    if (tri.sorts != std::vector<int>{1, 1, 1}) return false;

    std::set<std::vector<int>> tuples(tri.tuples.begin(), tri.tuples.end());
    // symmetric closure and triangle typing
    for (const auto& t : tuples) {
      std::vector<int> fs = {v->fiber_of[t[0]], v->fiber_of[t[1]], v->fiber_of[t[2]]};
      std::set<int> pts;
      std::set<int> distinct(fs.begin(), fs.end());
      if (distinct.size() != 3) return false;
      for (int f : fs) {
        pts.insert(v->fibers[f].first.first);
        pts.insert(v->fibers[f].first.second);
      }
      if (pts.size() != 3) return false;
      std::vector<int> p = t;
      std::sort(p.begin(), p.end());
      do {
        if (!tuples.count(p)) return false;
      } while (std::next_permutation(p.begin(), p.end()));
    }

    // per-triangle affine pattern; collect the offset bits
    auto tb = triangle_bits(s, *v);
    if (!tb) return false;
    // global labeling: solvable GF(2) system over fiber flips
    return solvable(*v, *tb);
  }

  std::vector<int> closure(const FiniteStructure& s,
                           std::vector<int> base) const override {
    auto v = parity_view(s);
    if (!v) throw DomainError("BadStructure", "not a parity structure");
    std::set<int> out(base.begin(), base.end());
    bool grew = true;
    while (grew) {
      grew = false;
      std::set<int> pts;
      for (int g : out)
        if (s.local(g).first == 0) pts.insert(s.local(g).second);
      for (int g : out)
        if (s.local(g).first == 1) {
          int fs = v->fiber_of[s.local(g).second];
          for (int p : {v->fibers[fs].first.first, v->fibers[fs].first.second})
            if (out.insert(s.global(0, p)).second) grew = true;
        }
      for (const auto& fib : v->fibers) {
        if (pts.count(fib.first.first) && pts.count(fib.first.second)) {
          if (out.insert(s.global(1, fib.second.first)).second) grew = true;
          if (out.insert(s.global(1, fib.second.second)).second) grew = true;
        }
      }
    }
    return std::vector<int>(out.begin(), out.end());
  }

  bool independent(const FiniteStructure&, const std::vector<int>& a,
                   const std::vector<int>& b, const std::vector<int>& c) const override {
    return set_intersect(a, b) == c;
  }

  std::vector<Solution> completions(const AmalgamationProblem& p) const override;

  std::vector<AmalgamationProblem> generate(int n, int bound) const override {
    std::vector<AmalgamationProblem> out;
    if (n == 3) {
      if (2 + 2 <= bound) out.push_back(generate_parity(3));  // pair face size 4
      return out;
    }
    if (n == 4) {
      if (3 + 6 > bound) return out;  // triangle faces have 9 elements
      for (int code = 0; code < 16; ++code) {
        std::vector<int> bits(4);
        for (int i = 0; i < 4; ++i) bits[i] = (code >> i) & 1;
        out.push_back(generate_parity(4, bits));
      }
      return out;
    }
    throw DomainError("SpecOutOfBounds", "parity generator supports n in {3,4}");
  }

  // bit per triangle (sorted point triple), relative to lambda0
  static std::optional<std::map<std::vector<int>, int>> triangle_bits(
      const FiniteStructure& s, const ParityView& v) {
    std::map<std::vector<int>, std::vector<std::vector<int>>> per_triangle;
    const auto& tri = s.relations[1];
    for (const auto& t : tri.tuples) {
      std::set<int> pts;
      for (int i = 0; i < 3; ++i) {
        int fs = v.fiber_of[t[i]];
        pts.insert(v.fibers[fs].first.first);
        pts.insert(v.fibers[fs].first.second);
      }
      per_triangle[std::vector<int>(pts.begin(), pts.end())].push_back(t);
    }
    std::map<std::vector<int>, int> bits;
    for (auto& [pts, tuples] : per_triangle) {
      if (tuples.size() != 4 * 6) return std::nullopt;  // affine pattern, all orders
      int b = -1;
      std::set<std::vector<int>> mem(tuples.begin(), tuples.end());
      for (const auto& t : tuples) {
        int sum = (v.lambda0[t[0]] + v.lambda0[t[1]] + v.lambda0[t[2]]) % 2;
        if (b < 0) b = sum;
        if (sum != b) return std::nullopt;
      }
      bits[pts] = b;
    }
    return bits;
  }

  static bool solvable(const ParityView& v,
                       const std::map<std::vector<int>, int>& bits) {
    // delta_f1 + delta_f2 + delta_f3 = b_T over GF(2)
    const int nf = static_cast<int>(v.fibers.size());
    std::vector<std::vector<int>> rows;
    std::map<std::pair<int, int>, int> fiber_index;
    for (int i = 0; i < nf; ++i) fiber_index[v.fibers[i].first] = i;
    for (const auto& [pts, b] : bits) {
      std::vector<int> row(nf + 1, 0);
      row[fiber_index.at({pts[0], pts[1]})] ^= 1;
      row[fiber_index.at({pts[0], pts[2]})] ^= 1;
      row[fiber_index.at({pts[1], pts[2]})] ^= 1;
      row[nf] = b;
      rows.push_back(row);
    }
    // Gaussian elimination over GF(2)
    int rank = 0;
    for (int col = 0; col < nf && rank < static_cast<int>(rows.size()); ++col) {
      int piv = -1;
      for (int r = rank; r < static_cast<int>(rows.size()); ++r)
        if (rows[r][col]) {
          piv = r;
          break;
        }
      if (piv < 0) continue;
      std::swap(rows[rank], rows[piv]);
      for (int r = 0; r < static_cast<int>(rows.size()); ++r)
        if (r != rank && rows[r][col])
          for (int cc = 0; cc <= nf; ++cc) rows[r][cc] ^= rows[rank][cc];
      ++rank;
    }
    for (int r = rank; r < static_cast<int>(rows.size()); ++r)
      if (rows[r][nf]) return false;
    return true;
  }
};

FiniteStructure parity_structure(int n_pts, const std::vector<std::pair<int, int>>& pairs,
                                 const std::set<std::vector<int>>& tri_tuples) {
  FiniteStructure s;
  s.sorts = {{"pt", n_pts}, {"fib", static_cast<int>(pairs.size()) * 2}};
  FiniteStructure::Relation ends{"ends", {1, 0, 0}, {}};
  for (size_t i = 0; i < pairs.size(); ++i) {
    for (int t = 0; t < 2; ++t) {
      int f = static_cast<int>(i) * 2 + t;
      ends.tuples.push_back({f, pairs[i].first, pairs[i].second});
      ends.tuples.push_back({f, pairs[i].second, pairs[i].first});
    }
  }
  FiniteStructure::Relation tri{"tri", {1, 1, 1}, {}};
  for (const auto& t : tri_tuples) tri.tuples.push_back(t);
  s.relations = {ends, tri};
  s.normalize();
  s.validate();
  return s;
}

std::vector<Solution> ParityPlugin::completions(const AmalgamationProblem& p) const {
  Pushout po = face_pushout(p);
  // split classes by sort
  std::vector<int> pt_of_class(po.n_classes, -1), fib_of_class(po.n_classes, -1);
  int n_pts = 0, n_fib = 0;
  for (int c = 0; c < po.n_classes; ++c) {
    if (po.class_sort[c] == 0)
      pt_of_class[c] = n_pts++;
    else
      fib_of_class[c] = n_fib++;
  }

  // endpoint pairs of the existing fiber elements
  std::map<int, std::pair<int, int>> elem_pair;  // fib class local -> point pair
  for (const auto& [u, st] : p.faces) {
    auto v = parity_view(st);
    if (!v) return {};
    const auto& cls = po.cls.at(u);
    for (size_t fs = 0; fs < v->fibers.size(); ++fs) {
      auto [pq, mem] = v->fibers[fs];
      int p0 = pt_of_class[cls[st.global(0, pq.first)]];
      int p1 = pt_of_class[cls[st.global(0, pq.second)]];
      int lo = std::min(p0, p1), hi = std::max(p0, p1);
      for (int m : {mem.first, mem.second}) {
        int fc = fib_of_class[cls[st.global(1, m)]];
        auto it = elem_pair.find(fc);
        if (it != elem_pair.end() && it->second != std::make_pair(lo, hi)) return {};
        elem_pair[fc] = {lo, hi};
      }
    }
  }

  // fiber sets: group existing elements by pair, then add fresh fibers
  std::map<std::pair<int, int>, std::vector<int>> groups;
  for (const auto& [fc, pq] : elem_pair) groups[pq].push_back(fc);
  std::vector<std::pair<int, int>> pairs;
  std::map<std::pair<int, int>, int> pair_index;
  std::vector<int> fib_renum(n_fib, -1);  // pushout fib local -> final fib local
  for (int a = 0; a < n_pts; ++a)
    for (int b = a + 1; b < n_pts; ++b) {
      auto key = std::make_pair(a, b);
      auto it = groups.find(key);
      if (it != groups.end() && it->second.size() != 2) return {};
      pair_index[key] = static_cast<int>(pairs.size());
      pairs.push_back(key);
    }
  int final_fib = static_cast<int>(pairs.size()) * 2;
  for (const auto& [pq, mem] : groups) {
    int base = pair_index.at(pq) * 2;
    fib_renum[mem[0]] = base;
    fib_renum[mem[1]] = base + 1;
  }
  (void)final_fib;

  // reference bits in final numbering: element base+t has lambda0 = t
  // carried tri data constrains triangles that some face already fixes
  std::map<std::vector<int>, int> forced_bits;
  for (const auto& [u, st] : p.faces) {
    auto v = parity_view(st);
    auto tb = triangle_bits(st, *v);
    if (!tb) return {};
    const auto& cls = po.cls.at(u);
    for (const auto& [pts, b] : *tb) {
      std::vector<int> fin_pts;
      for (int q : pts) fin_pts.push_back(pt_of_class[cls[st.global(0, q)]]);
      std::sort(fin_pts.begin(), fin_pts.end());
      // the face's lambda0 may disagree with the final numbering fiber-wise;
      // each disagreement flips the triangle bit
      int flip = 0;
      for (const auto& [pq, mem] : v->fibers) {
        bool inside = std::binary_search(pts.begin(), pts.end(), pq.first) &&
                      std::binary_search(pts.begin(), pts.end(), pq.second);
        if (!inside) continue;
        int fin0 = fib_renum[fib_of_class[cls[st.global(1, mem.first)]]];
        flip ^= fin0 & 1;
      }
      int fb = (b ^ flip) & 1;
      auto it = forced_bits.find(fin_pts);
      if (it != forced_bits.end() && it->second != fb) return {};
      forced_bits[fin_pts] = fb;
    }
  }

  // enumerate the undetermined triangle bits via fiber flips
  std::vector<std::vector<int>> triangles;
  for (int a = 0; a < n_pts; ++a)
    for (int b = a + 1; b < n_pts; ++b)
      for (int c = b + 1; c < n_pts; ++c) triangles.push_back({a, b, c});

  const int nf_sets = static_cast<int>(pairs.size());
  std::set<std::set<std::vector<int>>> seen_tri;
  std::vector<Solution> out;
  for (int delta = 0; delta < (1 << nf_sets); ++delta) {
    bool ok = true;
    std::map<std::vector<int>, int> bits;
    for (const auto& t : triangles) {
      int b = ((delta >> pair_index.at({t[0], t[1]})) & 1) ^
              ((delta >> pair_index.at({t[0], t[2]})) & 1) ^
              ((delta >> pair_index.at({t[1], t[2]})) & 1);
      bits[t] = b;
      auto it = forced_bits.find(t);
      if (it != forced_bits.end() && it->second != b) ok = false;
    }
    if (!ok) continue;
    // induced tri tuples
    std::set<std::vector<int>> tri_tuples;
    for (const auto& t : triangles) {
      int f01 = pair_index.at({t[0], t[1]}), f02 = pair_index.at({t[0], t[2]}),
          f12 = pair_index.at({t[1], t[2]});
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
          for (int z = 0; z < 2; ++z) {
            if (((x + y + z) & 1) != bits[t]) continue;
            std::vector<int> tup = {f01 * 2 + x, f02 * 2 + y, f12 * 2 + z};
            std::sort(tup.begin(), tup.end());
            do {
              tri_tuples.insert(tup);
            } while (std::next_permutation(tup.begin(), tup.end()));
          }
    }
    if (!seen_tri.insert(tri_tuples).second) continue;

    Solution sol;
    sol.top = parity_structure(n_pts, pairs, tri_tuples);
    for (const auto& [u, st] : p.faces) {
      const auto& cls = po.cls.at(u);
      std::vector<int> m(st.total_size());
      for (int e = 0; e < st.total_size(); ++e) {
        int c = cls[e];
        if (po.class_sort[c] == 0)
          m[e] = sol.top.global(0, pt_of_class[c]);
        else
          m[e] = sol.top.global(1, fib_renum[fib_of_class[c]]);
      }
      sol.into_top[u] = m;
    }
    out.push_back(sol);
  }
  return out;
}

}  // namespace

// --- generators ------------------------------------------------------------------

AmalgamationProblem generate_pure_set(int n, const std::vector<int>& sizes_in) {
  if (n < 2 || n > 6) throw DomainError("SpecOutOfBounds", "pure_set supports n in 2..6");
  std::vector<int> sizes = sizes_in.empty() ? std::vector<int>(n, 1) : sizes_in;
  if (static_cast<int>(sizes.size()) != n)
    throw DomainError("SpecOutOfBounds", "one size per ground index");
  AmalgamationProblem p;
  p.n = n;
  p.theory = "pure_set";
  auto labels = [&](Mask u) {
    std::vector<std::pair<int, int>> out;
    for (int i : bits_of(u))
      for (int t = 0; t < sizes[i]; ++t) out.push_back({i, t});
    return out;
  };
  for (Mask u = 0; u < (Mask(1) << n) - 1; ++u)
    p.faces[u] = pure_set_structure(static_cast<int>(labels(u).size()));
  for (Mask u = 0; u < (Mask(1) << n) - 1; ++u)
    for (Mask v = 0; v < (Mask(1) << n) - 1; ++v) {
      if (u == v || (u & v) != u) continue;
      auto lu = labels(u), lv = labels(v);
      std::vector<int> emb;
      for (const auto& l : lu)
        emb.push_back(static_cast<int>(std::find(lv.begin(), lv.end(), l) - lv.begin()));
      p.embeddings[{u, v}] = emb;
    }
  return p;
}

AmalgamationProblem generate_vector_space(int q, int n, const std::vector<int>& dims_in) {
  if (n < 2 || n > 5)
    throw DomainError("SpecOutOfBounds", "vector_space supports n in 2..5");
  std::vector<int> dims = dims_in.empty() ? std::vector<int>(n, 1) : dims_in;
  AmalgamationProblem p;
  p.n = n;
  p.theory = "vector_space";
  p.q = q;
  std::vector<int> block(n, 0);
  for (int i = 1; i < n; ++i) block[i] = block[i - 1] + dims[i - 1];

  auto face_dims = [&](Mask u) {
    int d = 0;
    for (int i : bits_of(u)) d += dims[i];
    return d;
  };
  auto positions = [&](Mask u) {
    std::vector<int> pos;  // face coordinate -> top block position
    for (int i : bits_of(u))
      for (int t = 0; t < dims[i]; ++t) pos.push_back(block[i] + t);
    return pos;
  };
  for (Mask u = 0; u < (Mask(1) << n) - 1; ++u)
    p.faces[u] = vector_space_structure(q, face_dims(u));
  for (Mask u = 0; u < (Mask(1) << n) - 1; ++u)
    for (Mask v = 0; v < (Mask(1) << n) - 1; ++v) {
      if (u == v || (u & v) != u) continue;
      auto pu = positions(u), pv = positions(v);
      int du = face_dims(u);
      std::vector<int> emb;
      for (int x = 0; x < static_cast<int>(p.faces[u].sorts[0].size); ++x) {
        // re-encode coordinates of x along the common positions
        int y = 0, t = x;
        for (int d = 0; d < du; ++d) {
          int digit = t % q;
          t /= q;
          int pos_v = static_cast<int>(
              std::find(pv.begin(), pv.end(), pu[d]) - pv.begin());
          int w = 1;
          for (int i = 0; i < pos_v; ++i) w *= q;
          y += digit * w;
        }
        emb.push_back(y);
      }
      p.embeddings[{u, v}] = emb;
    }
  return p;
}

static std::vector<std::vector<int>> ground_triples(int n) {
  std::vector<std::vector<int>> out;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) out.push_back({a, b, c});
  return out;
}

AmalgamationProblem generate_parity(int n, const std::vector<int>& parity_bits) {
  if (n < 2 || n > 4) throw DomainError("SpecOutOfBounds", "parity supports n in 2..4");
  auto triples = ground_triples(n);
  std::vector<int> bits(triples.size(), 0);
  if (!parity_bits.empty()) {
    if (parity_bits.size() != triples.size())
      throw DomainError("SpecOutOfBounds", "one parity bit per triangle");
    bits = parity_bits;
  }
  AmalgamationProblem p;
  p.n = n;
  p.theory = "parity";

  auto face_of = [&](Mask u) {
    auto pts = bits_of(u);
    std::map<int, int> pt_local;
    for (size_t i = 0; i < pts.size(); ++i) pt_local[pts[i]] = static_cast<int>(i);
    std::vector<std::pair<int, int>> pairs;
    std::map<std::pair<int, int>, int> pair_index;
    for (size_t a = 0; a < pts.size(); ++a)
      for (size_t b = a + 1; b < pts.size(); ++b) {
        pair_index[{static_cast<int>(a), static_cast<int>(b)}] =
            static_cast<int>(pairs.size());
        pairs.push_back({static_cast<int>(a), static_cast<int>(b)});
      }
    std::set<std::vector<int>> tri;
    for (size_t ti = 0; ti < triples.size(); ++ti) {
      const auto& t = triples[ti];
      if (!std::all_of(t.begin(), t.end(), [&](int x) { return (u >> x) & 1; })) continue;
      int a = pt_local[t[0]], b = pt_local[t[1]], c = pt_local[t[2]];
      int f01 = pair_index.at({a, b}), f02 = pair_index.at({a, c}),
          f12 = pair_index.at({b, c});
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
          for (int z = 0; z < 2; ++z) {
            if (((x + y + z) & 1) != bits[ti]) continue;
            std::vector<int> tup = {f01 * 2 + x, f02 * 2 + y, f12 * 2 + z};
            std::sort(tup.begin(), tup.end());
            do {
              tri.insert(tup);
            } while (std::next_permutation(tup.begin(), tup.end()));
          }
    }
    return parity_structure(static_cast<int>(pts.size()), pairs, tri);
  };

  for (Mask u = 0; u < (Mask(1) << n) - 1; ++u) p.faces[u] = face_of(u);

  auto embed = [&](Mask u, Mask v) {
    auto pu = bits_of(u), pv = bits_of(v);
    std::map<int, int> vm;
    for (size_t i = 0; i < pv.size(); ++i) vm[pv[i]] = static_cast<int>(i);
    const auto& fu = p.faces[u];
    std::vector<int> emb(fu.total_size());
    // points
    for (size_t i = 0; i < pu.size(); ++i)
      emb[fu.global(0, static_cast<int>(i))] = p.faces[v].global(0, vm[pu[i]]);
    // fibers: pair (a,b) in u maps to the corresponding pair in v
    std::vector<std::pair<int, int>> pairs_u, pairs_v;
    for (size_t a = 0; a < pu.size(); ++a)
      for (size_t b = a + 1; b < pu.size(); ++b)
        pairs_u.push_back({static_cast<int>(a), static_cast<int>(b)});
    for (size_t a = 0; a < pv.size(); ++a)
      for (size_t b = a + 1; b < pv.size(); ++b)
        pairs_v.push_back({static_cast<int>(a), static_cast<int>(b)});
    for (size_t i = 0; i < pairs_u.size(); ++i) {
      std::pair<int, int> ground = {pu[pairs_u[i].first], pu[pairs_u[i].second]};
      std::pair<int, int> in_v = {vm[ground.first], vm[ground.second]};
      int j = static_cast<int>(std::find(pairs_v.begin(), pairs_v.end(), in_v) -
                               pairs_v.begin());
      for (int t = 0; t < 2; ++t)
        emb[fu.global(1, static_cast<int>(i) * 2 + t)] =
            p.faces[v].global(1, j * 2 + t);
    }
    return emb;
  };
  for (Mask u = 0; u < (Mask(1) << n) - 1; ++u)
    for (Mask v = 0; v < (Mask(1) << n) - 1; ++v)
      if (u != v && (u & v) == u) p.embeddings[{u, v}] = embed(u, v);
  return p;
}

std::unique_ptr<TheoryPlugin> make_plugin(const std::string& name, int q) {
  if (name == "pure_set") return std::make_unique<PureSetPlugin>();
  if (name == "vector_space") return std::make_unique<VectorSpacePlugin>(q);
  if (name == "parity") return std::make_unique<ParityPlugin>();
  throw DomainError("UnknownTheory", "no plugin named " + name);
}

// --- validation and solving --------------------------------------------------------

void validate_problem(const AmalgamationProblem& p, bool partial_ok) {
  if (p.n < 2 || p.n > 6) throw DomainError("SpecOutOfBounds", "dimension out of range");
  auto plugin = make_plugin(p.theory, p.q);
  const Mask full = (Mask(1) << p.n) - 1;
  for (const auto& [u, st] : p.faces) {
    if (u >= full) throw DomainError("FunctorialityError", "face key is not proper");
    st.validate();
    if (!plugin->is_instance(st))
      throw DomainError("ClosureError", "face is not a theory instance: " + mask_name(u));
  }
  if (!partial_ok)
    for (Mask u = 0; u < full; ++u)
      if (!p.faces.count(u))
        throw DomainError("FunctorialityError", "missing face " + mask_name(u));

  for (const auto& [uv, emb] : p.embeddings) {
    auto [u, v] = uv;
    if (!p.faces.count(u) || !p.faces.count(v) || (u & v) != u || u == v)
      throw DomainError("FunctorialityError", "embedding between absent faces");
    check_strong_embedding(p.faces.at(u), p.faces.at(v), emb,
                           mask_name(u) + "->" + mask_name(v));
  }
  for (const auto& [u, fu] : p.faces)
    for (const auto& [v, fv] : p.faces) {
      if (u == v || (u & v) != u) continue;
      if (!p.embeddings.count({u, v}))
        throw DomainError("FunctorialityError",
                          "missing embedding " + mask_name(u) + "->" + mask_name(v));
    }
  // functoriality on composable triples
  for (const auto& [u, fu] : p.faces)
    for (const auto& [v, fv] : p.faces) {
      if (u == v || (u & v) != u) continue;
      for (const auto& [w, fw] : p.faces) {
        if (v == w || (v & w) != v) continue;
        const auto& e1 = p.embeddings.at({u, v});
        const auto& e2 = p.embeddings.at({v, w});
        const auto& e3 = p.embeddings.at({u, w});
        for (size_t e = 0; e < e1.size(); ++e)
          if (e2[e1[e]] != e3[e])
            throw DomainError("FunctorialityError",
                              "triangle " + mask_name(u) + "->" + mask_name(v) + "->" +
                                  mask_name(w) + " does not commute");
      }
    }
  // faces are closures of their singleton parts
  for (const auto& [u, st] : p.faces) {
    std::vector<int> base;
    for (int i : bits_of(u)) {
      Mask s = Mask(1) << i;
      if (!p.faces.count(s)) continue;
      const auto& emb = p.embeddings.at({s, u});
      for (int e = 0; e < p.faces.at(s).total_size(); ++e) base.push_back(emb[e]);
    }
    auto cl = plugin->closure(st, sorted_unique(base));
    if (static_cast<int>(cl.size()) != st.total_size())
      throw DomainError("ClosureError",
                        "face " + mask_name(u) + " exceeds the closure of its points");
  }
  // independence preservation
  for (const auto& [s1, f1] : p.faces)
    for (const auto& [s2, f2] : p.faces) {
      Mask meet = s1 & s2, join = s1 | s2;
      for (const auto& [sp, fsp] : p.faces) {
        if ((join & sp) != join) continue;
        if (!p.faces.count(meet)) continue;
        auto img = [&](Mask w) {
          std::vector<int> out;
          if (w == sp) {
            for (int e = 0; e < fsp.total_size(); ++e) out.push_back(e);
            return out;
          }
          const auto& emb = p.embeddings.at({w, sp});
          for (int e = 0; e < p.faces.at(w).total_size(); ++e) out.push_back(emb[e]);
          return sorted_unique(out);
        };
        if (!plugin->independent(fsp, img(s1), img(s2), img(meet)))
          throw DomainError("IndependenceError",
                            "faces " + mask_name(s1) + ", " + mask_name(s2) +
                                " are not independent over " + mask_name(meet) +
                                " inside " + mask_name(sp));
      }
    }
}

namespace {

std::vector<std::pair<int, int>> solution_part(const AmalgamationProblem& p,
                                               const Solution& a, const Solution& b) {
  std::vector<std::pair<int, int>> part;
  for (const auto& [u, st] : p.faces) {
    if (popcount(u) != p.n - 1) continue;
    const auto& ma = a.into_top.at(u);
    const auto& mb = b.into_top.at(u);
    for (int e = 0; e < st.total_size(); ++e) part.push_back({ma[e], mb[e]});
  }
  std::sort(part.begin(), part.end());
  part.erase(std::unique(part.begin(), part.end()), part.end());
  return part;
}

bool solution_valid(const AmalgamationProblem& p, const TheoryPlugin& plugin,
                    const Solution& sol) {
  sol.top.validate();
  if (!plugin.is_instance(sol.top)) return false;
  for (const auto& [u, st] : p.faces) {
    auto it = sol.into_top.find(u);
    if (it == sol.into_top.end()) return false;
    try {
      check_strong_embedding(st, sol.top, it->second, "face->top");
    } catch (const DomainError&) {
      return false;
    }
  }
  for (const auto& [uv, emb] : p.embeddings) {
    auto [u, v] = uv;
    const auto& mu = sol.into_top.at(u);
    const auto& mv = sol.into_top.at(v);
    for (size_t e = 0; e < emb.size(); ++e)
      if (mv[emb[e]] != mu[e]) return false;
  }
  // top equals the closure of the singleton faces
  std::vector<int> base;
  for (int i = 0; i < p.n; ++i) {
    Mask s = Mask(1) << i;
    const auto& m = sol.into_top.at(s);
    for (int e = 0; e < p.faces.at(s).total_size(); ++e) base.push_back(m[e]);
  }
  auto cl = plugin.closure(sol.top, sorted_unique(base));
  if (static_cast<int>(cl.size()) != sol.top.total_size()) return false;
  // independence with the top as ambient
  for (const auto& [s1, f1] : p.faces)
    for (const auto& [s2, f2] : p.faces) {
      Mask meet = s1 & s2;
      if (!p.faces.count(meet)) continue;
      auto img = [&](Mask w) {
        const auto& m = sol.into_top.at(w);
        return image_of(m);
      };
      if (!plugin.independent(sol.top, img(s1), img(s2), img(meet))) return false;
    }
  return true;
}

}  // namespace

SolutionSet solve(const AmalgamationProblem& p) {
  validate_problem(p);
  auto plugin = make_plugin(p.theory, p.q);
  auto candidates = plugin->completions(p);
  SolutionSet out;
  for (const auto& cand : candidates) {
    if (!solution_valid(p, *plugin, cand)) continue;
    bool fresh = true;
    for (const auto& kept : out.solutions)
      if (iso_over(kept.top, cand.top, solution_part(p, kept, cand))) {
        fresh = false;
        break;
      }
    if (fresh) out.solutions.push_back(cand);
  }
  return out;
}

bool solutions_equivalent(const AmalgamationProblem& p, const Solution& s1,
                          const Solution& s2) {
  return iso_over(s1.top, s2.top, solution_part(p, s1, s2)).has_value();
}

AmalgamationProblem permute_problem(const AmalgamationProblem& p,
                                    const std::vector<int>& perm) {
  AmalgamationProblem out;
  out.n = p.n;
  out.theory = p.theory;
  out.q = p.q;
  auto remap = [&](Mask u) {
    Mask v = 0;
    for (int i : bits_of(u)) v |= Mask(1) << perm[i];
    return v;
  };
  for (const auto& [u, st] : p.faces) out.faces[remap(u)] = st;
  for (const auto& [uv, emb] : p.embeddings)
    out.embeddings[{remap(uv.first), remap(uv.second)}] = emb;
  return out;
}

NPropertyReport check_n_property(const TheoryPlugin& plugin, int n, int bound) {
  NPropertyReport rep;
  rep.n = n;
  for (const auto& prob : plugin.generate(n, bound)) {
    SolutionSet s = solve(prob);
    int count = static_cast<int>(s.solutions.size());
    rep.solution_counts.push_back(count);
    ++rep.problems_checked;
    if (count == 0 && rep.existence) {
      rep.existence = false;
      rep.existence_witness = prob;
    }
    if (count > 1 && rep.uniqueness) {
      rep.uniqueness = false;
      rep.uniqueness_witness = prob;
    }
  }
  return rep;
}

namespace {

std::vector<int> face_image(const Solution& sol, Mask u) {
  return image_of(sol.into_top.at(u));
}

std::vector<int> union_images(const AmalgamationProblem& p, const Solution& sol,
                              const std::vector<Mask>& masks) {
  std::vector<int> out;
  for (Mask u : masks) {
    auto img = face_image(sol, u);
    out.insert(out.end(), img.begin(), img.end());
  }
  return sorted_unique(out);
}

std::set<std::vector<int>> restricted_group(const AutGroup& g,
                                            const std::vector<int>& domain) {
  std::set<std::vector<int>> out;
  for (const auto& perm : g.elements) {
    std::vector<int> r;
    for (int e : domain) r.push_back(perm[e]);
    out.insert(r);
  }
  return out;
}

}  // namespace

ThreeULReport check_3ul(const AmalgamationProblem& p, const Solution& sol) {
  if (p.n != 3) throw DomainError("DimensionMismatch", "check_3ul needs dimension 3");
  ThreeULReport rep;
  auto a1 = face_image(sol, 1), a2 = face_image(sol, 2);
  auto a12 = face_image(sol, 3), a13 = face_image(sol, 5), a23 = face_image(sol, 6);

  auto d_sides = dcl(sol.top, set_union(a13, a23));
  auto d_pts = dcl(sol.top, set_union(a1, a2));
  rep.condition1 = set_intersect(a12, d_sides) == set_intersect(a12, d_pts);

  AutGroup g_small = automorphism_group(sol.top, set_union(a1, a2));
  AutGroup g_big = automorphism_group(sol.top, set_union(a13, a23));
  rep.condition2 = true;
  for (int c : a12) {
    auto orb_small = g_small.orbit_of(c);
    auto orb_big = g_big.orbit_of(c);
    if (orb_small != orb_big) rep.condition2 = false;
  }
  rep.agree = rep.condition1 == rep.condition2;
  return rep;
}

SUReport check_su(const AmalgamationProblem& p, const Solution& sol) {
  SUReport rep;
  const Mask u0 = (Mask(1) << (p.n - 1)) - 1;
  std::vector<Mask> notgeq, below;
  for (const auto& [v, st] : p.faces) {
    if ((v & u0) != u0) notgeq.push_back(v);
    if (v != u0 && (v & u0) == v) below.push_back(v);
  }
  auto img_u0 = face_image(sol, u0);
  auto fix_notgeq = union_images(p, sol, notgeq);
  auto fix_below = union_images(p, sol, below);

  auto d_notgeq = dcl(sol.top, fix_notgeq);
  auto d_below = dcl(sol.top, fix_below);
  auto x = set_intersect(img_u0, d_below);
  rep.condition3 = set_intersect(img_u0, d_notgeq) == x;

  // big side: automorphisms of the solution fixing a(notgeq u0) pointwise,
  // restricted to the u0 face
  AutGroup big = automorphism_group(sol.top, fix_notgeq);
  for (const auto& perm : big.elements)
    for (int e : img_u0)
      if (!std::binary_search(img_u0.begin(), img_u0.end(), perm[e]))
        throw DomainError("InternalError", "face image is not stabilized");
  auto lhs = restricted_group(big, img_u0);

  // small side: automorphisms of the standalone face fixing X pointwise
  const auto& face = p.faces.at(u0);
  const auto& into = sol.into_top.at(u0);
  std::vector<int> pre_x;
  for (int e = 0; e < face.total_size(); ++e)
    if (std::binary_search(x.begin(), x.end(), into[e])) pre_x.push_back(e);
  AutGroup small = automorphism_group(face, pre_x);
  std::set<std::vector<int>> rhs;
  for (const auto& perm : small.elements) {
    // push to the image, listed in img_u0 order
    std::map<int, int> to_face;
    for (int e = 0; e < face.total_size(); ++e) to_face[into[e]] = e;
    std::vector<int> r;
    for (int e : img_u0) r.push_back(into[perm[to_face.at(e)]]);
    rhs.insert(r);
  }
  rep.condition4 = lhs == rhs;
  rep.agree = rep.condition3 == rep.condition4;
  return rep;
}

Solution twist_solution(const AmalgamationProblem& p, const Solution& sol, Mask u0,
                        const std::vector<int>& sigma) {
  const auto& face = p.faces.at(u0);
  if (static_cast<int>(sigma.size()) != face.total_size())
    throw DomainError("NotBoundaryFixing", "sigma has the wrong length");
  check_strong_embedding(face, face, sigma, "sigma");
  for (const auto& [v, st] : p.faces) {
    if (v == u0 || (v & u0) != v) continue;
    const auto& emb = p.embeddings.at({v, u0});
    for (int e = 0; e < st.total_size(); ++e)
      if (sigma[emb[e]] != emb[e])
        throw DomainError("NotBoundaryFixing",
                          "sigma moves the image of " + mask_name(v));
  }
  Solution out = sol;
  auto& m = out.into_top.at(u0);
  const auto& old = sol.into_top.at(u0);
  for (int e = 0; e < face.total_size(); ++e) m[e] = old[sigma[e]];
  return out;
}

void validate_automorphic(const AutomorphicProblem& ap) {
  validate_problem(ap.problem);
  for (const auto& [u, st] : ap.problem.faces) {
    auto it = ap.sigma.find(u);
    if (it == ap.sigma.end())
      throw DomainError("FunctorialityError", "sigma missing on " + mask_name(u));
    check_strong_embedding(st, st, it->second, "sigma" + mask_name(u));
  }
  for (const auto& [uv, emb] : ap.problem.embeddings) {
    auto [u, v] = uv;
    const auto& su = ap.sigma.at(u);
    const auto& sv = ap.sigma.at(v);
    for (size_t e = 0; e < emb.size(); ++e)
      if (emb[su[e]] != sv[emb[e]])
        throw DomainError("FunctorialityError",
                          "sigma does not commute along " + mask_name(u) + "->" +
                              mask_name(v));
  }
}

AutomorphicResult solve_with_automorphism(const AutomorphicProblem& ap) {
  validate_automorphic(ap);
  AutomorphicResult out;
  SolutionSet sols = solve(ap.problem);
  if (sols.solutions.empty()) {
    out.failure = "NoBaseSolution";
    return out;
  }
  for (const auto& sol : sols.solutions) {
    std::vector<std::pair<int, int>> forced;
    bool consistent = true;
    std::map<int, int> forced_map;
    for (const auto& [u, st] : ap.problem.faces) {
      const auto& m = sol.into_top.at(u);
      const auto& sg = ap.sigma.at(u);
      for (int e = 0; e < st.total_size(); ++e) {
        auto [it, fresh] = forced_map.emplace(m[e], m[sg[e]]);
        if (!fresh && it->second != m[sg[e]]) consistent = false;
      }
    }
    if (!consistent) continue;
    for (const auto& [a, b] : forced_map) forced.push_back({a, b});
    auto iso = iso_over(sol.top, sol.top, forced);
    if (iso) {
      out.solved = true;
      out.solution = sol;
      out.top_sigma = *iso;
      return out;
    }
  }
  out.failure = "NoEquivariantExtension";
  return out;
}

StepUpResult stepup_solve(const TheoryPlugin& plugin, const AmalgamationProblem& partial,
                          int n, int k) {
  const int ground = n + k;
  if (ground != partial.n)
    throw DomainError("SpecOutOfBounds", "partial problem has the wrong ground size");
  validate_problem(partial, true);
  for (const auto& [u, st] : partial.faces)
    if (popcount(u) >= n)
      throw DomainError("SpecOutOfBounds", "partial data contains a large face");
  for (Mask u = 0; u < (Mask(1) << ground) - 1; ++u)
    if (popcount(u) < n && !partial.faces.count(u))
      throw DomainError("FunctorialityError", "missing partial face " + mask_name(u));

  StepUpResult out;
  out.faces = partial.faces;
  out.embeddings = partial.embeddings;

  for (int s = n; s <= ground; ++s) {
    for (Mask u = 0; u < (Mask(1) << ground); ++u) {
      if (popcount(u) != s) continue;
      // sub-problem over the bits of u
      auto idx = bits_of(u);
      std::map<int, int> rel;
      for (size_t i = 0; i < idx.size(); ++i) rel[idx[i]] = static_cast<int>(i);
      auto relabel = [&](Mask w) {
        Mask r = 0;
        for (int b : bits_of(w)) r |= Mask(1) << rel[b];
        return r;
      };
      AmalgamationProblem sub;
      sub.n = s;
      sub.theory = partial.theory;
      sub.q = partial.q;
      for (Mask w = u;; w = (w - 1) & u) {
        if (w != u) sub.faces[relabel(w)] = out.faces.at(w);
        if (w == 0) break;
      }
      for (Mask w1 = u;; w1 = (w1 - 1) & u) {
        for (Mask w2 = u;; w2 = (w2 - 1) & u) {
          if (w1 != u && w2 != u && w1 != w2 && (w1 & w2) == w1)
            sub.embeddings[{relabel(w1), relabel(w2)}] = out.embeddings.at({w1, w2});
          if (w2 == 0) break;
        }
        if (w1 == 0) break;
      }
      SolutionSet sols = solve(sub);
      if (sols.solutions.empty()) {
        out.success = false;
        out.failed_face = u;
        return out;
      }
      const Solution& sol = sols.solutions.front();
      out.faces[u] = sol.top;
      for (Mask w = (u - 1) & u;; w = (w - 1) & u) {
        out.embeddings[{w, u}] = sol.into_top.at(relabel(w));
        if (w == 0) break;
      }
    }
  }
  out.success = true;
  return out;
}

}  // namespace fgi
