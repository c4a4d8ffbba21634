#include "core/linear.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "core/error.hpp"

namespace fgi {

Mat rref(const GF& f, Mat m) {
  if (m.empty()) return m;
  const int cols = static_cast<int>(m[0].size());
  int row = 0;
  for (int col = 0; col < cols && row < static_cast<int>(m.size()); ++col) {
    int piv = -1;
    for (int r = row; r < static_cast<int>(m.size()); ++r)
      if (m[r][col] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(m[row], m[piv]);
    int scale = f.inv(m[row][col]);
    for (int c = 0; c < cols; ++c) m[row][c] = f.mul(m[row][c], scale);
    for (int r = 0; r < static_cast<int>(m.size()); ++r) {
      if (r == row || m[r][col] == 0) continue;
      int factor = m[r][col];
      for (int c = 0; c < cols; ++c)
        m[r][c] = f.sub(m[r][c], f.mul(factor, m[row][c]));
    }
    ++row;
  }
  m.resize(row);
  return m;
}

int rank(const GF& f, const Mat& m) { return static_cast<int>(rref(f, m).size()); }

Mat kernel_basis(const GF& f, const Mat& m) {
  if (m.empty()) return {};
  const int cols = static_cast<int>(m[0].size());
  Mat r = rref(f, m);
  std::vector<int> pivot_col;
  std::vector<bool> is_pivot(cols, false);
  for (const auto& row : r) {
    int c = 0;
    while (c < cols && row[c] == 0) ++c;
    pivot_col.push_back(c);
    is_pivot[c] = true;
  }
  Mat out;
  for (int free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    Vec v(cols, 0);
    v[free] = 1;
    for (size_t i = 0; i < r.size(); ++i) v[pivot_col[i]] = f.neg(r[i][free]);
    out.push_back(v);
  }
  return rref(f, out);
}

bool in_span(const GF& f, const Mat& basis, const Vec& v) {
  Vec w = v;
  const int cols = static_cast<int>(v.size());
  for (const auto& row : basis) {
    int c = 0;
    while (c < cols && row[c] == 0) ++c;
    if (c == cols) continue;
    if (w[c] != 0) {
      int factor = w[c];
      for (int k = 0; k < cols; ++k) w[k] = f.sub(w[k], f.mul(factor, row[k]));
    }
  }
  return std::all_of(w.begin(), w.end(), [](int x) { return x == 0; });
}

Vec mat_apply(const GF& f, const Mat& m, const Vec& v) {
  Vec out(m.size(), 0);
  for (size_t r = 0; r < m.size(); ++r)
    for (size_t c = 0; c < v.size(); ++c)
      out[r] = f.add(out[r], f.mul(m[r][c], v[c]));
  return out;
}

std::vector<Vec> span_elements(const GF& f, const Mat& basis, int ambient) {
  std::vector<Vec> out;
  const int d = static_cast<int>(basis.size());
  int total = 1;
  for (int i = 0; i < d; ++i) total *= f.q();
  for (int code = 0; code < total; ++code) {
    Vec v(ambient, 0);
    int t = code;
    for (int i = 0; i < d; ++i) {
      int coef = t % f.q();
      t /= f.q();
      for (int c = 0; c < ambient; ++c) v[c] = f.add(v[c], f.mul(coef, basis[i][c]));
    }
    out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::vector<int>> d_subsets(int n, int d) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == d) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

namespace {

int determinant(const GF& f, Mat m) {
  const int n = static_cast<int>(m.size());
  int det = 1;
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (m[r][col] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return 0;
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = f.neg(det);
    }
    det = f.mul(det, m[col][col]);
    int scale = f.inv(m[col][col]);
    for (int c = col; c < n; ++c) m[col][c] = f.mul(m[col][c], scale);
    for (int r = col + 1; r < n; ++r) {
      if (m[r][col] == 0) continue;
      int factor = m[r][col];
      for (int c = col; c < n; ++c) m[r][c] = f.sub(m[r][c], f.mul(factor, m[col][c]));
    }
  }
  return det;
}

void normalize_projective(const GF& f, Vec& coords) {
  for (int x : coords)
    if (x != 0) {
      int scale = f.inv(x);
      for (int& c : coords) c = f.mul(c, scale);
      return;
    }
}

// alternating extension of subset-indexed coordinates to arbitrary tuples
int alt_coord(const GF& f, const SubspaceCode& code,
              const std::map<std::vector<int>, int>& index, std::vector<int> tuple) {
  for (size_t i = 0; i < tuple.size(); ++i)
    for (size_t j = i + 1; j < tuple.size(); ++j)
      if (tuple[i] == tuple[j]) return 0;
  int sign = 1;
  for (size_t i = 0; i < tuple.size(); ++i)
    for (size_t j = i + 1; j < tuple.size(); ++j)
      if (tuple[i] > tuple[j]) {
        std::swap(tuple[i], tuple[j]);
        sign = -sign;
      }
  int v = code.coords[index.at(tuple)];
  return sign == 1 ? v : f.neg(v);
}

}  // namespace

SubspaceCode code_subspace(const GF& f, const Mat& spanning, int ambient_dim) {
  Mat basis = rref(f, spanning);
  if (basis.empty())
    throw DomainError("ZeroSubspace", "cannot code the zero subspace");
  for (const auto& row : basis)
    if (static_cast<int>(row.size()) != ambient_dim)
      throw DomainError("BadDimension", "spanning vector has wrong length");
  const int d = static_cast<int>(basis.size());
  auto subsets = d_subsets(ambient_dim, d);
  SubspaceCode code;
  code.q = f.q();
  code.ambient_dim = ambient_dim;
  code.degree = d;
  code.coords.resize(subsets.size());
  for (size_t s = 0; s < subsets.size(); ++s) {
    Mat minor(d, Vec(d));
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) minor[r][c] = basis[r][subsets[s][c]];
    code.coords[s] = determinant(f, minor);
  }
  normalize_projective(f, code.coords);
  return code;
}

Mat decode_subspace(const GF& f, const SubspaceCode& code) {
  if (code.empty) throw DomainError("ZeroSubspace", "empty code decodes to nothing");
  const int n = code.ambient_dim, d = code.degree;
  auto subsets = d_subsets(n, d);
  if (code.coords.size() != subsets.size())
    throw DomainError("BadDimension", "coordinate vector has wrong length");
  bool any = false;
  for (int c : code.coords) any = any || c != 0;
  if (!any) throw DomainError("ZeroSubspace", "all coordinates vanish");

  std::map<std::vector<int>, int> index;
  for (size_t s = 0; s < subsets.size(); ++s) index[subsets[s]] = static_cast<int>(s);

  // Grassmann-Pluecker relations: for every (d-1)-subset A and (d+1)-subset B,
  // sum_k (-1)^k p_{A + b_k} p_{B - b_k} = 0.
  if (d >= 1 && d < n) {
    auto as = d_subsets(n, d - 1);
    auto bs = d_subsets(n, d + 1);
    for (const auto& A : as) {
      for (const auto& B : bs) {
        int acc = 0;
        for (size_t k = 0; k < B.size(); ++k) {
          std::vector<int> left = A;
          left.push_back(B[k]);
          std::vector<int> right;
          for (size_t t = 0; t < B.size(); ++t)
            if (t != k) right.push_back(B[t]);
          int term = f.mul(alt_coord(f, code, index, left),
                           code.coords[index.at(right)]);
          acc = (k % 2 == 0) ? f.add(acc, term) : f.sub(acc, term);
        }
        if (acc != 0) {
          json witness;
          witness["A"] = A;
          witness["B"] = B;
          witness["value"] = acc;
          throw DomainError("NotDecomposable",
                            "a quadratic Pluecker relation is violated", witness);
        }
      }
    }
  }

  // reconstruct: with p_{S0} != 0, the rows w_i[j] = p_{S0 with i -> j} span
  int s0 = -1;
  for (size_t s = 0; s < subsets.size(); ++s)
    if (code.coords[s] != 0) {
      s0 = static_cast<int>(s);
      break;
    }
  const auto& S0 = subsets[s0];
  Mat basis;
  for (int i = 0; i < d; ++i) {
    Vec w(n, 0);
    for (int j = 0; j < n; ++j) {
      std::vector<int> tuple = S0;
      tuple[i] = j;
      w[j] = alt_coord(f, code, index, tuple);
    }
    basis.push_back(w);
  }
  Mat out = rref(f, basis);
  if (static_cast<int>(out.size()) != d)
    throw DomainError("NotDecomposable", "reconstruction has wrong rank");
  return out;
}

FlaggedSpace standard_flag(const GF& f, int n, const std::string& label_prefix) {
  FlaggedSpace v;
  v.q = f.q();
  v.dim = n;
  for (int i = 0; i < n; ++i) v.basis_labels.push_back(label_prefix + std::to_string(i + 1));
  for (int i = 1; i <= n; ++i) {
    Mat basis;
    for (int r = 0; r < i; ++r) {
      Vec e(n, 0);
      e[r] = 1;
      basis.push_back(e);
    }
    v.flag.push_back(basis);
  }
  return v;
}

void check_flag(const GF& f, const FlaggedSpace& v) {
  if (static_cast<int>(v.flag.size()) != v.dim)
    throw DomainError("BadFlag", "flag length differs from dimension");
  for (int i = 0; i < v.dim; ++i) {
    if (rank(f, v.flag[i]) != i + 1)
      throw DomainError("BadFlag", "step has wrong dimension", json{{"step", i + 1}});
    if (i > 0)
      for (const auto& row : v.flag[i - 1])
        if (!in_span(f, v.flag[i], row))
          throw DomainError("BadFlag", "chain is not increasing", json{{"step", i + 1}});
  }
}

FlaggedSpace flag_tensor(const GF& f, const FlaggedSpace& v, const FlaggedSpace& w) {
  const int m = v.dim, n = w.dim;
  FlaggedSpace out;
  out.q = f.q();
  out.dim = m * n;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      out.basis_labels.push_back(v.basis_labels[i] + "*" + w.basis_labels[j]);

  auto tensor_rows = [&](const Mat& a, const Mat& b) {
    Mat rows;
    for (const auto& ra : a)
      for (const auto& rb : b) {
        Vec t(m * n, 0);
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < n; ++j) t[i * n + j] = f.mul(ra[i], rb[j]);
        rows.push_back(t);
      }
    return rows;
  };

  // chain: V_{i-1} (x) W + V_i (x) W_j, step (i-1)n + j
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= n; ++j) {
      Mat rows;
      if (i > 1) {
        Mat prev = tensor_rows(v.flag[i - 2], w.flag[n - 1]);
        rows.insert(rows.end(), prev.begin(), prev.end());
      }
      Mat cur = tensor_rows(v.flag[i - 1], w.flag[j - 1]);
      rows.insert(rows.end(), cur.begin(), cur.end());
      out.flag.push_back(rref(f, rows));
    }
  check_flag(f, out);
  return out;
}

FlaggedSpace flag_dual(const GF& f, const FlaggedSpace& v) {
  FlaggedSpace out;
  out.q = f.q();
  out.dim = v.dim;
  for (int i = 0; i < v.dim; ++i) out.basis_labels.push_back(v.basis_labels[i] + "'");
  // dual flag: D_i = annihilator of W_{n-i}, dimensions reversed
  for (int i = 1; i <= v.dim; ++i) {
    if (i == v.dim) {
      Mat full;
      for (int r = 0; r < v.dim; ++r) {
        Vec e(v.dim, 0);
        e[r] = 1;
        full.push_back(e);
      }
      out.flag.push_back(full);
    } else {
      out.flag.push_back(kernel_basis(f, v.flag[v.dim - i - 1]));
    }
  }
  check_flag(f, out);
  return out;
}

LineCode code_flagged_line(const GF& f, const Vec& generator, const FlaggedSpace& w) {
  bool zero = std::all_of(generator.begin(), generator.end(),
                          [](int x) { return x == 0; });
  if (zero) throw DomainError("ZeroSubspace", "line generator is zero");
  check_flag(f, w);
  // level is the k with U <= W_{k+1}, U not <= W_k (W_0 = 0)
  int level = 0;
  for (level = 0; level < w.dim; ++level)
    if (in_span(f, w.flag[level], generator)) break;

  // canonical generator of W_{k+1}/W_k: the rref row of W_{k+1} outside W_k
  Vec pivot_row;
  if (level == 0) {
    pivot_row = w.flag[0][0];
  } else {
    for (const auto& row : w.flag[level])
      if (!in_span(f, w.flag[level - 1], row)) {
        pivot_row = row;
        break;
      }
  }
  // solve generator = c * pivot_row (mod W_k); scale so class matches
  // the class of generator in the 1-dim quotient equals c * class(pivot_row)
  Vec residual = generator;
  if (level > 0) {
    // reduce generator by W_k to expose the quotient coefficient
    for (const auto& row : w.flag[level - 1]) {
      int c = 0;
      const int n = static_cast<int>(row.size());
      int pc = 0;
      while (pc < n && row[pc] == 0) ++pc;
      c = residual[pc];
      if (c != 0)
        for (int t = 0; t < n; ++t) residual[t] = f.sub(residual[t], f.mul(c, row[t]));
    }
  }
  // residual is a nonzero multiple of pivot_row mod nothing in the quotient;
  // find the scalar against pivot_row's pivot column
  int pc = 0;
  while (pivot_row[pc] == 0) ++pc;
  int c = residual[pc];
  if (c == 0) throw DomainError("BadFlag", "line vanishes in its quotient level");
  LineCode out;
  out.level = level;
  int scale = f.inv(c);
  out.element.resize(generator.size());
  for (size_t t = 0; t < generator.size(); ++t)
    out.element[t] = f.mul(scale, generator[t]);
  return out;
}

PointSetCode code_point_set(const GF& f, int n, const std::vector<Vec>& points,
                            int degree_cap) {
  // reduced monomials: per-variable degree <= q-1, total degree <= cap
  std::vector<std::vector<int>> monomials;
  std::vector<int> exp(n, 0);
  auto rec = [&](auto&& self, int var, int total) -> void {
    if (var == n) {
      monomials.push_back(exp);
      return;
    }
    for (int e = 0; e <= f.q() - 1 && total + e <= degree_cap; ++e) {
      exp[var] = e;
      self(self, var + 1, total + e);
    }
    exp[var] = 0;
  };
  rec(rec, 0, 0);

  Mat eval;
  for (const auto& z : points) {
    Vec row;
    for (const auto& mono : monomials) {
      int v = 1;
      for (int i = 0; i < n; ++i) v = f.mul(v, f.pow(z[i], mono[i]));
      row.push_back(v);
    }
    eval.push_back(row);
  }

  PointSetCode out;
  out.monomial_count = static_cast<int>(monomials.size());
  out.complete = degree_cap >= n * (f.q() - 1);
  Mat vanishing = points.empty() ? Mat() : kernel_basis(f, eval);
  if (points.empty()) {
    // nothing to vanish on: every reduced polynomial qualifies
    for (int i = 0; i < out.monomial_count; ++i) {
      Vec e(out.monomial_count, 0);
      e[i] = 1;
      vanishing.push_back(e);
    }
  }
  if (vanishing.empty()) {
    out.code.q = f.q();
    out.code.ambient_dim = out.monomial_count;
    out.code.degree = 0;
    out.code.empty = true;
    return out;
  }
  out.code = code_subspace(f, vanishing, out.monomial_count);
  return out;
}

RootTorsor root_torsor(const GF& f, int m) {
  if (m < 2) throw DomainError("BadExponent", "m must be >= 2");
  RootTorsor out;
  out.q = f.q();
  out.m = m;
  out.t_map.assign(f.q(), 0);
  for (int w = 1; w < f.q(); ++w) out.t_map[w] = f.pow(w, m);
  for (int a = 1; a < f.q(); ++a)
    if (f.pow(a, m) == 1) out.mu_m.push_back(a);

  std::vector<int> cls(f.q(), -1);
  int next = 0;
  for (int v = 1; v < f.q(); ++v) {
    if (cls[v] >= 0) continue;
    out.classes.emplace_back();
    for (int s = 1; s < f.q(); ++s) {
      int u = f.mul(v, f.pow(s, m));
      if (cls[u] < 0) {
        cls[u] = next;
        out.classes.back().push_back(u);
      }
    }
    std::sort(out.classes.back().begin(), out.classes.back().end());
    ++next;
  }
  out.class_count = next;
  return out;
}

}  // namespace fgi
