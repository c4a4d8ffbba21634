#include "core/gf.hpp"

#include "core/error.hpp"

namespace fgi {

namespace {

// polynomial helpers over GF(p), coefficient vectors little-endian
std::vector<int> poly_mul_mod(const std::vector<int>& a, const std::vector<int>& b,
                              const std::vector<int>& modpoly, int p) {
  std::vector<int> c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
  const int k = static_cast<int>(modpoly.size()) - 1;
  for (int d = static_cast<int>(c.size()) - 1; d >= k; --d) {
    int coef = c[d];
    if (coef == 0) continue;
    for (int i = 0; i <= k; ++i) {
      int idx = d - k + i;
      c[idx] = ((c[idx] - coef * modpoly[i]) % p + p) % p;
    }
  }
  c.resize(k);
  return c;
}

int encode(const std::vector<int>& digits, int p) {
  int v = 0;
  for (int i = static_cast<int>(digits.size()) - 1; i >= 0; --i) v = v * p + digits[i];
  return v;
}

std::vector<int> decode(int v, int p, int k) {
  std::vector<int> d(k);
  for (int i = 0; i < k; ++i) {
    d[i] = v % p;
    v /= p;
  }
  return d;
}

bool is_irreducible(const std::vector<int>& poly, int p) {
  // no roots and no factor of degree <= deg/2, by trial division
  const int k = static_cast<int>(poly.size()) - 1;
  for (int d = 1; d <= k / 2; ++d) {
    int count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    for (int f = 0; f < count; ++f) {
      std::vector<int> div = decode(f, p, d);
      div.push_back(1);  // monic of degree d
      // remainder of poly by div
      std::vector<int> r = poly;
      for (int t = static_cast<int>(r.size()) - 1; t >= d; --t) {
        int coef = r[t];
        if (coef == 0) continue;
        for (int i = 0; i <= d; ++i) {
          int idx = t - d + i;
          r[idx] = ((r[idx] - coef * div[i]) % p + p) % p;
        }
      }
      bool zero = true;
      for (int i = 0; i < d; ++i) zero = zero && r[i] == 0;
      if (zero) return false;
    }
  }
  return true;
}

}  // namespace

GF::GF(int q) : q_(q) {
  if (q < 2) throw DomainError("BadField", "q must be >= 2");
  int p = 2;
  while (p * p <= q && q % p != 0) ++p;
  if (q % p != 0) p = q;  // q prime
  int k = 0, t = q;
  while (t > 1) {
    if (t % p != 0) throw DomainError("BadField", "q is not a prime power");
    t /= p;
    ++k;
  }
  p_ = p;
  k_ = k;

  add_.assign(q, std::vector<int>(q));
  mul_.assign(q, std::vector<int>(q));
  neg_.assign(q, 0);
  if (k == 1) {
    for (int a = 0; a < q; ++a) {
      neg_[a] = (q - a) % q;
      for (int b = 0; b < q; ++b) {
        add_[a][b] = (a + b) % q;
        mul_[a][b] = (a * b) % q;
      }
    }
  } else {
    // find a monic irreducible of degree k over GF(p)
    std::vector<int> modpoly;
    int count = 1;
    for (int i = 0; i < k; ++i) count *= p;
    for (int f = 0; f < count; ++f) {
      std::vector<int> cand = decode(f, p, k);
      cand.push_back(1);
      if (is_irreducible(cand, p)) {
        modpoly = cand;
        break;
      }
    }
    for (int a = 0; a < q; ++a) {
      auto da = decode(a, p, k);
      std::vector<int> na(k);
      for (int i = 0; i < k; ++i) na[i] = (p - da[i]) % p;
      neg_[a] = encode(na, p);
      for (int b = 0; b < q; ++b) {
        auto db = decode(b, p, k);
        std::vector<int> s(k);
        for (int i = 0; i < k; ++i) s[i] = (da[i] + db[i]) % p;
        add_[a][b] = encode(s, p);
        mul_[a][b] = encode(poly_mul_mod(da, db, modpoly, p), p);
      }
    }
  }
  inv_.assign(q, -1);
  for (int a = 1; a < q; ++a)
    for (int b = 1; b < q; ++b)
      if (mul_[a][b] == 1) {
        inv_[a] = b;
        break;
      }
}

int GF::inv(int a) const {
  if (a == 0) throw DomainError("DivisionByZero", "inverse of zero");
  return inv_[a];
}

int GF::pow(int a, int e) const {
  int r = 1, base = a;
  while (e > 0) {
    if (e & 1) r = mul(r, base);
    base = mul(base, base);
    e >>= 1;
  }
  return r;
}

}  // namespace fgi
