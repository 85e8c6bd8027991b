#include "broad/field.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace broad {

bool is_prime(uint32_t n) {
  if (n < 2) return false;
  for (uint32_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

namespace {

// dense polynomials over GF(p), low degree first, no trailing zeros
using Poly = std::vector<uint32_t>;

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly poly_mod(Poly f, const Poly& g, uint32_t p) {
  trim(f);
  uint32_t glead = g.back();  // g monic in our uses, but stay general
  uint32_t glead_inv = 1;
  for (uint32_t t = 1; t < p; ++t)
    if (glead * t % p == 1) { glead_inv = t; break; }
  while (f.size() >= g.size()) {
    uint32_t c = f.back() * glead_inv % p;
    size_t shift = f.size() - g.size();
    for (size_t i = 0; i < g.size(); ++i)
      f[shift + i] = (f[shift + i] + p - c * g[i] % p) % p;
    trim(f);
  }
  return f;
}

Poly poly_mul(const Poly& a, const Poly& b, uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  return r;
}

// trial division by every monic polynomial of degree 1..deg(f)/2
bool poly_irreducible(const Poly& f, uint32_t p) {
  uint32_t deg = static_cast<uint32_t>(f.size()) - 1;
  if (deg == 1) return true;
  for (uint32_t d = 1; 2 * d <= deg; ++d) {
    uint64_t count = 1;
    for (uint32_t i = 0; i < d; ++i) count *= p;
    for (uint64_t code = 0; code < count; ++code) {
      Poly g(d + 1, 0);
      uint64_t c = code;
      for (uint32_t i = 0; i < d; ++i) { g[i] = c % p; c /= p; }
      g[d] = 1;
      if (poly_mod(f, g, p).empty()) return false;
    }
  }
  return true;
}

}  // namespace

Field::Field(uint32_t p, uint32_t k) : p_(p), k_(k) {
  if (!is_prime(p)) throw FieldError("field: p = " + std::to_string(p) + " is not prime");
  if (k < 1) throw FieldError("field: k must be >= 1");
  uint64_t q = 1;
  for (uint32_t i = 0; i < k; ++i) {
    q *= p;
    if (q > max_order) throw FieldError("field: p^k exceeds capacity 2^20");
  }
  q_ = static_cast<uint32_t>(q);
  // lexicographically least monic irreducible, scanning (c_0,...,c_{k-1})
  // from the constant term up
  uint64_t count = 1;
  for (uint32_t i = 0; i < k; ++i) count *= p;
  for (uint64_t code = 0;; ++code) {
    if (code >= count) throw FieldError("field: no irreducible modulus found");  // unreachable
    Poly f(k + 1, 0);
    // lexicographic order on (c_0, c_1, ...): c_0 varies slowest
    uint64_t c = code;
    for (uint32_t i = k; i-- > 0;) { f[i] = c % p; c /= p; }
    f[k] = 1;
    if (poly_irreducible(f, p)) { mod_ = f; break; }
  }
  init_tables();
}

Field::Field(uint32_t p, uint32_t k, std::vector<uint32_t> modulus) : p_(p), k_(k), mod_(std::move(modulus)) {
  if (!is_prime(p)) throw FieldError("field: p not prime");
  if (k < 1) throw FieldError("field: k must be >= 1");
  uint64_t q = 1;
  for (uint32_t i = 0; i < k; ++i) {
    q *= p;
    if (q > max_order) throw FieldError("field: p^k exceeds capacity 2^20");
  }
  q_ = static_cast<uint32_t>(q);
  if (mod_.size() != k + 1 || mod_.back() != 1)
    throw FieldError("field: modulus must be monic of degree k");
  for (uint32_t c : mod_)
    if (c >= p) throw FieldError("field: modulus coefficient out of range");
  if (!poly_irreducible(mod_, p)) throw FieldError("field: modulus is reducible");
  init_tables();
}

void Field::init_tables() {
  if (q_ <= table_limit) {
    mul_table_.resize(static_cast<size_t>(q_) * q_);
    for (uint32_t a = 0; a < q_; ++a)
      for (uint32_t b = a; b < q_; ++b) {
        uint32_t v = mul_poly(a, b);
        mul_table_[static_cast<size_t>(a) * q_ + b] = v;
        mul_table_[static_cast<size_t>(b) * q_ + a] = v;
      }
    inv_table_.assign(q_, 0);
    for (uint32_t a = 1; a < q_; ++a) inv_table_[a] = inv_poly(a);
  }
}

uint32_t Field::add(uint32_t a, uint32_t b) const {
  if (k_ == 1) return (a + b) % p_;
  uint32_t r = 0, m = 1;
  for (uint32_t i = 0; i < k_; ++i) {
    r += (a % p_ + b % p_) % p_ * m;
    a /= p_;
    b /= p_;
    m *= p_;
  }
  return r;
}

uint32_t Field::neg(uint32_t a) const {
  if (k_ == 1) return (p_ - a) % p_;
  uint32_t r = 0, m = 1;
  for (uint32_t i = 0; i < k_; ++i) {
    r += (p_ - a % p_) % p_ * m;
    a /= p_;
    m *= p_;
  }
  return r;
}

uint32_t Field::sub(uint32_t a, uint32_t b) const { return add(a, neg(b)); }

uint32_t Field::mul_poly(uint32_t a, uint32_t b) const {
  if (k_ == 1) return static_cast<uint64_t>(a) * b % p_;
  Poly fa = coeffs(a), fb = coeffs(b);
  trim(fa);
  trim(fb);
  Poly r = poly_mod(poly_mul(fa, fb, p_), mod_, p_);
  r.resize(k_, 0);
  return from_coeffs(r);
}

uint32_t Field::mul(uint32_t a, uint32_t b) const {
  if (!mul_table_.empty()) return mul_table_[static_cast<size_t>(a) * q_ + b];
  return mul_poly(a, b);
}

uint32_t Field::pow(uint32_t a, uint64_t e) const {
  uint32_t r = 1;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

uint32_t Field::inv_poly(uint32_t a) const {
  if (a == 0) throw FieldError("field: inverse of zero");
  return pow(a, static_cast<uint64_t>(q_) - 2);
}

uint32_t Field::inv(uint32_t a) const {
  if (a == 0) throw FieldError("field: inverse of zero");
  if (!inv_table_.empty()) return inv_table_[a];
  return inv_poly(a);
}

uint32_t Field::frobenius_q(uint32_t a) const {
  if (k_ % 2 != 0) throw FieldError("field: frobenius_q needs even k");
  uint64_t q0 = 1;
  for (uint32_t i = 0; i < k_ / 2; ++i) q0 *= p_;
  return pow(a, q0);
}

uint32_t Field::subfield_order() const {
  if (k_ % 2 != 0) throw FieldError("field: subfield_order needs even k");
  uint32_t q0 = 1;
  for (uint32_t i = 0; i < k_ / 2; ++i) q0 *= p_;
  return q0;
}

uint32_t Field::from_coeffs(const std::vector<uint32_t>& c) const {
  uint32_t r = 0, m = 1;
  for (uint32_t i = 0; i < k_; ++i) {
    uint32_t ci = i < c.size() ? c[i] : 0;
    if (ci >= p_) throw FieldError("field: coefficient out of range");
    r += ci * m;
    m *= p_;
  }
  return r;
}

std::vector<uint32_t> Field::coeffs(uint32_t a) const {
  std::vector<uint32_t> c(k_);
  for (uint32_t i = 0; i < k_; ++i) {
    c[i] = a % p_;
    a /= p_;
  }
  return c;
}

uint32_t Field::element_order(uint32_t a) const {
  if (a == 0) throw FieldError("field: order of zero");
  uint32_t o = 1, x = a;
  while (x != 1) {
    x = mul(x, a);
    ++o;
  }
  return o;
}

uint32_t Field::primitive_element() const {
  for (uint32_t a = 1; a < q_; ++a)
    if (element_order(a) == q_ - 1) return a;
  throw FieldError("field: no primitive element");  // unreachable
}

bool Field::is_square(uint32_t a) const {
  if (p_ == 2) return true;
  if (a == 0) return true;
  return pow(a, (static_cast<uint64_t>(q_) - 1) / 2) == 1;
}

uint32_t Field::least_nonsquare() const {
  if (p_ == 2) throw FieldError("field: no nonsquares in characteristic 2");
  for (uint32_t a = 2; a < q_; ++a)
    if (!is_square(a)) return a;
  throw FieldError("field: no nonsquare found");  // unreachable for q > 2
}

uint32_t Field::abs_trace(uint32_t a) const {
  uint32_t s = 0, x = a;
  for (uint32_t i = 0; i < k_; ++i) {
    s = add(s, x);
    x = pow(x, p_);
  }
  return s;  // lies in the prime field, packed value < p
}

FieldPtr field(uint32_t p, uint32_t k) {
  static std::mutex mu;
  static std::map<std::pair<uint32_t, uint32_t>, FieldPtr> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(p, k);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto f = std::make_shared<const Field>(p, k);
  cache[key] = f;
  return f;
}

}  // namespace broad
