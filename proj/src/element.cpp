#include "broad/element.hpp"

#include <bit>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace broad {

Perm::Perm(std::vector<uint8_t> images) : img_(std::move(images)) {
  std::vector<bool> seen(img_.size(), false);
  for (uint8_t x : img_) {
    if (x >= img_.size() || seen[x]) throw std::invalid_argument("perm: images are not a bijection");
    seen[x] = true;
  }
}

Perm Perm::identity(uint32_t degree) {
  std::vector<uint8_t> v(degree);
  for (uint32_t i = 0; i < degree; ++i) v[i] = static_cast<uint8_t>(i);
  return Perm(std::move(v));
}

Perm Perm::from_cycles(uint32_t degree, const std::vector<std::vector<uint8_t>>& cycles) {
  Perm p = identity(degree);
  for (const auto& c : cycles)
    for (size_t i = 0; i < c.size(); ++i)
      p.img_[c[i]] = c[(i + 1) % c.size()];
  // revalidate
  return Perm(p.img_);
}

Perm Perm::operator*(const Perm& o) const {
  std::vector<uint8_t> v(img_.size());
  for (size_t i = 0; i < img_.size(); ++i) v[i] = img_[o.img_[i]];
  Perm r;
  r.img_ = std::move(v);
  return r;
}

Perm Perm::inverse() const {
  std::vector<uint8_t> v(img_.size());
  for (size_t i = 0; i < img_.size(); ++i) v[img_[i]] = static_cast<uint8_t>(i);
  Perm r;
  r.img_ = std::move(v);
  return r;
}

bool Perm::is_identity() const {
  for (size_t i = 0; i < img_.size(); ++i)
    if (img_[i] != i) return false;
  return true;
}

uint32_t Perm::moved_count() const {
  uint32_t c = 0;
  for (size_t i = 0; i < img_.size(); ++i)
    if (img_[i] != i) ++c;
  return c;
}

Mat Mat::identity(const Field* f, uint32_t n) {
  Mat m(f, n);
  for (uint32_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

Mat Mat::operator*(const Mat& o) const {
  Mat r(f_, n_);
  for (uint32_t i = 0; i < n_; ++i)
    for (uint32_t k = 0; k < n_; ++k) {
      uint32_t a = at(i, k);
      if (a == 0) continue;
      for (uint32_t j = 0; j < n_; ++j) {
        uint32_t b = o.at(k, j);
        if (b == 0) continue;
        r.at(i, j) = f_->add(r.at(i, j), f_->mul(a, b));
      }
    }
  return r;
}

Mat Mat::add(const Mat& o) const {
  Mat r(f_, n_);
  for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = f_->add(e_[i], o.e_[i]);
  return r;
}

Mat Mat::transpose() const {
  Mat r(f_, n_);
  for (uint32_t i = 0; i < n_; ++i)
    for (uint32_t j = 0; j < n_; ++j) r.at(j, i) = at(i, j);
  return r;
}

Mat Mat::apply_frobenius() const {
  Mat r(f_, n_);
  for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = f_->frobenius_q(e_[i]);
  return r;
}

Mat Mat::conj_transpose() const { return apply_frobenius().transpose(); }

std::vector<uint32_t> Mat::apply(const std::vector<uint32_t>& v) const {
  std::vector<uint32_t> r(n_, 0);
  for (uint32_t i = 0; i < n_; ++i) {
    uint32_t s = 0;
    for (uint32_t j = 0; j < n_; ++j) s = f_->add(s, f_->mul(at(i, j), v[j]));
    r[i] = s;
  }
  return r;
}

std::vector<uint32_t> Mat::apply_row(const std::vector<uint32_t>& v) const {
  std::vector<uint32_t> r(n_, 0);
  for (uint32_t j = 0; j < n_; ++j) {
    uint32_t s = 0;
    for (uint32_t i = 0; i < n_; ++i) s = f_->add(s, f_->mul(v[i], at(i, j)));
    r[j] = s;
  }
  return r;
}

namespace {

// Gauss-Jordan; returns (rank, det); if invert, m becomes m^{-1}
std::pair<uint32_t, uint32_t> gauss(Mat& m, bool invert, Mat* inv_out) {
  const Field* f = m.field();
  uint32_t n = m.dim();
  Mat id = Mat::identity(f, n);
  Mat& aug = invert ? *inv_out : id;
  if (invert) *inv_out = Mat::identity(f, n);
  uint32_t det = 1, rank = 0;
  for (uint32_t col = 0, row = 0; col < n && row < n; ++col) {
    uint32_t piv = row;
    while (piv < n && m.at(piv, col) == 0) ++piv;
    if (piv == n) {
      det = 0;
      continue;
    }
    if (piv != row) {
      for (uint32_t j = 0; j < n; ++j) {
        std::swap(m.at(piv, j), m.at(row, j));
        std::swap(aug.at(piv, j), aug.at(row, j));
      }
      det = f->neg(det);
    }
    uint32_t d = m.at(row, col);
    det = f->mul(det, d);
    uint32_t dinv = f->inv(d);
    for (uint32_t j = 0; j < n; ++j) {
      m.at(row, j) = f->mul(m.at(row, j), dinv);
      aug.at(row, j) = f->mul(aug.at(row, j), dinv);
    }
    for (uint32_t i = 0; i < n; ++i) {
      if (i == row) continue;
      uint32_t c = m.at(i, col);
      if (c == 0) continue;
      for (uint32_t j = 0; j < n; ++j) {
        m.at(i, j) = f->sub(m.at(i, j), f->mul(c, m.at(row, j)));
        aug.at(i, j) = f->sub(aug.at(i, j), f->mul(c, aug.at(row, j)));
      }
    }
    ++row;
    ++rank;
  }
  return {rank, det};
}

}  // namespace

Mat Mat::inverse() const {
  Mat work = *this, inv(f_, n_);
  auto [rank, det] = gauss(work, true, &inv);
  if (det == 0) throw FieldError("mat: singular matrix has no inverse");
  return inv;
}

uint32_t Mat::det() const {
  Mat work = *this;
  return gauss(work, false, nullptr).second;
}

uint32_t Mat::rank() const {
  Mat work = *this;
  return gauss(work, false, nullptr).first;
}

bool Mat::is_identity() const {
  for (uint32_t i = 0; i < n_; ++i)
    for (uint32_t j = 0; j < n_; ++j)
      if (at(i, j) != (i == j ? 1u : 0u)) return false;
  return true;
}

bool Mat::is_scalar() const {
  uint32_t d = at(0, 0);
  for (uint32_t i = 0; i < n_; ++i)
    for (uint32_t j = 0; j < n_; ++j)
      if (at(i, j) != (i == j ? d : 0u)) return false;
  return d != 0;
}

std::vector<uint32_t> Mat::char_poly() const {
  // expansion over GF(q)[x] by fraction-free elimination is overkill at
  // desk dimensions; use the Faddeev-LeVerrier-free direct approach:
  // interpolation needs n+1 distinct points which small fields lack, so
  // compute det(xI - M) by cofactor expansion on a polynomial matrix.
  uint32_t n = n_;
  using P = std::vector<uint32_t>;  // poly over field, low degree first
  auto padd = [&](const P& a, const P& b) {
    P r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < r.size(); ++i) {
      uint32_t x = i < a.size() ? a[i] : 0, y = i < b.size() ? b[i] : 0;
      r[i] = f_->add(x, y);
    }
    return r;
  };
  auto pmul = [&](const P& a, const P& b) {
    if (a.empty() || b.empty()) return P{};
    P r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
      for (size_t j = 0; j < b.size(); ++j)
        r[i + j] = f_->add(r[i + j], f_->mul(a[i], b[j]));
    return r;
  };
  std::vector<std::vector<P>> m(n, std::vector<P>(n));
  for (uint32_t i = 0; i < n; ++i)
    for (uint32_t j = 0; j < n; ++j) {
      P p{f_->neg(at(i, j))};
      if (i == j) p.push_back(1);
      m[i][j] = p;
    }
  // recursive cofactor determinant with row selection (n <= 12 here)
  std::vector<uint32_t> cols(n);
  for (uint32_t j = 0; j < n; ++j) cols[j] = j;
  std::function<P(uint32_t, std::vector<uint32_t>&)> det_rec =
      [&](uint32_t row, std::vector<uint32_t>& cs) -> P {
    if (cs.empty()) return P{1};
    P acc{};
    for (size_t t = 0; t < cs.size(); ++t) {
      uint32_t c = cs[t];
      if (m[row][c].empty() || (m[row][c].size() == 1 && m[row][c][0] == 0)) continue;
      std::vector<uint32_t> rest;
      rest.reserve(cs.size() - 1);
      for (size_t u = 0; u < cs.size(); ++u)
        if (u != t) rest.push_back(cs[u]);
      P sub = det_rec(row + 1, rest);
      P term = pmul(m[row][c], sub);
      if (t % 2 == 1)
        for (auto& x : term) x = f_->neg(x);
      acc = padd(acc, term);
    }
    return acc;
  };
  P r = det_rec(0, cols);
  r.resize(n + 1, 0);
  return r;
}

Element elem_mul(const Element& a, const Element& b) {
  if (a.index() != b.index()) throw std::invalid_argument("element: mixed kinds");
  if (std::holds_alternative<Perm>(a)) return std::get<Perm>(a) * std::get<Perm>(b);
  return std::get<Mat>(a) * std::get<Mat>(b);
}

Element elem_inverse(const Element& a) {
  if (std::holds_alternative<Perm>(a)) return std::get<Perm>(a).inverse();
  return std::get<Mat>(a).inverse();
}

bool elem_is_identity(const Element& a) {
  if (std::holds_alternative<Perm>(a)) return std::get<Perm>(a).is_identity();
  return std::get<Mat>(a).is_identity();
}

Element elem_identity_like(const Element& a) {
  if (std::holds_alternative<Perm>(a)) return Perm::identity(std::get<Perm>(a).degree());
  const Mat& m = std::get<Mat>(a);
  return Mat::identity(m.field(), m.dim());
}

uint32_t elem_order(const Element& a) {
  Element x = a;
  uint32_t o = 1;
  while (!elem_is_identity(x)) {
    x = elem_mul(x, a);
    ++o;
    if (o > (1u << 26)) throw std::runtime_error("element: order overflow");
  }
  return o;
}

bool elem_commutes(const Element& a, const Element& b) {
  return elem_mul(a, b) == elem_mul(b, a);
}

bool elem_less(const Element& a, const Element& b) {
  if (a.index() != b.index()) return a.index() < b.index();
  if (std::holds_alternative<Perm>(a)) return std::get<Perm>(a) < std::get<Perm>(b);
  return std::get<Mat>(a) < std::get<Mat>(b);
}

std::string elem_serialize(const Element& a) {
  std::ostringstream os;
  if (std::holds_alternative<Perm>(a)) {
    const Perm& p = std::get<Perm>(a);
    for (uint32_t i = 0; i < p.degree(); ++i) {
      if (i) os << ' ';
      os << static_cast<uint32_t>(p(static_cast<uint8_t>(i))) + 1;
    }
  } else {
    const Mat& m = std::get<Mat>(a);
    for (uint32_t i = 0; i < m.dim(); ++i)
      for (uint32_t j = 0; j < m.dim(); ++j) {
        if (i || j) os << ' ';
        os << m.at(i, j);
      }
  }
  return os.str();
}

Codec Codec::for_element(const Element& e) {
  Codec c;
  if (std::holds_alternative<Perm>(e)) {
    const Perm& p = std::get<Perm>(e);
    c.is_perm = true;
    c.degree = p.degree();
    c.entries = p.degree();
    c.bits = p.degree() <= 1 ? 1 : std::bit_width(static_cast<uint32_t>(p.degree() - 1));
  } else {
    const Mat& m = std::get<Mat>(e);
    c.f = m.field();
    c.dim = m.dim();
    c.entries = m.dim() * m.dim();
    c.bits = m.field()->q() <= 2 ? 1 : std::bit_width(m.field()->q() - 1);
  }
  return c;
}

namespace {
template <class Put>
void encode_entries(const Codec& c, const Element& e, Put put) {
  if (c.is_perm) {
    const Perm& p = std::get<Perm>(e);
    for (uint32_t i = 0; i < c.entries; ++i) put(p(static_cast<uint8_t>(i)));
  } else {
    const Mat& m = std::get<Mat>(e);
    for (uint32_t i = 0; i < c.entries; ++i) put(m.entries()[i]);
  }
}

template <class Get>
Element decode_entries(const Codec& c, Get get) {
  if (c.is_perm) {
    std::vector<uint8_t> img(c.entries);
    for (uint32_t i = 0; i < c.entries; ++i) img[i] = static_cast<uint8_t>(get());
    return Perm(std::move(img));
  }
  Mat m(c.f, c.dim);
  for (uint32_t i = 0; i < c.dim; ++i)
    for (uint32_t j = 0; j < c.dim; ++j) m.at(i, j) = get();
  return m;
}
}  // namespace

void Codec::encode(const Element& e, uint64_t* out) const {
  uint32_t nw = words();
  for (uint32_t i = 0; i < nw; ++i) out[i] = 0;
  uint32_t pos = 0;
  encode_entries(*this, e, [&](uint32_t v) {
    uint32_t w = pos / 64, off = pos % 64;
    out[w] |= static_cast<uint64_t>(v) << off;
    if (off + bits > 64) out[w + 1] |= static_cast<uint64_t>(v) >> (64 - off);
    pos += bits;
  });
}

Element Codec::decode(const uint64_t* in) const {
  uint64_t mask = (bits >= 64) ? ~0ull : ((1ull << bits) - 1);
  uint32_t pos = 0;
  return decode_entries(*this, [&]() {
    uint32_t w = pos / 64, off = pos % 64;
    uint64_t v = in[w] >> off;
    if (off + bits > 64) v |= in[w + 1] << (64 - off);
    pos += bits;
    return static_cast<uint32_t>(v & mask);
  });
}

}  // namespace broad
