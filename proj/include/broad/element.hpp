#ifndef BROAD_ELEMENT_HPP
#define BROAD_ELEMENT_HPP

#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "broad/field.hpp"

namespace broad {

// permutation of {0..degree-1}, stored as image vector
class Perm {
public:
  Perm() = default;
  explicit Perm(std::vector<uint8_t> images);
  static Perm identity(uint32_t degree);
  // from disjoint-cycle notation, 0-based points
  static Perm from_cycles(uint32_t degree, const std::vector<std::vector<uint8_t>>& cycles);

  uint32_t degree() const { return static_cast<uint32_t>(img_.size()); }
  uint8_t operator()(uint8_t x) const { return img_[x]; }
  const std::vector<uint8_t>& images() const { return img_; }

  Perm operator*(const Perm& o) const;  // (a*b)(x) = a(b(x))
  Perm inverse() const;
  bool is_identity() const;
  uint32_t moved_count() const;
  bool operator==(const Perm& o) const { return img_ == o.img_; }
  bool operator<(const Perm& o) const { return img_ < o.img_; }

private:
  std::vector<uint8_t> img_;
};

// square matrix over a finite field; entries packed field values, row-major
class Mat {
public:
  Mat() : f_(nullptr), n_(0) {}
  Mat(const Field* f, uint32_t n) : f_(f), n_(n), e_(static_cast<size_t>(n) * n, 0) {}
  static Mat identity(const Field* f, uint32_t n);

  uint32_t dim() const { return n_; }
  const Field* field() const { return f_; }
  uint32_t at(uint32_t i, uint32_t j) const { return e_[static_cast<size_t>(i) * n_ + j]; }
  uint32_t& at(uint32_t i, uint32_t j) { return e_[static_cast<size_t>(i) * n_ + j]; }
  const std::vector<uint32_t>& entries() const { return e_; }

  Mat operator*(const Mat& o) const;
  Mat add(const Mat& o) const;
  Mat inverse() const;  // throws FieldError if singular
  Mat transpose() const;
  Mat conj_transpose() const;  // entrywise frobenius_q, then transpose
  Mat apply_frobenius() const;
  // matrix-vector products
  std::vector<uint32_t> apply(const std::vector<uint32_t>& v) const;         // M v
  std::vector<uint32_t> apply_row(const std::vector<uint32_t>& v) const;     // v^T M
  uint32_t det() const;
  uint32_t rank() const;
  bool is_identity() const;
  bool is_scalar() const;
  // coefficients of det(xI - M), low degree first, length n+1
  std::vector<uint32_t> char_poly() const;

  bool operator==(const Mat& o) const { return n_ == o.n_ && e_ == o.e_; }
  bool operator<(const Mat& o) const { return e_ < o.e_; }

private:
  const Field* f_;
  uint32_t n_;
  std::vector<uint32_t> e_;
};

using Element = std::variant<Perm, Mat>;

Element elem_mul(const Element& a, const Element& b);
Element elem_inverse(const Element& a);
bool elem_is_identity(const Element& a);
uint32_t elem_order(const Element& a);
Element elem_identity_like(const Element& a);
bool elem_commutes(const Element& a, const Element& b);
bool elem_less(const Element& a, const Element& b);
// serialization used for deterministic tie-breaks and the group file format:
// perms as 1-based images, matrices as base-p packed entries
std::string elem_serialize(const Element& a);

/*
  Fixed-width bit packing of elements of one context (a permutation degree,
  or a matrix dimension over a field) into 64/128-bit keys or a wide word
  vector.  Keys are the working representation of enumerated groups: the
  element set of A12 fits in a flat vector of uint64 this way.
*/
struct Codec {
  bool is_perm = false;
  uint32_t degree = 0;  // perm
  const Field* f = nullptr;
  uint32_t dim = 0;  // mat
  uint32_t bits = 0, entries = 0;

  static Codec for_element(const Element& e);
  uint32_t total_bits() const { return bits * entries; }
  // 64-bit words per key
  uint32_t words() const { return (total_bits() + 63) / 64; }

  void encode(const Element& e, uint64_t* out) const;
  Element decode(const uint64_t* in) const;
};

}  // namespace broad

#endif
