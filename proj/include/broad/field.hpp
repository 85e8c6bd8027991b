#ifndef BROAD_FIELD_HPP
#define BROAD_FIELD_HPP

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace broad {

struct FieldError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/*
  Exact arithmetic in GF(p^k), p^k <= 2^20.

  Elements are packed into a uint32_t as sum c_i p^i where (c_0,...,c_{k-1})
  are the coefficients of the polynomial representative, low degree first.
  The modulus is the lexicographically least monic irreducible of degree k
  over GF(p), coefficient lists compared from the constant term up, so the
  same (p,k) always yields the same field on any machine.

  Multiplication and inversion are table-backed for small q and fall back to
  polynomial arithmetic above the table threshold.
*/
class Field {
public:
  static constexpr uint32_t max_order = 1u << 20;

  Field(uint32_t p, uint32_t k);
  Field(uint32_t p, uint32_t k, std::vector<uint32_t> modulus);

  uint32_t p() const { return p_; }
  uint32_t k() const { return k_; }
  uint32_t q() const { return q_; }
  // modulus coefficients, low degree first, length k+1, monic
  const std::vector<uint32_t>& modulus() const { return mod_; }

  uint32_t add(uint32_t a, uint32_t b) const;
  uint32_t sub(uint32_t a, uint32_t b) const;
  uint32_t neg(uint32_t a) const;
  uint32_t mul(uint32_t a, uint32_t b) const;
  uint32_t inv(uint32_t a) const;
  uint32_t div(uint32_t a, uint32_t b) const { return mul(a, inv(b)); }
  uint32_t pow(uint32_t a, uint64_t e) const;

  // x -> x^q0 with q0 = p^(k/2); requires even k.  Involutory automorphism
  // of GF(q0^2) fixing exactly the GF(q0) subfield.
  uint32_t frobenius_q(uint32_t a) const;
  uint32_t subfield_order() const;  // q0 = p^(k/2), even k only
  bool in_subfield(uint32_t a) const { return frobenius_q(a) == a; }

  uint32_t from_coeffs(const std::vector<uint32_t>& c) const;
  std::vector<uint32_t> coeffs(uint32_t a) const;

  uint32_t one() const { return 1; }
  // multiplicative order of a nonzero element
  uint32_t element_order(uint32_t a) const;
  // least primitive element (generator of the multiplicative group)
  uint32_t primitive_element() const;
  // odd characteristic only: is a a square in GF(q)?  a=0 counts as square.
  bool is_square(uint32_t a) const;
  // least nonsquare (odd characteristic)
  uint32_t least_nonsquare() const;
  // absolute trace to GF(p)
  uint32_t abs_trace(uint32_t a) const;

  bool operator==(const Field& o) const {
    return p_ == o.p_ && k_ == o.k_ && mod_ == o.mod_;
  }

private:
  uint32_t p_, k_, q_;
  std::vector<uint32_t> mod_;
  std::vector<uint32_t> mul_table_;  // q*q entries when q <= table_limit
  std::vector<uint32_t> inv_table_;
  static constexpr uint32_t table_limit = 512;

  void init_tables();
  uint32_t mul_poly(uint32_t a, uint32_t b) const;
  uint32_t inv_poly(uint32_t a) const;
};

using FieldPtr = std::shared_ptr<const Field>;

// Cached field registry: one immutable instance per (p,k).
FieldPtr field(uint32_t p, uint32_t k);

bool is_prime(uint32_t n);

}  // namespace broad

#endif
