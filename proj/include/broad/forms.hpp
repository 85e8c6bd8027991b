#ifndef BROAD_FORMS_HPP
#define BROAD_FORMS_HPP

#include <cstdint>
#include <vector>

#include "broad/element.hpp"
#include "broad/field.hpp"

namespace broad {

using Vec = std::vector<uint32_t>;

enum class FormKind { alternating, quadratic_char2, symmetric, hermitian };

/*
  A nondegenerate form on F^dim.

  alternating      B(u,v) = u^T G v, G skew with zero diagonal
  quadratic_char2  quadratic values on the basis (qdiag) plus the polar
                   form B(u,v) = Q(u+v)+Q(u)+Q(v), G alternating
  symmetric        odd characteristic, B(u,v) = u^T G v, G symmetric;
                   Q(v) means (v,v) here
  hermitian        B(u,v) = u^T G conj(v) over GF(q0^2), G = conj(G)^T
*/
struct Form {
  FormKind kind;
  uint32_t dim = 0;
  FieldPtr F;
  Mat gram;
  Vec qdiag;      // quadratic_char2 only
  char eps = 'o'; // '+', '-', 'o' where orthogonal type applies

  uint32_t bilinear(const Vec& u, const Vec& v) const;
  uint32_t quadratic(const Vec& v) const;
  bool is_singular_vector(const Vec& v) const;
  bool is_isometry(const Mat& g) const;
  // dimension of a maximal totally singular subspace, by constructive
  // hyperbolic splitting (desk-scale fields)
  uint32_t witt_index() const;
  char type_from_witt() const;  // '+', '-', 'o' for orthogonal/hermitian-free kinds
  void validate() const;        // throws FieldError on any invariant breach

  Form restrict_to(const std::vector<Vec>& basis) const;
};

// standard forms in the documented bases
Form alternating_form(const FieldPtr& F, uint32_t dim);           // pairs (e_i, f_i), B(e_i,f_j)=delta
Form quadratic_form_char2(const FieldPtr& F, uint32_t dim, char eps);
Form symmetric_form(const FieldPtr& F, uint32_t dim, char eps);   // odd char
Form hermitian_form(const FieldPtr& Fq2, uint32_t dim);
// 2-dimensional odd-characteristic blocks for the torus decompositions
Form symmetric_block2(const FieldPtr& F, char type);
Form direct_sum(const Form& a, const Form& b);

// reflection r_v, odd characteristic, v anisotropic
Mat reflection(const Form& f, const Vec& v);
// spinor norm of an isometry, +1/-1, via constructive reflection
// factorization (Cartan-Dieudonne peeling, with the isotropic-difference
// fallback); independent of the factorization found
int spinor_norm(const Mat& g, const Form& f);
// the reflection vectors themselves (test hook for factorization checks)
std::vector<Vec> reflection_factorization(const Mat& g, const Form& f);

// char-2 orthogonal transvection along an anisotropic v
Mat orthogonal_transvection(const Form& f, const Vec& v);
// Dickson invariant, char 2: rank(g - 1) mod 2
int dickson_invariant(const Mat& g);
// Siegel/Eichler element for singular u and v in u-perp (both characteristics)
Mat siegel_element(const Form& f, const Vec& u, const Vec& v);

// square-class of det(gram), odd characteristic: true = square
bool disc_is_square(const Form& f);

}  // namespace broad

#endif
