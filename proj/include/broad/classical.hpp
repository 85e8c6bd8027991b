#ifndef BROAD_CLASSICAL_HPP
#define BROAD_CLASSICAL_HPP

#include <optional>
#include <string>
#include <vector>

#include "broad/forms.hpp"
#include "broad/group.hpp"

namespace broad {

enum class Family { SL, SU, Sp, SO, Omega };

std::string family_name(Family f);
std::optional<Family> family_from_name(const std::string& s);

/*
  A classical group over GF(q) given by a standard form and a documented
  generator set, fixed per (family, n, q, eps).  In characteristic 2 the
  families SO and Omega both mean the simple group (the kernel of the
  Dickson invariant); in odd characteristic SO is the determinant-one
  isometry group and Omega its spinor kernel.
*/
struct ClassicalGroup {
  Family family;
  uint32_t n = 0;  // matrix dimension
  uint32_t q = 0;  // defining field size (SU: matrices live over GF(q^2))
  FieldPtr F;      // entry field
  std::optional<Form> form;  // absent for SL
  char eps = 'o';
  std::vector<Element> gens;

  Mat identity() const;
  bool contains_isometry(const Mat& g) const;  // form + determinant (+ spinor/Dickson for Omega)
  FiniteGroup group(uint64_t cap = FiniteGroup::default_cap) const;
  uint64_t order_formula() const;  // classical order formula
};

ClassicalGroup build_classical(Family family, uint32_t n, uint32_t q, char eps = 'o');

// the full isometry group O(V) of an orthogonal form (test oracle for
// ambient-conjugacy checks); works for both characteristics
std::vector<Element> full_orthogonal_generators(const Form& f);

// Siegel-transformation generators of the Omega group of an arbitrary
// nondegenerate orthogonal form with Witt index >= 1 (both characteristics)
std::vector<Element> omega_group_generators(const Form& f);

bool isometry_check(const Mat& g, const Form& f);

/*
  Conjugacy invariant of a classical involution.

  char 2 (SL/SU: rank only; Sp/SO: rank + whether (gv,v) vanishes
  identically w.r.t. the invariant alternating form): equal labels iff
  conjugate in the ambient isometry group.

  odd char: m = dim of the (-1)-eigenspace; for orthogonal groups also the
  square class of the discriminant of the eigenspace restriction (which
  determines the eigenspace type, and equals the spinor norm) -- the label
  of an O(V)-class.
*/
struct InvolutionLabel {
  bool char2 = true;
  uint32_t rank_or_m = 0;
  bool has_flag = false;   // char-2 Sp/SO
  bool vanishing = false;  // (gv,v) = 0 for all v
  bool has_disc = false;   // odd-char orthogonal
  bool disc_square = true;
  char etype = 'o';  // display type of the (-1)-eigenspace where defined
  int spinor = 0;    // +1/-1 for odd-char orthogonal

  bool operator==(const InvolutionLabel& o) const {
    return char2 == o.char2 && rank_or_m == o.rank_or_m && has_flag == o.has_flag &&
           (!has_flag || vanishing == o.vanishing) && has_disc == o.has_disc &&
           (!has_disc || disc_square == o.disc_square);
  }
  bool operator<(const InvolutionLabel& o) const;
  std::string to_string() const;
};

InvolutionLabel involution_label(const Mat& g, const ClassicalGroup& G);
// complete list of labels realized by involutions of the group, generated
// combinatorially (no enumeration)
std::vector<InvolutionLabel> enumerate_involution_labels(Family family, uint32_t n, uint32_t q,
                                                         char eps = 'o');

}  // namespace broad

#endif
