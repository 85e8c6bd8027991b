#ifndef BROAD_ORACLE_HPP
#define BROAD_ORACLE_HPP

#include <optional>
#include <string>
#include <vector>

#include "broad/certificate.hpp"
#include "broad/group.hpp"

namespace broad {

/*
  M[i][j] = true iff some member of involution class i commutes with some
  member of class j.  By conjugation-invariance this equals "some member of
  class j commutes with the fixed representative of class i", which is how
  it is computed.  The diagonal is identically true.
*/
struct CommutingClassMatrix {
  std::vector<std::string> class_keys;
  std::vector<uint64_t> class_sizes;
  std::vector<std::vector<bool>> commutes;

  bool all_true() const {
    for (const auto& row : commutes)
      for (bool b : row)
        if (!b) return false;
    return true;
  }
};

CommutingClassMatrix commuting_class_matrix(FiniteGroup& G);

enum class SeedOrder { lex, size };

/*
  Exhaustive search for a broad subgroup: clique growth in the commuting
  graph of involutions, seeded at the canonical representative of the first
  involution class (broadness is conjugation-invariant, so fixing the seed
  representative loses no generality), branching over the members of the
  first uncovered class that commute with the current set, pruning branches
  in which some uncovered class has no commuting member left.
*/
struct SearchOutcome {
  bool found = false;
  std::vector<Element> basis;
  BroadCertificate certificate;
  uint64_t nodes = 0;
  bool exhausted = false;  // absence certified: the seeded tree is complete
};

SearchOutcome search_broad(FiniteGroup& G, SeedOrder order = SeedOrder::lex);

// central products of D8/Q8 factors over GF(3), shared center {+-I}
FiniteGroup central_product_2group(const std::vector<char>& factors);  // 'D' or 'Q'
// order in {8, 32, 128}; sign '+' = all-D8 factors, '-' = one Q8 factor
FiniteGroup extraspecial_group(uint32_t order, char sign);

struct RegularUnipotentReport {
  uint32_t p = 0, n = 0;
  uint64_t order_p_count = 0;  // nonidentity order-p elements of C(x) scanned
  std::vector<std::vector<uint32_t>> jordan_types;  // realized, sorted, deduplicated
  std::vector<std::vector<uint32_t>> two_block_types;
  bool has_type_n_minus_1_1 = false;
  bool two_block_matches_paper = false;  // exactly {(n/2,n/2)} or {((n+1)/2,(n-1)/2)}
  bool centralizer_elementary_abelian = true;
  bool ok = false;
};

RegularUnipotentReport counterexample_regular_unipotent(uint32_t p, uint32_t n);

struct SwapReport {
  uint32_t q = 0;
  uint64_t h_order = 0;
  uint64_t outer_involutions = 0;       // must equal |SL2(q)|
  uint64_t swapped_class_sizes[2] = {0, 0};
  bool outer_commutes_with_swapped = true;  // must end up false
  CommutingClassMatrix matrix;              // over H-involution classes
  uint32_t outer_class_index = 0;
  uint32_t fused_class_index = 0;
  std::vector<std::string> section_class_keys;  // 2-section of the fused class
  std::vector<uint64_t> pair_counts;            // brute-force a(C_t,C_t -> g), must be 0
  bool ok = false;
};

SwapReport counterexample_swap(uint32_t q);
// generators of (SL2(q) x SL2(q)) : swap as 4x4 matrices (shared with tests
// and the table generator)
std::vector<Element> swap_group_generators(uint32_t q);

struct SL9Report {
  uint32_t q = 0;
  bool center_order_3 = false;
  bool x_cubed_central = false;
  bool x_det_one = false;
  bool x_char_poly_rootfree = false;
  bool y_order3_fixed7 = false;
  bool eigen_multisets_distinct = false;
  std::string note;  // the unchecked part of the argument, stated
  bool ok = false;
};

SL9Report sl9_eigenvalue_check(uint32_t q);

}  // namespace broad

#endif
