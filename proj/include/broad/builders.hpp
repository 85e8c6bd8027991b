#ifndef BROAD_BUILDERS_HPP
#define BROAD_BUILDERS_HPP

#include <optional>
#include <string>
#include <vector>

#include "broad/certificate.hpp"
#include "broad/classical.hpp"
#include "broad/group.hpp"

namespace broad {

/*
  Output of a broad-subgroup builder: the elementary abelian basis, any
  extra torsion used for the central-square target, and enough ambient
  context to verify the construction in either mode.
*/
struct BroadConstruction {
  std::string name;         // e.g. "A8", "Sp6(2)", "Omega7(3)"
  std::string description;  // documented basis / torus shape
  std::vector<Element> basis;
  std::vector<Element> four_torsion;  // may individually lie outside the group (torus side)
  CoverageTarget target = CoverageTarget::involutions;
  std::vector<Element> ambient_gens;
  Element ambient_identity;
  uint64_t ambient_order = 0;             // order formula, 0 if unknown
  std::optional<ClassicalGroup> context;  // label/membership context for invariant mode
  // coordinate blocks of the torus decomposition (literal shape check)
  std::vector<std::vector<uint32_t>> blocks;

  FiniteGroup ambient_group(uint64_t cap = FiniteGroup::default_cap) const {
    FiniteGroup g(ambient_gens);
    g.enumerate(cap, ambient_order && ambient_order <= cap ? ambient_order : 0);
    return g;
  }
  BroadCertificate verify_brute(uint64_t cap = FiniteGroup::default_cap) const {
    FiniteGroup g = ambient_group(cap);
    return verify_broad_brute(g, name, basis, target, four_torsion);
  }
  BroadCertificate verify_invariant() const {
    if (!context) throw std::logic_error("builder: no classical context for invariant mode");
    return verify_broad_invariant(*context, name, basis);
  }
};

// generators of A_n (3-cycle plus a long cycle)
std::vector<Element> alternating_group_generators(uint32_t n);

// the even part of the group generated by the disjoint transpositions
// (1 2),(3 4),...: a broad subgroup of A_n
BroadConstruction build_alternating(uint32_t n);

/*
  The double-cover lifting certificate: a partition of the points into
  blocks of 8 (plus a leftover block), E = product of regular elementary
  abelian groups of order 8 on the blocks, a movement report showing every
  element of E moves a multiple of 8 points, and the per-class lifting
  analysis for 2A_n.
*/
struct DoubleCoverCriterion {
  uint32_t n = 0, d = 0;
  std::vector<std::vector<uint32_t>> parts;  // parts[0] = X_0 (|X_0| < 8), then X_1..X_d
  std::vector<Element> basis;                // 3 generators per block
  uint64_t e_order = 0;
  std::vector<uint32_t> movement_counts;  // sorted distinct movement counts over E
  bool movements_all_multiples_of_8 = false;
  struct ClassLift {
    uint32_t two_cycles = 0;  // A_n class of involutions of cycle type 2^k
    uint32_t moved = 0;
    bool lifts = false;  // moved divisible by 8
    bool covered = false;
    std::optional<Element> witness;
  };
  std::vector<ClassLift> classes;
  bool verified = false;  // movement check + every lifting class covered
};

DoubleCoverCriterion build_double_cover_criterion(uint32_t n);

// unipotent radical of the stabilizer of an m-dimensional subspace of
// SL_n(q), q even, m = n/2 rounded up
BroadConstruction build_sl_char2(uint32_t n, uint32_t q);

// unipotent radical of the stabilizer of a maximal totally isotropic
// subspace of Sp_dim(q) / SU_dim(q), q even (odd-dimensional SU embeds
// SU_{dim-1})
BroadConstruction build_isotropic_radical_char2(Family family, uint32_t dim, uint32_t q);

// Sylow 2-subgroup of SO(V_1) x ... x SO(V_m), dim V_i = 4 (last block of
// minus type when eps = '-'; dim = 2 mod 4 splits off a 2-dimensional
// complement), q even, dim >= 8
BroadConstruction build_orthogonal_char2(uint32_t dim, uint32_t q, char eps);

// 2-torsion (plus 4-torsion where the argument requires it) of the
// designated maximal torus, odd q, per the case table keyed on the family,
// n mod 4 and q mod 4
BroadConstruction build_toral_oddchar(Family family, uint32_t n, uint32_t q, char eps = 'o');

}  // namespace broad

#endif
