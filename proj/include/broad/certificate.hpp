#ifndef BROAD_CERTIFICATE_HPP
#define BROAD_CERTIFICATE_HPP

#include <optional>
#include <string>
#include <vector>

#include "broad/classical.hpp"
#include "broad/group.hpp"

namespace broad {

enum class VerifyMode { brute_force, invariant_based };
enum class CoverageTarget { involutions, central_square };

struct ClassCoverage {
  std::string class_key;  // serialized representative (brute) or label (invariant)
  uint64_t class_size = 0;
  uint32_t element_order = 0;
  bool covered = false;
  std::optional<Element> witness;     // element of E in the class
  std::optional<Element> conjugator;  // c with c rep c^{-1} = witness (brute mode)
};

/*
  The checkable artifact: a commuting list of involutions generating E,
  plus one coverage witness per target class.  verified is set only when
  every target class has a checked witness and E passed the structural
  checks.
*/
struct BroadCertificate {
  std::string group_name;
  VerifyMode mode = VerifyMode::brute_force;
  CoverageTarget target = CoverageTarget::involutions;
  std::vector<Element> basis;
  uint64_t e_order = 0;
  bool elementary_abelian = false;
  bool verified = false;
  std::vector<ClassCoverage> coverage;
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  uint32_t covered_count() const {
    uint32_t c = 0;
    for (const auto& cc : coverage)
      if (cc.covered) ++c;
    return c;
  }
};

/*
  Brute-force verification: enumerates the ambient group, checks that the
  basis generates an elementary abelian 2-group inside it, and finds a
  witness plus an explicit conjugator for every target class.  extra_torsion
  joins the basis for the witness search only (the central-square target
  admits order-4 toral witnesses); elements of the closure outside the
  ambient group are ignored (torus intersected with the target group).
*/
BroadCertificate verify_broad_brute(FiniteGroup& ambient, const std::string& group_name,
                                    const std::vector<Element>& basis,
                                    CoverageTarget target = CoverageTarget::involutions,
                                    const std::vector<Element>& extra_torsion = {});

/*
  Invariant-based verification: compares the multiset of involution labels
  realized in <basis> against the combinatorial label census of the
  classical group.  No enumeration of the ambient group.
*/
BroadCertificate verify_broad_invariant(const ClassicalGroup& G, const std::string& group_name,
                                        const std::vector<Element>& basis,
                                        uint64_t closure_cap = 1u << 22);

}  // namespace broad

#endif
