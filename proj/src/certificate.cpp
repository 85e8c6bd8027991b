#include "broad/certificate.hpp"

#include <algorithm>
#include <set>

namespace broad {

namespace {

// structural gate shared by both modes
bool check_basis_structure(const std::vector<Element>& basis, BroadCertificate& cert) {
  bool ok = true;
  for (size_t i = 0; i < basis.size(); ++i) {
    if (elem_is_identity(basis[i])) continue;
    if (!elem_is_identity(elem_mul(basis[i], basis[i]))) {
      cert.failures.push_back("basis element " + std::to_string(i) + " is not an involution");
      ok = false;
    }
    for (size_t j = i + 1; j < basis.size(); ++j)
      if (!elem_commutes(basis[i], basis[j])) {
        cert.failures.push_back("basis elements " + std::to_string(i) + "," + std::to_string(j) +
                                " do not commute");
        ok = false;
      }
  }
  cert.elementary_abelian = ok;
  return ok;
}

}  // namespace

BroadCertificate verify_broad_brute(FiniteGroup& ambient, const std::string& group_name,
                                    const std::vector<Element>& basis, CoverageTarget target,
                                    const std::vector<Element>& extra_torsion) {
  BroadCertificate cert;
  cert.group_name = group_name;
  cert.mode = VerifyMode::brute_force;
  cert.target = target;
  cert.basis = basis;
  if (!check_basis_structure(basis, cert)) return cert;

  for (const auto& b : basis)
    if (!ambient.contains(b)) {
      cert.failures.push_back("basis element outside the ambient group");
      return cert;
    }

  // extra torsion generators may individually fall outside the group (the
  // torus is intersected with the target group); the witness search filters
  std::vector<Element> search_gens = basis;
  for (const auto& t : extra_torsion) search_gens.push_back(t);
  Element id = ambient.identity();
  auto [eab, egrp] = is_elementary_abelian(basis, id);
  if (!eab) {
    cert.failures.push_back("closure of the basis is not elementary abelian");
    return cert;
  }
  cert.e_order = egrp.order();

  // search set: closure of basis plus any extra torsion generators
  std::vector<Element> search_elems;
  {
    std::vector<Element> gens = search_gens;
    gens.push_back(id);
    FiniteGroup closure(gens);
    closure.enumerate(1u << 22);
    for (uint64_t i = 0; i < closure.order(); ++i) search_elems.push_back(closure.element_at(i));
  }

  std::vector<ConjClass> targets = target == CoverageTarget::involutions
                                       ? ambient.involution_classes()
                                       : ambient.classes_with_central_square();
  bool all = true;
  for (const auto& cls : targets) {
    ClassCoverage cov;
    cov.class_key = elem_serialize(cls.rep);
    cov.class_size = cls.size;
    cov.element_order = cls.element_order;
    for (const auto& e : search_elems) {
      if (!ambient.contains(e)) continue;  // torus intersected with the group
      bool match = false;
      if (target == CoverageTarget::involutions) {
        auto cid = ambient.involution_class_id(e);
        auto rid = ambient.involution_class_id(cls.rep);
        match = cid && rid && *cid == *rid;
      } else {
        auto cid = ambient.class_id(e);
        auto rid = ambient.class_id(cls.rep);
        match = cid && rid && *cid == *rid;
      }
      if (match) {
        cov.witness = e;
        auto conj = ambient.conjugating_element(cls.rep, e);
        if (!conj) {
          cert.failures.push_back("class " + cov.class_key + ": witness found but no conjugator");
          break;
        }
        // independent recheck of the recorded pair
        Element lhs = elem_mul(elem_mul(*conj, cls.rep), elem_inverse(*conj));
        if (!(lhs == e)) {
          cert.failures.push_back("class " + cov.class_key + ": conjugator recheck failed");
          break;
        }
        cov.conjugator = conj;
        cov.covered = true;
        break;
      }
    }
    if (!cov.covered) {
      all = false;
      cert.failures.push_back("uncovered class: rep " + cov.class_key + " (order " +
                              std::to_string(cov.element_order) + ", size " +
                              std::to_string(cov.class_size) + ")");
    }
    cert.coverage.push_back(std::move(cov));
  }
  cert.verified = all && cert.elementary_abelian;
  return cert;
}

BroadCertificate verify_broad_invariant(const ClassicalGroup& G, const std::string& group_name,
                                        const std::vector<Element>& basis, uint64_t closure_cap) {
  BroadCertificate cert;
  cert.group_name = group_name;
  cert.mode = VerifyMode::invariant_based;
  cert.target = CoverageTarget::involutions;
  cert.basis = basis;
  if (!check_basis_structure(basis, cert)) return cert;
  for (const auto& b : basis)
    if (!G.contains_isometry(std::get<Mat>(b))) {
      cert.failures.push_back("basis element outside the group (membership check)");
      return cert;
    }
  Element id = Mat::identity(G.F.get(), G.n);
  auto [eab, egrp] = is_elementary_abelian(basis, id, closure_cap);
  if (!eab) {
    cert.failures.push_back("closure of the basis is not elementary abelian");
    return cert;
  }
  cert.e_order = egrp.order();

  auto census = enumerate_involution_labels(G.family, G.n, G.q, G.eps);
  std::vector<std::pair<InvolutionLabel, Element>> realized;
  for (uint64_t i = 0; i < egrp.order(); ++i) {
    Element e = egrp.element_at(i);
    if (elem_is_identity(e)) continue;
    realized.push_back({involution_label(std::get<Mat>(e), G), e});
  }
  bool all = true;
  for (const auto& lbl : census) {
    ClassCoverage cov;
    cov.class_key = lbl.to_string();
    cov.element_order = 2;
    for (const auto& [rl, e] : realized)
      if (rl == lbl) {
        cov.witness = e;
        cov.covered = true;
        break;
      }
    if (!cov.covered) {
      all = false;
      cert.failures.push_back("uncovered label: " + cov.class_key);
    }
    cert.coverage.push_back(std::move(cov));
  }
  // labels realized in E must all be census labels (sanity both ways)
  for (const auto& [rl, e] : realized) {
    bool known = false;
    for (const auto& lbl : census)
      if (rl == lbl) {
        known = true;
        break;
      }
    if (!known) {
      all = false;
      cert.failures.push_back("label realized in E but absent from the census: " + rl.to_string());
    }
  }
  cert.verified = all && cert.elementary_abelian;
  return cert;
}

}  // namespace broad
