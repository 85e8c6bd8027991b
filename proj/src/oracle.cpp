#include "broad/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "broad/classical.hpp"

namespace broad {

CommutingClassMatrix commuting_class_matrix(FiniteGroup& G) {
  const auto& cls = G.involution_classes();
  CommutingClassMatrix M;
  uint32_t k = static_cast<uint32_t>(cls.size());
  M.class_keys.reserve(k);
  for (const auto& c : cls) {
    M.class_keys.push_back(elem_serialize(c.rep));
    M.class_sizes.push_back(c.size);
  }
  M.commutes.assign(k, std::vector<bool>(k, false));
  for (uint32_t i = 0; i < k; ++i) {
    // one sweep: which involution classes meet the centralizer of rep_i
    const Element& rep = cls[i].rep;
    for (uint64_t t = 0; t < G.order(); ++t) {
      Element x = G.element_at(t);
      if (!elem_commutes(x, rep)) continue;
      auto cid = G.involution_class_id(x);
      if (cid) M.commutes[i][*cid] = true;
    }
  }
  // the relation is symmetric; enforce and sanity-check
  for (uint32_t i = 0; i < k; ++i)
    for (uint32_t j = 0; j < k; ++j)
      if (M.commutes[i][j] != M.commutes[j][i])
        throw std::logic_error("commuting matrix asymmetry (conjugacy bug)");
  return M;
}

namespace {

struct SearchCtx {
  FiniteGroup* G;
  std::vector<std::vector<Element>> class_members;  // per involution class
  uint32_t num_classes;
  SeedOrder order = SeedOrder::lex;
  uint64_t nodes = 0;
  std::optional<std::vector<Element>> found;

  std::set<uint32_t> covered_by(const std::vector<Element>& S) {
    std::set<uint32_t> cov;
    if (S.empty()) return cov;
    auto [ok, egrp] = is_elementary_abelian(S, G->identity());
    if (!ok) return cov;
    for (uint64_t i = 0; i < egrp.order(); ++i) {
      Element e = egrp.element_at(i);
      if (elem_is_identity(e)) continue;
      auto cid = G->involution_class_id(e);
      if (cid) cov.insert(*cid);
    }
    return cov;
  }

  void recurse(std::vector<Element>& S) {
    if (found) return;
    ++nodes;
    auto cov = covered_by(S);
    if (cov.size() == num_classes) {
      found = S;
      return;
    }
    // target class: first uncovered in canonical order, or the smallest
    // uncovered class under the size seed order
    uint32_t target = 0;
    while (cov.count(target)) ++target;
    if (order == SeedOrder::size) {
      for (uint32_t c = target + 1; c < num_classes; ++c)
        if (!cov.count(c) && class_members[c].size() < class_members[target].size()) target = c;
    }
    // prune: every uncovered class must still have a commuting member
    for (uint32_t c = 0; c < num_classes; ++c) {
      if (cov.count(c)) continue;
      bool any = false;
      for (const auto& x : class_members[c]) {
        bool comm = true;
        for (const auto& s : S)
          if (!elem_commutes(x, s)) {
            comm = false;
            break;
          }
        if (comm) {
          any = true;
          break;
        }
      }
      if (!any) return;
    }
    for (const auto& x : class_members[target]) {
      bool comm = true;
      for (const auto& s : S)
        if (!elem_commutes(x, s)) {
          comm = false;
          break;
        }
      if (!comm) continue;
      S.push_back(x);
      recurse(S);
      S.pop_back();
      if (found) return;
    }
  }
};

}  // namespace

SearchOutcome search_broad(FiniteGroup& G, SeedOrder order) {
  SearchOutcome out;
  const auto& cls = G.involution_classes();
  SearchCtx ctx;
  ctx.G = &G;
  ctx.num_classes = static_cast<uint32_t>(cls.size());
  if (cls.empty()) {
    // no involutions: the trivial subgroup is vacuously broad
    out.found = true;
    out.exhausted = true;
    out.certificate = verify_broad_brute(G, "search", {}, CoverageTarget::involutions);
    return out;
  }
  // collect class members (descending-size class order is the canonical one;
  // candidate order inside a class is the deterministic element order)
  ctx.class_members.resize(cls.size());
  for (uint64_t i = 0; i < G.order(); ++i) {
    Element x = G.element_at(i);
    auto cid = G.involution_class_id(x);
    if (cid) ctx.class_members[*cid].push_back(x);
  }
  for (auto& v : ctx.class_members) std::sort(v.begin(), v.end(), elem_less);
  ctx.order = order;
  // seed: the canonical representative of class 0 (conjugating E moves its
  // class-0 element onto this representative, so the tree is complete)
  std::vector<Element> S{cls[0].rep};
  ctx.recurse(S);
  out.nodes = ctx.nodes;
  if (ctx.found) {
    out.found = true;
    out.basis = *ctx.found;
    out.certificate = verify_broad_brute(G, "search", out.basis, CoverageTarget::involutions);
    if (!out.certificate.verified) throw std::logic_error("search_broad: found basis fails verification");
  } else {
    out.exhausted = true;
  }
  return out;
}

namespace {

Mat kron(const Mat& a, const Mat& b) {
  const Field* F = a.field();
  uint32_t na = a.dim(), nb = b.dim();
  Mat r(F, na * nb);
  for (uint32_t i = 0; i < na; ++i)
    for (uint32_t j = 0; j < na; ++j) {
      if (a.at(i, j) == 0) continue;
      for (uint32_t k = 0; k < nb; ++k)
        for (uint32_t l = 0; l < nb; ++l)
          r.at(i * nb + k, j * nb + l) = F->mul(a.at(i, j), b.at(k, l));
    }
  return r;
}

}  // namespace

FiniteGroup central_product_2group(const std::vector<char>& factors) {
  FieldPtr F3 = field(3, 1);
  Mat r(F3.get(), 2), s(F3.get(), 2), jm(F3.get(), 2);
  // D8 = <r, s>, Q8 = <r, j> inside GL2(3); r^2 = -I is the shared center
  r.at(0, 1) = 2;
  r.at(1, 0) = 1;  // [[0,-1],[1,0]]
  s.at(0, 0) = 1;
  s.at(1, 1) = 2;  // [[1,0],[0,-1]]
  jm.at(0, 0) = 1;
  jm.at(0, 1) = 1;
  jm.at(1, 0) = 1;
  jm.at(1, 1) = 2;  // [[1,1],[1,-1]]
  std::vector<Element> gens;
  uint32_t m = static_cast<uint32_t>(factors.size());
  for (uint32_t t = 0; t < m; ++t) {
    for (const Mat* g : factors[t] == 'Q' ? std::vector<const Mat*>{&r, &jm}
                                          : std::vector<const Mat*>{&r, &s}) {
      Mat full = Mat::identity(F3.get(), 1);
      for (uint32_t u = 0; u < m; ++u) full = kron(full, u == t ? *g : Mat::identity(F3.get(), 2));
      gens.push_back(full);
    }
  }
  FiniteGroup G(gens);
  G.enumerate(1u << 10);
  return G;
}

FiniteGroup extraspecial_group(uint32_t order, char sign) {
  uint32_t m;
  switch (order) {
    case 8: m = 1; break;
    case 32: m = 2; break;
    case 128: m = 3; break;
    default:
      throw std::invalid_argument("extraspecial: order must be 8, 32 or 128");
  }
  if (sign != '+' && sign != '-') throw std::invalid_argument("extraspecial: sign must be + or -");
  std::vector<char> factors(m, 'D');
  if (sign == '-') factors.back() = 'Q';
  FiniteGroup G = central_product_2group(factors);
  if (G.order() != order) throw std::logic_error("extraspecial: central product has wrong order");
  return G;
}

RegularUnipotentReport counterexample_regular_unipotent(uint32_t p, uint32_t n) {
  if (!is_prime(p) || p < 5) throw std::invalid_argument("regular_unipotent: p must be a prime >= 5");
  if (n < 4 || n > p) throw std::invalid_argument("regular_unipotent: need 4 <= n <= p");
  RegularUnipotentReport rep;
  rep.p = p;
  rep.n = n;
  FieldPtr F = field(p, 1);
  Mat N(F.get(), n);
  for (uint32_t i = 0; i + 1 < n; ++i) N.at(i, i + 1) = 1;
  // order-p elements of C(x), x = I + N: all I + sum a_i N^i, a != 0 (the
  // scalar-twisted candidates c u need c^p = c = 1, so none survive)
  std::vector<Mat> Npow{Mat::identity(F.get(), n)};
  for (uint32_t i = 1; i < n; ++i) Npow.push_back(Npow.back() * N);
  std::set<std::vector<uint32_t>> types;
  uint64_t total = 1;
  for (uint32_t i = 1; i < n; ++i) total *= p;
  for (uint64_t code = 1; code < total; ++code) {
    Mat y = Mat::identity(F.get(), n);
    uint64_t c = code;
    for (uint32_t i = 1; i < n; ++i) {
      uint32_t a = static_cast<uint32_t>(c % p);
      c /= p;
      if (a)
        for (uint32_t r = 0; r < n; ++r)
          for (uint32_t s = 0; s < n; ++s) y.at(r, s) = F->add(y.at(r, s), F->mul(a, Npow[i].at(r, s)));
    }
    ++rep.order_p_count;
    // order check: (I+M)^p = I + M^p = I since ip >= p >= n for i >= 1
    Mat yp = y;
    for (uint32_t i = 1; i < p; ++i) yp = yp * y;
    if (!yp.is_identity()) rep.centralizer_elementary_abelian = false;
    // Jordan type from ranks of (y - I)^k
    Mat d = y;
    for (uint32_t i = 0; i < n; ++i) d.at(i, i) = F->sub(d.at(i, i), 1);
    std::vector<uint32_t> ranks{n};
    Mat dk = Mat::identity(F.get(), n);
    for (uint32_t k = 1; k <= n; ++k) {
      dk = dk * d;
      ranks.push_back(dk.rank());
    }
    std::vector<uint32_t> type;
    for (uint32_t k = 1; k <= n; ++k) {
      uint32_t prev = ranks[k - 1], cur = ranks[k], next = k < n ? ranks[k + 1] : 0;
      uint32_t blocks_k = prev + next >= 2 * cur ? prev + next - 2 * cur : 0;
      for (uint32_t t = 0; t < blocks_k; ++t) type.push_back(k);
    }
    std::sort(type.rbegin(), type.rend());
    types.insert(type);
  }
  for (const auto& t : types) {
    rep.jordan_types.push_back(t);
    if (t.size() == 2) {
      rep.two_block_types.push_back(t);
      if (t[0] == n - 1 && t[1] == 1) rep.has_type_n_minus_1_1 = true;
    }
  }
  std::vector<std::vector<uint32_t>> expected;
  if (n % 2 == 0)
    expected = {{n / 2, n / 2}};
  else
    expected = {{(n + 1) / 2, (n - 1) / 2}};
  rep.two_block_matches_paper = rep.two_block_types == expected;
  rep.ok = rep.two_block_matches_paper && !rep.has_type_n_minus_1_1 &&
           rep.centralizer_elementary_abelian;
  return rep;
}

std::vector<Element> swap_group_generators(uint32_t q) {
  ClassicalGroup sl2 = build_classical(Family::SL, 2, q);
  const Field* F = sl2.F.get();
  std::vector<Element> gens;
  for (const auto& e : sl2.gens) {
    const Mat& g = std::get<Mat>(e);
    Mat a = Mat::identity(F, 4), b = Mat::identity(F, 4);
    for (uint32_t i = 0; i < 2; ++i)
      for (uint32_t j = 0; j < 2; ++j) {
        a.at(i, j) = g.at(i, j);
        b.at(2 + i, 2 + j) = g.at(i, j);
      }
    gens.push_back(a);
    gens.push_back(b);
  }
  Mat swap(F, 4);
  for (uint32_t i = 0; i < 2; ++i) {
    swap.at(i, 2 + i) = 1;
    swap.at(2 + i, i) = 1;
  }
  gens.push_back(swap);
  return gens;
}

SwapReport counterexample_swap(uint32_t q) {
  if (q != 2 && q != 4) throw std::invalid_argument("swap: q must be 2 or 4");
  SwapReport rep;
  rep.q = q;
  FiniteGroup H(swap_group_generators(q));
  H.enumerate(1u << 24);
  rep.h_order = H.order();

  // inner subgroup S = SL2 x SL2 and its two swapped transvection classes
  auto gens = swap_group_generators(q);
  std::vector<Element> inner(gens.begin(), gens.end() - 1);
  FiniteGroup S(inner);
  S.enumerate(1u << 22);
  const auto& scls = S.involution_classes();
  // the swapped classes are the (t,1)- and (1,t)-classes: members act
  // trivially on one tensor factor, i.e. one diagonal block is the identity
  auto block_is_identity = [&](const Mat& m, uint32_t off) {
    for (uint32_t i = 0; i < 2; ++i)
      for (uint32_t j = 0; j < 2; ++j)
        if (m.at(off + i, off + j) != (i == j ? 1u : 0u)) return false;
    return true;
  };
  std::vector<uint32_t> swapped_ids;
  for (uint32_t c = 0; c < scls.size(); ++c) {
    const Mat& m = std::get<Mat>(scls[c].rep);
    if (block_is_identity(m, 0) != block_is_identity(m, 2)) swapped_ids.push_back(c);
  }
  if (swapped_ids.size() != 2) throw std::logic_error("swap: expected exactly two swapped classes");
  rep.swapped_class_sizes[0] = scls[swapped_ids[0]].size;
  rep.swapped_class_sizes[1] = scls[swapped_ids[1]].size;

  // outer involutions: block-antidiagonal elements of order 2
  std::vector<Element> outer_invs;
  for (uint64_t i = 0; i < H.order(); ++i) {
    Element x = H.element_at(i);
    const Mat& m = std::get<Mat>(x);
    bool antidiag = true;
    for (uint32_t r = 0; r < 2 && antidiag; ++r)
      for (uint32_t c = 0; c < 2; ++c)
        if (m.at(r, c) != 0 || m.at(2 + r, 2 + c) != 0) {
          antidiag = false;
          break;
        }
    if (!antidiag) continue;
    if (elem_is_identity(elem_mul(x, x))) outer_invs.push_back(x);
  }
  rep.outer_involutions = outer_invs.size();

  // the class-swap mechanism: no outer involution commutes with any member
  // of either swapped class
  bool bad = false;
  for (uint32_t sc : swapped_ids) {
    // members of the S-class
    for (uint64_t i = 0; i < S.order() && !bad; ++i) {
      Element x = S.element_at(i);
      auto cid = S.involution_class_id(x);
      if (!cid || *cid != sc) continue;
      for (const auto& w : outer_invs)
        if (elem_commutes(w, x)) {
          bad = true;
          break;
        }
    }
  }
  rep.outer_commutes_with_swapped = bad;

  rep.matrix = commuting_class_matrix(H);
  // locate the outer and fused classes among H-classes
  const auto& hcls = H.involution_classes();
  bool found_outer = false, found_fused = false;
  for (uint32_t c = 0; c < hcls.size(); ++c) {
    const Mat& m = std::get<Mat>(hcls[c].rep);
    bool antidiag = m.at(0, 0) == 0 && m.at(0, 1) == 0 && m.at(1, 0) == 0 && m.at(1, 1) == 0;
    if (antidiag && !found_outer) {
      rep.outer_class_index = c;
      found_outer = true;
    }
    if (!antidiag && (block_is_identity(m, 0) != block_is_identity(m, 2)) && !found_fused) {
      rep.fused_class_index = c;
      found_fused = true;
    }
  }
  if (!found_outer || !found_fused) throw std::logic_error("swap: class identification failed");

  // 2-section of the fused class u inside H, and the brute-force class
  // multiplication counts a(C_t, C_t -> g) which must vanish on it
  const auto& hall = H.conjugacy_classes();
  auto two_part_class = [&](const Element& g) -> std::optional<uint32_t> {
    uint32_t o = elem_order(g);
    uint32_t a = 1;
    while (o % 2 == 0) {
      o /= 2;
      a *= 2;
    }
    // g2 = g^(m * (m^{-1} mod a)), m the odd part
    if (a == 1) return std::nullopt;
    uint32_t minv = 1;
    while ((static_cast<uint64_t>(minv) * o) % a != 1 % a) ++minv;
    Element g2 = g;
    uint64_t e = static_cast<uint64_t>(o) * minv;
    Element acc = elem_identity_like(g);
    Element base = g;
    while (e) {
      if (e & 1) acc = elem_mul(acc, base);
      base = elem_mul(base, base);
      e >>= 1;
    }
    g2 = acc;
    if (elem_is_identity(g2)) return std::nullopt;
    return H.class_id(g2);
  };
  auto fused_rep_id = H.class_id(hcls[rep.fused_class_index].rep);
  std::vector<Element> ct_members;
  for (uint64_t i = 0; i < H.order(); ++i) {
    Element x = H.element_at(i);
    auto cid = H.involution_class_id(x);
    if (cid && *cid == rep.outer_class_index) ct_members.push_back(x);
  }
  for (uint32_t c = 0; c < hall.size(); ++c) {
    auto tp = two_part_class(hall[c].rep);
    if (!tp || *tp != *fused_rep_id) continue;
    rep.section_class_keys.push_back(elem_serialize(hall[c].rep));
    // count solutions x y = rep with x, y in C_t
    const Element& target = hall[c].rep;
    uint64_t count = 0;
    for (const auto& x : ct_members) {
      Element y = elem_mul(elem_inverse(x), target);
      auto cid = H.involution_class_id(y);
      if (cid && *cid == rep.outer_class_index) ++count;
    }
    rep.pair_counts.push_back(count);
  }
  bool zeros = true;
  for (uint64_t c : rep.pair_counts)
    if (c) zeros = false;
  ClassicalGroup sl2 = build_classical(Family::SL, 2, q);
  rep.ok = !rep.outer_commutes_with_swapped && zeros &&
           rep.outer_involutions == sl2.order_formula() && !rep.section_class_keys.empty();
  return rep;
}

SL9Report sl9_eigenvalue_check(uint32_t q) {
  SL9Report rep;
  rep.q = q;
  if (q % 9 != 4) throw std::invalid_argument("sl9: q must be 4 mod 9");
  uint32_t p = 0, k = 0, t = q;
  for (uint32_t d = 2; d <= q; ++d)
    if (q % d == 0) {
      p = d;
      break;
    }
  while (t > 1) {
    t /= p;
    ++k;
  }
  FieldPtr F = field(p, k);
  uint32_t g1 = std::gcd(9u, q - 1);
  rep.center_order_3 = g1 == 3;
  uint32_t omega = F->pow(F->primitive_element(), (q - 1) / 3);
  // x = three companion blocks of t^3 - omega
  Mat x(F.get(), 9);
  for (uint32_t blk = 0; blk < 3; ++blk) {
    uint32_t o = 3 * blk;
    x.at(o + 1, o) = 1;
    x.at(o + 2, o + 1) = 1;
    x.at(o, o + 2) = omega;
  }
  Mat x3 = x * x * x;
  rep.x_cubed_central = x3.is_scalar() && x3.at(0, 0) == omega;
  rep.x_det_one = x.det() == 1;
  auto cp = x.char_poly();
  bool rootfree = true;
  for (uint32_t c = 0; c < q; ++c) {
    uint32_t v = 0, pw = 1;
    for (uint32_t i = 0; i < cp.size(); ++i) {
      v = F->add(v, F->mul(cp[i], pw));
      pw = F->mul(pw, c);
    }
    if (v == 0) rootfree = false;
  }
  rep.x_char_poly_rootfree = rootfree;
  // y = diag(omega, omega^2, 1, ..., 1)
  Mat y = Mat::identity(F.get(), 9);
  y.at(0, 0) = omega;
  y.at(1, 1) = F->mul(omega, omega);
  uint32_t fixdim = 0;
  for (uint32_t i = 0; i < 9; ++i)
    if (y.at(i, i) == 1) ++fixdim;
  rep.y_order3_fixed7 = (y * y * y).is_identity() && !y.is_identity() && fixdim == 7 && y.det() == 1;
  // char polys of y, y z, y z^2 pairwise distinct (eigenvalue multisets)
  Mat z = Mat::identity(F.get(), 9);
  for (uint32_t i = 0; i < 9; ++i) z.at(i, i) = omega;
  auto c0 = y.char_poly(), c1 = (y * z).char_poly(), c2 = (y * (z * z)).char_poly();
  rep.eigen_multisets_distinct = !(c0 == c1) && !(c0 == c2) && !(c1 == c2);
  rep.note = "the global claim that no conjugate of y commutes with x modulo Z is not machine-checked";
  rep.ok = rep.center_order_3 && rep.x_cubed_central && rep.x_det_one && rep.x_char_poly_rootfree &&
           rep.y_order3_fixed7 && rep.eigen_multisets_distinct;
  return rep;
}

}  // namespace broad
