#include "broad/builders.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace broad {

namespace {

Perm transposition_pair(uint32_t n, uint32_t a, uint32_t b, uint32_t c, uint32_t d) {
  return Perm::from_cycles(n, {{static_cast<uint8_t>(a), static_cast<uint8_t>(b)},
                               {static_cast<uint8_t>(c), static_cast<uint8_t>(d)}});
}

std::vector<uint32_t> p_basis(const Field& F) {
  std::vector<uint32_t> b;
  uint32_t v = 1;
  for (uint32_t i = 0; i < F.k(); ++i) {
    b.push_back(v);
    v *= F.p();
  }
  return b;
}

// GF(p)-basis of {m : conj(m) = -m} (char 2: the subfield)
std::vector<uint32_t> antitrace_basis(const Field& F) {
  std::vector<uint32_t> vals;
  for (uint32_t m = 1; m < F.q(); ++m)
    if (F.frobenius_q(m) == F.neg(m)) vals.push_back(m);
  std::vector<uint32_t> basis;
  std::vector<uint32_t> span{0};
  for (uint32_t v : vals) {
    if (std::find(span.begin(), span.end(), v) != span.end()) continue;
    basis.push_back(v);
    std::vector<uint32_t> next = span;
    for (uint32_t s : span) {
      uint32_t x = s;
      for (uint32_t c = 1; c < F.p(); ++c) {
        x = F.add(x, v);
        next.push_back(x);
      }
    }
    span = std::move(next);
  }
  return basis;
}

}  // namespace

std::vector<Element> alternating_group_generators(uint32_t n) {
  if (n < 3) throw std::invalid_argument("alternating: need n >= 3");
  if (n > 200) throw std::invalid_argument("alternating: degree out of range");
  std::vector<Element> gens;
  gens.push_back(Perm::from_cycles(n, {{0, 1, 2}}));
  std::vector<uint8_t> cyc;
  if (n % 2 == 1) {
    for (uint32_t i = 0; i < n; ++i) cyc.push_back(static_cast<uint8_t>(i));
  } else {
    for (uint32_t i = 1; i < n; ++i) cyc.push_back(static_cast<uint8_t>(i));
  }
  if (cyc.size() >= 2) gens.push_back(Perm::from_cycles(n, {cyc}));
  return gens;
}

BroadConstruction build_alternating(uint32_t n) {
  if (n < 4) throw std::invalid_argument("build_alternating: need n >= 4");
  BroadConstruction b;
  b.name = "A" + std::to_string(n);
  b.description = "even part of <(1 2),(3 4),...>, generated by the products of consecutive disjoint transpositions";
  uint32_t pairs = n / 2;
  for (uint32_t i = 0; i + 1 < pairs; ++i)
    b.basis.push_back(transposition_pair(n, 2 * i, 2 * i + 1, 2 * i + 2, 2 * i + 3));
  b.target = CoverageTarget::involutions;
  b.ambient_gens = alternating_group_generators(n);
  b.ambient_identity = Perm::identity(n);
  uint64_t fact = 1;
  for (uint32_t i = 2; i <= n; ++i) fact *= i;
  b.ambient_order = fact / 2;
  return b;
}

DoubleCoverCriterion build_double_cover_criterion(uint32_t n) {
  DoubleCoverCriterion r;
  r.n = n;
  if (n < 8) {
    // only the central involution of 2A_n lifts; trivial certificate
    r.d = 0;
    r.e_order = 1;
    r.movements_all_multiples_of_8 = true;
    r.verified = true;
    return r;
  }
  r.d = n / 8;
  r.parts.resize(r.d + 1);
  for (uint32_t i = 8 * r.d; i < n; ++i) r.parts[0].push_back(i);
  for (uint32_t blk = 0; blk < r.d; ++blk)
    for (uint32_t j = 0; j < 8; ++j) r.parts[blk + 1].push_back(8 * blk + j);
  // E_i = regular elementary abelian of order 8 on X_i: identify X_i with
  // (Z_2)^3 and take the three coordinate translations
  for (uint32_t blk = 0; blk < r.d; ++blk)
    for (uint32_t bit : {1u, 2u, 4u}) {
      std::vector<uint8_t> img(n);
      for (uint32_t x = 0; x < n; ++x) img[x] = static_cast<uint8_t>(x);
      for (uint32_t j = 0; j < 8; ++j) img[8 * blk + j] = static_cast<uint8_t>(8 * blk + (j ^ bit));
      r.basis.push_back(Perm(std::move(img)));
    }
  // exhaustive movement census over E (8^d elements)
  r.e_order = 1;
  for (uint32_t i = 0; i < 3 * r.d; ++i) r.e_order *= 2;
  std::set<uint32_t> moved_set;
  bool all8 = true;
  if (r.e_order <= (1u << 21)) {
    std::vector<uint32_t> code(r.d, 0);
    while (true) {
      Perm x = Perm::identity(n);
      for (uint32_t blk = 0; blk < r.d; ++blk)
        if (code[blk]) {
          const Perm& g1 = std::get<Perm>(r.basis[3 * blk]);
          const Perm& g2 = std::get<Perm>(r.basis[3 * blk + 1]);
          const Perm& g3 = std::get<Perm>(r.basis[3 * blk + 2]);
          if (code[blk] & 1) x = x * g1;
          if (code[blk] & 2) x = x * g2;
          if (code[blk] & 4) x = x * g3;
        }
      uint32_t moved = x.moved_count();
      moved_set.insert(moved);
      if (moved % 8) all8 = false;
      uint32_t i = 0;
      while (i < r.d && code[i] == 7) code[i++] = 0;
      if (i == r.d) break;
      ++code[i];
    }
  } else {
    // structurally forced: each block factor moves 0 or 8 points
    for (uint32_t e = 0; e <= r.d; ++e) moved_set.insert(8 * e);
  }
  r.movement_counts.assign(moved_set.begin(), moved_set.end());
  r.movements_all_multiples_of_8 = all8;
  // per-class lifting analysis: A_n involutions have cycle type 2^k, k even
  bool covered_all = true;
  for (uint32_t k = 2; 2 * k <= n; k += 2) {
    DoubleCoverCriterion::ClassLift cl;
    cl.two_cycles = k;
    cl.moved = 2 * k;
    cl.lifts = (2 * k) % 8 == 0;
    if (cl.lifts) {
      uint32_t e = 2 * k / 8;  // blocks needed
      if (e <= r.d) {
        // product of one order-2 element per block moves exactly 8e points
        // with cycle type 2^{4e}
        Perm w = Perm::identity(n);
        for (uint32_t blk = 0; blk < e; ++blk) w = w * std::get<Perm>(r.basis[3 * blk]);
        if (w.moved_count() == 2 * k) {
          cl.covered = true;
          cl.witness = w;
        }
      }
      if (!cl.covered) covered_all = false;
    }
    r.classes.push_back(std::move(cl));
  }
  r.verified = all8 && covered_all;
  return r;
}

BroadConstruction build_sl_char2(uint32_t n, uint32_t q) {
  if (q % 2) throw std::invalid_argument("build_sl_char2: q must be even");
  if (n < 2) throw std::invalid_argument("build_sl_char2: need n >= 2");
  ClassicalGroup G = build_classical(Family::SL, n, q);
  BroadConstruction b;
  b.name = "SL" + std::to_string(n) + "(" + std::to_string(q) + ")";
  uint32_t m = (n + 1) / 2;
  b.description = "unipotent radical of the stabilizer of the span of the first " +
                  std::to_string(m) + " basis vectors";
  for (uint32_t a : p_basis(*G.F))
    for (uint32_t i = 0; i < m; ++i)
      for (uint32_t j = m; j < n; ++j) {
        Mat u = Mat::identity(G.F.get(), n);
        u.at(i, j) = a;
        b.basis.push_back(u);
      }
  b.target = CoverageTarget::involutions;
  b.ambient_gens = G.gens;
  b.ambient_identity = G.identity();
  b.ambient_order = G.order_formula();
  b.context = G;
  return b;
}

BroadConstruction build_isotropic_radical_char2(Family family, uint32_t dim, uint32_t q) {
  if (q % 2) throw std::invalid_argument("isotropic_radical: q must be even");
  if (family == Family::Sp) {
    if (dim % 2 || dim < 4) throw std::invalid_argument("isotropic_radical: Sp needs even dim >= 4");
    ClassicalGroup G = build_classical(Family::Sp, dim, q);
    BroadConstruction b;
    b.name = "Sp" + std::to_string(dim) + "(" + std::to_string(q) + ")";
    uint32_t m = dim / 2;
    b.description = "unipotent radical [[I,M],[0,I]], M symmetric " + std::to_string(m) + "x" +
                    std::to_string(m);
    for (uint32_t a : p_basis(*G.F))
      for (uint32_t i = 0; i < m; ++i)
        for (uint32_t j = i; j < m; ++j) {
          Mat u = Mat::identity(G.F.get(), dim);
          u.at(i, m + j) = a;
          if (i != j) u.at(j, m + i) = a;
          b.basis.push_back(u);
        }
    b.target = CoverageTarget::involutions;
    b.ambient_gens = G.gens;
    b.ambient_identity = G.identity();
    b.ambient_order = G.order_formula();
    b.context = G;
    return b;
  }
  if (family != Family::SU) throw std::invalid_argument("isotropic_radical: family must be Sp or SU");
  if (dim < 3) throw std::invalid_argument("isotropic_radical: SU needs dim >= 3");
  ClassicalGroup G = build_classical(Family::SU, dim, q);
  BroadConstruction b;
  b.name = "SU" + std::to_string(dim) + "(" + std::to_string(q) + ")";
  uint32_t m = dim / 2;  // embedded SU_{2m} when dim is odd
  b.description = dim % 2 ? "radical of the embedded SU" + std::to_string(2 * m) + " on the first 2m coordinates"
                          : "unipotent radical [[I,M],[0,I]], conj(M)^T = M";
  const Field& F = *G.F;
  for (uint32_t bval : antitrace_basis(F))
    for (uint32_t i = 0; i < m; ++i) {
      Mat u = Mat::identity(G.F.get(), dim);
      u.at(i, m + i) = bval;
      b.basis.push_back(u);
    }
  for (uint32_t bval : p_basis(F))
    for (uint32_t i = 0; i < m; ++i)
      for (uint32_t j = i + 1; j < m; ++j) {
        Mat u = Mat::identity(G.F.get(), dim);
        u.at(i, m + j) = bval;
        u.at(j, m + i) = F.neg(F.frobenius_q(bval));
        b.basis.push_back(u);
      }
  b.target = CoverageTarget::involutions;
  b.ambient_gens = G.gens;
  b.ambient_identity = G.identity();
  b.ambient_order = G.order_formula();
  b.context = G;
  return b;
}

namespace {

// 4-dimensional char-2 orthogonal block with its Sylow Siegel generators
void append_char2_block_gens(const Form& ambient, uint32_t offset, const Field& F,
                             std::vector<Element>& basis) {
  // block basis order within quadratic_form_char2(F,4,type): pairs at
  // (0,2),(1,3); '+': both hyperbolic; '-': (1,3) anisotropic
  Vec u(ambient.dim, 0);
  u[offset + 0] = 1;  // singular in both types
  for (uint32_t j : {1u, 3u}) {
    for (uint32_t a : p_basis(F)) {
      Vec v(ambient.dim, 0);
      v[offset + j] = a;
      basis.push_back(siegel_element(ambient, u, v));
    }
  }
}

}  // namespace

BroadConstruction build_orthogonal_char2(uint32_t dim, uint32_t q, char eps) {
  if (q % 2) throw std::invalid_argument("orthogonal_char2: q must be even");
  if (dim < 8 || dim % 2) throw std::invalid_argument("orthogonal_char2: need even dim >= 8");
  if (eps != '+' && eps != '-') throw std::invalid_argument("orthogonal_char2: eps must be + or -");
  uint32_t p = 2, k = 0, t = q;
  while (t > 1) {
    if (t % 2) throw std::invalid_argument("orthogonal_char2: q must be a power of 2");
    t /= 2;
    ++k;
  }
  FieldPtr F = field(p, k);
  uint32_t tail = dim % 4 ? 2 : 0;  // dim = 2 mod 4 splits off a 2-space of type eps
  uint32_t m = (dim - tail) / 4;
  char last4 = (tail == 0 && eps == '-') ? '-' : '+';
  Form form = quadratic_form_char2(F, 4, m > 1 ? '+' : last4);
  for (uint32_t blk = 1; blk < m; ++blk)
    form = direct_sum(form, quadratic_form_char2(F, 4, blk + 1 == m ? last4 : '+'));
  if (tail) {
    // 2-dimensional block of the same type as V
    Form u2;
    u2.kind = FormKind::quadratic_char2;
    u2.dim = 2;
    u2.F = F;
    u2.gram = Mat(F.get(), 2);
    u2.gram.at(0, 1) = 1;
    u2.gram.at(1, 0) = 1;
    u2.qdiag.assign(2, 0);
    if (eps == '-') {
      uint32_t a = 0;
      for (uint32_t c = 1; c < q; ++c)
        if (F->abs_trace(c) == 1) {
          a = c;
          break;
        }
      u2.qdiag[0] = 1;
      u2.qdiag[1] = a;
    }
    form = direct_sum(form, u2);
  }
  form.eps = form.type_from_witt();
  if (form.eps != eps) throw std::logic_error("orthogonal_char2: assembled type mismatch");
  form.validate();

  BroadConstruction b;
  b.name = std::string("O") + std::to_string(dim) + (eps == '+' ? "+" : "-") + "(" +
           std::to_string(q) + ")";
  std::ostringstream desc;
  desc << "Sylow 2-subgroup of SO(V_1) x ... x SO(V_" << m << "), dim V_i = 4";
  if (tail) desc << ", acting trivially on a 2-dimensional complement of type " << eps;
  b.description = desc.str();
  for (uint32_t blk = 0; blk < m; ++blk) {
    append_char2_block_gens(form, 4 * blk, *F, b.basis);
    b.blocks.push_back({4 * blk, 4 * blk + 1, 4 * blk + 2, 4 * blk + 3});
  }
  if (tail) b.blocks.push_back({dim - 2, dim - 1});
  b.target = CoverageTarget::involutions;
  ClassicalGroup G;
  G.family = Family::SO;
  G.n = dim;
  G.q = q;
  G.F = F;
  G.form = form;
  G.eps = eps;
  G.gens = omega_group_generators(form);
  b.ambient_gens = G.gens;
  b.ambient_identity = G.identity();
  b.ambient_order = G.order_formula();
  b.context = std::move(G);
  return b;
}

namespace {

// ---- odd-characteristic torus machinery ----

// 2x2 block [[a, d b],[b, a]], the matrix of multiplication by a + b sqrt(d)
Mat circle_mat(const Field& F, uint32_t d, uint32_t a, uint32_t bb) {
  Mat m(&F, 2);
  m.at(0, 0) = a;
  m.at(0, 1) = F.mul(d, bb);
  m.at(1, 0) = bb;
  m.at(1, 1) = a;
  return m;
}

uint32_t mat_order(const Mat& m, uint32_t bound) {
  Mat x = m;
  uint32_t o = 1;
  while (!x.is_identity()) {
    x = x * m;
    ++o;
    if (o > bound) throw std::logic_error("torus: order bound exceeded");
  }
  return o;
}

// least generator of the norm-circle {a^2 - d b^2 = 1} of order q+1
Mat circle_generator_norm1(const Field& F, uint32_t d) {
  for (uint32_t a = 0; a < F.q(); ++a)
    for (uint32_t bb = 0; bb < F.q(); ++bb) {
      if (F.sub(F.mul(a, a), F.mul(d, F.mul(bb, bb))) != 1) continue;
      Mat m = circle_mat(F, d, a, bb);
      if (mat_order(m, F.q() + 2) == F.q() + 1) return m;
    }
  throw std::logic_error("torus: no norm-1 circle generator");
}

// least generator of the full multiplicative group GF(q^2)* in 2x2 form
Mat circle_generator_full(const Field& F, uint32_t d) {
  for (uint32_t a = 0; a < F.q(); ++a)
    for (uint32_t bb = 0; bb < F.q(); ++bb) {
      if (a == 0 && bb == 0) continue;
      Mat m = circle_mat(F, d, a, bb);
      uint32_t target = F.q() * F.q() - 1;
      Mat x = m;
      uint32_t o = 1;
      bool good = false;
      while (o <= target) {
        if (x.is_identity()) {
          good = o == target;
          break;
        }
        x = x * m;
        ++o;
      }
      if (good) return m;
    }
  throw std::logic_error("torus: no Singer generator");
}

Mat mat_pow(Mat m, uint64_t e) {
  Mat r = Mat::identity(m.field(), m.dim());
  while (e) {
    if (e & 1) r = r * m;
    m = m * m;
    e >>= 1;
  }
  return r;
}

uint32_t v2(uint32_t x) {
  uint32_t v = 0;
  while (x % 2 == 0) {
    x /= 2;
    ++v;
  }
  return v;
}

Mat embed_at(const Field* F, uint32_t dim, const Mat& blockm, const std::vector<uint32_t>& coords) {
  Mat m = Mat::identity(F, dim);
  for (uint32_t i = 0; i < blockm.dim(); ++i)
    for (uint32_t j = 0; j < blockm.dim(); ++j) m.at(coords[i], coords[j]) = blockm.at(i, j);
  return m;
}

Mat diag_entries(const Field* F, uint32_t dim, const std::vector<std::pair<uint32_t, uint32_t>>& ent) {
  Mat m = Mat::identity(F, dim);
  for (auto [i, v] : ent) m.at(i, i) = v;
  return m;
}

// orthonormalizing change of basis for a hermitian form: columns P with
// P^T G conj(P) = I
Mat hermitian_orthonormal_change(const Form& h) {
  const Field& F = *h.F;
  uint32_t n = h.dim;
  std::vector<Vec> ortho;
  std::vector<Vec> basis;
  for (uint32_t i = 0; i < n; ++i) {
    Vec e(n, 0);
    e[i] = 1;
    basis.push_back(e);
  }
  for (uint32_t step = 0; step < n; ++step) {
    // an anisotropic vector in the current complement
    Vec v;
    bool found = false;
    for (const auto& b : basis)
      if (h.quadratic(b) != 0) {
        v = b;
        found = true;
        break;
      }
    if (!found) {
      for (size_t i = 0; i < basis.size() && !found; ++i)
        for (size_t j = i + 1; j < basis.size() && !found; ++j) {
          Vec s(n);
          for (uint32_t t = 0; t < n; ++t) s[t] = F.add(basis[i][t], basis[j][t]);
          if (h.quadratic(s) != 0) {
            v = s;
            found = true;
          }
        }
    }
    if (!found) throw std::logic_error("torus: hermitian orthonormalization failed");
    // scale to norm one: (v/c, v/c) = Q(v)/N(c)
    uint32_t goal = h.quadratic(v);
    uint32_t c = 0;
    for (uint32_t cand = 1; cand < F.q(); ++cand)
      if (F.mul(cand, F.frobenius_q(cand)) == goal) {
        c = cand;
        break;
      }
    if (!c) throw std::logic_error("torus: norm not surjective?");
    for (auto& x : v) x = F.div(x, c);
    ortho.push_back(v);
    // project the rest onto the perp of v
    std::vector<Vec> next;
    for (const auto& bvec : basis) {
      Vec w = bvec;
      uint32_t coef = h.bilinear(w, v);  // (w,v); subtract coef * v
      if (coef) {
        for (uint32_t t = 0; t < n; ++t) w[t] = F.sub(w[t], F.mul(coef, v[t]));
      }
      bool zero = true;
      for (uint32_t x : w)
        if (x) zero = false;
      if (!zero) next.push_back(w);
    }
    // reduce to an independent set
    std::vector<Vec> indep;
    std::vector<Vec> rows;
    for (const auto& w0 : next) {
      Vec w = w0;
      for (const auto& r : rows) {
        uint32_t lead = 0;
        size_t li = 0;
        for (size_t i = 0; i < r.size(); ++i)
          if (r[i]) {
            lead = r[i];
            li = i;
            break;
          }
        if (w[li]) {
          uint32_t f = F.div(w[li], lead);
          for (size_t i = 0; i < w.size(); ++i) w[i] = F.sub(w[i], F.mul(f, r[i]));
        }
      }
      bool zero = true;
      for (uint32_t x : w)
        if (x) zero = false;
      if (!zero) {
        rows.push_back(w);
        indep.push_back(w0);
      }
    }
    basis = indep;
  }
  Mat P(h.F.get(), n);
  for (uint32_t j = 0; j < n; ++j)
    for (uint32_t i = 0; i < n; ++i) P.at(i, j) = ortho[j][i];
  return P;
}

// disc square class of a 2-dimensional block of the given type
bool block_disc_square(const Field& F, char type) {
  if (type == '+') return F.is_square(F.neg(1));
  return F.is_square(F.mul(F.neg(1), F.neg(F.least_nonsquare())));
}

}  // namespace

BroadConstruction build_toral_oddchar(Family family, uint32_t n, uint32_t q, char eps) {
  if (q % 2 == 0) throw std::invalid_argument("toral: q must be odd");
  uint32_t p = 0, k = 0, t0 = q;
  for (uint32_t d = 2; d <= q; ++d)
    if (q % d == 0) {
      p = d;
      break;
    }
  if (!p || !is_prime(p)) throw std::invalid_argument("toral: q must be an odd prime power");
  while (t0 > 1) {
    if (t0 % p) throw std::invalid_argument("toral: q must be a prime power");
    t0 /= p;
    ++k;
  }
  BroadConstruction b;
  b.target = CoverageTarget::central_square;

  if (family == Family::SL && n % 2 == 1) {
    ClassicalGroup G = build_classical(Family::SL, n, q);
    b.name = "SL" + std::to_string(n) + "(" + std::to_string(q) + ")";
    b.description = "2-torsion of the split diagonal torus";
    for (uint32_t i = 0; i + 1 < n; ++i)
      b.basis.push_back(diag_entries(G.F.get(), n, {{i, G.F->neg(1)}, {i + 1, G.F->neg(1)}}));
    for (uint32_t i = 0; i < n; ++i) b.blocks.push_back({i});
    b.ambient_gens = G.gens;
    b.ambient_identity = G.identity();
    b.ambient_order = G.order_formula();
    b.context = std::move(G);
    return b;
  }

  if (family == Family::SL) {  // n even
    uint32_t m = n / 2;
    ClassicalGroup G = build_classical(Family::SL, n, q);
    b.name = "SL" + std::to_string(n) + "(" + std::to_string(q) + ")";
    const Field& F = *G.F;
    if (q % 4 == 1 && m % 2 == 1) {
      // split torus: 4 | q-1 so the diagonal 4-torsion is available, and
      // the balanced nonsplit patterns do not exist for this congruence
      b.description = "4-torsion of the split diagonal torus";
      uint32_t i4 = F.pow(F.primitive_element(), (q - 1) / 4);
      for (uint32_t i = 0; i + 1 < n; ++i)
        b.basis.push_back(diag_entries(G.F.get(), n, {{i, F.neg(1)}, {i + 1, F.neg(1)}}));
      for (uint32_t i = 0; i + 1 < n; ++i)
        b.four_torsion.push_back(diag_entries(G.F.get(), n, {{i, i4}, {i + 1, F.inv(i4)}}));
      for (uint32_t i = 0; i < n; ++i) b.blocks.push_back({i});
    } else {
      b.description = "2- and 4-torsion of the GL2-block Singer torus";
      uint32_t d = F.least_nonsquare();
      Mat C = circle_generator_full(F, d);
      uint32_t s = v2(q * q - 1), t = v2(q + 1);
      Mat c2 = mat_pow(C, (static_cast<uint64_t>(q) * q - 1) >> s);  // 2-part generator
      Mat minusI2 = mat_pow(c2, 1u << (s - 1));
      Mat c2inv = c2.inverse();
      for (uint32_t blk = 0; blk < m; ++blk) {
        std::vector<uint32_t> coords{2 * blk, 2 * blk + 1};
        b.blocks.push_back(coords);
        b.basis.push_back(embed_at(G.F.get(), n, minusI2, coords));
      }
      // lattice of the determinant condition: sum of exponents = 0 mod 2^{s-t}
      b.four_torsion.push_back(embed_at(G.F.get(), n, mat_pow(c2, 1u << (s - t)), {0, 1}));
      for (uint32_t blk = 0; blk + 1 < m; ++blk) {
        Mat g = embed_at(G.F.get(), n, c2, {2 * blk, 2 * blk + 1});
        Mat h = embed_at(G.F.get(), n, c2inv, {2 * blk + 2, 2 * blk + 3});
        b.four_torsion.push_back(g * h);
      }
    }
    b.ambient_gens = G.gens;
    b.ambient_identity = G.identity();
    b.ambient_order = G.order_formula();
    b.context = std::move(G);
    return b;
  }

  if (family == Family::SU) {
    ClassicalGroup Gstd = build_classical(Family::SU, n, q);
    const Field& F = *Gstd.F;  // GF(q^2)
    b.name = "SU" + std::to_string(n) + "(" + std::to_string(q) + ")";
    bool use_circle_diag = (n % 2 == 1) || (q % 4 == 3 && (n / 2) % 2 == 1);
    if (use_circle_diag) {
      // diagonal norm-one torus in the orthonormal-Gram model
      b.description = n % 2 ? "2-torsion of the diagonal (q+1)-torus, orthonormal basis"
                            : "4-torsion of the diagonal (q+1)-torus, orthonormal basis";
      ClassicalGroup G;
      G.family = Family::SU;
      G.n = n;
      G.q = q;
      G.F = Gstd.F;
      Form h;
      h.kind = FormKind::hermitian;
      h.dim = n;
      h.F = Gstd.F;
      h.gram = Mat::identity(Gstd.F.get(), n);
      h.eps = 'n';
      h.validate();
      G.form = h;
      Mat P = hermitian_orthonormal_change(*Gstd.form);
      Mat Pinv = P.inverse();
      for (const auto& e : Gstd.gens) G.gens.push_back(Pinv * std::get<Mat>(e) * P);
      for (const auto& e : G.gens)
        if (!G.contains_isometry(std::get<Mat>(e)))
          throw std::logic_error("toral: transported SU generators broke the form");
      for (uint32_t i = 0; i + 1 < n; ++i)
        b.basis.push_back(diag_entries(G.F.get(), n, {{i, F.neg(1)}, {i + 1, F.neg(1)}}));
      if (n % 2 == 0) {
        // order-4 circle element: 4 | q+1 in this branch
        // gamma^((q^2-1)/4) has order 4 and norm gamma^((q^2-1)(q+1)/4) = 1
        // since 4 | q+1 in this branch
        uint32_t i4 = F.pow(F.primitive_element(), (static_cast<uint64_t>(F.q()) - 1) / 4);
        if (F.mul(i4, F.frobenius_q(i4)) != 1)
          throw std::logic_error("toral: order-4 circle element has nontrivial norm");
        for (uint32_t i = 0; i + 1 < n; ++i)
          b.four_torsion.push_back(diag_entries(G.F.get(), n, {{i, i4}, {i + 1, F.inv(i4)}}));
      }
      for (uint32_t i = 0; i < n; ++i) b.blocks.push_back({i});
      b.ambient_gens = G.gens;
      b.ambient_identity = G.identity();
      b.ambient_order = G.order_formula();
      b.context = std::move(G);
      return b;
    }
    // hyperbolic-pair torus diag(lambda, conj(lambda)^{-1}) in the standard model
    uint32_t m = n / 2;
    b.description = "2- and 4-torsion of the (q^2-1)-torus on the hyperbolic pairs";
    uint32_t s = v2(q * q - 1), t = v2(q + 1);
    uint32_t lam0 = F.pow(F.primitive_element(), (static_cast<uint64_t>(q) * q - 1) >> s);
    auto pair_elt = [&](uint32_t pairidx, uint32_t lam) {
      return diag_entries(Gstd.F.get(), n,
                          {{pairidx, lam}, {m + pairidx, F.inv(F.frobenius_q(lam))}});
    };
    for (uint32_t i = 0; i < m; ++i) {
      b.blocks.push_back({i, m + i});
      b.basis.push_back(pair_elt(i, F.neg(1)));
    }
    // determinant lattice: sum of exponents = 0 mod 2^t
    b.four_torsion.push_back(pair_elt(0, F.pow(lam0, 1u << t)));
    for (uint32_t i = 0; i + 1 < m; ++i) {
      Mat g = pair_elt(i, lam0) * pair_elt(i + 1, F.inv(lam0));
      b.four_torsion.push_back(g);
    }
    b.ambient_gens = Gstd.gens;
    b.ambient_identity = Gstd.identity();
    b.ambient_order = Gstd.order_formula();
    b.context = std::move(Gstd);
    return b;
  }

  if (family == Family::Sp) {
    if (n % 2) throw std::invalid_argument("toral: Sp needs even dimension");
    uint32_t m = n / 2;
    ClassicalGroup G = build_classical(Family::Sp, n, q);
    const Field& F = *G.F;
    b.name = "Sp" + std::to_string(n) + "(" + std::to_string(q) + ")";
    if (q % 4 == 1) {
      b.description = "4-torsion of the split torus diag(t_i, t_i^{-1})";
      uint32_t i4 = F.pow(F.primitive_element(), (q - 1) / 4);
      for (uint32_t i = 0; i < m; ++i) {
        b.blocks.push_back({i, m + i});
        b.basis.push_back(diag_entries(G.F.get(), n, {{i, F.neg(1)}, {m + i, F.neg(1)}}));
        b.four_torsion.push_back(diag_entries(G.F.get(), n, {{i, i4}, {m + i, F.inv(i4)}}));
      }
    } else {
      b.description = "4-torsion of the product of n norm-circle tori of order q+1";
      uint32_t d = F.least_nonsquare();
      Mat C = circle_generator_norm1(F, d);
      Mat w = mat_pow(C, (q + 1) / 4);
      Mat mi = w * w;  // -I on the block
      for (uint32_t i = 0; i < m; ++i) {
        std::vector<uint32_t> coords{i, m + i};
        b.blocks.push_back(coords);
        b.basis.push_back(embed_at(G.F.get(), n, mi, coords));
        b.four_torsion.push_back(embed_at(G.F.get(), n, w, coords));
      }
    }
    b.ambient_gens = G.gens;
    b.ambient_identity = G.identity();
    b.ambient_order = G.order_formula();
    b.context = std::move(G);
    return b;
  }

  if (family != Family::Omega) throw std::invalid_argument("toral: unsupported family");
  if (n < 3) throw std::invalid_argument("toral: orthogonal needs dimension >= 3");
  const FieldPtr F = field(p, k);
  uint32_t m2 = n / 2;
  bool odd_dim = n % 2 == 1;
  char four_type = q % 4 == 1 ? '+' : '-';  // SO of this block type is cyclic of order = 0 mod 4

  // choose block types: lexicographically first admissible vector
  auto census = enumerate_involution_labels(Family::Omega, n, q, odd_dim ? 'o' : eps);
  std::vector<char> chosen;
  bool minus_i_in = false;
  std::vector<char> tv(m2, '+');
  while (true) {
    // constraints; tv is interpreted most-significant-first for determinism
    int prod = 1;
    for (char c : tv) prod *= c == '+' ? 1 : -1;
    bool ok = odd_dim || ((eps == '+' ? 1 : -1) == prod);
    if (ok) {
      bool discv_sq = !odd_dim;
      if (!odd_dim) {
        bool sq = true;
        for (char c : tv)
          if (!block_disc_square(*F, c)) sq = !sq;
        discv_sq = sq;
        // -I in Omega forces all blocks to carry order-4 torus elements
        if (discv_sq)
          for (char c : tv)
            if (c != four_type) ok = false;
      }
      if (ok) {
        // coverage precheck: subset sums with square disc product cover the census
        uint32_t good = 0, bad = 0;
        for (char c : tv) (block_disc_square(*F, c) ? good : bad)++;
        std::set<uint32_t> sizes;  // achievable -1-eigenspace dims with square disc
        for (uint32_t a = 0; a <= good; ++a)
          for (uint32_t bcnt = 0; bcnt <= bad; bcnt += 2)
            if (a + bcnt > 0) sizes.insert(2 * (a + bcnt));
        bool covers = true;
        for (const auto& lbl : census)
          if (!sizes.count(lbl.rank_or_m)) {
            // a census label with this m must be realizable with matching disc:
            // subsets always give square disc, and Omega census labels are
            // square-disc, so dimension match suffices
            covers = false;
            break;
          }
        // the census also pins the eigenspace type via (m, disc); a subset
        // with the right dimension automatically has square disc, and over a
        // fixed field (m, square disc) determines the type, so dimensions
        // suffice
        if (covers) {
          chosen = tv;
          minus_i_in = !odd_dim && discv_sq;
          break;
        }
      }
    }
    // next vector
    uint32_t i = m2;
    while (i > 0 && tv[i - 1] == '-') tv[--i] = '+';
    if (i == 0) break;
    tv[i - 1] = '-';
  }
  if (chosen.empty()) throw std::logic_error("toral: no admissible block type vector");

  // assemble the block-diagonal form
  Form form = symmetric_block2(F, chosen[0]);
  for (uint32_t i = 1; i < m2; ++i) form = direct_sum(form, symmetric_block2(F, chosen[i]));
  if (odd_dim) {
    Form tail;
    tail.kind = FormKind::symmetric;
    tail.dim = 1;
    tail.F = F;
    tail.gram = Mat(F.get(), 1);
    tail.gram.at(0, 0) = 1;
    tail.eps = 'o';
    form = direct_sum(form, tail);
  }
  if (!odd_dim && form.type_from_witt() != eps)
    throw std::logic_error("toral: assembled orthogonal type mismatch");
  form.eps = odd_dim ? 'o' : eps;
  form.validate();

  ClassicalGroup G;
  G.family = Family::Omega;
  G.n = n;
  G.q = q;
  G.F = F;
  G.form = form;
  G.eps = form.eps;
  G.gens = omega_group_generators(form);
  for (const auto& e : G.gens)
    if (!G.contains_isometry(std::get<Mat>(e)))
      throw std::logic_error("toral: omega generator membership failed");

  b.name = std::string("Omega") + std::to_string(n) +
           (odd_dim ? "" : (eps == '+' ? "+" : "-")) + "(" + std::to_string(q) + ")";
  std::ostringstream desc;
  desc << "2-torsion of SO(V_1) x ... x SO(V_" << m2 << "), block types ";
  for (char c : chosen) desc << c;
  if (odd_dim) desc << ", 1-dimensional complement";
  if (minus_i_in) desc << "; 4-torsion included (central -I)";
  b.description = desc.str();

  // E2 basis: z_i for square-disc blocks, paired z_{b0} z_b otherwise
  std::vector<uint32_t> badidx;
  std::vector<Mat> z;
  for (uint32_t i = 0; i < m2; ++i) {
    std::vector<uint32_t> coords{2 * i, 2 * i + 1};
    b.blocks.push_back(coords);
    z.push_back(diag_entries(F.get(), n, {{2 * i, F->neg(1)}, {2 * i + 1, F->neg(1)}}));
    if (!block_disc_square(*F, chosen[i])) badidx.push_back(i);
  }
  if (odd_dim) b.blocks.push_back({n - 1});
  for (uint32_t i = 0; i < m2; ++i)
    if (!std::count(badidx.begin(), badidx.end(), i)) b.basis.push_back(z[i]);
  for (size_t j = 1; j < badidx.size(); ++j) b.basis.push_back(z[badidx[0]] * z[badidx[j]]);

  if (minus_i_in) {
    // per-block order-4 torus elements; their all-block product squares to -I
    for (uint32_t i = 0; i < m2; ++i) {
      std::vector<uint32_t> coords{2 * i, 2 * i + 1};
      Mat w2;
      if (chosen[i] == '+') {
        uint32_t i4 = F->pow(F->primitive_element(), (q - 1) / 4);
        w2 = Mat::identity(F.get(), 2);
        w2.at(0, 0) = i4;
        w2.at(1, 1) = F->inv(i4);
      } else {
        Mat C = circle_generator_norm1(*F, F->least_nonsquare());
        w2 = mat_pow(C, (q + 1) / 4);
      }
      b.four_torsion.push_back(embed_at(F.get(), n, w2, coords));
    }
  }
  b.ambient_gens = G.gens;
  b.ambient_identity = G.identity();
  b.ambient_order = G.order_formula();
  b.context = std::move(G);
  return b;
}

}  // namespace broad
