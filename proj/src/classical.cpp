#include "broad/classical.hpp"

#include <algorithm>
#include <sstream>

namespace broad {

std::string family_name(Family f) {
  switch (f) {
    case Family::SL: return "SL";
    case Family::SU: return "SU";
    case Family::Sp: return "Sp";
    case Family::SO: return "SO";
    case Family::Omega: return "Omega";
  }
  return "?";
}

std::optional<Family> family_from_name(const std::string& s) {
  if (s == "SL") return Family::SL;
  if (s == "SU") return Family::SU;
  if (s == "Sp") return Family::Sp;
  if (s == "SO") return Family::SO;
  if (s == "Omega") return Family::Omega;
  return std::nullopt;
}

namespace {

std::vector<uint32_t> p_basis(const Field& F) {
  std::vector<uint32_t> b;
  uint32_t v = 1;
  for (uint32_t i = 0; i < F.k(); ++i) {
    b.push_back(v);
    v *= F.p();
  }
  return b;
}

// GF(p)-basis of a packed-value subset closed under addition
std::vector<uint32_t> gfp_basis_of(const Field& F, const std::vector<uint32_t>& values) {
  std::vector<uint32_t> basis;
  std::vector<uint32_t> span{0};
  for (uint32_t v : values) {
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

// elements m of GF(q^2) with conj(m) = -m (char 2: the subfield GF(q))
std::vector<uint32_t> antitrace_basis(const Field& F) {
  std::vector<uint32_t> vals;
  for (uint32_t m = 1; m < F.q(); ++m)
    if (F.frobenius_q(m) == F.neg(m)) vals.push_back(m);
  return gfp_basis_of(F, vals);
}

Mat embed_block(const Field* F, uint32_t dim, const Mat& a, uint32_t row0, uint32_t col0) {
  Mat m = Mat::identity(F, dim);
  for (uint32_t i = 0; i < a.dim(); ++i)
    for (uint32_t j = 0; j < a.dim(); ++j) m.at(row0 + i, col0 + j) = a.at(i, j);
  return m;
}

void check_generators(const ClassicalGroup& G) {
  for (const auto& e : G.gens) {
    const Mat& g = std::get<Mat>(e);
    if (!G.contains_isometry(g)) throw FieldError("classical: generator fails the membership check");
  }
}

std::vector<Element> sl_generators(const FieldPtr& F, uint32_t n) {
  std::vector<Element> gens;
  for (uint32_t a : p_basis(*F)) {
    Mat t = Mat::identity(F.get(), n);
    t.at(0, 1) = a;
    gens.push_back(t);
  }
  Mat w(F.get(), n);
  for (uint32_t j = 0; j + 1 < n; ++j) w.at(j + 1, j) = 1;
  w.at(0, n - 1) = (n % 2 == 0) ? F->neg(1) : 1;
  gens.push_back(w);
  if (F->q() > 2) {
    uint32_t g = F->primitive_element();
    Mat h = Mat::identity(F.get(), n);
    h.at(0, 0) = g;
    h.at(1, 1) = F->inv(g);
    gens.push_back(h);
  }
  return gens;
}

std::vector<Element> sp_generators(const FieldPtr& F, uint32_t dim) {
  uint32_t n = dim / 2;
  std::vector<Element> gens;
  // Levi block diag(A, A^{-T}) over GL_n generators
  std::vector<Mat> levis;
  if (n >= 2)
    for (const auto& e : sl_generators(F, n)) levis.push_back(std::get<Mat>(e));
  if (F->q() > 2) {
    Mat d = Mat::identity(F.get(), n);
    d.at(0, 0) = F->primitive_element();
    levis.push_back(d);
  }
  for (const auto& A : levis) {
    Mat m(F.get(), dim);
    Mat Ait = A.inverse().transpose();
    for (uint32_t i = 0; i < n; ++i)
      for (uint32_t j = 0; j < n; ++j) {
        m.at(i, j) = A.at(i, j);
        m.at(n + i, n + j) = Ait.at(i, j);
      }
    gens.push_back(m);
  }
  // unipotent radical [[I,M],[0,I]] over a basis of symmetric M
  auto push_radical = [&](uint32_t i, uint32_t j, uint32_t a) {
    Mat m = Mat::identity(F.get(), dim);
    m.at(i, n + j) = a;
    if (i != j) m.at(j, n + i) = a;
    gens.push_back(m);
  };
  for (uint32_t a : p_basis(*F))
    for (uint32_t i = 0; i < n; ++i)
      for (uint32_t j = i; j < n; ++j) push_radical(i, j, a);
  // Weyl element e_i -> f_i, f_i -> -e_i
  Mat w(F.get(), dim);
  for (uint32_t i = 0; i < n; ++i) {
    w.at(n + i, i) = 1;
    w.at(i, n + i) = F->neg(1);
  }
  gens.push_back(w);
  return gens;
}

std::vector<Element> su_even_generators(const FieldPtr& F, uint32_t dim) {
  uint32_t m = dim / 2;
  std::vector<Element> gens;
  std::vector<Mat> levis;
  if (m >= 2) {
    for (const auto& e : sl_generators(F, m)) levis.push_back(std::get<Mat>(e));
    uint32_t g = F->primitive_element();
    Mat d = Mat::identity(F.get(), m);
    d.at(0, 0) = g;
    d.at(1, 1) = F->pow(g, F->subfield_order());
    levis.push_back(d);
  } else {
    // GL_1(q) torus in SU_2: diag(c, c^{-1}) with c in the subfield
    for (uint32_t c = 2; c < F->q(); ++c)
      if (F->in_subfield(c) && F->element_order(c) == F->subfield_order() - 1) {
        Mat d(F.get(), 1);
        d.at(0, 0) = c;
        levis.push_back(d);
        break;
      }
  }
  for (const auto& A : levis) {
    Mat conj_it = A.apply_frobenius().inverse().transpose();
    Mat full(F.get(), dim);
    for (uint32_t i = 0; i < m; ++i)
      for (uint32_t j = 0; j < m; ++j) {
        full.at(i, j) = A.at(i, j);
        full.at(m + i, m + j) = conj_it.at(i, j);
      }
    gens.push_back(full);
  }
  // radical [[I,M],[0,I]] with conj(M)^T = -M
  for (uint32_t b : antitrace_basis(*F))
    for (uint32_t i = 0; i < m; ++i) {
      Mat u = Mat::identity(F.get(), dim);
      u.at(i, m + i) = b;
      gens.push_back(u);
    }
  for (uint32_t b : p_basis(*F))
    for (uint32_t i = 0; i < m; ++i)
      for (uint32_t j = i + 1; j < m; ++j) {
        Mat u = Mat::identity(F.get(), dim);
        u.at(i, m + j) = b;
        u.at(j, m + i) = F->neg(F->frobenius_q(b));
        gens.push_back(u);
      }
  // Weyl: swap all pairs, then repair the determinant if -1 is nontrivial
  Mat w(F.get(), dim);
  for (uint32_t i = 0; i < m; ++i) {
    w.at(m + i, i) = 1;
    w.at(i, m + i) = 1;
  }
  if (m % 2 == 1 && F->p() != 2) {
    uint32_t lam = F->pow(F->primitive_element(), (F->subfield_order() + 1) / 2);
    Mat fix = Mat::identity(F.get(), dim);
    fix.at(0, 0) = lam;
    fix.at(m, m) = F->inv(F->frobenius_q(lam));
    w = w * fix;
  }
  gens.push_back(w);
  return gens;
}

std::vector<Element> su_generators(const FieldPtr& F, uint32_t n) {
  if (n % 2 == 0) return su_even_generators(F, n);
  uint32_t m = n / 2;
  std::vector<Element> gens;
  if (m >= 1) {
    // even part acting on the first 2m coordinates
    for (const auto& e : su_even_generators(F, 2 * m))
      gens.push_back(embed_block(F.get(), n, std::get<Mat>(e), 0, 0));
  }
  // root elements on (e_0, f_0, z):
  //   f_0 -> f_0 + a z + b e_0,  z -> z - conj(a) e_0,  N(a) + Tr(b) = 0
  auto push_root = [&](uint32_t a, uint32_t b) {
    Mat u = Mat::identity(F.get(), n);
    u.at(n - 1, m) = a;
    u.at(0, m) = b;
    u.at(0, n - 1) = F->neg(F->frobenius_q(a));
    gens.push_back(u);
  };
  for (uint32_t a : p_basis(*F)) {
    uint32_t na = F->mul(a, F->frobenius_q(a));
    uint32_t target = F->neg(na);
    for (uint32_t b = 0;; ++b) {
      if (b == F->q()) throw FieldError("classical: no trace solution");
      if (F->add(b, F->frobenius_q(b)) == target) {
        push_root(a, b);
        break;
      }
    }
  }
  for (uint32_t b : antitrace_basis(*F)) push_root(0, b);
  return gens;
}

}  // namespace

// Siegel-generated Omega group of an arbitrary nondegenerate form with
// Witt index >= 1; the singular directions are searched among the basis
// vectors and their pairwise combinations
std::vector<Element> omega_group_generators(const Form& form) {
  const Field& F = *form.F;
  std::vector<Element> gens;
  std::vector<Vec> singulars;
  auto consider = [&](const Vec& v) {
    bool zero = true;
    for (uint32_t x : v)
      if (x) zero = false;
    if (zero || !form.is_singular_vector(v)) return;
    for (const auto& s : singulars)
      if (s == v) return;
    singulars.push_back(v);
  };
  for (uint32_t i = 0; i < form.dim; ++i) {
    Vec e(form.dim, 0);
    e[i] = 1;
    consider(e);
  }
  for (uint32_t i = 0; i < form.dim && singulars.size() < 4; ++i)
    for (uint32_t j = i + 1; j < form.dim && singulars.size() < 4; ++j)
      for (uint32_t c = 1; c < F.q() && singulars.size() < 4; ++c) {
        Vec v(form.dim, 0);
        v[i] = 1;
        v[j] = c;
        consider(v);
      }
  if (singulars.empty()) throw FieldError("classical: form has no singular vectors");
  for (const auto& u : singulars) {
    // w with B(u,w) != 0 (nondegeneracy)
    Vec w;
    bool found = false;
    for (uint32_t j = 0; j < form.dim && !found; ++j) {
      Vec e(form.dim, 0);
      e[j] = 1;
      if (form.bilinear(u, e) != 0) {
        w = e;
        found = true;
      }
    }
    if (!found) throw FieldError("classical: degenerate form in Siegel search");
    uint32_t buw = form.bilinear(u, w);
    for (uint32_t j = 0; j < form.dim; ++j) {
      Vec b(form.dim, 0);
      b[j] = 1;
      // project b into u-perp: v0 = b - (B(u,b)/B(u,w)) w
      uint32_t c = F.div(form.bilinear(u, b), buw);
      Vec v0(form.dim);
      for (uint32_t t = 0; t < form.dim; ++t) v0[t] = F.sub(b[t], F.mul(c, w[t]));
      bool zero = true, is_u_line = true;
      for (uint32_t t = 0; t < form.dim; ++t)
        if (v0[t]) zero = false;
      if (zero) continue;
      // skip v0 proportional to u (gives the identity)
      {
        uint32_t ratio = 0;
        is_u_line = true;
        for (uint32_t t = 0; t < form.dim && is_u_line; ++t) {
          if (u[t] == 0 && v0[t] == 0) continue;
          if (u[t] == 0 || v0[t] == 0) {
            is_u_line = false;
            break;
          }
          uint32_t r = F.div(v0[t], u[t]);
          if (ratio == 0)
            ratio = r;
          else if (ratio != r)
            is_u_line = false;
        }
        if (is_u_line) continue;
      }
      for (uint32_t a : p_basis(F)) {
        Vec v(form.dim);
        for (uint32_t t = 0; t < form.dim; ++t) v[t] = F.mul(a, v0[t]);
        gens.push_back(siegel_element(form, u, v));
      }
    }
  }
  if (gens.empty()) throw FieldError("classical: no Siegel generators");
  return gens;
}

namespace {

std::vector<Element> omega_generators(const Form& form) { return omega_group_generators(form); }

std::vector<Element> so_oddchar_generators(const Form& form) {
  const Field& F = *form.F;
  std::vector<Element> gens = omega_generators(form);
  // one determinant-one element of spinor norm -1: a product of two
  // reflections in vectors with norms in different square classes
  Vec a, b;
  bool have_sq = false, have_non = false;
  auto consider = [&](const Vec& v) {
    uint32_t n = form.quadratic(v);
    if (n == 0) return;
    if (F.is_square(n) && !have_sq) {
      a = v;
      have_sq = true;
    } else if (!F.is_square(n) && !have_non) {
      b = v;
      have_non = true;
    }
  };
  for (uint32_t i = 0; i < form.dim && !(have_sq && have_non); ++i)
    for (uint32_t j = 0; j < form.dim && !(have_sq && have_non); ++j) {
      Vec v(form.dim, 0);
      v[i] = 1;
      if (i != j) v[j] = 1;
      consider(v);
      if (i != j) {
        v[j] = F.primitive_element();
        consider(v);
      }
    }
  if (!(have_sq && have_non)) throw FieldError("classical: could not span both square classes");
  gens.push_back(reflection(form, a) * reflection(form, b));
  return gens;
}

}  // namespace

Mat ClassicalGroup::identity() const { return Mat::identity(F.get(), n); }

bool ClassicalGroup::contains_isometry(const Mat& g) const {
  if (g.dim() != n || !(*g.field() == *F)) return false;
  switch (family) {
    case Family::SL:
      return g.det() == 1;
    case Family::Sp:
      return form->is_isometry(g);
    case Family::SU:
      return g.det() == 1 && form->is_isometry(g);
    case Family::SO:
      if (F->p() == 2) return form->is_isometry(g) && dickson_invariant(g) == 0;
      return g.det() == 1 && form->is_isometry(g);
    case Family::Omega:
      if (F->p() == 2) return form->is_isometry(g) && dickson_invariant(g) == 0;
      return g.det() == 1 && form->is_isometry(g) && spinor_norm(g, *form) == +1;
  }
  return false;
}

FiniteGroup ClassicalGroup::group(uint64_t cap) const {
  FiniteGroup G(gens);
  G.enumerate(cap, order_formula() <= cap ? order_formula() : 0);
  return G;
}

uint64_t ClassicalGroup::order_formula() const {
  // classical order formulas; q is the defining field size
  unsigned __int128 o = 1;
  auto qpow = [&](uint32_t e) {
    unsigned __int128 r = 1;
    for (uint32_t i = 0; i < e; ++i) r *= q;
    return r;
  };
  switch (family) {
    case Family::SL: {
      o = qpow(n * (n - 1) / 2);
      for (uint32_t i = 2; i <= n; ++i) o *= qpow(i) - 1;
      break;
    }
    case Family::SU: {
      o = qpow(n * (n - 1) / 2);
      for (uint32_t i = 2; i <= n; ++i) o *= (i % 2 == 0) ? qpow(i) - 1 : qpow(i) + 1;
      break;
    }
    case Family::Sp: {
      uint32_t m = n / 2;
      o = qpow(m * m);
      for (uint32_t i = 1; i <= m; ++i) o *= qpow(2 * i) - 1;
      break;
    }
    case Family::SO:
    case Family::Omega: {
      if (n % 2 == 1) {
        uint32_t m = n / 2;
        o = qpow(m * m);
        for (uint32_t i = 1; i <= m; ++i) o *= qpow(2 * i) - 1;
        if (F->p() != 2) o /= 2;  // SO_{2m+1} = Sp order; Omega has index 2
        if (family == Family::SO && F->p() != 2) o *= 2;
      } else {
        uint32_t m = n / 2;
        o = qpow(m * (m - 1));
        o *= (eps == '+') ? qpow(m) - 1 : qpow(m) + 1;
        for (uint32_t i = 1; i < m; ++i) o *= qpow(2 * i) - 1;
        if (F->p() != 2 && family == Family::Omega) o /= 2;
      }
      break;
    }
  }
  if (o > ~uint64_t{0}) throw FieldError("classical: order overflows 64 bits");
  return static_cast<uint64_t>(o);
}

ClassicalGroup build_classical(Family family, uint32_t n, uint32_t q, char eps) {
  ClassicalGroup G;
  G.family = family;
  G.n = n;
  G.q = q;
  G.eps = eps;
  // factor q
  uint32_t p = 0, k = 0;
  for (uint32_t d = 2; d <= q; ++d)
    if (q % d == 0) {
      p = d;
      break;
    }
  if (p == 0 || !is_prime(p)) throw FieldError("classical: q must be a prime power");
  uint32_t t = q;
  while (t > 1) {
    if (t % p) throw FieldError("classical: q must be a prime power");
    t /= p;
    ++k;
  }
  switch (family) {
    case Family::SL: {
      if (n < 2) throw FieldError("classical: SL needs n >= 2");
      G.F = field(p, k);
      G.gens = sl_generators(G.F, n);
      break;
    }
    case Family::Sp: {
      if (n < 2 || n % 2) throw FieldError("classical: Sp needs even dimension >= 2");
      G.F = field(p, k);
      G.form = alternating_form(G.F, n);
      G.gens = sp_generators(G.F, n);
      break;
    }
    case Family::SU: {
      if (n < 2) throw FieldError("classical: SU needs n >= 2");
      G.F = field(p, 2 * k);  // matrices over GF(q^2)
      G.form = hermitian_form(G.F, n);
      G.gens = su_generators(G.F, n);
      break;
    }
    case Family::SO:
    case Family::Omega: {
      G.F = field(p, k);
      if (p == 2) {
        if (n < 4 || n % 2) throw FieldError("classical: char-2 orthogonal needs even dimension >= 4");
        if (eps != '+' && eps != '-') throw FieldError("classical: orthogonal type must be + or -");
        G.form = quadratic_form_char2(G.F, n, eps);
        G.gens = omega_generators(*G.form);
      } else {
        if (n < 3) throw FieldError("classical: odd-char orthogonal needs dimension >= 3");
        if (n % 2 == 0 && eps != '+' && eps != '-')
          throw FieldError("classical: even-dimensional orthogonal type must be + or -");
        if (n % 2 == 1) eps = G.eps = 'o';
        G.form = symmetric_form(G.F, n, eps);
        G.gens = family == Family::Omega ? omega_generators(*G.form) : so_oddchar_generators(*G.form);
      }
      break;
    }
  }
  if (G.form) G.form->validate();
  check_generators(G);
  return G;
}

std::vector<Element> full_orthogonal_generators(const Form& form) {
  const Field& F = *form.F;
  std::vector<Element> gens = omega_generators(form);
  if (F.p() == 2) {
    // add one transvection: Dickson invariant 1
    for (uint32_t i = 0; i < form.dim; ++i)
      for (uint32_t j = 0; j < form.dim; ++j) {
        Vec v(form.dim, 0);
        v[i] = 1;
        if (i != j) v[j] = 1;
        if (form.quadratic(v) != 0) {
          gens.push_back(orthogonal_transvection(form, v));
          return gens;
        }
      }
    throw FieldError("classical: no anisotropic vector for a transvection");
  }
  // odd characteristic: reflections of both norm classes
  bool have_sq = false, have_non = false;
  for (uint32_t i = 0; i < form.dim && !(have_sq && have_non); ++i)
    for (uint32_t j = 0; j < form.dim && !(have_sq && have_non); ++j) {
      Vec v(form.dim, 0);
      v[i] = 1;
      if (i != j) v[j] = 1;
      for (uint32_t s = 0; s < 2; ++s) {
        if (s == 1 && i != j) v[j] = F.primitive_element();
        uint32_t nv = form.quadratic(v);
        if (nv == 0) continue;
        if (F.is_square(nv) && !have_sq) {
          gens.push_back(reflection(form, v));
          have_sq = true;
        } else if (!F.is_square(nv) && !have_non) {
          gens.push_back(reflection(form, v));
          have_non = true;
        }
      }
    }
  if (!(have_sq && have_non)) throw FieldError("classical: reflection classes incomplete");
  return gens;
}

bool isometry_check(const Mat& g, const Form& f) { return f.is_isometry(g); }

bool InvolutionLabel::operator<(const InvolutionLabel& o) const {
  auto key = [](const InvolutionLabel& l) {
    return std::tuple<uint32_t, int, int>(l.rank_or_m, l.has_flag ? (l.vanishing ? 1 : 0) : 2,
                                          l.has_disc ? (l.disc_square ? 1 : 0) : 2);
  };
  return key(*this) < key(o);
}

std::string InvolutionLabel::to_string() const {
  std::ostringstream os;
  if (char2) {
    os << "r" << rank_or_m;
    if (has_flag) os << (vanishing ? "a" : "x");  // a = (gv,v) vanishes
  } else {
    os << "m" << rank_or_m;
    if (has_disc) {
      os << (disc_square ? "s" : "n");
      if (etype != 'o') os << etype;
      os << (spinor > 0 ? "+" : "-");
    }
  }
  return os.str();
}

namespace {

// kernel basis of (g - lambda I)
std::vector<Vec> eigenspace(const Mat& g, uint32_t lambda) {
  const Field& F = *g.field();
  uint32_t n = g.dim();
  Mat m = g;
  for (uint32_t i = 0; i < n; ++i) m.at(i, i) = F.sub(m.at(i, i), lambda);
  // row reduce, track pivot columns
  std::vector<uint32_t> pivots;
  uint32_t row = 0;
  for (uint32_t col = 0; col < n && row < n; ++col) {
    uint32_t pr = row;
    while (pr < n && m.at(pr, col) == 0) ++pr;
    if (pr == n) continue;
    for (uint32_t j = 0; j < n; ++j) std::swap(m.at(pr, j), m.at(row, j));
    uint32_t inv = F.inv(m.at(row, col));
    for (uint32_t j = 0; j < n; ++j) m.at(row, j) = F.mul(m.at(row, j), inv);
    for (uint32_t i = 0; i < n; ++i) {
      if (i == row) continue;
      uint32_t c = m.at(i, col);
      if (!c) continue;
      for (uint32_t j = 0; j < n; ++j) m.at(i, j) = F.sub(m.at(i, j), F.mul(c, m.at(row, j)));
    }
    pivots.push_back(col);
    ++row;
  }
  std::vector<Vec> basis;
  std::vector<bool> is_pivot(n, false);
  for (uint32_t c : pivots) is_pivot[c] = true;
  for (uint32_t freec = 0; freec < n; ++freec) {
    if (is_pivot[freec]) continue;
    Vec v(n, 0);
    v[freec] = 1;
    for (uint32_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = F.neg(m.at(r, freec));
    basis.push_back(v);
  }
  return basis;
}

}  // namespace

InvolutionLabel involution_label(const Mat& g, const ClassicalGroup& G) {
  const Field& F = *G.F;
  if (!(g * g == Mat::identity(G.F.get(), G.n)))
    throw FieldError("classical: involution_label needs g^2 = 1");
  InvolutionLabel l;
  if (F.p() == 2) {
    l.char2 = true;
    Mat d = g;
    for (uint32_t i = 0; i < G.n; ++i) d.at(i, i) = F.sub(d.at(i, i), 1);
    l.rank_or_m = d.rank();
    if (G.family == Family::Sp || G.family == Family::SO || G.family == Family::Omega) {
      l.has_flag = true;
      // (gv,v) as a quadratic form has matrix g^T B (B the invariant
      // alternating form); it vanishes identically iff that matrix is
      // symmetric with zero diagonal
      Mat N = g.transpose() * G.form->gram;
      bool vanish = true;
      for (uint32_t i = 0; i < G.n && vanish; ++i) {
        if (N.at(i, i) != 0) vanish = false;
        for (uint32_t j = i + 1; j < G.n && vanish; ++j)
          if (N.at(i, j) != N.at(j, i)) vanish = false;
      }
      l.vanishing = vanish;
    }
    return l;
  }
  l.char2 = false;
  auto eig = eigenspace(g, F.neg(1));
  l.rank_or_m = static_cast<uint32_t>(eig.size());
  if ((G.family == Family::SO || G.family == Family::Omega) && l.rank_or_m > 0) {
    l.has_disc = true;
    Form r = G.form->restrict_to(eig);
    l.disc_square = F.is_square(r.gram.det());
    if (l.rank_or_m % 2 == 0) {
      // display type: '+' iff disc matches the hyperbolic discriminant
      uint32_t hyp = F.pow(F.neg(1), l.rank_or_m / 2);
      l.etype = (l.disc_square == F.is_square(hyp)) ? '+' : '-';
    }
    l.spinor = spinor_norm(g, *G.form);
    // the spinor norm of a -1-eigenspace involution is the square class of
    // the eigenspace discriminant; keep both and insist they agree
    if ((l.spinor == +1) != l.disc_square)
      throw FieldError("classical: spinor norm disagrees with eigenspace discriminant");
  }
  return l;
}

std::vector<InvolutionLabel> enumerate_involution_labels(Family family, uint32_t n, uint32_t q,
                                                         char eps) {
  std::vector<InvolutionLabel> out;
  bool char2 = q % 2 == 0;
  if (char2) {
    auto add = [&](uint32_t r, bool has_flag, bool vanishing) {
      InvolutionLabel l;
      l.char2 = true;
      l.rank_or_m = r;
      l.has_flag = has_flag;
      l.vanishing = vanishing;
      out.push_back(l);
    };
    switch (family) {
      case Family::SL:
      case Family::SU:
        for (uint32_t r = 1; 2 * r <= n; ++r) add(r, false, false);
        break;
      case Family::Sp: {
        uint32_t h = n / 2;
        for (uint32_t r = 1; r <= h; ++r) {
          if (r % 2 == 0) add(r, true, true);
          add(r, true, false);
        }
        break;
      }
      case Family::SO:
      case Family::Omega: {
        uint32_t h = n / 2;
        for (uint32_t r = 2; r <= h; r += 2) {
          // W(2)^{r/2} + W(1)^{h-r}: the all-W(2) label needs + type
          if (r < h || (h % 2 == 0 && eps == '+')) add(r, true, true);
          add(r, true, false);
        }
        break;
      }
    }
  } else {
    auto add_simple = [&](uint32_t m) {
      InvolutionLabel l;
      l.char2 = false;
      l.rank_or_m = m;
      out.push_back(l);
    };
    switch (family) {
      case Family::SL:
      case Family::SU:
      case Family::Sp:
        for (uint32_t m = 2; m <= n; m += 2) add_simple(m);
        break;
      case Family::SO:
      case Family::Omega: {
        // classes by (m, disc of the -1-eigenspace); Omega keeps the
        // square-discriminant ones (spinor norm 1)
        uint32_t p0 = 0;
        for (uint32_t d = 2; d <= q; ++d)
          if (q % d == 0) {
            p0 = d;
            break;
          }
        uint32_t kk = 0, t = q;
        while (t > 1) {
          t /= p0;
          ++kk;
        }
        FieldPtr F = field(p0, kk);
        Form full = symmetric_form(F, n, n % 2 ? 'o' : eps);
        bool disc_v = F->is_square(full.gram.det());
        for (uint32_t m = 2; m <= n; m += 2) {
          for (int ds = 1; ds >= 0; --ds) {
            bool dsq = ds == 1;
            if (m == n && dsq != disc_v) continue;  // g = -I
            if (family == Family::Omega && !dsq) continue;
            InvolutionLabel l;
            l.char2 = false;
            l.rank_or_m = m;
            l.has_disc = true;
            l.disc_square = dsq;
            uint32_t hyp = F->pow(F->neg(1), m / 2);
            l.etype = (dsq == F->is_square(hyp)) ? '+' : '-';
            l.spinor = dsq ? +1 : -1;
            out.push_back(l);
          }
        }
        break;
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace broad
