#include "broad/forms.hpp"

#include <algorithm>
#include <stdexcept>

namespace broad {

namespace {

Vec basis_vec(uint32_t dim, uint32_t i) {
  Vec v(dim, 0);
  v[i] = 1;
  return v;
}

Vec scale(const Field& F, uint32_t c, const Vec& v) {
  Vec r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = F.mul(c, v[i]);
  return r;
}

Vec add(const Field& F, const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = F.add(a[i], b[i]);
  return r;
}

Vec sub(const Field& F, const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = F.sub(a[i], b[i]);
  return r;
}

bool is_zero(const Vec& v) {
  for (uint32_t x : v)
    if (x) return false;
  return true;
}

// Gaussian elimination basis extraction: independent subset spanning the
// same space
std::vector<Vec> independent_subset(const Field& F, const std::vector<Vec>& vecs) {
  std::vector<Vec> rows;           // reduced echelon rows
  std::vector<Vec> chosen;
  for (const auto& v0 : vecs) {
    Vec v = v0;
    for (const auto& r : rows) {
      uint32_t lead = 0;
      size_t li = 0;
      for (size_t i = 0; i < r.size(); ++i)
        if (r[i]) { lead = r[i]; li = i; break; }
      if (v[li]) v = sub(F, v, scale(F, F.div(v[li], lead), r));
    }
    if (!is_zero(v)) {
      rows.push_back(v);
      chosen.push_back(v0);
    }
  }
  return chosen;
}

}  // namespace

uint32_t Form::bilinear(const Vec& u, const Vec& v) const {
  const Field& f = *F;
  uint32_t s = 0;
  for (uint32_t i = 0; i < dim; ++i) {
    if (u[i] == 0) continue;
    for (uint32_t j = 0; j < dim; ++j) {
      uint32_t g = gram.at(i, j);
      if (g == 0 || v[j] == 0) continue;
      uint32_t vj = kind == FormKind::hermitian ? f.frobenius_q(v[j]) : v[j];
      s = f.add(s, f.mul(u[i], f.mul(g, vj)));
    }
  }
  return s;
}

uint32_t Form::quadratic(const Vec& v) const {
  const Field& f = *F;
  if (kind == FormKind::quadratic_char2) {
    // Q(sum c_i e_i) = sum c_i^2 Q(e_i) + sum_{i<j} c_i c_j B(e_i,e_j)
    uint32_t s = 0;
    for (uint32_t i = 0; i < dim; ++i) {
      if (v[i] == 0) continue;
      s = f.add(s, f.mul(f.mul(v[i], v[i]), qdiag[i]));
      for (uint32_t j = i + 1; j < dim; ++j)
        if (v[j]) s = f.add(s, f.mul(f.mul(v[i], v[j]), gram.at(i, j)));
    }
    return s;
  }
  return bilinear(v, v);
}

bool Form::is_singular_vector(const Vec& v) const {
  if (kind == FormKind::alternating) return true;
  return quadratic(v) == 0;
}

bool Form::is_isometry(const Mat& g) const {
  const Field& f = *F;
  if (g.dim() != dim) return false;
  // gram congruence: g^T G g = G (with conjugation on the right factor for
  // hermitian forms)
  Mat right = kind == FormKind::hermitian ? g.apply_frobenius() : g;
  if (!(g.transpose() * gram * right == gram)) return false;
  if (kind == FormKind::quadratic_char2) {
    // polar congruence holds; quadratic values on a basis finish the check
    for (uint32_t j = 0; j < dim; ++j) {
      Vec col(dim);
      for (uint32_t i = 0; i < dim; ++i) col[i] = g.at(i, j);
      if (quadratic(col) != qdiag[j]) return false;
    }
  }
  return true;
}

Form Form::restrict_to(const std::vector<Vec>& basis) const {
  Form r;
  r.kind = kind;
  r.dim = static_cast<uint32_t>(basis.size());
  r.F = F;
  r.gram = Mat(F.get(), r.dim);
  for (uint32_t i = 0; i < r.dim; ++i)
    for (uint32_t j = 0; j < r.dim; ++j) r.gram.at(i, j) = bilinear(basis[i], basis[j]);
  if (kind == FormKind::quadratic_char2) {
    r.qdiag.resize(r.dim);
    for (uint32_t i = 0; i < r.dim; ++i) r.qdiag[i] = quadratic(basis[i]);
  }
  r.eps = 'o';
  return r;
}

namespace {

// search a nonzero singular vector by coefficient odometer with early exit
bool find_singular(const Form& f, const std::vector<Vec>& basis, Vec* out) {
  const Field& F = *f.F;
  uint32_t d = static_cast<uint32_t>(basis.size());
  if (d == 0) return false;
  if (f.kind == FormKind::alternating) {
    *out = basis[0];
    return true;
  }
  uint64_t budget = 50'000'000;
  std::vector<uint32_t> c(d, 0);
  while (true) {
    // advance odometer
    uint32_t i = 0;
    while (i < d && c[i] + 1 == F.q()) c[i++] = 0;
    if (i == d) return false;
    ++c[i];
    Vec v(f.dim, 0);
    for (uint32_t t = 0; t < d; ++t)
      if (c[t]) v = add(F, v, scale(F, c[t], basis[t]));
    if (f.quadratic(v) == 0 && !is_zero(v)) {
      *out = v;
      return true;
    }
    if (--budget == 0) throw FieldError("form: singular-vector search budget exceeded");
  }
}

}  // namespace

uint32_t Form::witt_index() const {
  const Field& f = *F;
  std::vector<Vec> basis;
  for (uint32_t i = 0; i < dim; ++i) basis.push_back(basis_vec(dim, i));
  uint32_t planes = 0;
  while (true) {
    Vec v;
    if (!find_singular(*this, basis, &v)) break;
    // u with B(v,u) != 0 among the basis
    Vec u;
    bool found = false;
    for (const auto& b : basis)
      if (bilinear(v, b) != 0) {
        u = b;
        found = true;
        break;
      }
    if (!found) throw FieldError("form: degenerate restriction");
    uint32_t bvu = bilinear(v, u);
    // normalize to B(v,u) = 1; the hermitian form conjugates its second slot
    uint32_t lam = kind == FormKind::hermitian ? f.frobenius_q(f.inv(bvu)) : f.inv(bvu);
    u = scale(f, lam, u);
    // kill Q(u): u += c v
    if (kind == FormKind::quadratic_char2) {
      u = add(f, u, scale(f, quadratic(u), v));
    } else if (kind == FormKind::symmetric) {
      uint32_t c = f.neg(f.div(quadratic(u), f.add(1, 1)));
      u = add(f, u, scale(f, c, v));
    } else if (kind == FormKind::hermitian) {
      // need Tr(c) = -Q(u); scan the subfield trace
      uint32_t target = f.neg(quadratic(u));
      for (uint32_t c = 0;; ++c) {
        if (c == f.q()) throw FieldError("form: trace not surjective?");
        if (f.add(c, f.frobenius_q(c)) == target) {
          u = add(f, u, scale(f, c, v));
          break;
        }
      }
    }
    ++planes;
    // project basis to the perp of (v,u)
    std::vector<Vec> next;
    for (const auto& b : basis) {
      Vec w = b;
      // w' = w - B(w,u)/B(v,u) * v - B(w,v)/B(u,v) * u
      uint32_t bvu2 = bilinear(v, u);  // 1 by construction (hermitian: still 1)
      uint32_t buv = bilinear(u, v);
      if (kind == FormKind::hermitian) {
        // coefficients conjugate-adjusted: choose x,y with B(w - xv - yu, v) =
        // B(w - xv - yu, u) = 0
        uint32_t y = f.div(bilinear(w, v), bilinear(u, v));
        uint32_t x = f.div(bilinear(w, u), bilinear(v, u));
        w = sub(f, w, add(f, scale(f, x, v), scale(f, y, u)));
      } else {
        uint32_t x = f.div(bilinear(w, u), bvu2);
        uint32_t y = f.div(bilinear(w, v), buv);
        w = sub(f, w, add(f, scale(f, x, v), scale(f, y, u)));
      }
      if (!is_zero(w)) next.push_back(w);
    }
    basis = independent_subset(f, next);
    if (basis.empty()) break;
  }
  return planes;
}

char Form::type_from_witt() const {
  if (dim % 2 == 1) return 'o';
  uint32_t w = witt_index();
  if (w == dim / 2) return '+';
  if (w == dim / 2 - 1) return '-';
  throw FieldError("form: witt index incompatible with nondegeneracy");
}

void Form::validate() const {
  const Field& f = *F;
  if (gram.dim() != dim) throw FieldError("form: gram dimension mismatch");
  if (gram.det() == 0) throw FieldError("form: degenerate gram");
  if (kind == FormKind::alternating || kind == FormKind::quadratic_char2) {
    for (uint32_t i = 0; i < dim; ++i) {
      if (gram.at(i, i) != 0) throw FieldError("form: alternating gram needs zero diagonal");
      for (uint32_t j = 0; j < dim; ++j)
        if (gram.at(i, j) != f.neg(gram.at(j, i))) throw FieldError("form: gram not skew");
    }
  }
  if (kind == FormKind::quadratic_char2) {
    if (f.p() != 2) throw FieldError("form: quadratic_char2 needs characteristic 2");
    if (qdiag.size() != dim) throw FieldError("form: qdiag size mismatch");
    if (dim % 2) throw FieldError("form: char-2 quadratic form needs even dimension");
  }
  if (kind == FormKind::symmetric) {
    if (f.p() == 2) throw FieldError("form: symmetric kind is odd characteristic");
    if (!(gram == gram.transpose())) throw FieldError("form: gram not symmetric");
  }
  if (kind == FormKind::hermitian) {
    if (f.k() % 2) throw FieldError("form: hermitian needs a quadratic extension field");
    if (!(gram == gram.conj_transpose())) throw FieldError("form: gram not hermitian");
  }
  if ((kind == FormKind::quadratic_char2 || kind == FormKind::symmetric) && eps != 'o') {
    if (type_from_witt() != eps) throw FieldError("form: eps does not match the witt index");
  }
}

Form alternating_form(const FieldPtr& F, uint32_t dim) {
  if (dim % 2) throw FieldError("form: alternating needs even dimension");
  Form f;
  f.kind = FormKind::alternating;
  f.dim = dim;
  f.F = F;
  f.gram = Mat(F.get(), dim);
  uint32_t n = dim / 2;
  for (uint32_t i = 0; i < n; ++i) {
    f.gram.at(i, n + i) = 1;
    f.gram.at(n + i, i) = F->neg(1);
  }
  f.eps = 'n';
  return f;
}

Form quadratic_form_char2(const FieldPtr& F, uint32_t dim, char eps) {
  if (F->p() != 2) throw FieldError("form: need characteristic 2");
  if (dim % 2 || dim < 2) throw FieldError("form: need even dimension >= 2");
  Form f;
  f.kind = FormKind::quadratic_char2;
  f.dim = dim;
  f.F = F;
  f.gram = Mat(F.get(), dim);
  f.qdiag.assign(dim, 0);
  uint32_t n = dim / 2;
  // pairs (e_i, f_i) at indices (i, n+i)
  for (uint32_t i = 0; i < n; ++i) {
    f.gram.at(i, n + i) = 1;
    f.gram.at(n + i, i) = 1;
  }
  if (eps == '-') {
    // replace the last pair by an anisotropic block: Q(u)=1, Q(v)=a with
    // x^2+x+a irreducible, i.e. absolute trace of a equal 1
    uint32_t a = 0;
    for (uint32_t c = 1; c < F->q(); ++c)
      if (F->abs_trace(c) == 1) { a = c; break; }
    if (!a) throw FieldError("form: no trace-one element");
    f.qdiag[n - 1] = 1;
    f.qdiag[dim - 1] = a;
  } else if (eps != '+') {
    throw FieldError("form: char-2 quadratic type must be + or -");
  }
  f.eps = eps;
  f.validate();
  return f;
}

Form symmetric_form(const FieldPtr& F, uint32_t dim, char eps) {
  if (F->p() == 2) throw FieldError("form: symmetric kind needs odd characteristic");
  Form f;
  f.kind = FormKind::symmetric;
  f.dim = dim;
  f.F = F;
  f.gram = Mat(F.get(), dim);
  if (dim % 2 == 0) {
    uint32_t n = dim / 2;
    for (uint32_t i = 0; i < n; ++i) {
      f.gram.at(i, n + i) = 1;
      f.gram.at(n + i, i) = 1;
    }
    if (eps == '-') {
      // last pair becomes the anisotropic block diag(1, -d), d a nonsquare
      uint32_t n1 = n - 1;
      f.gram.at(n1, dim - 1) = 0;
      f.gram.at(dim - 1, n1) = 0;
      f.gram.at(n1, n1) = 1;
      f.gram.at(dim - 1, dim - 1) = F->neg(F->least_nonsquare());
    } else if (eps != '+') {
      throw FieldError("form: even-dimensional symmetric type must be + or -");
    }
    f.eps = eps;
  } else {
    // hyperbolic pairs plus one anisotropic coordinate of norm 1
    uint32_t n = dim / 2;
    for (uint32_t i = 0; i < n; ++i) {
      f.gram.at(i, n + i) = 1;
      f.gram.at(n + i, i) = 1;
    }
    f.gram.at(dim - 1, dim - 1) = 1;
    f.eps = 'o';
  }
  f.validate();
  return f;
}

Form hermitian_form(const FieldPtr& Fq2, uint32_t dim) {
  if (Fq2->k() % 2) throw FieldError("form: hermitian needs GF(q^2)");
  Form f;
  f.kind = FormKind::hermitian;
  f.dim = dim;
  f.F = Fq2;
  f.gram = Mat(Fq2.get(), dim);
  uint32_t n = dim / 2;
  for (uint32_t i = 0; i < n; ++i) {
    f.gram.at(i, n + i) = 1;
    f.gram.at(n + i, i) = 1;
  }
  if (dim % 2) f.gram.at(dim - 1, dim - 1) = 1;
  f.eps = 'n';
  f.validate();
  return f;
}

Form symmetric_block2(const FieldPtr& F, char type) {
  Form f;
  f.kind = FormKind::symmetric;
  f.dim = 2;
  f.F = F;
  f.gram = Mat(F.get(), 2);
  if (type == '+') {
    f.gram.at(0, 1) = 1;
    f.gram.at(1, 0) = 1;
  } else {
    f.gram.at(0, 0) = 1;
    f.gram.at(1, 1) = F->neg(F->least_nonsquare());
  }
  f.eps = type;
  f.validate();
  return f;
}

Form direct_sum(const Form& a, const Form& b) {
  if (a.kind != b.kind || !(*a.F == *b.F)) throw FieldError("form: incompatible direct sum");
  Form f;
  f.kind = a.kind;
  f.dim = a.dim + b.dim;
  f.F = a.F;
  f.gram = Mat(a.F.get(), f.dim);
  for (uint32_t i = 0; i < a.dim; ++i)
    for (uint32_t j = 0; j < a.dim; ++j) f.gram.at(i, j) = a.gram.at(i, j);
  for (uint32_t i = 0; i < b.dim; ++i)
    for (uint32_t j = 0; j < b.dim; ++j) f.gram.at(a.dim + i, a.dim + j) = b.gram.at(i, j);
  if (a.kind == FormKind::quadratic_char2) {
    f.qdiag = a.qdiag;
    f.qdiag.insert(f.qdiag.end(), b.qdiag.begin(), b.qdiag.end());
  }
  f.eps = 'o';
  return f;
}

Mat reflection(const Form& f, const Vec& v) {
  if (f.kind != FormKind::symmetric) throw FieldError("form: reflections need the symmetric kind");
  const Field& F = *f.F;
  uint32_t nv = f.quadratic(v);
  if (nv == 0) throw FieldError("form: reflection vector must be anisotropic");
  Mat m(f.F.get(), f.dim);
  for (uint32_t j = 0; j < f.dim; ++j) {
    Vec e = basis_vec(f.dim, j);
    // r_v(x) = x - 2 B(x,v)/B(v,v) v
    uint32_t c = F.div(F.mul(F.add(1, 1), f.bilinear(e, v)), nv);
    Vec img = sub(F, e, scale(F, c, v));
    for (uint32_t i = 0; i < f.dim; ++i) m.at(i, j) = img[i];
  }
  return m;
}

Mat orthogonal_transvection(const Form& f, const Vec& v) {
  if (f.kind != FormKind::quadratic_char2) throw FieldError("form: char-2 transvection needs a quadratic form");
  const Field& F = *f.F;
  uint32_t qv = f.quadratic(v);
  if (qv == 0) throw FieldError("form: transvection vector must be nonsingular");
  Mat m(f.F.get(), f.dim);
  for (uint32_t j = 0; j < f.dim; ++j) {
    Vec e = basis_vec(f.dim, j);
    uint32_t c = F.div(f.bilinear(e, v), qv);
    Vec img = add(F, e, scale(F, c, v));
    for (uint32_t i = 0; i < f.dim; ++i) m.at(i, j) = img[i];
  }
  return m;
}

int dickson_invariant(const Mat& g) {
  Mat d = g;
  const Field& F = *g.field();
  for (uint32_t i = 0; i < g.dim(); ++i) d.at(i, i) = F.sub(d.at(i, i), 1);
  return static_cast<int>(d.rank() % 2);
}

Mat siegel_element(const Form& f, const Vec& u, const Vec& v) {
  const Field& F = *f.F;
  if (!f.is_singular_vector(u)) throw FieldError("form: siegel u must be singular");
  if (f.bilinear(u, v) != 0) throw FieldError("form: siegel needs v in u-perp");
  uint32_t qv;
  if (f.kind == FormKind::quadratic_char2)
    qv = f.quadratic(v);
  else
    qv = F.div(f.quadratic(v), F.add(1, 1));  // (v,v)/2
  Mat m(f.F.get(), f.dim);
  for (uint32_t j = 0; j < f.dim; ++j) {
    Vec e = basis_vec(f.dim, j);
    uint32_t bev = f.bilinear(e, v), beu = f.bilinear(e, u);
    // x + B(x,v) u - B(x,u) v - Q(v) B(x,u) u
    Vec img = add(F, e, scale(F, bev, u));
    img = sub(F, img, scale(F, beu, v));
    img = sub(F, img, scale(F, F.mul(qv, beu), u));
    for (uint32_t i = 0; i < f.dim; ++i) m.at(i, j) = img[i];
  }
  return m;
}

namespace {

// one recursion level of the reflection peeling; appends vectors to out
void factor_rec(const Form& f, Mat g, std::vector<Vec> basis, std::vector<Vec>& out) {
  const Field& F = *f.F;
  while (!basis.empty()) {
    bool moves = false;
    for (const auto& b : basis)
      if (!(g.apply(b) == b)) { moves = true; break; }
    if (!moves) return;
    // anisotropic vector in the current subspace: a basis vector, else a
    // pairing combination (2(b_i,b_j) != 0 works in odd characteristic)
    Vec v;
    bool found = false;
    for (const auto& b : basis)
      if (f.quadratic(b) != 0) { v = b; found = true; break; }
    if (!found) {
      for (size_t i = 0; i < basis.size() && !found; ++i)
        for (size_t j = i + 1; j < basis.size() && !found; ++j)
          if (f.bilinear(basis[i], basis[j]) != 0) {
            v = add(F, basis[i], basis[j]);
            found = true;
          }
    }
    if (!found) throw FieldError("form: no anisotropic vector (degenerate?)");
    Vec gv = g.apply(v);
    if (!(gv == v)) {
      Vec d = sub(F, gv, v);
      if (f.quadratic(d) != 0) {
        Mat r = reflection(f, d);
        out.push_back(d);
        g = r * g;
      } else {
        Vec s = add(F, gv, v);
        // Q(gv-v) + Q(gv+v) = 4 Q(v) != 0, so s is anisotropic here
        Mat r1 = reflection(f, s);
        out.push_back(s);
        Mat r2 = reflection(f, v);
        out.push_back(v);
        g = r2 * (r1 * g);
      }
    }
    // now g fixes v; descend to the perp of v inside the current span
    std::vector<Vec> next;
    for (const auto& b : basis) {
      Vec w = sub(F, b, scale(F, F.div(f.bilinear(b, v), f.quadratic(v)), v));
      if (!is_zero(w)) next.push_back(w);
    }
    basis = independent_subset(F, next);
  }
}

}  // namespace

std::vector<Vec> reflection_factorization(const Mat& g, const Form& f) {
  if (f.kind != FormKind::symmetric) throw FieldError("form: factorization needs the symmetric kind");
  if (!f.is_isometry(g)) throw FieldError("form: spinor norm of a non-isometry");
  std::vector<Vec> basis;
  for (uint32_t i = 0; i < f.dim; ++i) basis.push_back(basis_vec(f.dim, i));
  std::vector<Vec> out;
  factor_rec(f, g, basis, out);
  return out;
}

int spinor_norm(const Mat& g, const Form& f) {
  auto vecs = reflection_factorization(g, f);
  // product of the square classes of the reflection norms
  const Field& F = *f.F;
  uint32_t prod = 1;
  for (const auto& v : vecs) prod = F.mul(prod, f.quadratic(v));
  return F.is_square(prod) ? +1 : -1;
}

bool disc_is_square(const Form& f) { return f.F->is_square(f.gram.det()); }

}  // namespace broad
