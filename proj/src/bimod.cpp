#include "bicat/bimod.hpp"

namespace bicat {

namespace {

// Columns of a dense matrix as sparse vectors, for repeated column combines.
std::vector<SparseVec> sparse_columns(const Mat& m) {
  std::vector<SparseVec> cols(m.cols);
  for (int j = 0; j < m.cols; ++j)
    for (int i = 0; i < m.rows; ++i)
      if (!m(i, j).is_zero()) cols[j].emplace_back(i, m(i, j));
  return cols;
}

}  // namespace

Mat Algebra::lmul(int i) const {
  Mat m(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int k = 0; k < dim; ++k) m(k, j) = c[i][j][k];
  return m;
}

Mat Algebra::rmul(int j) const {
  Mat m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int k = 0; k < dim; ++k) m(k, i) = c[i][j][k];
  return m;
}

Mat Algebra::lmul_by(const Mat& x) const {
  Mat m(dim, dim);
  for (int i = 0; i < dim; ++i)
    if (!x(i, 0).is_zero()) m = m + x(i, 0) * lmul(i);
  return m;
}

Mat Algebra::rmul_by(const Mat& x) const {
  Mat m(dim, dim);
  for (int j = 0; j < dim; ++j)
    if (!x(j, 0).is_zero()) m = m + x(j, 0) * rmul(j);
  return m;
}

void validate_algebra(const Algebra& a) {
  if (a.dim <= 0 || static_cast<int>(a.c.size()) != a.dim ||
      a.unit.rows != a.dim || a.unit.cols != 1)
    throw ModelError("InvalidAlgebra", "malformed presentation");
  for (auto& row : a.c) {
    if (static_cast<int>(row.size()) != a.dim)
      throw ModelError("InvalidAlgebra", "malformed structure constants");
    for (auto& cell : row)
      if (static_cast<int>(cell.size()) != a.dim)
        throw ModelError("InvalidAlgebra", "malformed structure constants");
  }
  for (int i = 0; i < a.dim; ++i) {
    Mat li = a.lmul(i);
    for (int j = 0; j < a.dim; ++j) {
      // (e_i e_j) e_k == e_i (e_j e_k) for all k, as multiplication operators
      Mat lhs = a.lmul_by(li.col(j));
      if (!(lhs == li * a.lmul(j)))
        throw ModelError("InvalidAlgebra",
                         "associativity fails at basis pair (" +
                             std::to_string(i) + ", " + std::to_string(j) +
                             ")");
    }
  }
  if (!(a.lmul_by(a.unit) == Mat::identity(a.dim)) ||
      !(a.rmul_by(a.unit) == Mat::identity(a.dim)))
    throw ModelError("InvalidAlgebra", "unit law fails");
}

Algebra rational_algebra() {
  Algebra a;
  a.dim = 1;
  a.basis = {"1"};
  a.c = {{{Rat(1)}}};
  a.unit = Mat(1, 1);
  a.unit(0, 0) = 1;
  return a;
}

Mat Bimodule::left_act(const Mat& a) const {
  Mat m(dim, dim);
  for (int i = 0; i < A.dim; ++i)
    if (!a(i, 0).is_zero()) m = m + a(i, 0) * left[i];
  return m;
}

Mat Bimodule::right_act(const Mat& r) const {
  Mat m(dim, dim);
  for (int j = 0; j < R.dim; ++j)
    if (!r(j, 0).is_zero()) m = m + r(j, 0) * right[j];
  return m;
}

void validate_bimodule(const Bimodule& m) {
  if (static_cast<int>(m.left.size()) != m.A.dim ||
      static_cast<int>(m.right.size()) != m.R.dim)
    throw ModelError("InvalidBimodule", "wrong number of action matrices");
  for (const Mat& x : m.left)
    if (x.rows != m.dim || x.cols != m.dim)
      throw ModelError("InvalidBimodule", "action matrix shape mismatch");
  for (const Mat& x : m.right)
    if (x.rows != m.dim || x.cols != m.dim)
      throw ModelError("InvalidBimodule", "action matrix shape mismatch");
  for (int i = 0; i < m.A.dim; ++i) {
    Mat li = m.A.lmul(i);
    for (int j = 0; j < m.A.dim; ++j)
      if (!(m.left_act(li.col(j)) == m.left[i] * m.left[j]))
        throw ModelError("InvalidBimodule", "left action is not an action");
  }
  for (int i = 0; i < m.R.dim; ++i) {
    Mat li = m.R.lmul(i);
    for (int j = 0; j < m.R.dim; ++j)
      // x.(e_i e_j) == (x.e_i).e_j
      if (!(m.right_act(li.col(j)) == m.right[j] * m.right[i]))
        throw ModelError("InvalidBimodule", "right action is not an action");
  }
  if (!(m.left_act(m.A.unit) == Mat::identity(m.dim)) ||
      !(m.right_act(m.R.unit) == Mat::identity(m.dim)))
    throw ModelError("InvalidBimodule", "unit does not act as identity");
  for (int i = 0; i < m.A.dim; ++i)
    for (int j = 0; j < m.R.dim; ++j)
      if (!(m.left[i] * m.right[j] == m.right[j] * m.left[i]))
        throw ModelError("InvalidBimodule", "actions do not commute");
  if (m.witness) {
    Mat w = *m.witness;
    if (w.rows != m.dim || w.cols * m.R.dim != m.dim)
      throw ModelError("NotFree", "witness has the wrong rank");
    Mat f(m.dim, w.cols * m.R.dim);
    for (int t = 0; t < w.cols; ++t)
      for (int j = 0; j < m.R.dim; ++j) {
        Mat v = m.right[j] * w.col(t);
        for (int i = 0; i < m.dim; ++i) f(i, t * m.R.dim + j) = v(i, 0);
      }
    if (!inverse(f))
      throw ModelError("NotFree", "witness generators are not a basis");
  }
}

Bimodule regular_bimodule(const Algebra& a) {
  Bimodule m;
  m.A = a;
  m.R = a;
  m.dim = a.dim;
  for (int i = 0; i < a.dim; ++i) {
    m.left.push_back(a.lmul(i));
    m.right.push_back(a.rmul(i));
  }
  m.witness = a.unit;
  return m;
}

Bimodule free_rational_module(int n) {
  Bimodule m;
  m.A = rational_algebra();
  m.R = m.A;
  m.dim = n;
  m.left = {Mat::identity(n)};
  m.right = {Mat::identity(n)};
  m.witness = Mat::identity(n);
  return m;
}

Bimodule direct_sum(const Bimodule& m, const Bimodule& n) {
  if (!(m.A == n.A) || !(m.R == n.R))
    throw ModelError("InvalidBimodule", "direct sum over different algebras");
  Bimodule s;
  s.A = m.A;
  s.R = m.R;
  s.dim = m.dim + n.dim;
  auto block = [&](const Mat& x, const Mat& y) {
    Mat out(s.dim, s.dim);
    for (int i = 0; i < m.dim; ++i)
      for (int j = 0; j < m.dim; ++j) out(i, j) = x(i, j);
    for (int i = 0; i < n.dim; ++i)
      for (int j = 0; j < n.dim; ++j) out(m.dim + i, m.dim + j) = y(i, j);
    return out;
  };
  for (int i = 0; i < s.A.dim; ++i) s.left.push_back(block(m.left[i], n.left[i]));
  for (int j = 0; j < s.R.dim; ++j)
    s.right.push_back(block(m.right[j], n.right[j]));
  if (m.witness && n.witness) {
    Mat w(s.dim, m.witness->cols + n.witness->cols);
    for (int i = 0; i < m.dim; ++i)
      for (int t = 0; t < m.witness->cols; ++t) w(i, t) = (*m.witness)(i, t);
    for (int i = 0; i < n.dim; ++i)
      for (int t = 0; t < n.witness->cols; ++t)
        w(m.dim + i, m.witness->cols + t) = (*n.witness)(i, t);
    s.witness = w;
  }
  return s;
}

TensorResult tensor_over(const Bimodule& m, const Bimodule& n) {
  if (!(m.R == n.A))
    throw ModelError("InvalidBimodule",
                     "tensor factors do not share the middle algebra");
  int md = m.dim, nd = n.dim, rd = m.R.dim;
  int plain = md * nd;
  std::vector<SparseVec> rel;
  rel.reserve(static_cast<size_t>(rd) * plain);
  for (int r = 0; r < rd; ++r) {
    const Mat& mr = m.right[r];
    const Mat& nl = n.left[r];
    for (int i = 0; i < md; ++i)
      for (int j = 0; j < nd; ++j) {
        // (x_i . e_r) (x) y_j  -  x_i (x) (e_r . y_j)
        SparseVec col;
        for (int ii = 0; ii < md; ++ii)
          if (!mr(ii, i).is_zero()) col.emplace_back(ii * nd + j, mr(ii, i));
        for (int jj = 0; jj < nd; ++jj)
          if (!nl(jj, j).is_zero()) col.emplace_back(i * nd + jj, -nl(jj, j));
        if (!col.empty()) rel.push_back(std::move(col));
      }
  }
  TensorResult out;
  out.q = quotient_by_columns(plain, rel);
  out.prod.A = m.A;
  out.prod.R = n.R;
  out.prod.dim = out.q.dim();
  // The induced actions only need the images of the quotient basis
  // representatives, which are single tensor-basis vectors; combining the
  // sparse columns of proj avoids materializing any Kronecker product.
  std::vector<SparseVec> projcols = sparse_columns(out.q.proj);
  int qd = out.q.dim();
  for (int a = 0; a < m.A.dim; ++a) {
    const Mat& la = m.left[a];
    Mat act(qd, qd);
    for (int c = 0; c < qd; ++c) {
      int i = out.q.basis[c] / nd, j = out.q.basis[c] % nd;
      for (int ii = 0; ii < md; ++ii) {
        if (la(ii, i).is_zero()) continue;
        for (auto& [x, v] : projcols[ii * nd + j]) act(x, c) += la(ii, i) * v;
      }
    }
    out.prod.left.push_back(std::move(act));
  }
  for (int r = 0; r < n.R.dim; ++r) {
    const Mat& nr = n.right[r];
    Mat act(qd, qd);
    for (int c = 0; c < qd; ++c) {
      int i = out.q.basis[c] / nd, j = out.q.basis[c] % nd;
      for (int jj = 0; jj < nd; ++jj) {
        if (nr(jj, j).is_zero()) continue;
        for (auto& [x, v] : projcols[i * nd + jj]) act(x, c) += nr(jj, j) * v;
      }
    }
    out.prod.right.push_back(std::move(act));
  }
  if (m.witness && n.witness) {
    // generators g_t (x) h_u exhibit M (x)_R N as free over n.R
    Mat w(out.prod.dim, m.witness->cols * n.witness->cols);
    int col = 0;
    for (int t = 0; t < m.witness->cols; ++t)
      for (int u = 0; u < n.witness->cols; ++u) {
        for (int i = 0; i < md; ++i) {
          const Rat& a = (*m.witness)(i, t);
          if (a.is_zero()) continue;
          for (int j = 0; j < nd; ++j) {
            const Rat& b = (*n.witness)(j, u);
            if (b.is_zero()) continue;
            for (auto& [x, v] : projcols[i * nd + j]) w(x, col) += a * b * v;
          }
        }
        ++col;
      }
    out.prod.witness = w;
  }
  return out;
}

HH0Space shadow_hh0(const Bimodule& m) {
  if (!(m.A == m.R))
    throw ModelError("InvalidBimodule",
                     "shadow requires a bimodule over one algebra");
  std::vector<SparseVec> rel;
  rel.reserve(static_cast<size_t>(m.A.dim) * m.dim);
  for (int i = 0; i < m.A.dim; ++i) {
    // commutator columns e_i.x_j - x_j.e_i; entries with a shared index are
    // merged during elimination, so the two supports are just concatenated
    std::vector<SparseVec> l = sparse_columns(m.left[i]);
    std::vector<SparseVec> r = sparse_columns(m.right[i]);
    for (int j = 0; j < m.dim; ++j) {
      SparseVec col = std::move(l[j]);
      for (auto& [row, v] : r[j]) col.emplace_back(row, -v);
      if (!col.empty()) rel.push_back(std::move(col));
    }
  }
  HH0Space h;
  h.q = quotient_by_columns(m.dim, rel);
  return h;
}

DualData dualize(const Bimodule& m) {
  if (!m.witness) throw ModelError("NotFree", "no freeness witness");
  validate_bimodule(m);  // includes the witness isomorphism check
  const Mat& w = *m.witness;
  int k = w.cols, rd = m.R.dim, md = m.dim;
  Mat f(md, k * rd);
  for (int t = 0; t < k; ++t)
    for (int j = 0; j < rd; ++j) {
      Mat v = m.right[j] * w.col(t);
      for (int i = 0; i < md; ++i) f(i, t * rd + j) = v(i, 0);
    }
  Mat finv = *inverse(f);  // exists: witness validated above

  // coordinate functionals: x = sum_t g_t . phi_t(x) with phi_t : M -> R
  std::vector<Mat> phi;
  for (int t = 0; t < k; ++t) {
    Mat p(rd, md);
    for (int j = 0; j < rd; ++j)
      for (int i = 0; i < md; ++i) p(j, i) = finv(t * rd + j, i);
    phi.push_back(p);
  }

  // DM basis: psi_{t,j} = e_j . phi_t, stored by its matrix M -> R
  std::vector<Mat> psi;
  for (int t = 0; t < k; ++t)
    for (int j = 0; j < rd; ++j) psi.push_back(m.R.lmul(j) * phi[t]);
  int dd = static_cast<int>(psi.size());  // == md

  // a right-R-linear map is determined by its values on the generators
  auto hom_coords = [&](const Mat& p) {
    Mat out(dd, 1);
    for (int t = 0; t < k; ++t) {
      Mat v = p * w.col(t);
      for (int j = 0; j < rd; ++j) out(t * rd + j, 0) = v(j, 0);
    }
    return out;
  };

  DualData d;
  d.phi = phi;
  d.DM.A = m.R;
  d.DM.R = m.A;
  d.DM.dim = dd;
  for (int r = 0; r < rd; ++r) {
    Mat act(dd, dd);
    for (int i = 0; i < dd; ++i) {
      Mat cvec = hom_coords(m.R.lmul(r) * psi[i]);
      for (int x = 0; x < dd; ++x) act(x, i) = cvec(x, 0);
    }
    d.DM.left.push_back(act);
  }
  for (int a = 0; a < m.A.dim; ++a) {
    Mat act(dd, dd);
    for (int i = 0; i < dd; ++i) {
      Mat cvec = hom_coords(psi[i] * m.left[a]);
      for (int x = 0; x < dd; ++x) act(x, i) = cvec(x, 0);
    }
    d.DM.right.push_back(act);
  }

  d.MDM = tensor_over(m, d.DM);
  d.DMM = tensor_over(d.DM, m);

  // coev(a) = sum_t (a . g_t) (x) phi_t, projected term by term so the
  // plain tensor vector is never combined with a dense product
  std::vector<SparseVec> mdmcols = sparse_columns(d.MDM.q.proj);
  std::vector<Mat> phicoords;
  for (int t = 0; t < k; ++t) phicoords.push_back(hom_coords(phi[t]));
  d.coev = Mat(d.MDM.prod.dim, m.A.dim);
  for (int a = 0; a < m.A.dim; ++a) {
    for (int t = 0; t < k; ++t) {
      Mat g = m.left[a] * w.col(t);
      const Mat& h = phicoords[t];
      for (int i = 0; i < md; ++i) {
        if (g(i, 0).is_zero()) continue;
        for (int x = 0; x < dd; ++x) {
          if (h(x, 0).is_zero()) continue;
          Rat c = g(i, 0) * h(x, 0);
          for (auto& [row, v] : mdmcols[i * dd + x]) d.coev(row, a) += c * v;
        }
      }
    }
  }

  // eval(psi (x) x) = psi(x)
  Mat eval_plain(rd, dd * md);
  for (int i = 0; i < dd; ++i)
    for (int x = 0; x < md; ++x) {
      Mat v = psi[i].col(x);
      for (int j = 0; j < rd; ++j) eval_plain(j, i * md + x) = v(j, 0);
    }
  d.eval = eval_plain * d.DMM.q.section;
  if (!(d.eval * d.DMM.q.proj == eval_plain))
    throw ModelError("Internal", "evaluation does not descend to the tensor");

  // triangle identities, exactly
  for (int i = 0; i < md; ++i) {
    Mat e(md, 1);
    e(i, 0) = 1;
    Mat acc(md, 1);
    for (int t = 0; t < k; ++t)
      acc = acc + m.right_act(phi[t].col(i)) * w.col(t);
    if (!(acc == e))
      throw ModelError("Internal", "first triangle identity fails");
  }
  for (int i = 0; i < dd; ++i) {
    Mat acc(rd, md);
    for (int t = 0; t < k; ++t)
      acc = acc + m.R.lmul_by(psi[i] * w.col(t)) * phi[t];
    if (!(acc == psi[i]))
      throw ModelError("Internal", "second triangle identity fails");
  }
  return d;
}

Mat evaluate_trace(const Bimodule& m) {
  DualData d = dualize(m);
  HH0Space hA = shadow_hh0(regular_bimodule(m.A));
  HH0Space hR = shadow_hh0(regular_bimodule(m.R));
  HH0Space h1 = shadow_hh0(d.MDM.prod);
  HH0Space h2 = shadow_hh0(d.DMM.prod);

  int md = m.dim, dd = d.DM.dim;
  Mat swap(dd * md, md * dd);
  for (int i = 0; i < md; ++i)
    for (int x = 0; x < dd; ++x) swap(x * md + i, i * dd + x) = 1;

  // associate from the narrow ends: the HH0 sections/projections have few
  // columns, so this keeps every intermediate product small
  Mat theta =
      h2.q.proj * (d.DMM.q.proj * (swap * (d.MDM.q.section * h1.q.section)));
  Mat in = h1.q.proj * (d.coev * hA.q.section);
  Mat out = hR.q.proj * (d.eval * h2.q.section);
  return out * (theta * in);
}

Mat hattori_stallings_oracle(const Bimodule& m) {
  if (!m.witness) throw ModelError("NotFree", "no freeness witness");
  validate_bimodule(m);
  const Mat& w = *m.witness;
  int k = w.cols, rd = m.R.dim, md = m.dim;
  Mat f(md, k * rd);
  for (int t = 0; t < k; ++t)
    for (int j = 0; j < rd; ++j) {
      Mat v = m.right[j] * w.col(t);
      for (int i = 0; i < md; ++i) f(i, t * rd + j) = v(i, 0);
    }
  Mat finv = *inverse(f);

  HH0Space hA = shadow_hh0(regular_bimodule(m.A));
  HH0Space hR = shadow_hh0(regular_bimodule(m.R));
  Mat out(hR.dim(), hA.dim());
  for (int c = 0; c < hA.dim(); ++c) {
    Mat a = hA.q.section.col(c);
    Mat la = m.left_act(a);
    Mat acc(rd, 1);
    for (int t = 0; t < k; ++t) {
      Mat x = la * w.col(t);  // a . g_t
      // phi_t(a . g_t): rows t*rd .. t*rd+rd of finv applied to x
      for (int j = 0; j < rd; ++j) {
        Rat s = 0;
        for (int i = 0; i < md; ++i) s += finv(t * rd + j, i) * x(i, 0);
        acc(j, 0) += s;
      }
    }
    Mat v = hR.q.proj * acc;
    for (int i = 0; i < hR.dim(); ++i) out(i, c) = v(i, 0);
  }
  return out;
}

}  // namespace bicat
