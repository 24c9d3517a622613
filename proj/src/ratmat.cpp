#include "bicat/ratmat.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace bicat {

Rat parse_rat(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational");
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) {
      return Rat(boost::multiprecision::cpp_int(s));
    }
    boost::multiprecision::cpp_int num(s.substr(0, slash));
    boost::multiprecision::cpp_int den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rat(num, den);
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("malformed rational: " + s);
  }
}

std::string render_rat(const Rat& q) {
  std::string num = numerator(q).str();
  if (denominator(q) == 1) return num;
  return num + "/" + denominator(q).str();
}

Mat Mat::identity(int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Mat Mat::col(int j) const {
  Mat out(rows, 1);
  for (int i = 0; i < rows; ++i) out(i, 0) = (*this)(i, j);
  return out;
}

bool Mat::is_zero() const {
  for (const Rat& x : a)
    if (!x.is_zero()) return false;
  return true;
}

Mat operator*(const Mat& x, const Mat& y) {
  if (x.cols != y.rows) throw std::invalid_argument("matrix shape mismatch");
  Mat out(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      const Rat& v = x(i, k);
      if (v.is_zero()) continue;
      for (int j = 0; j < y.cols; ++j) {
        const Rat& u = y(k, j);
        if (!u.is_zero()) out(i, j) += v * u;
      }
    }
  return out;
}

Mat operator+(const Mat& x, const Mat& y) {
  if (x.rows != y.rows || x.cols != y.cols)
    throw std::invalid_argument("matrix shape mismatch");
  Mat out = x;
  for (size_t i = 0; i < out.a.size(); ++i) out.a[i] += y.a[i];
  return out;
}

Mat operator-(const Mat& x, const Mat& y) {
  if (x.rows != y.rows || x.cols != y.cols)
    throw std::invalid_argument("matrix shape mismatch");
  Mat out = x;
  for (size_t i = 0; i < out.a.size(); ++i) out.a[i] -= y.a[i];
  return out;
}

Mat operator*(const Rat& c, const Mat& x) {
  Mat out = x;
  for (Rat& v : out.a) v *= c;
  return out;
}

Mat hcat(const Mat& x, const Mat& y) {
  if (x.rows != y.rows) throw std::invalid_argument("hcat shape mismatch");
  Mat out(x.rows, x.cols + y.cols);
  for (int i = 0; i < x.rows; ++i) {
    for (int j = 0; j < x.cols; ++j) out(i, j) = x(i, j);
    for (int j = 0; j < y.cols; ++j) out(i, x.cols + j) = y(i, j);
  }
  return out;
}

Mat vcat(const Mat& x, const Mat& y) {
  if (x.cols != y.cols) throw std::invalid_argument("vcat shape mismatch");
  Mat out(x.rows + y.rows, x.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) out(i, j) = x(i, j);
  for (int i = 0; i < y.rows; ++i)
    for (int j = 0; j < x.cols; ++j) out(x.rows + i, j) = y(i, j);
  return out;
}

std::vector<int> rref(Mat& m) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols && row < m.rows; ++col) {
    int sel = -1;
    for (int i = row; i < m.rows; ++i)
      if (!m(i, col).is_zero()) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    if (sel != row)
      for (int j = 0; j < m.cols; ++j) std::swap(m(sel, j), m(row, j));
    Rat inv = Rat(1) / m(row, col);
    for (int j = col; j < m.cols; ++j) m(row, j) *= inv;
    for (int i = 0; i < m.rows; ++i) {
      if (i == row || m(i, col).is_zero()) continue;
      Rat f = m(i, col);
      for (int j = col; j < m.cols; ++j) m(i, j) -= f * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

int rank(Mat m) { return static_cast<int>(rref(m).size()); }

std::optional<Mat> solve(const Mat& m, const Mat& b) {
  if (m.rows != b.rows) throw std::invalid_argument("solve shape mismatch");
  Mat aug = hcat(m, b);
  std::vector<int> pivots = rref(aug);
  for (int p : pivots)
    if (p >= m.cols) return std::nullopt;  // inconsistent row 0 = 1
  Mat x(m.cols, b.cols);
  for (size_t r = 0; r < pivots.size(); ++r)
    for (int j = 0; j < b.cols; ++j)
      x(pivots[r], j) = aug(static_cast<int>(r), m.cols + j);
  return x;
}

std::optional<Mat> inverse(const Mat& m) {
  if (m.rows != m.cols) throw std::invalid_argument("inverse of non-square");
  if (m.rows == 0) return Mat(0, 0);
  Mat aug = hcat(m, Mat::identity(m.rows));
  std::vector<int> pivots = rref(aug);
  if (static_cast<int>(pivots.size()) != m.rows || pivots.back() != m.rows - 1)
    return std::nullopt;
  Mat out(m.rows, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.rows; ++j) out(i, j) = aug(i, m.cols + j);
  return out;
}

Quotient quotient_by(int ambient_dim, const Mat& relations) {
  if (relations.cols > 0 && relations.rows != ambient_dim)
    throw std::invalid_argument("relation vectors live in the wrong space");
  std::vector<SparseVec> cols;
  cols.reserve(relations.cols);
  for (int j = 0; j < relations.cols; ++j) {
    SparseVec c;
    for (int i = 0; i < relations.rows; ++i)
      if (!relations(i, j).is_zero()) c.emplace_back(i, relations(i, j));
    cols.push_back(std::move(c));
  }
  return quotient_by_columns(ambient_dim, cols);
}

namespace {

// Sorts by index and merges repeated indices, dropping zeros.
SparseVec sparse_normal(SparseVec v) {
  std::sort(v.begin(), v.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseVec out;
  for (auto& [i, x] : v) {
    if (!out.empty() && out.back().first == i)
      out.back().second += x;
    else
      out.emplace_back(i, x);
  }
  out.erase(std::remove_if(out.begin(), out.end(),
                           [](const auto& p) { return p.second.is_zero(); }),
            out.end());
  return out;
}

// a - f * b for sorted sparse vectors.
SparseVec sparse_axpy(const SparseVec& a, const Rat& f, const SparseVec& b) {
  SparseVec out;
  out.reserve(a.size() + b.size());
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j >= b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i >= a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, -f * b[j].second);
      ++j;
    } else {
      Rat v = a[i].second - f * b[j].second;
      if (!v.is_zero()) out.emplace_back(a[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

Quotient quotient_by_columns(int ambient_dim,
                             const std::vector<SparseVec>& relations) {
  // Gaussian elimination on sparse rows, keyed by leading index.
  std::map<int, SparseVec> ech;
  for (const SparseVec& raw : relations) {
    SparseVec row = sparse_normal(raw);
    while (!row.empty()) {
      if (row.front().first >= ambient_dim)
        throw std::invalid_argument("relation vectors live in the wrong space");
      auto it = ech.find(row.front().first);
      if (it == ech.end()) break;
      row = sparse_axpy(row, row.front().second, it->second);
    }
    if (row.empty()) continue;
    Rat inv = Rat(1) / row.front().second;
    for (auto& [i, x] : row) x *= inv;
    int lead = row.front().first;
    ech.emplace(lead, std::move(row));
  }
  // back-substitution to fully reduced form, largest pivot first so every
  // row referenced below is already clean
  for (auto it = ech.rbegin(); it != ech.rend(); ++it) {
    SparseVec& row = it->second;
    for (size_t k = 1; k < row.size();) {
      auto hit = ech.find(row[k].first);
      if (hit == ech.end()) {
        ++k;
        continue;
      }
      row = sparse_axpy(row, row[k].second, hit->second);
      // the eliminated pivot entry is gone; rescan from the same slot
    }
  }

  Quotient q;
  q.ambient_dim = ambient_dim;
  std::vector<bool> is_pivot(ambient_dim, false);
  for (auto& [p, row] : ech) is_pivot[p] = true;
  std::vector<int> pos(ambient_dim, -1);
  for (int j = 0; j < ambient_dim; ++j)
    if (!is_pivot[j]) {
      pos[j] = static_cast<int>(q.basis.size());
      q.basis.push_back(j);
    }

  q.proj = Mat(q.dim(), ambient_dim);
  for (int j = 0; j < ambient_dim; ++j) {
    if (!is_pivot[j]) {
      q.proj(pos[j], j) = 1;
      continue;
    }
    // e_j == (pivot row) on the quotient: e_j maps to minus the non-pivot
    // tail of its fully reduced echelon row
    for (auto& [i, x] : ech.at(j))
      if (i != j) q.proj(pos[i], j) = -x;
  }
  q.section = Mat(ambient_dim, q.dim());
  for (int i = 0; i < q.dim(); ++i) q.section(q.basis[i], i) = 1;
  return q;
}

}  // namespace bicat
