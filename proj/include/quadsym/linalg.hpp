#pragma once

// Dense exact linear algebra over Q. Sizes here stay in the low hundreds, so
// plain row reduction on mpq_class is fast enough.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "quadsym/arith.hpp"

namespace quadsym {

using RVec = std::vector<Rational>;
using RMat = std::vector<RVec>;  // row-major

inline RMat zero_matrix(std::size_t rows, std::size_t cols) { return RMat(rows, RVec(cols, Rational(0))); }

inline RMat identity_matrix(std::size_t n) {
  RMat m = zero_matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline std::size_t num_cols(const RMat& m) { return m.empty() ? 0 : m[0].size(); }

inline RMat transpose(const RMat& m) {
  RMat t = zero_matrix(num_cols(m), m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
  return t;
}

inline RMat multiply(const RMat& x, const RMat& y) {
  if (num_cols(x) != y.size()) throw std::invalid_argument("multiply: shape mismatch");
  RMat r = zero_matrix(x.size(), num_cols(y));
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t k = 0; k < y.size(); ++k) {
      if (x[i][k] == 0) continue;
      for (std::size_t j = 0; j < num_cols(y); ++j) r[i][j] += x[i][k] * y[k][j];
    }
  return r;
}

inline RVec mat_vec(const RMat& m, const RVec& v) {
  if (num_cols(m) != v.size()) throw std::invalid_argument("apply: shape mismatch");
  RVec r(m.size(), Rational(0));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j)
      if (v[j] != 0) r[i] += m[i][j] * v[j];
  return r;
}

inline bool is_zero(const RVec& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

inline RVec add(const RVec& a, const RVec& b) {
  RVec r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

inline RVec scale(const Rational& s, const RVec& v) {
  RVec r = v;
  for (auto& x : r) x *= s;
  return r;
}

inline Rational dot(const RVec& a, const RVec& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
  return s;
}

/// Reduced row echelon form in place; returns pivot columns.
inline std::vector<std::size_t> rref(RMat& m) {
  std::vector<std::size_t> pivots;
  const std::size_t rows = m.size(), cols = num_cols(m);
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = rows;
    for (std::size_t i = r; i < rows; ++i)
      if (m[i][c] != 0) {
        piv = i;
        break;
      }
    if (piv == rows) continue;
    std::swap(m[r], m[piv]);
    Rational inv = 1 / m[r][c];
    for (std::size_t j = c; j < cols; ++j) m[r][j] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rational f = m[i][c];
      for (std::size_t j = c; j < cols; ++j)
        if (m[r][j] != 0) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  m.resize(r);
  return pivots;
}

inline std::size_t rank(RMat m) { return rref(m).size(); }

/// Basis of {v : m v = 0}, as a list of vectors.
inline std::vector<RVec> kernel(RMat m, std::size_t cols) {
  auto pivots = rref(m);
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<RVec> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    RVec v(cols, Rational(0));
    v[f] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

inline std::vector<RVec> kernel(const RMat& m) { return kernel(m, num_cols(m)); }

/// Solve B x = v where the columns of B are `basis`; empty result if v is not in the span.
inline std::vector<Rational> solve_in_span(const std::vector<RVec>& basis, const RVec& v, bool* ok = nullptr) {
  const std::size_t k = basis.size(), n = v.size();
  RMat aug = zero_matrix(n, k + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) aug[i][j] = basis[j][i];
    aug[i][k] = v[i];
  }
  auto pivots = rref(aug);
  std::vector<Rational> x(k, Rational(0));
  bool good = pivots.empty() || pivots.back() != k;
  if (good)
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug[r][k];
  if (ok) *ok = good;
  if (!good) return {};
  return x;
}

/// Matrix of the restriction of `op` (acting on column vectors) to the invariant
/// subspace spanned by `basis`: op * B = B * M.
inline RMat restrict_to(const RMat& op, const std::vector<RVec>& basis) {
  const std::size_t k = basis.size();
  RMat m = zero_matrix(k, k);
  for (std::size_t j = 0; j < k; ++j) {
    bool ok = false;
    auto x = solve_in_span(basis, mat_vec(op, basis[j]), &ok);
    if (!ok) throw std::domain_error("restrict_to: subspace is not invariant");
    for (std::size_t i = 0; i < k; ++i) m[i][j] = x[i];
  }
  return m;
}

}  // namespace quadsym
