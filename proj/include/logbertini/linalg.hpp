#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "logbertini/numeric.hpp"

namespace logbertini {

// Row-major matrices over an arbitrary field context object. rref is fully
// reduced (pivots 1, zeros above and below, zero rows at the bottom), so
// equal row spaces produce byte-identical forms and can be compared directly.

template <class K>
using FMat = std::vector<std::vector<typename K::Elem>>;

template <class K>
std::vector<long> rref_in_place(const K& k, FMat<K>& m) {
  std::vector<long> pivots;
  if (m.empty()) return pivots;
  const long rows = static_cast<long>(m.size());
  const long cols = static_cast<long>(m[0].size());
  long r = 0;
  for (long c = 0; c < cols && r < rows; ++c) {
    long piv = -1;
    for (long i = r; i < rows; ++i)
      if (!k.is_zero(m[i][c])) { piv = i; break; }
    if (piv < 0) continue;
    std::swap(m[r], m[piv]);
    typename K::Elem s = k.inv(m[r][c]);
    for (long j = c; j < cols; ++j) m[r][j] = k.mul(s, m[r][j]);
    for (long i = 0; i < rows; ++i) {
      if (i == r || k.is_zero(m[i][c])) continue;
      typename K::Elem f = m[i][c];
      for (long j = c; j < cols; ++j)
        m[i][j] = k.sub(m[i][j], k.mul(f, m[r][j]));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <class K>
long frank(const K& k, FMat<K> m) {
  return static_cast<long>(rref_in_place(k, m).size());
}

// membership of v in the row span
template <class K>
bool in_row_span(const K& k, const FMat<K>& m, const std::vector<typename K::Elem>& v) {
  FMat<K> a = m;
  long r0 = frank(k, a);
  a = m;
  a.push_back(v);
  return frank(k, a) == r0;
}

// basis of { x : m x = 0 } (right kernel, x as column vectors)
template <class K>
FMat<K> nullspace(const K& k, FMat<K> m, long cols) {
  std::vector<long> pivots = rref_in_place(k, m);
  std::vector<bool> is_pivot(cols, false);
  for (long c : pivots) is_pivot[c] = true;
  FMat<K> basis;
  for (long c = 0; c < cols; ++c) {
    if (is_pivot[c]) continue;
    std::vector<typename K::Elem> x(cols, k.zero());
    x[c] = k.one();
    for (size_t t = 0; t < pivots.size(); ++t)
      x[pivots[t]] = k.neg(m[t][c]);
    basis.push_back(std::move(x));
  }
  return basis;
}

// one solution of m x = b, or nullopt
template <class K>
std::optional<std::vector<typename K::Elem>> solve_right(
    const K& k, const FMat<K>& m, const std::vector<typename K::Elem>& b, long cols) {
  FMat<K> aug = m;
  for (size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
  std::vector<long> pivots = rref_in_place(k, aug);
  for (long c : pivots)
    if (c == cols) return std::nullopt;  // inconsistent system
  std::vector<typename K::Elem> x(cols, k.zero());
  for (size_t t = 0; t < pivots.size(); ++t) x[pivots[t]] = aug[t][cols];
  return x;
}

template <class K>
std::vector<typename K::Elem> fmat_apply(const K& k, const FMat<K>& m,
                                         const std::vector<typename K::Elem>& x) {
  std::vector<typename K::Elem> out(m.size(), k.zero());
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < x.size(); ++j)
      out[i] = k.add(out[i], k.mul(m[i][j], x[j]));
  return out;
}

// determinant by elimination; used for resultants with field entries
template <class K>
typename K::Elem fdet(const K& k, FMat<K> m) {
  const long n = static_cast<long>(m.size());
  typename K::Elem det = k.one();
  for (long c = 0; c < n; ++c) {
    long piv = -1;
    for (long i = c; i < n; ++i)
      if (!k.is_zero(m[i][c])) { piv = i; break; }
    if (piv < 0) return k.zero();
    if (piv != c) { std::swap(m[piv], m[c]); det = k.neg(det); }
    det = k.mul(det, m[c][c]);
    typename K::Elem s = k.inv(m[c][c]);
    for (long i = c + 1; i < n; ++i) {
      if (k.is_zero(m[i][c])) continue;
      typename K::Elem f = k.mul(s, m[i][c]);
      for (long j = c; j < n; ++j)
        m[i][j] = k.sub(m[i][j], k.mul(f, m[c][j]));
    }
  }
  return det;
}

}  // namespace logbertini
