#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "logbertini/numeric.hpp"

namespace logbertini {

// Dense integer matrix, row major. Rows of a homomorphism matrix are the
// images of the source basis vectors, acting on row vectors from the left.
struct IntMat {
  long rows = 0;
  long cols = 0;
  std::vector<Int> a;

  IntMat() = default;
  IntMat(long r, long c) : rows(r), cols(c), a(static_cast<size_t>(r * c)) {}

  Int& at(long i, long j) { return a[static_cast<size_t>(i * cols + j)]; }
  const Int& at(long i, long j) const { return a[static_cast<size_t>(i * cols + j)]; }

  static IntMat identity(long n) {
    IntMat m(n, n);
    for (long i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  static IntMat from_rows(const std::vector<std::vector<Int>>& rows_in, long ncols) {
    IntMat m(static_cast<long>(rows_in.size()), ncols);
    for (long i = 0; i < m.rows; ++i) {
      if (static_cast<long>(rows_in[i].size()) != ncols)
        throw config_error("row length mismatch building matrix");
      for (long j = 0; j < ncols; ++j) m.at(i, j) = rows_in[i][j];
    }
    return m;
  }

  std::vector<Int> row(long i) const {
    return std::vector<Int>(a.begin() + i * cols, a.begin() + (i + 1) * cols);
  }

  std::vector<std::vector<Int>> to_rows() const {
    std::vector<std::vector<Int>> out;
    out.reserve(rows);
    for (long i = 0; i < rows; ++i) out.push_back(row(i));
    return out;
  }

  bool operator==(const IntMat& o) const {
    return rows == o.rows && cols == o.cols && a == o.a;
  }
};

inline IntMat transpose(const IntMat& m) {
  IntMat t(m.cols, m.rows);
  for (long i = 0; i < m.rows; ++i)
    for (long j = 0; j < m.cols; ++j) t.at(j, i) = m.at(i, j);
  return t;
}

inline IntMat mat_mul(const IntMat& x, const IntMat& y) {
  if (x.cols != y.rows) throw config_error("matrix product shape mismatch");
  IntMat z(x.rows, y.cols);
  for (long i = 0; i < x.rows; ++i)
    for (long k = 0; k < x.cols; ++k) {
      const Int& v = x.at(i, k);
      if (v == 0) continue;
      for (long j = 0; j < y.cols; ++j) z.at(i, j) += v * y.at(k, j);
    }
  return z;
}

inline std::vector<Int> vec_mat_mul(const std::vector<Int>& v, const IntMat& m) {
  if (static_cast<long>(v.size()) != m.rows) throw config_error("vector/matrix shape mismatch");
  std::vector<Int> out(static_cast<size_t>(m.cols));
  for (long i = 0; i < m.rows; ++i) {
    if (v[i] == 0) continue;
    for (long j = 0; j < m.cols; ++j) out[j] += v[i] * m.at(i, j);
  }
  return out;
}

// floor division; cpp_int's operator/ truncates toward zero
inline Int fdiv(const Int& a, const Int& b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Bareiss, fraction free. Only used on small matrices (transform checks).
inline Int determinant(IntMat m) {
  if (m.rows != m.cols) throw config_error("determinant of non-square matrix");
  const long n = m.rows;
  if (n == 0) return 1;
  Int sign = 1, prev = 1;
  for (long k = 0; k < n - 1; ++k) {
    if (m.at(k, k) == 0) {
      long p = -1;
      for (long i = k + 1; i < n; ++i)
        if (m.at(i, k) != 0) { p = i; break; }
      if (p < 0) return 0;
      for (long j = 0; j < n; ++j) std::swap(m.at(k, j), m.at(p, j));
      sign = -sign;
    }
    for (long i = k + 1; i < n; ++i)
      for (long j = k + 1; j < n; ++j)
        m.at(i, j) = (m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j)) / prev;
    prev = m.at(k, k);
  }
  return sign * m.at(n - 1, n - 1);
}

struct HnfResult {
  IntMat h;  // row-echelon Hermite form
  IntMat u;  // unimodular, u * a = h
  std::vector<long> pivot_cols;  // one entry per nonzero row of h
};

// Left Hermite normal form. Pivots positive, entries above a pivot reduced
// into [0, pivot), zero rows at the bottom.
inline HnfResult hermite_normal_form(const IntMat& a) {
  HnfResult res{a, IntMat::identity(a.rows), {}};
  IntMat& h = res.h;
  IntMat& u = res.u;
  long r = 0;
  for (long c = 0; c < a.cols && r < a.rows; ++c) {
    long piv = -1;
    for (long i = r; i < h.rows; ++i)
      if (h.at(i, c) != 0) { piv = i; break; }
    if (piv < 0) continue;
    if (piv != r) {
      for (long j = 0; j < h.cols; ++j) std::swap(h.at(r, j), h.at(piv, j));
      for (long j = 0; j < u.cols; ++j) std::swap(u.at(r, j), u.at(piv, j));
    }
    // zero out below the pivot with 2x2 unimodular combinations
    for (long i = r + 1; i < h.rows; ++i) {
      if (h.at(i, c) == 0) continue;
      const Int p = h.at(r, c), q = h.at(i, c);
      if (q % p == 0) {
        const Int m = q / p;
        for (long j = 0; j < h.cols; ++j) h.at(i, j) -= m * h.at(r, j);
        for (long j = 0; j < u.cols; ++j) u.at(i, j) -= m * u.at(r, j);
        continue;
      }
      ExtGcd e = ext_gcd(p, q);
      const Int pg = p / e.g, qg = q / e.g;
      for (long j = 0; j < h.cols; ++j) {
        Int hr = h.at(r, j), hi = h.at(i, j);
        h.at(r, j) = e.x * hr + e.y * hi;
        h.at(i, j) = -qg * hr + pg * hi;
      }
      for (long j = 0; j < u.cols; ++j) {
        Int ur = u.at(r, j), ui = u.at(i, j);
        u.at(r, j) = e.x * ur + e.y * ui;
        u.at(i, j) = -qg * ur + pg * ui;
      }
    }
    if (h.at(r, c) < 0) {
      for (long j = 0; j < h.cols; ++j) h.at(r, j) = -h.at(r, j);
      for (long j = 0; j < u.cols; ++j) u.at(r, j) = -u.at(r, j);
    }
    // reduce entries above the pivot into [0, pivot)
    for (long i = 0; i < r; ++i) {
      Int q = fdiv(h.at(i, c), h.at(r, c));
      if (q == 0) continue;
      for (long j = 0; j < h.cols; ++j) h.at(i, j) -= q * h.at(r, j);
      for (long j = 0; j < u.cols; ++j) u.at(i, j) -= q * u.at(r, j);
    }
    res.pivot_cols.push_back(c);
    ++r;
  }
  return res;
}

struct SnfResult {
  IntMat u;  // unimodular row transform
  IntMat d;  // diagonal, d1 | d2 | ..., nonnegative
  IntMat v;  // unimodular column transform, u * a * v = d
};

inline SnfResult smith_normal_form(const IntMat& a) {
  SnfResult res{IntMat::identity(a.rows), a, IntMat::identity(a.cols)};
  IntMat& u = res.u;
  IntMat& d = res.d;
  IntMat& v = res.v;

  // When p | q a plain subtraction clears the entry and leaves the pivot
  // row/column untouched; the full gcd combination is reserved for p ∤ q,
  // where it strictly shrinks the pivot. Without this split the gcd combo
  // can swap rows when q = ±p (ext_gcd(1,1) has x = 0) and the clearing
  // passes re-dirty each other forever.
  auto row_combine = [&](long r1, long r2, const Int& p, const Int& q) {
    if (q % p == 0) {
      const Int m = q / p;
      for (long j = 0; j < d.cols; ++j) d.at(r2, j) -= m * d.at(r1, j);
      for (long j = 0; j < u.cols; ++j) u.at(r2, j) -= m * u.at(r1, j);
      return;
    }
    ExtGcd e = ext_gcd(p, q);
    const Int pg = p / e.g, qg = q / e.g;
    for (long j = 0; j < d.cols; ++j) {
      Int x1 = d.at(r1, j), x2 = d.at(r2, j);
      d.at(r1, j) = e.x * x1 + e.y * x2;
      d.at(r2, j) = -qg * x1 + pg * x2;
    }
    for (long j = 0; j < u.cols; ++j) {
      Int x1 = u.at(r1, j), x2 = u.at(r2, j);
      u.at(r1, j) = e.x * x1 + e.y * x2;
      u.at(r2, j) = -qg * x1 + pg * x2;
    }
  };
  auto col_combine = [&](long c1, long c2, const Int& p, const Int& q) {
    if (q % p == 0) {
      const Int m = q / p;
      for (long i = 0; i < d.rows; ++i) d.at(i, c2) -= m * d.at(i, c1);
      for (long i = 0; i < v.rows; ++i) v.at(i, c2) -= m * v.at(i, c1);
      return;
    }
    ExtGcd e = ext_gcd(p, q);
    const Int pg = p / e.g, qg = q / e.g;
    for (long i = 0; i < d.rows; ++i) {
      Int x1 = d.at(i, c1), x2 = d.at(i, c2);
      d.at(i, c1) = e.x * x1 + e.y * x2;
      d.at(i, c2) = -qg * x1 + pg * x2;
    }
    for (long i = 0; i < v.rows; ++i) {
      Int x1 = v.at(i, c1), x2 = v.at(i, c2);
      v.at(i, c1) = e.x * x1 + e.y * x2;
      v.at(i, c2) = -qg * x1 + pg * x2;
    }
  };

  const long n = std::min(d.rows, d.cols);
  for (long t = 0; t < n; ++t) {
    // locate a nonzero entry of minimal magnitude in the trailing block
    long bi = -1, bj = -1;
    for (long i = t; i < d.rows; ++i)
      for (long j = t; j < d.cols; ++j) {
        if (d.at(i, j) == 0) continue;
        if (bi < 0 || int_abs(d.at(i, j)) < int_abs(d.at(bi, bj))) { bi = i; bj = j; }
      }
    if (bi < 0) break;  // trailing block is zero
    if (bi != t) {
      for (long j = 0; j < d.cols; ++j) std::swap(d.at(t, j), d.at(bi, j));
      for (long j = 0; j < u.cols; ++j) std::swap(u.at(t, j), u.at(bi, j));
    }
    if (bj != t) {
      for (long i = 0; i < d.rows; ++i) std::swap(d.at(i, t), d.at(i, bj));
      for (long i = 0; i < v.rows; ++i) std::swap(v.at(i, t), v.at(i, bj));
    }
    bool again = true;
    while (again) {
      again = false;
      for (long i = t + 1; i < d.rows; ++i)
        if (d.at(i, t) != 0) row_combine(t, i, d.at(t, t), d.at(i, t));
      for (long j = t + 1; j < d.cols; ++j)
        if (d.at(t, j) != 0) { col_combine(t, j, d.at(t, t), d.at(t, j)); again = true; }
      if (again) continue;
      // enforce divisibility: fold any bad entry into the pivot's row
      for (long i = t + 1; i < d.rows && !again; ++i)
        for (long j = t + 1; j < d.cols && !again; ++j)
          if (d.at(i, j) % d.at(t, t) != 0) {
            for (long jj = 0; jj < d.cols; ++jj) d.at(t, jj) += d.at(i, jj);
            for (long jj = 0; jj < u.cols; ++jj) u.at(t, jj) += u.at(i, jj);
            again = true;
          }
    }
  }
  for (long t = 0; t < n; ++t) {
    if (d.at(t, t) < 0) {
      for (long j = 0; j < d.cols; ++j) d.at(t, j) = -d.at(t, j);
      for (long j = 0; j < u.cols; ++j) u.at(t, j) = -u.at(t, j);
    }
  }
  return res;
}

// Invariants of Z^cols / (row lattice of a).
struct CokernelInvariants {
  long free_rank = 0;
  std::vector<Int> torsion;  // invariant factors > 1, in divisibility order

  bool operator==(const CokernelInvariants& o) const {
    return free_rank == o.free_rank && torsion == o.torsion;
  }
};

inline CokernelInvariants cokernel_invariants(const IntMat& a) {
  SnfResult s = smith_normal_form(a);
  CokernelInvariants inv;
  long rank = 0;
  const long n = std::min(a.rows, a.cols);
  for (long t = 0; t < n; ++t) {
    const Int& dt = s.d.at(t, t);
    if (dt == 0) break;
    ++rank;
    if (dt > 1) inv.torsion.push_back(dt);
  }
  inv.free_rank = a.cols - rank;
  return inv;
}

// Basis (as rows) of { x : x * a = 0 }.
inline IntMat left_kernel(const IntMat& a) {
  HnfResult r = hermite_normal_form(a);
  const long rank = static_cast<long>(r.pivot_cols.size());
  IntMat k(a.rows - rank, a.rows);
  for (long i = rank; i < a.rows; ++i)
    for (long j = 0; j < a.rows; ++j) k.at(i - rank, j) = r.u.at(i, j);
  return k;
}

// Solve y * a = x over the integers; nullopt when x is not in the row lattice.
inline std::optional<std::vector<Int>> solve_left(const std::vector<Int>& x, const IntMat& a) {
  if (static_cast<long>(x.size()) != a.cols) throw config_error("solve_left shape mismatch");
  HnfResult r = hermite_normal_form(a);
  std::vector<Int> residual = x;
  std::vector<Int> c(static_cast<size_t>(a.rows));
  for (size_t t = 0; t < r.pivot_cols.size(); ++t) {
    const long pc = r.pivot_cols[t];
    const Int& d = r.h.at(static_cast<long>(t), pc);
    if (residual[pc] % d != 0) return std::nullopt;
    Int q = residual[pc] / d;
    if (q != 0)
      for (long j = 0; j < a.cols; ++j) residual[j] -= q * r.h.at(static_cast<long>(t), j);
    c[t] = q;
  }
  for (const Int& v : residual)
    if (v != 0) return std::nullopt;
  return vec_mat_mul(c, r.u);
}

inline bool in_row_lattice(const std::vector<Int>& x, const IntMat& a) {
  return solve_left(x, a).has_value();
}

// Canonical basis (HNF rows) of the lattice spanned by the rows of a.
inline IntMat row_lattice_basis(const IntMat& a) {
  HnfResult r = hermite_normal_form(a);
  IntMat b(static_cast<long>(r.pivot_cols.size()), a.cols);
  for (long i = 0; i < b.rows; ++i)
    for (long j = 0; j < b.cols; ++j) b.at(i, j) = r.h.at(i, j);
  return b;
}

// Basis of span_Q(rows of s) ∩ Z^n, computed as the double integer kernel:
// the orthogonal-complement lattice of an integer matrix is saturated, and
// taking it twice lands on the saturation of the row span.
inline IntMat lattice_saturation(const IntMat& s) {
  const long n = s.cols;
  IntMat ker = left_kernel(transpose(s));
  if (ker.rows == 0) return IntMat::identity(n);
  IntMat sat = left_kernel(transpose(ker));
  return row_lattice_basis(sat);
}

}  // namespace logbertini
