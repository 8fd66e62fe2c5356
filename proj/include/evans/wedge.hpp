#pragma once

#include <cstdint>
#include <vector>

#include "evans/linalg.hpp"

namespace evans {

inline std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Coordinates of a degree-k exterior vector over C^n, in lexicographic
// multi-index order.
struct WedgeVector {
  int n = 0;
  int k = 0;
  CVector coords;
};

namespace detail {

// Lexicographically ordered k-subsets of {0,...,n-1}.
inline std::vector<std::vector<int>> combinations(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> c(k);
  for (int i = 0; i < k; ++i) c[i] = i;
  while (true) {
    out.push_back(c);
    int i = k - 1;
    while (i >= 0 && c[i] == n - k + i) --i;
    if (i < 0) break;
    ++c[i];
    for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
  }
  return out;
}

// Lexicographic rank of a sorted k-subset of {0,...,n-1}.
inline std::int64_t combination_rank(const std::vector<int>& I, int n) {
  const int k = static_cast<int>(I.size());
  std::int64_t rank = 0;
  int prev = -1;
  for (int i = 0; i < k; ++i) {
    for (int v = prev + 1; v < I[i]; ++v) rank += binomial(n - 1 - v, k - 1 - i);
    prev = I[i];
  }
  return rank;
}

}  // namespace detail

// Infinitesimal k-th compound of A: the generator of the flow induced on
// k x k minors by W' = A W. Row I, column J is nonzero only when J = I or J
// replaces a single index of I; the diagonal entry is the partial trace.
inline CMatrix compound_lift(const CMatrix& A, int k) {
  if (A.rows() != A.cols()) throw DimensionError("compound_lift: matrix must be square");
  const int n = static_cast<int>(A.rows());
  if (k < 1 || k > n) throw ParameterError("compound_lift: need 1 <= k <= n");
  const auto combos = detail::combinations(n, k);
  const auto N = static_cast<Eigen::Index>(combos.size());
  CMatrix L = CMatrix::Zero(N, N);
  std::vector<char> in_I(n);
  for (Eigen::Index r = 0; r < N; ++r) {
    const auto& I = combos[static_cast<std::size_t>(r)];
    std::fill(in_I.begin(), in_I.end(), 0);
    Complex diag(0.0, 0.0);
    for (int a : I) {
      in_I[a] = 1;
      diag += A(a, a);
    }
    L(r, r) = diag;
    std::vector<int> J(k);
    for (int p = 0; p < k; ++p) {
      const int a = I[p];
      for (int b = 0; b < n; ++b) {
        if (in_I[b]) continue;
        // J = sorted(I with a replaced by b); s = position of b in J
        int s = 0;
        for (int q = 0; q < k; ++q) {
          if (q == p) continue;
          if (I[q] < b) ++s;
        }
        int idx = 0;
        for (int q = 0; q < k; ++q) {
          if (q == p) continue;
          if (idx == s) ++idx;
          J[idx++] = I[q];
        }
        J[s] = b;
        const double sign = ((p - s) % 2 == 0) ? 1.0 : -1.0;
        L(r, detail::combination_rank(J, n)) = sign * A(a, b);
      }
    }
  }
  return L;
}

// All k x k row minors of an n x k matrix, lexicographic multi-index order.
inline WedgeVector minors_vector(const CMatrix& W) {
  const int n = static_cast<int>(W.rows());
  const int k = static_cast<int>(W.cols());
  if (n < k) throw DimensionError("minors_vector: need rows >= cols");
  const auto combos = detail::combinations(n, k);
  WedgeVector v;
  v.n = n;
  v.k = k;
  v.coords.resize(static_cast<Eigen::Index>(combos.size()));
  CMatrix sub(k, k);
  for (std::size_t r = 0; r < combos.size(); ++r) {
    for (int i = 0; i < k; ++i) sub.row(i) = W.row(combos[r][i]);
    v.coords(static_cast<Eigen::Index>(r)) = det(sub);
  }
  return v;
}

// Pairing of complementary-degree exterior vectors: the coefficient of
// e_1 ^ ... ^ e_n in u ^ v. Satisfies
// wedge_pair(minors_vector(W+), minors_vector(W-)) = det(W+ | W-).
inline Complex wedge_pair(const WedgeVector& u, const WedgeVector& v) {
  if (u.n != v.n || u.k + v.k != u.n)
    throw DimensionError("wedge_pair: degrees must sum to the ambient dimension");
  const int n = u.n, k = u.k;
  const auto combos = detail::combinations(n, k);
  Complex total(0.0, 0.0);
  std::vector<int> comp(n - k);
  std::vector<char> in_I(n);
  for (std::size_t r = 0; r < combos.size(); ++r) {
    const auto& I = combos[r];
    std::fill(in_I.begin(), in_I.end(), 0);
    int tau = 0;
    for (int i = 0; i < k; ++i) {
      in_I[I[i]] = 1;
      tau += I[i] - i;
    }
    int idx = 0;
    for (int b = 0; b < n; ++b)
      if (!in_I[b]) comp[idx++] = b;
    const double sign = (tau % 2 == 0) ? 1.0 : -1.0;
    total += sign * u.coords(static_cast<Eigen::Index>(r)) *
             v.coords(detail::combination_rank(comp, n));
  }
  return total;
}

}  // namespace evans
