#pragma once

#include <utility>
#include <vector>

#include "linalg.hpp"
#include "tensor.hpp"

namespace diagex {

// The three d×d matrices carried by a bipartite X with entry(i,k,j,l):
//   a(i,j) = entry(i,j,i,j)   b(i,j) = entry(i,i,j,j)   c(i,j) = entry(i,j,j,i)
// All three patterns coincide on the diagonal, so a, b, c share it.
struct MatrixTriple {
  Matrix a, b, c;

  int dim() const { return static_cast<int>(a.rows()); }
};

struct FactorPair {
  Matrix v, w;
};

inline void require_triple(const MatrixTriple& t) {
  const auto square = [](const Matrix& m) { return m.rows() == m.cols(); };
  if (!square(t.a) || !square(t.b) || !square(t.c) || t.b.rows() != t.a.rows() ||
      t.c.rows() != t.a.rows())
    throw std::invalid_argument("matrix triple must hold three square matrices of one size");
}

inline bool shares_diagonal(const MatrixTriple& t, double tol = kDefaultTol) {
  require_triple(t);
  for (int i = 0; i < t.dim(); ++i)
    if (std::abs(t.a(i, i) - t.b(i, i)) > tol || std::abs(t.a(i, i) - t.c(i, i)) > tol)
      return false;
  return true;
}

inline MatrixTriple triple_of(const Tensor& x) {
  require_bipartite(x);
  const int d = x.shape[0];
  MatrixTriple t{Matrix(d, d), Matrix(d, d), Matrix(d, d)};
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      t.a(i, j) = x.at({i, j, i, j});
      t.b(i, j) = x.at({i, i, j, j});
      t.c(i, j) = x.at({i, j, j, i});
    }
  return t;
}

// The invariant matrix carrying a given triple. Entries off the three index
// patterns vanish.
inline Tensor ldoi_from_triple(const MatrixTriple& t, double tol = kDefaultTol) {
  if (!shares_diagonal(t, tol))
    throw std::invalid_argument("triple diagonals disagree");
  const int d = t.dim();
  Tensor x({d, d, d, d});
  for (int i = 0; i < d; ++i) x.at({i, i, i, i}) = t.a(i, i);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (i == j) continue;
      x.at({i, i, j, j}) = t.b(i, j);
      x.at({i, j, i, j}) = t.a(i, j);
      x.at({i, j, j, i}) = t.c(i, j);
    }
  return x;
}

inline Tensor ldui_from_pair(const Matrix& a, const Matrix& c, double tol = kDefaultTol) {
  return ldoi_from_triple({a, Matrix(a.diagonal().asDiagonal()), c}, tol);
}

inline Tensor cldui_from_pair(const Matrix& a, const Matrix& b, double tol = kDefaultTol) {
  return ldoi_from_triple({a, b, Matrix(a.diagonal().asDiagonal())}, tol);
}

// Averages over sign boxes on all four legs; keeps a, b and c.
inline Tensor project_ldoi(const Tensor& x) { return ldoi_from_triple(triple_of(x)); }

// Average of (U ⊗ U) X (U* ⊗ U*); keeps a and c.
inline Tensor project_ldui(const Tensor& x) {
  MatrixTriple t = triple_of(x);
  t.b = Matrix(t.b.diagonal().asDiagonal());
  return ldoi_from_triple(t);
}

// Average of (U ⊗ U*) X (U* ⊗ U); keeps a and b.
inline Tensor project_cldui(const Tensor& x) {
  MatrixTriple t = triple_of(x);
  t.c = Matrix(t.c.diagonal().asDiagonal());
  return ldoi_from_triple(t);
}

namespace detail {

// a_ij a_ji >= |m_ij|^2 for every pair, up to tol.
inline bool pair_bound(const Matrix& a, const Matrix& m, double tol) {
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if ((a(i, j) * a(j, i)).real() < std::norm(m(i, j)) - tol) return false;
  return true;
}

}  // namespace detail

inline bool is_selfadjoint_triple(const MatrixTriple& t, double tol = kDefaultTol) {
  require_triple(t);
  return t.a.imag().cwiseAbs().maxCoeff() <= tol && is_hermitian(t.b, tol) &&
         is_hermitian(t.c, tol);
}

// X >= 0 in terms of the triple: a entrywise non-negative, b psd, c
// self-adjoint, and the 2x2 blocks [[a_ij, c_ij], [c_ji, a_ji]] psd.
inline bool is_psd_triple(const MatrixTriple& t, double tol = kDefaultTol) {
  require_triple(t);
  return entrywise_nonnegative(t.a, tol) && is_psd(t.b, tol) && is_hermitian(t.c, tol) &&
         detail::pair_bound(t.a, t.c, tol);
}

// The partial transpose swaps b and c, so X^Γ >= 0 trades their roles.
inline bool is_ppt_triple(const MatrixTriple& t, double tol = kDefaultTol) {
  return is_psd_triple({t.a, t.c, t.b}, tol);
}

inline cplx trace_triple(const MatrixTriple& t) {
  require_triple(t);
  // row-major accumulation, the same operand order the big matrix trace sees
  cplx s = 0;
  for (int i = 0; i < t.dim(); ++i)
    for (int j = 0; j < t.dim(); ++j) s += t.a(i, j);
  return s;
}

// Block-diagonal form: head on the span of (i,i) row/column labels, one 2x2
// block per unordered pair i<j.
struct BlockDiagonal {
  Matrix head;
  std::vector<Eigen::Matrix2cd> pairs;
};

inline double trace_norm(const BlockDiagonal& b) {
  double s = trace_norm(b.head);
  for (const auto& p : b.pairs) s += trace_norm(Matrix(p));
  return s;
}

// Realignment r(X)[(i,j),(k,l)] = entry(i,k,j,l) applied to the invariant
// matrix of t, and the same for its partial transpose. Both are block
// diagonal: head a, pair blocks in b and c.
inline std::pair<BlockDiagonal, BlockDiagonal> realign_blocks(const MatrixTriple& t) {
  require_triple(t);
  BlockDiagonal straight{t.a, {}};
  BlockDiagonal swapped{t.a, {}};
  for (int i = 0; i < t.dim(); ++i)
    for (int j = i + 1; j < t.dim(); ++j) {
      Eigen::Matrix2cd p;
      p << t.b(i, j), t.c(i, j), t.c(j, i), t.b(j, i);
      straight.pairs.push_back(p);
      p << t.c(i, j), t.b(i, j), t.b(j, i), t.c(j, i);
      swapped.pairs.push_back(p);
    }
  return {straight, swapped};
}

// Separability test by norms: the entrywise-vs-trace-norm gap of a must
// dominate the gaps of b and of c.
inline bool realignment_criterion(const MatrixTriple& t, double tol = kDefaultTol) {
  require_triple(t);
  const double gap = entrywise_norm(t.a) - trace_norm(t.a);
  return gap >= entrywise_norm(t.b) - trace_norm(t.b) - tol &&
         gap >= entrywise_norm(t.c) - trace_norm(t.c) - tol;
}

// Triple of the separable matrix sum_k v_k v_k* ⊗ w_k w_k* built from the
// columns of v and w:
//   a = (v ⊙ v̄)(w ⊙ w̄)*   b = (v ⊙ w)(v ⊙ w)*   c = (v ⊙ w̄)(v ⊙ w̄)*
inline MatrixTriple triple_from_factors(const FactorPair& p) {
  if (p.v.rows() != p.w.rows() || p.v.cols() != p.w.cols())
    throw std::invalid_argument("factor matrices must share their shape");
  const Matrix vv = p.v.cwiseProduct(p.v.conjugate());
  const Matrix ww = p.w.cwiseProduct(p.w.conjugate());
  const Matrix vw = p.v.cwiseProduct(p.w);
  const Matrix vwc = p.v.cwiseProduct(p.w.conjugate());
  return {vv * ww.adjoint(), vw * vw.adjoint(), vwc * vwc.adjoint()};
}

// Necessary conditions for a triple to come from factors, one flag each.
struct TcpReport {
  bool shared_diagonal;
  bool positivity;      // a entrywise non-negative, b and c psd
  bool pairwise_bound;  // a_ij a_ji >= |b_ij|^2 and >= |c_ij|^2
  bool realignment;

  bool pass() const { return shared_diagonal && positivity && pairwise_bound && realignment; }
};

inline TcpReport tcp_necessary(const MatrixTriple& t, double tol = kDefaultTol) {
  require_triple(t);
  TcpReport r;
  r.shared_diagonal = shares_diagonal(t, tol);
  r.positivity = entrywise_nonnegative(t.a, tol) && is_psd(t.b, tol) && is_psd(t.c, tol);
  r.pairwise_bound = detail::pair_bound(t.a, t.b, tol) && detail::pair_bound(t.a, t.c, tol);
  r.realignment = realignment_criterion(t, tol);
  return r;
}

inline TcpReport pcp_necessary(const Matrix& a, const Matrix& b, double tol = kDefaultTol) {
  return tcp_necessary({a, b, b}, tol);
}

// |x_ii| on the diagonal, -|x_ij| off it.
inline Matrix comparison_matrix(const Matrix& x) {
  if (x.rows() != x.cols()) throw std::invalid_argument("comparison_matrix: matrix not square");
  Matrix m(x.rows(), x.cols());
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < x.cols(); ++j) m(i, j) = (i == j ? 1.0 : -1.0) * std::abs(x(i, j));
  return m;
}

// Certificate: if (a,b,b) already meets the diagonal, positivity and pairwise
// bounds, a psd comparison matrix of b makes the triple a factor triple.
inline bool tcp_sufficient_comparison(const Matrix& a, const Matrix& b,
                                      double tol = kDefaultTol) {
  const TcpReport r = tcp_necessary({a, b, b}, tol);
  if (!r.shared_diagonal || !r.positivity || !r.pairwise_bound)
    throw std::invalid_argument(
        "comparison certificate needs the diagonal, positivity and pairwise bounds to hold");
  return is_psd(comparison_matrix(b), tol);
}

// At d = 2 the diagonal, positivity and pairwise bounds decide exactly.
inline bool d2_tcp_decision(const MatrixTriple& t, double tol = kDefaultTol) {
  require_triple(t);
  if (t.dim() != 2) throw std::invalid_argument("decision applies to 2x2 triples only");
  const TcpReport r = tcp_necessary(t, tol);
  return r.shared_diagonal && r.positivity && r.pairwise_bound;
}

// (a + p, b + diag(p), c + diag(p)); keeps factor triples factor triples when
// p is entrywise non-negative.
inline MatrixTriple add_nonnegative(const MatrixTriple& t, const Matrix& p,
                                    double tol = kDefaultTol) {
  require_triple(t);
  if (p.rows() != t.dim() || p.cols() != t.dim())
    throw std::invalid_argument("padding matrix has the wrong size");
  if (!entrywise_nonnegative(p, tol))
    throw std::invalid_argument("padding matrix must be entrywise non-negative");
  const Matrix dp = Matrix(p.diagonal().asDiagonal());
  return {t.a + p, t.b + dp, t.c + dp};
}

}  // namespace diagex
