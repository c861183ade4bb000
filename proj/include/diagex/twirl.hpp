#pragma once

#include "ldoi.hpp"
#include "linalg.hpp"
#include "tensor.hpp"

namespace diagex {

// Choi matrix of a linear map on d×d matrices, J = sum Phi(e_i e_j*) ⊗
// e_i e_j*, kept in the bipartite layout. entry(i,k,j,l) = Phi(e_k e_l*)(i,j).
struct ChoiMatrix {
  Tensor j;

  int dim() const { return j.shape[0]; }
};

// Phi(X) = [id ⊗ Tr](J (I ⊗ X^T)), which contracts to
// Phi(X)(i,j) = sum_{k,l} entry(i,k,j,l) X(k,l).
inline Matrix apply_map(const ChoiMatrix& m, const Matrix& x) {
  require_bipartite(m.j);
  const int d = m.dim();
  if (x.rows() != d || x.cols() != d)
    throw std::invalid_argument("apply_map: input size does not match the map");
  Matrix out = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      cplx s = 0;
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) s += m.j.at({i, k, j, l}) * x(k, l);
      out(i, j) = s;
    }
  return out;
}

// V* J V for the copy isometry V e_i = e_i ⊗ e_i; the matrix that multiplies
// entrywise when the map is averaged between independent row and column
// phases.
inline Matrix schur_multiplier(const ChoiMatrix& m) {
  require_bipartite(m.j);
  return triple_of(m.j).b;
}

// Average U Phi(V* X V) U* over independent diagonal U, V. The result acts as
// X -> diag(Phi(diag(X))), so its Choi matrix keeps only the a pattern.
inline ChoiMatrix twirl_equal(const ChoiMatrix& m) {
  require_bipartite(m.j);
  const MatrixTriple t = triple_of(m.j);
  const Matrix da = Matrix(t.a.diagonal().asDiagonal());
  return {ldoi_from_triple({t.a, da, da})};
}

// Average U Phi(U* X V*) V. The result is the Schur multiplier
// X -> [V* J V] ⊙ X; its Choi matrix keeps only the b pattern.
inline ChoiMatrix twirl_parallel(const ChoiMatrix& m) {
  require_bipartite(m.j);
  const MatrixTriple t = triple_of(m.j);
  const Matrix db = Matrix(t.b.diagonal().asDiagonal());
  return {ldoi_from_triple({db, t.b, db})};
}

// Average U Phi(V* X U*) V. The result is X -> [V* J^Γ V] ⊙ X^T; its Choi
// matrix keeps only the c pattern.
inline ChoiMatrix twirl_cross(const ChoiMatrix& m) {
  require_bipartite(m.j);
  const MatrixTriple t = triple_of(m.j);
  const Matrix dc = Matrix(t.c.diagonal().asDiagonal());
  return {ldoi_from_triple({dc, dc, t.c})};
}

}  // namespace diagex
