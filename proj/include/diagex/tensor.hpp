#pragma once

#include <complex>
#include <vector>

#include "common.hpp"

namespace diagex {

using cplx = std::complex<double>;

inline size_t shape_size(const std::vector<int>& shape) {
  size_t s = 1;
  for (int d : shape) {
    if (d < 1) throw std::invalid_argument("tensor dimensions must be positive");
    s *= static_cast<size_t>(d);
  }
  return s;
}

// Dense, row-major over the legs. Rank 0 is a scalar with one entry.
struct Tensor {
  std::vector<int> shape;
  std::vector<cplx> data;

  Tensor() : data(1, cplx(0)) {}
  explicit Tensor(std::vector<int> s) : shape(std::move(s)), data(shape_size(shape), cplx(0)) {}
  Tensor(std::vector<int> s, std::vector<cplx> d) : shape(std::move(s)), data(std::move(d)) {
    if (data.size() != shape_size(shape))
      throw std::invalid_argument("tensor data length does not match shape");
  }

  int rank() const { return static_cast<int>(shape.size()); }
  size_t size() const { return data.size(); }

  size_t offset(const std::vector<int>& idx) const {
    size_t off = 0;
    for (size_t a = 0; a < shape.size(); ++a) off = off * static_cast<size_t>(shape[a]) + static_cast<size_t>(idx[a]);
    return off;
  }
  cplx& at(const std::vector<int>& idx) { return data[offset(idx)]; }
  const cplx& at(const std::vector<int>& idx) const { return data[offset(idx)]; }
};

// Odometer over a shape; runs fn on every multi-index.
template <class Fn>
void for_each_index(const std::vector<int>& shape, Fn&& fn) {
  std::vector<int> idx(shape.size(), 0);
  while (true) {
    fn(std::as_const(idx));
    size_t a = shape.size();
    while (a > 0) {
      --a;
      if (++idx[a] < shape[a]) break;
      idx[a] = 0;
      if (a == 0) return;
    }
    if (shape.empty()) return;
  }
}

inline Tensor delta_tensor(int arity, int d) {
  if (arity < 1) throw std::invalid_argument("delta arity must be at least 1");
  Tensor t(std::vector<int>(static_cast<size_t>(arity), d));
  std::vector<int> idx(static_cast<size_t>(arity));
  for (int v = 0; v < d; ++v) {
    std::fill(idx.begin(), idx.end(), v);
    t.at(idx) = 1.0;
  }
  return t;
}

inline Tensor permute_axes(const Tensor& t, const std::vector<int>& perm) {
  if (perm.size() != t.shape.size()) throw std::invalid_argument("permute_axes: rank mismatch");
  std::vector<int> out_shape(perm.size());
  for (size_t a = 0; a < perm.size(); ++a) out_shape[a] = t.shape[static_cast<size_t>(perm[a])];
  Tensor out(out_shape);
  std::vector<int> src(perm.size());
  for_each_index(out_shape, [&](const std::vector<int>& idx) {
    for (size_t a = 0; a < perm.size(); ++a) src[static_cast<size_t>(perm[a])] = idx[a];
    out.at(idx) = t.at(src);
  });
  return out;
}

inline Tensor reshape(const Tensor& t, std::vector<int> new_shape) {
  if (shape_size(new_shape) != t.size()) throw std::invalid_argument("reshape: size mismatch");
  return Tensor(std::move(new_shape), t.data);
}

inline Tensor tensor_product(const Tensor& a, const Tensor& b) {
  std::vector<int> shape = a.shape;
  shape.insert(shape.end(), b.shape.begin(), b.shape.end());
  Tensor out(std::move(shape));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) out.data[i * b.size() + j] = a.data[i] * b.data[j];
  return out;
}

inline Tensor conjugate(const Tensor& t) {
  Tensor out = t;
  for (auto& v : out.data) v = std::conj(v);
  return out;
}

// ---- matrix views (rank-2 tensors) ----------------------------------------

inline void require_matrix(const Tensor& t) {
  if (t.rank() != 2) throw std::invalid_argument("expected a rank-2 tensor");
}

inline Tensor matrix(int rows, int cols) { return Tensor({rows, cols}); }

inline Tensor transpose(const Tensor& m) {
  require_matrix(m);
  return permute_axes(m, {1, 0});
}

inline Tensor matmul(const Tensor& a, const Tensor& b) {
  require_matrix(a);
  require_matrix(b);
  if (a.shape[1] != b.shape[0]) throw std::invalid_argument("matmul: inner dimensions differ");
  Tensor out({a.shape[0], b.shape[1]});
  const int n = a.shape[0], k = a.shape[1], m = b.shape[1];
  for (int i = 0; i < n; ++i)
    for (int t = 0; t < k; ++t) {
      const cplx av = a.data[static_cast<size_t>(i * k + t)];
      if (av == cplx(0)) continue;
      for (int j = 0; j < m; ++j)
        out.data[static_cast<size_t>(i * m + j)] += av * b.data[static_cast<size_t>(t * m + j)];
    }
  return out;
}

inline Tensor diag_vector(const Tensor& m) {
  require_matrix(m);
  if (m.shape[0] != m.shape[1]) throw std::invalid_argument("diag_vector: matrix not square");
  Tensor v({m.shape[0]});
  for (int i = 0; i < m.shape[0]; ++i) v.data[static_cast<size_t>(i)] = m.at({i, i});
  return v;
}

inline Tensor diag_embed(const Tensor& v) {
  if (v.rank() != 1) throw std::invalid_argument("diag_embed: expected a vector");
  const int d = v.shape[0];
  Tensor m({d, d});
  for (int i = 0; i < d; ++i) m.at({i, i}) = v.data[static_cast<size_t>(i)];
  return m;
}

inline Tensor diag_project(const Tensor& m) { return diag_embed(diag_vector(m)); }

// ---- bipartite tensors -----------------------------------------------------
//
// A matrix on M_d ⊗ M_d is kept as a shape-(d,d,d,d) tensor with
// entry(i,k,j,l) = <e_i ⊗ e_k| X |e_j ⊗ e_l>; the d²×d² row-major matrix with
// row (i,k) and column (j,l) has the same memory layout, so the two views are
// reshapes of one another.

inline void require_bipartite(const Tensor& t) {
  if (t.rank() != 4 || t.shape[0] != t.shape[1] || t.shape[0] != t.shape[2] ||
      t.shape[0] != t.shape[3])
    throw std::invalid_argument("expected a shape-(d,d,d,d) tensor");
}

inline Tensor bipartite_from_matrix(const Tensor& m) {
  require_matrix(m);
  const int d2 = m.shape[0];
  int d = 0;
  while (d * d < d2) ++d;
  if (d * d != d2 || m.shape[1] != d2)
    throw std::invalid_argument("bipartite_from_matrix: needs a square d²×d² matrix");
  return reshape(m, {d, d, d, d});
}

inline Tensor matrix_from_bipartite(const Tensor& t) {
  require_bipartite(t);
  const int d = t.shape[0];
  return reshape(t, {d * d, d * d});
}

// [id ⊗ transp]: swaps the roles of k and l.
inline Tensor partial_transpose(const Tensor& t) {
  require_bipartite(t);
  const int d = t.shape[0];
  Tensor out(t.shape);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k)
      for (int j = 0; j < d; ++j)
        for (int l = 0; l < d; ++l) out.at({i, k, j, l}) = t.at({i, l, j, k});
  return out;
}

// factor 1 traces the (i,j) pair, factor 2 the (k,l) pair.
inline Tensor partial_trace(const Tensor& t, int factor) {
  require_bipartite(t);
  const int d = t.shape[0];
  Tensor out({d, d});
  if (factor == 1) {
    for (int k = 0; k < d; ++k)
      for (int l = 0; l < d; ++l) {
        cplx s = 0;
        for (int i = 0; i < d; ++i) s += t.at({i, k, i, l});
        out.at({k, l}) = s;
      }
  } else if (factor == 2) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        cplx s = 0;
        for (int k = 0; k < d; ++k) s += t.at({i, k, j, k});
        out.at({i, j}) = s;
      }
  } else {
    throw std::invalid_argument("partial_trace: factor must be 1 or 2");
  }
  return out;
}

inline cplx trace(const Tensor& m) {
  require_matrix(m);
  if (m.shape[0] != m.shape[1]) throw std::invalid_argument("trace: matrix not square");
  cplx s = 0;
  for (int i = 0; i < m.shape[0]; ++i) s += m.at({i, i});
  return s;
}

inline double max_abs_diff(const Tensor& a, const Tensor& b) {
  if (a.shape != b.shape) throw std::invalid_argument("max_abs_diff: shapes differ");
  double m = 0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
  return m;
}

}  // namespace diagex
