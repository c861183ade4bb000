#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "partition.hpp"

namespace diagex {

// f is stored against canonical block order: alpha's block k maps to beta's
// block f[k]. Size preservation |f(a)| == |a| is a construction invariant.
struct UniformBlockPermutation {
  SetPartition alpha;
  SetPartition beta;
  std::vector<int> f;

  int n() const { return alpha.n; }
  bool operator==(const UniformBlockPermutation&) const = default;
  bool operator<(const UniformBlockPermutation& o) const {
    if (!(alpha == o.alpha)) return alpha < o.alpha;
    if (!(beta == o.beta)) return beta < o.beta;
    return f < o.f;
  }
};

using UBP = UniformBlockPermutation;

inline UBP make_ubp(SetPartition alpha, SetPartition beta, std::vector<int> f) {
  if (alpha.n != beta.n) throw std::invalid_argument("ubp: ground sets differ");
  if (f.size() != alpha.blocks.size() || alpha.blocks.size() != beta.blocks.size())
    throw std::invalid_argument("ubp: f must pair the blocks");
  std::vector<char> hit(f.size(), 0);
  for (size_t k = 0; k < f.size(); ++k) {
    const int img = f[k];
    if (img < 0 || static_cast<size_t>(img) >= f.size() || hit[static_cast<size_t>(img)])
      throw std::invalid_argument("ubp: f is not a bijection");
    hit[static_cast<size_t>(img)] = 1;
    if (alpha.blocks[k].size() != beta.blocks[static_cast<size_t>(img)].size())
      throw std::invalid_argument("ubp: f is not size-preserving");
  }
  return UBP{std::move(alpha), std::move(beta), std::move(f)};
}

inline UBP identity_ubp(int n) {
  std::vector<std::vector<int>> blocks;
  std::vector<int> f;
  for (int e = 1; e <= n; ++e) {
    blocks.push_back({e});
    f.push_back(e - 1);
  }
  auto p = make_set_partition(n, blocks);
  return UBP{p, p, std::move(f)};
}

inline UBP idempotent_of(const SetPartition& alpha) {
  std::vector<int> f(alpha.blocks.size());
  std::iota(f.begin(), f.end(), 0);
  return UBP{alpha, alpha, std::move(f)};
}

template <class Fn>
void for_each_ubp(int n, Fn&& fn) {
  if (n < 1 || n > kUbpCap)
    throw std::invalid_argument("ubp ground-set size out of range");
  const auto parts = enumerate_set_partitions(n);
  std::map<std::vector<int>, std::vector<size_t>> by_type;
  std::vector<std::vector<int>> sizes(parts.size());
  for (size_t i = 0; i < parts.size(); ++i) {
    std::vector<int> key;
    for (const auto& b : parts[i].blocks) key.push_back(static_cast<int>(b.size()));
    std::sort(key.begin(), key.end());
    sizes[i] = key;
    by_type[key].push_back(i);
  }
  for (size_t ai = 0; ai < parts.size(); ++ai) {
    const auto& alpha = parts[ai];
    for (size_t bi : by_type[sizes[ai]]) {
      const auto& beta = parts[bi];
      // block indices grouped by size, in canonical order
      std::map<size_t, std::vector<int>> a_class, b_class;
      for (size_t k = 0; k < alpha.blocks.size(); ++k)
        a_class[alpha.blocks[k].size()].push_back(static_cast<int>(k));
      for (size_t k = 0; k < beta.blocks.size(); ++k)
        b_class[beta.blocks[k].size()].push_back(static_cast<int>(k));
      std::vector<int> f(alpha.blocks.size());
      std::vector<std::pair<const std::vector<int>*, std::vector<int>>> classes;
      for (auto& [sz, a_idx] : a_class)
        classes.emplace_back(&a_idx, b_class[sz]);
      auto rec = [&](auto&& self, size_t c) -> void {
        if (c == classes.size()) {
          fn(std::as_const(alpha), std::as_const(beta), std::as_const(f));
          return;
        }
        auto& [a_idx, perm] = classes[c];
        std::sort(perm.begin(), perm.end());
        do {
          for (size_t t = 0; t < a_idx->size(); ++t) f[static_cast<size_t>((*a_idx)[t])] = perm[t];
          self(self, c + 1);
        } while (std::next_permutation(perm.begin(), perm.end()));
      };
      rec(rec, 0);
    }
  }
}

inline std::vector<UBP> enumerate_ubps(int n) {
  std::vector<UBP> out;
  for_each_ubp(n, [&](const SetPartition& a, const SetPartition& b, const std::vector<int>& f) {
    out.push_back(UBP{a, b, f});
  });
  return out;
}

// (alpha',beta',f') <= (alpha,beta,f): both partitions refine and the block
// bijections are compatible on containments.
inline bool refines_ubp(const UBP& finer, const UBP& coarser) {
  if (finer.n() != coarser.n()) throw std::invalid_argument("refines_ubp: ground sets differ");
  if (!refines(finer.alpha, coarser.alpha) || !refines(finer.beta, coarser.beta)) return false;
  const auto a_idx = block_index_of(coarser.alpha);
  const auto b_idx = block_index_of(coarser.beta);
  for (size_t j = 0; j < finer.alpha.blocks.size(); ++j) {
    const int host = a_idx[static_cast<size_t>(finer.alpha.blocks[j].front())];
    const int img_host = b_idx[static_cast<size_t>(finer.beta.blocks[static_cast<size_t>(finer.f[j])].front())];
    if (img_host != coarser.f[static_cast<size_t>(host)]) return false;
  }
  return true;
}

// g après h: blocks of the result are the minimal unions of h's alpha-blocks
// whose image under h.f is also a union of g's alpha-blocks. Those unions are
// exactly the blocks of join(h.beta, g.alpha).
inline UBP ubp_compose(const UBP& g, const UBP& h) {
  if (g.n() != h.n()) throw std::invalid_argument("ubp_compose: ground sets differ");
  const auto mid = join(h.beta, g.alpha);
  const auto comp_of = block_index_of(mid);
  const size_t ncomp = mid.blocks.size();
  std::vector<std::vector<int>> gamma(ncomp), delta(ncomp);
  for (size_t k = 0; k < h.alpha.blocks.size(); ++k) {
    const int c = comp_of[static_cast<size_t>(h.beta.blocks[static_cast<size_t>(h.f[k])].front())];
    auto& g_c = gamma[static_cast<size_t>(c)];
    g_c.insert(g_c.end(), h.alpha.blocks[k].begin(), h.alpha.blocks[k].end());
  }
  for (size_t j = 0; j < g.alpha.blocks.size(); ++j) {
    const int c = comp_of[static_cast<size_t>(g.alpha.blocks[j].front())];
    const auto& img = g.beta.blocks[static_cast<size_t>(g.f[j])];
    auto& d_c = delta[static_cast<size_t>(c)];
    d_c.insert(d_c.end(), img.begin(), img.end());
  }
  std::vector<std::pair<std::vector<int>, std::vector<int>>> paired;
  for (size_t c = 0; c < ncomp; ++c) {
    std::sort(gamma[c].begin(), gamma[c].end());
    std::sort(delta[c].begin(), delta[c].end());
    paired.emplace_back(std::move(gamma[c]), std::move(delta[c]));
  }
  std::sort(paired.begin(), paired.end(),
            [](const auto& x, const auto& y) { return x.first.front() < y.first.front(); });
  std::vector<std::vector<int>> out_alpha, out_beta;
  for (auto& [ga, de] : paired) out_alpha.push_back(ga), out_beta.push_back(de);
  auto alpha = make_set_partition(g.n(), out_alpha);
  auto beta_can = make_set_partition(g.n(), out_beta);
  const auto b_idx = block_index_of(beta_can);
  std::vector<int> f(paired.size());
  for (size_t k = 0; k < paired.size(); ++k)
    f[k] = b_idx[static_cast<size_t>(paired[k].second.front())];
  return UBP{std::move(alpha), std::move(beta_can), std::move(f)};
}

inline UBP ubp_inverse(const UBP& x) {
  std::vector<int> inv(x.f.size());
  for (size_t k = 0; k < x.f.size(); ++k) inv[static_cast<size_t>(x.f[k])] = static_cast<int>(k);
  return UBP{x.beta, x.alpha, std::move(inv)};
}

// mu of the UBP order interval equals mu of the alpha interval (and the beta
// interval gives the same value).
inline Weight moebius_ubp(const UBP& finer, const UBP& coarser) {
  if (!refines_ubp(finer, coarser))
    throw std::invalid_argument("moebius_ubp: arguments not comparable");
  return moebius_partition(finer.alpha, coarser.alpha);
}

inline Weight cf_u(const UBP& x) {
  Weight v = 1;
  for (const auto& b : x.alpha.blocks) v *= cf_u_single(static_cast<int>(b.size()));
  return v;
}

// ---- text form: "12|3/23|1" pairs the k-th written alpha block with the
// k-th written beta block (beta written in image order).

inline std::string print_ubp(const UBP& x) {
  std::vector<std::vector<int>> beta_in_image_order;
  for (size_t k = 0; k < x.f.size(); ++k)
    beta_in_image_order.push_back(x.beta.blocks[static_cast<size_t>(x.f[k])]);
  return print_blocks(x.alpha.blocks, x.n()) + "/" + print_blocks(beta_in_image_order, x.n());
}

inline UBP parse_ubp(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) throw std::invalid_argument("ubp text needs '/'");
  auto a_blocks = detail::parse_block_list(text.substr(0, slash));
  auto b_blocks = detail::parse_block_list(text.substr(slash + 1));
  if (a_blocks.size() != b_blocks.size())
    throw std::invalid_argument("ubp text: block counts differ");
  std::vector<std::pair<std::vector<int>, std::vector<int>>> paired;
  for (size_t k = 0; k < a_blocks.size(); ++k) {
    std::sort(a_blocks[k].begin(), a_blocks[k].end());
    std::sort(b_blocks[k].begin(), b_blocks[k].end());
    paired.emplace_back(std::move(a_blocks[k]), std::move(b_blocks[k]));
  }
  std::sort(paired.begin(), paired.end(),
            [](const auto& x, const auto& y) { return x.first.front() < y.first.front(); });
  int n = 0;
  std::vector<std::vector<int>> alpha_blocks, beta_blocks;
  for (auto& [a, b] : paired) {
    n += static_cast<int>(a.size());
    alpha_blocks.push_back(a);
    beta_blocks.push_back(b);
  }
  auto alpha = make_set_partition(n, alpha_blocks);
  auto beta = make_set_partition(n, beta_blocks);
  const auto b_idx = block_index_of(beta);
  std::vector<int> f(paired.size());
  for (size_t k = 0; k < paired.size(); ++k)
    f[k] = b_idx[static_cast<size_t>(paired[k].second.front())];
  return make_ubp(std::move(alpha), std::move(beta), std::move(f));
}

}  // namespace diagex
