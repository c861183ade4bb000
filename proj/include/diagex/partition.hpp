#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "common.hpp"

namespace diagex {

// Canonical form: each block sorted ascending, blocks sorted by least element.
// Every constructor and enumerator below maintains this, so operator== is
// structural equality of partitions.
struct SetPartition {
  int n = 0;
  std::vector<std::vector<int>> blocks;

  bool operator==(const SetPartition&) const = default;
  bool operator<(const SetPartition& o) const {
    if (n != o.n) return n < o.n;
    return blocks < o.blocks;
  }
};

// Even partitions share the representation; evenness is checked by the
// operations that require it.
using EvenPartition = SetPartition;

// Type lambda = 1^{m1} 2^{m2} ... ; mult[i] is the number of blocks of size i.
struct IntegerPartitionType {
  int n = 0;
  std::vector<int> mult;  // indexed 0..n, entry 0 unused

  int num_parts() const { return std::accumulate(mult.begin(), mult.end(), 0); }
  bool operator==(const IntegerPartitionType&) const = default;
};

inline void canonicalize(SetPartition& p) {
  for (auto& b : p.blocks) std::sort(b.begin(), b.end());
  std::sort(p.blocks.begin(), p.blocks.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
}

inline SetPartition make_set_partition(int n, std::vector<std::vector<int>> blocks) {
  SetPartition p{n, std::move(blocks)};
  for (const auto& b : p.blocks)
    if (b.empty()) throw std::invalid_argument("empty block");
  canonicalize(p);
  std::vector<char> seen(static_cast<size_t>(n) + 1, 0);
  int count = 0;
  for (const auto& b : p.blocks)
    for (int e : b) {
      if (e < 1 || e > n || seen[static_cast<size_t>(e)])
        throw std::invalid_argument("blocks must partition 1..n");
      seen[static_cast<size_t>(e)] = 1;
      ++count;
    }
  if (count != n) throw std::invalid_argument("blocks must cover 1..n");
  return p;
}

// element -> index of its block in canonical order
inline std::vector<int> block_index_of(const SetPartition& p) {
  std::vector<int> idx(static_cast<size_t>(p.n) + 1, -1);
  for (size_t i = 0; i < p.blocks.size(); ++i)
    for (int e : p.blocks[i]) idx[static_cast<size_t>(e)] = static_cast<int>(i);
  return idx;
}

inline IntegerPartitionType type_of(const SetPartition& p) {
  IntegerPartitionType t;
  t.n = p.n;
  t.mult.assign(static_cast<size_t>(p.n) + 1, 0);
  for (const auto& b : p.blocks) ++t.mult[b.size()];
  return t;
}

inline bool is_even_partition(const SetPartition& p) {
  return std::all_of(p.blocks.begin(), p.blocks.end(),
                     [](const auto& b) { return b.size() % 2 == 0; });
}

// Visits every partition of [n] in canonical form. Blocks are created in
// order of their least element, so the canonical invariant holds throughout.
template <class Fn>
void for_each_set_partition(int n, Fn&& fn) {
  if (n < 1 || n > kPartitionCap)
    throw std::invalid_argument("partition ground-set size out of range");
  SetPartition p;
  p.n = n;
  auto rec = [&](auto&& self, int k) -> void {
    if (k > n) {
      fn(std::as_const(p));
      return;
    }
    // indexed loop: deeper calls may reallocate p.blocks
    for (size_t i = 0; i < p.blocks.size(); ++i) {
      p.blocks[i].push_back(k);
      self(self, k + 1);
      p.blocks[i].pop_back();
    }
    p.blocks.push_back({k});
    self(self, k + 1);
    p.blocks.pop_back();
  };
  rec(rec, 1);
}

inline std::vector<SetPartition> enumerate_set_partitions(int n) {
  std::vector<SetPartition> out;
  for_each_set_partition(n, [&](const SetPartition& p) { out.push_back(p); });
  return out;
}

// The least unplaced element starts each block; its block-mates are chosen as
// an odd-size subset of the remaining elements, so all blocks are even.
template <class Fn>
void for_each_even_partition(int two_n, Fn&& fn) {
  if (two_n < 1 || two_n > kPartitionCap)
    throw std::invalid_argument("even-partition ground-set size out of range");
  if (two_n % 2 != 0)
    throw std::invalid_argument("even partitions need an even ground set");
  SetPartition p;
  p.n = two_n;
  auto rec = [&](auto&& self, const std::vector<int>& rem) -> void {
    if (rem.empty()) {
      fn(std::as_const(p));
      return;
    }
    const int m = rem.front();
    const int r = static_cast<int>(rem.size()) - 1;
    for (unsigned mask = 0; mask < (1u << r); ++mask) {
      if (__builtin_popcount(mask) % 2 == 0) continue;
      std::vector<int> block{m}, rest;
      for (int i = 0; i < r; ++i)
        ((mask >> i) & 1u ? block : rest).push_back(rem[static_cast<size_t>(i) + 1]);
      p.blocks.push_back(std::move(block));
      self(self, rest);
      p.blocks.pop_back();
    }
  };
  std::vector<int> all(static_cast<size_t>(two_n));
  std::iota(all.begin(), all.end(), 1);
  rec(rec, all);
}

inline std::vector<EvenPartition> enumerate_even_partitions(int two_n) {
  std::vector<EvenPartition> out;
  for_each_even_partition(two_n, [&](const EvenPartition& p) { out.push_back(p); });
  return out;
}

inline bool refines(const SetPartition& finer, const SetPartition& coarser) {
  if (finer.n != coarser.n)
    throw std::invalid_argument("refines: ground sets differ");
  const auto idx = block_index_of(coarser);
  for (const auto& b : finer.blocks) {
    const int home = idx[static_cast<size_t>(b.front())];
    for (int e : b)
      if (idx[static_cast<size_t>(e)] != home) return false;
  }
  return true;
}

inline SetPartition join(const SetPartition& a, const SetPartition& b) {
  if (a.n != b.n) throw std::invalid_argument("join: ground sets differ");
  std::vector<int> parent(static_cast<size_t>(a.n) + 1);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<size_t>(x)] != x) {
      parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
      x = parent[static_cast<size_t>(x)];
    }
    return x;
  };
  auto unite = [&](int x, int y) { parent[static_cast<size_t>(find(x))] = find(y); };
  for (const auto* part : {&a, &b})
    for (const auto& blk : part->blocks)
      for (size_t i = 1; i < blk.size(); ++i) unite(blk[i], blk[0]);
  std::vector<std::vector<int>> groups(static_cast<size_t>(a.n) + 1);
  for (int e = 1; e <= a.n; ++e) groups[static_cast<size_t>(find(e))].push_back(e);
  std::vector<std::vector<int>> blocks;
  for (auto& g : groups)
    if (!g.empty()) blocks.push_back(std::move(g));
  return make_set_partition(a.n, std::move(blocks));
}

// Integer partitions of n, parts listed descending.
template <class Fn>
void for_each_integer_partition(int n, Fn&& fn) {
  std::vector<int> parts;
  auto rec = [&](auto&& self, int rem, int maxp) -> void {
    if (rem == 0) {
      fn(std::as_const(parts));
      return;
    }
    for (int p = std::min(rem, maxp); p >= 1; --p) {
      parts.push_back(p);
      self(self, rem - p, p);
      parts.pop_back();
    }
  };
  rec(rec, n, n);
}

enum class CountKind { partition, ordered, ubp };

// P_n(lambda) = n! / (prod m_i! * prod (i!)^{m_i}),  O_n(lambda) = n! / prod (i!)^{m_i},
// U_n(lambda) = P_n(lambda) * O_n(lambda).
inline Weight count_of_type(int n, const IntegerPartitionType& type, CountKind kind) {
  if (type.n != n) throw std::invalid_argument("count_of_type: type has wrong n");
  long long weighted = 0;
  for (size_t i = 1; i < type.mult.size(); ++i) {
    if (type.mult[i] < 0) throw std::invalid_argument("count_of_type: negative multiplicity");
    weighted += static_cast<long long>(i) * type.mult[i];
  }
  if (weighted != n) throw std::invalid_argument("count_of_type: multiplicities do not sum to n");
  Weight facs = 1, mults = 1;
  for (size_t i = 1; i < type.mult.size(); ++i) {
    if (type.mult[i] == 0) continue;
    Weight fi = factorial(static_cast<int>(i));
    for (int j = 0; j < type.mult[i]; ++j) facs *= fi;
    mults *= factorial(type.mult[i]);
  }
  const Weight ordered = factorial(n) / facs;
  switch (kind) {
    case CountKind::ordered: return ordered;
    case CountKind::partition: return ordered / mults;
    case CountKind::ubp: return (ordered / mults) * ordered;
  }
  throw std::invalid_argument("count_of_type: unknown kind");
}

// mu_m = (-1)^{m-1} (m-1)!  (Moebius value of a full merge of m blocks)
inline Weight moebius_block(int m) {
  Weight v = factorial(m - 1);
  return (m % 2 == 0) ? -v : v;
}

inline Weight moebius_partition(const SetPartition& finer, const SetPartition& coarser) {
  if (!refines(finer, coarser))
    throw std::invalid_argument("moebius_partition: arguments not comparable");
  const auto idx = block_index_of(coarser);
  std::vector<int> merged(coarser.blocks.size(), 0);
  for (const auto& b : finer.blocks) ++merged[static_cast<size_t>(idx[static_cast<size_t>(b.front())])];
  Weight v = 1;
  for (int m : merged) v *= moebius_block(m);
  return v;
}

namespace detail {

inline constexpr int kCfTableMax = 24;

// Single-block weights by the type-sum formulas:
//   Cf_U(n)   = sum over lambda of n          of U_n(lambda)  (-1)^{m-1} (m-1)!
//   Cf_Pi(2n) = sum over even lambda of 2n    of P_2n(lambda) (-1)^{m-1} (m-1)!
inline const std::vector<Weight>& cf_u_table() {
  static const std::vector<Weight> table = [] {
    std::vector<Weight> t(kCfTableMax + 1, Weight(0));
    for (int n = 1; n <= kCfTableMax; ++n) {
      Weight acc = 0;
      for_each_integer_partition(n, [&](const std::vector<int>& parts) {
        IntegerPartitionType ty;
        ty.n = n;
        ty.mult.assign(static_cast<size_t>(n) + 1, 0);
        for (int p : parts) ++ty.mult[static_cast<size_t>(p)];
        const int m = static_cast<int>(parts.size());
        Weight term = count_of_type(n, ty, CountKind::ubp) * factorial(m - 1);
        acc += (m % 2 == 0) ? -term : term;
      });
      t[static_cast<size_t>(n)] = acc;
    }
    return t;
  }();
  return table;
}

inline const std::vector<Weight>& cf_pi_table() {
  static const std::vector<Weight> table = [] {
    std::vector<Weight> t(kCfTableMax + 1, Weight(0));
    for (int n = 2; n <= kCfTableMax; n += 2) {
      Weight acc = 0;
      for_each_integer_partition(n, [&](const std::vector<int>& parts) {
        if (std::any_of(parts.begin(), parts.end(), [](int p) { return p % 2 != 0; }))
          return;
        IntegerPartitionType ty;
        ty.n = n;
        ty.mult.assign(static_cast<size_t>(n) + 1, 0);
        for (int p : parts) ++ty.mult[static_cast<size_t>(p)];
        const int m = static_cast<int>(parts.size());
        Weight term = count_of_type(n, ty, CountKind::partition) * factorial(m - 1);
        acc += (m % 2 == 0) ? -term : term;
      });
      t[static_cast<size_t>(n)] = acc;
    }
    return t;
  }();
  return table;
}

}  // namespace detail

inline Weight cf_u_single(int k) {
  if (k < 1 || k > detail::kCfTableMax)
    throw resource_error("cf_u_single: block size beyond table");
  return detail::cf_u_table()[static_cast<size_t>(k)];
}

inline Weight cf_pi_single(int two_k) {
  if (two_k < 1 || two_k > detail::kCfTableMax)
    throw resource_error("cf_pi_single: block size beyond table");
  if (two_k % 2 != 0) throw std::invalid_argument("cf_pi_single: odd block size");
  return detail::cf_pi_table()[static_cast<size_t>(two_k)];
}

// Multiplicative over blocks.
inline Weight cf_pi(const EvenPartition& a) {
  if (!is_even_partition(a)) throw std::invalid_argument("cf_pi: partition has an odd block");
  Weight v = 1;
  for (const auto& b : a.blocks) v *= cf_pi_single(static_cast<int>(b.size()));
  return v;
}

// ---- text form -------------------------------------------------------------
//
// Compact form for single-digit elements: "12|3|4". For ground sets past 9
// elements are comma-separated inside a block: "1,11|2,3". Parsing tries the
// compact reading first and falls back to the comma reading; whenever both
// validate they denote the same partition (all blocks single-digit singletons).

inline std::string print_blocks(const std::vector<std::vector<int>>& blocks, int n) {
  std::string s;
  for (size_t i = 0; i < blocks.size(); ++i) {
    if (i) s += '|';
    for (size_t j = 0; j < blocks[i].size(); ++j) {
      if (j && n > 9) s += ',';
      s += std::to_string(blocks[i][j]);
    }
  }
  return s;
}

inline std::string print_partition(const SetPartition& p) {
  return print_blocks(p.blocks, p.n);
}

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

// Written block order preserved; throws on malformed text.
inline std::vector<std::vector<int>> parse_block_list(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty partition text");
  const bool comma = text.find(',') != std::string::npos;
  std::vector<std::vector<int>> compact_blocks;
  if (!comma) {
    bool ok = true;
    for (const auto& tok : split(text, '|')) {
      std::vector<int> b;
      for (char c : tok) {
        if (c < '1' || c > '9') {
          ok = false;
          break;
        }
        b.push_back(c - '0');
      }
      if (!ok || b.empty()) {
        ok = false;
        break;
      }
      compact_blocks.push_back(std::move(b));
    }
    if (ok) return compact_blocks;
  }
  std::vector<std::vector<int>> blocks;
  for (const auto& tok : split(text, '|')) {
    std::vector<int> b;
    for (const auto& e : split(tok, ',')) {
      if (e.empty() || !std::all_of(e.begin(), e.end(), [](char c) { return c >= '0' && c <= '9'; }))
        throw std::invalid_argument("malformed partition text: " + text);
      b.push_back(std::stoi(e));
    }
    blocks.push_back(std::move(b));
  }
  return blocks;
}

}  // namespace detail

inline SetPartition parse_partition(const std::string& text) {
  auto blocks = detail::parse_block_list(text);
  int n = 0;
  for (const auto& b : blocks) n += static_cast<int>(b.size());
  return make_set_partition(n, std::move(blocks));
}

}  // namespace diagex
