#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "expectation.hpp"

namespace diagex {

inline constexpr size_t kEnumerationBudget = 1'000'000;

namespace detail {

// Concrete copy of a network: every random box becomes a rank-1 placeholder
// tensor that evaluators overwrite per assignment.
struct Realization {
  Network net;
  // per family: (name, is_s, u-node tensor slots, conjugate slots or sign slots)
  struct Family {
    std::string name;
    bool is_s = false;
    std::vector<int> plain;  // tensor indices for u or s boxes
    std::vector<int> conj;   // tensor indices for conjugate boxes
  };
  std::vector<Family> families;
};

inline Realization realize(const Network& net) {
  validate(net);
  Realization r;
  r.net = net;
  for (auto& nd : r.net.nodes) {
    if (!nd.tag) continue;
    const auto tag = *nd.tag;
    r.net.tensors.emplace_back(std::vector<int>{net.dimension});
    const int ti = static_cast<int>(r.net.tensors.size()) - 1;
    nd.tensor = ti;
    nd.tag.reset();
    Realization::Family* fam = nullptr;
    for (auto& f : r.families)
      if (f.name == tag.family) fam = &f;
    if (!fam) {
      r.families.push_back({tag.family, tag.flavor == Flavor::s, {}, {}});
      fam = &r.families.back();
    }
    if (tag.flavor == Flavor::u_conjugate)
      fam->conj.push_back(ti);
    else
      fam->plain.push_back(ti);
  }
  return r;
}

inline void fill_phase(Realization& r, const Realization::Family& fam,
                       const std::vector<cplx>& u) {
  for (int ti : fam.plain) r.net.tensors[static_cast<size_t>(ti)].data = u;
  std::vector<cplx> ubar(u.size());
  for (size_t i = 0; i < u.size(); ++i) ubar[i] = std::conj(u[i]);
  for (int ti : fam.conj) r.net.tensors[static_cast<size_t>(ti)].data = ubar;
}

inline void fill_sign(Realization& r, const Realization::Family& fam,
                      const std::vector<double>& s) {
  std::vector<cplx> v(s.begin(), s.end());
  for (int ti : fam.plain) r.net.tensors[static_cast<size_t>(ti)].data = v;
}

}  // namespace detail

// Exact E_u by enumerating the diagonal unitary design of the given degree:
// every coordinate independently takes all (degree+1)-th roots of unity.
// Exactness needs the degree to cover the family's box count on each side.
inline Tensor exact_u(const Network& net, const std::string& family, int degree) {
  if (!net.has_random()) return contract(net);
  auto r = detail::realize(net);
  if (r.families.size() != 1 || r.families.front().name != family)
    throw std::invalid_argument("exact_u: network must use exactly the named family");
  const auto& fam = r.families.front();
  if (fam.is_s) throw std::invalid_argument("exact_u: family is a sign family");
  if (degree < 1) throw std::invalid_argument("exact_u: degree must be positive");
  if (static_cast<size_t>(std::max(fam.plain.size(), fam.conj.size())) > static_cast<size_t>(degree))
    throw std::invalid_argument("exact_u: degree below the family's box count");
  const int d = net.dimension;
  const int q = degree + 1;
  double total = 1;
  for (int i = 0; i < d; ++i) {
    total *= q;
    if (total > static_cast<double>(kEnumerationBudget))
      throw resource_error("exact_u: design enumeration exceeds the budget");
  }
  std::vector<cplx> roots(static_cast<size_t>(q));
  for (int k = 0; k < q; ++k) {
    const double th = 2.0 * M_PI * k / q;
    roots[static_cast<size_t>(k)] = cplx(std::cos(th), std::sin(th));
  }
  std::vector<int> out_shape;
  for (const auto& e : net.open) out_shape.push_back(net.leg_dim(e));
  Tensor acc(out_shape);
  std::vector<int> k(static_cast<size_t>(d), 0);
  std::vector<cplx> u(static_cast<size_t>(d));
  size_t count = 0;
  while (true) {
    for (int i = 0; i < d; ++i) u[static_cast<size_t>(i)] = roots[static_cast<size_t>(k[static_cast<size_t>(i)])];
    detail::fill_phase(r, fam, u);
    const Tensor val = contract(r.net);
    for (size_t i = 0; i < acc.size(); ++i) acc.data[i] += val.data[i];
    ++count;
    int a = d;
    bool done = true;
    while (a > 0) {
      --a;
      if (++k[static_cast<size_t>(a)] < q) {
        done = false;
        break;
      }
      k[static_cast<size_t>(a)] = 0;
    }
    if (done) break;
  }
  for (auto& v : acc.data) v /= static_cast<double>(count);
  return acc;
}

// Exact E_s by enumerating all sign vectors.
inline Tensor exact_s(const Network& net, const std::string& family) {
  if (!net.has_random()) return contract(net);
  auto r = detail::realize(net);
  if (r.families.size() != 1 || r.families.front().name != family)
    throw std::invalid_argument("exact_s: network must use exactly the named family");
  const auto& fam = r.families.front();
  if (!fam.is_s) throw std::invalid_argument("exact_s: family is a phase family");
  const int d = net.dimension;
  if (d > 20 || (size_t(1) << d) > kEnumerationBudget)
    throw resource_error("exact_s: sign enumeration exceeds the budget");
  std::vector<int> out_shape;
  for (const auto& e : net.open) out_shape.push_back(net.leg_dim(e));
  Tensor acc(out_shape);
  const size_t total = size_t(1) << d;
  std::vector<double> s(static_cast<size_t>(d));
  for (size_t mask = 0; mask < total; ++mask) {
    for (int i = 0; i < d; ++i) s[static_cast<size_t>(i)] = ((mask >> i) & 1u) ? -1.0 : 1.0;
    detail::fill_sign(r, fam, s);
    const Tensor val = contract(r.net);
    for (size_t i = 0; i < acc.size(); ++i) acc.data[i] += val.data[i];
  }
  for (auto& v : acc.data) v /= static_cast<double>(total);
  return acc;
}

struct SampleConfig {
  uint64_t seed = 0;
  size_t samples = 1;
};

namespace detail {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline uint64_t fnv1a64(const std::string& s) {
  uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

// Portable uniform double in [0,1): top 53 bits of the generator output.
inline double uniform53(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

}  // namespace detail

// Empirical mean and per-entry standard error. Each family owns an
// independent, portable stream: mt19937_64 seeded with
// splitmix64(splitmix64(seed) ^ fnv1a64(family name)).
inline std::pair<Tensor, Tensor> monte_carlo(const Network& net, const SampleConfig& cfg) {
  if (cfg.samples < 2) throw std::invalid_argument("monte_carlo: needs at least two samples");
  auto r = detail::realize(net);
  const int d = net.dimension;
  std::vector<std::mt19937_64> streams;
  for (const auto& fam : r.families)
    streams.emplace_back(detail::splitmix64(detail::splitmix64(cfg.seed) ^ detail::fnv1a64(fam.name)));

  std::vector<int> out_shape;
  for (const auto& e : net.open) out_shape.push_back(net.leg_dim(e));
  Tensor mean(out_shape), err(out_shape);
  std::vector<cplx> sum(mean.size(), cplx(0));
  std::vector<double> sumsq(mean.size(), 0.0);

  std::vector<cplx> u(static_cast<size_t>(d));
  std::vector<double> s(static_cast<size_t>(d));
  for (size_t it = 0; it < cfg.samples; ++it) {
    for (size_t fi = 0; fi < r.families.size(); ++fi) {
      auto& g = streams[fi];
      const auto& fam = r.families[fi];
      if (fam.is_s) {
        for (int i = 0; i < d; ++i) s[static_cast<size_t>(i)] = (g() >> 63) ? -1.0 : 1.0;
        detail::fill_sign(r, fam, s);
      } else {
        for (int i = 0; i < d; ++i) {
          const double th = 2.0 * M_PI * detail::uniform53(g);
          u[static_cast<size_t>(i)] = cplx(std::cos(th), std::sin(th));
        }
        detail::fill_phase(r, fam, u);
      }
    }
    const Tensor val = contract(r.net);
    for (size_t i = 0; i < sum.size(); ++i) {
      sum[i] += val.data[i];
      sumsq[i] += std::norm(val.data[i]);
    }
  }
  const double n = static_cast<double>(cfg.samples);
  for (size_t i = 0; i < sum.size(); ++i) {
    mean.data[i] = sum[i] / n;
    const double var = std::max(0.0, (sumsq[i] - std::norm(sum[i]) / n) / (n - 1.0));
    err.data[i] = std::sqrt(var / n);
  }
  return {std::move(mean), std::move(err)};
}

}  // namespace diagex
