#pragma once

#include <random>

#include "diagex/network.hpp"

namespace testutil {

using namespace diagex;

inline Tensor random_tensor(std::vector<int> shape, std::mt19937_64& rng, bool complex_entries = true) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Tensor t(std::move(shape));
  for (auto& v : t.data) v = cplx(dist(rng), complex_entries ? dist(rng) : 0.0);
  return t;
}

// Network with one random family plus a few generic tensors, every leg of
// dimension d, wiring and openness randomized. Exercises box-to-tensor wires,
// box-to-box wires, and open box legs.
inline Network random_family_network(int n_u, int n_ubar, int n_s, int d, std::mt19937_64& rng,
                                     const std::string& family = "v") {
  Network net;
  net.dimension = d;
  std::uniform_int_distribution<int> rank_dist(1, 3);
  std::uniform_int_distribution<int> count_dist(1, 2);
  const int nt = count_dist(rng);
  std::vector<Leg> pool;
  for (int t = 0; t < nt; ++t) {
    const int r = rank_dist(rng);
    const int v = net.add_tensor(random_tensor(std::vector<int>(static_cast<size_t>(r), d), rng));
    for (int a = 0; a < r; ++a) pool.push_back({v, a});
  }
  for (int i = 0; i < n_u; ++i) pool.push_back({net.add_random(family, Flavor::u), 0});
  for (int i = 0; i < n_ubar; ++i) pool.push_back({net.add_random(family, Flavor::u_conjugate), 0});
  for (int i = 0; i < n_s; ++i) pool.push_back({net.add_random(family, Flavor::s), 0});
  std::shuffle(pool.begin(), pool.end(), rng);
  while (pool.size() >= 2) {
    const Leg a = pool.back();
    pool.pop_back();
    if (rng() % 4 == 0) {
      net.open.push_back(a);
      continue;
    }
    const Leg b = pool.back();
    pool.pop_back();
    net.wire(a, b);
  }
  for (const auto& e : pool) net.open.push_back(e);
  validate(net);
  return net;
}

// diag(v) X diag(v)^dagger as a network: three-way junctions tie the row and
// column indices of X to the two boxes and the open legs.
inline Network sandwich_network(const Tensor& X, Flavor left, Flavor right,
                                const std::string& family = "v") {
  Network net;
  net.dimension = X.shape[0];
  const int d = net.dimension;
  const int x = net.add_tensor(X);
  const int bl = net.add_random(family, left);
  const int br = net.add_random(family, right);
  const int jr = net.add_tensor(delta_tensor(3, d));
  const int jc = net.add_tensor(delta_tensor(3, d));
  net.wire(jr, 1, x, 0);
  net.wire(jr, 2, bl, 0);
  net.wire(jc, 1, x, 1);
  net.wire(jc, 2, br, 0);
  net.open = {{jr, 0}, {jc, 0}};
  validate(net);
  return net;
}

}  // namespace testutil
