#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "diagex/network.hpp"

using namespace diagex;

namespace {

constexpr double kTol = 1e-10;

Tensor random_tensor(std::vector<int> shape, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Tensor t(std::move(shape));
  for (auto& v : t.data) v = cplx(dist(rng), dist(rng));
  return t;
}

// Reference value by the raw index sum: every axis id takes every value and
// the products of entries are accumulated. Exponential, used only at toy size.
Tensor reference_contract(const Network& net) {
  std::vector<std::vector<int>> axis(net.nodes.size());
  for (size_t v = 0; v < net.nodes.size(); ++v)
    axis[v].assign(static_cast<size_t>(net.node_arity(static_cast<int>(v))), -1);
  int next_id = 0;
  std::vector<int> id_dim;
  for (const auto& [a, b] : net.wires) {
    axis[static_cast<size_t>(a.node)][static_cast<size_t>(a.slot)] = next_id;
    axis[static_cast<size_t>(b.node)][static_cast<size_t>(b.slot)] = next_id;
    id_dim.push_back(net.leg_dim(a));
    ++next_id;
  }
  std::vector<int> open_ids, open_shape;
  for (const auto& e : net.open) {
    axis[static_cast<size_t>(e.node)][static_cast<size_t>(e.slot)] = next_id;
    open_ids.push_back(next_id);
    open_shape.push_back(net.leg_dim(e));
    id_dim.push_back(net.leg_dim(e));
    ++next_id;
  }
  Tensor out(open_shape);
  std::vector<int> assign(static_cast<size_t>(next_id), 0);
  std::vector<int> out_idx(open_ids.size());
  auto rec = [&](auto&& self, int id) -> void {
    if (id == next_id) {
      cplx prod = 1;
      std::vector<int> idx;
      for (size_t v = 0; v < net.nodes.size(); ++v) {
        idx.clear();
        for (int a : axis[v]) idx.push_back(assign[static_cast<size_t>(a)]);
        prod *= net.tensors[static_cast<size_t>(net.nodes[v].tensor)].at(idx);
      }
      for (size_t i = 0; i < open_ids.size(); ++i)
        out_idx[i] = assign[static_cast<size_t>(open_ids[i])];
      out.at(out_idx) += prod;
      return;
    }
    for (int v = 0; v < id_dim[static_cast<size_t>(id)]; ++v) {
      assign[static_cast<size_t>(id)] = v;
      self(self, id + 1);
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace

TEST_CASE("delta tensors", "[tensor]") {
  const auto id3 = delta_tensor(2, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(id3.at({i, j}) == cplx(i == j ? 1.0 : 0.0));

  const auto ghz = delta_tensor(3, 2);
  int nonzero = 0;
  for (const auto& v : ghz.data) nonzero += (v != cplx(0));
  CHECK(nonzero == 2);
  CHECK(ghz.at({0, 0, 0}) == cplx(1.0));
  CHECK(ghz.at({1, 1, 1}) == cplx(1.0));

  SECTION("wiring two delta legs together drops the arity by two up to a dimension factor") {
    // contracting two legs of delta(4,3) with each other: sum_v delta(v,v,j,k) = delta(j,k)
    Network net;
    net.add_tensor(delta_tensor(4, 3));
    net.wire(0, 0, 0, 1);
    auto_open(net);
    CHECK(max_abs_diff(contract(net), delta_tensor(2, 3)) < kTol);
  }

  SECTION("wiring deltas from different nodes merges them") {
    Network net;
    net.add_tensor(delta_tensor(3, 3));
    net.add_tensor(delta_tensor(3, 3));
    net.wire(0, 2, 1, 0);
    auto_open(net);
    CHECK(max_abs_diff(contract(net), delta_tensor(4, 3)) < kTol);
  }

  CHECK_THROWS_AS(delta_tensor(0, 2), std::invalid_argument);
}

TEST_CASE("contraction basics", "[tensor]") {
  std::mt19937_64 rng(7);

  SECTION("two wired matrices multiply") {
    const auto A = random_tensor({3, 4}, rng);
    const auto B = random_tensor({4, 2}, rng);
    Network net;
    net.add_tensor(A);
    net.add_tensor(B);
    net.wire(0, 1, 1, 0);
    net.open = {{0, 0}, {1, 1}};
    CHECK(max_abs_diff(contract(net), matmul(A, B)) < kTol);
  }

  SECTION("identity loop gives the dimension") {
    Network net;
    net.add_tensor(delta_tensor(2, 3));
    net.wire(0, 0, 0, 1);
    CHECK(contract(net).rank() == 0);
    CHECK(std::abs(contract(net).data[0] - cplx(3.0)) < kTol);
  }

  SECTION("trace loop of two matrices") {
    const auto A = random_tensor({2, 2}, rng);
    const auto B = random_tensor({2, 2}, rng);
    Network net;
    net.add_tensor(A);
    net.add_tensor(B);
    net.wire(0, 1, 1, 0);
    net.wire(1, 1, 0, 0);
    CHECK(std::abs(contract(net).data[0] - trace(matmul(A, B))) < kTol);
  }

  SECTION("random boxes are rejected") {
    Network net;
    net.dimension = 2;
    net.add_random("u", Flavor::u);
    net.open = {{0, 0}};
    CHECK_THROWS_AS(contract(net), std::invalid_argument);
  }

  SECTION("wire dimension mismatch is rejected") {
    Network net;
    net.add_tensor(Tensor({2, 3}));
    net.add_tensor(Tensor({2, 3}));
    net.wire(0, 1, 1, 0);
    net.open = {{0, 0}, {1, 1}};
    CHECK_THROWS_AS(contract(net), std::invalid_argument);
  }

  SECTION("unlisted legs are rejected") {
    Network net;
    net.add_tensor(Tensor({2, 2}));
    net.open = {{0, 0}};
    CHECK_THROWS_AS(contract(net), std::invalid_argument);
  }
}

TEST_CASE("contraction matches the raw index sum", "[tensor]") {
  std::mt19937_64 rng(20240815);
  std::uniform_int_distribution<int> dim_dist(1, 3);
  std::uniform_int_distribution<int> rank_dist(1, 3);
  std::uniform_int_distribution<int> nodes_dist(2, 6);

  for (int trial = 0; trial < 40; ++trial) {
    Network net;
    const int nn = nodes_dist(rng);
    std::vector<Leg> free_legs;
    int total_legs = 0;
    for (int v = 0; v < nn; ++v) {
      std::vector<int> shape;
      // keeps the reference index sum at most 3^10 terms
      const int r = std::min(rank_dist(rng), 10 - total_legs);
      total_legs += r;
      for (int a = 0; a < r; ++a) shape.push_back(dim_dist(rng));
      net.add_tensor(random_tensor(shape, rng));
      for (int a = 0; a < r; ++a) free_legs.push_back({v, a});
    }
    std::shuffle(free_legs.begin(), free_legs.end(), rng);
    // wire compatible pairs with probability ~1/2, keep the rest open
    while (free_legs.size() >= 2) {
      const Leg a = free_legs.back();
      free_legs.pop_back();
      bool wired = false;
      if (rng() % 2 == 0) {
        for (size_t i = 0; i < free_legs.size(); ++i)
          if (net.leg_dim(free_legs[i]) == net.leg_dim(a)) {
            net.wire(a, free_legs[i]);
            free_legs.erase(free_legs.begin() + static_cast<long>(i));
            wired = true;
            break;
          }
      }
      if (!wired) net.open.push_back(a);
    }
    for (const auto& e : free_legs) net.open.push_back(e);
    validate(net);

    const auto expected = reference_contract(net);
    CHECK(max_abs_diff(contract(net), expected) < kTol);

    // node order must not matter: reverse the wire list and swap endpoints
    Network rev = net;
    std::reverse(rev.wires.begin(), rev.wires.end());
    for (auto& [a, b] : rev.wires) std::swap(a, b);
    CHECK(max_abs_diff(contract(rev), expected) < kTol);
  }
}

TEST_CASE("juxtaposition is the tensor product", "[tensor]") {
  std::mt19937_64 rng(99);
  const auto A = random_tensor({2, 3}, rng);
  const auto B = random_tensor({2, 2}, rng);

  Network n1;
  n1.add_tensor(A);
  auto_open(n1);
  Network n2;
  n2.add_tensor(B);
  n2.wire(0, 0, 0, 1);  // closed loop: Tr B

  Network joint;
  joint.add_tensor(A);
  joint.add_tensor(B);
  joint.wire(1, 0, 1, 1);
  auto_open(joint);

  const auto lhs = contract(joint);
  const auto rhs = tensor_product(contract(n1), contract(n2));
  CHECK(max_abs_diff(lhs, reshape(rhs, lhs.shape)) < kTol);
}

TEST_CASE("bipartite utilities", "[tensor]") {
  std::mt19937_64 rng(5);

  SECTION("partial transpose is an involution") {
    const auto X = random_tensor({3, 3, 3, 3}, rng);
    CHECK(max_abs_diff(partial_transpose(partial_transpose(X)), X) < kTol);
  }

  SECTION("partial transpose transposes the second factor") {
    const auto A = random_tensor({2, 2}, rng);
    const auto B = random_tensor({2, 2}, rng);
    const auto AB = reshape(tensor_product(A, B), {2, 2, 2, 2});
    // A ⊗ B lives at entry(i,k,j,l) = A_ij B_kl after axis reordering
    const auto X = permute_axes(AB, {0, 2, 1, 3});
    const auto Y = permute_axes(reshape(tensor_product(A, transpose(B)), {2, 2, 2, 2}),
                                {0, 2, 1, 3});
    CHECK(max_abs_diff(partial_transpose(X), Y) < kTol);
  }

  SECTION("partial trace of a product splits") {
    const auto A = random_tensor({2, 2}, rng);
    const auto B = random_tensor({2, 2}, rng);
    const auto X = permute_axes(reshape(tensor_product(A, B), {2, 2, 2, 2}), {0, 2, 1, 3});
    auto tr2 = partial_trace(X, 2);
    const cplx tb = trace(B);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) CHECK(std::abs(tr2.at({i, j}) - A.at({i, j}) * tb) < kTol);
    auto tr1 = partial_trace(X, 1);
    const cplx ta = trace(A);
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l) CHECK(std::abs(tr1.at({k, l}) - B.at({k, l}) * ta) < kTol);
  }

  SECTION("diag utilities") {
    const auto A = random_tensor({4, 4}, rng);
    const auto P = diag_project(A);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        CHECK(P.at({i, j}) == (i == j ? A.at({i, j}) : cplx(0)));
    CHECK(max_abs_diff(diag_embed(diag_vector(A)), P) < kTol);
  }

  SECTION("matrix and bipartite views share layout") {
    const auto X = random_tensor({9, 9}, rng);
    const auto T = bipartite_from_matrix(X);
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k)
        for (int j = 0; j < 3; ++j)
          for (int l = 0; l < 3; ++l)
            CHECK(T.at({i, k, j, l}) == X.at({i * 3 + k, j * 3 + l}));
    CHECK(max_abs_diff(matrix_from_bipartite(T), X) < kTol);
  }

  CHECK_THROWS_AS(partial_transpose(Tensor({2, 2, 2})), std::invalid_argument);
  CHECK_THROWS_AS(partial_trace(Tensor({2, 2, 2, 2}), 3), std::invalid_argument);
  CHECK_THROWS_AS(bipartite_from_matrix(Tensor({3, 4})), std::invalid_argument);
}

TEST_CASE("identity delta acts trivially under wiring", "[tensor]") {
  std::mt19937_64 rng(11);
  const auto A = random_tensor({3, 3}, rng);
  Network net;
  net.add_tensor(A);
  net.add_tensor(delta_tensor(2, 3));
  net.wire(0, 1, 1, 0);
  net.open = {{0, 0}, {1, 1}};
  CHECK(max_abs_diff(contract(net), A) < kTol);
}
