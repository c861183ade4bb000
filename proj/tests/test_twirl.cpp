#include <catch2/catch_amalgamated.hpp>

#include <functional>
#include <random>

#include "diagex/expectation.hpp"
#include "diagex/twirl.hpp"
#include "helpers.hpp"

using namespace diagex;
using testutil::random_tensor;

namespace {

constexpr double kTight = 1e-12;

Matrix random_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = cplx(dist(rng), dist(rng));
  return m;
}

ChoiMatrix choi_of(const std::function<Matrix(const Matrix&)>& phi, int d) {
  Tensor j({d, d, d, d});
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l) {
      Matrix e = Matrix::Zero(d, d);
      e(k, l) = 1.0;
      const Matrix out = phi(e);
      for (int i = 0; i < d; ++i)
        for (int jj = 0; jj < d; ++jj) j.at({i, k, jj, l}) = out(i, jj);
    }
  return {j};
}

ChoiMatrix random_choi(int d, std::mt19937_64& rng) { return {random_tensor({d, d, d, d}, rng)}; }

enum class TwirlKind { equal, parallel, cross };

// The integrand of a twirl as a two-family network: the map node carries the
// Choi tensor, each of its four legs passes through a junction that also feeds
// a box. Family "p" holds the left average, family "q" the right one.
Network twirl_network(TwirlKind kind, const Tensor& j, const Tensor& x, bool signs) {
  Network net;
  net.dimension = j.shape[0];
  const int jn = net.add_tensor(j);
  const int xn = net.add_tensor(x);

  const Flavor plain = signs ? Flavor::s : Flavor::u;
  const Flavor conj = signs ? Flavor::s : Flavor::u_conjugate;
  int out_row = -1, out_col = -1, in_row = -1, in_col = -1;
  switch (kind) {
    case TwirlKind::equal:
      out_row = net.add_random("p", plain);
      out_col = net.add_random("p", conj);
      in_row = net.add_random("q", conj);
      in_col = net.add_random("q", plain);
      break;
    case TwirlKind::parallel:
      out_row = net.add_random("p", plain);
      out_col = net.add_random("q", plain);
      in_row = net.add_random("p", conj);
      in_col = net.add_random("q", conj);
      break;
    case TwirlKind::cross:
      out_row = net.add_random("p", plain);
      out_col = net.add_random("q", plain);
      in_row = net.add_random("q", conj);
      in_col = net.add_random("p", conj);
      break;
  }

  const int d = net.dimension;
  const int jr = net.add_tensor(delta_tensor(3, d));
  const int jc = net.add_tensor(delta_tensor(3, d));
  const int jk = net.add_tensor(delta_tensor(3, d));
  const int jq = net.add_tensor(delta_tensor(3, d));
  net.wire(jr, 1, jn, 0);
  net.wire(jr, 2, out_row, 0);
  net.wire(jc, 1, jn, 2);
  net.wire(jc, 2, out_col, 0);
  net.wire(jk, 1, jn, 1);
  net.wire(jk, 2, xn, 0);
  net.wire(jk, 0, in_row, 0);
  net.wire(jq, 1, jn, 3);
  net.wire(jq, 2, xn, 1);
  net.wire(jq, 0, in_col, 0);
  net.open = {{jr, 0}, {jc, 0}};
  validate(net);
  return net;
}

ChoiMatrix twirl_by(TwirlKind kind, const ChoiMatrix& m) {
  switch (kind) {
    case TwirlKind::equal:
      return twirl_equal(m);
    case TwirlKind::parallel:
      return twirl_parallel(m);
    default:
      return twirl_cross(m);
  }
}

}  // namespace

TEST_CASE("choi retrieval", "[twirl]") {
  std::mt19937_64 rng(70);

  SECTION("identity map") {
    const int d = 2;
    const auto m = choi_of([](const Matrix& x) { return x; }, d);
    const Matrix x = random_matrix(d, d, rng);
    CHECK((apply_map(m, x) - x).cwiseAbs().maxCoeff() < kTight);
    // its choi is the unnormalized maximally entangled projection
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k)
        for (int j = 0; j < d; ++j)
          for (int l = 0; l < d; ++l)
            CHECK(m.j.at({i, k, j, l}) == cplx(i == k && j == l ? 1.0 : 0.0));
  }

  SECTION("transpose map") {
    const int d = 2;
    const auto m = choi_of([](const Matrix& x) { return Matrix(x.transpose()); }, d);
    const Matrix x = random_matrix(d, d, rng);
    CHECK((apply_map(m, x) - x.transpose()).cwiseAbs().maxCoeff() < kTight);
  }

  SECTION("trace map") {
    const int d = 3;
    const auto m =
        choi_of([d](const Matrix& x) { return Matrix(x.trace() * Matrix::Identity(d, d)); }, d);
    // its choi is I ⊗ I
    for_each_index(m.j.shape, [&](const std::vector<int>& idx) {
      CHECK(m.j.at(idx) == cplx(idx[0] == idx[2] && idx[1] == idx[3] ? 1.0 : 0.0));
    });
    const Matrix x = random_matrix(d, d, rng);
    CHECK((apply_map(m, x) - x.trace() * Matrix::Identity(d, d)).cwiseAbs().maxCoeff() < kTight);
  }

  CHECK_THROWS_AS(apply_map(random_choi(2, rng), Matrix::Zero(3, 3)), std::invalid_argument);
}

TEST_CASE("closed forms of the three twirls", "[twirl]") {
  std::mt19937_64 rng(71);
  const int d = 3;
  const auto m = random_choi(d, rng);
  const Matrix x = random_matrix(d, d, rng);

  SECTION("left-right average keeps only the diagonal channel") {
    const auto tw = twirl_equal(m);
    const Matrix got = apply_map(tw, x);
    // oracle: diag(Phi(diag(X)))
    const Matrix want =
        Matrix(Matrix(apply_map(m, Matrix(x.diagonal().asDiagonal()))).diagonal().asDiagonal());
    CHECK((got - want).cwiseAbs().maxCoeff() < kTight);
    // depends on the diagonal of the input only
    Matrix y = random_matrix(d, d, rng);
    y.diagonal() = x.diagonal();
    CHECK((apply_map(tw, y) - got).cwiseAbs().maxCoeff() < kTight);
  }

  SECTION("parallel average is a schur multiplier") {
    const auto tw = twirl_parallel(m);
    const Matrix mult = schur_multiplier(m);
    CHECK((apply_map(tw, x) - mult.cwiseProduct(x)).cwiseAbs().maxCoeff() < kTight);
  }

  SECTION("crossed average multiplies the transpose") {
    const auto tw = twirl_cross(m);
    const Matrix mult = triple_of(m.j).c;
    CHECK((apply_map(tw, x) - mult.cwiseProduct(x.transpose())).cwiseAbs().maxCoeff() < kTight);
  }

  SECTION("parallel twirl fixes the identity map") {
    const auto id = choi_of([](const Matrix& v) { return v; }, d);
    CHECK((schur_multiplier(id) - Matrix::Ones(d, d)).cwiseAbs().maxCoeff() < kTight);
    const auto tw = twirl_parallel(id);
    CHECK((apply_map(tw, x) - x).cwiseAbs().maxCoeff() < kTight);
  }
}

TEST_CASE("twirls are idempotent", "[twirl]") {
  std::mt19937_64 rng(72);
  for (int d : {2, 3, 4}) {
    const auto m = random_choi(d, rng);
    for (auto kind : {TwirlKind::equal, TwirlKind::parallel, TwirlKind::cross}) {
      const auto once = twirl_by(kind, m);
      CHECK(max_abs_diff(twirl_by(kind, once).j, once.j) == 0.0);
    }
  }
}

TEST_CASE("twirls match the two-family averages", "[twirl]") {
  std::mt19937_64 rng(73);
  const int d = 2;
  const auto m = random_choi(d, rng);

  for (auto kind : {TwirlKind::equal, TwirlKind::parallel, TwirlKind::cross}) {
    const auto tw = twirl_by(kind, m);

    // full-map agreement: drive with every matrix unit, then a random input
    for (int k = 0; k < d; ++k)
      for (int l = 0; l < d; ++l) {
        Tensor e({d, d});
        e.at({k, l}) = 1.0;
        Matrix em = Matrix::Zero(d, d);
        em(k, l) = 1.0;
        const auto avg = expect(twirl_network(kind, m.j, e, false));
        CHECK(max_abs_diff(avg, from_eigen(apply_map(tw, em))) < kTight);
      }

    const Matrix x = random_matrix(d, d, rng);
    const auto avg = expect(twirl_network(kind, m.j, from_eigen(x), false));
    CHECK(max_abs_diff(avg, from_eigen(apply_map(tw, x))) < kTight);

    // independent sign pairs average to the same map
    const auto savg = expect(twirl_network(kind, m.j, from_eigen(x), true));
    CHECK(max_abs_diff(savg, from_eigen(apply_map(tw, x))) < kTight);
  }
}
