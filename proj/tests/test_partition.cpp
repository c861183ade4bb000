#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>
#include <string>
#include <vector>

#include "diagex/partition.hpp"

using namespace diagex;

namespace {

// Independent count oracle: Bell numbers by the Bell-triangle recurrence.
Weight bell_number(int n) {
  std::vector<Weight> row{1};
  for (int i = 1; i < n; ++i) {
    std::vector<Weight> next{row.back()};
    for (const Weight& v : row) next.push_back(next.back() + v);
    row = std::move(next);
  }
  return row.back();
}

std::set<std::string> printed_set(const std::vector<SetPartition>& ps) {
  std::set<std::string> out;
  for (const auto& p : ps) out.insert(print_partition(p));
  return out;
}

// Recursive Moebius on the interval [x, y]: mu(y,y) = 1 and
// sum_{x <= z <= y} mu(z, y) = 0 for x < y. Independent of the closed form.
Weight moebius_recursive(const SetPartition& x, const SetPartition& y,
                         const std::vector<SetPartition>& all,
                         std::map<std::pair<std::string, std::string>, Weight>& memo) {
  if (x == y) return 1;
  const auto key = std::make_pair(print_partition(x), print_partition(y));
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  Weight acc = 0;
  for (const auto& z : all) {
    if (z == x) continue;
    if (refines(x, z) && refines(z, y)) acc += moebius_recursive(z, y, all, memo);
  }
  Weight v = -acc;
  memo[key] = v;
  return v;
}

}  // namespace

TEST_CASE("set partition enumeration", "[partition]") {
  CHECK(printed_set(enumerate_set_partitions(2)) == std::set<std::string>{"12", "1|2"});
  CHECK(printed_set(enumerate_set_partitions(1)) == std::set<std::string>{"1"});
  CHECK(enumerate_set_partitions(4).size() == 15);

  for (int n = 1; n <= 8; ++n) {
    Weight count = 0;
    for_each_set_partition(n, [&](const SetPartition&) { ++count; });
    CHECK(count == bell_number(n));
  }

  SECTION("canonical form, no duplicates") {
    for (int n : {3, 5}) {
      auto ps = enumerate_set_partitions(n);
      std::set<std::string> texts;
      for (const auto& p : ps) {
        SetPartition copy = p;
        canonicalize(copy);
        CHECK(copy == p);
        texts.insert(print_partition(p));
      }
      CHECK(texts.size() == ps.size());
    }
  }

  CHECK_THROWS_AS(enumerate_set_partitions(0), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_set_partitions(kPartitionCap + 1), std::invalid_argument);
}

TEST_CASE("even partition enumeration", "[partition]") {
  CHECK(printed_set(enumerate_even_partitions(2)) == std::set<std::string>{"12"});
  CHECK(printed_set(enumerate_even_partitions(4)) ==
        std::set<std::string>{"1234", "12|34", "13|24", "14|23"});

  const std::vector<size_t> expected{1, 4, 31, 379, 6556};
  for (int k = 1; k <= 5; ++k)
    CHECK(enumerate_even_partitions(2 * k).size() == expected[static_cast<size_t>(k) - 1]);

  SECTION("agrees with filtering the full enumeration") {
    for (int two_n : {2, 4, 6, 8}) {
      std::set<std::string> filtered;
      for (const auto& p : enumerate_set_partitions(two_n))
        if (is_even_partition(p)) filtered.insert(print_partition(p));
      CHECK(printed_set(enumerate_even_partitions(two_n)) == filtered);
    }
  }

  CHECK_THROWS_AS(enumerate_even_partitions(3), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_even_partitions(0), std::invalid_argument);
}

TEST_CASE("refinement order", "[partition]") {
  CHECK(refines(parse_partition("1|2|3"), parse_partition("12|3")));
  CHECK_FALSE(refines(parse_partition("12|3"), parse_partition("13|2")));
  CHECK_FALSE(refines(parse_partition("13|2"), parse_partition("12|3")));

  const auto p4 = enumerate_set_partitions(4);
  for (const auto& p : p4) CHECK(refines(p, p));

  SECTION("antisymmetry") {
    for (const auto& a : p4)
      for (const auto& b : p4)
        if (refines(a, b) && refines(b, a)) CHECK(a == b);
  }

  CHECK_THROWS_AS(refines(parse_partition("1|2"), parse_partition("123")), std::invalid_argument);
}

TEST_CASE("partition join", "[partition]") {
  CHECK(join(parse_partition("12|3"), parse_partition("1|23")) == parse_partition("123"));
  CHECK(join(parse_partition("12|34"), parse_partition("1|2|3|4")) == parse_partition("12|34"));
  const auto p3 = enumerate_set_partitions(3);
  for (const auto& a : p3)
    for (const auto& b : p3) {
      const auto j = join(a, b);
      CHECK(refines(a, j));
      CHECK(refines(b, j));
      // minimality: any common upper bound is above the join
      for (const auto& c : p3)
        if (refines(a, c) && refines(b, c)) CHECK(refines(j, c));
    }
}

TEST_CASE("counts by type", "[partition]") {
  IntegerPartitionType two_two;
  two_two.n = 4;
  two_two.mult = {0, 0, 2, 0, 0};
  CHECK(count_of_type(4, two_two, CountKind::ubp) == 18);

  IntegerPartitionType one_two;
  one_two.n = 3;
  one_two.mult = {0, 1, 1, 0};
  CHECK(count_of_type(3, one_two, CountKind::ubp) == 9);

  for (int n = 1; n <= 6; ++n) {
    IntegerPartitionType full;
    full.n = n;
    full.mult.assign(static_cast<size_t>(n) + 1, 0);
    full.mult[static_cast<size_t>(n)] = 1;
    CHECK(count_of_type(n, full, CountKind::partition) == 1);
    CHECK(count_of_type(n, full, CountKind::ordered) == 1);
    CHECK(count_of_type(n, full, CountKind::ubp) == 1);
  }

  SECTION("partition counts match enumeration") {
    for (int n = 1; n <= 6; ++n) {
      std::map<std::vector<int>, Weight> by_type;
      for (const auto& p : enumerate_set_partitions(n)) by_type[type_of(p).mult] += 1;
      for (const auto& [mult, count] : by_type) {
        IntegerPartitionType t;
        t.n = n;
        t.mult = mult;
        CHECK(count_of_type(n, t, CountKind::partition) == count);
        CHECK(count_of_type(n, t, CountKind::ordered) ==
              count * [&] {
                Weight perms = 1;
                for (int m : mult) perms *= factorial(m);
                return perms;
              }());
      }
    }
  }

  IntegerPartitionType bad;
  bad.n = 4;
  bad.mult = {0, 1, 0, 0, 0};
  CHECK_THROWS_AS(count_of_type(4, bad, CountKind::partition), std::invalid_argument);
}

TEST_CASE("Moebius function on the partition lattice", "[partition]") {
  const auto p4 = enumerate_set_partitions(4);
  for (const auto& p : p4) CHECK(moebius_partition(p, p) == 1);

  CHECK(moebius_partition(parse_partition("1|2|3"), parse_partition("123")) == 2);
  CHECK(moebius_partition(parse_partition("1|2|3|4"), parse_partition("12|34")) == 1);
  CHECK_THROWS_AS(moebius_partition(parse_partition("12|3"), parse_partition("13|2")),
                  std::invalid_argument);

  SECTION("closed form matches the recursive definition") {
    for (int n = 1; n <= 5; ++n) {
      const auto all = enumerate_set_partitions(n);
      std::map<std::pair<std::string, std::string>, Weight> memo;
      for (const auto& x : all)
        for (const auto& y : all) {
          if (!refines(x, y)) continue;
          CHECK(moebius_partition(x, y) == moebius_recursive(x, y, all, memo));
        }
    }
  }

  SECTION("interval sums vanish") {
    for (int n = 2; n <= 5; ++n) {
      const auto all = enumerate_set_partitions(n);
      for (const auto& x : all)
        for (const auto& y : all) {
          if (!refines(x, y)) continue;
          Weight acc = 0;
          for (const auto& z : all)
            if (refines(x, z) && refines(z, y)) acc += moebius_partition(z, y);
          CHECK(acc == (x == y ? 1 : 0));
        }
    }
  }
}

TEST_CASE("Cf_Pi weights", "[partition]") {
  const std::vector<Weight> expected{1, -2, 16, -272, 7936, -353792};
  for (int k = 1; k <= 6; ++k) CHECK(cf_pi_single(2 * k) == expected[static_cast<size_t>(k) - 1]);

  SECTION("definition: sum of Moebius values over even refinements") {
    for (int two_n : {2, 4, 6}) {
      const auto evens = enumerate_even_partitions(two_n);
      for (const auto& a : evens) {
        Weight acc = 0;
        for (const auto& b : evens)
          if (refines(b, a)) acc += moebius_partition(b, a);
        CHECK(cf_pi(a) == acc);
      }
    }
  }

  CHECK_THROWS_AS(cf_pi_single(3), std::invalid_argument);
  CHECK_THROWS_AS(cf_pi(parse_partition("123|4")), std::invalid_argument);
}

TEST_CASE("partition text form", "[partition]") {
  CHECK(print_partition(parse_partition("12|3|4")) == "12|3|4");
  CHECK(parse_partition("3|12") == parse_partition("12|3"));

  for (const auto& p : enumerate_set_partitions(6))
    CHECK(parse_partition(print_partition(p)) == p);

  SECTION("comma form past nine elements") {
    auto p = make_set_partition(11, {{1, 10, 2}, {3, 11}, {4}, {5, 6, 7, 8, 9}});
    CHECK(print_partition(p) == "1,2,10|3,11|4|5,6,7,8,9");
    CHECK(parse_partition(print_partition(p)) == p);
    for (const auto& q : enumerate_even_partitions(10))
      CHECK(parse_partition(print_partition(q)) == q);
  }

  CHECK_THROWS_AS(parse_partition(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_partition("12|2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_partition("13"), std::invalid_argument);
  CHECK_THROWS_AS(parse_partition("1,|2"), std::invalid_argument);
}
