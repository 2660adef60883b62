#include <string>

#include "clustsum/partition.hpp"
#include "doctest.h"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace clustsum;

namespace {

Partition P(std::initializer_list<int> labels) { return canonicalize(labels); }

std::vector<int> labels(const Partition& p) { return oracle::labels_of(p); }

}  // namespace

TEST_CASE("canonicalize relabels by first occurrence") {
  auto p = P({5, 5, 9, 9});
  CHECK(labels(p) == std::vector<int>{0, 0, 1, 1});
  CHECK(p.num_clusters() == 2);
  CHECK(p.sizes() == std::vector<int>{2, 2});

  auto zero = P({0, 1, 2, 3});
  CHECK(labels(zero) == std::vector<int>{0, 1, 2, 3});
  CHECK(zero.num_clusters() == 4);
  CHECK(zero == Partition::zero(4));

  auto s = canonicalize(std::vector<std::string>{"b", "a", "b"});
  CHECK(labels(s) == std::vector<int>{0, 1, 0});
  CHECK(s.num_clusters() == 2);
}

TEST_CASE("canonicalize is idempotent and ignores label identities") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    auto p = gen::random_partition(rng, 9, 5);
    auto raw = labels(p);
    CHECK(Partition::from_labels(raw) == p);
    // Apply an arbitrary injective relabeling.
    for (auto& l : raw) l = 1000 - 7 * l;
    CHECK(Partition::from_labels(raw) == p);
  }
}

TEST_CASE("canonicalize rejects empty input") {
  CHECK_THROWS_WITH_AS(canonicalize(std::vector<int>{}), "empty partition", Error);
  CHECK_THROWS_AS(Partition::from_labels(std::vector<int>{}), Error);
}

TEST_CASE("sizes and clusters are consistent") {
  auto p = P({3, 1, 3, 2, 1});
  CHECK(p.sizes() == std::vector<int>{2, 2, 1});
  auto cl = p.clusters();
  REQUIRE(cl.size() == 3);
  CHECK(cl[0] == std::vector<std::size_t>{0, 2});
  CHECK(cl[1] == std::vector<std::size_t>{1, 4});
  CHECK(cl[2] == std::vector<std::size_t>{3});
  CHECK(Partition::one(4).num_clusters() == 1);
}

TEST_CASE("contingency table") {
  const auto c = P({0, 0, 1, 1});
  auto t = contingency(c, c);
  CHECK(t.rows == 2);
  CHECK(t.cols == 2);
  CHECK(t.counts == std::vector<std::int64_t>{2, 0, 0, 2});

  const auto d = P({0, 1, 2, 1});  // {1}{3}{2,4} written in item order
  t = contingency(c, d);
  // Columns in canonical order of d: {1}, {2,4}, {3}.
  CHECK(t.rows == 2);
  CHECK(t.cols == 3);
  CHECK(t.counts == std::vector<std::int64_t>{1, 1, 0, 0, 1, 1});
  CHECK(t.row_sums == std::vector<std::int64_t>{2, 2});
  CHECK(t.col_sums == std::vector<std::int64_t>{1, 2, 1});
  CHECK(t.total == 4);

  t = contingency(Partition::one(4), Partition::zero(4));
  CHECK(t.rows == 1);
  CHECK(t.counts == std::vector<std::int64_t>{1, 1, 1, 1});

  CHECK_THROWS_AS(contingency(P({0, 0}), P({0, 0, 0})), Error);
}

TEST_CASE("contingency marginals on random pairs") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    auto a = gen::random_partition(rng, 12, 6);
    auto b = gen::random_partition(rng, 12, 6);
    auto tab = contingency(a, b);
    std::int64_t total = 0;
    for (int i = 0; i < tab.rows; ++i) {
      std::int64_t row = 0;
      for (int j = 0; j < tab.cols; ++j) {
        CHECK(tab.at(i, j) >= 0);
        row += tab.at(i, j);
      }
      CHECK(row == tab.row_sums[i]);
      CHECK(row == a.sizes()[i]);
      total += row;
    }
    for (int j = 0; j < tab.cols; ++j) CHECK(tab.col_sums[j] == b.sizes()[j]);
    CHECK(total == 12);
  }
}

TEST_CASE("meet") {
  const auto c = P({0, 0, 1, 1});
  const auto d = P({0, 1, 2, 1});
  CHECK(meet(c, d) == Partition::zero(4));
  CHECK(meet(c, c) == c);
  CHECK(meet(c, Partition::one(4)) == c);
  CHECK_THROWS_AS(meet(P({0}), c), Error);
}

TEST_CASE("join") {
  const auto c = P({0, 0, 1, 1});
  const auto d = P({0, 1, 1, 2});  // {2,3}{1}{4}
  CHECK(join(c, d) == Partition::one(4));
  CHECK(join(c, Partition::zero(4)) == c);
  CHECK(join(c, c) == c);
  CHECK_THROWS_AS(join(P({0}), c), Error);
}

TEST_CASE("leq") {
  const auto c = P({0, 0, 1, 1});
  const auto d = P({0, 1, 2, 1});
  CHECK(leq(Partition::zero(4), c));
  CHECK(leq(Partition::zero(4), d));
  CHECK_FALSE(leq(c, d));
  CHECK_FALSE(leq(d, c));
  CHECK(leq(c, c));
  CHECK_THROWS_AS(leq(P({0}), c), Error);
}

TEST_CASE("covers") {
  CHECK(covers(Partition::one(4), P({0, 0, 1, 1})));
  CHECK_FALSE(covers(Partition::one(4), Partition::zero(4)));
  const auto c = P({0, 1, 0, 2});
  CHECK_FALSE(covers(c, c));
  CHECK_FALSE(covers(P({0, 0, 1, 1}), Partition::one(4)));
  CHECK_THROWS_AS(covers(P({0}), c), Error);
}

TEST_CASE("enumeration counts match Bell numbers") {
  for (std::size_t n = 1; n <= 8; ++n) {
    CHECK(enumerate_partitions(n).size() == oracle::bell(n));
  }
  CHECK(enumerate_partitions(4).size() == 15);
  CHECK(enumerate_partitions(1).size() == 1);
  CHECK(enumerate_partitions(5).size() == 52);
}

TEST_CASE("enumeration yields every partition once, canonical, in lexicographic order") {
  for (std::size_t n = 1; n <= 7; ++n) {
    const auto mine = enumerate_partitions(n);
    std::set<std::vector<int>> expected;
    for (const auto& raw : oracle::all_partitions(n)) {
      expected.insert(labels(Partition::from_labels(raw)));
    }
    std::set<std::vector<int>> got;
    for (const auto& p : mine) {
      CHECK(Partition::from_labels(labels(p)) == p);
      got.insert(labels(p));
    }
    CHECK(got.size() == mine.size());
    CHECK(got == expected);
    CHECK(std::is_sorted(mine.begin(), mine.end()));
    CHECK(mine.front() == Partition::one(n));
    CHECK(mine.back() == Partition::zero(n));
  }
}

TEST_CASE("enumeration guard") {
  CHECK_THROWS_AS(enumerate_partitions(13), Error);
  CHECK_THROWS_AS(PartitionEnumerator(13), Error);
  CHECK(enumerate_partitions(3, 3).size() == 5);
  CHECK_THROWS_AS(enumerate_partitions(4, 3), Error);
  try {
    enumerate_partitions(20);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("enumeration too large") != std::string::npos);
  }
}

TEST_CASE("poset axioms and lattice laws, exhaustive") {
  for (std::size_t n : {4u, 5u}) {
    const auto all = enumerate_partitions(n);
    for (const auto& a : all) {
      CHECK(leq(a, a));
      for (const auto& b : all) {
        const bool ab = leq(a, b);
        CHECK(ab == oracle::leq(a, b));
        if (ab && leq(b, a)) CHECK(a == b);
        const auto m = meet(a, b);
        const auto j = join(a, b);
        CHECK(m == oracle::meet(a, b));
        CHECK(j == oracle::join(a, b));
        CHECK(m == meet(b, a));
        CHECK(j == join(b, a));
        CHECK(meet(a, j) == a);
        CHECK(join(a, m) == a);
        CHECK(ab == (m == a));
        CHECK(ab == (j == b));
        CHECK(m.num_clusters() == [&] {
          auto t = contingency(a, b);
          int nonzero = 0;
          for (auto v : t.counts) nonzero += v > 0;
          return nonzero;
        }());
        if (covers(b, a)) {
          CHECK(ab);
          CHECK(b.num_clusters() == a.num_clusters() - 1);
        }
      }
    }
  }
}

TEST_CASE("transitivity and associativity over all triples at N=4") {
  const auto all = enumerate_partitions(4);
  for (const auto& a : all) {
    for (const auto& b : all) {
      for (const auto& c : all) {
        if (leq(a, b) && leq(b, c)) CHECK(leq(a, c));
        CHECK(meet(meet(a, b), c) == meet(a, meet(b, c)));
        CHECK(join(join(a, b), c) == join(a, join(b, c)));
      }
    }
  }
}

TEST_CASE("covers matches the definition on the Hasse diagram") {
  const auto all = enumerate_partitions(5);
  for (const auto& c : all) {
    for (const auto& d : all) {
      // d covers c iff c < d and nothing lies strictly between.
      bool expected = leq(c, d) && !(c == d);
      if (expected) {
        for (const auto& e : all) {
          if (!(e == c) && !(e == d) && leq(c, e) && leq(e, d)) {
            expected = false;
            break;
          }
        }
      }
      CHECK(covers(d, c) == expected);
    }
  }
}

TEST_CASE("partition hash distinguishes and agrees with equality") {
  PartitionHash h;
  CHECK(h(P({0, 0, 1})) == h(P({4, 4, 2})));
  std::unordered_map<Partition, int, PartitionHash> m;
  for (const auto& p : enumerate_partitions(6)) m[p] += 1;
  CHECK(m.size() == 203);
}
