#include <doctest.h>

#include <rackmsr/code_c1.hpp>
#include <rackmsr/rng.hpp>

#include <numeric>

using namespace rackmsr;

namespace {

Codeword make_data(const c1::C1Spec& s, std::uint64_t seed) {
  Rng rng(seed);
  Codeword d(static_cast<int>(s.l), s.k, s.field);
  for (int i = 0; i < d.rows(); ++i)
    for (int j = 0; j < d.cols(); ++j) d.at(i, j) = s.field->random(rng);
  return d;
}

// all size-m subsets of [0, n)
std::vector<std::vector<int>> subsets(int n, int m) {
  std::vector<std::vector<int>> out;
  std::vector<int> idx(static_cast<std::size_t>(m));
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    out.push_back(idx);
    int i = m - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - m + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < m; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

}  // namespace

TEST_CASE("builder picks the documented field and generator") {
  auto s = c1::build(4, 2, 5, 3);
  CHECK(s.n == 8);
  CHECK(s.kbar == 2);
  CHECK(s.sbar == 2);
  CHECK(s.l == 16);
  CHECK(s.field->describe() == "17");
  CHECK(s.lambda.encoding() == 3);
  CHECK_FALSE(s.degenerate);

  auto t = c1::build(3, 2, 3, 2);  // k not a multiple of the rack size
  CHECK(t.v == 1);
  CHECK(t.field->describe() == "13");
  CHECK(t.l == 8);
}

TEST_CASE("builder rejects bad parameters") {
  CHECK_THROWS_AS(c1::build(3, 2, 7, 2), std::invalid_argument);  // k > n
  CHECK_THROWS_AS(c1::build(4, 2, 6, 2), std::invalid_argument);  // helpers < k/u
  CHECK_THROWS_AS(c1::build(4, 2, 5, 4), std::invalid_argument);  // helpers > racks-1
  CHECK_THROWS_AS(c1::build(4, 2, 1, 3), std::invalid_argument);  // k < u
  // supplied field must have sbar*n dividing |F|-1
  CHECK_THROWS_AS(c1::build(4, 2, 5, 3, FieldCtx::prime(19)), std::invalid_argument);
  CHECK_NOTHROW(c1::build(4, 2, 5, 3, FieldCtx::prime(97)));  // 16 | 96
}

TEST_CASE("degenerate single-group spec is flagged and still works") {
  auto s = c1::build(2, 2, 2, 1);
  CHECK(s.degenerate);
  CHECK(s.l == 1);
  auto cw = c1::encode(s, make_data(s, 3));
  CHECK(c1::parity_check(s, cw));
  auto rep = c1::repair_node(s, cw, 0, {1});
  CHECK(rep.column == cw.column(0));
  CHECK(rep.transcript.downloaded_elements() == 1);  // full download: l/sbar = l
}

TEST_CASE("encode round trip and parity") {
  for (auto s : {c1::build(4, 2, 5, 3), c1::build(3, 2, 3, 2)}) {
    auto data = make_data(s, 11);
    auto cw = c1::encode(s, data);
    CHECK(c1::parity_check(s, cw));
    for (int i = 0; i < cw.rows(); ++i)
      for (int j = 0; j < s.k; ++j) CHECK(cw.at(i, j) == data.at(i, j));
    // perturbing any single symbol breaks the parity
    Codeword bad = cw;
    bad.at(2 % bad.rows(), 1) += s.field->one();
    CHECK_FALSE(c1::parity_check(s, bad));
  }
}

TEST_CASE("single data symbol updates touch exactly r parities in one row") {
  auto s = c1::build(4, 2, 5, 3);
  auto data = make_data(s, 17);
  auto cw = c1::encode(s, data);
  Rng rng(23);
  for (int probe = 0; probe < 25; ++probe) {
    const int row = static_cast<int>(rng.below(static_cast<std::uint64_t>(s.l)));
    const int col = static_cast<int>(rng.below(static_cast<std::uint64_t>(s.k)));
    Codeword data2 = data;
    data2.at(row, col) += s.field->one();
    auto cw2 = c1::encode(s, data2);
    int changed = 0;
    for (int i = 0; i < cw.rows(); ++i)
      for (int j = s.k; j < s.n; ++j)
        if (cw.at(i, j) != cw2.at(i, j)) {
          ++changed;
          CHECK(i == row);
        }
    CHECK(changed == s.r);
  }
}

TEST_CASE("exhaustive triple-erasure decode") {
  auto s = c1::build(4, 2, 5, 3);
  auto cw = c1::encode(s, make_data(s, 29));
  for (const auto& pattern : subsets(s.n, s.r)) {
    Codeword holes = cw;
    for (int c : pattern)
      for (int i = 0; i < holes.rows(); ++i) holes.at(i, c) = s.field->zero();
    CHECK(c1::erasure_decode(s, holes, pattern) == cw);
  }
  // fewer erasures than parities
  for (const auto& pattern : subsets(s.n, 1)) {
    CHECK(c1::erasure_decode(s, cw, pattern) == cw);
  }
}

TEST_CASE("erasure decode rejects bad inputs") {
  auto s = c1::build(4, 2, 5, 3);
  auto cw = c1::encode(s, make_data(s, 31));
  CHECK_THROWS_AS(c1::erasure_decode(s, cw, {0, 1, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(c1::erasure_decode(s, cw, {0, 0}), std::invalid_argument);
  // corrupt a surviving symbol: with fewer erasures than parities the
  // surviving equations become inconsistent
  Codeword bad = cw;
  bad.at(0, 5) += s.field->one();
  CHECK_THROWS_AS(c1::erasure_decode(s, bad, {0}), std::domain_error);
}

TEST_CASE("repair recovers every node with the metered download") {
  auto s = c1::build(4, 2, 5, 3);
  auto cw = c1::encode(s, make_data(s, 37));
  for (int failed = 0; failed < s.n; ++failed) {
    std::vector<int> racks;
    for (int b = 0; b < s.racks; ++b)
      if (b != s.rack_of(failed)) racks.push_back(b);
    auto rep = c1::repair_node(s, cw, failed, racks);
    CHECK(rep.column == cw.column(failed));
    CHECK(rep.transcript.downloaded_elements() == 24);  // helpers * l / sbar
    for (int b : racks) CHECK(rep.transcript.downloaded_from(b) == s.l / s.sbar);
    // helper nodes are read in full
    for (const auto& [node, rows] : rep.transcript.accessed_rows)
      CHECK(static_cast<long>(rows.size()) == s.l);
    CHECK(rep.transcript.accessed_rows.size() ==
          static_cast<std::size_t>(s.helpers * s.rack_size));
    CHECK(rep.transcript.local_accessed_rows.size() ==
          static_cast<std::size_t>(s.rack_size - 1));
  }
}

TEST_CASE("repair with a proper subset of helper racks") {
  auto s = c1::build(5, 2, 5, 3);  // racks - 1 > helpers: uncontacted racks remain
  auto cw = c1::encode(s, make_data(s, 41));
  for (int failed : {0, 3, 9}) {
    std::vector<int> candidates;
    for (int b = 0; b < s.racks; ++b)
      if (b != s.rack_of(failed)) candidates.push_back(b);
    for (const auto& pick : subsets(static_cast<int>(candidates.size()), s.helpers)) {
      std::vector<int> racks;
      for (int idx : pick) racks.push_back(candidates[static_cast<std::size_t>(idx)]);
      auto rep = c1::repair_node(s, cw, failed, racks);
      CHECK(rep.column == cw.column(failed));
      CHECK(rep.transcript.downloaded_elements() == s.helpers * (s.l / s.sbar));
    }
  }
}

TEST_CASE("repair argument validation") {
  auto s = c1::build(4, 2, 5, 3);
  auto cw = c1::encode(s, make_data(s, 43));
  CHECK_THROWS_AS(c1::repair_node(s, cw, 0, {0, 1, 2}), std::invalid_argument);  // host as helper
  CHECK_THROWS_AS(c1::repair_node(s, cw, 0, {1, 2}), std::invalid_argument);     // too few
  CHECK_THROWS_AS(c1::repair_node(s, cw, 8, {1, 2, 3}), std::invalid_argument);  // bad node
}
