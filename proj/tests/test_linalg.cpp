#include <doctest.h>

#include <rackmsr/linalg.hpp>
#include <rackmsr/rng.hpp>

using namespace rackmsr;

TEST_CASE("2x2 solve over GF(5)") {
  auto f5 = FieldCtx::prime(5);
  Matrix A(2, 2, f5);
  A.at(0, 0) = f5->scalar(1);
  A.at(0, 1) = f5->scalar(1);
  A.at(1, 0) = f5->scalar(1);
  A.at(1, 1) = f5->scalar(2);
  std::vector<FieldElement> b{f5->scalar(0), f5->scalar(1)};
  auto x = solve(A, b);
  CHECK(x[0].encoding() == 4);
  CHECK(x[1].encoding() == 1);
}

TEST_CASE("singular and inconsistent systems are reported") {
  auto f5 = FieldCtx::prime(5);
  Matrix S(2, 2, f5);
  S.at(0, 0) = f5->scalar(1);
  S.at(0, 1) = f5->scalar(2);
  S.at(1, 0) = f5->scalar(2);
  S.at(1, 1) = f5->scalar(4);
  std::vector<FieldElement> b{f5->scalar(1), f5->scalar(1)};
  CHECK_THROWS_AS(solve(S, b), std::domain_error);
  CHECK(rank(S) == 1);

  // overdetermined consistent: duplicate an equation
  Matrix O(3, 2, f5);
  O.at(0, 0) = f5->scalar(1);
  O.at(0, 1) = f5->scalar(1);
  O.at(1, 0) = f5->scalar(1);
  O.at(1, 1) = f5->scalar(2);
  O.at(2, 0) = f5->scalar(2);
  O.at(2, 1) = f5->scalar(2);
  std::vector<FieldElement> b3{f5->scalar(0), f5->scalar(1), f5->scalar(0)};
  auto x = solve(O, b3);
  CHECK(x[0].encoding() == 4);
  CHECK(x[1].encoding() == 1);

  // same rows, contradictory right-hand side
  b3[2] = f5->scalar(3);
  CHECK_THROWS_AS(solve(O, b3), std::domain_error);
}

TEST_CASE("solve then multiply back, random square systems") {
  for (auto ctx : {FieldCtx::prime(17), FieldCtx::extension(2, 8)}) {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 1 + static_cast<int>(rng.below(8));
      Matrix A(n, n, ctx);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A.at(i, j) = ctx->random(rng);
      std::vector<FieldElement> b;
      for (int i = 0; i < n; ++i) b.push_back(ctx->random(rng));
      if (rank(A) < n) continue;
      auto x = solve(A, b);
      CHECK(A.apply(x) == b);
      auto I = inverse(A) * A;
      CHECK(I.at(0, 0) == ctx->one());
    }
  }
}

TEST_CASE("vandermonde solve agrees with generic solve") {
  auto ctx = FieldCtx::prime(17);
  Rng rng(9);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(12));
    // draw distinct points (zero allowed)
    std::vector<FieldElement> pts;
    while (static_cast<int>(pts.size()) < n) {
      auto c = ctx->random(rng);
      bool dup = false;
      for (const auto& q : pts) dup |= (q == c);
      if (!dup) pts.push_back(c);
    }
    std::vector<FieldElement> rhs;
    for (int i = 0; i < n; ++i) rhs.push_back(ctx->random(rng));
    auto x = vandermonde_solve(pts, rhs);
    Matrix V(n, n, ctx);
    for (int t = 0; t < n; ++t) {
      auto acc = ctx->one();
      for (int w = 0; w < n; ++w) {
        V.at(w, t) = acc;
        acc = acc * pts[static_cast<std::size_t>(t)];
      }
    }
    CHECK(solve(V, rhs) == x);
    CHECK(V.apply(x) == rhs);
  }
}

TEST_CASE("vandermonde rejects repeated points") {
  auto ctx = FieldCtx::prime(17);
  std::vector<FieldElement> pts{ctx->scalar(3), ctx->scalar(3)};
  std::vector<FieldElement> rhs{ctx->one(), ctx->zero()};
  CHECK_THROWS_AS(vandermonde_solve(pts, rhs), std::invalid_argument);
}
