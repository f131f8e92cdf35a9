// Micro-benchmarks for the hot paths: field arithmetic (small prime field
// and the degree-210 extension), systematic encoding, erasure decoding, and
// single-node repair for each code family.  Code builds happen once outside
// the timed loops; the reported numbers are per operation.
#include <benchmark/benchmark.h>

#include "rackmsr/code_c1.hpp"
#include "rackmsr/code_c3.hpp"
#include "rackmsr/code_oa.hpp"
#include "rackmsr/code_rs.hpp"
#include "rackmsr/codeword.hpp"
#include "rackmsr/rng.hpp"

namespace {

using namespace rackmsr;

Codeword random_grid(int rows, int cols, const FieldCtxPtr& f, std::uint64_t seed) {
  Rng rng(seed);
  Codeword data(rows, cols, f);
  for (int w = 0; w < rows; ++w)
    for (int j = 0; j < cols; ++j) data.at(w, j) = f->random(rng);
  return data;
}

const c1::C1Spec& c1_spec() {
  static const c1::C1Spec s = c1::build(4, 2, 5, 3);
  return s;
}

const oa::OASpec& oa_spec() {
  static const oa::OASpec s = oa::build(4, 2, 3);
  return s;
}

const c3::C3Spec& c3_spec() {
  static const c3::C3Spec s = c3::build(3, 2, 3, 2);
  return s;
}

const rs::RSSpec& rs_spec() {
  static const rs::RSSpec s = rs::build(3, 3, 2, 3, 2);
  return s;
}

// ------------------------------------------------------------ field arithmetic

void BM_field_mul_prime(benchmark::State& state) {
  const auto f = FieldCtx::prime(17);
  Rng rng(1);
  FieldElement a = f->random(rng), b = f->random(rng);
  while (b.is_zero()) b = f->random(rng);
  for (auto _ : state) {
    a = a * b;
    benchmark::DoNotOptimize(a);
  }
}
BENCHMARK(BM_field_mul_prime);

void BM_field_mul_ext210(benchmark::State& state) {
  const auto& f = rs_spec().field;
  Rng rng(2);
  FieldElement a = f->random(rng), b = f->random(rng);
  for (auto _ : state) {
    a = a * b;
    benchmark::DoNotOptimize(a);
  }
}
BENCHMARK(BM_field_mul_ext210);

void BM_field_inv_ext210(benchmark::State& state) {
  const auto& f = rs_spec().field;
  Rng rng(3);
  FieldElement a = f->random(rng);
  while (a.is_zero()) a = f->random(rng);
  for (auto _ : state) {
    a = inverse(a);
    benchmark::DoNotOptimize(a);
  }
}
BENCHMARK(BM_field_inv_ext210);

// ---------------------------------------------------------------------- encode

void BM_encode_c1(benchmark::State& state) {
  const auto& s = c1_spec();
  const auto data = random_grid(static_cast<int>(s.l), s.k, s.field, 11);
  for (auto _ : state) benchmark::DoNotOptimize(c1::encode(s, data));
}
BENCHMARK(BM_encode_c1);

void BM_encode_oa(benchmark::State& state) {
  const auto& s = oa_spec();
  const auto data = random_grid(static_cast<int>(s.l), s.k, s.field, 12);
  for (auto _ : state) benchmark::DoNotOptimize(oa::encode(s, data));
}
BENCHMARK(BM_encode_oa);

void BM_encode_c3(benchmark::State& state) {
  const auto& s = c3_spec();
  const auto data = random_grid(static_cast<int>(s.l), s.k, s.field, 13);
  for (auto _ : state) benchmark::DoNotOptimize(c3::encode(s, data));
}
BENCHMARK(BM_encode_c3);

void BM_encode_rs(benchmark::State& state) {
  const auto& s = rs_spec();
  const auto data = random_grid(1, s.k, s.field, 14);
  for (auto _ : state) benchmark::DoNotOptimize(rs::encode(s, data));
}
BENCHMARK(BM_encode_rs);

// ---------------------------------------------------------------------- decode

void BM_decode_c1_worst(benchmark::State& state) {
  const auto& s = c1_spec();
  const auto cw = c1::encode(s, random_grid(static_cast<int>(s.l), s.k, s.field, 21));
  const std::vector<int> pattern = {0, 3, 6};
  Codeword holes = cw;
  for (int c : pattern)
    for (int w = 0; w < holes.rows(); ++w) holes.at(w, c) = s.field->zero();
  for (auto _ : state)
    benchmark::DoNotOptimize(c1::erasure_decode(s, holes, pattern));
}
BENCHMARK(BM_decode_c1_worst);

void BM_decode_oa_inductive(benchmark::State& state) {
  const auto& s = oa_spec();
  const auto cw = oa::encode(s, random_grid(static_cast<int>(s.l), s.k, s.field, 22));
  const std::vector<int> pattern = {1, 2};
  Codeword holes = cw;
  for (int c : pattern)
    for (int w = 0; w < holes.rows(); ++w) holes.at(w, c) = s.field->zero();
  for (auto _ : state)
    benchmark::DoNotOptimize(oa::erasure_decode(s, holes, pattern));
}
BENCHMARK(BM_decode_oa_inductive);

void BM_decode_oa_generic(benchmark::State& state) {
  const auto& s = oa_spec();
  const auto cw = oa::encode(s, random_grid(static_cast<int>(s.l), s.k, s.field, 22));
  const std::vector<int> pattern = {1, 2};
  Codeword holes = cw;
  for (int c : pattern)
    for (int w = 0; w < holes.rows(); ++w) holes.at(w, c) = s.field->zero();
  for (auto _ : state)
    benchmark::DoNotOptimize(oa::erasure_decode_generic(s, holes, pattern));
}
BENCHMARK(BM_decode_oa_generic);

// ---------------------------------------------------------------------- repair

void BM_repair_c1(benchmark::State& state) {
  const auto& s = c1_spec();
  const auto cw = c1::encode(s, random_grid(static_cast<int>(s.l), s.k, s.field, 31));
  for (auto _ : state)
    benchmark::DoNotOptimize(c1::repair_node(s, cw, 0, {1, 2, 3}));
}
BENCHMARK(BM_repair_c1);

void BM_repair_oa(benchmark::State& state) {
  const auto& s = oa_spec();
  const auto cw = oa::encode(s, random_grid(static_cast<int>(s.l), s.k, s.field, 32));
  for (auto _ : state)
    benchmark::DoNotOptimize(oa::repair_node(s, cw, 0, {1, 2, 3}));
}
BENCHMARK(BM_repair_oa);

void BM_repair_c3(benchmark::State& state) {
  const auto& s = c3_spec();
  const auto cw = c3::encode(s, random_grid(static_cast<int>(s.l), s.k, s.field, 33));
  for (auto _ : state)
    benchmark::DoNotOptimize(c3::repair_node(s, cw, 0, {1, 2}));
}
BENCHMARK(BM_repair_c3);

void BM_repair_rs(benchmark::State& state) {
  const auto& s = rs_spec();
  const auto cw = rs::encode(s, random_grid(1, s.k, s.field, 34));
  for (auto _ : state)
    benchmark::DoNotOptimize(rs::repair_node(s, cw, 0, {1, 2}));
}
BENCHMARK(BM_repair_rs);

}  // namespace

BENCHMARK_MAIN();
