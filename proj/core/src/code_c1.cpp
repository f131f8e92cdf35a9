#include "rackmsr/code_c1.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "rackmsr/digits.hpp"
#include "rackmsr/linalg.hpp"

namespace rackmsr::c1 {
namespace {

long point_exponent(const C1Spec& s, long row, int nd) {
  const int e = s.rack_of(nd), g = nd % s.rack_size;
  return static_cast<long>(e) * s.sbar + digit_of(row, e, s.sbar) +
         static_cast<long>(g) * s.sbar * s.racks;
}

std::vector<FieldElement> row_points(const C1Spec& s, long row) {
  std::vector<FieldElement> pts;
  pts.reserve(static_cast<std::size_t>(s.n));
  for (int nd = 0; nd < s.n; ++nd) pts.push_back(s.row_point(row, nd));
  return pts;
}

void check_codeword_shape(const C1Spec& s, const Codeword& cw, int cols) {
  if (cw.rows() != s.l || cw.cols() != cols)
    throw std::invalid_argument("codeword shape mismatch");
  if (!cw.ctx()->same(*s.field)) throw std::invalid_argument("field context mismatch");
}

}  // namespace

FieldElement C1Spec::row_point(long row, int nd) const {
  return pow(lambda, point_exponent(*this, row, nd));
}

C1Spec build(int racks, int rack_size, int k, int helpers, FieldCtxPtr field) {
  if (racks < 2 || rack_size < 1) throw std::invalid_argument("need at least 2 racks of size >= 1");
  C1Spec s;
  s.racks = racks;
  s.rack_size = rack_size;
  s.k = k;
  s.helpers = helpers;
  s.n = racks * rack_size;
  s.r = s.n - k;
  if (k < rack_size) throw std::invalid_argument("k must be at least the rack size");
  if (s.r < 1) throw std::invalid_argument("k must be smaller than the number of nodes");
  s.kbar = k / rack_size;
  s.v = k - s.kbar * rack_size;
  s.rbar = racks - s.kbar;
  if (helpers < s.kbar || helpers > racks - 1)
    throw std::invalid_argument("helper rack count must lie in [k/u, racks-1]");
  s.sbar = helpers - s.kbar + 1;
  s.l = pow_long(s.sbar, racks);
  s.degenerate = (s.sbar == 1);

  const long group = static_cast<long>(s.sbar) * s.n;
  if (field) {
    if (field->size() <= group)
      throw std::invalid_argument("field too small: need |F| > sbar*n");
    if (!mpz_divisible_ui_p(field->group_order().get_mpz_t(),
                            static_cast<unsigned long>(group)))
      throw std::invalid_argument("sbar*n must divide |F|-1");
    s.field = std::move(field);
  } else {
    std::uint64_t p = static_cast<std::uint64_t>(group) + 1;
    while (!is_prime_u64(p)) p += static_cast<std::uint64_t>(group);
    s.field = FieldCtx::prime(p);
  }
  s.lambda = element_of_order(s.field, static_cast<std::uint64_t>(group));

  // within every row the n evaluation points must be pairwise distinct;
  // exponents lie in [0, sbar*n) so it suffices to compare them as integers
  for (long row = 0; row < s.l; ++row) {
    std::set<long> exps;
    for (int nd = 0; nd < s.n; ++nd) exps.insert(point_exponent(s, row, nd));
    if (static_cast<int>(exps.size()) != s.n)
      throw std::logic_error("evaluation points collide");
  }
  return s;
}

Codeword encode(const C1Spec& s, const Codeword& data) {
  check_codeword_shape(s, data, s.k);
  Codeword cw(static_cast<int>(s.l), s.n, s.field);
  for (long row = 0; row < s.l; ++row) {
    const auto pts = row_points(s, row);
    std::vector<FieldElement> rhs;
    rhs.reserve(static_cast<std::size_t>(s.r));
    for (int t = 0; t < s.r; ++t) {
      FieldElement acc = s.field->zero();
      for (int c = 0; c < s.k; ++c)
        acc += pow(pts[static_cast<std::size_t>(c)], static_cast<long>(t)) *
               data.at(static_cast<int>(row), c);
      rhs.push_back(-acc);
    }
    const std::vector<FieldElement> ppts(pts.begin() + s.k, pts.end());
    const auto parities = vandermonde_solve(ppts, rhs);
    for (int c = 0; c < s.k; ++c) cw.at(static_cast<int>(row), c) = data.at(static_cast<int>(row), c);
    for (int c = s.k; c < s.n; ++c)
      cw.at(static_cast<int>(row), c) = parities[static_cast<std::size_t>(c - s.k)];
  }
  return cw;
}

bool parity_check(const C1Spec& s, const Codeword& cw) {
  check_codeword_shape(s, cw, s.n);
  for (long row = 0; row < s.l; ++row) {
    const auto pts = row_points(s, row);
    for (int t = 0; t < s.r; ++t) {
      FieldElement acc = s.field->zero();
      for (int c = 0; c < s.n; ++c)
        acc += pow(pts[static_cast<std::size_t>(c)], static_cast<long>(t)) *
               cw.at(static_cast<int>(row), c);
      if (!acc.is_zero()) return false;
    }
  }
  return true;
}

Codeword erasure_decode(const C1Spec& s, const Codeword& cw,
                        const std::vector<int>& erased_cols) {
  check_codeword_shape(s, cw, s.n);
  std::set<int> erased(erased_cols.begin(), erased_cols.end());
  if (static_cast<int>(erased.size()) != static_cast<int>(erased_cols.size()))
    throw std::invalid_argument("duplicate erased column");
  for (int c : erased)
    if (c < 0 || c >= s.n) throw std::invalid_argument("erased column out of range");
  const int h = static_cast<int>(erased.size());
  if (h > s.r) throw std::invalid_argument("too many erasures");

  Codeword out = cw;
  if (h > 0) {
    for (long row = 0; row < s.l; ++row) {
      const auto pts = row_points(s, row);
      std::vector<FieldElement> epts, rhs;
      for (int c : erased) epts.push_back(pts[static_cast<std::size_t>(c)]);
      for (int t = 0; t < h; ++t) {
        FieldElement acc = s.field->zero();
        for (int c = 0; c < s.n; ++c) {
          if (erased.count(c)) continue;
          acc += pow(pts[static_cast<std::size_t>(c)], static_cast<long>(t)) *
                 cw.at(static_cast<int>(row), c);
        }
        rhs.push_back(-acc);
      }
      const auto vals = vandermonde_solve(epts, rhs);
      std::size_t idx = 0;
      for (int c : erased) out.at(static_cast<int>(row), c) = vals[idx++];
    }
  }
  if (!parity_check(s, out)) throw std::domain_error("inconsistent codeword");
  return out;
}

RepairResult repair_node(const C1Spec& s, const Codeword& cw, int failed,
                         const std::vector<int>& helper_racks) {
  check_codeword_shape(s, cw, s.n);
  if (failed < 0 || failed >= s.n) throw std::invalid_argument("failed node out of range");
  const int host = s.rack_of(failed);
  std::set<int> hset(helper_racks.begin(), helper_racks.end());
  if (static_cast<int>(hset.size()) != s.helpers)
    throw std::invalid_argument("need exactly the configured number of distinct helper racks");
  for (int b : hset) {
    if (b < 0 || b >= s.racks) throw std::invalid_argument("helper rack out of range");
    if (b == host) throw std::invalid_argument("host rack cannot be a helper");
  }
  std::vector<int> others;  // racks neither host nor helper: their sums are unknowns
  for (int q = 0; q < s.racks; ++q)
    if (q != host && !hset.count(q)) others.push_back(q);

  RepairResult res;
  RepairTranscript& tr = res.transcript;
  tr.failed_node = failed;
  tr.helper_groups.assign(hset.begin(), hset.end());
  for (int b : hset)
    for (int g = 0; g < s.rack_size; ++g)
      for (long row = 0; row < s.l; ++row)
        tr.accessed_rows[s.node(b, g)].insert(static_cast<int>(row));
  for (int g = 0; g < s.rack_size; ++g)
    if (s.node(host, g) != failed)
      for (long row = 0; row < s.l; ++row)
        tr.local_accessed_rows[s.node(host, g)].insert(static_cast<int>(row));

  const FieldElement alpha = pow(s.lambda, static_cast<long>(s.rack_size));
  res.column.assign(static_cast<std::size_t>(s.l), s.field->zero());

  const long groups = s.l / s.sbar;
  for (long grp = 0; grp < groups; ++grp) {
    // base row of this group: digits of grp spread over every rack but host
    long base = 0;
    long rem = grp;
    for (int e = 0; e < s.racks; ++e) {
      if (e == host) continue;
      base = with_digit(base, e, s.sbar, static_cast<int>(rem % s.sbar));
      rem /= s.sbar;
    }

    // one aggregate per helper rack: sum of its rack over the group's rows
    std::vector<FieldElement> sigma;
    for (int b : tr.helper_groups) {
      FieldElement acc = s.field->zero();
      for (int a = 0; a < s.sbar; ++a) {
        const long row = with_digit(base, host, s.sbar, a);
        for (int g = 0; g < s.rack_size; ++g)
          acc += cw.at(static_cast<int>(row), s.node(b, g));
      }
      sigma.push_back(acc);
      tr.downloaded[b].push_back(acc);
    }

    // unknowns: host rack sums per row of the group, then the uncontacted
    // rack sums; points are powers of alpha with distinct exponents
    std::vector<FieldElement> pts;
    for (int a = 0; a < s.sbar; ++a)
      pts.push_back(pow(alpha, static_cast<long>(host) * s.sbar + a));
    for (int q : others)
      pts.push_back(pow(alpha, static_cast<long>(q) * s.sbar + digit_of(base, q, s.sbar)));

    std::vector<FieldElement> rhs;
    for (int w = 0; w < s.rbar; ++w) {
      FieldElement acc = s.field->zero();
      for (std::size_t bi = 0; bi < tr.helper_groups.size(); ++bi) {
        const int b = tr.helper_groups[bi];
        const long expo = (static_cast<long>(b) * s.sbar + digit_of(base, b, s.sbar)) * w;
        acc += pow(alpha, expo) * sigma[bi];
      }
      rhs.push_back(-acc);
    }

    const auto sol = vandermonde_solve(pts, rhs);
    for (int a = 0; a < s.sbar; ++a) {
      const long row = with_digit(base, host, s.sbar, a);
      FieldElement val = sol[static_cast<std::size_t>(a)];
      for (int g = 0; g < s.rack_size; ++g) {
        const int nd = s.node(host, g);
        if (nd != failed) val -= cw.at(static_cast<int>(row), nd);
      }
      res.column[static_cast<std::size_t>(row)] = val;
    }
  }
  return res;
}

}  // namespace rackmsr::c1
