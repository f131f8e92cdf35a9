#include "rackmsr/code_c3.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "rackmsr/digits.hpp"
#include "rackmsr/linalg.hpp"

namespace rackmsr::c3 {
namespace {

void check_codeword_shape(const C3Spec& s, const Codeword& cw, int cols) {
  if (cw.rows() != s.l || cw.cols() != cols)
    throw std::invalid_argument("codeword shape mismatch");
  if (!cw.ctx()->same(*s.field)) throw std::invalid_argument("field context mismatch");
}

std::set<int> checked_erasures(const C3Spec& s, const std::vector<int>& cols) {
  std::set<int> erased(cols.begin(), cols.end());
  if (erased.size() != cols.size()) throw std::invalid_argument("duplicate erased column");
  for (int c : erased)
    if (c < 0 || c >= s.n) throw std::invalid_argument("erased column out of range");
  if (static_cast<int>(erased.size()) > s.r) throw std::invalid_argument("too many erasures");
  return erased;
}

template <typename Fn>
void equation_terms(const C3Spec& s, long i, int t, Fn&& fn) {
  for (int j = 0; j < s.n; ++j) {
    fn(i, j, pow(s.lambda_j[static_cast<std::size_t>(j)], static_cast<long>(t)));
    const int e = s.rack_of(j);
    if (digit_of(i, e, s.sbar) == 0) {
      for (int p = 1; p < s.sbar; ++p)
        fn(with_digit(i, e, s.sbar, p), j,
           pow(s.mu[static_cast<std::size_t>(p - 1)], static_cast<long>(t)));
    }
  }
}

// deterministic multiplier scan; returns false when the field runs out
bool select_mu(C3Spec& s) {
  s.mu.clear();
  if (s.sbar == 1) return true;
  const FieldElement one = s.field->one();
  std::set<std::string> taken_powers;
  for (int e = 0; e < s.racks; ++e)
    taken_powers.insert(pow(s.lambda, static_cast<long>(e) * s.rack_size).str());
  for (mpz_class v = 1; v < s.field->size(); ++v) {
    const FieldElement cand = s.field->from_encoding(v);
    if (pow(cand, static_cast<long>(s.n)) == one) continue;  // inside <lambda>
    const FieldElement cu = pow(cand, static_cast<long>(s.rack_size));
    if (taken_powers.count(cu.str())) continue;
    taken_powers.insert(cu.str());
    s.mu.push_back(cand);
    if (static_cast<int>(s.mu.size()) == s.sbar - 1) return true;
  }
  return false;
}

void assert_repair_matrices(const C3Spec& s) {
  // every repair system draws rbar of these points; check them all
  std::vector<FieldElement> pts;
  for (int e = 0; e < s.racks; ++e)
    pts.push_back(pow(s.lambda, static_cast<long>(e) * s.rack_size));
  for (const auto& m : s.mu) pts.push_back(pow(m, static_cast<long>(s.rack_size)));
  const int npts = static_cast<int>(pts.size());
  std::vector<int> pick(static_cast<std::size_t>(s.rbar));
  for (int i = 0; i < s.rbar; ++i) pick[static_cast<std::size_t>(i)] = i;
  while (true) {
    Matrix V(s.rbar, s.rbar, s.field);
    for (int c = 0; c < s.rbar; ++c) {
      FieldElement acc = s.field->one();
      for (int w = 0; w < s.rbar; ++w) {
        V.at(w, c) = acc;
        acc = acc * pts[static_cast<std::size_t>(pick[static_cast<std::size_t>(c)])];
      }
    }
    if (rank(V) != s.rbar) throw std::logic_error("repair system is singular");
    int i = s.rbar - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == npts - s.rbar + i) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < s.rbar; ++j)
      pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
  }
}

void finish_build(C3Spec& s) {
  s.lambda = element_of_order(s.field, static_cast<std::uint64_t>(s.n));
  s.lambda_j.clear();
  for (int j = 0; j < s.n; ++j) {
    const int e = s.rack_of(j), g = j % s.rack_size;
    s.lambda_j.push_back(pow(s.lambda, static_cast<long>(e) + static_cast<long>(g) * s.racks));
  }
}

}  // namespace

C3Spec build(int racks, int rack_size, int k, int helpers, FieldCtxPtr field) {
  if (racks < 2 || rack_size < 1) throw std::invalid_argument("need at least 2 racks of size >= 1");
  C3Spec s;
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

  const long need = static_cast<long>(s.n) + s.sbar - 1;
  if (field) {
    if (field->size() < need)
      throw std::invalid_argument("field too small: need |F| >= n+sbar-1");
    if (!mpz_divisible_ui_p(field->group_order().get_mpz_t(),
                            static_cast<unsigned long>(s.n)))
      throw std::invalid_argument("n must divide |F|-1");
    s.field = std::move(field);
    finish_build(s);
    if (!select_mu(s))
      throw std::invalid_argument(
          "field has no usable multipliers: need sbar-1 elements outside the "
          "group of lambda with fresh u-th powers");
  } else {
    std::uint64_t p = static_cast<std::uint64_t>(s.n) + 1;
    while (true) {
      if (is_prime_u64(p) && static_cast<long>(p) >= need) {
        s.field = FieldCtx::prime(p);
        finish_build(s);
        if (select_mu(s)) break;
      }
      p += static_cast<std::uint64_t>(s.n);
    }
  }
  assert_repair_matrices(s);
  return s;
}

Codeword encode(const C3Spec& s, const Codeword& data) {
  check_codeword_shape(s, data, s.k);
  const long nunk = static_cast<long>(s.r) * s.l;
  Matrix A(static_cast<int>(nunk), static_cast<int>(nunk), s.field);
  std::vector<FieldElement> b(static_cast<std::size_t>(nunk), s.field->zero());
  long eq = 0;
  for (long i = 0; i < s.l; ++i) {
    for (int t = 0; t < s.r; ++t, ++eq) {
      equation_terms(s, i, t, [&](long row, int j, FieldElement coeff) {
        if (j < s.k) {
          b[static_cast<std::size_t>(eq)] -= coeff * data.at(static_cast<int>(row), j);
        } else {
          A.at(static_cast<int>(eq), static_cast<int>((j - s.k) * s.l + row)) += coeff;
        }
      });
    }
  }
  const auto x = solve(A, b);
  Codeword cw(static_cast<int>(s.l), s.n, s.field);
  for (long i = 0; i < s.l; ++i) {
    for (int j = 0; j < s.k; ++j) cw.at(static_cast<int>(i), j) = data.at(static_cast<int>(i), j);
    for (int j = s.k; j < s.n; ++j)
      cw.at(static_cast<int>(i), j) = x[static_cast<std::size_t>((j - s.k) * s.l + i)];
  }
  return cw;
}

bool parity_check(const C3Spec& s, const Codeword& cw) {
  check_codeword_shape(s, cw, s.n);
  for (long i = 0; i < s.l; ++i) {
    for (int t = 0; t < s.r; ++t) {
      FieldElement acc = s.field->zero();
      equation_terms(s, i, t, [&](long row, int j, FieldElement coeff) {
        acc += coeff * cw.at(static_cast<int>(row), j);
      });
      if (!acc.is_zero()) return false;
    }
  }
  return true;
}

Codeword erasure_decode(const C3Spec& s, const Codeword& cw,
                        const std::vector<int>& erased_cols) {
  check_codeword_shape(s, cw, s.n);
  const std::set<int> erased = checked_erasures(s, erased_cols);
  const int h = static_cast<int>(erased.size());
  Codeword out = cw;
  if (h > 0) {
    const std::vector<int> K(erased.begin(), erased.end());
    std::set<int> eracks;
    for (int j : K) eracks.insert(s.rack_of(j));
    for (int j : K)
      for (long i = 0; i < s.l; ++i) out.at(static_cast<int>(i), j) = s.field->zero();
    std::vector<FieldElement> pts;
    for (int j : K) pts.push_back(s.lambda_j[static_cast<std::size_t>(j)]);

    std::map<int, std::vector<long>> stages;  // by vanishing erased-rack digits
    for (long i = 0; i < s.l; ++i) {
      int a = 0;
      for (int e : eracks)
        if (digit_of(i, e, s.sbar) == 0) ++a;
      stages[a].push_back(i);
    }
    for (const auto& [a, rows] : stages) {
      for (long i : rows) {
        std::vector<FieldElement> rhs;
        for (int t = 0; t < h; ++t) {
          FieldElement acc = s.field->zero();
          for (int j = 0; j < s.n; ++j) {
            const bool is_erased = erased.count(j) > 0;
            if (!is_erased)
              acc += pow(s.lambda_j[static_cast<std::size_t>(j)], static_cast<long>(t)) *
                     out.at(static_cast<int>(i), j);
            const int e = s.rack_of(j);
            if (digit_of(i, e, s.sbar) == 0) {
              // for erased j these rows sit in an earlier stage
              for (int p = 1; p < s.sbar; ++p)
                acc += pow(s.mu[static_cast<std::size_t>(p - 1)], static_cast<long>(t)) *
                       out.at(static_cast<int>(with_digit(i, e, s.sbar, p)), j);
            }
          }
          rhs.push_back(-acc);
        }
        const auto vals = vandermonde_solve(pts, rhs);
        for (std::size_t jj = 0; jj < K.size(); ++jj)
          out.at(static_cast<int>(i), K[jj]) = vals[jj];
      }
    }
  }
  if (!parity_check(s, out)) throw std::domain_error("inconsistent codeword");
  return out;
}

Codeword erasure_decode_generic(const C3Spec& s, const Codeword& cw,
                                const std::vector<int>& erased_cols) {
  check_codeword_shape(s, cw, s.n);
  const std::set<int> erased = checked_erasures(s, erased_cols);
  const int h = static_cast<int>(erased.size());
  if (h == 0) {
    if (!parity_check(s, cw)) throw std::domain_error("inconsistent codeword");
    return cw;
  }
  const std::vector<int> K(erased.begin(), erased.end());
  auto unknown_index = [&](long row, int j) {
    const auto pos = std::find(K.begin(), K.end(), j) - K.begin();
    return static_cast<int>(pos * s.l + row);
  };
  const long neq = static_cast<long>(s.r) * s.l;
  Matrix A(static_cast<int>(neq), static_cast<int>(h * s.l), s.field);
  std::vector<FieldElement> b(static_cast<std::size_t>(neq), s.field->zero());
  long eq = 0;
  for (long i = 0; i < s.l; ++i) {
    for (int t = 0; t < s.r; ++t, ++eq) {
      equation_terms(s, i, t, [&](long row, int j, FieldElement coeff) {
        if (erased.count(j))
          A.at(static_cast<int>(eq), unknown_index(row, j)) += coeff;
        else
          b[static_cast<std::size_t>(eq)] -= coeff * cw.at(static_cast<int>(row), j);
      });
    }
  }
  const auto x = solve(A, b);
  Codeword out = cw;
  for (std::size_t jj = 0; jj < K.size(); ++jj)
    for (long i = 0; i < s.l; ++i)
      out.at(static_cast<int>(i), K[jj]) = x[static_cast<std::size_t>(jj * s.l + i)];
  return out;
}

RepairResult repair_node(const C3Spec& s, const Codeword& cw, int failed,
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

  std::vector<int> J;  // uncontacted racks, host included
  for (int e = 0; e < s.racks; ++e)
    if (!hset.count(e)) J.push_back(e);
  std::vector<long> I;  // rows with vanishing host digit
  for (long i = 0; i < s.l; ++i)
    if (digit_of(i, host, s.sbar) == 0) I.push_back(i);

  RepairResult res;
  RepairTranscript& tr = res.transcript;
  tr.failed_node = failed;
  tr.helper_groups.assign(hset.begin(), hset.end());

  // helper rack sums over the repair rows; only these leave the rack
  std::map<int, std::map<long, FieldElement>> pi;
  for (int e : tr.helper_groups) {
    for (long i : I) {
      FieldElement acc = s.field->zero();
      for (int g = 0; g < s.rack_size; ++g) {
        acc += cw.at(static_cast<int>(i), s.node(e, g));
        tr.accessed_rows[s.node(e, g)].insert(static_cast<int>(i));
      }
      pi[e][i] = acc;
      tr.downloaded[e].push_back(acc);
    }
  }
  for (int g = 0; g < s.rack_size; ++g)
    if (s.node(host, g) != failed)
      for (long i = 0; i < s.l; ++i)
        tr.local_accessed_rows[s.node(host, g)].insert(static_cast<int>(i));

  std::vector<FieldElement> pts;  // mu^u first, then lambda^(e*u) over J
  for (const auto& m : s.mu) pts.push_back(pow(m, static_cast<long>(s.rack_size)));
  for (int e : J)
    pts.push_back(pow(s.lambda, static_cast<long>(e) * s.rack_size));

  std::map<int, std::map<long, FieldElement>> rec;  // rack sums of J racks
  std::map<int, std::vector<long>> stages;
  for (long i : I) {
    int a = 1;
    for (int e : J)
      if (e != host && digit_of(i, e, s.sbar) == 0) ++a;
    stages[a].push_back(i);
  }
  for (const auto& [a, rows] : stages) {
    for (long i : rows) {
      std::vector<FieldElement> rhs;
      for (int w = 0; w < s.rbar; ++w) {
        FieldElement acc = s.field->zero();
        for (int e : tr.helper_groups) {
          acc += pow(pow(s.lambda, static_cast<long>(e) * s.rack_size), static_cast<long>(w)) *
                 pi[e][i];
          if (digit_of(i, e, s.sbar) == 0)
            for (int p = 1; p < s.sbar; ++p)
              acc += pow(pow(s.mu[static_cast<std::size_t>(p - 1)], static_cast<long>(s.rack_size)),
                         static_cast<long>(w)) *
                     pi[e][with_digit(i, e, s.sbar, p)];
        }
        rhs.push_back(-acc);
      }
      const auto sol = vandermonde_solve(pts, rhs);
      for (std::size_t ee = 0; ee < J.size(); ++ee)
        rec[J[ee]][i] = sol[static_cast<std::size_t>(s.sbar - 1) + ee];
      for (int p = 1; p < s.sbar; ++p) {
        FieldElement val = sol[static_cast<std::size_t>(p - 1)];
        for (int e : J) {
          if (e == host || digit_of(i, e, s.sbar) != 0) continue;
          val -= rec[e][with_digit(i, e, s.sbar, p)];
        }
        rec[host][with_digit(i, host, s.sbar, p)] = val;
      }
    }
  }

  // subtract the intact local nodes from the recovered host rack sums
  res.column.reserve(static_cast<std::size_t>(s.l));
  for (long i = 0; i < s.l; ++i) {
    FieldElement val = rec[host][i];
    for (int g = 0; g < s.rack_size; ++g) {
      const int nd = s.node(host, g);
      if (nd != failed) val -= cw.at(static_cast<int>(i), nd);
    }
    res.column.push_back(val);
  }
  return res;
}

}  // namespace rackmsr::c3
