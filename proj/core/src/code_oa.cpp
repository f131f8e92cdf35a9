#include "rackmsr/code_oa.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "rackmsr/digits.hpp"
#include "rackmsr/linalg.hpp"

namespace rackmsr::oa {
namespace {

void check_codeword_shape(const OASpec& s, const Codeword& cw, int cols) {
  if (cw.rows() != s.l || cw.cols() != cols)
    throw std::invalid_argument("codeword shape mismatch");
  if (!cw.ctx()->same(*s.field)) throw std::invalid_argument("field context mismatch");
}

std::set<int> checked_erasures(const OASpec& s, const std::vector<int>& cols) {
  std::set<int> erased(cols.begin(), cols.end());
  if (erased.size() != cols.size()) throw std::invalid_argument("duplicate erased column");
  for (int c : erased)
    if (c < 0 || c >= s.n) throw std::invalid_argument("erased column out of range");
  if (static_cast<int>(erased.size()) > s.r) throw std::invalid_argument("too many erasures");
  return erased;
}

// visits every (row, node) cell appearing in parity equation (i, t) together
// with its coefficient; fn(row, node, coeff)
template <typename Fn>
void equation_terms(const OASpec& s, long i, int t, Fn&& fn) {
  for (int j = 0; j < s.n; ++j) {
    fn(i, j, pow(s.lambda[static_cast<std::size_t>(j)], static_cast<long>(t)));
    if (digit_of(i, j, s.s) == 0) {
      for (int p = 1; p < s.s; ++p)
        fn(with_digit(i, j, s.s, p), j,
           pow(s.mu[static_cast<std::size_t>(p - 1)], static_cast<long>(t)));
    }
  }
}

}  // namespace

std::vector<FieldElement> OASpec::all_points() const {
  std::vector<FieldElement> pts = lambda;
  pts.insert(pts.end(), mu.begin(), mu.end());
  return pts;
}

OASpec build(int n, int k, int d, FieldCtxPtr field, std::vector<FieldElement> lambda,
             std::vector<FieldElement> mu) {
  if (n < 2) throw std::invalid_argument("need at least 2 nodes");
  if (k < 1 || k >= n) throw std::invalid_argument("k must lie in [1, n-1]");
  if (d < k || d > n - 1) throw std::invalid_argument("helper count must lie in [k, n-1]");
  OASpec s;
  s.n = n;
  s.k = k;
  s.d = d;
  s.r = n - k;
  s.s = d - k + 1;
  s.l = pow_long(s.s, n);
  s.degenerate = (s.s == 1);

  const long need = static_cast<long>(n) + s.s - 1;
  if (field) {
    if (field->size() < need)
      throw std::invalid_argument("field too small: need |F| >= n+s-1");
    s.field = std::move(field);
  } else {
    std::uint64_t p = static_cast<std::uint64_t>(need);
    if (p < 2) p = 2;
    while (!is_prime_u64(p)) ++p;
    s.field = FieldCtx::prime(p);
  }

  if (lambda.empty()) {
    for (int j = 0; j < n; ++j) s.lambda.push_back(s.field->scalar(static_cast<std::uint64_t>(j)));
  } else {
    s.lambda = std::move(lambda);
  }
  if (mu.empty()) {
    for (int p = 1; p < s.s; ++p)
      s.mu.push_back(s.field->scalar(static_cast<std::uint64_t>(n - 1 + p)));
  } else {
    s.mu = std::move(mu);
  }
  if (static_cast<int>(s.lambda.size()) != n || static_cast<int>(s.mu.size()) != s.s - 1)
    throw std::invalid_argument("need n lambda points and s-1 mu points");
  const auto pts = s.all_points();
  for (const auto& e : pts)
    if (!e.ctx() || !e.ctx()->same(*s.field))
      throw std::invalid_argument("evaluation point from a different field");
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = a + 1; b < pts.size(); ++b)
      if (pts[a] == pts[b]) throw std::invalid_argument("evaluation points must be pairwise distinct");
  return s;
}

Codeword encode(const OASpec& s, const Codeword& data) {
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

bool parity_check(const OASpec& s, const Codeword& cw) {
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

Codeword erasure_decode(const OASpec& s, const Codeword& cw,
                        const std::vector<int>& erased_cols) {
  check_codeword_shape(s, cw, s.n);
  const std::set<int> erased = checked_erasures(s, erased_cols);
  const int h = static_cast<int>(erased.size());
  Codeword out = cw;
  if (h > 0) {
    const std::vector<int> J(erased.begin(), erased.end());
    for (int j : J)
      for (long i = 0; i < s.l; ++i) out.at(static_cast<int>(i), j) = s.field->zero();
    std::vector<FieldElement> pts;
    for (int j : J) pts.push_back(s.lambda[static_cast<std::size_t>(j)]);

    // rows grouped by which erased-node digits vanish; solve in order of
    // pattern size so coupled rows are already recovered when referenced
    std::map<int, std::vector<long>> stages;
    for (long i = 0; i < s.l; ++i) {
      int a = 0;
      for (int j : J)
        if (digit_of(i, j, s.s) == 0) ++a;
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
              acc += pow(s.lambda[static_cast<std::size_t>(j)], static_cast<long>(t)) *
                     out.at(static_cast<int>(i), j);
            if (digit_of(i, j, s.s) == 0) {
              // rows i(j,p) have digit j nonzero: for erased j they belong to
              // an earlier stage and are already present in `out`
              for (int p = 1; p < s.s; ++p)
                acc += pow(s.mu[static_cast<std::size_t>(p - 1)], static_cast<long>(t)) *
                       out.at(static_cast<int>(with_digit(i, j, s.s, p)), j);
            }
          }
          rhs.push_back(-acc);
        }
        const auto vals = vandermonde_solve(pts, rhs);
        for (std::size_t jj = 0; jj < J.size(); ++jj)
          out.at(static_cast<int>(i), J[jj]) = vals[jj];
      }
    }
  }
  if (!parity_check(s, out)) throw std::domain_error("inconsistent codeword");
  return out;
}

Codeword erasure_decode_generic(const OASpec& s, const Codeword& cw,
                                const std::vector<int>& erased_cols) {
  check_codeword_shape(s, cw, s.n);
  const std::set<int> erased = checked_erasures(s, erased_cols);
  const int h = static_cast<int>(erased.size());
  if (h == 0) {
    if (!parity_check(s, cw)) throw std::domain_error("inconsistent codeword");
    return cw;
  }
  const std::vector<int> J(erased.begin(), erased.end());
  auto unknown_index = [&](long row, int j) {
    const auto pos = std::find(J.begin(), J.end(), j) - J.begin();
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
  for (std::size_t jj = 0; jj < J.size(); ++jj)
    for (long i = 0; i < s.l; ++i)
      out.at(static_cast<int>(i), J[jj]) = x[static_cast<std::size_t>(jj * s.l + i)];
  return out;
}

RepairResult repair_node(const OASpec& s, const Codeword& cw, int failed,
                         const std::vector<int>& helper_nodes) {
  check_codeword_shape(s, cw, s.n);
  if (failed < 0 || failed >= s.n) throw std::invalid_argument("failed node out of range");
  std::set<int> hset(helper_nodes.begin(), helper_nodes.end());
  if (static_cast<int>(hset.size()) != s.d)
    throw std::invalid_argument("need exactly the configured number of distinct helpers");
  for (int j : hset) {
    if (j < 0 || j >= s.n) throw std::invalid_argument("helper node out of range");
    if (j == failed) throw std::invalid_argument("failed node cannot help itself");
  }

  std::vector<int> J;  // uncontacted nodes, failed included
  for (int j = 0; j < s.n; ++j)
    if (!hset.count(j)) J.push_back(j);
  std::vector<long> I;  // rows every helper sends
  for (long i = 0; i < s.l; ++i)
    if (digit_of(i, failed, s.s) == 0) I.push_back(i);

  RepairResult res;
  RepairTranscript& tr = res.transcript;
  tr.failed_node = failed;
  tr.helper_groups.assign(hset.begin(), hset.end());
  // downloaded symbols, nothing else of the helpers is ever read below
  std::map<int, std::map<long, FieldElement>> H;
  for (int j : tr.helper_groups) {
    for (long i : I) {
      const FieldElement v = cw.at(static_cast<int>(i), j);
      H[j][i] = v;
      tr.downloaded[j].push_back(v);
      tr.accessed_rows[j].insert(static_cast<int>(i));
    }
  }

  // recovered cells for the uncontacted columns
  std::map<int, std::map<long, FieldElement>> rec;
  std::vector<FieldElement> pts;  // mu's first, then lambda_j over J
  for (const auto& m : s.mu) pts.push_back(m);
  for (int j : J) pts.push_back(s.lambda[static_cast<std::size_t>(j)]);

  std::map<int, std::vector<long>> stages;  // by zero-pattern size over J\{failed}
  for (long i : I) {
    int a = 1;
    for (int j : J)
      if (j != failed && digit_of(i, j, s.s) == 0) ++a;
    stages[a].push_back(i);
  }
  for (const auto& [a, rows] : stages) {
    for (long i : rows) {
      std::vector<FieldElement> rhs;
      for (int t = 0; t < s.r; ++t) {
        FieldElement acc = s.field->zero();
        for (int j : tr.helper_groups) {
          acc += pow(s.lambda[static_cast<std::size_t>(j)], static_cast<long>(t)) * H[j][i];
          if (digit_of(i, j, s.s) == 0)
            for (int p = 1; p < s.s; ++p)
              acc += pow(s.mu[static_cast<std::size_t>(p - 1)], static_cast<long>(t)) *
                     H[j][with_digit(i, j, s.s, p)];
        }
        rhs.push_back(-acc);
      }
      const auto sol = vandermonde_solve(pts, rhs);
      for (std::size_t jj = 0; jj < J.size(); ++jj)
        rec[J[jj]][i] = sol[static_cast<std::size_t>(s.s - 1) + jj];
      // the mu-slots aggregate the coupled cells of the zero-digit columns;
      // peel off the already recovered ones to isolate the failed column
      for (int p = 1; p < s.s; ++p) {
        FieldElement val = sol[static_cast<std::size_t>(p - 1)];
        for (int j : J) {
          if (j == failed || digit_of(i, j, s.s) != 0) continue;
          val -= rec[j][with_digit(i, j, s.s, p)];
        }
        rec[failed][with_digit(i, failed, s.s, p)] = val;
      }
    }
  }

  res.column.reserve(static_cast<std::size_t>(s.l));
  for (long i = 0; i < s.l; ++i) res.column.push_back(rec[failed][i]);
  return res;
}

}  // namespace rackmsr::oa
