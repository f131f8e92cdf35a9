#include "rackmsr/code_rs.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace rackmsr::rs {
namespace {

void check_codeword_shape(const RSSpec& s, const Codeword& cw, int cols) {
  if (cw.rows() != 1 || cw.cols() != cols)
    throw std::invalid_argument("codeword shape mismatch");
  if (!cw.ctx()->same(*s.field)) throw std::invalid_argument("field context mismatch");
}

std::set<int> checked_erasures(const RSSpec& s, const std::vector<int>& cols) {
  std::set<int> erased(cols.begin(), cols.end());
  if (erased.size() != cols.size()) throw std::invalid_argument("duplicate erased column");
  for (int c : erased)
    if (c < 0 || c >= s.n) throw std::invalid_argument("erased column out of range");
  if (static_cast<int>(erased.size()) > s.r) throw std::invalid_argument("too many erasures");
  return erased;
}

FieldElement apply_gfp_map(const FieldCtxPtr& ctx, const std::vector<std::uint64_t>& map,
                           const FieldElement& x) {
  const int M = ctx->degree();
  const std::uint64_t p = ctx->characteristic();
  const auto& xc = x.coeffs();
  const int cols = std::min<int>(M, static_cast<int>(xc.size()));
  std::vector<std::uint64_t> y(static_cast<std::size_t>(M), 0);
  for (int row = 0; row < M; ++row) {
    const std::uint64_t* mrow = map.data() + static_cast<std::size_t>(row) * M;
    unsigned __int128 acc = 0;
    for (int col = 0; col < cols; ++col)
      acc += static_cast<unsigned __int128>(mrow[col]) * xc[static_cast<std::size_t>(col)];
    y[static_cast<std::size_t>(row)] = static_cast<std::uint64_t>(acc % p);
  }
  return ctx->from_coeffs(std::move(y));
}

FieldElement poly_generator(const FieldCtxPtr& ctx) {
  std::vector<std::uint64_t> c(static_cast<std::size_t>(ctx->degree()), 0);
  c[1] = 1;
  return ctx->from_coeffs(std::move(c));
}

/// Fills the integer parameters, the rack degree primes and l; throws on any
/// inconsistent combination.
void init_params(RSSpec& s, std::uint64_t q, int racks, int rack_size, int k,
                 int helpers) {
  if (q < 2) throw std::invalid_argument("q must be a prime power");
  s.q = q;
  s.q_char = smallest_prime_factor(q);
  s.q_exp = 0;
  for (std::uint64_t t = q; t > 1; t /= s.q_char) {
    if (t % s.q_char != 0) throw std::invalid_argument("q must be a prime power");
    ++s.q_exp;
  }
  if (racks < 2 || rack_size < 1) throw std::invalid_argument("need at least 2 racks of size >= 1");
  if ((q - 1) % static_cast<std::uint64_t>(rack_size) != 0)
    throw std::invalid_argument("rack size must divide q-1");
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
  s.degenerate = (s.sbar == 1);

  s.primes.clear();
  for (std::uint64_t cand = 2; static_cast<int>(s.primes.size()) < racks; ++cand)
    if (cand > static_cast<std::uint64_t>(rack_size) && (cand - 1) % s.sbar == 0 &&
        is_prime_u64(cand))
      s.primes.push_back(static_cast<int>(cand));
  s.l = s.sbar;
  for (int p : s.primes) s.l *= p;
}

/// Computes the evaluation points, the dual multipliers and the per-rack
/// repair plans from the stored field elements.
void derive_tables(RSSpec& s) {
  s.points.clear();
  for (int e = 0; e < s.racks; ++e)
    for (int g = 0; g < s.rack_size; ++g)
      s.points.push_back(s.lambda_i[static_cast<std::size_t>(e)] *
                         pow(s.lambda, static_cast<long>(g)));
  std::set<std::string> seen;
  for (const auto& pt : s.points)
    if (pt.is_zero() || !seen.insert(pt.str()).second)
      throw std::logic_error("evaluation points collide");

  s.dual_mult.clear();
  for (int m = 0; m < s.n; ++m) {
    FieldElement acc = s.field->one();
    for (int m2 = 0; m2 < s.n; ++m2)
      if (m2 != m)
        acc *= s.points[static_cast<std::size_t>(m)] - s.points[static_cast<std::size_t>(m2)];
    s.dual_mult.push_back(inverse(acc));
  }

  const int M = s.field->degree();
  const FieldElement z = poly_generator(s.field);
  s.plans.clear();
  for (int i = 0; i < s.racks; ++i) {
    const int pi = s.primes[static_cast<std::size_t>(i)];
    const int c = s.sbar * pi;
    const int sub_m = M / c;

    // trace onto F_i as a dense map over the prime field: column j is the
    // coefficient vector of sum_t (z^j)^(q_char^(sub_m*t))
    std::vector<std::uint64_t> trace(static_cast<std::size_t>(M) * M, 0);
    mpz_class step;
    mpz_ui_pow_ui(step.get_mpz_t(), s.q_char, static_cast<unsigned long>(sub_m));
    FieldElement w = z;
    for (int t = 0; t < c; ++t) {
      if (t > 0) w = pow(w, step);
      FieldElement cur = s.field->one();
      for (int j = 0; j < M; ++j) {
        const auto& cc = cur.coeffs();
        for (int row = 0; row < static_cast<int>(cc.size()) && row < M; ++row)
          trace[static_cast<std::size_t>(row) * M + j] =
              (trace[static_cast<std::size_t>(row) * M + j] + cc[static_cast<std::size_t>(row)]) %
              s.q_char;
        if (j + 1 < M) cur *= w;
      }
    }

    // basis e_m of the repair subspace and its shifts by powers of
    // nu = lambda_i^u, which has degree p_i because p_i > u; the exponents
    // t + e*sbar + w then cover 0..p_i-2 exactly once
    const FieldElement nu =
        pow(s.lambda_i[static_cast<std::size_t>(i)], static_cast<long>(s.rack_size));
    std::vector<FieldElement> eb;
    for (int e = 0; e < (pi - 1) / s.sbar; ++e)
      for (int t = 0; t < s.sbar; ++t)
        eb.push_back(pow(s.mu, static_cast<long>(t)) *
                     pow(nu, static_cast<long>(t) + static_cast<long>(e) * s.sbar));
    FieldElement tail = s.field->zero();
    for (int t = 0; t < s.sbar; ++t) tail += pow(s.mu, static_cast<long>(t));
    eb.push_back(tail * pow(nu, static_cast<long>(pi) - 1));

    std::vector<FieldElement> basis;
    for (int wexp = 0; wexp < s.sbar; ++wexp) {
      const FieldElement shift = pow(nu, static_cast<long>(wexp));
      for (const auto& em : eb) basis.push_back(em * shift);
    }

    Matrix gram(c, c, s.field);
    for (int a = 0; a < c; ++a)
      for (int b = 0; b < c; ++b)
        gram.at(a, b) = apply_gfp_map(s.field, trace,
                                      basis[static_cast<std::size_t>(a)] *
                                          basis[static_cast<std::size_t>(b)]);
    if (rank(gram) != c) throw std::logic_error("repair trace basis is not independent");
    s.plans.push_back(RSSpec::RackPlan{sub_m, std::move(trace), std::move(basis), gram});
  }
}

FieldElement nonzero_random(const FieldCtxPtr& ctx, Rng& rng) {
  while (true) {
    FieldElement x = ctx->random(rng);
    if (!x.is_zero()) return x;
  }
}

}  // namespace

FieldElement RSSpec::subfield_trace(int rack, const FieldElement& x) const {
  return apply_gfp_map(field, plans[static_cast<std::size_t>(rack)].trace, x);
}

RSSpec build(std::uint64_t q, int racks, int rack_size, int k, int helpers,
             bool allow_large) {
  RSSpec s;
  init_params(s, q, racks, rack_size, k, helpers);
  const long M = static_cast<long>(s.q_exp) * s.l;
  if (M > 1024 && !allow_large)
    throw std::invalid_argument(
        "extension degree " + std::to_string(M) +
        " over the prime field exceeds 1024; pass allow_large to force");
  s.field = FieldCtx::extension(s.q_char, static_cast<int>(M));

  Rng rng(FieldCtx::kDefaultSeed);
  const mpz_class& order = s.field->group_order();
  const FieldElement z = poly_generator(s.field);

  // order-u element of the base field: an (order/u)-th power has order
  // dividing u, and u | q-1 places it in GF(q)
  {
    mpz_class e;
    mpz_divexact_ui(e.get_mpz_t(), order.get_mpz_t(),
                    static_cast<unsigned long>(s.rack_size));
    FieldElement cand = pow(z, e);
    while (!has_order(cand, static_cast<std::uint64_t>(s.rack_size)))
      cand = pow(nonzero_random(s.field, rng), e);
    s.lambda = cand;
  }

  // rack generators: an (order / (q^p_i - 1))-th power lies in the subfield
  // with q^p_i elements; p_i prime means its degree over GF(q) is 1 or p_i
  for (int i = 0; i < racks; ++i) {
    mpz_class sub;
    mpz_ui_pow_ui(sub.get_mpz_t(), q, static_cast<unsigned long>(s.primes[static_cast<std::size_t>(i)]));
    sub -= 1;
    mpz_class e;
    mpz_divexact(e.get_mpz_t(), order.get_mpz_t(), sub.get_mpz_t());
    FieldElement cand = pow(z, e);
    while (in_subfield(cand, s.q_exp)) cand = pow(nonzero_random(s.field, rng), e);
    s.lambda_i.push_back(cand);
  }

  // the polynomial generator has full degree, hence generates K over the
  // compositum of the rack subfields
  s.mu = z;

  derive_tables(s);
  return s;
}

RSSpec restore(std::uint64_t q, int racks, int rack_size, int k, int helpers,
               FieldCtxPtr field, FieldElement lambda,
               std::vector<FieldElement> lambda_i, FieldElement mu) {
  RSSpec s;
  init_params(s, q, racks, rack_size, k, helpers);
  if (!field) throw std::invalid_argument("missing field");
  if (field->characteristic() != s.q_char ||
      field->degree() != static_cast<int>(s.q_exp * s.l))
    throw std::invalid_argument("field does not match the code parameters");
  if (static_cast<int>(lambda_i.size()) != racks)
    throw std::invalid_argument("need one rack generator per rack");
  s.field = std::move(field);
  s.lambda = std::move(lambda);
  s.lambda_i = std::move(lambda_i);
  s.mu = std::move(mu);
  derive_tables(s);
  return s;
}

Codeword encode(const RSSpec& s, const Codeword& data) {
  check_codeword_shape(s, data, s.k);
  Matrix A(s.k, s.k, s.field);
  std::vector<FieldElement> b;
  for (int m = 0; m < s.k; ++m) {
    FieldElement acc = s.field->one();
    for (int w = 0; w < s.k; ++w) {
      A.at(m, w) = acc;
      acc *= s.points[static_cast<std::size_t>(m)];
    }
    b.push_back(data.at(0, m));
  }
  const auto f = solve(A, b);
  Codeword cw(1, s.n, s.field);
  for (int m = 0; m < s.n; ++m) {
    FieldElement acc = s.field->zero();
    for (int w = s.k - 1; w >= 0; --w)
      acc = acc * s.points[static_cast<std::size_t>(m)] + f[static_cast<std::size_t>(w)];
    cw.at(0, m) = acc;
  }
  return cw;
}

bool parity_check(const RSSpec& s, const Codeword& cw) {
  check_codeword_shape(s, cw, s.n);
  std::vector<FieldElement> pw(static_cast<std::size_t>(s.n), s.field->one());
  for (int t = 0; t < s.r; ++t) {
    FieldElement acc = s.field->zero();
    for (int m = 0; m < s.n; ++m) {
      acc += s.dual_mult[static_cast<std::size_t>(m)] * pw[static_cast<std::size_t>(m)] *
             cw.at(0, m);
      pw[static_cast<std::size_t>(m)] *= s.points[static_cast<std::size_t>(m)];
    }
    if (!acc.is_zero()) return false;
  }
  return true;
}

Codeword erasure_decode(const RSSpec& s, const Codeword& cw,
                        const std::vector<int>& erased_cols) {
  check_codeword_shape(s, cw, s.n);
  const std::set<int> erased = checked_erasures(s, erased_cols);
  std::vector<int> intact;
  for (int m = 0; m < s.n; ++m)
    if (!erased.count(m)) intact.push_back(m);

  Matrix A(s.k, s.k, s.field);
  std::vector<FieldElement> b;
  for (int row = 0; row < s.k; ++row) {
    const int m = intact[static_cast<std::size_t>(row)];
    FieldElement acc = s.field->one();
    for (int w = 0; w < s.k; ++w) {
      A.at(row, w) = acc;
      acc *= s.points[static_cast<std::size_t>(m)];
    }
    b.push_back(cw.at(0, m));
  }
  const auto f = solve(A, b);
  Codeword out(1, s.n, s.field);
  for (int m = 0; m < s.n; ++m) {
    FieldElement acc = s.field->zero();
    for (int w = s.k - 1; w >= 0; --w)
      acc = acc * s.points[static_cast<std::size_t>(m)] + f[static_cast<std::size_t>(w)];
    out.at(0, m) = acc;
  }
  for (int m : intact)
    if (out.at(0, m) != cw.at(0, m)) throw std::domain_error("inconsistent codeword");
  return out;
}

RepairResult repair_node(const RSSpec& s, const Codeword& cw, int failed,
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

  const RSSpec::RackPlan& plan = s.plans[static_cast<std::size_t>(host)];
  const int pi = s.primes[static_cast<std::size_t>(host)];
  const int c = s.sbar * pi;

  // annihilator of the uncontacted racks' points, evaluated where needed
  auto hval = [&](const FieldElement& x) {
    FieldElement acc = s.field->one();
    for (int e = 0; e < s.racks; ++e) {
      if (e == host || hset.count(e)) continue;
      for (int g = 0; g < s.rack_size; ++g)
        acc *= x - s.points[static_cast<std::size_t>(s.node(e, g))];
    }
    return acc;
  };

  RepairResult res;
  RepairTranscript& tr = res.transcript;
  tr.failed_node = failed;
  tr.helper_groups.assign(hset.begin(), hset.end());
  tr.download_weight = s.l / (static_cast<long>(s.sbar) * pi);
  tr.access_weight = s.l;

  // each helper rack aggregates p_host subfield symbols from its u nodes
  for (int e : tr.helper_groups) {
    for (int m = 0; m < pi; ++m) {
      FieldElement sum = s.field->zero();
      for (int g = 0; g < s.rack_size; ++g) {
        const int nd = s.node(e, g);
        sum += hval(s.points[static_cast<std::size_t>(nd)]) *
               apply_gfp_map(s.field, plan.trace,
                             plan.basis[static_cast<std::size_t>(m)] *
                                 s.dual_mult[static_cast<std::size_t>(nd)] * cw.at(0, nd));
        tr.accessed_rows[nd].insert(0);
      }
      tr.downloaded[e].push_back(sum);
    }
  }

  // traces of the masked host sum against the basis e_m * lambda_host^(u*w)
  std::vector<FieldElement> gamma;
  for (int wexp = 0; wexp < s.sbar; ++wexp) {
    for (int m = 0; m < pi; ++m) {
      FieldElement acc = s.field->zero();
      for (int e : tr.helper_groups)
        acc += pow(s.lambda_i[static_cast<std::size_t>(e)],
                   static_cast<long>(s.rack_size) * wexp) *
               tr.downloaded.at(e)[static_cast<std::size_t>(m)];
      gamma.push_back(-acc);
    }
  }
  const auto coords = solve(plan.gram, gamma);
  FieldElement sigma = s.field->zero();
  for (int a = 0; a < c; ++a)
    sigma += coords[static_cast<std::size_t>(a)] * plan.basis[static_cast<std::size_t>(a)];

  // peel the intact host nodes off the masked sum
  for (int g = 0; g < s.rack_size; ++g) {
    const int nd = s.node(host, g);
    if (nd == failed) continue;
    sigma -= s.dual_mult[static_cast<std::size_t>(nd)] *
             hval(s.points[static_cast<std::size_t>(nd)]) * cw.at(0, nd);
    tr.local_accessed_rows[nd].insert(0);
  }
  res.column.push_back(sigma / (s.dual_mult[static_cast<std::size_t>(failed)] *
                                hval(s.points[static_cast<std::size_t>(failed)])));
  return res;
}

}  // namespace rackmsr::rs
