#include "rackmsr/ffield.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace rackmsr {
namespace {

using Poly = std::vector<std::uint64_t>;  // little-endian, entries in [0,p)

int pdeg(const Poly& a) {
  for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i)
    if (a[i]) return i;
  return -1;
}

void ptrim(Poly& a) { a.resize(static_cast<std::size_t>(pdeg(a) + 1)); }

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
  // extended Euclid on integers; a != 0 mod p
  std::int64_t t = 0, nt = 1;
  std::int64_t r = static_cast<std::int64_t>(p), nr = static_cast<std::int64_t>(a % p);
  while (nr != 0) {
    std::int64_t q = r / nr;
    std::int64_t tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  if (r != 1) throw std::domain_error("element not invertible");
  if (t < 0) t += static_cast<std::int64_t>(p);
  return static_cast<std::uint64_t>(t);
}

Poly pmul(const Poly& a, const Poly& b, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  const bool fast = (p - 1) <= UINT64_MAX / (p - 1) / std::max(a.size(), b.size());
  if (fast) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!a[i]) continue;
      for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    }
    for (auto& x : c) x %= p;
  } else {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!a[i]) continue;
      for (std::size_t j = 0; j < b.size(); ++j)
        c[i + j] = (c[i + j] + a[i] % p * (b[j] % p)) % p;
    }
  }
  return c;
}

// reduce a by monic f in place; result has degree < deg f
void pmod(Poly& a, const Poly& f, std::uint64_t p) {
  const int m = pdeg(f);
  for (int d = pdeg(a); d >= m; --d) {
    const std::uint64_t c = a[static_cast<std::size_t>(d)];
    if (c) {
      for (int i = 0; i <= m; ++i) {
        auto& slot = a[static_cast<std::size_t>(d - m + i)];
        slot = (slot + (p - c * f[static_cast<std::size_t>(i)] % p)) % p;
      }
    }
  }
  a.resize(static_cast<std::size_t>(m));
  ptrim(a);
}

Poly pmulmod(const Poly& a, const Poly& b, const Poly& f, std::uint64_t p) {
  Poly c = pmul(a, b, p);
  pmod(c, f, p);
  return c;
}

Poly psub(const Poly& a, const Poly& b, std::uint64_t p) {
  Poly c(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::uint64_t x = i < a.size() ? a[i] : 0, y = i < b.size() ? b[i] : 0;
    c[i] = (x + p - y) % p;
  }
  ptrim(c);
  return c;
}

void pmonic(Poly& a, std::uint64_t p) {
  const int d = pdeg(a);
  if (d < 0) return;
  const std::uint64_t lead = a[static_cast<std::size_t>(d)];
  if (lead == 1) return;
  const std::uint64_t il = inv_mod(lead, p);
  for (auto& x : a) x = x * il % p;
}

Poly pgcd(Poly a, Poly b, std::uint64_t p) {
  ptrim(a);
  ptrim(b);
  while (pdeg(b) >= 0) {
    pmonic(b, p);
    pmod(a, b, p);
    std::swap(a, b);
  }
  return a;
}

Poly ppow_u64(Poly a, std::uint64_t e, const Poly& f, std::uint64_t p) {
  Poly r{1};
  while (e) {
    if (e & 1) r = pmulmod(r, a, f, p);
    a = pmulmod(a, a, f, p);
    e >>= 1;
  }
  return r;
}

// f monic of degree >= 2: true iff f has no irreducible factor of degree
// <= deg(f)/2, i.e. iff f is irreducible
bool poly_irreducible(const Poly& f, std::uint64_t p) {
  const int m = pdeg(f);
  if (m == 1) return true;
  Poly y{0, 1};  // x
  for (int i = 1; i <= m / 2; ++i) {
    y = ppow_u64(y, p, f, p);
    Poly g = pgcd(psub(y, Poly{0, 1}, p), f, p);
    if (pdeg(g) > 0) return false;
  }
  return true;
}

void check_characteristic(std::uint64_t p) {
  if (p < 2 || p >= (1ull << 32))
    throw std::invalid_argument("characteristic must be a prime below 2^32");
  if (!is_prime_u64(p))
    throw std::invalid_argument("characteristic " + std::to_string(p) + " is not prime");
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d : {2ull, 3ull}) {
    if (n % d == 0) return n == d;
  }
  for (std::uint64_t i = 5; i <= n / i; i += 6) {
    if (n % i == 0 || n % (i + 2) == 0) return false;
  }
  return true;
}

std::uint64_t smallest_prime_factor(std::uint64_t n) {
  if (n < 2) throw std::invalid_argument("no prime factor below 2");
  for (std::uint64_t d : {2ull, 3ull})
    if (n % d == 0) return d;
  for (std::uint64_t i = 5; i <= n / i; i += 6) {
    if (n % i == 0) return i;
    if (n % (i + 2) == 0) return i + 2;
  }
  return n;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  while (n > 1) {
    std::uint64_t q = smallest_prime_factor(n);
    out.push_back(q);
    while (n % q == 0) n /= q;
  }
  return out;
}

FieldCtx::FieldCtx(std::uint64_t p, int m, std::vector<std::uint64_t> mod)
    : p_(p), m_(m), mod_(std::move(mod)) {
  mpz_ui_pow_ui(size_.get_mpz_t(), p_, static_cast<unsigned long>(m_));
  group_order_ = size_ - 1;
}

FieldCtxPtr FieldCtx::prime(std::uint64_t p) {
  check_characteristic(p);
  return FieldCtxPtr(new FieldCtx(p, 1, {}));
}

FieldCtxPtr FieldCtx::extension(std::uint64_t p, int m, std::uint64_t search_seed) {
  check_characteristic(p);
  if (m < 1) throw std::invalid_argument("extension degree must be >= 1");
  if (m == 1) return prime(p);
  Poly f(static_cast<std::size_t>(m) + 1, 0);
  f[static_cast<std::size_t>(m)] = 1;
  if (m <= 12) {
    // enumerate lower coefficients as a little-endian base-p counter
    for (std::uint64_t v = 0;; ++v) {
      if (v > 100000000ull)
        throw std::runtime_error("canonical modulus search exhausted");
      std::uint64_t w = v;
      for (int i = 0; i < m; ++i) {
        f[static_cast<std::size_t>(i)] = w % p;
        w /= p;
      }
      if (w) throw std::runtime_error("no irreducible polynomial found");
      if (poly_irreducible(f, p)) break;
    }
  } else {
    Rng rng(search_seed);
    do {
      f[0] = 1 + rng.below(p - 1);  // nonzero constant term
      for (int i = 1; i < m; ++i) f[static_cast<std::size_t>(i)] = rng.below(p);
    } while (!poly_irreducible(f, p));
  }
  return FieldCtxPtr(new FieldCtx(p, m, std::move(f)));
}

FieldCtxPtr FieldCtx::with_modulus(std::uint64_t p, std::vector<std::uint64_t> modulus) {
  check_characteristic(p);
  if (modulus.size() < 2 || modulus.back() != 1)
    throw std::invalid_argument("modulus must be monic of degree >= 1");
  for (auto c : modulus)
    if (c >= p) throw std::invalid_argument("modulus coefficient out of range");
  const int m = static_cast<int>(modulus.size()) - 1;
  if (m == 1) return prime(p);
  if (!poly_irreducible(modulus, p))
    throw std::invalid_argument("modulus is reducible");
  return FieldCtxPtr(new FieldCtx(p, m, std::move(modulus)));
}

std::string FieldCtx::describe() const {
  if (m_ == 1) return std::to_string(p_);
  std::ostringstream os;
  os << p_ << '^' << m_ << '/';
  for (std::size_t i = 0; i < mod_.size(); ++i) {
    if (i) os << ',';
    os << mod_[i];
  }
  return os.str();
}

FieldCtxPtr FieldCtx::parse(const std::string& text) {
  auto caret = text.find('^');
  if (caret == std::string::npos) {
    return prime(std::stoull(text));
  }
  auto slash = text.find('/', caret);
  if (slash == std::string::npos)
    throw std::invalid_argument("extension field needs explicit modulus: " + text);
  std::uint64_t p = std::stoull(text.substr(0, caret));
  int m = std::stoi(text.substr(caret + 1, slash - caret - 1));
  std::vector<std::uint64_t> mod;
  std::istringstream is(text.substr(slash + 1));
  std::string tok;
  while (std::getline(is, tok, ',')) mod.push_back(std::stoull(tok));
  if (static_cast<int>(mod.size()) != m + 1)
    throw std::invalid_argument("modulus length does not match degree: " + text);
  return with_modulus(p, std::move(mod));
}

FieldElement FieldCtx::zero() const {
  return FieldElement(shared_from_this(), std::vector<std::uint64_t>(static_cast<std::size_t>(m_), 0));
}

FieldElement FieldCtx::one() const { return scalar(1); }

FieldElement FieldCtx::scalar(std::uint64_t v) const {
  std::vector<std::uint64_t> c(static_cast<std::size_t>(m_), 0);
  c[0] = v % p_;
  return FieldElement(shared_from_this(), std::move(c));
}

FieldElement FieldCtx::from_coeffs(std::vector<std::uint64_t> c) const {
  if (static_cast<int>(c.size()) != m_)
    throw std::invalid_argument("coefficient vector length must equal the field degree");
  for (auto x : c)
    if (x >= p_) throw std::invalid_argument("coefficient out of range");
  return FieldElement(shared_from_this(), std::move(c));
}

FieldElement FieldCtx::from_encoding(const mpz_class& v) const {
  if (v < 0 || v >= size_) throw std::invalid_argument("element encoding out of range");
  std::vector<std::uint64_t> c(static_cast<std::size_t>(m_), 0);
  mpz_class w = v, q, r;
  for (int i = 0; i < m_ && w != 0; ++i) {
    mpz_fdiv_qr_ui(q.get_mpz_t(), r.get_mpz_t(), w.get_mpz_t(), static_cast<unsigned long>(p_));
    c[static_cast<std::size_t>(i)] = r.get_ui();
    w = q;
  }
  return FieldElement(shared_from_this(), std::move(c));
}

FieldElement FieldCtx::from_string(const std::string& decimal) const {
  return from_encoding(mpz_class(decimal));
}

FieldElement FieldCtx::random(Rng& rng) const {
  std::vector<std::uint64_t> c(static_cast<std::size_t>(m_), 0);
  for (auto& x : c) x = rng.below(p_);
  return FieldElement(shared_from_this(), std::move(c));
}

std::vector<std::uint64_t> FieldCtx::mul_raw(const std::vector<std::uint64_t>& a,
                                             const std::vector<std::uint64_t>& b) const {
  if (m_ == 1) return {a[0] * b[0] % p_};
  Poly c = pmul(a, b, p_);
  pmod(c, mod_, p_);
  c.resize(static_cast<std::size_t>(m_), 0);
  return c;
}

std::vector<std::uint64_t> FieldCtx::inv_raw(const std::vector<std::uint64_t>& a) const {
  if (pdeg(a) < 0) throw std::domain_error("division by zero");
  if (m_ == 1) return {inv_mod(a[0], p_)};
  // extended Euclid tracking s with a*s = r mod f
  Poly r0 = mod_, r1 = a, s0 = {}, s1 = {1};
  ptrim(r1);
  while (pdeg(r1) > 0) {
    // divide r0 by r1
    Poly q(static_cast<std::size_t>(pdeg(r0) - pdeg(r1) + 1), 0);
    Poly rem = r0;
    const std::uint64_t ilead = inv_mod(r1[static_cast<std::size_t>(pdeg(r1))], p_);
    for (int d = pdeg(rem); d >= pdeg(r1); --d) {
      std::uint64_t c = rem[static_cast<std::size_t>(d)] * ilead % p_;
      if (!c) continue;
      q[static_cast<std::size_t>(d - pdeg(r1))] = c;
      for (int i = 0; i <= pdeg(r1); ++i) {
        auto& slot = rem[static_cast<std::size_t>(d - pdeg(r1) + i)];
        slot = (slot + p_ - c * r1[static_cast<std::size_t>(i)] % p_) % p_;
      }
    }
    ptrim(rem);
    Poly s2 = psub(s0, pmul(q, s1, p_), p_);
    r0 = std::move(r1);
    r1 = std::move(rem);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (pdeg(r1) < 0) throw std::domain_error("element not invertible");
  const std::uint64_t ic = inv_mod(r1[0], p_);
  for (auto& x : s1) x = x * ic % p_;
  Poly out = std::move(s1);
  pmod(out, mod_, p_);
  out.resize(static_cast<std::size_t>(m_), 0);
  return out;
}

namespace {
void require_same_ctx(const FieldElement& a, const FieldElement& b) {
  if (!a.ctx() || !b.ctx() || !a.ctx()->same(*b.ctx()))
    throw std::invalid_argument("field context mismatch");
}
}  // namespace

bool FieldElement::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](std::uint64_t x) { return x == 0; });
}

bool FieldElement::is_one() const {
  if (c_.empty() || c_[0] != 1) return false;
  return std::all_of(c_.begin() + 1, c_.end(), [](std::uint64_t x) { return x == 0; });
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
  FieldElement r = *this;
  r += o;
  return r;
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
  FieldElement r = *this;
  r -= o;
  return r;
}

FieldElement& FieldElement::operator+=(const FieldElement& o) {
  require_same_ctx(*this, o);
  const std::uint64_t p = ctx_->characteristic();
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] = (c_[i] + o.c_[i]) % p;
  return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& o) {
  require_same_ctx(*this, o);
  const std::uint64_t p = ctx_->characteristic();
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] = (c_[i] + p - o.c_[i]) % p;
  return *this;
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
  require_same_ctx(*this, o);
  return FieldElement(ctx_, ctx_->mul_raw(c_, o.c_));
}

FieldElement& FieldElement::operator*=(const FieldElement& o) {
  *this = *this * o;
  return *this;
}

FieldElement FieldElement::operator/(const FieldElement& o) const {
  require_same_ctx(*this, o);
  return *this * inverse(o);
}

FieldElement FieldElement::operator-() const {
  if (!ctx_) throw std::invalid_argument("uninitialized field element");
  FieldElement r = *this;
  const std::uint64_t p = ctx_->characteristic();
  for (auto& x : r.c_) x = (p - x) % p;
  return r;
}

bool FieldElement::operator==(const FieldElement& o) const {
  if (!ctx_ || !o.ctx_) return !ctx_ && !o.ctx_;
  return ctx_->same(*o.ctx_) && c_ == o.c_;
}

mpz_class FieldElement::encoding() const {
  mpz_class v = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    v *= ctx_->characteristic();
    v += *it;
  }
  return v;
}

std::string FieldElement::str() const { return encoding().get_str(); }

FieldElement inverse(const FieldElement& a) {
  if (!a.ctx()) throw std::invalid_argument("uninitialized field element");
  return FieldElement(a.ctx_, a.ctx_->inv_raw(a.c_));
}

FieldElement pow(const FieldElement& a, const mpz_class& e) {
  if (!a.ctx()) throw std::invalid_argument("uninitialized field element");
  if (e < 0) return pow(inverse(a), mpz_class(-e));
  FieldElement r = a.ctx()->one();
  const std::size_t nbits = mpz_sizeinbase(e.get_mpz_t(), 2);
  if (e == 0) return r;
  for (std::size_t i = nbits; i-- > 0;) {
    r = r * r;
    if (mpz_tstbit(e.get_mpz_t(), i)) r = r * a;
  }
  return r;
}

FieldElement pow(const FieldElement& a, long e) { return pow(a, mpz_class(e)); }

FieldElement frobenius(const FieldElement& a, int t) {
  if (!a.ctx()) throw std::invalid_argument("uninitialized field element");
  FieldElement r = a;
  const mpz_class p(static_cast<unsigned long>(a.ctx()->characteristic()));
  for (int i = 0; i < t; ++i) r = pow(r, p);
  return r;
}

bool has_order(const FieldElement& a, std::uint64_t ord) {
  if (ord == 0 || a.is_zero()) return false;
  const FieldElement one = a.ctx()->one();
  if (pow(a, mpz_class(static_cast<unsigned long>(ord))) != one) return false;
  for (std::uint64_t q : prime_factors(ord)) {
    if (pow(a, mpz_class(static_cast<unsigned long>(ord / q))) == one) return false;
  }
  return true;
}

FieldElement element_of_order(const FieldCtxPtr& ctx, std::uint64_t ord, std::uint64_t seed) {
  if (!ctx) throw std::invalid_argument("null field context");
  if (ord == 0 || !mpz_divisible_ui_p(ctx->group_order().get_mpz_t(), static_cast<unsigned long>(ord)))
    throw std::invalid_argument("order " + std::to_string(ord) + " does not divide p^m - 1");
  if (ctx->degree() == 1) {
    for (std::uint64_t v = 1; v < ctx->characteristic(); ++v) {
      FieldElement e = ctx->scalar(v);
      if (has_order(e, ord)) return e;
    }
    throw std::runtime_error("no element of requested order found");
  }
  const mpz_class exp = ctx->group_order() / static_cast<unsigned long>(ord);
  Rng rng(seed);
  for (int tries = 0; tries < 100000; ++tries) {
    FieldElement z = ctx->random(rng);
    if (z.is_zero()) continue;
    FieldElement y = pow(z, exp);
    if (has_order(y, ord)) return y;
  }
  throw std::runtime_error("seeded search for element of requested order failed");
}

FieldElement trace_to_subfield(const FieldElement& a, int sub_m) {
  if (!a.ctx()) throw std::invalid_argument("uninitialized field element");
  const int m = a.ctx()->degree();
  if (sub_m < 1 || m % sub_m != 0)
    throw std::invalid_argument("subfield degree must divide the field degree");
  FieldElement acc = a, y = a;
  for (int j = 1; j < m / sub_m; ++j) {
    y = frobenius(y, sub_m);
    acc += y;
  }
  return acc;
}

int element_degree(const FieldElement& a) { return degree_over(a, 1); }

int degree_over(const FieldElement& a, int base_m) {
  if (!a.ctx()) throw std::invalid_argument("uninitialized field element");
  const int m = a.ctx()->degree();
  if (base_m < 1 || m % base_m != 0)
    throw std::invalid_argument("base field degree must divide the field degree");
  const int rel = m / base_m;
  for (int d = 1; d <= rel; ++d) {
    if (rel % d != 0) continue;
    if (frobenius(a, base_m * d) == a) return d;
  }
  throw std::logic_error("element degree not found");  // unreachable
}

bool in_subfield(const FieldElement& a, int sub_m) {
  if (!a.ctx()) throw std::invalid_argument("uninitialized field element");
  if (sub_m < 1 || a.ctx()->degree() % sub_m != 0) return false;
  return frobenius(a, sub_m) == a;
}

}  // namespace rackmsr
