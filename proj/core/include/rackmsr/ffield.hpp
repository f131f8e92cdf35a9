#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "rackmsr/rng.hpp"

namespace rackmsr {

class FieldCtx;
using FieldCtxPtr = std::shared_ptr<const FieldCtx>;

/// Element of GF(p^m), stored as the coefficient vector of its polynomial
/// representative (little-endian: c_[i] is the coefficient of x^i).
class FieldElement {
 public:
  FieldElement() = default;

  const FieldCtxPtr& ctx() const { return ctx_; }
  const std::vector<std::uint64_t>& coeffs() const { return c_; }

  bool is_zero() const;
  bool is_one() const;

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator/(const FieldElement& o) const;
  FieldElement operator-() const;
  FieldElement& operator+=(const FieldElement& o);
  FieldElement& operator-=(const FieldElement& o);
  FieldElement& operator*=(const FieldElement& o);
  bool operator==(const FieldElement& o) const;
  bool operator!=(const FieldElement& o) const { return !(*this == o); }

  /// Integer encoding sum_i c_i p^i; the serialized form is its decimal string.
  mpz_class encoding() const;
  std::string str() const;

 private:
  friend class FieldCtx;
  friend FieldElement inverse(const FieldElement&);
  friend FieldElement pow(const FieldElement&, const mpz_class&);
  friend FieldElement frobenius(const FieldElement&, int);

  FieldElement(FieldCtxPtr ctx, std::vector<std::uint64_t> c)
      : ctx_(std::move(ctx)), c_(std::move(c)) {}

  FieldCtxPtr ctx_;
  std::vector<std::uint64_t> c_;
};

/// Finite field context: characteristic, extension degree and modulus.
/// Immutable; elements keep a shared pointer to their context.  Contexts are
/// compared by (p, m, modulus), not by object identity.
class FieldCtx : public std::enable_shared_from_this<FieldCtx> {
 public:
  /// GF(p) for prime p.  Throws std::invalid_argument if p is not prime.
  static FieldCtxPtr prime(std::uint64_t p);

  /// GF(p^m) with the canonical modulus: the lexicographically smallest monic
  /// irreducible (lower coefficients compared as a little-endian base-p
  /// number) for m <= 12, else the first hit of a seeded random search.
  static FieldCtxPtr extension(std::uint64_t p, int m,
                               std::uint64_t search_seed = kDefaultSeed);

  /// GF(p^m) with an explicit monic modulus, coefficients little-endian of
  /// length m+1.  Throws if the modulus is not monic irreducible of degree m.
  static FieldCtxPtr with_modulus(std::uint64_t p,
                                  std::vector<std::uint64_t> modulus);

  std::uint64_t characteristic() const { return p_; }
  int degree() const { return m_; }
  /// Modulus coefficients (length m+1); empty for prime fields.
  const std::vector<std::uint64_t>& modulus() const { return mod_; }
  const mpz_class& size() const { return size_; }
  /// p^m - 1.
  const mpz_class& group_order() const { return group_order_; }

  bool same(const FieldCtx& o) const {
    return p_ == o.p_ && m_ == o.m_ && mod_ == o.mod_;
  }

  /// "p" for prime fields, "p^m/c0,c1,...,cm" otherwise.
  std::string describe() const;
  /// Parses the describe() format back into a context.
  static FieldCtxPtr parse(const std::string& text);

  FieldElement zero() const;
  FieldElement one() const;
  /// v * 1, i.e. the image of the integer v in the prime subfield.
  FieldElement scalar(std::uint64_t v) const;
  FieldElement from_coeffs(std::vector<std::uint64_t> c) const;
  /// Inverse of FieldElement::encoding().  Throws if v >= p^m.
  FieldElement from_encoding(const mpz_class& v) const;
  FieldElement from_string(const std::string& decimal) const;
  FieldElement random(Rng& rng) const;

  static constexpr std::uint64_t kDefaultSeed = 0x5eedf1e1d;

 private:
  FieldCtx(std::uint64_t p, int m, std::vector<std::uint64_t> mod);

  friend class FieldElement;
  friend FieldElement inverse(const FieldElement&);

  std::vector<std::uint64_t> mul_raw(const std::vector<std::uint64_t>& a,
                                     const std::vector<std::uint64_t>& b) const;
  std::vector<std::uint64_t> inv_raw(const std::vector<std::uint64_t>& a) const;

  std::uint64_t p_;
  int m_;
  std::vector<std::uint64_t> mod_;
  mpz_class size_;
  mpz_class group_order_;
};

FieldElement inverse(const FieldElement& a);
FieldElement pow(const FieldElement& a, const mpz_class& e);
FieldElement pow(const FieldElement& a, long e);
/// a^(p^t), t >= 0.
FieldElement frobenius(const FieldElement& a, int t);

/// True iff the multiplicative order of a is exactly ord (ord is factored by
/// trial division, so it must fit in 64 bits).
bool has_order(const FieldElement& a, std::uint64_t ord);

/// An element of multiplicative order exactly ord.  Requires ord | p^m - 1.
/// For prime fields this is the smallest integer representative; for
/// extension fields it is found by a seeded search over powers
/// g^((p^m-1)/ord), so the result is deterministic for a given seed.
FieldElement element_of_order(const FieldCtxPtr& ctx, std::uint64_t ord,
                              std::uint64_t seed = FieldCtx::kDefaultSeed);

/// Trace into the subfield GF(p^sub_m): sum of a^(p^(sub_m*j)) over
/// j = 0..m/sub_m-1.  Requires sub_m | m.
FieldElement trace_to_subfield(const FieldElement& a, int sub_m);

/// Degree of a over the prime subfield: the smallest t >= 1 (a divisor of m)
/// with a^(p^t) = a.
int element_degree(const FieldElement& a);

/// Degree of a over GF(p^base_m): the smallest D >= 1 with a^(p^(base_m*D)) = a.
/// Requires base_m | m.
int degree_over(const FieldElement& a, int base_m);

/// True iff a lies in the subfield GF(p^sub_m).
bool in_subfield(const FieldElement& a, int sub_m);

std::uint64_t smallest_prime_factor(std::uint64_t n);
bool is_prime_u64(std::uint64_t n);
/// Distinct prime factors of n by trial division.
std::vector<std::uint64_t> prime_factors(std::uint64_t n);

}  // namespace rackmsr
