#pragma once

#include "rackmsr/codeword.hpp"
#include "rackmsr/ffield.hpp"
#include "rackmsr/linalg.hpp"

namespace rackmsr::rs {

/// Scalar Reed-Solomon code over an extension K of GF(q) whose evaluation
/// points follow the rack layout: rack i holds the orbit lambda_i * <lambda>
/// of a degree-p_i element lambda_i under an order-u root of unity lambda,
/// for distinct primes p_i = 1 mod sbar with p_i > u.  Every node stores one
/// K-symbol, i.e. l base-q symbols where l = [K:GF(q)] = sbar * prod(p_i).
///
/// A node is repaired by downloading trace projections that live in the
/// subfield F_i fixed by everything except lambda_i and the top generator;
/// each helper rack contributes p_i such projections, so the cross-rack
/// traffic is d*l/sbar base-q symbols regardless of which rack failed.
struct RSSpec {
  int racks;      // number of racks
  int rack_size;  // nodes per rack (u); must divide q-1
  int k;          // data nodes
  int helpers;    // helper racks contacted by a repair

  int n;     // racks * rack_size
  int r;     // n - k
  int kbar;  // k / rack_size (floor)
  int v;     // k - kbar * rack_size
  int rbar;  // racks - kbar
  int sbar;  // helpers - kbar + 1

  std::uint64_t q;       // base field size, a prime power
  std::uint64_t q_char;  // characteristic
  int q_exp;             // q = q_char^q_exp

  std::vector<int> primes;  // p_i, one per rack: the smallest distinct
                            // primes with p_i = 1 mod sbar and p_i > u
  long l;                   // [K:GF(q)]

  FieldCtxPtr field;                    // K, built as GF(q_char^(q_exp*l))
  FieldElement lambda;                  // order-u element of GF(q)
  std::vector<FieldElement> lambda_i;   // degree-p_i elements, one per rack
  FieldElement mu;                      // generates K over GF(q)(lambda_1..)
  std::vector<FieldElement> points;     // n evaluation points, node-major
  std::vector<FieldElement> dual_mult;  // dual code column multipliers

  bool degenerate;  // sbar == 1: repair degenerates to full download

  /// Per-rack repair machinery.  The downloads for a failure in rack i are
  /// symbols of F_i = GF(q_char^sub_m); the trace onto F_i is cached as a
  /// dense matrix over GF(q_char) so repairs avoid large exponentiations.
  struct RackPlan {
    int sub_m;                         // [F_i:GF(q_char)]
    std::vector<std::uint64_t> trace;  // row-major M x M, M = [K:GF(q_char)]
    std::vector<FieldElement> basis;   // e_m * lambda_i^(u*w), w-major
    Matrix gram;                       // pairwise traces of the basis
  };
  std::vector<RackPlan> plans;

  int node(int rack, int pos) const { return rack * rack_size + pos; }
  int rack_of(int nd) const { return nd / rack_size; }

  /// Trace from K onto the repair subfield of `rack` via the cached map.
  FieldElement subfield_trace(int rack, const FieldElement& x) const;
};

/// Builds the spec for the given base field size q (a prime power).  The
/// extension K and its distinguished elements are derived deterministically,
/// so equal parameters always produce the identical spec.  Refuses
/// extensions beyond degree 1024 over the prime field unless allow_large is
/// set, since the cost of arithmetic grows quadratically with the degree.
RSSpec build(std::uint64_t q, int racks, int rack_size, int k, int helpers,
             bool allow_large = false);

/// Rebuilds derived tables (points, dual multipliers, repair plans) from a
/// previously built spec's stored elements, skipping all searches.
RSSpec restore(std::uint64_t q, int racks, int rack_size, int k, int helpers,
               FieldCtxPtr field, FieldElement lambda,
               std::vector<FieldElement> lambda_i, FieldElement mu);

/// Systematic encode: data is 1 x k, the result is 1 x n and agrees with the
/// data on columns 0..k-1 (the interpolating polynomial has degree < k).
Codeword encode(const RSSpec& spec, const Codeword& data);

bool parity_check(const RSSpec& spec, const Codeword& cw);

/// Recovers up to r erased columns by interpolation through k intact ones.
/// Throws std::domain_error when the survivors are inconsistent.
Codeword erasure_decode(const RSSpec& spec, const Codeword& cw,
                        const std::vector<int>& erased_cols);

/// Repairs one node from `helpers` helper racks.  Each helper rack sends
/// p_host subfield symbols; all of its nodes are read in full.  Intact nodes
/// of the host rack are read locally.
RepairResult repair_node(const RSSpec& spec, const Codeword& cw, int failed,
                         const std::vector<int>& helper_racks);

}  // namespace rackmsr::rs
