#pragma once

#include "rackmsr/codeword.hpp"
#include "rackmsr/ffield.hpp"

namespace rackmsr::oa {

/// Homogeneous MSR array code with sub-packetization s^n and optimal access:
/// a repair reads the same l/s rows from every helper and transfers them
/// verbatim.  Row indices are base-s digit strings with digit j owned by
/// node j.  Parity checks couple row i with rows i(j,p) (digit j set to p)
/// whenever digit j of i is zero.
struct OASpec {
  int n;  // nodes
  int k;  // data nodes
  int d;  // helpers contacted by a repair, k <= d <= n-1
  int r;  // n - k
  int s;  // d - k + 1
  long l; // s^n

  FieldCtxPtr field;
  std::vector<FieldElement> lambda;  // one point per node
  std::vector<FieldElement> mu;      // s-1 auxiliary points
  bool degenerate;                   // s == 1

  /// lambda and mu jointly: n + s - 1 pairwise distinct field elements.
  std::vector<FieldElement> all_points() const;
};

/// Builds the spec.  Default field: GF(p) for the smallest prime
/// p >= n+s-1; default points lambda_j = j and mu_p = n-1+p.  Supplying
/// lambda/mu overrides the defaults (sizes n and s-1, pairwise distinct).
OASpec build(int n, int k, int d, FieldCtxPtr field = nullptr,
             std::vector<FieldElement> lambda = {},
             std::vector<FieldElement> mu = {});

/// Systematic encode (data is l x k) by solving the full parity system for
/// the r*l parity cells at once.
Codeword encode(const OASpec& spec, const Codeword& data);

bool parity_check(const OASpec& spec, const Codeword& cw);

/// Inductive decoder: recovers up to r erased columns row-group by
/// row-group in order of the zero pattern of each row.
Codeword erasure_decode(const OASpec& spec, const Codeword& cw,
                        const std::vector<int>& erased_cols);

/// Reference decoder that solves for all erased cells as one linear system;
/// used as an independent check of the inductive decoder.
Codeword erasure_decode_generic(const OASpec& spec, const Codeword& cw,
                                const std::vector<int>& erased_cols);

/// Repairs one node from d helper nodes.  Every helper sends its rows with
/// digit `failed` equal to zero, exactly l/s symbols, and nothing else.
RepairResult repair_node(const OASpec& spec, const Codeword& cw, int failed,
                         const std::vector<int>& helper_nodes);

}  // namespace rackmsr::oa
