#pragma once

#include "rackmsr/codeword.hpp"
#include "rackmsr/ffield.hpp"

namespace rackmsr::c1 {

/// Rack-aware MSR array code with sub-packetization sbar^racks.  Nodes are
/// numbered rack-major: node = rack * rack_size + position.  Row indices are
/// base-sbar digit strings with digit e owned by rack e.  All parameters and
/// elements are fixed at build time; the spec is immutable afterwards.
struct C1Spec {
  int racks;      // number of racks
  int rack_size;  // nodes per rack
  int k;          // data nodes
  int helpers;    // helper racks contacted by a repair

  int n;     // racks * rack_size
  int r;     // n - k
  int kbar;  // k / rack_size (floor)
  int v;     // k - kbar * rack_size
  int rbar;  // racks - kbar
  int sbar;  // helpers - kbar + 1
  long l;    // sbar^racks

  FieldCtxPtr field;
  FieldElement lambda;  // multiplicative order sbar * n
  bool degenerate;      // sbar == 1: repair degenerates to full download

  int node(int rack, int pos) const { return rack * rack_size + pos; }
  int rack_of(int nd) const { return nd / rack_size; }

  /// Evaluation point of node (rack e, position g) in row j:
  /// lambda^(e*sbar + j_e + g*sbar*racks).
  FieldElement row_point(long row, int nd) const;
};

/// Builds the spec.  When no field is given, uses GF(p) for the smallest
/// prime p with sbar*n | p-1; a caller-supplied field must satisfy
/// sbar*n | |F|-1.  lambda is the deterministic element of order sbar*n.
C1Spec build(int racks, int rack_size, int k, int helpers, FieldCtxPtr field = nullptr);

/// Systematic encode: data is l x k, returned codeword is l x n with the
/// data in columns 0..k-1.
Codeword encode(const C1Spec& spec, const Codeword& data);

bool parity_check(const C1Spec& spec, const Codeword& cw);

/// Recovers up to r erased columns.  Throws std::domain_error when the
/// surviving symbols are not consistent with any codeword.
Codeword erasure_decode(const C1Spec& spec, const Codeword& cw,
                        const std::vector<int>& erased_cols);

/// Repairs one node from `helpers` helper racks; every other rack is left
/// uncontacted.  Downloads one aggregate per helper rack per repair group
/// (l/sbar each); reads within the host rack are recorded as local access.
RepairResult repair_node(const C1Spec& spec, const Codeword& cw, int failed,
                         const std::vector<int>& helper_racks);

}  // namespace rackmsr::c1
