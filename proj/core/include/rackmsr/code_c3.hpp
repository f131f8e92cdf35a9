#pragma once

#include "rackmsr/codeword.hpp"
#include "rackmsr/ffield.hpp"

namespace rackmsr::c3 {

/// Rack-aware MSR array code with sub-packetization sbar^racks and low
/// access: a repair reads only l/sbar rows from every helper node (the rows
/// whose host-rack digit vanishes) and ships one rack sum per such row.
/// Node j = e*u+g evaluates at lambda^(e + g*racks); row digits are indexed
/// by rack.  Parity checks couple row i with rows i(e,p) whenever digit e of
/// i is zero, with multipliers mu_p chosen outside the cyclic group of
/// lambda and with pairwise distinct u-th powers.
struct C3Spec {
  int racks;      // number of racks
  int rack_size;  // nodes per rack (u)
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
  FieldElement lambda;                 // multiplicative order n
  std::vector<FieldElement> lambda_j;  // per-node evaluation points
  std::vector<FieldElement> mu;        // sbar-1 multipliers
  bool degenerate;                     // sbar == 1

  int node(int rack, int pos) const { return rack * rack_size + pos; }
  int rack_of(int nd) const { return nd / rack_size; }
};

/// Builds the spec.  A usable field must satisfy n | |F|-1 and
/// |F| >= n+sbar-1 and contain sbar-1 multipliers mu outside the group of
/// lambda whose u-th powers avoid {lambda^(e*u)} and one another; the
/// builder scans fields/elements deterministically and reports which
/// condition failed for a caller-supplied field.
C3Spec build(int racks, int rack_size, int k, int helpers, FieldCtxPtr field = nullptr);

Codeword encode(const C3Spec& spec, const Codeword& data);

bool parity_check(const C3Spec& spec, const Codeword& cw);

/// Inductive decoder over rack-digit zero patterns.
Codeword erasure_decode(const C3Spec& spec, const Codeword& cw,
                        const std::vector<int>& erased_cols);

/// Reference decoder solving one linear system for all erased cells.
Codeword erasure_decode_generic(const C3Spec& spec, const Codeword& cw,
                                const std::vector<int>& erased_cols);

/// Repairs one node from `helpers` helper racks.  Each helper rack ships
/// l/sbar rack sums; each helper node is read on l/sbar rows.
RepairResult repair_node(const C3Spec& spec, const Codeword& cw, int failed,
                         const std::vector<int>& helper_racks);

}  // namespace rackmsr::c3
