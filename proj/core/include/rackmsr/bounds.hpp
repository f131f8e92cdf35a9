#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace rackmsr::bounds {

/// One evaluated bound, optionally paired with a measured count.  All linear
/// bounds are exact rationals so that attainment is an exact comparison.
struct BoundReport {
  std::string name;
  std::vector<std::pair<std::string, long>> inputs;
  mpq_class value;
  std::optional<long> measured;

  bool attained() const { return measured.has_value() && mpq_class(*measured) == value; }
};

/// Information-flow floor on the repair bandwidth with d helper nodes:
/// d*l/(d-k+1).  Requires k <= d.
mpq_class cutset_bound(long d, long k, long l);

/// Rack-level analogue with dbar helper racks: dbar*l/(dbar-kbar+1).
/// Requires kbar <= dbar.
mpq_class rack_cutset_bound(long dbar, long kbar, long l);

/// Floor on the number of symbols read on the helper racks: dbar*u*l/s.
mpq_class access_bound(long dbar, long u, long l, long s);

enum class SubpackVariant { a, b };

/// Floor on the sub-packetization of optimal-access rack codes:
/// min(sbar^((nbar-1)/s), sbar^(kbar-1)) with s = sbar*u; variant b uses
/// nbar/s in the first exponent.  Real-valued because the exponents are not
/// integers in general.
double subpacketization_bound(int nbar, int kbar, int dbar, int u,
                              SubpackVariant variant);

/// Splits the homogeneous repair bandwidth floor for d = dbar*u + u - 1
/// helpers into its rack-level and intra-rack summands
/// (dbar*l/(dbar-kbar+1), (u-1)*l/(d-k+1)); their sum is cutset_bound(d,k,l).
/// Requires u | k and u | d+1.
std::pair<mpq_class, mpq_class> homogeneous_decomposition(long d, long k, long u,
                                                          long l);

}  // namespace rackmsr::bounds
