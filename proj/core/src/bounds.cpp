#include "rackmsr/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace rackmsr::bounds {

namespace {

void require_positive(long l, const char* what) {
  if (l <= 0) throw std::invalid_argument(std::string(what) + " must be positive");
}

}  // namespace

mpq_class cutset_bound(long d, long k, long l) {
  if (k < 1) throw std::invalid_argument("k must be positive");
  if (d < k) throw std::invalid_argument("helper count d must be at least k");
  require_positive(l, "sub-packetization l");
  mpq_class out(mpz_class(d) * l, mpz_class(d - k + 1));
  out.canonicalize();
  return out;
}

mpq_class rack_cutset_bound(long dbar, long kbar, long l) {
  if (kbar < 1) throw std::invalid_argument("kbar must be positive");
  if (dbar < kbar) throw std::invalid_argument("helper rack count dbar must be at least kbar");
  require_positive(l, "sub-packetization l");
  mpq_class out(mpz_class(dbar) * l, mpz_class(dbar - kbar + 1));
  out.canonicalize();
  return out;
}

mpq_class access_bound(long dbar, long u, long l, long s) {
  require_positive(dbar, "helper rack count dbar");
  require_positive(u, "rack size u");
  require_positive(l, "sub-packetization l");
  require_positive(s, "stage count s");
  mpq_class out(mpz_class(dbar) * u * l, mpz_class(s));
  out.canonicalize();
  return out;
}

double subpacketization_bound(int nbar, int kbar, int dbar, int u,
                              SubpackVariant variant) {
  if (kbar < 1) throw std::invalid_argument("kbar must be positive");
  if (nbar <= kbar) throw std::invalid_argument("nbar must exceed kbar");
  if (dbar < kbar || dbar > nbar - 1)
    throw std::invalid_argument("dbar must lie in [kbar, nbar-1]");
  require_positive(u, "rack size u");
  const int sbar = dbar - kbar + 1;
  if (sbar == 1) return 1.0;
  const double s = static_cast<double>(sbar) * u;
  const double numer =
      variant == SubpackVariant::a ? static_cast<double>(nbar - 1) : static_cast<double>(nbar);
  const double first = std::pow(static_cast<double>(sbar), numer / s);
  const double second = std::pow(static_cast<double>(sbar), static_cast<double>(kbar - 1));
  return std::min(first, second);
}

std::pair<mpq_class, mpq_class> homogeneous_decomposition(long d, long k, long u,
                                                          long l) {
  require_positive(u, "rack size u");
  if (k < 1) throw std::invalid_argument("k must be positive");
  if (k % u != 0) throw std::invalid_argument("u must divide k");
  if ((d + 1) % u != 0)
    throw std::invalid_argument("helper count d must equal dbar*u + u - 1");
  const long dbar = (d + 1) / u - 1;
  const long kbar = k / u;
  if (d < k) throw std::invalid_argument("helper count d must be at least k");
  require_positive(l, "sub-packetization l");
  mpq_class rack(mpz_class(dbar) * l, mpz_class(dbar - kbar + 1));
  rack.canonicalize();
  mpq_class local(mpz_class(u - 1) * l, mpz_class(d - k + 1));
  local.canonicalize();
  return {rack, local};
}

}  // namespace rackmsr::bounds
