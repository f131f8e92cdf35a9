#pragma once

namespace rackmsr {

/// Mixed-radix helpers for row indices written as fixed-base digit strings
/// (little-endian: digit 0 is the least significant).

inline long pow_long(long base, int exp) {
  long v = 1;
  for (int i = 0; i < exp; ++i) v *= base;
  return v;
}

inline int digit_of(long idx, int pos, int base) {
  for (int i = 0; i < pos; ++i) idx /= base;
  return static_cast<int>(idx % base);
}

inline long with_digit(long idx, int pos, int base, int val) {
  const long scale = pow_long(base, pos);
  const int old = digit_of(idx, pos, base);
  return idx + (static_cast<long>(val) - old) * scale;
}

}  // namespace rackmsr
