/// @file cantor.hpp
/// @brief the Cantor function and its piecewise-linear staircase approximants

#pragma once

namespace surfarea {

/// Exact Cantor function on [0,1] (clamped outside).
///
/// Reads ternary digits of x; each 0/2 digit emits a binary 0/1 and the
/// first digit 1 terminates with a trailing binary 1.  Stops after 64
/// ternary digits.  Endpoints of removed intervals have two ternary
/// expansions and both give the same value.
inline double cantor_exact(double x) {
  if (!(x > 0.0)) return 0.0;
  if (x >= 1.0) return 1.0;
  double value = 0.0;
  double bit = 0.5;
  for (int i = 0; i < 64; ++i) {
    x *= 3.0;
    if (x >= 2.0) {
      value += bit;
      x -= 2.0;
    } else if (x >= 1.0) {
      return value + bit;
    }
    bit *= 0.5;
  }
  return value;
}

/// Depth-k staircase approximant phi_k: phi_0(x) = x and
/// phi_{k+1} = phi_k(3x)/2, 1/2, 1/2 + phi_k(3x-2)/2 on the three thirds.
/// sup |phi_k - cantor_exact| <= 2^-k.
inline double cantor_staircase(double x, int depth) {
  if (!(x > 0.0)) return 0.0;
  if (x >= 1.0) return 1.0;
  double value = 0.0;
  double scale = 1.0;
  for (int i = 0; i < depth; ++i) {
    x *= 3.0;
    if (x < 1.0) {
      scale *= 0.5;
    } else if (x <= 2.0) {
      return value + 0.5 * scale;
    } else {
      x -= 2.0;
      value += 0.5 * scale;
      scale *= 0.5;
    }
  }
  return value + scale * x;
}

/// Derivative of phi_k where it exists: (3/2)^k on the rising pieces, 0 on
/// the plateaus.
inline double cantor_staircase_slope(double x, int depth) {
  if (!(x > 0.0) || x >= 1.0) return 0.0;
  double slope = 1.0;
  for (int i = 0; i < depth; ++i) {
    x *= 3.0;
    if (x < 1.0) {
    } else if (x <= 2.0) {
      return 0.0;
    } else {
      x -= 2.0;
    }
    slope *= 1.5;
  }
  return slope;
}

}  // namespace surfarea
