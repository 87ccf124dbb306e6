// Tridiagonal linear systems over exact rationals.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "polywalk/rational.hpp"

namespace polywalk {

/// Unknowns x_1..x_n with fixed boundary values x_0 and x_{n+1}. Row k reads
///
///   sub[k] x_{k-1} + diag[k] x_k + super[k] x_{k+1} = rhs[k].
///
/// First-step recursions x_k = c + a x_{k-1} + b x_{k+1} are added with
/// add_first_step_row, which stores sub = -a, diag = 1, super = -b.
struct TridiagonalRationalSystem {
  std::vector<Rational> sub, diag, super, rhs;
  Rational left_boundary = 0;
  Rational right_boundary = 0;

  std::size_t size() const { return diag.size(); }

  void add_row(Rational s, Rational d, Rational u, Rational c) {
    sub.push_back(std::move(s));
    diag.push_back(std::move(d));
    super.push_back(std::move(u));
    rhs.push_back(std::move(c));
  }

  /// x_k = constant + back * x_{k-1} + forward * x_{k+1}.
  void add_first_step_row(const Rational& back, const Rational& forward, const Rational& constant) {
    add_row(Rational(-back), Rational(1), Rational(-forward), constant);
  }

  /// Every row is a first-step row whose transition weights sum to one.
  bool is_first_step_form() const {
    for (std::size_t k = 0; k < size(); ++k) {
      if (diag[k] != 1 || sub[k] > 0 || super[k] > 0) return false;
      if (-(sub[k] + super[k]) != 1) return false;
    }
    return true;
  }
};

/// Thomas elimination; O(n) rational operations. Returns x_1..x_n.
inline std::vector<Rational> solve(const TridiagonalRationalSystem& sys, const OracleOptions& opt = {}) {
  const std::size_t n = sys.size();
  if (sys.sub.size() != n || sys.super.size() != n || sys.rhs.size() != n)
    throw std::invalid_argument("tridiagonal system has ragged coefficient arrays");
  if (n == 0) return {};

  std::vector<Rational> upper(n), x(n);
  std::vector<Rational>& reduced = x;  // reduced right-hand side, overwritten in place
  Rational prev_upper = 0, prev_reduced = 0;
  for (std::size_t k = 0; k < n; ++k) {
    Rational r = sys.rhs[k];
    if (k == 0) r -= sys.sub[k] * sys.left_boundary;
    if (k + 1 == n) r -= sys.super[k] * sys.right_boundary;
    Rational pivot = sys.diag[k];
    if (k > 0) {
      pivot -= sys.sub[k] * prev_upper;
      r -= sys.sub[k] * prev_reduced;
    }
    if (pivot == 0) throw std::runtime_error("singular tridiagonal system");
    upper[k] = sys.super[k] / pivot;
    reduced[k] = r / pivot;
    check_growth(upper[k], opt);
    check_growth(reduced[k], opt);
    prev_upper = upper[k];
    prev_reduced = reduced[k];
  }
  for (std::size_t k = n - 1; k-- > 0;) {
    x[k] = reduced[k] - upper[k] * x[k + 1];
    check_growth(x[k], opt);
  }
  return x;
}

}  // namespace polywalk
