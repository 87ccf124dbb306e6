// The closed-form expressions written out literally and evaluated over the
// rationals. Used to check the recursion solves term by term as reduced
// fractions; the double-precision evaluators live in exact_forms.hpp.
#pragma once

#include <vector>

#include "polywalk/rational.hpp"

namespace polywalk::closed {

namespace detail {
inline Rational rpow(const Rational& r, int k) { return pow(r, static_cast<unsigned long>(k)); }
inline Rational factor(const Rational& r) { return (r + 1) / (r - 1); }
}  // namespace detail

using detail::factor;
using detail::rpow;

inline Rational ruin_win_prob(int i, int n, const RationalProb& p) {
  if (p.symmetric()) return frac(i, n);
  const Rational r = p.odds();
  return (rpow(r, i) - 1) / (rpow(r, n) - 1);
}

inline Rational ruin_expected_duration(int i, int n, const RationalProb& p) {
  if (p.symmetric()) return Rational(i * (n - i));
  const Rational r = p.odds();
  return factor(r) * (i - n * (rpow(r, i) - 1) / (rpow(r, n) - 1));
}

inline Rational conditional_duration_given_win(int i, int n, const RationalProb& p) {
  if (i == n) return 0;
  if (p.symmetric()) return frac((n - i) * (n + i), 3);
  const Rational r = p.odds();
  const Rational rn = rpow(r, n), ri = rpow(r, i);
  return factor(r) * (n * (rn + 1) / (rn - 1) - i * (ri + 1) / (ri - 1));
}

inline Rational conditional_duration_given_broke(int i, int n, const RationalProb& p) {
  if (i == 0) return 0;
  if (p.symmetric()) return frac(i * (2 * n - i), 3);
  const Rational r = p.odds();
  const Rational rn = rpow(r, n), rni = rpow(r, n - i);
  return factor(r) * (n * (rn + 1) / (rn - 1) - (n - i) * (rni + 1) / (rni - 1));
}

inline Rational posterior_first_win_given_win(int i, const RationalProb& p) {
  if (p.symmetric()) return frac(i + 1, 2 * i);
  const Rational r = p.odds();
  return (rpow(r, i + 1) - 1) / ((r + 1) * (rpow(r, i) - 1));
}

inline Rational cover_before_return_prob(int m, const RationalProb& p) {
  if (p.symmetric()) return frac(1, m);
  const Rational r = p.odds();
  const Rational rm = rpow(r, m);
  return (r - 1) / (r + 1) * (rm + 1) / (rm - 1);
}

/// Vertex i at position i-1.
inline std::vector<Rational> last_vertex_pmf(int m, const RationalProb& p) {
  std::vector<Rational> out;
  const Rational r = p.odds();
  for (int i = 1; i <= m; ++i)
    out.push_back(p.symmetric() ? frac(1, m) : Rational(rpow(r, m - i) * (r - 1) / (rpow(r, m) - 1)));
  return out;
}

inline Rational conditional_cover_time(int m, int i, const RationalProb& p) {
  if (p.symmetric()) return frac((m - 1) * (m + 1), 3) + (m + 1 - i) * i;
  const Rational r = p.odds();
  return factor(r) * (m + i - 1 - 2 / (r - 1) + Rational(2 * m) / (rpow(r, m) - 1) -
                      (m + 1) * (rpow(r, i) - 1) / (rpow(r, m + 1) - 1));
}

inline Rational expected_cover_time(int m, const RationalProb& p) {
  if (p.symmetric()) return frac(m * (m + 1), 2);
  const Rational r = p.odds();
  return factor(r) * (m - 1 / (r - 1) - Rational(m * m) / (rpow(r, m) - 1) +
                      Rational((m + 1) * (m + 1)) / (rpow(r, m + 1) - 1));
}

inline Rational expected_return_after_cover(int m, const RationalProb& p) {
  if (p.symmetric()) return frac((m + 1) * (m + 2), 6);
  const Rational r = p.odds();
  return factor(r) * (r / (r - 1) - Rational(m * (m + 2)) / (rpow(r, m) - 1) +
                      Rational((m + 1) * (m + 1)) / (rpow(r, m + 1) - 1));
}

/// Closed form of the asymmetric gap sequence C_i.
inline Rational asymmetric_gap_term(int i, const Rational& r) {
  const Rational rm1 = r - 1;
  return (rpow(r, 2 * i + 1) - (2 * i + 1) * rpow(r, i + 1) + (2 * i + 1) * rpow(r, i) - 1) /
         (rm1 * rm1 * rm1);
}

/// Closed form of the symmetric gap sequence D_i = 1^2 + ... + i^2.
inline Rational symmetric_gap_term(int i) { return frac(i * (i + 1) * (2 * i + 1), 6); }

}  // namespace polywalk::closed
