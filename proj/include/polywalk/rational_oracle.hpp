// Exact solutions of the first-step recursions behind every closed form.
//
// Nothing here evaluates a closed form. Each quantity comes from building the
// linear recursion obtained by conditioning on the first step and solving it
// over the rationals, or (appendix_a_*, appendix_b_*) from the telescoping
// recursions on successive differences. Results are therefore an independent
// ground truth for exact_forms.hpp and closed_forms_exact.hpp.
#pragma once

#include <cstddef>
#include <vector>

#include "polywalk/rational.hpp"
#include "polywalk/tridiagonal.hpp"

namespace polywalk::oracle {

namespace detail {

inline void require_ruin_bounds(int i, int n) {
  if (n < 1) throw DomainError("target must be >= 1");
  if (i < 0 || i > n) throw DomainError("start must satisfy 0 <= start <= target");
}

/// Interior unknowns 1..n-1 of x_i = c + back x_{i-1} + fwd x_{i+1}, with
/// the two boundary values; returns the full table x_0..x_n.
inline std::vector<Rational> solve_birth_death(int n, const Rational& back, const Rational& fwd,
                                               const Rational& constant, const Rational& at_zero,
                                               const Rational& at_n, const OracleOptions& opt) {
  TridiagonalRationalSystem sys;
  sys.left_boundary = at_zero;
  sys.right_boundary = at_n;
  for (int i = 1; i <= n - 1; ++i) sys.add_first_step_row(back, fwd, constant);
  std::vector<Rational> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  out.push_back(at_zero);
  for (auto& x : solve(sys, opt)) out.push_back(std::move(x));
  out.push_back(at_n);
  return out;
}

}  // namespace detail

/// P_{i:N} for i = 0..N.
inline std::vector<Rational> ruin_prob_table(int n, const RationalProb& p, const OracleOptions& opt = {}) {
  detail::require_ruin_bounds(0, n);
  return detail::solve_birth_death(n, p.q(), p.p(), 0, 0, 1, opt);
}

inline Rational solve_ruin_prob(int i, int n, const RationalProb& p, const OracleOptions& opt = {}) {
  detail::require_ruin_bounds(i, n);
  return ruin_prob_table(n, p, opt)[static_cast<std::size_t>(i)];
}

/// E_{i:N} for i = 0..N.
inline std::vector<Rational> expected_duration_table(int n, const RationalProb& p,
                                                     const OracleOptions& opt = {}) {
  detail::require_ruin_bounds(0, n);
  return detail::solve_birth_death(n, p.q(), p.p(), 1, 0, 0, opt);
}

inline Rational solve_expected_duration(int i, int n, const RationalProb& p, const OracleOptions& opt = {}) {
  detail::require_ruin_bounds(i, n);
  return expected_duration_table(n, p, opt)[static_cast<std::size_t>(i)];
}

/// P{first bet won | win} for i = 1..N-1, stored at position i-1.
inline std::vector<Rational> posterior_first_win_table(int n, const RationalProb& p, const OracleOptions& opt = {}) {
  detail::require_ruin_bounds(0, n);
  const auto prob = ruin_prob_table(n, p, opt);
  std::vector<Rational> out;
  for (int i = 1; i <= n - 1; ++i) out.push_back(p.p() * prob[i + 1] / prob[i]);
  return out;
}

/// P{first bet won | win} = p P_{i+1:N} / P_{i:N}, for 1 <= i <= N-1.
inline Rational posterior_first_win(int i, int n, const RationalProb& p, const OracleOptions& opt = {}) {
  detail::require_ruin_bounds(i, n);
  if (i < 1 || i > n - 1) throw DomainError("posterior needs 1 <= start <= target-1");
  const auto prob = ruin_prob_table(n, p, opt);
  return p.p() * prob[i + 1] / prob[i];
}

/// W_{i:N} for i = 1..N, stored at position i-1.
///
/// Row 1 is W_1 = 1 + W_2 (a win from 1 dollar forces a winning first bet);
/// rows 2..N-1 weight the neighbours by the Bayes posterior of the first bet.
inline std::vector<Rational> win_duration_table(int n, const RationalProb& p, const OracleOptions& opt = {}) {
  detail::require_ruin_bounds(1, n);
  const auto prob = ruin_prob_table(n, p, opt);
  TridiagonalRationalSystem sys;
  sys.left_boundary = 0;  // multiplied by a zero weight in row 1
  sys.right_boundary = 0;
  for (int i = 1; i <= n - 1; ++i) {
    if (i == 1) {
      sys.add_first_step_row(0, 1, 1);
      continue;
    }
    const Rational fwd = p.p() * prob[i + 1] / prob[i];
    sys.add_first_step_row(Rational(1 - fwd), fwd, 1);
  }
  auto out = solve(sys, opt);
  out.push_back(0);  // W_{N:N}
  return out;
}

inline Rational solve_conditional_win_duration(int i, int n, const RationalProb& p,
                                               const OracleOptions& opt = {}) {
  detail::require_ruin_bounds(i, n);
  if (i == 0) throw DomainError("duration given a win is undefined from the broke state");
  return win_duration_table(n, p, opt)[static_cast<std::size_t>(i - 1)];
}

/// B_{i:N} = W_{N-i:N} with p and q interchanged.
inline Rational solve_conditional_broke_duration(int i, int n, const RationalProb& p,
                                                 const OracleOptions& opt = {}) {
  detail::require_ruin_bounds(i, n);
  if (i == n) throw DomainError("duration given ruin is undefined from the target state");
  return solve_conditional_win_duration(n - i, n, p.swapped(), opt);
}

/// B_{i:N} for i = 0..N-1.
inline std::vector<Rational> broke_duration_table(int n, const RationalProb& p, const OracleOptions& opt = {}) {
  const auto mirrored = win_duration_table(n, p.swapped(), opt);  // W_j at j-1
  std::vector<Rational> out;
  for (int i = 0; i <= n - 1; ++i) out.push_back(mirrored[static_cast<std::size_t>(n - i - 1)]);
  return out;
}

/// P{L_i}, i = 1..m, stored at position i-1.
inline std::vector<Rational> solve_last_vertex_pmf(int m, const RationalProb& p, const OracleOptions& opt = {}) {
  if (m < 1) throw DomainError("polygon needs m >= 1");
  if (m == 1) return {Rational(1)};
  TridiagonalRationalSystem sys;
  // Vertex 1 is last iff, relabelled counterclockwise from 1, the walk
  // started one step away reaches the far end first; vertex m mirrors it.
  sys.left_boundary = solve_ruin_prob(1, m, p.swapped(), opt);
  sys.right_boundary = solve_ruin_prob(1, m, p, opt);
  for (int i = 2; i <= m - 1; ++i) sys.add_first_step_row(p.p(), p.q(), 0);
  std::vector<Rational> out{sys.left_boundary};
  for (auto& x : solve(sys, opt)) out.push_back(std::move(x));
  out.push_back(sys.right_boundary);
  return out;
}

/// v_i = E[V | L_i], i = 1..m, stored at position i-1.
///
/// Boundary rows come from splitting the path to vertex 1 (or m) into its
/// first step, a conditioned ruin phase and a final unconditioned crossing.
/// For m = 2 the ruin phase is empty (B_{0:2} = W_{2:2} = 0); m = 1 is one step.
inline std::vector<Rational> solve_conditional_cover_time(int m, const RationalProb& p,
                                                          const OracleOptions& opt = {}) {
  if (m < 1) throw DomainError("polygon needs m >= 1");
  if (m == 1) return {Rational(1)};
  const auto crossing = expected_duration_table(m + 1, p, opt);
  TridiagonalRationalSystem sys;
  sys.left_boundary = 1 + solve_conditional_broke_duration(m - 2, m, p, opt) + crossing[1];
  sys.right_boundary = 1 + solve_conditional_win_duration(2, m, p, opt) + crossing[m];
  // Given L_i the first step is clockwise with probability q.
  for (int i = 2; i <= m - 1; ++i) sys.add_first_step_row(p.q(), p.p(), 1);
  std::vector<Rational> out{sys.left_boundary};
  for (auto& x : solve(sys, opt)) out.push_back(std::move(x));
  out.push_back(sys.right_boundary);
  return out;
}

/// P{A} = p P_{1:m} + q P_{1:m}(p <-> q).
inline Rational cover_before_return_prob(int m, const RationalProb& p, const OracleOptions& opt = {}) {
  if (m < 1) throw DomainError("polygon needs m >= 1");
  return p.p() * solve_ruin_prob(1, m, p, opt) + p.q() * solve_ruin_prob(1, m, p.swapped(), opt);
}

/// E[V] = sum_i v_i P{L_i}.
inline Rational expected_cover_time(int m, const RationalProb& p, const OracleOptions& opt = {}) {
  const auto pmf = solve_last_vertex_pmf(m, p, opt);
  const auto v = solve_conditional_cover_time(m, p, opt);
  Rational sum = 0;
  for (std::size_t k = 0; k < pmf.size(); ++k) sum += pmf[k] * v[k];
  return sum;
}

/// E[R] = sum_i P{L_i} E_{i:m+1}.
inline Rational expected_return_after_cover(int m, const RationalProb& p, const OracleOptions& opt = {}) {
  const auto pmf = solve_last_vertex_pmf(m, p, opt);
  const auto crossing = expected_duration_table(m + 1, p, opt);
  Rational sum = 0;
  for (std::size_t k = 0; k < pmf.size(); ++k) sum += pmf[k] * crossing[k + 1];
  return sum;
}

// ---------------------------------------------------------------------------
// Telescoping solutions
// ---------------------------------------------------------------------------

/// Intermediate sequences of the telescoping solvers.
///
/// symmetric_terms[k]  = D_{k+1}: (1/2) i(i+1)(W_i - W_{i+1}) at r = 1,
/// asymmetric_terms[k] = C_{k+1}: the same gap scaled by
///                       (r^i-1)(r^{i+1}-1) / ((r-1)^2 (r+1)),
/// increments[k]       = d_{k+2} = v_{k+2} - v_{k+1}.
/// Only the sequence relevant to the regime is filled.
struct RecurrenceTrace {
  std::vector<Rational> symmetric_terms;
  std::vector<Rational> asymmetric_terms;
  std::vector<Rational> increments;
};

struct AppendixAResult {
  RecurrenceTrace trace;
  std::vector<Rational> win_duration;  // W_i at position i-1, i = 1..N
};

/// W_{i:N} for all i from the gap recursion D_i = D_{i-1} + i^2 (r = 1) or
/// C_i = r C_{i-1} + (1 + r + ... + r^{i-1})^2, both seeded with 1, summed
/// down from W_N = 0.
inline AppendixAResult appendix_a_solve(int n, const RationalProb& p, const OracleOptions& opt = {}) {
  detail::require_ruin_bounds(1, n);
  AppendixAResult res;
  std::vector<Rational> gaps;  // W_i - W_{i+1}, i = 1..N-1
  if (p.symmetric()) {
    Rational d = 1;
    for (int i = 1; i <= n - 1; ++i) {
      if (i > 1) d += Rational(i) * i;
      res.trace.symmetric_terms.push_back(d);
      gaps.push_back(2 * d / (Rational(i) * (i + 1)));
    }
  } else {
    const Rational r = p.odds();
    Rational c = 1;
    Rational geometric = 1;  // 1 + r + ... + r^{i-1}
    Rational r_pow = r;      // r^i
    for (int i = 1; i <= n - 1; ++i) {
      if (i > 1) {
        geometric += r_pow;
        r_pow *= r;
        c = r * c + geometric * geometric;
      }
      res.trace.asymmetric_terms.push_back(c);
      const Rational rm1 = r - 1;
      gaps.push_back(c * rm1 * rm1 * (r + 1) / ((r_pow - 1) * (r_pow * r - 1)));
      check_growth(gaps.back(), opt);
    }
  }
  res.win_duration.assign(static_cast<std::size_t>(n), Rational(0));
  for (int i = n - 1; i >= 1; --i) res.win_duration[i - 1] = res.win_duration[i] + gaps[i - 1];
  return res;
}

inline Rational appendix_a_W(int i, int n, const RationalProb& p, const OracleOptions& opt = {}) {
  detail::require_ruin_bounds(i, n);
  if (i == 0) throw DomainError("duration given a win is undefined from the broke state");
  return appendix_a_solve(n, p, opt).win_duration[static_cast<std::size_t>(i - 1)];
}

struct AppendixBResult {
  RecurrenceTrace trace;
  std::vector<Rational> cover_time;  // v_i at position i-1, i = 1..m
};

/// v_i from d_{i+1} = r d_i - (r+1), seeded by the closed-form d_2 and v_1
/// that make the far boundary consistent. Requires m >= 3.
inline AppendixBResult appendix_b_solve(int m, const RationalProb& p, const OracleOptions& opt = {}) {
  if (m < 3) throw DomainError("telescoping cover-time solver needs m >= 3");
  AppendixBResult res;
  Rational d, v1;
  const Rational r = p.odds();
  if (p.symmetric()) {
    d = m - 2;
    v1 = 1 + frac((m - 2) * (m + 2), 3) + m;
  } else {
    const Rational k = (r + 1) / (r - 1);
    const Rational rm = pow(r, static_cast<unsigned long>(m));
    const Rational rm1 = rm * r;
    d = k - Rational(m + 1) * r * (r + 1) / (rm1 - 1);
    v1 = k * (m - 2 / (r - 1) + Rational(2 * m) / (rm - 1) - Rational(m + 1) * (r - 1) / (rm1 - 1));
  }
  res.cover_time.push_back(v1);
  for (int i = 2; i <= m; ++i) {
    res.trace.increments.push_back(d);
    res.cover_time.push_back(res.cover_time.back() + d);
    check_growth(res.cover_time.back(), opt);
    d = p.symmetric() ? Rational(d - 2) : Rational(r * d - (r + 1));
  }
  return res;
}

inline std::vector<Rational> appendix_b_v(int m, const RationalProb& p, const OracleOptions& opt = {}) {
  return appendix_b_solve(m, p, opt).cover_time;
}

}  // namespace polywalk::oracle
