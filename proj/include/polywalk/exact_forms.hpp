// Closed-form gambler's-ruin and polygon-walk quantities in double precision.
//
// Every asymmetric formula is a rational function of r = q/p with factors
// (r^k - 1) that cancel catastrophically near r = 1 and overflow for large
// k*|ln r|. They are evaluated here through the half log-odds y = ln(r)/2:
//
//   r^k - 1                 = expm1(2ky)
//   (r^k + 1) / (r^k - 1)   = coth(ky)
//   k coth(ky)              = (1 + h(ky)) / y,   h(z) = z coth z - 1
//
// h is even, O(z^2) at the origin and computed from its Taylor series there,
// so the differences of k coth(ky) terms that drive the conditional durations
// and cover times keep full relative precision all the way down to the
// symmetric hand-off at |p - 1/2| = kSymmetryEps. Nothing is raised to a
// power outside log space, so no intermediate overflows.
//
// Vertex indices are 1-based (1..m) in every signature; vectors returned by
// last_vertex_pmf store vertex i at position i-1.
#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "polywalk/domain.hpp"

namespace polywalk {
namespace detail {

/// ln(q/p) without forming q/p; 1 - 2p is exact for p >= 1/4.
inline double log_odds(double p) { return std::log1p((1.0 - 2.0 * p) / p); }

/// h(z) = z coth(z) - 1.
inline double xcoth_minus_one(double z) {
  const double a = std::abs(z);
  if (a < 0.5) {
    // Bernoulli series 2^{2n} B_{2n} / (2n)!, n = 1..11.
    static constexpr std::array<double, 11> c = {
        1.0 / 3.0,
        -1.0 / 45.0,
        2.0 / 945.0,
        -1.0 / 4725.0,
        2.0 / 93555.0,
        -1382.0 / 638512875.0,
        4.0 / 18243225.0,
        -3617.0 / 162820783125.0,
        87734.0 / 38979295480125.0,
        -349222.0 / 1531329465290625.0,
        310732.0 / 13447856940643125.0,
    };
    const double z2 = a * a;
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z2 + *it;
    return acc * z2;
  }
  return a / std::tanh(a) - 1.0;
}

/// (r^a - 1) / (r^b - 1) for a >= 0, b > 0, given lr = ln r != 0.
inline double pow_ratio(double lr, double a, double b) {
  if (lr < 0.0) return std::expm1(a * lr) / std::expm1(b * lr);
  return std::exp((a - b) * lr) * (std::expm1(-a * lr) / std::expm1(-b * lr));
}

/// coth(y) [N coth(Ny) - i coth(iy)] = y coth(y) (h(Ny) - h(iy)) / y^2,
/// the expected duration given a win for the asymmetric walk.
inline double win_duration_asym(int i, int n, double y) {
  const double xc = 1.0 + xcoth_minus_one(y);
  return xc * (xcoth_minus_one(n * y) - xcoth_minus_one(i * y)) / (y * y);
}

}  // namespace detail

/// Probability of reaching `target` before 0.
inline double ruin_win_prob(const RuinSpec& s) {
  validate(s);
  const int i = s.start, n = s.target;
  if (i == 0) return 0.0;
  if (i == n) return 1.0;
  if (is_symmetric(s.p)) return static_cast<double>(i) / n;
  return detail::pow_ratio(detail::log_odds(s.p), i, n);
}

/// Expected number of bets until the game ends.
inline double ruin_expected_duration(const RuinSpec& s) {
  validate(s);
  const int i = s.start, n = s.target;
  if (i == 0 || i == n) return 0.0;
  if (is_symmetric(s.p)) return static_cast<double>(i) * (n - i);
  // (r+1)/(r-1) = 1/(q-p)
  const double win = detail::pow_ratio(detail::log_odds(s.p), i, n);
  return (i - n * win) / (1.0 - 2.0 * s.p);
}

/// Expected number of bets given that the gambler reaches the target.
inline double conditional_duration_given_win(const RuinSpec& s) {
  validate(s);
  const int i = s.start, n = s.target;
  if (i == 0) throw DomainError("duration given a win is undefined from the broke state");
  if (i == n) return 0.0;
  if (is_symmetric(s.p)) return static_cast<double>(n - i) * (n + i) / 3.0;
  return detail::win_duration_asym(i, n, 0.5 * detail::log_odds(s.p));
}

/// Expected number of bets given that the gambler goes broke.
inline double conditional_duration_given_broke(const RuinSpec& s) {
  validate(s);
  const int i = s.start, n = s.target;
  if (i == n) throw DomainError("duration given ruin is undefined from the target state");
  if (i == 0) return 0.0;
  if (is_symmetric(s.p)) return static_cast<double>(i) * (2 * n - i) / 3.0;
  // W_{N-i:N} is unchanged by p <-> q, so no swap is needed.
  return detail::win_duration_asym(n - i, n, 0.5 * detail::log_odds(s.p));
}

/// P{first bet won | gambler reaches the target}, for 1 <= start <= target-1.
inline double posterior_first_win_given_win(const RuinSpec& s) {
  validate(s);
  const int i = s.start, n = s.target;
  if (i < 1 || i > n - 1) throw DomainError("posterior needs 1 <= start <= target-1");
  if (is_symmetric(s.p)) return static_cast<double>(i + 1) / (2.0 * i);
  const double lr = detail::log_odds(s.p);
  if (lr < 0.0) return s.p * (std::expm1((i + 1) * lr) / std::expm1(i * lr));
  // p * r = q
  return (1.0 - s.p) * (std::expm1(-(i + 1) * lr) / std::expm1(-i * lr));
}

/// P{all vertices visited before the first return to 0}.
inline double cover_before_return_prob(const PolygonSpec& s) {
  validate(s);
  if (is_symmetric(s.p)) return 1.0 / s.m;
  const double y = 0.5 * detail::log_odds(s.p);
  return std::tanh(y) / std::tanh(s.m * y);
}

/// Distribution of the last vertex visited; entry k is vertex k+1.
inline std::vector<double> last_vertex_pmf(const PolygonSpec& s) {
  validate(s);
  const int m = s.m;
  std::vector<double> pmf(static_cast<std::size_t>(m), 1.0 / m);
  if (is_symmetric(s.p)) return pmf;
  const double lr = detail::log_odds(s.p);
  for (int i = 1; i <= m; ++i) {
    // r^{m-i} (r-1)/(r^m-1), with the exponent kept non-positive.
    pmf[i - 1] = lr < 0.0 ? std::exp((m - i) * lr) * (std::expm1(lr) / std::expm1(m * lr))
                          : std::exp((1 - i) * lr) * (std::expm1(-lr) / std::expm1(-m * lr));
  }
  return pmf;
}

/// E[cover time | vertex i is visited last], 1 <= i <= m.
///
/// The asymmetric branch is rearranged as W_{1:m} + E_{i:m+1}: the cover
/// phase before the last gap plus the crossing of that gap.
inline double conditional_cover_time(const PolygonSpec& s, int i) {
  validate(s);
  const int m = s.m;
  if (i < 1 || i > m) throw DomainError("last vertex must lie in 1..m");
  if (m == 1) return 1.0;
  if (is_symmetric(s.p)) return (m - 1.0) * (m + 1.0) / 3.0 + static_cast<double>(m + 1 - i) * i;
  const double y = 0.5 * detail::log_odds(s.p);
  return detail::win_duration_asym(1, m, y) + ruin_expected_duration({i, m + 1, s.p});
}

/// Expected number of steps to visit every vertex.
inline double expected_cover_time(const PolygonSpec& s) {
  validate(s);
  const int m = s.m;
  if (m == 1) return 1.0;  // one step covers the 2-cycle
  if (is_symmetric(s.p)) return m * (m + 1.0) / 2.0;
  using detail::xcoth_minus_one;
  const double y = 0.5 * detail::log_odds(s.p);
  const double h1 = xcoth_minus_one(y);
  const double bracket = (m + 1.0) * xcoth_minus_one((m + 1.0) * y) - m * xcoth_minus_one(m * y) - h1;
  return (1.0 + h1) * bracket / (2.0 * y * y);
}

/// Expected additional steps to return to 0 once every vertex is visited.
inline double expected_return_after_cover(const PolygonSpec& s) {
  validate(s);
  const int m = s.m;
  if (m == 1) return 1.0;
  if (is_symmetric(s.p)) return (m + 1.0) * (m + 2.0) / 6.0;
  using detail::xcoth_minus_one;
  const double y = 0.5 * detail::log_odds(s.p);
  const double h1 = xcoth_minus_one(y);
  const double bracket =
      (m + 1.0) * xcoth_minus_one((m + 1.0) * y) - (m + 2.0) * xcoth_minus_one(m * y) + h1;
  return (1.0 + h1) * bracket / (2.0 * y * y);
}

/// Long-run occupation law; uniform for every p. Entry k is vertex k.
inline std::vector<double> stationary_distribution(const PolygonSpec& s) {
  validate(s);
  return std::vector<double>(static_cast<std::size_t>(s.m) + 1, 1.0 / (s.m + 1));
}

inline double mean_recurrence_time(const PolygonSpec& s) {
  validate(s);
  return s.m + 1.0;
}

}  // namespace polywalk
