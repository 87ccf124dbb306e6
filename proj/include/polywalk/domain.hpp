// Problem instances shared by the closed forms, the exact oracle and the
// simulator.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace polywalk {

/// Thrown when an instance or argument lies outside an operation's domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Half-width of the band around p = 1/2 that is evaluated with the fair-game
/// branch of every formula.
inline constexpr double kSymmetryEps = 1e-9;

/// Gambler's-ruin instance: start with `start` dollars, quit at 0 or `target`,
/// win each one-dollar bet with probability `p`.
struct RuinSpec {
  int start = 0;
  int target = 1;
  double p = 0.5;
};

/// Walk on an (m+1)-gon with vertices 0..m, started at 0. Each step moves
/// clockwise with probability `p`.
struct PolygonSpec {
  int m = 1;
  double p = 0.5;
};

enum class Regime { Symmetric, Asymmetric };

struct RegimeTag {
  Regime kind = Regime::Symmetric;
  double r = 1.0;  // odds of losing a single step, (1-p)/p
};

inline void require_probability(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw DomainError("p must lie strictly inside (0, 1), got " + std::to_string(p));
}

inline void validate(const RuinSpec& s) {
  require_probability(s.p);
  if (s.target < 1) throw DomainError("target must be >= 1");
  if (s.start < 0 || s.start > s.target) throw DomainError("start must satisfy 0 <= start <= target");
}

inline void validate(const PolygonSpec& s) {
  require_probability(s.p);
  if (s.m < 1) throw DomainError("polygon needs m >= 1 non-origin vertices");
}

/// r = q/p, the odds of losing a bet.
inline double odds_ratio(double p) {
  require_probability(p);
  return (1.0 - p) / p;
}

inline RegimeTag regime(double p) {
  const double r = odds_ratio(p);
  return {std::abs(p - 0.5) <= kSymmetryEps ? Regime::Symmetric : Regime::Asymmetric, r};
}

inline bool is_symmetric(double p) { return regime(p).kind == Regime::Symmetric; }

/// The same instance with step probabilities interchanged.
inline RuinSpec swapped(RuinSpec s) {
  s.p = 1.0 - s.p;
  return s;
}

inline PolygonSpec swapped(PolygonSpec s) {
  s.p = 1.0 - s.p;
  return s;
}

}  // namespace polywalk
