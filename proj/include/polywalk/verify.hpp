// The cross-check suite behind `polywalk verify` and the acceptance runner:
// exact oracle vs closed forms, the telescoping solvers, floating-point
// fidelity, and the structural identities of the closed forms.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "polywalk/closed_forms_exact.hpp"
#include "polywalk/exact_forms.hpp"
#include "polywalk/rational_oracle.hpp"

namespace polywalk::verify {

struct Failure {
  std::string instance;
  double deviation = 0.0;
};

/// One named check over many instances.
struct Check {
  explicit Check(std::string check_name) : name(std::move(check_name)) {}

  std::string name;
  std::uint64_t instances = 0;
  double max_deviation = 0.0;
  std::vector<Failure> failures;

  bool passed() const { return failures.empty(); }

  template <class Describe>
  void expect(bool ok, double deviation, Describe&& describe) {
    ++instances;
    if (std::isnan(deviation)) ok = false;
    if (!std::isnan(deviation)) max_deviation = std::max(max_deviation, deviation);
    if (!ok) failures.push_back({describe(), deviation});
  }
};

using Report = std::vector<Check>;

inline bool all_passed(const Report& r) {
  return std::all_of(r.begin(), r.end(), [](const Check& c) { return c.passed(); });
}

inline void append(Report& into, Report&& more) {
  for (auto& c : more) into.push_back(std::move(c));
}

/// |a - b| relative to |b|; absolute when b is exactly zero.
inline double rel_dev(double a, double b) {
  if (a == b) return 0.0;
  return b == 0.0 ? std::abs(a) : std::abs(a - b) / std::abs(b);
}

/// |a - b| relative to the larger magnitude, for comparing two evaluations
/// neither of which is privileged.
inline double sym_dev(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

inline double exact_dev(const Rational& a, const Rational& b) { return std::abs(to_double(a - b)); }

namespace detail {

inline std::string ruin_at(const std::string& p, int i, int n) {
  return "p=" + p + " i=" + std::to_string(i) + " N=" + std::to_string(n);
}
inline std::string poly_at(const std::string& p, int m) { return "p=" + p + " m=" + std::to_string(m); }
inline std::string poly_at(const std::string& p, int m, int i) { return poly_at(p, m) + " i=" + std::to_string(i); }
inline std::string fmt(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", p);
  return buf;
}

/// Every oracle value on the (N <= max_n, m <= max_n) grid at one p, in the
/// same layout the checks iterate over.
struct OracleGrid {
  // ruin quantities, indexed [N][i]
  std::vector<std::vector<Rational>> win, duration, given_win, given_broke, posterior;
  // polygon quantities, indexed [m]
  std::vector<std::vector<Rational>> pmf, cover_by_last;
  std::vector<Rational> cover_prob, cover_time, return_time;
};

inline OracleGrid oracle_grid(int max_n, const RationalProb& p) {
  OracleGrid g;
  const auto slots = static_cast<std::size_t>(max_n) + 1;
  for (auto* v : {&g.win, &g.duration, &g.given_win, &g.given_broke, &g.posterior, &g.pmf, &g.cover_by_last})
    v->resize(slots);
  g.cover_prob.resize(slots);
  g.cover_time.resize(slots);
  g.return_time.resize(slots);
  for (int n = 1; n <= max_n; ++n) {
    g.win[n] = oracle::ruin_prob_table(n, p);
    g.duration[n] = oracle::expected_duration_table(n, p);
    g.given_win[n] = oracle::win_duration_table(n, p);  // i = 1..N
    g.given_broke[n] = oracle::broke_duration_table(n, p);     // i = 0..N-1
    g.posterior[n] = oracle::posterior_first_win_table(n, p);  // i = 1..N-1
    g.pmf[n] = oracle::solve_last_vertex_pmf(n, p);
    g.cover_by_last[n] = oracle::solve_conditional_cover_time(n, p);
    g.cover_prob[n] = oracle::cover_before_return_prob(n, p);
    g.cover_time[n] = oracle::expected_cover_time(n, p);
    g.return_time[n] = oracle::expected_return_after_cover(n, p);
  }
  return g;
}

}  // namespace detail

/// First-step solves equal the closed forms as reduced fractions, and every
/// pmf sums to exactly 1.
inline Report oracle_matches_closed_forms(int max_n, const std::vector<RationalProb>& ps) {
  Check win{"exact: ruin-prob"}, dur{"exact: ruin-duration"}, gw{"exact: win-duration"},
      gb{"exact: broke-duration"}, post{"exact: posterior-first-win"}, cp{"exact: cover-prob"},
      pmf{"exact: last-vertex-pmf"}, cct{"exact: cond-cover-time"}, ct{"exact: cover-time"},
      rt{"exact: return-time"}, norm{"exact: pmf sums to 1"};
  for (const auto& p : ps) {
    const auto g = detail::oracle_grid(max_n, p);
    const std::string ps_ = p.str();
    for (int n = 1; n <= max_n; ++n) {
      for (int i = 0; i <= n; ++i) {
        const auto at = [&] { return detail::ruin_at(ps_, i, n); };
        const auto a = closed::ruin_win_prob(i, n, p);
        win.expect(g.win[n][i] == a, exact_dev(g.win[n][i], a), at);
        const auto e = closed::ruin_expected_duration(i, n, p);
        dur.expect(g.duration[n][i] == e, exact_dev(g.duration[n][i], e), at);
        if (i >= 1) {
          const auto w = closed::conditional_duration_given_win(i, n, p);
          gw.expect(g.given_win[n][i - 1] == w, exact_dev(g.given_win[n][i - 1], w), at);
        }
        if (i <= n - 1) {
          const auto b = closed::conditional_duration_given_broke(i, n, p);
          gb.expect(g.given_broke[n][i] == b, exact_dev(g.given_broke[n][i], b), at);
        }
        if (i >= 1 && i <= n - 1) {
          const auto f = closed::posterior_first_win_given_win(i, p);
          post.expect(g.posterior[n][i - 1] == f, exact_dev(g.posterior[n][i - 1], f), at);
        }
      }
      const int m = n;
      const auto at = [&] { return detail::poly_at(ps_, m); };
      const auto a = closed::cover_before_return_prob(m, p);
      cp.expect(g.cover_prob[m] == a, exact_dev(g.cover_prob[m], a), at);
      const auto l = closed::last_vertex_pmf(m, p);
      Rational total = 0;
      for (int i = 1; i <= m; ++i) {
        const auto& got = g.pmf[m][i - 1];
        pmf.expect(got == l[i - 1], exact_dev(got, l[i - 1]), [&] { return detail::poly_at(ps_, m, i); });
        const auto v = closed::conditional_cover_time(m, i, p);
        cct.expect(g.cover_by_last[m][i - 1] == v, exact_dev(g.cover_by_last[m][i - 1], v),
                   [&] { return detail::poly_at(ps_, m, i); });
        total += got;
      }
      norm.expect(total == 1, exact_dev(total, Rational(1)), at);
      const auto v = closed::expected_cover_time(m, p);
      ct.expect(g.cover_time[m] == v, exact_dev(g.cover_time[m], v), at);
      const auto r = closed::expected_return_after_cover(m, p);
      rt.expect(g.return_time[m] == r, exact_dev(g.return_time[m], r), at);
    }
  }
  return {win, dur, gw, gb, post, cp, pmf, cct, ct, rt, norm};
}

/// The telescoping solvers agree with the first-step solves, and their
/// intermediate sequences match the closed-form gap terms.
inline Report appendix_paths_agree(int max_n, const std::vector<RationalProb>& ps) {
  Check a{"exact: telescoped win-duration = first-step"}, b{"exact: telescoped cover-time = first-step"},
      gaps{"exact: gap terms = closed form"};
  for (const auto& p : ps) {
    const std::string ps_ = p.str();
    for (int n = 1; n <= max_n; ++n) {
      const auto tele = oracle::appendix_a_solve(n, p);
      const auto direct = oracle::win_duration_table(n, p);
      for (int i = 1; i <= n; ++i)
        a.expect(tele.win_duration[i - 1] == direct[i - 1], exact_dev(tele.win_duration[i - 1], direct[i - 1]),
                 [&] { return detail::ruin_at(ps_, i, n); });
      if (n == max_n) {
        for (int i = 1; i <= n - 1; ++i) {
          const auto& got = p.symmetric() ? tele.trace.symmetric_terms[i - 1] : tele.trace.asymmetric_terms[i - 1];
          const auto want = p.symmetric() ? closed::symmetric_gap_term(i) : closed::asymmetric_gap_term(i, p.odds());
          gaps.expect(got == want, exact_dev(got, want), [&] { return "p=" + ps_ + " i=" + std::to_string(i); });
          if (p.symmetric()) {
            // (1/2) i(i+1)(W_i - W_{i+1}) reproduces D_i
            const Rational lhs = frac(i * (i + 1), 2) * (direct[i - 1] - direct[i]);
            gaps.expect(lhs == got, exact_dev(lhs, got), [&] { return "telescoping p=" + ps_ + " i=" + std::to_string(i); });
          }
        }
      }
      if (n >= 3) {
        const auto tv = oracle::appendix_b_v(n, p);
        const auto dv = oracle::solve_conditional_cover_time(n, p);
        for (int i = 1; i <= n; ++i)
          b.expect(tv[i - 1] == dv[i - 1], exact_dev(tv[i - 1], dv[i - 1]),
                   [&] { return detail::poly_at(ps_, n, i); });
      }
    }
  }
  return {a, b, gaps};
}

/// exact_forms within `tol` relative error of the oracle.
inline Report float_matches_oracle(int max_n, const std::vector<RationalProb>& ps, double tol) {
  Check win{"float: ruin-prob"}, dur{"float: ruin-duration"}, gw{"float: win-duration"},
      gb{"float: broke-duration"}, post{"float: posterior-first-win"}, cp{"float: cover-prob"},
      pmf{"float: last-vertex-pmf"}, cct{"float: cond-cover-time"}, ct{"float: cover-time"},
      rt{"float: return-time"};
  auto cmp = [tol](Check& c, double got, const Rational& want, auto&& at) {
    const double d = rel_dev(got, to_double(want));
    c.expect(d <= tol, d, at);
  };
  for (const auto& p : ps) {
    const auto g = detail::oracle_grid(max_n, p);
    const double pd = p.to_double();
    const std::string ps_ = p.str();
    for (int n = 1; n <= max_n; ++n) {
      for (int i = 0; i <= n; ++i) {
        const RuinSpec s{i, n, pd};
        const auto at = [&] { return detail::ruin_at(ps_, i, n); };
        cmp(win, ruin_win_prob(s), g.win[n][i], at);
        cmp(dur, ruin_expected_duration(s), g.duration[n][i], at);
        if (i >= 1) cmp(gw, conditional_duration_given_win(s), g.given_win[n][i - 1], at);
        if (i <= n - 1) cmp(gb, conditional_duration_given_broke(s), g.given_broke[n][i], at);
        if (i >= 1 && i <= n - 1) cmp(post, posterior_first_win_given_win(s), g.posterior[n][i - 1], at);
      }
      const PolygonSpec s{n, pd};
      const auto at = [&] { return detail::poly_at(ps_, n); };
      cmp(cp, cover_before_return_prob(s), g.cover_prob[n], at);
      const auto l = last_vertex_pmf(s);
      for (int i = 1; i <= n; ++i) {
        const auto at_i = [&] { return detail::poly_at(ps_, n, i); };
        cmp(pmf, l[i - 1], g.pmf[n][i - 1], at_i);
        cmp(cct, conditional_cover_time(s, i), g.cover_by_last[n][i - 1], at_i);
      }
      cmp(ct, expected_cover_time(s), g.cover_time[n], at);
      cmp(rt, expected_return_after_cover(s), g.return_time[n], at);
    }
  }
  return {win, dur, gw, gb, post, cp, pmf, cct, ct, rt};
}

/// Swap identities, outcome decomposition, polygon symmetries, the 1/m lower
/// bound on P{A}, monotonicity of N P_{i:N}, and pmf normalisation, on the
/// floating-point evaluators.
inline Report identities_hold(int max_n, const std::vector<double>& grid, double tol) {
  Check sp{"identity: P(p<->q) = 1 - P_{N-i}"}, se{"identity: E(p<->q) = E_{N-i}"},
      sw{"identity: W(p<->q) = W"}, sb{"identity: B_i = W_{N-i}(p<->q)"},
      dec{"identity: E = P W + (1-P) B"}, ra{"identity: P{A}(p<->q) = P{A}"},
      rb{"identity: P{L_i}(p<->q) = P{L_{m+1-i}}"}, rc{"identity: v_i(p<->q) = v_{m+1-i}"},
      rd{"identity: E[V](p<->q) = E[V]"}, lb{"identity: P{A} >= 1/m, strict off p = 1/2"},
      mono{"identity: N P_{i:N} monotone in N"}, norm{"identity: pmf sums to 1"},
      wsum{"identity: E[V] = sum P{L_i} v_i, E[R] = sum P{L_i} E_{i:m+1}"};
  for (const double p : grid) {
    const double q = 1.0 - p;
    const std::string pf = detail::fmt(p);
    for (int n = 1; n <= max_n; ++n) {
      for (int i = 0; i <= n; ++i) {
        const RuinSpec s{i, n, p}, t{i, n, q}, mirror{n - i, n, p}, mirror_t{n - i, n, q};
        const auto at = [&] { return detail::ruin_at(pf, i, n); };
        double d = std::abs(ruin_win_prob(t) - (1.0 - ruin_win_prob(mirror)));
        sp.expect(d <= tol, d, at);
        d = sym_dev(ruin_expected_duration(t), ruin_expected_duration(mirror));
        se.expect(d <= tol, d, at);
        if (i >= 1) {
          d = sym_dev(conditional_duration_given_win(t), conditional_duration_given_win(s));
          sw.expect(d <= tol, d, at);
        }
        if (i <= n - 1) {
          const double b = conditional_duration_given_broke(s);
          d = std::max(sym_dev(b, conditional_duration_given_win(mirror_t)),
                       sym_dev(b, conditional_duration_given_win(mirror)));
          sb.expect(d <= tol, d, at);
        }
        if (i >= 1 && i <= n - 1) {
          const double w = ruin_win_prob(s);
          const double mix = w * conditional_duration_given_win(s) + (1.0 - w) * conditional_duration_given_broke(s);
          d = sym_dev(ruin_expected_duration(s), mix);
          dec.expect(d <= tol, d, at);
        }
      }
      // N P_{i:N}: strictly decreasing in N when p < 1/2, flat at 1/2, and
      // strictly increasing when p > 1/2.
      for (int i = 1; i < n; ++i) {
        const double here = n * ruin_win_prob({i, n, p});
        const double next = (n + 1) * ruin_win_prob({i, n + 1, p});
        const double step = (next - here) / here;
        bool ok;
        if (is_symmetric(p)) ok = std::abs(step) <= tol;
        else if (p < 0.5) ok = step <= tol;
        else ok = step >= -tol;
        mono.expect(ok, p < 0.5 ? std::max(step, 0.0) : std::max(-step, 0.0),
                    [&] { return detail::ruin_at(pf, i, n) + " vs N+1"; });
      }

      const int m = n;
      const PolygonSpec s{m, p}, t{m, q};
      const auto at = [&] { return detail::poly_at(pf, m); };
      const double a = cover_before_return_prob(s);
      double d = sym_dev(cover_before_return_prob(t), a);
      ra.expect(d <= tol, d, at);
      d = sym_dev(expected_cover_time(t), expected_cover_time(s));
      rd.expect(d <= tol, d, at);
      const double floor = 1.0 / m;
      const bool strict = m >= 2 && !is_symmetric(p);
      lb.expect(strict ? a > floor : a >= floor * (1 - tol), std::max(floor - a, 0.0), at);

      const auto ls = last_vertex_pmf(s), lt = last_vertex_pmf(t);
      double total = 0.0, cover = 0.0, ret = 0.0;
      for (int i = 1; i <= m; ++i) {
        const auto at_i = [&] { return detail::poly_at(pf, m, i); };
        d = sym_dev(lt[i - 1], ls[m - i]);
        rb.expect(d <= tol, d, at_i);
        const double v = conditional_cover_time(s, i);
        d = sym_dev(conditional_cover_time(t, i), conditional_cover_time(s, m + 1 - i));
        rc.expect(d <= tol, d, at_i);
        total += ls[i - 1];
        cover += ls[i - 1] * v;
        ret += ls[i - 1] * ruin_expected_duration({i, m + 1, p});
      }
      const auto stationary = stationary_distribution(s);
      const double stat_total = std::accumulate(stationary.begin(), stationary.end(), 0.0);
      d = std::max(std::abs(total - 1.0), std::abs(stat_total - 1.0));
      norm.expect(d <= tol, d, at);
      d = std::max(sym_dev(cover, expected_cover_time(s)), sym_dev(ret, expected_return_after_cover(s)));
      wsum.expect(d <= tol, d, at);
    }
  }
  return {sp, se, sw, sb, dec, ra, rb, rc, rd, lb, mono, norm, wsum};
}

/// Every closed form at p = 1/2 +- delta lies within `tol` relative of its
/// symmetric branch.
inline Report continuous_at_fair_game(int max_n, double delta, double tol) {
  Check c{"continuity at p = 1/2"};
  for (const double p : {0.5 - delta, 0.5 + delta}) {
    const std::string pf = detail::fmt(p);
    auto cmp = [&](double off, double on, const std::string& what) {
      const double d = sym_dev(off, on);
      c.expect(d <= tol, d, [&] { return what + " p=" + pf; });
    };
    for (int n = 1; n <= max_n; ++n) {
      for (int i = 0; i <= n; ++i) {
        const RuinSpec s{i, n, p}, h{i, n, 0.5};
        const std::string at = "i=" + std::to_string(i) + " N=" + std::to_string(n);
        cmp(ruin_win_prob(s), ruin_win_prob(h), "ruin-prob " + at);
        cmp(ruin_expected_duration(s), ruin_expected_duration(h), "ruin-duration " + at);
        if (i >= 1) cmp(conditional_duration_given_win(s), conditional_duration_given_win(h), "win-duration " + at);
        if (i <= n - 1)
          cmp(conditional_duration_given_broke(s), conditional_duration_given_broke(h), "broke-duration " + at);
        if (i >= 1 && i <= n - 1)
          cmp(posterior_first_win_given_win(s), posterior_first_win_given_win(h), "posterior-first-win " + at);
      }
      const PolygonSpec s{n, p}, h{n, 0.5};
      const std::string at = "m=" + std::to_string(n);
      cmp(cover_before_return_prob(s), cover_before_return_prob(h), "cover-prob " + at);
      const auto ls = last_vertex_pmf(s), lh = last_vertex_pmf(h);
      for (int i = 1; i <= n; ++i) {
        cmp(ls[i - 1], lh[i - 1], "last-vertex-pmf " + at + " i=" + std::to_string(i));
        cmp(conditional_cover_time(s, i), conditional_cover_time(h, i),
            "cond-cover-time " + at + " i=" + std::to_string(i));
      }
      cmp(expected_cover_time(s), expected_cover_time(h), "cover-time " + at);
      cmp(expected_return_after_cover(s), expected_return_after_cover(h), "return-time " + at);
    }
  }
  return {c};
}

/// Known values that apply to the requested grid: P_{3:7} = 7/127 at p = 1/3,
/// and the fair-game values whose sizes fit within max_n.
inline Report spot_values(int max_n, const std::vector<RationalProb>& ps) {
  Check c{"spot values"};
  auto exact = [&](const Rational& got, const Rational& want, double fl, const std::string& what) {
    const double d = std::max(exact_dev(got, want), std::abs(fl - to_double(want)));
    c.expect(got == want && d <= 1e-12, d, [&] { return what; });
  };
  for (const auto& p : ps) {
    if (p.p() == Rational(1, 3) && max_n >= 7)
      exact(oracle::solve_ruin_prob(3, 7, p), frac(7, 127), ruin_win_prob({3, 7, p.to_double()}), "P_{3:7} p=1/3");
    if (!p.symmetric()) continue;
    if (max_n >= 40) exact(oracle::solve_ruin_prob(20, 40, p), frac(1, 2), ruin_win_prob({20, 40, 0.5}), "P_{20:40}");
    for (int m : {10, 20, 25, 40, 50}) {
      if (m > max_n) continue;
      exact(oracle::cover_before_return_prob(m, p), frac(1, m), cover_before_return_prob({m, 0.5}),
            "P{A} = 1/m m=" + std::to_string(m));
      exact(oracle::expected_cover_time(m, p), frac(m * (m + 1), 2), expected_cover_time({m, 0.5}),
            "E[V] = m(m+1)/2 m=" + std::to_string(m));
    }
    if (max_n >= 2)
      exact(oracle::expected_return_after_cover(2, p), 2, expected_return_after_cover({2, 0.5}), "E[R] m=2");
  }
  return {c};
}

inline std::vector<RationalProb> default_probabilities() {
  std::vector<RationalProb> out;
  for (const auto& [a, b] : {std::pair{1, 5}, {1, 3}, {2, 5}, {1, 2}, {3, 5}, {2, 3}, {4, 5}}) out.emplace_back(a, b);
  return out;
}

inline constexpr int kContinuityMaxSize = 30;

/// The suite `polywalk verify` runs.
inline Report run_all(int max_n, const std::vector<RationalProb>& ps) {
  if (max_n < 3) throw DomainError("max_n too small");
  std::vector<double> grid;
  for (const auto& p : ps) grid.push_back(p.to_double());
  Report r = oracle_matches_closed_forms(max_n, ps);
  append(r, appendix_paths_agree(max_n, ps));
  append(r, float_matches_oracle(max_n, ps, 1e-9));
  append(r, identities_hold(max_n, grid, 1e-9));
  append(r, continuous_at_fair_game(std::min(max_n, kContinuityMaxSize), 1e-6, 1e-4));
  append(r, spot_values(max_n, ps));
  std::erase_if(r, [](const Check& c) { return c.instances == 0; });
  return r;
}

}  // namespace polywalk::verify
