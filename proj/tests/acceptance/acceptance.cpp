// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only if
// every criterion passes. Informational lines are indented.
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "polywalk/cli.hpp"
#include "polywalk/closed_forms_exact.hpp"
#include "polywalk/exact_forms.hpp"
#include "polywalk/mc_sim.hpp"
#include "polywalk/rational_oracle.hpp"
#include "polywalk/verify.hpp"

using namespace polywalk;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
  std::vector<std::string> notes;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

/// Summarises a report; failing checks are listed with their first instance.
Outcome from_report(const verify::Report& r) {
  Outcome o;
  o.pass = verify::all_passed(r);
  std::uint64_t instances = 0, failures = 0;
  double worst = 0;
  for (const auto& c : r) {
    instances += c.instances;
    failures += c.failures.size();
    worst = std::max(worst, c.max_deviation);
    if (!c.passed())
      o.notes.push_back(fmt("%s: %zu failures, first %s (deviation %.3g)", c.name.c_str(), c.failures.size(),
                            c.failures[0].instance.c_str(), c.failures[0].deviation));
  }
  o.detail = fmt("%zu checks, %llu instances, %llu failures, max deviation %.3g", r.size(),
                 static_cast<unsigned long long>(instances), static_cast<unsigned long long>(failures), worst);
  return o;
}

std::vector<RationalProb> grid7() { return verify::default_probabilities(); }

std::vector<double> grid99() {
  std::vector<double> g;
  for (int k = 1; k <= 99; ++k) g.push_back(k / 100.0);
  return g;
}

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

std::string run_cli(const std::vector<std::string>& args, int* code = nullptr) {
  std::ostringstream out, err;
  const int rc = cli::run(args, out, err);
  if (code) *code = rc;
  return out.str();
}

Outcome ac1() {
  const auto t0 = std::chrono::steady_clock::now();
  auto o = from_report(verify::oracle_matches_closed_forms(30, grid7()));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.detail += fmt(", %.1f s", secs);
  if (secs >= 60.0) {
    o.pass = false;
    o.notes.push_back("runtime exceeded one minute");
  }
  return o;
}

Outcome ac2() {
  auto o = from_report(verify::appendix_paths_agree(30, grid7()));
  const auto sym = oracle::appendix_a_solve(5, RationalProb(1, 2));
  const auto asym = oracle::appendix_a_solve(5, RationalProb(1, 3));  // r = 2
  const bool d3 = sym.trace.symmetric_terms.at(2) == 14;
  const bool c2 = asym.trace.asymmetric_terms.at(1) == 11;
  o.detail += fmt("; D_3 = %s, C_2(r=2) = %s", to_string(sym.trace.symmetric_terms.at(2)).c_str(),
                  to_string(asym.trace.asymmetric_terms.at(1)).c_str());
  o.pass = o.pass && d3 && c2;
  return o;
}

Outcome ac3() {
  auto small = verify::float_matches_oracle(30, grid7(), 1e-9);
  auto large = verify::float_matches_oracle(200, {RationalProb(9, 20), RationalProb(11, 20)}, 1e-6);
  auto a = from_report(small), b = from_report(large);
  return {a.pass && b.pass, "N,m <= 30 at 1e-9: " + a.detail + " | N,m <= 200, p in {0.45,0.55} at 1e-6: " + b.detail,
          [&] {
            auto n = a.notes;
            n.insert(n.end(), b.notes.begin(), b.notes.end());
            return n;
          }()};
}

Outcome ac4() {
  verify::Check c("spot");
  auto expect = [&](double got, double want, const std::string& what) {
    const double d = std::abs(got - want);
    c.expect(d <= 1e-12, d, [&] { return what; });
  };
  expect(ruin_win_prob({20, 40, 0.5}), 0.5, "P_{20:40}");
  expect(ruin_expected_duration({20, 40, 0.5}), 400, "E_{20:40}");
  expect(conditional_duration_given_win({20, 50, 0.5}), 700, "W_{20:50}");
  expect(conditional_duration_given_broke({20, 25, 0.5}), 200, "B_{20:25}");
  for (int m : {10, 20, 25, 40, 50}) expect(cover_before_return_prob({m, 0.5}), 1.0 / m, fmt("P{A} m=%d", m));
  for (int m = 1; m <= 64; ++m) {
    expect(expected_cover_time({m, 0.5}), m * (m + 1) / 2.0, fmt("E[V] m=%d", m));
    expect(expected_return_after_cover({m, 0.5}), (m + 1) * (m + 2) / 6.0, fmt("E[R] m=%d", m));
    for (const double p : {0.5, 0.3, 0.9}) {
      for (double x : stationary_distribution({m, p})) expect(x, 1.0 / (m + 1), fmt("stationary m=%d p=%g", m, p));
      expect(mean_recurrence_time({m, p}), m + 1.0, fmt("recurrence m=%d p=%g", m, p));
    }
  }
  expect(expected_cover_time({10, 0.5}), 55, "E[V] m=10");
  expect(expected_return_after_cover({2, 0.5}), 2, "E[R] m=2");
  return from_report({c});
}

Outcome ac5() {
  auto o = from_report(verify::identities_hold(64, grid99(), 1e-9));
  // N P_{i:N} is non-increasing only for p <= 1/2; the check above tests the
  // direction that actually holds. Show the smallest favourable counterexample.
  const RationalProb p(2, 3);
  const Rational at1 = 1 * closed::ruin_win_prob(1, 1, p), at2 = 2 * closed::ruin_win_prob(1, 2, p);
  o.notes.push_back("N P_{i:N} increases in N when p > 1/2: i=1, p=2/3 gives " + to_string(at1) + " at N=1 and " +
                    to_string(at2) + " at N=2; checked as decreasing for p < 1/2, increasing for p > 1/2");
  o.notes.push_back("P{A} >= 1/m holds with equality at m = 1 for every p; strictness is checked for m >= 2");
  return o;
}

Outcome ac6() {
  auto o = from_report(verify::continuous_at_fair_game(verify::kContinuityMaxSize, 1e-6, 1e-4));
  o.detail += fmt(" (N, m <= %d)", verify::kContinuityMaxSize);
  return o;
}

Outcome ac7() {
  using sim::Estimate;
  const std::uint64_t trials = 1'000'000;
  sim::SimConfig cfg;
  cfg.trials = trials;
  cfg.workers = workers();
  std::uint64_t total = 0, covered = 0, excluded = 0;
  std::vector<std::string> misses;
  // Proportions are scored with the standard error at the exact value; see
  // Estimate::proportion_within.
  auto score = [&](const Estimate& e, const Rational& exact, const std::string& what, bool proportion = false) {
    if (e.n < 30) {
      ++excluded;
      return;
    }
    ++total;
    const double x = to_double(exact);
    if (proportion ? e.proportion_within(x) : e.within(x)) ++covered;
    else misses.push_back(fmt("%s: mean %.6g, exact %.6g, se %.3g", what.c_str(), e.mean, to_double(exact), e.std_error));
  };
  const std::pair<int, int> probs[] = {{3, 10}, {1, 2}, {7, 10}};
  for (const auto& [a, b] : probs) {
    const RationalProb rp(a, b);
    const double p = rp.to_double();
    for (int m : {2, 5, 10}) {
      const auto r = sim::simulate_polygon({m, p}, cfg);
      const std::string at = fmt("m=%d p=%g", m, p);
      score(r.cover_before_return, oracle::cover_before_return_prob(m, rp), "cover-prob " + at, true);
      const auto pmf = oracle::solve_last_vertex_pmf(m, rp);
      const auto v = oracle::solve_conditional_cover_time(m, rp);
      for (int i = 1; i <= m; ++i) {
        score(r.last_vertex_hist[i - 1], pmf[i - 1], fmt("last-vertex-pmf i=%d ", i) + at, true);
        score(r.cover_time_by_last[i - 1], v[i - 1], fmt("cond-cover-time i=%d ", i) + at);
      }
      score(r.cover_time, oracle::expected_cover_time(m, rp), "cover-time " + at);
      score(r.return_time, oracle::expected_return_after_cover(m, rp), "return-time " + at);
    }
    for (const auto& [i, n] : {std::pair{20, 40}, {1, 2}}) {
      const auto r = sim::simulate_ruin({i, n, p}, cfg);
      const std::string at = fmt("i=%d N=%d p=%g", i, n, p);
      score(r.win_prob, oracle::solve_ruin_prob(i, n, rp), "ruin-prob " + at, true);
      score(r.duration, oracle::solve_expected_duration(i, n, rp), "ruin-duration " + at);
      score(r.duration_given_win, oracle::solve_conditional_win_duration(i, n, rp), "win-duration " + at);
      score(r.duration_given_broke, oracle::solve_conditional_broke_duration(i, n, rp), "broke-duration " + at);
      score(r.first_win_given_win, oracle::posterior_first_win(i, n, rp), "posterior-first-win " + at, true);
    }
  }
  const double coverage = total ? static_cast<double>(covered) / total : 0.0;

  double worst = 0.0;
  for (const auto& [a, b] : probs)
    for (int m : {2, 5, 10}) {
      const auto f = sim::simulate_occupancy({m, static_cast<double>(a) / b}, 10'000'000, cfg);
      for (double x : f) worst = std::max(worst, std::abs(x - 1.0 / (m + 1)));
    }

  Outcome o;
  o.pass = total > 0 && coverage >= 0.99 && worst <= 0.002;
  o.detail = fmt("%llu/%llu estimates within 4 se (%.2f%%), %llu skipped with fewer than 30 samples; "
                 "occupancy max |error| %.2e",
                 static_cast<unsigned long long>(covered), static_cast<unsigned long long>(total), 100 * coverage,
                 static_cast<unsigned long long>(excluded), worst);
  o.notes = misses;
  return o;
}

Outcome ac8() {
  const std::vector<std::vector<std::string>> cases{
      {"simulate", "ruin", "--i", "20", "--N", "40", "--p", "0.45", "--trials", "100000", "--seed", "42"},
      {"simulate", "polygon", "--m", "10", "--p", "0.3", "--trials", "100000", "--seed", "42"},
      {"simulate", "occupancy", "--m", "5", "--p", "0.7", "--steps", "1000000", "--seed", "42"},
  };
  Outcome o{true, "", {}};
  for (const auto& args : cases) {
    std::string first;
    for (const char* w : {"1", "4", "8"}) {
      auto a = args;
      a.insert(a.end(), {"--workers", w});
      int code = 0;
      const auto out = run_cli(a, &code);
      if (code != 0 || out.empty()) o.pass = false;
      if (first.empty()) first = out;
      else if (out != first) {
        o.pass = false;
        o.notes.push_back(args[1] + ": --workers " + w + " differs from --workers 1");
      }
    }
  }
  o.detail = "simulate ruin, polygon and occupancy output compared byte for byte at 1, 4 and 8 workers";
  return o;
}

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

Csv parse_csv(const std::string& text) {
  Csv c;
  std::istringstream lines(text);
  std::string line;
  std::getline(lines, line);
  std::istringstream hs(line);
  for (std::string cell; std::getline(hs, cell, ',');) c.header.push_back(cell);
  while (std::getline(lines, line)) {
    std::vector<double> row;
    std::istringstream cs(line);
    for (std::string cell; std::getline(cs, cell, ',');) row.push_back(std::stod(cell));
    c.rows.push_back(row);
  }
  return c;
}

Outcome ac9() {
  Outcome o{true, "", {}};
  Csv fig[5];
  for (int id = 1; id <= 4; ++id) {
    int code = 0;
    fig[id] = parse_csv(run_cli({"figure", std::to_string(id)}, &code));
    if (code != 0 || fig[id].rows.size() != 99) {
      o.pass = false;
      o.notes.push_back(fmt("figure %d did not produce 99 rows", id));
      return o;
    }
  }
  std::uint64_t ordered = 0, ties = 0;
  auto fail = [&](const std::string& what) {
    o.pass = false;
    if (o.notes.size() < 20) o.notes.push_back(what);
  };
  auto descending = [&](int id, bool strict) {
    for (const auto& row : fig[id].rows) {
      if (row[0] == 0.5 && id != 4) continue;
      for (std::size_t k = 2; k < row.size(); ++k) {
        ++ordered;
        if (row[k - 1] == row[k]) ++ties;
        if (row[k - 1] < row[k] || (strict && row[k - 1] == row[k]))
          fail(fmt("figure %d p=%g: %s=%.17g, %s=%.17g", id, row[0], fig[id].header[k - 1].c_str(), row[k - 1],
                   fig[id].header[k].c_str(), row[k]));
      }
    }
  };
  // Figures 1 and 3 flatten towards 1 and tanh(y) at extreme p, where
  // neighbouring curves differ by less than one ulp; the CSV ordering is
  // checked as non-increasing and strictness is checked exactly below.
  descending(1, false);
  descending(3, false);
  descending(4, true);

  // Exact strict ordering of figures 1, 3 and 4 at every asymmetric grid point.
  for (int k = 1; k <= 99; ++k) {
    if (k == 50) continue;
    const RationalProb p(k, 100);
    const int targets[] = {25, 40, 50, 100};
    for (int j = 1; j < 4; ++j)
      if (!(closed::ruin_win_prob(20, targets[j - 1], p) > closed::ruin_win_prob(20, targets[j], p)))
        fail(fmt("exact figure 1 order fails at p=%d/100", k));
    const int sizes[] = {10, 20, 25, 40, 50};
    for (int j = 1; j < 5; ++j) {
      if (!(closed::cover_before_return_prob(sizes[j - 1], p) > closed::cover_before_return_prob(sizes[j], p)))
        fail(fmt("exact figure 3 order fails at p=%d/100", k));
      if (!(closed::expected_cover_time(sizes[5 - j], p) > closed::expected_cover_time(sizes[4 - j], p)))
        fail(fmt("exact figure 4 order fails at p=%d/100", k));
    }
  }

  // Figure 2: E between W and B everywhere, and the full chain at p = 1/2.
  for (const auto& row : fig[2].rows) {
    const double w50 = row[1], e50 = row[2], b50 = row[3], b25 = row[4], e25 = row[5], w25 = row[6];
    const auto between = [](double lo_hi_a, double e, double lo_hi_b) {
      const double slack = 1e-12 * std::abs(e);  // E is a convex mix of W and B, up to rounding
      return std::min(lo_hi_a, lo_hi_b) - slack <= e && e <= std::max(lo_hi_a, lo_hi_b) + slack;
    };
    if (!between(w50, e50, b50) || !between(w25, e25, b25))
      fail(fmt("figure 2 p=%g: E outside [W, B]", row[0]));
    if (row[0] == 0.5 && !(w50 >= e50 && e50 >= b50 && b25 >= e25 && e25 >= w25))
      fail("figure 2 p=0.5 ordering");
  }

  // Symmetric rows.
  auto row_at_half = [&](int id) {
    for (const auto& row : fig[id].rows)
      if (row[0] == 0.5) return std::vector<double>(row.begin() + 1, row.end());
    return std::vector<double>{};
  };
  const std::vector<double> want1{0.8, 0.5, 0.4, 0.2}, want3{0.1, 0.05, 0.04, 0.025, 0.02},
      want4{1275, 820, 325, 210, 55}, want2{700, 600, 1600.0 / 3, 200, 100, 75};
  if (row_at_half(1) != want1) fail("figure 1 row at p=0.5");
  if (row_at_half(2) != want2) fail("figure 2 row at p=0.5");
  if (row_at_half(3) != want3) fail("figure 3 row at p=0.5");
  if (row_at_half(4) != want4) fail("figure 4 row at p=0.5");

  o.detail = fmt("%llu adjacent-curve comparisons on the CSVs (%llu ties at double precision), exact strict "
                 "ordering at 98 grid points, p = 0.5 rows exact",
                 static_cast<unsigned long long>(ordered), static_cast<unsigned long long>(ties));
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"AC1 exact oracle equality", ac1},  {"AC2 appendix-path equality", ac2},
      {"AC3 floating-point fidelity", ac3}, {"AC4 symmetric spot values", ac4},
      {"AC5 identity suite", ac5},          {"AC6 continuity at p = 1/2", ac6},
      {"AC7 Monte Carlo coverage", ac7},    {"AC8 determinism across workers", ac8},
      {"AC9 figure regeneration", ac9},
  };
  bool all = true;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what(), {}};
    }
    all = all && o.pass;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    for (const auto& n : o.notes) std::printf("    %s\n", n.c_str());
    std::fflush(stdout);
  }
  std::printf("%s\n", all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
  return all ? 0 : 1;
}
