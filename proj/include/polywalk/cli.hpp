// The `polywalk` command line: compute, verify, simulate and figure.
//
// Exit codes: 0 success, 1 a verification check failed, 2 usage error.
#pragma once

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <optional>
#include <type_traits>
#include <ostream>
#include <string>
#include <vector>

#include "polywalk/exact_forms.hpp"
#include "polywalk/figures.hpp"
#include "polywalk/io.hpp"
#include "polywalk/mc_sim.hpp"
#include "polywalk/rational_oracle.hpp"
#include "polywalk/verify.hpp"

namespace polywalk::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// A probability from the command line. "a/b" keeps the exact value so the
/// oracle can be attached; anything else is read as a double.
struct ProbArg {
  double value = 0.5;
  std::optional<RationalProb> exact;
};

inline ProbArg parse_prob(const std::string& text) {
  if (text.find('/') != std::string::npos) {
    auto r = RationalProb::parse(text);
    return {r.to_double(), r};
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw DomainError("malformed probability '" + text + "'");
  }
  if (used != text.size()) throw DomainError("malformed probability '" + text + "'");
  require_probability(v);
  return {v, std::nullopt};
}

namespace detail {

using io::Record;

struct Params {
  std::optional<int> i, n, m;
  std::string p;
};

inline const std::vector<std::string>& quantities() {
  static const std::vector<std::string> q{"ruin-prob",      "ruin-duration",   "win-duration",   "broke-duration",
                                          "posterior-first-win", "cover-prob", "last-vertex-pmf", "cond-cover-time",
                                          "cover-time",     "return-time",     "stationary",     "recurrence-time"};
  return q;
}

inline bool is_ruin_quantity(const std::string& q) {
  return q == "ruin-prob" || q == "ruin-duration" || q == "win-duration" || q == "broke-duration" ||
         q == "posterior-first-win";
}

inline Record prob_params(Record r, const ProbArg& p) {
  r.add("p", p.value);
  if (p.exact) r.add("p_exact", p.exact->str());
  return r;
}

inline Record ruin_params(const RuinSpec& s, const ProbArg& p) {
  return prob_params(Record().add("i", s.start).add("N", s.target), p);
}

inline Record polygon_params(int m, const ProbArg& p, std::optional<int> vertex = std::nullopt,
                             const char* vertex_key = "i") {
  Record r;
  r.add("m", m);
  if (vertex) r.add(vertex_key, *vertex);
  return prob_params(std::move(r), p);
}

inline Record result(const std::string& quantity, const Record& params, double closed_form,
                     const std::optional<Rational>& oracle) {
  Record r;
  r.add("quantity", quantity).add("params", params).add("closed_form", closed_form);
  if (oracle) r.add("oracle", to_string(*oracle));
  return r;
}

/// f(exact p) when p was given as a fraction.
template <class F>
auto maybe(const ProbArg& p, F&& f) -> std::optional<std::invoke_result_t<F, const RationalProb&>> {
  if (!p.exact) return std::nullopt;
  return f(*p.exact);
}

inline void require(bool present, const std::string& flag, const std::string& quantity) {
  if (!present) throw DomainError(quantity + " needs " + flag);
}

inline void reject(bool present, const std::string& flag, const std::string& quantity) {
  if (present) throw DomainError(flag + " does not apply to " + quantity);
}

inline void compute(const std::string& q, const Params& a, std::ostream& out) {
  const ProbArg p = parse_prob(a.p);
  if (is_ruin_quantity(q)) {
    require(a.i.has_value(), "--i", q);
    require(a.n.has_value(), "--N", q);
    reject(a.m.has_value(), "--m", q);
    const RuinSpec s{*a.i, *a.n, p.value};
    validate(s);
    const int i = s.start, n = s.target;
    const Record params = ruin_params(s, p);
    if (q == "ruin-prob") {
      io::emit(out, result(q, params, ruin_win_prob(s),
                           maybe(p, [&](auto& e) { return oracle::solve_ruin_prob(i, n, e); })));
    } else if (q == "ruin-duration") {
      io::emit(out, result(q, params, ruin_expected_duration(s),
                           maybe(p, [&](auto& e) { return oracle::solve_expected_duration(i, n, e); })));
    } else if (q == "win-duration") {
      const double v = conditional_duration_given_win(s);
      io::emit(out, result(q, params, v,
                           maybe(p, [&](auto& e) { return oracle::solve_conditional_win_duration(i, n, e); })));
    } else if (q == "broke-duration") {
      const double v = conditional_duration_given_broke(s);
      io::emit(out, result(q, params, v,
                           maybe(p, [&](auto& e) { return oracle::solve_conditional_broke_duration(i, n, e); })));
    } else {
      const double v = posterior_first_win_given_win(s);
      io::emit(out, result(q, params, v, maybe(p, [&](auto& e) { return oracle::posterior_first_win(i, n, e); })));
    }
    return;
  }

  require(a.m.has_value(), "--m", q);
  reject(a.n.has_value(), "--N", q);
  if (q != "cond-cover-time") reject(a.i.has_value(), "--i", q);
  const PolygonSpec s{*a.m, p.value};
  validate(s);
  const int m = s.m;
  if (q == "cover-prob") {
    io::emit(out, result(q, polygon_params(m, p), cover_before_return_prob(s),
                         maybe(p, [&](auto& e) { return oracle::cover_before_return_prob(m, e); })));
  } else if (q == "cover-time") {
    io::emit(out, result(q, polygon_params(m, p), expected_cover_time(s),
                         maybe(p, [&](auto& e) { return oracle::expected_cover_time(m, e); })));
  } else if (q == "return-time") {
    io::emit(out, result(q, polygon_params(m, p), expected_return_after_cover(s),
                         maybe(p, [&](auto& e) { return oracle::expected_return_after_cover(m, e); })));
  } else if (q == "recurrence-time") {
    io::emit(out, result(q, polygon_params(m, p), mean_recurrence_time(s),
                         maybe(p, [&](auto&) { return Rational(m + 1); })));
  } else if (q == "stationary") {
    const auto pi = stationary_distribution(s);
    for (int k = 0; k <= m; ++k)
      io::emit(out, result(q, polygon_params(m, p, k, "vertex"), pi[k],
                           maybe(p, [&](auto&) { return frac(1, m + 1); })));
  } else if (q == "last-vertex-pmf") {
    const auto pmf = last_vertex_pmf(s);
    const auto exact = maybe(p, [&](auto& e) { return oracle::solve_last_vertex_pmf(m, e); });
    for (int i = 1; i <= m; ++i)
      io::emit(out, result(q, polygon_params(m, p, i), pmf[i - 1],
                           exact ? std::optional<Rational>((*exact)[i - 1]) : std::nullopt));
  } else {
    // cond-cover-time: one vertex with --i, otherwise all of them
    const auto exact = maybe(p, [&](auto& e) { return oracle::solve_conditional_cover_time(m, e); });
    int lo = 1, hi = m;
    if (a.i) {
      if (*a.i < 1 || *a.i > m) throw DomainError("--i must lie in 1..m");
      lo = hi = *a.i;
    }
    for (int i = lo; i <= hi; ++i)
      io::emit(out, result(q, polygon_params(m, p, i), conditional_cover_time(s, i),
                           exact ? std::optional<Rational>((*exact)[i - 1]) : std::nullopt));
  }
}

inline int verify(int max_n, const std::vector<std::string>& p_text, std::ostream& out) {
  if (max_n < 3) throw DomainError("max_n too small");
  std::vector<RationalProb> ps;
  if (p_text.empty()) ps = polywalk::verify::default_probabilities();
  for (const auto& t : p_text) ps.push_back(RationalProb::parse(t));
  const auto report = polywalk::verify::run_all(max_n, ps);
  std::string p_list;
  for (const auto& p : ps) {
    if (!p_list.empty()) p_list += ',';
    p_list += p.str();
  }
  for (const auto& c : report) {
    io::emit(out, Record()
                      .add("check", c.name)
                      .add("status", c.passed() ? "pass" : "fail")
                      .add("instances", c.instances)
                      .add("failures", static_cast<std::uint64_t>(c.failures.size()))
                      .add("max_deviation", c.max_deviation));
  }
  for (const auto& c : report)
    for (const auto& f : c.failures)
      io::emit(out, Record().add("check", c.name).add("instance", f.instance).add("deviation", f.deviation));
  const bool ok = polywalk::verify::all_passed(report);
  io::emit(out, Record().add("verify", ok ? "pass" : "fail").add("max_n", max_n).add("p", p_list));
  return ok ? kExitOk : kExitCheckFailed;
}

struct SimArgs {
  std::string kind;
  Params params;
  sim::SimConfig cfg;
  std::uint64_t steps = 10'000'000;
};

inline bool is_proportion(const std::string& q) {
  return q == "ruin-prob" || q == "posterior-first-win" || q == "cover-prob" || q == "last-vertex-pmf";
}

inline Record mc_record(const std::string& q, const Record& params, double exact, const sim::Estimate& e,
                        std::uint64_t& flagged) {
  Record r;
  r.add("quantity", q).add("params", params).add("closed_form", exact);
  r.add("mc_mean", e.mean).add("mc_stderr", e.std_error).add("mc_n", e.n);
  if (e.defined()) {
    const bool ok = is_proportion(q) ? e.proportion_within(exact) : e.within(exact);
    if (!ok) ++flagged;
    r.add("within_4se", ok);
  } else {
    r.add_null("within_4se");
  }
  return r;
}

inline int simulate(const SimArgs& a, std::ostream& out, std::ostream& err) {
  const ProbArg p = parse_prob(a.params.p);
  std::uint64_t flagged = 0, truncated = 0;
  Record summary;
  summary.add("summary", "simulate " + a.kind).add("seed", a.cfg.seed);
  if (a.kind == "ruin") {
    require(a.params.i && a.params.n, "--i and --N", "simulate ruin");
    reject(a.params.m.has_value(), "--m", "simulate ruin");
    const RuinSpec s{*a.params.i, *a.params.n, p.value};
    const auto r = sim::simulate_ruin(s, a.cfg);
    const Record params = ruin_params(s, p);
    io::emit(out, mc_record("ruin-prob", params, ruin_win_prob(s), r.win_prob, flagged));
    io::emit(out, mc_record("ruin-duration", params, ruin_expected_duration(s), r.duration, flagged));
    if (s.start >= 1)
      io::emit(out, mc_record("win-duration", params, conditional_duration_given_win(s), r.duration_given_win, flagged));
    if (s.start <= s.target - 1)
      io::emit(out, mc_record("broke-duration", params, conditional_duration_given_broke(s), r.duration_given_broke,
                              flagged));
    if (s.start >= 1 && s.start <= s.target - 1)
      io::emit(out, mc_record("posterior-first-win", params, posterior_first_win_given_win(s), r.first_win_given_win,
                              flagged));
    truncated = r.truncated;
    summary.add("trials", a.cfg.trials).add("max_steps", a.cfg.max_steps);
  } else if (a.kind == "polygon") {
    require(a.params.m.has_value(), "--m", "simulate polygon");
    reject(a.params.i || a.params.n, "--i/--N", "simulate polygon");
    const PolygonSpec s{*a.params.m, p.value};
    const auto r = sim::simulate_polygon(s, a.cfg);
    const Record params = polygon_params(s.m, p);
    io::emit(out, mc_record("cover-prob", params, cover_before_return_prob(s), r.cover_before_return, flagged));
    const auto pmf = last_vertex_pmf(s);
    for (int i = 1; i <= s.m; ++i)
      io::emit(out, mc_record("last-vertex-pmf", polygon_params(s.m, p, i), pmf[i - 1], r.last_vertex_hist[i - 1],
                              flagged));
    for (int i = 1; i <= s.m; ++i)
      io::emit(out, mc_record("cond-cover-time", polygon_params(s.m, p, i), conditional_cover_time(s, i),
                              r.cover_time_by_last[i - 1], flagged));
    io::emit(out, mc_record("cover-time", params, expected_cover_time(s), r.cover_time, flagged));
    io::emit(out, mc_record("return-time", params, expected_return_after_cover(s), r.return_time, flagged));
    truncated = r.truncated;
    summary.add("trials", a.cfg.trials).add("max_steps", a.cfg.max_steps);
  } else {
    require(a.params.m.has_value(), "--m", "simulate occupancy");
    reject(a.params.i || a.params.n, "--i/--N", "simulate occupancy");
    const PolygonSpec s{*a.params.m, p.value};
    const auto share = sim::simulate_occupancy(s, a.steps, a.cfg);
    const auto pi = stationary_distribution(s);
    double worst = 0.0;
    for (int k = 0; k <= s.m; ++k) {
      Record r;
      r.add("quantity", "stationary").add("params", polygon_params(s.m, p, k, "vertex"));
      r.add("closed_form", pi[k]).add("mc_mean", share[k]).add("mc_abs_error", std::abs(share[k] - pi[k]));
      io::emit(out, r);
      worst = std::max(worst, std::abs(share[k] - pi[k]));
    }
    summary.add("steps", a.steps).add("max_abs_error", worst);
  }
  summary.add("truncated", truncated);
  if (a.kind != "occupancy") summary.add("beyond_4se", flagged);
  io::emit(out, summary);
  if (truncated)
    err << "warning: " << truncated << " trajectories reached --max-steps and were left out of the estimates\n";
  return kExitOk;
}

inline int figure(int id, const std::vector<double>& grid_arg, const std::string& path, std::ostream& out) {
  const auto grid = grid_arg.empty() ? figures::default_grid() : grid_arg;
  const auto t = figures::table(id, grid);
  if (path == "-") {
    io::write_csv(out, t.header, t.rows);
    return kExitOk;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw DomainError("cannot open '" + path + "' for writing");
  io::write_csv(file, t.header, t.rows);
  file.close();
  if (!file) throw DomainError("failed writing '" + path + "'");
  return kExitOk;
}

}  // namespace detail

/// Runs one invocation. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gambler's ruin and polygon cover-time calculator", "polywalk"};
  app.require_subcommand(1);

  auto* compute = app.add_subcommand("compute", "Evaluate one quantity from its closed form");
  std::string quantity;
  detail::Params cp;
  compute->add_option("quantity", quantity, "Quantity name")->required()->check(CLI::IsMember(detail::quantities()));
  compute->add_option("--i", cp.i, "Starting fortune, or vertex for cond-cover-time");
  compute->add_option("--N", cp.n, "Target fortune");
  compute->add_option("--m", cp.m, "Polygon has m+1 vertices");
  compute->add_option("--p", cp.p, "Win / clockwise probability; a/b also reports the exact value")->required();

  auto* verify = app.add_subcommand("verify", "Cross-check closed forms, exact solves and identities");
  int max_n = 0;
  std::vector<std::string> verify_ps;
  verify->add_option("--max-n", max_n, "Largest N and m checked")->required();
  verify->add_option("--p", verify_ps, "Exact probabilities a/b (default 1/5 1/3 2/5 1/2 3/5 2/3 4/5)");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimates next to the closed forms");
  detail::SimArgs sa;
  simulate->add_option("kind", sa.kind, "ruin, polygon or occupancy")
      ->required()
      ->check(CLI::IsMember({"ruin", "polygon", "occupancy"}));
  simulate->add_option("--i", sa.params.i, "Starting fortune");
  simulate->add_option("--N", sa.params.n, "Target fortune");
  simulate->add_option("--m", sa.params.m, "Polygon has m+1 vertices");
  simulate->add_option("--p", sa.params.p, "Win / clockwise probability")->required();
  simulate->add_option("--trials", sa.cfg.trials, "Independent trials")->capture_default_str();
  simulate->add_option("--seed", sa.cfg.seed, "Seed")->envname("WALK_SEED")->capture_default_str();
  simulate->add_option("--workers", sa.cfg.workers, "Worker threads; results do not depend on it")
      ->capture_default_str();
  simulate->add_option("--max-steps", sa.cfg.max_steps, "Step cap per trial")->capture_default_str();
  simulate->add_option("--steps", sa.steps, "Walk length for occupancy")->capture_default_str();

  auto* figure = app.add_subcommand("figure", "Write the CSV behind figure 1, 2, 3 or 4");
  int figure_id = 0;
  std::vector<double> grid;
  std::string out_path = "-";
  figure->add_option("id", figure_id, "Figure number")->required();
  figure->add_option("--out", out_path, "Output CSV path, - for stdout")->capture_default_str();
  figure->add_option("--p-grid", grid, "Probabilities, strictly increasing in (0,1)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    // prints help to `out` and diagnostics to `err`
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (compute->parsed()) {
      detail::compute(quantity, cp, out);
      return kExitOk;
    }
    if (verify->parsed()) return detail::verify(max_n, verify_ps, out);
    if (simulate->parsed()) return detail::simulate(sa, out, err);
    return detail::figure(figure_id, grid, out_path, out);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const RationalGrowthError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace polywalk::cli
