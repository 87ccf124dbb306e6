// Randomized identity checks on the floating-point closed forms. Instances
// come from a fixed-seed generator so failures reproduce; each failure
// prints the instance.
#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "polywalk/exact_forms.hpp"

using namespace polywalk;

namespace {

constexpr int kCases = 4000;

struct Gen {
  std::mt19937_64 eng{0x70fa11};

  double prob() {
    // Mix the bulk of (0,1) with values hugging 1/2 and the extremes.
    switch (std::uniform_int_distribution<int>(0, 3)(eng)) {
      case 0: return 0.5 + std::uniform_real_distribution<double>(-1e-3, 1e-3)(eng);
      case 1: return std::uniform_real_distribution<double>(1e-4, 0.05)(eng);
      default: return std::uniform_real_distribution<double>(0.01, 0.99)(eng);
    }
  }
  int between(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng); }
};

bool close(double a, double b, double tol) { return a == b || std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST(Property, WinProbSwap) {
  Gen g;
  for (int c = 0; c < kCases; ++c) {
    const int n = g.between(1, 64), i = g.between(0, n);
    const double p = g.prob();
    const double lhs = ruin_win_prob({i, n, p});
    const double rhs = 1.0 - ruin_win_prob({n - i, n, 1.0 - p});
    ASSERT_LE(std::abs(lhs - rhs), 1e-12) << i << " " << n << " " << p;
  }
}

TEST(Property, DurationSwapAndWinDurationInvariance) {
  Gen g;
  for (int c = 0; c < kCases; ++c) {
    const int n = g.between(2, 64), i = g.between(1, n - 1);
    const double p = g.prob();
    ASSERT_TRUE(close(ruin_expected_duration({i, n, p}), ruin_expected_duration({n - i, n, 1.0 - p}), 1e-9))
        << i << " " << n << " " << p;
    ASSERT_TRUE(close(conditional_duration_given_win({i, n, p}), conditional_duration_given_win({i, n, 1.0 - p}),
                      1e-9))
        << i << " " << n << " " << p;
  }
}

TEST(Property, DurationDecomposesByOutcome) {
  Gen g;
  for (int c = 0; c < kCases; ++c) {
    const int n = g.between(2, 64), i = g.between(1, n - 1);
    const double p = g.prob();
    const RuinSpec s{i, n, p};
    const double w = ruin_win_prob(s);
    const double mix = w * conditional_duration_given_win(s) + (1.0 - w) * conditional_duration_given_broke(s);
    ASSERT_TRUE(close(ruin_expected_duration(s), mix, 1e-9)) << i << " " << n << " " << p;
  }
}

TEST(Property, DurationsBoundedByOutcomeBranches) {
  Gen g;
  for (int c = 0; c < kCases; ++c) {
    const int n = g.between(2, 64), i = g.between(1, n - 1);
    const RuinSpec s{i, n, g.prob()};
    const double e = ruin_expected_duration(s), w = conditional_duration_given_win(s),
                 b = conditional_duration_given_broke(s);
    ASSERT_GE(e, std::min(w, b) * (1 - 1e-9));
    ASSERT_LE(e, std::max(w, b) * (1 + 1e-9));
    ASSERT_GE(e, 1.0 - 1e-12);
  }
}

TEST(Property, PolygonSwapSymmetries) {
  Gen g;
  for (int c = 0; c < kCases / 4; ++c) {
    const int m = g.between(1, 64);
    const double p = g.prob();
    const PolygonSpec s{m, p}, t{m, 1.0 - p};
    ASSERT_TRUE(close(cover_before_return_prob(s), cover_before_return_prob(t), 1e-9));
    ASSERT_TRUE(close(expected_cover_time(s), expected_cover_time(t), 1e-9));
    const auto a = last_vertex_pmf(s), b = last_vertex_pmf(t);
    for (int i = 1; i <= m; ++i) {
      ASSERT_TRUE(close(a[i - 1], b[m - i], 1e-9)) << m << " " << p << " " << i;
      ASSERT_TRUE(close(conditional_cover_time(s, i), conditional_cover_time(t, m + 1 - i), 1e-9))
          << m << " " << p << " " << i;
    }
  }
}

TEST(Property, PolygonWeightedSums) {
  Gen g;
  for (int c = 0; c < kCases / 4; ++c) {
    const int m = g.between(1, 64);
    const PolygonSpec s{m, g.prob()};
    const auto pmf = last_vertex_pmf(s);
    double cover = 0.0, ret = 0.0;
    for (int i = 1; i <= m; ++i) {
      cover += pmf[i - 1] * conditional_cover_time(s, i);
      ret += pmf[i - 1] * ruin_expected_duration({i, m + 1, s.p});
    }
    ASSERT_TRUE(close(expected_cover_time(s), cover, 1e-9)) << m << " " << s.p;
    ASSERT_TRUE(close(expected_return_after_cover(s), ret, 1e-9)) << m << " " << s.p;
    ASSERT_NEAR(std::accumulate(pmf.begin(), pmf.end(), 0.0), 1.0, 1e-12);
  }
}

TEST(Property, CoverBeforeReturnAtLeastUniformGuess) {
  Gen g;
  for (int c = 0; c < kCases; ++c) {
    const int m = g.between(1, 64);
    const double p = g.prob();
    const double a = cover_before_return_prob({m, p});
    ASSERT_GE(a, (1.0 / m) * (1 - 1e-12));
    ASSERT_LE(a, 1.0 + 1e-15);
    if (m >= 2 && !is_symmetric(p) && std::abs(p - 0.5) > 1e-4) {
      ASSERT_GT(a, 1.0 / m);
    }
  }
}

TEST(Property, CoverTimeBounds) {
  Gen g;
  for (int c = 0; c < kCases / 4; ++c) {
    const int m = g.between(1, 64);
    const PolygonSpec s{m, g.prob()};
    // at least m steps, at most the fair-game value
    ASSERT_GE(expected_cover_time(s), m * (1 - 1e-12));
    ASSERT_LE(expected_cover_time(s), m * (m + 1) / 2.0 * (1 + 1e-12));
    ASSERT_GE(expected_return_after_cover(s), 1.0 - 1e-12);
  }
}
