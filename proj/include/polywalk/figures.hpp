// Data behind the four published plots, one column per curve in caption
// order.
#pragma once

#include <string>
#include <vector>

#include "polywalk/exact_forms.hpp"

namespace polywalk::figures {

struct Table {
  std::vector<std::string> header;        // "p" then one name per curve
  std::vector<std::vector<double>> rows;  // one per grid point
};

/// 0.01, 0.02, ..., 0.99.
inline std::vector<double> default_grid() {
  std::vector<double> g;
  for (int k = 1; k <= 99; ++k) g.push_back(k / 100.0);
  return g;
}

inline void validate_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw DomainError("p grid is empty");
  for (std::size_t k = 0; k < grid.size(); ++k) {
    require_probability(grid[k]);
    if (k && !(grid[k] > grid[k - 1])) throw DomainError("p grid must be strictly increasing");
  }
}

inline Table table(int id, const std::vector<double>& grid) {
  validate_grid(grid);
  Table t{{"p"}, {}};
  auto fill = [&](auto&& columns) {
    for (const double p : grid) {
      std::vector<double> row{p};
      columns(p, row);
      t.rows.push_back(std::move(row));
    }
  };
  switch (id) {
    case 1: {
      // reaching N before 0 from 20
      const int targets[] = {25, 40, 50, 100};
      for (int n : targets) t.header.push_back("P_20_" + std::to_string(n));
      fill([&](double p, std::vector<double>& row) {
        for (int n : targets) row.push_back(ruin_win_prob({20, n, p}));
      });
      break;
    }
    case 2:
      // expected games from 20: given a win, overall, given ruin
      t.header.insert(t.header.end(), {"W_20_50", "E_20_50", "B_20_50", "B_20_25", "E_20_25", "W_20_25"});
      fill([&](double p, std::vector<double>& row) {
        const RuinSpec far{20, 50, p}, near{20, 25, p};
        row.insert(row.end(), {conditional_duration_given_win(far), ruin_expected_duration(far),
                               conditional_duration_given_broke(far), conditional_duration_given_broke(near),
                               ruin_expected_duration(near), conditional_duration_given_win(near)});
      });
      break;
    case 3: {
      const int sizes[] = {10, 20, 25, 40, 50};
      for (int m : sizes) t.header.push_back("PA_m" + std::to_string(m));
      fill([&](double p, std::vector<double>& row) {
        for (int m : sizes) row.push_back(cover_before_return_prob({m, p}));
      });
      break;
    }
    case 4: {
      const int sizes[] = {50, 40, 25, 20, 10};
      for (int m : sizes) t.header.push_back("EV_m" + std::to_string(m));
      fill([&](double p, std::vector<double>& row) {
        for (int m : sizes) row.push_back(expected_cover_time({m, p}));
      });
      break;
    }
    default:
      throw DomainError("figure id must be 1, 2, 3 or 4");
  }
  return t;
}

}  // namespace polywalk::figures
