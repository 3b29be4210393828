#include "mde/simplex.hpp"

#include <cmath>
#include <limits>

#include "mde/errors.hpp"

namespace mde {

DenseSimplex::DenseSimplex(std::size_t num_vars, std::vector<double> objective)
    : n_(num_vars), c_(std::move(objective)) {
  if (c_.size() != n_) throw Error("objective length does not match variable count");
}

void DenseSimplex::add_constraint(const std::vector<double>& row, double rhs) {
  if (row.size() != n_) throw Error("constraint length does not match variable count");
  if (!(rhs >= 0.0)) throw Error("DenseSimplex requires a nonnegative right-hand side");
  rows_.push_back(row);
  rhs_.push_back(rhs);
}

void DenseSimplex::add_sparse_constraint(const std::vector<std::pair<std::size_t, double>>& terms,
                                         double rhs) {
  std::vector<double> row(n_, 0.0);
  for (const auto& [k, a] : terms) row.at(k) += a;
  add_constraint(row, rhs);
}

SimplexResult DenseSimplex::solve(double eps) const {
  const std::size_t m = rows_.size();
  const std::size_t n = n_;
  // Tableau rows: basic = t[i][n] + sum_j t[i][j] * nonbasic_j, i.e. the
  // entries hold -A; objective row holds c.
  std::vector<std::vector<double>> t(m + 1, std::vector<double>(n + 1, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t[i][j] = -rows_[i][j];
    t[i][n] = rhs_[i];
  }
  for (std::size_t j = 0; j < n; ++j) t[m][j] = c_[j];

  // Variable labels: 0..n-1 structural, n..n+m-1 slack.
  std::vector<std::size_t> nonbasic(n), basic(m);
  for (std::size_t j = 0; j < n; ++j) nonbasic[j] = j;
  for (std::size_t i = 0; i < m; ++i) basic[i] = n + i;

  SimplexResult result;
  for (;;) {
    std::size_t enter = n;
    for (std::size_t j = 0; j < n; ++j)
      if (t[m][j] > eps && (enter == n || nonbasic[j] < nonbasic[enter])) enter = j;
    if (enter == n) break;

    std::size_t leave = m;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] < -eps) {
        const double ratio = t[i][n] / -t[i][enter];
        if (leave == m || ratio < best - eps) {
          leave = i;
          best = ratio;
        } else if (ratio <= best + eps && basic[i] < basic[leave]) {
          leave = i;
          best = std::min(best, ratio);
        }
      }
    }
    if (leave == m) throw Error("linear program is unbounded");

    // Pivot: solve row `leave` for the entering variable.
    const double piv = t[leave][enter];
    auto& lr = t[leave];
    for (std::size_t j = 0; j <= n; ++j) lr[j] /= -piv;
    lr[enter] = 1.0 / piv;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const double f = t[i][enter];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= n; ++j) {
        if (j == enter) continue;
        t[i][j] += f * lr[j];
      }
      t[i][enter] = f * lr[enter];
    }
    for (std::size_t i = 0; i < m; ++i)
      if (t[i][n] < 0.0 && t[i][n] > -1e-11) t[i][n] = 0.0;
    std::swap(basic[leave], nonbasic[enter]);
    ++result.pivots;
  }

  result.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (basic[i] < n) result.x[basic[i]] = t[i][n];
  result.value = t[m][n];
  return result;
}

}  // namespace mde
