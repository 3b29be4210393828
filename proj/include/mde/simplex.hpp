#pragma once

#include <cstddef>
#include <vector>

namespace mde {

/// Dense primal simplex for
///
///     maximize c.x  subject to  A x <= b,  x >= 0,
///
/// with b >= 0 so that the origin is a feasible starting vertex. Bland's
/// rule is used for both entering and leaving choices, which rules out
/// cycling on the heavily degenerate Lipschitz-constraint systems this is
/// used for. Throws mde::Error if b has a negative entry or the problem is
/// unbounded.
struct SimplexResult {
  double value = 0.0;
  std::vector<double> x;
  std::size_t pivots = 0;
};

class DenseSimplex {
 public:
  DenseSimplex(std::size_t num_vars, std::vector<double> objective);

  void add_constraint(const std::vector<double>& row, double rhs);
  /// Sparse helper: coefficient list as (variable, value) pairs.
  void add_sparse_constraint(const std::vector<std::pair<std::size_t, double>>& terms, double rhs);

  std::size_t num_constraints() const { return rhs_.size(); }

  SimplexResult solve(double eps = 1e-12) const;

 private:
  std::size_t n_;
  std::vector<double> c_;
  std::vector<std::vector<double>> rows_;
  std::vector<double> rhs_;
};

}  // namespace mde
