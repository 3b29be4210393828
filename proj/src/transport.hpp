#pragma once

#include <cstddef>
#include <vector>

namespace mde::detail {

/// Bipartite transport between `supply` (rows) and `demand` (columns).
///
/// Balanced mode ships min(total supply, total demand) at minimum cost.
/// Partial mode ships only along arcs that lower the objective, i.e. it
/// minimizes sum(flow * cost) over flows bounded by supply and demand; arcs
/// are then expected to carry negative cost (transport cost minus the cost
/// of discarding both ends).
struct TransportProblem {
  std::vector<double> supply;
  std::vector<double> demand;
  std::vector<double> cost;        // row-major, supply.size() x demand.size()
  std::vector<char> allowed;       // same shape; 0 removes the arc
  bool partial = false;
};

struct TransportSolution {
  std::vector<double> flow;         // row-major
  std::vector<double> supply_left;
  std::vector<double> demand_left;
  std::size_t augmentations = 0;
};

/// Successive shortest augmenting paths with node potentials (dense Dijkstra).
TransportSolution solve_transport(const TransportProblem& problem);

}  // namespace mde::detail
