#include "transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mde/errors.hpp"

namespace mde::detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

TransportSolution solve_transport(const TransportProblem& p) {
  const std::size_t n = p.supply.size();
  const std::size_t m = p.demand.size();
  if (p.cost.size() != n * m || p.allowed.size() != n * m)
    throw Error("transport problem has inconsistent cost matrix shape");

  TransportSolution sol;
  sol.flow.assign(n * m, 0.0);
  sol.supply_left = p.supply;
  sol.demand_left = p.demand;
  if (n == 0 || m == 0) return sol;

  const double scale = std::max(std::accumulate(p.supply.begin(), p.supply.end(), 0.0),
                                std::accumulate(p.demand.begin(), p.demand.end(), 0.0));
  const double cap_eps = 1e-15 * std::max(scale, 1e-300);
  const double cost_eps = 1e-13;

  // Nodes: 0 = source, 1..n rows, n+1..n+m columns, n+m+1 = sink.
  const std::size_t source = 0;
  const std::size_t sink = n + m + 1;
  const std::size_t nodes = n + m + 2;
  auto row = [](std::size_t i) { return 1 + i; };
  auto col = [n](std::size_t j) { return 1 + n + j; };

  // Initial potentials are exact shortest distances in the flow-free graph.
  std::vector<double> pot(nodes, 0.0);
  double sink_pot = kInf;
  for (std::size_t j = 0; j < m; ++j) {
    double best = kInf;
    for (std::size_t i = 0; i < n; ++i)
      if (p.allowed[i * m + j]) best = std::min(best, p.cost[i * m + j]);
    pot[col(j)] = std::isfinite(best) ? best : 0.0;
    if (std::isfinite(best)) sink_pot = std::min(sink_pot, best);
  }
  pot[sink] = std::isfinite(sink_pot) ? sink_pot : 0.0;

  std::vector<double> dist(nodes);
  std::vector<std::size_t> parent(nodes);
  std::vector<char> done(nodes);

  for (;;) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(done.begin(), done.end(), 0);
    dist[source] = 0.0;
    parent[source] = source;

    for (;;) {
      std::size_t u = nodes;
      for (std::size_t v = 0; v < nodes; ++v)
        if (!done[v] && std::isfinite(dist[v]) && (u == nodes || dist[v] < dist[u])) u = v;
      if (u == nodes) break;
      done[u] = 1;
      if (u == sink) break;

      auto relax = [&](std::size_t v, double reduced) {
        const double nd = dist[u] + reduced;
        if (!done[v] && nd < dist[v]) {
          dist[v] = nd;
          parent[v] = u;
        }
      };

      if (u == source) {
        for (std::size_t i = 0; i < n; ++i)
          if (sol.supply_left[i] > cap_eps) relax(row(i), pot[source] - pot[row(i)]);
      } else if (u <= n) {
        const std::size_t i = u - 1;
        for (std::size_t j = 0; j < m; ++j)
          if (p.allowed[i * m + j]) relax(col(j), p.cost[i * m + j] + pot[u] - pot[col(j)]);
      } else {
        const std::size_t j = u - 1 - n;
        for (std::size_t i = 0; i < n; ++i)
          if (sol.flow[i * m + j] > cap_eps) relax(row(i), -p.cost[i * m + j] + pot[u] - pot[row(i)]);
        if (sol.demand_left[j] > cap_eps) relax(sink, pot[u] - pot[sink]);
      }
    }

    if (!std::isfinite(dist[sink])) break;
    const double path_cost = dist[sink] + pot[sink] - pot[source];
    if (p.partial && path_cost >= -cost_eps) break;

    for (std::size_t v = 0; v < nodes; ++v) pot[v] += std::min(dist[v], dist[sink]);

    double push = kInf;
    for (std::size_t v = sink; v != source; v = parent[v]) {
      const std::size_t u = parent[v];
      if (u == source) {
        push = std::min(push, sol.supply_left[v - 1]);
      } else if (v == sink) {
        push = std::min(push, sol.demand_left[u - 1 - n]);
      } else if (u > n && v <= n) {
        push = std::min(push, sol.flow[(v - 1) * m + (u - 1 - n)]);
      }
    }
    for (std::size_t v = sink; v != source; v = parent[v]) {
      const std::size_t u = parent[v];
      if (u == source) {
        sol.supply_left[v - 1] -= push;
      } else if (v == sink) {
        sol.demand_left[u - 1 - n] -= push;
      } else if (u <= n) {
        sol.flow[(u - 1) * m + (v - 1 - n)] += push;
      } else {
        sol.flow[(v - 1) * m + (u - 1 - n)] -= push;
      }
    }
    ++sol.augmentations;
  }

  for (auto& s : sol.supply_left) s = std::max(s, 0.0);
  for (auto& d : sol.demand_left) d = std::max(d, 0.0);
  for (auto& f : sol.flow) f = std::max(f, 0.0);
  return sol;
}

}  // namespace mde::detail
