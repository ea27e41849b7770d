#include "optresp/coarsening.hpp"

#include <algorithm>
#include <numeric>

namespace optresp {

std::vector<NodeId> FCSplit::seeds() const {
  std::vector<NodeId> out;
  for (NodeId i = 0; i < is_seed.size(); ++i) {
    if (is_seed[i]) out.push_back(i);
  }
  return out;
}

std::vector<NodeId> FCSplit::fine() const {
  std::vector<NodeId> out;
  for (NodeId i = 0; i < is_seed.size(); ++i) {
    if (!is_seed[i]) out.push_back(i);
  }
  return out;
}

std::size_t FCSplit::num_seeds() const {
  return static_cast<std::size_t>(std::count(is_seed.begin(), is_seed.end(), std::uint8_t{1}));
}

FCSplit fc_split(const WeightedGraph& g, const EdgeDistances& dist, std::span<const double> phi,
                 double theta, TraversalOrder order) {
  const std::size_t n = g.num_nodes();
  if (phi.size() != n) throw ValidationError("phi has wrong length");
  if (dist.rho.size() != g.num_edges()) throw ValidationError("distances do not cover every edge");

  std::vector<NodeId> visit(n);
  std::iota(visit.begin(), visit.end(), NodeId{0});
  std::stable_sort(visit.begin(), visit.end(), [&](NodeId a, NodeId b) {
    return order == TraversalOrder::descending_phi ? phi[a] > phi[b] : phi[a] < phi[b];
  });

  FCSplit split;
  split.is_seed.assign(n, 0);
  for (NodeId i : visit) {
    double to_seeds = 0.0;
    double total = 0.0;
    for (const Neighbor& nb : g.neighbors(i)) {
      const double c = dist.coupling(nb.edge);
      total += c;
      if (split.is_seed[nb.node]) to_seeds += c;
    }
    if (total <= 0.0 || to_seeds / total < theta) split.is_seed[i] = 1;
  }
  return split;
}

Aggregation aggregate(const WeightedGraph& g, FCSplit split, const EdgeDistances& dist) {
  const std::size_t n = g.num_nodes();
  if (split.size() != n) throw ValidationError("split does not match graph");

  Aggregation agg;
  agg.aggregate_of.assign(n, kInvalidNode);
  auto assign_seeds = [&] {
    agg.seed_of.clear();
    std::fill(agg.aggregate_of.begin(), agg.aggregate_of.end(), kInvalidNode);
    for (NodeId i = 0; i < n; ++i) {
      if (split.is_seed[i]) {
        agg.aggregate_of[i] = static_cast<NodeId>(agg.seed_of.size());
        agg.seed_of.push_back(i);
      }
    }
  };

  for (;;) {
    assign_seeds();
    for (NodeId i = 0; i < n; ++i) {
      if (split.is_seed[i]) continue;
      double best = -1.0;
      NodeId best_seed = kInvalidNode;
      for (const Neighbor& nb : g.neighbors(i)) {
        if (!split.is_seed[nb.node]) continue;
        const double c = dist.coupling(nb.edge);
        if (c > best || (c == best && nb.node < best_seed)) {
          best = c;
          best_seed = nb.node;
        }
      }
      if (best_seed != kInvalidNode) agg.aggregate_of[i] = agg.aggregate_of[best_seed];
    }

    // nodes without a seed neighbor follow their strongest assigned neighbor;
    // each round only reads the previous round's assignment
    bool progress = true;
    while (progress) {
      progress = false;
      std::vector<NodeId> next = agg.aggregate_of;
      for (NodeId i = 0; i < n; ++i) {
        if (agg.aggregate_of[i] != kInvalidNode) continue;
        double best = -1.0;
        NodeId best_nb = kInvalidNode;
        for (const Neighbor& nb : g.neighbors(i)) {
          if (agg.aggregate_of[nb.node] == kInvalidNode) continue;
          const double c = dist.coupling(nb.edge);
          if (c > best || (c == best && nb.node < best_nb)) {
            best = c;
            best_nb = nb.node;
          }
        }
        if (best_nb != kInvalidNode) {
          next[i] = agg.aggregate_of[best_nb];
          progress = true;
        }
      }
      agg.aggregate_of.swap(next);
    }

    auto orphan = std::find(agg.aggregate_of.begin(), agg.aggregate_of.end(), kInvalidNode);
    if (orphan == agg.aggregate_of.end()) break;
    split.is_seed[static_cast<std::size_t>(orphan - agg.aggregate_of.begin())] = 1;
    ++agg.promoted;
  }
  agg.split = std::move(split);
  return agg;
}

ResponseInstance coarse_instance(const ResponseInstance& fine, std::span<const NodeId> aggregate_of,
                                 std::size_t num_aggregates, ScalarAggregation scalars) {
  const std::size_t n = fine.num_nodes();
  if (aggregate_of.size() != n) throw ValidationError("aggregation map has wrong length");
  for (NodeId agg : aggregate_of) {
    if (agg >= num_aggregates) throw ValidationError("aggregation map references unknown coarse node");
  }

  std::vector<double> intra(num_aggregates, 0.0);
  std::vector<Edge> crossing;
  for (const Edge& e : fine.graph.edges()) {
    const NodeId I = aggregate_of[e.u];
    const NodeId J = aggregate_of[e.v];
    if (I == J) {
      intra[I] += e.w;
    } else {
      crossing.push_back({I, J, e.w});
    }
  }

  ResponseInstance coarse;
  coarse.graph = WeightedGraph(num_aggregates, crossing);
  coarse.p_from_weights = fine.p_from_weights;
  if (fine.p_from_weights) {
    coarse.p = p_from_weights(coarse.graph);
  } else {
    std::vector<double> p_sum(coarse.graph.num_edges(), 0.0);
    std::vector<std::size_t> p_count(coarse.graph.num_edges(), 0);
    for (EdgeId e = 0; e < fine.graph.num_edges(); ++e) {
      const Edge& fe = fine.graph.edge(e);
      const NodeId I = aggregate_of[fe.u];
      const NodeId J = aggregate_of[fe.v];
      if (I == J) continue;
      const EdgeId ce = coarse.graph.find_edge(I, J);
      p_sum[ce] += fine.p[e];
      ++p_count[ce];
    }
    coarse.p.resize(coarse.graph.num_edges());
    for (EdgeId ce = 0; ce < coarse.p.size(); ++ce) {
      coarse.p[ce] = std::clamp(p_sum[ce] / static_cast<double>(p_count[ce]), 0.0, 1.0);
    }
  }

  std::vector<std::size_t> members(num_aggregates, 0);
  coarse.a = intra;
  coarse.phi.assign(num_aggregates, 0.0);
  coarse.b.assign(num_aggregates, 0.0);
  for (NodeId i = 0; i < n; ++i) {
    const NodeId I = aggregate_of[i];
    ++members[I];
    coarse.a[I] += fine.a[i];
    if (scalars == ScalarAggregation::max) {
      coarse.phi[I] = std::max(coarse.phi[I], fine.phi[i]);
      coarse.b[I] = std::max(coarse.b[I], fine.b[i]);
    } else {
      coarse.phi[I] += fine.phi[i];
      coarse.b[I] += fine.b[i];
    }
  }
  for (NodeId I = 0; I < num_aggregates; ++I) {
    if (members[I] == 0) throw ValidationError("coarse node " + std::to_string(I) + " is empty");
    if (scalars == ScalarAggregation::mean) {
      coarse.phi[I] /= static_cast<double>(members[I]);
      coarse.b[I] /= static_cast<double>(members[I]);
    }
    coarse.phi[I] = std::clamp(coarse.phi[I], 0.0, 1.0);
  }
  return coarse;
}

Assignment prolongate(std::span<const NodeId> aggregate_of, std::span<const std::uint8_t> coarse_x) {
  Assignment x(aggregate_of.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = coarse_x[aggregate_of[i]];
  return x;
}

std::optional<HierarchyLevel> coarsen(const ResponseInstance& fine, const CoarseningOptions& opts,
                                      std::uint64_t seed) {
  const std::size_t n = fine.num_nodes();
  if (n == 0) return std::nullopt;
  const EdgeDistances dist = algebraic_distances(fine.graph, opts.algdist, seed, opts.exec);

  double theta = opts.theta;
  for (int attempt = 0; attempt <= opts.max_theta_retries && theta > 0.0; ++attempt) {
    Aggregation agg = aggregate(fine.graph, fc_split(fine.graph, dist, fine.phi, theta, opts.order), dist);
    const std::size_t coarse_n = agg.num_aggregates();
    if (static_cast<double>(coarse_n) < opts.stall_ratio * static_cast<double>(n)) {
      HierarchyLevel level;
      level.coarse = coarse_instance(fine, agg.aggregate_of, coarse_n, opts.scalars);
      level.split = std::move(agg.split);
      level.aggregate_of = std::move(agg.aggregate_of);
      level.fine_size = n;
      level.coarse_size = coarse_n;
      level.theta_used = theta;
      level.theta_retries = attempt;
      return level;
    }
    theta -= opts.theta_step;
  }
  return std::nullopt;
}

}  // namespace optresp
