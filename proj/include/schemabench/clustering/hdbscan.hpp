#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "schemabench/embedding/embedding.hpp"

namespace schemabench::clustering {

struct ClusterAssignment {
  std::vector<int> labels;  // -1 = noise, otherwise 0..cluster_count-1 by first occurrence
  int cluster_count = 0;
};

struct HdbscanParams {
  std::size_t min_cluster_size = 5;
  /// Neighbour count for core distances (self included); defaults to min_cluster_size.
  std::optional<std::size_t> min_samples;
};

double mutual_reachability(double core_a, double core_b, double dist) noexcept;

/// Euclidean HDBSCAN with excess-of-mass extraction; the root cluster is never selected.
ClusterAssignment hdbscan(std::span<const std::vector<double>> points, const HdbscanParams& params = {});
ClusterAssignment hdbscan(std::span<const embedding::EmbeddingVector> points, const HdbscanParams& params = {});

/// Internals exposed for tests.
namespace detail {

struct MstEdge {
  std::size_t a;
  std::size_t b;
  double weight;
};

struct CondensedRow {
  std::size_t parent;
  std::size_t child;
  double lambda;
  std::size_t size;
};

/// Core distance of every point: distance to its k-th nearest point counting itself.
std::vector<double> core_distances(std::span<const double> dist, std::size_t n, std::size_t k);
/// Prim's tree over the dense mutual-reachability matrix, edges in insertion order.
std::vector<MstEdge> prim_mst(std::span<const double> mreach, std::size_t n);
std::vector<CondensedRow> condense(std::vector<MstEdge> mst, std::size_t n, std::size_t min_cluster_size);

}  // namespace detail

}  // namespace schemabench::clustering
