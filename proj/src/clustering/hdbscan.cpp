#include "schemabench/clustering/hdbscan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "schemabench/error.hpp"
#include "schemabench/kernels/kernels.hpp"

namespace schemabench::clustering {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct LinkageRow {
  std::size_t left;
  std::size_t right;
  double distance;
  std::size_t size;
};

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(2 * n - 1), size_(2 * n - 1, 1), next_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  std::size_t size(std::size_t x) const { return size_[x]; }
  void merge(std::size_t a, std::size_t b) {
    parent_[a] = next_;
    parent_[b] = next_;
    size_[next_] = size_[a] + size_[b];
    ++next_;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
  std::size_t next_;
};

std::vector<LinkageRow> single_linkage(std::vector<detail::MstEdge> mst, std::size_t n) {
  std::stable_sort(mst.begin(), mst.end(),
                   [](const detail::MstEdge& x, const detail::MstEdge& y) { return x.weight < y.weight; });
  UnionFind uf(n);
  std::vector<LinkageRow> rows;
  rows.reserve(mst.size());
  for (const auto& e : mst) {
    const std::size_t a = uf.find(e.a);
    const std::size_t b = uf.find(e.b);
    rows.push_back({a, b, e.weight, uf.size(a) + uf.size(b)});
    uf.merge(a, b);
  }
  return rows;
}

// Breadth-first listing of a linkage subtree, node ids as in the linkage (points < n).
std::vector<std::size_t> linkage_bfs(const std::vector<LinkageRow>& rows, std::size_t n, std::size_t root) {
  std::vector<std::size_t> out;
  std::vector<std::size_t> level{root};
  while (!level.empty()) {
    out.insert(out.end(), level.begin(), level.end());
    std::vector<std::size_t> next;
    for (auto node : level) {
      if (node >= n) {
        next.push_back(rows[node - n].left);
        next.push_back(rows[node - n].right);
      }
    }
    level = std::move(next);
  }
  return out;
}

double lambda_of(double distance) { return distance > 0.0 ? 1.0 / distance : kInf; }

// Contribution (lambda - birth) * size; an infinite lambda at an infinite birth adds nothing.
double excess(double lambda, double birth, std::size_t size) {
  if (std::isinf(lambda) && std::isinf(birth)) return 0.0;
  return (lambda - birth) * static_cast<double>(size);
}

ClusterAssignment run(std::span<const double> flat, std::size_t n, std::size_t dim, const HdbscanParams& params) {
  if (params.min_cluster_size < 2) throw Error(Errc::InvalidParameter, "min_cluster_size must be at least 2");
  if (params.min_samples && *params.min_samples < 1) throw Error(Errc::InvalidParameter, "min_samples must be at least 1");
  ClusterAssignment result;
  result.labels.assign(n, -1);
  if (n < params.min_cluster_size || n < 2) return result;

  std::vector<double> dist(n * n);
  kernels::pairwise_distances(flat, n, dim, dist);
  const std::size_t k = std::min(params.min_samples.value_or(params.min_cluster_size), n);
  const auto core = detail::core_distances(dist, n, k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) dist[i * n + j] = mutual_reachability(core[i], core[j], dist[i * n + j]);
  }
  const auto condensed = detail::condense(detail::prim_mst(dist, n), n, params.min_cluster_size);

  // Stability of every condensed cluster (ids n .. n+C-1, root = n).
  std::size_t max_cluster = n;
  for (const auto& r : condensed) {
    if (r.size > 1) max_cluster = std::max(max_cluster, r.child);
  }
  const std::size_t cluster_count = max_cluster - n + 1;
  std::vector<double> birth(cluster_count, 0.0);
  std::vector<double> stability(cluster_count, 0.0);
  std::vector<std::size_t> cluster_parent(cluster_count, 0);
  std::vector<std::vector<std::size_t>> cluster_children(cluster_count);
  std::vector<std::size_t> point_parent(n, n);
  for (const auto& r : condensed) {
    if (r.size > 1) {
      birth[r.child - n] = r.lambda;
      cluster_parent[r.child - n] = r.parent;
      cluster_children[r.parent - n].push_back(r.child);
    } else {
      point_parent[r.child] = r.parent;
    }
  }
  for (const auto& r : condensed) stability[r.parent - n] += excess(r.lambda, birth[r.parent - n], r.size);

  // Excess of mass, leaves first (children always carry larger ids than their parent).
  std::vector<char> selected(cluster_count, 0);
  for (std::size_t c = cluster_count; c-- > 1;) {
    double subtree = 0.0;
    for (auto child : cluster_children[c]) subtree += stability[child - n];
    if (subtree > stability[c]) {
      stability[c] = subtree;
    } else {
      selected[c] = 1;
      std::vector<std::size_t> stack(cluster_children[c].begin(), cluster_children[c].end());
      while (!stack.empty()) {
        const auto node = stack.back();
        stack.pop_back();
        selected[node - n] = 0;
        stack.insert(stack.end(), cluster_children[node - n].begin(), cluster_children[node - n].end());
      }
    }
  }

  std::map<std::size_t, int> ids;
  for (std::size_t p = 0; p < n; ++p) {
    std::size_t c = point_parent[p];
    while (c != n && !selected[c - n]) c = cluster_parent[c - n];
    if (c == n) continue;
    auto [it, inserted] = ids.emplace(c, static_cast<int>(ids.size()));
    result.labels[p] = it->second;
  }
  result.cluster_count = static_cast<int>(ids.size());
  return result;
}

}  // namespace

double mutual_reachability(double core_a, double core_b, double dist) noexcept {
  return std::max({core_a, core_b, dist});
}

namespace detail {

std::vector<double> core_distances(std::span<const double> dist, std::size_t n, std::size_t k) {
  std::vector<double> core(n);
  std::vector<double> row(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::copy_n(dist.begin() + static_cast<std::ptrdiff_t>(i * n), n, row.begin());
    std::nth_element(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k - 1), row.end());
    core[i] = row[k - 1];
  }
  return core;
}

std::vector<MstEdge> prim_mst(std::span<const double> mreach, std::size_t n) {
  // Records (previously added node, new node, weight) per step; after a stable sort
  // by weight these edges give the exact single-linkage merge sequence.
  std::vector<MstEdge> edges;
  edges.reserve(n - 1);
  std::vector<char> in_tree(n, 0);
  std::vector<double> best(n, kInf);
  std::size_t current = 0;
  in_tree[0] = 1;
  for (std::size_t step = 1; step < n; ++step) {
    std::size_t next = n;
    double next_weight = kInf;
    for (std::size_t j = 0; j < n; ++j) {
      if (in_tree[j]) continue;
      best[j] = std::min(best[j], mreach[current * n + j]);
      if (next == n || best[j] < next_weight) {
        next = j;
        next_weight = best[j];
      }
    }
    edges.push_back({current, next, next_weight});
    in_tree[next] = 1;
    current = next;
  }
  return edges;
}

std::vector<CondensedRow> condense(std::vector<MstEdge> mst, std::size_t n, std::size_t min_cluster_size) {
  const auto rows = single_linkage(std::move(mst), n);
  const std::size_t root = 2 * n - 2;
  auto count_of = [&](std::size_t node) { return node >= n ? rows[node - n].size : std::size_t{1}; };

  std::vector<CondensedRow> out;
  std::vector<std::size_t> relabel(root + 1, 0);
  std::vector<char> ignore(root + 1, 0);
  relabel[root] = n;
  std::size_t next_label = n + 1;

  auto drop_points = [&](std::size_t parent_label, std::size_t subtree, double lambda) {
    for (auto sub : linkage_bfs(rows, n, subtree)) {
      if (sub < n) out.push_back({parent_label, sub, lambda, 1});
      ignore[sub] = 1;
    }
  };

  for (auto node : linkage_bfs(rows, n, root)) {
    if (ignore[node] || node < n) continue;
    const auto& r = rows[node - n];
    const double lambda = lambda_of(r.distance);
    const std::size_t lc = count_of(r.left);
    const std::size_t rc = count_of(r.right);
    if (lc >= min_cluster_size && rc >= min_cluster_size) {
      relabel[r.left] = next_label++;
      out.push_back({relabel[node], relabel[r.left], lambda, lc});
      relabel[r.right] = next_label++;
      out.push_back({relabel[node], relabel[r.right], lambda, rc});
    } else if (lc < min_cluster_size && rc < min_cluster_size) {
      drop_points(relabel[node], r.left, lambda);
      drop_points(relabel[node], r.right, lambda);
    } else if (lc < min_cluster_size) {
      relabel[r.right] = relabel[node];
      drop_points(relabel[node], r.left, lambda);
    } else {
      relabel[r.left] = relabel[node];
      drop_points(relabel[node], r.right, lambda);
    }
  }
  return out;
}

}  // namespace detail

ClusterAssignment hdbscan(std::span<const std::vector<double>> points, const HdbscanParams& params) {
  const std::size_t n = points.size();
  const std::size_t dim = n ? points.front().size() : 0;
  std::vector<double> flat;
  flat.reserve(n * dim);
  for (const auto& p : points) {
    if (p.size() != dim) throw Error(Errc::DimensionMismatch, "all points must share one dimension");
    flat.insert(flat.end(), p.begin(), p.end());
  }
  return run(flat, n, dim, params);
}

ClusterAssignment hdbscan(std::span<const embedding::EmbeddingVector> points, const HdbscanParams& params) {
  const std::size_t n = points.size();
  const std::size_t dim = n ? points.front().dimension() : 0;
  std::vector<double> flat;
  flat.reserve(n * dim);
  for (const auto& p : points) {
    if (p.dimension() != dim) throw Error(Errc::DimensionMismatch, "all points must share one dimension");
    flat.insert(flat.end(), p.values().begin(), p.values().end());
  }
  return run(flat, n, dim, params);
}

}  // namespace schemabench::clustering
