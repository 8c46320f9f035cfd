#include "mandala/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mandala {

namespace {

void check_symmetric_zero_diag(const Matrix& delta) {
  if (delta.rows() != delta.cols()) {
    raise(errc::dim_mismatch, "dissimilarity matrix must be square");
  }
  const int d = static_cast<int>(delta.rows());
  for (int i = 0; i < d; ++i) {
    if (delta(i, i) != 0.0) {
      raise(errc::invalid_argument, "dissimilarity diagonal must be zero");
    }
    for (int j = i + 1; j < d; ++j) {
      if (delta(i, j) != delta(j, i)) {
        raise(errc::invalid_argument,
              "dissimilarity must be exactly symmetric; run symmetrize()");
      }
    }
  }
}

// Union-find over node ids (leaves + synthetic merge nodes).
struct DisjointSet {
  std::vector<int> parent;

  explicit DisjointSet(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

ClusterLabeling components_to_labeling(const Dendrogram& dn,
                                       std::size_t kept_merges) {
  const int d = dn.leaf_count;
  DisjointSet sets(d + static_cast<int>(dn.merges.size()));
  for (std::size_t i = 0; i < kept_merges; ++i) {
    const Merge& m = dn.merges[i];
    sets.unite(m.a, m.new_node);
    sets.unite(m.b, m.new_node);
  }

  // Canonical renumbering by first occurrence in leaf order.
  ClusterLabeling labeling;
  labeling.labels.resize(d);
  std::vector<int> canonical(d + dn.merges.size(), -1);
  int next = 0;
  for (int leaf = 0; leaf < d; ++leaf) {
    const int root = sets.find(leaf);
    if (canonical[root] < 0) canonical[root] = next++;
    labeling.labels[leaf] = canonical[root];
  }
  labeling.k = next;
  return labeling;
}

}  // namespace

const char* to_string(SymmetrizeMode m) noexcept {
  switch (m) {
    case SymmetrizeMode::mean:
      return "mean";
    case SymmetrizeMode::abs_mean:
      return "abs-mean";
    case SymmetrizeMode::max:
      return "max";
  }
  return "?";
}

SymmetrizeMode symmetrize_mode_from_string(const std::string& s) {
  if (s == "mean") return SymmetrizeMode::mean;
  if (s == "abs-mean") return SymmetrizeMode::abs_mean;
  if (s == "max") return SymmetrizeMode::max;
  raise(errc::invalid_argument, "unknown symmetrize mode '" + s + "'");
}

Matrix symmetrize(const GeneralSquareMatrix& d, SymmetrizeMode mode) {
  if (d.rows() != d.cols()) {
    raise(errc::dim_mismatch, "symmetrize needs a square matrix");
  }
  const int n = static_cast<int>(d.rows());
  Matrix out(n, n);
  for (int i = 0; i < n; ++i) {
    out(i, i) = 0.0;
    for (int j = i + 1; j < n; ++j) {
      double v = 0.0;
      switch (mode) {
        case SymmetrizeMode::mean:
          v = 0.5 * (d(i, j) + d(j, i));
          break;
        case SymmetrizeMode::abs_mean:
          v = std::abs(0.5 * (d(i, j) + d(j, i)));
          break;
        case SymmetrizeMode::max:
          v = std::max(d(i, j), d(j, i));
          break;
      }
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return out;
}

Matrix symmetrize(const DistanceMatrix& d, SymmetrizeMode mode) {
  return symmetrize(d.matrix, mode);
}

Dendrogram agglomerate(const Matrix& delta) {
  check_symmetric_zero_diag(delta);
  const int d = static_cast<int>(delta.rows());
  if (d < 2) {
    raise(errc::too_few_leaves, "need at least 2 leaves");
  }

  // Working copy indexed by slot; a merge writes the new node's distances
  // into the slot of one child and retires the other slot.
  Matrix w = delta;
  std::vector<int> labels(d);
  std::vector<bool> alive(d, true);
  std::iota(labels.begin(), labels.end(), 0);

  // Tie-break: smallest (min label, max label) pair.
  const auto pair_less = [&](int a1, int b1, int a2, int b2) {
    if (a1 > b1) std::swap(a1, b1);
    if (a2 > b2) std::swap(a2, b2);
    return a1 != a2 ? a1 < a2 : b1 < b2;
  };

  Dendrogram dn;
  dn.leaf_count = d;
  dn.merges.reserve(d - 1);

  double previous = -std::numeric_limits<double>::infinity();
  for (int step = 0; step < d - 1; ++step) {
    double best = std::numeric_limits<double>::infinity();
    int si = -1, sj = -1;
    for (int i = 0; i < d; ++i) {
      if (!alive[i]) continue;
      for (int j = i + 1; j < d; ++j) {
        if (!alive[j]) continue;
        const double v = w(i, j);
        if (v < best ||
            (v == best && pair_less(labels[i], labels[j], labels[si], labels[sj]))) {
          best = v;
          si = i;
          sj = j;
        }
      }
    }

    int label_a = labels[si];
    int label_b = labels[sj];
    if (label_a > label_b) std::swap(label_a, label_b);

    // Provable for the max update rule; a violation means the input mutated
    // under our feet.
    if (best < previous) {
      raise(errc::non_convergence,
            "complete-linkage merge distances decreased");
    }
    previous = best;

    const int new_node = d + step;
    dn.merges.push_back(Merge{label_a, label_b, best, new_node});

    for (int t = 0; t < d; ++t) {
      if (!alive[t] || t == si || t == sj) continue;
      const double f = std::max(w(si, t), w(sj, t));
      w(si, t) = f;
      w(t, si) = f;
    }
    alive[sj] = false;
    labels[si] = new_node;
  }
  return dn;
}

Dendrogram agglomerate_fast(const Matrix& delta) {
  check_symmetric_zero_diag(delta);
  const int d = static_cast<int>(delta.rows());
  if (d < 2) {
    raise(errc::too_few_leaves, "need at least 2 leaves");
  }

  Matrix w = delta;
  std::vector<int> labels(d);
  std::vector<bool> alive(d, true);
  std::iota(labels.begin(), labels.end(), 0);

  // Cached per-row minima. Complete-linkage rows only grow on merge, so a
  // stale cache entry is always a lower bound of the true row minimum;
  // `fresh` marks rows whose cache is exact.
  std::vector<double> best_dist(d);
  std::vector<int> best_peer(d, -1);
  std::vector<bool> fresh(d, false);
  auto recompute = [&](int i) {
    best_dist[i] = std::numeric_limits<double>::infinity();
    best_peer[i] = -1;
    for (int j = 0; j < d; ++j) {
      if (j == i || !alive[j]) continue;
      if (w(i, j) < best_dist[i]) {
        best_dist[i] = w(i, j);
        best_peer[i] = j;
      }
    }
    fresh[i] = true;
  };
  for (int i = 0; i < d; ++i) recompute(i);

  Dendrogram dn;
  dn.leaf_count = d;
  dn.merges.reserve(d - 1);

  for (int step = 0; step < d - 1; ++step) {
    // Take the row with the smallest cached value; if it is stale, refresh
    // and retry. A fresh smallest cached value certifies the global minimum
    // because every other cache is a lower bound of its own row.
    int si = -1;
    for (;;) {
      double cbest = std::numeric_limits<double>::infinity();
      si = -1;
      for (int i = 0; i < d; ++i) {
        if (alive[i] && best_dist[i] < cbest) {
          cbest = best_dist[i];
          si = i;
        }
      }
      if (fresh[si]) break;
      recompute(si);
    }
    int sj = best_peer[si];
    const double dist = w(si, sj);
    if (sj < si) std::swap(si, sj);

    int label_a = labels[si];
    int label_b = labels[sj];
    if (label_a > label_b) std::swap(label_a, label_b);
    const int new_node = d + step;
    dn.merges.push_back(Merge{label_a, label_b, dist, new_node});

    for (int t = 0; t < d; ++t) {
      if (!alive[t] || t == si || t == sj) continue;
      const double f = std::max(w(si, t), w(sj, t));
      w(si, t) = f;
      w(t, si) = f;
      // Entries to si grew and sj died: caches pointing there go stale (but
      // stay lower bounds); everything else keeps its exact minimum.
      if (best_peer[t] == si || best_peer[t] == sj) fresh[t] = false;
    }
    alive[sj] = false;
    best_dist[sj] = std::numeric_limits<double>::infinity();
    labels[si] = new_node;
    recompute(si);
  }
  return dn;
}

ClusterLabeling cut(const Dendrogram& dn, int k) {
  if (k < 1 || k > dn.leaf_count) {
    raise(errc::k_out_of_range,
          "k = " + std::to_string(k) + " with " +
              std::to_string(dn.leaf_count) + " leaves");
  }
  // Undo the last k-1 merges.
  return components_to_labeling(dn, dn.merges.size() - (k - 1));
}

ClusterLabeling cut_at_threshold(const Dendrogram& dn, double t) {
  const int d = dn.leaf_count;
  DisjointSet sets(d + static_cast<int>(dn.merges.size()));
  for (const Merge& m : dn.merges) {
    if (m.distance > t) continue;
    sets.unite(m.a, m.new_node);
    sets.unite(m.b, m.new_node);
  }
  ClusterLabeling labeling;
  labeling.labels.resize(d);
  std::vector<int> canonical(d + dn.merges.size(), -1);
  int next = 0;
  for (int leaf = 0; leaf < d; ++leaf) {
    const int root = sets.find(leaf);
    if (canonical[root] < 0) canonical[root] = next++;
    labeling.labels[leaf] = canonical[root];
  }
  labeling.k = next;
  return labeling;
}

LabelImage label_image(const ClusterLabeling& c, const AccumulationImage& acc) {
  const std::int64_t leaves = static_cast<std::int64_t>(c.labels.size());
  if (leaves != static_cast<std::int64_t>(acc.side) * acc.side) {
    raise(errc::size_mismatch,
          std::to_string(leaves) + " labels vs " + std::to_string(acc.side) +
              "x" + std::to_string(acc.side) + " image");
  }

  LabelImage out;
  out.side = acc.side;
  out.grid = c.labels;

  std::vector<double> phi_sum(c.k, 0.0);
  std::vector<std::int64_t> counts(c.k, 0);
  for (std::int64_t t = 0; t < leaves; ++t) {
    const int label = c.labels[t];
    phi_sum[label] += acc.values(static_cast<int>(t / acc.side),
                                 static_cast<int>(t % acc.side));
    ++counts[label];
  }

  out.legend.resize(c.k);
  for (int label = 0; label < c.k; ++label) {
    out.legend[label] = ClusterLegendEntry{
        label, phi_sum[label] / static_cast<double>(counts[label]),
        counts[label]};
  }
  // Rank 0 = highest mean accumulation; ties keep label order.
  std::stable_sort(out.legend.begin(), out.legend.end(),
                   [](const ClusterLegendEntry& a, const ClusterLegendEntry& b) {
                     return a.mean_phi > b.mean_phi;
                   });
  return out;
}

}  // namespace mandala
