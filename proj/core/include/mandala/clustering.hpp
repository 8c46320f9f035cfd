#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mandala/accumulation.hpp"
#include "mandala/distance.hpp"
#include "mandala/linalg.hpp"

namespace mandala {

enum class SymmetrizeMode { mean, abs_mean, max };

const char* to_string(SymmetrizeMode m) noexcept;
SymmetrizeMode symmetrize_mode_from_string(const std::string& s);

/// Builds a symmetric dissimilarity from a (generally asymmetric) distance
/// matrix. mean: (D_ab + D_ba)/2; abs_mean: |mean|; max: max(D_ab, D_ba).
/// The diagonal is forced to zero.
Matrix symmetrize(const GeneralSquareMatrix& d, SymmetrizeMode mode);
Matrix symmetrize(const DistanceMatrix& d, SymmetrizeMode mode);

/// One agglomeration step: nodes a and b joined at their dissimilarity.
/// Leaves are 0..leaf_count-1; the merge at position i creates node
/// leaf_count + i.
struct Merge {
  int a = 0;
  int b = 0;
  double distance = 0.0;
  int new_node = 0;
};

/// Stepwise dendrogram: exactly leaf_count - 1 merges, every node consumed
/// once, final state a single root.
struct Dendrogram {
  int leaf_count = 0;
  std::vector<Merge> merges;
};

/// Flat clustering. Labels are renumbered canonically by first occurrence in
/// leaf order, so identical inputs give byte-identical labelings.
struct ClusterLabeling {
  int k = 0;
  std::vector<int> labels;  // one per leaf, in [0, k)
};

/// Complete-linkage agglomeration: at each of the d-1 steps the active pair
/// with minimal dissimilarity merges (ties: lexicographically smallest node
/// pair), and distances to the new node update by
/// f(d(a,x), d(b,x)) = max(d(a,x), d(b,x)).
/// This is the literal re-scan formulation; merge distances come out
/// nondecreasing, which is asserted on every run.
/// Throws TooFewLeaves for d < 2.
Dendrogram agglomerate(const Matrix& delta);

/// Same contract as agglomerate(), but the argmin uses cached per-row
/// nearest-neighbor candidates instead of a full rescan. Validated against
/// agglomerate() in the test suite; the default pipeline path stays with the
/// literal formulation.
Dendrogram agglomerate_fast(const Matrix& delta);

/// Undoes the last k-1 merges; each connected component becomes one cluster.
/// Throws KOutOfRange unless 1 <= k <= leaf_count.
ClusterLabeling cut(const Dendrogram& dn, int k);

/// Drops every merge with distance > t; components become clusters. For the
/// nondecreasing complete-linkage distances this is monotone in t.
ClusterLabeling cut_at_threshold(const Dendrogram& dn, double t);

struct ClusterLegendEntry {
  int label = 0;
  double mean_phi = 0.0;
  std::int64_t pixels = 0;
};

/// Cluster labels devectorized onto the image grid. legend[0] is the cluster
/// with the highest mean accumulation value.
struct LabelImage {
  int side = 0;
  std::vector<int> grid;  // row-major, side*side labels
  std::vector<ClusterLegendEntry> legend;
};

/// Requires leaf_count == acc.side^2 (SizeMismatch otherwise).
LabelImage label_image(const ClusterLabeling& c, const AccumulationImage& acc);

}  // namespace mandala
