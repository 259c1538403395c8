#ifndef MBGDT_PREPROCESS_HPP_
#define MBGDT_PREPROCESS_HPP_

#include <cstddef>
#include <vector>

#include "mbgdt/types.hpp"

namespace mbgdt {

// ---------------------------------------------------------------------------
// Kernel preprocessor
//
// A grid of axis-aligned rectangles (width_x by width_y, shifted by stride_x
// and stride_y) covers the bounding box of the data. A kernel whose population
// exceeds threshold_fraction * n is "dense". Kernels are scanned with x as the
// outer index and y as the inner; every sample joins the first dense kernel
// that contains it, and each dense kernel with at least one member emits one
// sample at the mean of its members.
// ---------------------------------------------------------------------------

struct KernelConfig {
  double kernel_width_x = 1.0;
  double kernel_width_y = 1.0;
  double stride_x = 0.5;
  double stride_y = 0.5;
  double threshold_fraction = 0.1;
  // true: return only combined samples. false: samples outside every dense
  // kernel pass through unchanged, ahead of the combined ones.
  bool strict_mode = false;

  void validate() const;
};

/// Builds a KernelConfig whose widths are fractions of the dataset's x and y
/// ranges and whose strides are stride_fraction of the widths. Zero ranges
/// fall back to unit widths.
KernelConfig kernel_config_for(const Dataset& dataset, double width_fraction_x,
                               double width_fraction_y, double stride_fraction,
                               double threshold_fraction, bool strict_mode);

Dataset kernel_preprocess(const Dataset& dataset, const KernelConfig& cfg);

// ---------------------------------------------------------------------------
// Density-based removal
// ---------------------------------------------------------------------------

struct DbscanConfig {
  double radius = 0.05;  // in min-max normalized units
  std::size_t min_samples = 8;
  std::size_t min_clusters_to_act = 2;

  void validate() const;
};

/// x and y each min-max scaled onto [0, 1]; a zero-range axis maps to 0.
std::vector<Sample> normalize_unit_box(const Dataset& dataset);

/// Indices j (i included) within `radius` of sample `index` in normalized
/// coordinates, ascending. Throws InvalidInput on a bad index.
std::vector<std::size_t> region_query(const Dataset& dataset, std::size_t index, double radius);

struct DbscanClustering {
  static constexpr int kNoise = -1;

  std::vector<int> labels;                  // cluster id per sample or kNoise
  std::vector<std::size_t> neighbor_counts; // |N(i)|
  std::vector<bool> core;
  std::size_t cluster_count = 0;
  int densest = kNoise;                     // cluster removed by dbscan_trim
};

/// Textbook DBSCAN: i is core when |N(i)| >= min_samples; clusters are numbered
/// in order of their lowest core index and a border point belongs to the
/// first cluster that reaches it. `densest` is the cluster with the highest
/// mean |N(i)| over its core points (ties: larger cluster, then lower first
/// member).
DbscanClustering dbscan_cluster(const Dataset& dataset, const DbscanConfig& cfg);

/// Removes the densest cluster when at least min_clusters_to_act clusters are
/// found; otherwise returns the input. Order is preserved. Throws InvalidInput
/// on an empty dataset.
Dataset dbscan_trim(const Dataset& dataset, const DbscanConfig& cfg);

}  // namespace mbgdt

#endif  // MBGDT_PREPROCESS_HPP_
