#include "mbgdt/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <string>

#include "mbgdt/error.hpp"

namespace mbgdt {

void KernelConfig::validate() const {
  if (!(kernel_width_x > 0.0) || !(kernel_width_y > 0.0)) {
    throw InvalidInput("kernel widths must be positive");
  }
  if (!(stride_x > 0.0) || !(stride_y > 0.0)) throw InvalidInput("kernel strides must be positive");
  if (stride_x > kernel_width_x || stride_y > kernel_width_y) {
    throw InvalidInput("kernel stride must not exceed the kernel width");
  }
  if (!(threshold_fraction > 0.0 && threshold_fraction <= 1.0)) {
    throw InvalidInput("threshold_fraction must lie in (0, 1]");
  }
}

void DbscanConfig::validate() const {
  if (!(radius > 0.0)) throw InvalidInput("dbscan radius must be positive");
  if (min_samples < 2) throw InvalidInput("dbscan min_samples must be at least 2");
}

namespace {

struct Bounds {
  double x_min, x_max, y_min, y_max;
};

Bounds bounds_of(const Dataset& d) {
  Bounds b{d[0].x, d[0].x, d[0].y, d[0].y};
  for (const Sample& s : d.samples()) {
    b.x_min = std::min(b.x_min, s.x);
    b.x_max = std::max(b.x_max, s.x);
    b.y_min = std::min(b.y_min, s.y);
    b.y_max = std::max(b.y_max, s.y);
  }
  return b;
}

// Kernel positions along one axis: origin_i = lo + i * stride, covering
// [lo, lo + range].
struct Axis {
  double lo;
  double width;
  double stride;
  std::size_t count;

  Axis(double lo_, double range, double width_, double stride_)
      : lo(lo_), width(width_), stride(stride_) {
    count = range <= width ? 1 : static_cast<std::size_t>(std::ceil((range - width) / stride)) + 1;
    // Rounding in the ceil above can miss the fewest kernels reaching the top
    // edge by one either way.
    while (origin(count - 1) + width < lo + range) ++count;
    while (count > 1 && origin(count - 2) + width >= lo + range) --count;
  }

  double origin(std::size_t i) const { return lo + static_cast<double>(i) * stride; }
  bool contains(std::size_t i, double v) const {
    return origin(i) <= v && v <= origin(i) + width;
  }

  // Lowest and highest kernel indices containing v; empty when first > last.
  std::pair<std::size_t, std::size_t> span_of(double v) const {
    const double lo_f = std::ceil((v - lo - width) / stride);
    const double hi_f = std::floor((v - lo) / stride);
    std::size_t first = lo_f <= 0.0 ? 0 : static_cast<std::size_t>(lo_f);
    std::size_t last = hi_f <= 0.0 ? 0 : std::min(count - 1, static_cast<std::size_t>(hi_f));
    first = std::min(first, count - 1);
    while (first > 0 && contains(first - 1, v)) --first;
    while (first < count && !contains(first, v)) ++first;
    while (last + 1 < count && contains(last + 1, v)) ++last;
    while (last > first && !contains(last, v)) --last;
    return {first, last};
  }
};

}  // namespace

KernelConfig kernel_config_for(const Dataset& dataset, double width_fraction_x,
                               double width_fraction_y, double stride_fraction,
                               double threshold_fraction, bool strict_mode) {
  KernelConfig cfg;
  double range_x = 1.0;
  double range_y = 1.0;
  if (!dataset.empty()) {
    const Bounds b = bounds_of(dataset);
    if (b.x_max > b.x_min) range_x = b.x_max - b.x_min;
    if (b.y_max > b.y_min) range_y = b.y_max - b.y_min;
  }
  cfg.kernel_width_x = width_fraction_x * range_x;
  cfg.kernel_width_y = width_fraction_y * range_y;
  cfg.stride_x = stride_fraction * cfg.kernel_width_x;
  cfg.stride_y = stride_fraction * cfg.kernel_width_y;
  cfg.threshold_fraction = threshold_fraction;
  cfg.strict_mode = strict_mode;
  return cfg;
}

Dataset kernel_preprocess(const Dataset& dataset, const KernelConfig& cfg) {
  cfg.validate();
  if (dataset.empty()) return {};

  const Bounds b = bounds_of(dataset);
  const Axis ax(b.x_min, b.x_max - b.x_min, cfg.kernel_width_x, cfg.stride_x);
  const Axis ay(b.y_min, b.y_max - b.y_min, cfg.kernel_width_y, cfg.stride_y);
  const std::size_t n = dataset.size();

  std::vector<std::pair<std::size_t, std::size_t>> span_x(n);
  std::vector<std::pair<std::size_t, std::size_t>> span_y(n);
  // Keyed by ix * ay.count + iy, so map order is the scan order.
  std::map<std::size_t, std::size_t> population;
  for (std::size_t i = 0; i < n; ++i) {
    span_x[i] = ax.span_of(dataset[i].x);
    span_y[i] = ay.span_of(dataset[i].y);
    for (std::size_t ix = span_x[i].first; ix <= span_x[i].second; ++ix) {
      for (std::size_t iy = span_y[i].first; iy <= span_y[i].second; ++iy) {
        ++population[ix * ay.count + iy];
      }
    }
  }

  const double threshold = cfg.threshold_fraction * static_cast<double>(n);
  const auto dense = [&](std::size_t key) {
    const auto it = population.find(key);
    return it != population.end() && static_cast<double>(it->second) > threshold;
  };

  struct Group {
    double sum_x = 0.0;
    double sum_y = 0.0;
    std::size_t members = 0;
    bool contaminated = false;
  };
  std::map<std::size_t, Group> groups;
  Dataset out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    bool assigned = false;
    for (std::size_t ix = span_x[i].first; ix <= span_x[i].second && !assigned; ++ix) {
      for (std::size_t iy = span_y[i].first; iy <= span_y[i].second; ++iy) {
        const std::size_t key = ix * ay.count + iy;
        if (!dense(key)) continue;
        Group& g = groups[key];
        g.sum_x += dataset[i].x;
        g.sum_y += dataset[i].y;
        ++g.members;
        g.contaminated = g.contaminated || dataset.is_contaminated(i);
        assigned = true;
        break;
      }
    }
    if (!assigned && !cfg.strict_mode) out.add(dataset[i], dataset.is_contaminated(i));
  }
  for (const auto& [key, g] : groups) {
    const double m = static_cast<double>(g.members);
    out.add(Sample{g.sum_x / m, g.sum_y / m}, g.contaminated);
  }
  return out;
}

std::vector<Sample> normalize_unit_box(const Dataset& dataset) {
  std::vector<Sample> out(dataset.samples().begin(), dataset.samples().end());
  if (out.empty()) return out;
  const Bounds b = bounds_of(dataset);
  const double rx = b.x_max - b.x_min;
  const double ry = b.y_max - b.y_min;
  for (Sample& s : out) {
    s.x = rx > 0.0 ? (s.x - b.x_min) / rx : 0.0;
    s.y = ry > 0.0 ? (s.y - b.y_min) / ry : 0.0;
  }
  return out;
}

namespace {

bool within(const Sample& a, const Sample& b, double radius) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy) <= radius;
}

}  // namespace

std::vector<std::size_t> region_query(const Dataset& dataset, std::size_t index, double radius) {
  if (index >= dataset.size()) {
    throw InvalidInput("region_query: index " + std::to_string(index) + " out of range");
  }
  const std::vector<Sample> pts = normalize_unit_box(dataset);
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < pts.size(); ++j) {
    if (within(pts[index], pts[j], radius)) out.push_back(j);
  }
  return out;
}

DbscanClustering dbscan_cluster(const Dataset& dataset, const DbscanConfig& cfg) {
  cfg.validate();
  const std::size_t n = dataset.size();
  const std::vector<Sample> pts = normalize_unit_box(dataset);

  std::vector<std::vector<std::size_t>> neighbors(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (within(pts[i], pts[j], cfg.radius)) neighbors[i].push_back(j);
    }
  }

  DbscanClustering c;
  c.labels.assign(n, DbscanClustering::kNoise);
  c.neighbor_counts.resize(n);
  c.core.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    c.neighbor_counts[i] = neighbors[i].size();
    c.core[i] = neighbors[i].size() >= cfg.min_samples;
  }

  int next = 0;
  std::deque<std::size_t> frontier;
  for (std::size_t i = 0; i < n; ++i) {
    if (!c.core[i] || c.labels[i] != DbscanClustering::kNoise) continue;
    const int id = next++;
    c.labels[i] = id;
    frontier.push_back(i);
    while (!frontier.empty()) {
      const std::size_t p = frontier.front();
      frontier.pop_front();
      for (std::size_t q : neighbors[p]) {
        if (c.labels[q] != DbscanClustering::kNoise) continue;
        c.labels[q] = id;
        if (c.core[q]) frontier.push_back(q);
      }
    }
  }
  c.cluster_count = static_cast<std::size_t>(next);

  // Densest cluster: mean neighbor count over core members.
  std::vector<double> core_sum(c.cluster_count, 0.0);
  std::vector<std::size_t> core_n(c.cluster_count, 0);
  std::vector<std::size_t> size(c.cluster_count, 0);
  std::vector<std::size_t> first_member(c.cluster_count, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (c.labels[i] == DbscanClustering::kNoise) continue;
    const auto k = static_cast<std::size_t>(c.labels[i]);
    ++size[k];
    first_member[k] = std::min(first_member[k], i);
    if (c.core[i]) {
      core_sum[k] += static_cast<double>(c.neighbor_counts[i]);
      ++core_n[k];
    }
  }
  double best_score = -1.0;
  for (std::size_t k = 0; k < c.cluster_count; ++k) {
    const double score = core_sum[k] / static_cast<double>(core_n[k]);
    bool better = c.densest == DbscanClustering::kNoise || score > best_score;
    if (!better && score == best_score) {
      const auto b = static_cast<std::size_t>(c.densest);
      better = size[k] > size[b] || (size[k] == size[b] && first_member[k] < first_member[b]);
    }
    if (better) {
      c.densest = static_cast<int>(k);
      best_score = score;
    }
  }
  return c;
}

Dataset dbscan_trim(const Dataset& dataset, const DbscanConfig& cfg) {
  if (dataset.empty()) throw InvalidInput("dbscan_trim: empty dataset");
  const DbscanClustering c = dbscan_cluster(dataset, cfg);
  if (c.cluster_count < cfg.min_clusters_to_act) return dataset;
  Dataset out;
  out.reserve(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (c.labels[i] != c.densest) out.add(dataset[i], dataset.is_contaminated(i));
  }
  return out;
}

}  // namespace mbgdt
