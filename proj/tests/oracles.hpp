// Independent reference implementations used by the unit and acceptance
// tests. None of these call into the library's algorithms; they only share
// the plain data types.
#ifndef MBGDT_TESTS_ORACLES_HPP_
#define MBGDT_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "mbgdt/types.hpp"

namespace oracle {

// Polynomial least squares via normal equations and Gaussian elimination
// with partial pivoting. Coefficients in ascending degree.
inline std::vector<double> least_squares(const std::vector<double>& xs,
                                         const std::vector<double>& ys, std::size_t degree) {
  const std::size_t m = degree + 1;
  std::vector<std::vector<double>> a(m, std::vector<double>(m + 1, 0.0));
  for (std::size_t s = 0; s < xs.size(); ++s) {
    std::vector<double> p(m);
    double v = 1.0;
    for (std::size_t k = 0; k < m; ++k, v *= xs[s]) p[k] = v;
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < m; ++c) a[r][c] += p[r] * p[c];
      a[r][m] += p[r] * ys[s];
    }
  }
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < m; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    }
    std::swap(a[col], a[piv]);
    if (a[col][col] == 0.0) throw std::runtime_error("singular normal equations");
    for (std::size_t r = 0; r < m; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c <= m; ++c) a[r][c] -= f * a[col][c];
    }
  }
  std::vector<double> out(m);
  for (std::size_t r = 0; r < m; ++r) out[r] = a[r][m] / a[r][r];
  return out;
}

// Kernel preprocessing by explicit enumeration of every kernel rectangle.
// Kernels start at the bounding-box minimum and step by the stride until one
// reaches the maximum; scan order is x outer, y inner.
struct KernelOutput {
  std::vector<mbgdt::Sample> samples;
  std::vector<std::vector<std::size_t>> groups;  // members of each combined sample
};

inline std::vector<double> kernel_origins(double lo, double hi, double width, double stride) {
  std::vector<double> out;
  for (std::size_t i = 0;; ++i) {
    const double o = lo + static_cast<double>(i) * stride;
    out.push_back(o);
    if (o + width >= hi) break;
  }
  return out;
}

inline KernelOutput kernel_reference(const std::vector<mbgdt::Sample>& pts, double wx, double wy,
                                     double sx, double sy, double threshold_fraction,
                                     bool strict) {
  KernelOutput out;
  if (pts.empty()) return out;
  double x0 = pts[0].x, x1 = pts[0].x, y0 = pts[0].y, y1 = pts[0].y;
  for (const auto& p : pts) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  const std::vector<double> ox = kernel_origins(x0, x1, wx, sx);
  const std::vector<double> oy = kernel_origins(y0, y1, wy, sy);
  const auto inside = [&](std::size_t ix, std::size_t iy, const mbgdt::Sample& p) {
    return ox[ix] <= p.x && p.x <= ox[ix] + wx && oy[iy] <= p.y && p.y <= oy[iy] + wy;
  };
  const double threshold = threshold_fraction * static_cast<double>(pts.size());

  std::vector<long> owner(pts.size(), -1);
  std::vector<std::vector<std::size_t>> members;
  for (std::size_t ix = 0; ix < ox.size(); ++ix) {
    for (std::size_t iy = 0; iy < oy.size(); ++iy) {
      std::size_t population = 0;
      for (const auto& p : pts) population += inside(ix, iy, p) ? 1 : 0;
      if (!(static_cast<double>(population) > threshold)) continue;
      std::vector<std::size_t> mine;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (owner[i] < 0 && inside(ix, iy, pts[i])) {
          owner[i] = static_cast<long>(members.size());
          mine.push_back(i);
        }
      }
      if (!mine.empty()) members.push_back(std::move(mine));
    }
  }
  if (!strict) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (owner[i] < 0) out.samples.push_back(pts[i]);
    }
  }
  for (const auto& g : members) {
    double sx_sum = 0.0, sy_sum = 0.0;
    for (std::size_t i : g) {
      sx_sum += pts[i].x;
      sy_sum += pts[i].y;
    }
    const double k = static_cast<double>(g.size());
    out.samples.push_back({sx_sum / k, sy_sum / k});
  }
  out.groups = std::move(members);
  return out;
}

// Textbook DBSCAN on min-max normalized coordinates, built from an explicit
// O(n^2) adjacency matrix and union-find over core points.
struct DbscanOutput {
  std::vector<int> labels;  // -1 noise, else cluster numbered by lowest core index
  std::size_t clusters = 0;
  int removed = -1;         // densest cluster, -1 when none
};

inline DbscanOutput dbscan_reference(const std::vector<mbgdt::Sample>& raw, double radius,
                                     std::size_t min_samples) {
  const std::size_t n = raw.size();
  DbscanOutput out;
  out.labels.assign(n, -1);
  if (n == 0) return out;
  double x0 = raw[0].x, x1 = raw[0].x, y0 = raw[0].y, y1 = raw[0].y;
  for (const auto& p : raw) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  std::vector<mbgdt::Sample> pts(n);
  for (std::size_t i = 0; i < n; ++i) {
    pts[i].x = x1 > x0 ? (raw[i].x - x0) / (x1 - x0) : 0.0;
    pts[i].y = y1 > y0 ? (raw[i].y - y0) / (y1 - y0) : 0.0;
  }
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  std::vector<std::size_t> deg(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double dx = pts[i].x - pts[j].x, dy = pts[i].y - pts[j].y;
      adj[i][j] = std::sqrt(dx * dx + dy * dy) <= radius;
      deg[i] += adj[i][j];
    }
  }
  std::vector<bool> core(n);
  for (std::size_t i = 0; i < n; ++i) core[i] = deg[i] >= min_samples;

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (core[i] && core[j] && adj[i][j]) parent[find(i)] = find(j);
    }
  }
  // Number components by their lowest core index.
  std::map<std::size_t, int> id_of_root;
  for (std::size_t i = 0; i < n; ++i) {
    if (!core[i]) continue;
    const std::size_t r = find(i);
    if (!id_of_root.count(r)) {
      const int id = static_cast<int>(id_of_root.size());
      id_of_root[r] = id;
    }
    out.labels[i] = id_of_root[r];
  }
  out.clusters = id_of_root.size();
  // A border point joins the lowest-numbered cluster with a core neighbor.
  for (std::size_t i = 0; i < n; ++i) {
    if (core[i]) continue;
    int best = -1;
    for (std::size_t j = 0; j < n; ++j) {
      if (core[j] && adj[i][j] && (best < 0 || out.labels[j] < best)) best = out.labels[j];
    }
    out.labels[i] = best;
  }
  double best_score = -1.0;
  std::size_t best_size = 0, best_first = n;
  for (int k = 0; k < static_cast<int>(out.clusters); ++k) {
    double sum = 0.0;
    std::size_t cores = 0, size = 0, first = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (out.labels[i] != k) continue;
      ++size;
      first = std::min(first, i);
      if (core[i]) {
        sum += static_cast<double>(deg[i]);
        ++cores;
      }
    }
    const double score = sum / static_cast<double>(cores);
    const bool better = out.removed < 0 || score > best_score ||
                        (score == best_score &&
                         (size > best_size || (size == best_size && first < best_first)));
    if (better) {
      out.removed = k;
      best_score = score;
      best_size = size;
      best_first = first;
    }
  }
  return out;
}

// Canonical form of a labelling: the set of member-index sets.
inline std::set<std::vector<std::size_t>> partition_of(const std::vector<int>& labels) {
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= 0) groups[labels[i]].push_back(i);
  }
  std::set<std::vector<std::size_t>> out;
  for (auto& [k, v] : groups) out.insert(v);
  return out;
}

inline std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

// Spearman rank correlation with average ranks for ties.
inline double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  return pearson(ranks(a), ranks(b));
}

// Ordinary least-squares slope of y on x.
inline double slope(const std::vector<double>& x, const std::vector<double>& y) {
  return least_squares(x, y, 1)[1];
}

}  // namespace oracle

#endif  // MBGDT_TESTS_ORACLES_HPP_
