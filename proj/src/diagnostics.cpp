#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "eegflow/pipeline.hpp"

namespace eegflow::pipeline {

namespace {

// Lower convex hull feasibility: does a convex nondecreasing function exist
// with lo_i <= g(x_i) <= hi_i? Equivalent to the greatest convex minorant of
// the upper bounds dominating the lower bounds.
bool convex_band_feasible(const std::vector<double>& x,
                          const std::vector<double>& lo,
                          const std::vector<double>& hi) {
  const std::size_t n = x.size();
  if (n <= 1) return n == 0 || lo[0] <= hi[0] + 1e-15;
  for (std::size_t i = 0; i < n; ++i)
    if (lo[i] > hi[i] + 1e-15) return false;

  std::vector<std::size_t> hull;
  for (std::size_t i = 0; i < n; ++i) {
    while (hull.size() >= 2) {
      const std::size_t a = hull[hull.size() - 2];
      const std::size_t b = hull[hull.size() - 1];
      // drop b when it lies on or above the chord a -> i
      const double cross = (x[i] - x[a]) * (hi[b] - hi[a]) -
                           (x[b] - x[a]) * (hi[i] - hi[a]);
      if (cross >= 0.0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(i);
  }

  std::size_t seg = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (seg + 1 < hull.size() && x[hull[seg + 1]] < x[i]) ++seg;
    double env;
    if (seg + 1 >= hull.size()) {
      env = hi[hull.back()];
    } else {
      const std::size_t a = hull[seg];
      const std::size_t b = hull[seg + 1];
      env = hi[a] + (hi[b] - hi[a]) * (x[i] - x[a]) / (x[b] - x[a]);
    }
    if (env < lo[i] - 1e-13) return false;
  }
  return true;
}

// Concave counterpart by reflection.
bool concave_band_feasible(const std::vector<double>& x,
                           const std::vector<double>& lo,
                           const std::vector<double>& hi) {
  std::vector<double> nlo(hi.size()), nhi(lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i) {
    nlo[i] = -hi[i];
    nhi[i] = -lo[i];
  }
  return convex_band_feasible(x, nlo, nhi);
}

} // namespace

double dip_statistic(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  if (values.front() == values.back()) return 0.0;

  // distinct values with cumulative counts
  std::vector<double> v;
  std::vector<double> cum; // F(v_j) * n
  for (double x : values) {
    if (!v.empty() && x == v.back()) {
      cum.back() += 1.0;
    } else {
      v.push_back(x);
      cum.push_back(cum.empty() ? 1.0 : cum.back() + 1.0);
    }
  }
  const std::size_t m = v.size();
  const double dn = double(n);
  auto f_at = [&](std::size_t j) { return cum[j] / dn; };
  auto f_before = [&](std::size_t j) { return j == 0 ? 0.0 : cum[j - 1] / dn; };

  // feasibility of sup-distance d for some unimodal CDF, checking every mode
  // location (at each distinct value, and in each gap)
  auto feasible = [&](double d) {
    std::vector<double> x, lo, hi;
    auto left_ok = [&](std::size_t k_exclusive, bool virtual_at_k) {
      x.clear();
      lo.clear();
      hi.clear();
      for (std::size_t j = 0; j < k_exclusive; ++j) {
        x.push_back(v[j]);
        lo.push_back(f_at(j) - d);
        hi.push_back(f_before(j) + d);
      }
      if (virtual_at_k) {
        x.push_back(v[k_exclusive]);
        lo.push_back(f_before(k_exclusive) - d);
        hi.push_back(f_before(k_exclusive) + d);
      }
      return convex_band_feasible(x, lo, hi);
    };
    auto right_ok = [&](std::size_t k_inclusive, bool mode_point) {
      x.clear();
      lo.clear();
      hi.clear();
      for (std::size_t j = k_inclusive; j < m; ++j) {
        x.push_back(v[j]);
        if (j == k_inclusive && mode_point) {
          lo.push_back(f_at(j) - d);
          hi.push_back(f_at(j) + d);
        } else {
          lo.push_back(f_at(j) - d);
          hi.push_back(f_before(j) + d);
        }
      }
      return concave_band_feasible(x, lo, hi);
    };

    for (std::size_t k = 0; k < m; ++k) // mode at v_k (jump allowed there)
      if (left_ok(k, true) && right_ok(k, true)) return true;
    for (std::size_t k = 0; k + 1 < m; ++k) // mode in the gap (v_k, v_k+1)
      if (left_ok(k + 1, false) && right_ok(k + 1, false)) return true;
    return false;
  };

  double lo_d = 0.0, hi_d = 0.25;
  if (feasible(lo_d)) return 0.0;
  for (int iter = 0; iter < 50; ++iter) {
    const double mid = 0.5 * (lo_d + hi_d);
    (feasible(mid) ? hi_d : lo_d) = mid;
  }
  return hi_d;
}

void export_diagnostics(const std::vector<io::TrajectoryRecord>& trajectories,
                        const std::vector<io::SubgraphRecord>& post_cut,
                        const fs::path& out_dir, std::size_t bins) {
  if (trajectories.empty())
    throw IoError("export_diagnostics: no trajectories");
  fs::create_directories(out_dir);

  const std::size_t iterations = trajectories.front().trajectory.states.size();
  const auto edge_present = trajectories.front().trajectory.edge_present;
  const auto node_names = trajectories.front().trajectory.node_names;
  const auto n = edge_present.rows();

  // pooled per-iteration weights and curvatures
  std::vector<std::vector<double>> pooled_w(iterations);
  std::vector<std::vector<double>> pooled_k(iterations > 0 ? iterations - 1
                                                           : 0);
  for (const auto& r : trajectories) {
    const auto& t = r.trajectory;
    for (std::size_t it = 0; it < t.states.size(); ++it)
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
          if (t.edge_present(i, j)) {
            pooled_w[it].push_back(t.states[it](i, j));
            if (it > 0) pooled_k[it - 1].push_back(t.curvatures[it - 1].kappa(i, j));
          }
  }

  // histogram CSV + SVG
  std::ostringstream hist_csv;
  hist_csv << "iteration,bin,lo,hi,count\n";
  std::ostringstream svg;
  const int bar_w = 16, panel_h = 72, panel_gap = 22, left_pad = 8;
  const int width = left_pad * 2 + bar_w * int(bins);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << (panel_h + panel_gap) * iterations
      << "\">\n";
  for (std::size_t it = 0; it < iterations; ++it) {
    auto& w = pooled_w[it];
    std::vector<std::size_t> counts(bins, 0);
    double lo = 0.0, hi = 0.0;
    if (!w.empty()) {
      lo = *std::min_element(w.begin(), w.end());
      hi = *std::max_element(w.begin(), w.end());
      const double span = hi - lo;
      for (double x : w) {
        std::size_t b = 0;
        if (span > 0.0)
          b = std::min(bins - 1,
                       std::size_t((x - lo) / span * double(bins)));
        ++counts[b];
      }
    }
    const double bin_w = bins ? (hi - lo) / double(bins) : 0.0;
    std::size_t peak = 1;
    for (auto c : counts) peak = std::max(peak, c);
    const int y0 = int(it) * (panel_h + panel_gap);
    svg << "  <text x=\"" << left_pad << "\" y=\"" << y0 + 12
        << "\" font-size=\"10\">iteration " << it << " [" << lo << ", " << hi
        << "]</text>\n";
    for (std::size_t b = 0; b < bins; ++b) {
      hist_csv << it << ',' << b << ',' << lo + double(b) * bin_w << ','
               << (b + 1 == bins ? hi : lo + double(b + 1) * bin_w) << ','
               << counts[b] << '\n';
      const int h = int(std::lround(double(counts[b]) / double(peak) *
                                    (panel_h - 16)));
      svg << "  <rect x=\"" << left_pad + int(b) * bar_w << "\" y=\""
          << y0 + panel_h - h << "\" width=\"" << bar_w - 2 << "\" height=\""
          << h << "\" fill=\"#4477aa\"/>\n";
    }
  }
  svg << "</svg>\n";
  io::write_text_file(out_dir / "weight_hist.csv", hist_csv.str());
  io::write_text_file(out_dir / "weight_hist.svg", svg.str());

  // cut-frequency table
  std::ostringstream cut_csv;
  cut_csv << "node_i,node_j,cut_count,survive_count\n";
  if (!post_cut.empty()) {
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) {
        std::size_t cut = 0, kept = 0;
        for (const auto& r : post_cut)
          (r.graph.edge_present(i, j) ? kept : cut) += 1;
        cut_csv << node_names[std::size_t(i)] << ','
                << node_names[std::size_t(j)] << ',' << cut << ',' << kept
                << '\n';
      }
  }
  io::write_text_file(out_dir / "cut_table.csv", cut_csv.str());

  // curvature summary
  std::ostringstream curv_csv;
  curv_csv << "iteration,min,median,max\n";
  for (std::size_t it = 0; it < pooled_k.size(); ++it) {
    auto& k = pooled_k[it];
    if (k.empty()) continue;
    std::sort(k.begin(), k.end());
    const double median = k.size() % 2 == 1
                              ? k[k.size() / 2]
                              : 0.5 * (k[k.size() / 2 - 1] + k[k.size() / 2]);
    curv_csv << it + 1 << ',' << k.front() << ',' << median << ',' << k.back()
             << '\n';
  }
  io::write_text_file(out_dir / "curvature_stats.csv", curv_csv.str());

  // bimodality flag on the final pre-cut weights, deterministically strided
  // down to keep the dip computation quick
  std::vector<double> final_w = pooled_w.back();
  std::sort(final_w.begin(), final_w.end());
  constexpr std::size_t max_points = 400;
  std::vector<double> sample;
  if (final_w.size() <= max_points) {
    sample = final_w;
  } else {
    for (std::size_t i = 0; i < max_points; ++i)
      sample.push_back(
          final_w[i * (final_w.size() - 1) / (max_points - 1)]);
  }
  const double dip = dip_statistic(sample);
  constexpr double dip_threshold = 0.02;
  nlohmann::ordered_json bj;
  bj["schema"] = "eegflow.bimodality/1";
  bj["dip"] = dip;
  bj["n"] = sample.size();
  bj["threshold"] = dip_threshold;
  bj["flag"] = dip > dip_threshold;
  io::write_text_file(out_dir / "bimodality.json", bj.dump(2) + "\n");
}

} // namespace eegflow::pipeline
