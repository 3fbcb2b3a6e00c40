// Plot-ready CSV emission: success-count histograms with the binomial-null
// overlay, rate-distribution comparisons with intersection-over-union, the
// variant-vs-original scatter with a monotone smoothing curve, and closed-form
// theory curves. RFC-4180-style quoting, UTF-8, LF line endings, header row,
// numbers rendered with %.12g.

#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "passk/errors.hpp"
#include "passk/spread_model.hpp"
#include "passk/stats.hpp"

namespace passk {

inline std::string csv_number(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return buffer;
}

inline std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline void write_csv(const std::filesystem::path& path,
                      const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw infrastructure_error("cannot open CSV for writing: " + path.string());
    auto emit_row = [&out](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out << ',';
            out << csv_escape(row[i]);
        }
        out << '\n';
    };
    emit_row(header);
    for (const auto& row : rows) emit_row(row);
    if (!out) throw infrastructure_error("CSV write failed: " + path.string());
}

// Success-count histogram over variants plus the pooled binomial-null pmf.
inline void export_histogram_csv(const std::filesystem::path& path,
                                 const std::vector<long long>& successes_per_variant,
                                 int trials_per_variant, double pooled_rate) {
    if (trials_per_variant < 1) throw domain_error("trials per variant must be >= 1");
    std::vector<long long> observed(trials_per_variant + 1, 0);
    for (long long s : successes_per_variant) {
        if (s < 0 || s > trials_per_variant) {
            throw domain_error("success count out of range for histogram");
        }
        ++observed[static_cast<std::size_t>(s)];
    }
    auto pmf = null_success_pmf(trials_per_variant, pooled_rate);
    std::vector<std::vector<std::string>> rows;
    for (int s = 0; s <= trials_per_variant; ++s) {
        rows.push_back({std::to_string(s), std::to_string(observed[s]),
                        csv_number(pmf[static_cast<std::size_t>(s)])});
    }
    write_csv(path, {"successes", "observed_variants", "null_pmf"}, rows);
}

// Normalized equal-width histograms of [0,1] rate samples for several labeled
// groups, plus pairwise intersection-over-union values.
inline void export_guidance_csv(
    const std::filesystem::path& distribution_path, const std::filesystem::path& iou_path,
    const std::vector<std::pair<std::string, std::vector<double>>>& groups, int bin_count) {
    if (bin_count < 1) throw domain_error("bin count must be >= 1");
    std::vector<std::string> header{"bin_low", "bin_high"};
    std::vector<std::vector<double>> masses;
    for (const auto& [label, rates] : groups) {
        header.push_back(label);
        std::vector<double> mass(bin_count, 0.0);
        for (double r : rates) {
            if (r < 0.0 || r > 1.0) throw domain_error("rate outside [0,1]");
            int bin = std::min(static_cast<int>(r * bin_count), bin_count - 1);
            mass[bin] += 1.0;
        }
        if (!rates.empty()) {
            for (double& m : mass) m /= static_cast<double>(rates.size());
        }
        masses.push_back(std::move(mass));
    }
    std::vector<std::vector<std::string>> rows;
    for (int b = 0; b < bin_count; ++b) {
        std::vector<std::string> row{csv_number(static_cast<double>(b) / bin_count),
                                     csv_number(static_cast<double>(b + 1) / bin_count)};
        for (const auto& mass : masses) row.push_back(csv_number(mass[b]));
        rows.push_back(std::move(row));
    }
    write_csv(distribution_path, header, rows);

    std::vector<std::vector<std::string>> iou_rows;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        for (std::size_t j = i + 1; j < groups.size(); ++j) {
            if (groups[i].second.empty() || groups[j].second.empty()) continue;
            double iou = histogram_iou(groups[i].second, groups[j].second, bin_count);
            iou_rows.push_back({groups[i].first, groups[j].first, csv_number(iou)});
        }
    }
    write_csv(iou_path, {"group_a", "group_b", "iou"}, iou_rows);
}

// ---------------------------------------------------------------------------
// Monotone piecewise-cubic (Fritsch-Carlson) interpolation through knots with
// strictly increasing x. Preserves monotone runs of the data.

class MonotoneCubic {
  public:
    MonotoneCubic(std::vector<double> xs, std::vector<double> ys)
        : xs_(std::move(xs)), ys_(std::move(ys)) {
        if (xs_.size() != ys_.size() || xs_.empty()) {
            throw domain_error("interpolation needs matching non-empty knots");
        }
        for (std::size_t i = 1; i < xs_.size(); ++i) {
            if (!(xs_[i] > xs_[i - 1])) {
                throw domain_error("interpolation knots must be strictly increasing");
            }
        }
        const std::size_t n = xs_.size();
        slopes_.assign(n, 0.0);
        if (n == 1) return;
        std::vector<double> d(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            d[i] = (ys_[i + 1] - ys_[i]) / (xs_[i + 1] - xs_[i]);
        }
        slopes_[0] = d[0];
        slopes_[n - 1] = d[n - 2];
        for (std::size_t i = 1; i + 1 < n; ++i) {
            slopes_[i] = d[i - 1] * d[i] > 0.0 ? 0.5 * (d[i - 1] + d[i]) : 0.0;
        }
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (d[i] == 0.0) {
                slopes_[i] = slopes_[i + 1] = 0.0;
                continue;
            }
            double alpha = slopes_[i] / d[i];
            double beta = slopes_[i + 1] / d[i];
            double norm = alpha * alpha + beta * beta;
            if (norm > 9.0) {
                double tau = 3.0 / std::sqrt(norm);
                slopes_[i] = tau * alpha * d[i];
                slopes_[i + 1] = tau * beta * d[i];
            }
        }
    }

    double operator()(double x) const {
        if (xs_.size() == 1) return ys_[0];
        if (x <= xs_.front()) return ys_.front();
        if (x >= xs_.back()) return ys_.back();
        std::size_t hi = 1;
        while (xs_[hi] < x) ++hi;
        std::size_t lo = hi - 1;
        double h = xs_[hi] - xs_[lo];
        double t = (x - xs_[lo]) / h;
        double t2 = t * t;
        double t3 = t2 * t;
        double h00 = 2 * t3 - 3 * t2 + 1;
        double h10 = t3 - 2 * t2 + t;
        double h01 = -2 * t3 + 3 * t2;
        double h11 = t3 - t2;
        return h00 * ys_[lo] + h10 * h * slopes_[lo] + h01 * ys_[hi] + h11 * h * slopes_[hi];
    }

  private:
    std::vector<double> xs_;
    std::vector<double> ys_;
    std::vector<double> slopes_;
};

struct ScatterPoint {
    std::string challenge;
    double x = 0.0;  // original-rate estimate
    double y = 0.0;  // variant-rate estimate
};

struct BinnedMean {
    double mean_x = 0.0;
    double mean_y = 0.0;
    int count = 0;
};

// Equal-width bins over x in [0,1]; only non-empty bins are returned.
inline std::vector<BinnedMean> binned_means(const std::vector<ScatterPoint>& points,
                                            double bin_width) {
    if (!(bin_width > 0.0) || bin_width > 1.0) {
        throw domain_error("bin width must lie in (0, 1]");
    }
    int bins = static_cast<int>(std::ceil(1.0 / bin_width - 1e-12));
    std::vector<BinnedMean> acc(bins);
    for (const auto& point : points) {
        if (point.x < 0.0 || point.x > 1.0) throw domain_error("scatter x outside [0,1]");
        int b = std::min(static_cast<int>(point.x / bin_width), bins - 1);
        acc[b].mean_x += point.x;
        acc[b].mean_y += point.y;
        ++acc[b].count;
    }
    std::vector<BinnedMean> out;
    for (auto& bin : acc) {
        if (bin.count == 0) continue;
        bin.mean_x /= bin.count;
        bin.mean_y /= bin.count;
        out.push_back(bin);
    }
    return out;
}

// Scatter of per-challenge estimates plus a smoothed curve: binned means
// (width 0.1) joined by monotone piecewise-cubic interpolation, sampled on a
// regular grid. Empty input produces header-only files.
inline void export_scatter_csv(const std::filesystem::path& scatter_path,
                               const std::filesystem::path& curve_path,
                               const std::vector<ScatterPoint>& points,
                               double bin_width = 0.1, int curve_samples = 101) {
    std::vector<std::vector<std::string>> scatter_rows;
    for (const auto& point : points) {
        scatter_rows.push_back({point.challenge, csv_number(point.x), csv_number(point.y)});
    }
    write_csv(scatter_path, {"challenge", "p_o_hat", "p_v_hat"}, scatter_rows);

    std::vector<std::vector<std::string>> curve_rows;
    auto bins = binned_means(points, bin_width);
    if (!bins.empty()) {
        std::vector<double> xs, ys;
        for (const auto& bin : bins) {
            xs.push_back(bin.mean_x);
            ys.push_back(bin.mean_y);
        }
        MonotoneCubic curve(xs, ys);
        for (int i = 0; i < curve_samples; ++i) {
            double x = static_cast<double>(i) / (curve_samples - 1);
            curve_rows.push_back({csv_number(x), csv_number(curve(x))});
        }
    }
    write_csv(curve_path, {"p_o", "smoothed_p_v"}, curve_rows);
}

// Closed-form curves on a regular grid of original rates: expected variant
// success and both agents' Pass@k for each requested k.
inline void export_theory_csv(const std::filesystem::path& path, double w,
                              const std::vector<int>& k_values, double step = 0.01) {
    if (!(step > 0.0) || step > 1.0) throw domain_error("step must lie in (0, 1]");
    std::vector<std::string> header{"p_o", "expected_variant_success"};
    for (int k : k_values) header.push_back("repeater_k" + std::to_string(k));
    for (int k : k_values) header.push_back("variator_k" + std::to_string(k));
    std::vector<std::vector<std::string>> rows;
    int steps = static_cast<int>(std::lround(1.0 / step));
    for (int i = 0; i <= steps; ++i) {
        double p_o = std::min(1.0, i * step);
        SpreadModel model(p_o, w);
        std::vector<std::string> row{csv_number(p_o),
                                     csv_number(model.expected_variant_success())};
        for (int k : k_values) row.push_back(csv_number(model.pass_at_k_repeater(k)));
        for (int k : k_values) row.push_back(csv_number(model.pass_at_k_variator(k)));
        rows.push_back(std::move(row));
    }
    write_csv(path, header, rows);
}

}  // namespace passk
