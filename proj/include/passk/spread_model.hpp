// Closed forms for the clipped-uniform variant model.
//
// A task with base success rate p_o spawns variants whose success rate is
// clip(p_o + W, 0, 1) with W uniform on [-w, w]. The expected variant rate
// p_v has three zones (clipping at 0, no clipping, clipping at 1), and both
// agents' Pass@k reduce to u_k(p) = 1 - (1-p)^k applied to p_o (Repeater)
// or p_v (Variator).

#pragma once

#include <cmath>
#include <string>

#include "passk/errors.hpp"
#include "passk/probability.hpp"

namespace passk {

struct SpreadModel {
    double p_o;  // base success rate, in [0, 1]
    double w;    // spread half-width, in (0, 1/2)

    SpreadModel(double p_o_, double w_) : p_o(p_o_), w(w_) {
        if (!(p_o >= 0.0 && p_o <= 1.0)) {
            throw domain_error("p_o must lie in [0, 1], got " + std::to_string(p_o));
        }
        check_spread(w);
    }

    static void check_spread(double w) {
        if (!(w > 0.0 && w < 0.5)) {
            throw domain_error("spread w must lie in (0, 1/2), got " + std::to_string(w));
        }
    }

    Probability expected_variant_success() const;
    Probability pass_at_k_repeater(int k) const;
    Probability pass_at_k_variator(int k) const;
    double pass_at_k_gap(int k) const;
};

inline void check_k(int k) {
    if (k < 1) throw domain_error("k must be a positive integer, got " + std::to_string(k));
}

// u_k(p) = 1 - (1-p)^k, evaluated via expm1/log1p so small p and large k do
// not lose precision (the regret bound at w=0.2, k=10 is ~1e-13).
inline Probability u_k(double p, int k) {
    check_k(k);
    Probability checked(p);
    if (checked.value() >= 1.0) return 1.0;
    return -std::expm1(static_cast<double>(k) * std::log1p(-checked.value()));
}

// Expected success rate of a random variant. Zone boundaries p_o == w and
// p_o == 1-w evaluate through the middle branch; the formulas agree there.
inline Probability SpreadModel::expected_variant_success() const {
    if (p_o < w) {
        double s = w + p_o;
        return s * s / (4.0 * w);
    }
    if (p_o > 1.0 - w) {
        double s = 1.0 + w - p_o;
        return 1.0 - s * s / (4.0 * w);
    }
    return p_o;
}

inline Probability SpreadModel::pass_at_k_repeater(int k) const {
    return u_k(p_o, k);
}

inline Probability SpreadModel::pass_at_k_variator(int k) const {
    return u_k(expected_variant_success(), k);
}

// Pass@k(Repeater) - Pass@k(Variator), computed through the survival
// probabilities (1-p)^k so tiny gaps near p_o = 1 keep relative precision.
// Negative in the lower clipping zone, zero in the middle zone.
inline double SpreadModel::pass_at_k_gap(int k) const {
    check_k(k);
    double sv = std::pow(1.0 - expected_variant_success().value(), static_cast<double>(k));
    double sr = std::pow(1.0 - p_o, static_cast<double>(k));
    return sv - sr;
}

// Guaranteed floor on Pass@k(Variator): 1 - (1 - w/4)^k, independent of p_o.
// Tight at p_o = 0, where p_v attains its minimum w/4.
inline Probability performance_lower_bound(double w, int k) {
    SpreadModel::check_spread(w);
    return u_k(w / 4.0, k);
}

// The Pass@k gap in the extreme world p_o = 1, where p_v = 1 - w/4: equals
// (w/4)^k. For k = 1 this is also the largest gap over all p_o; for k >= 2
// the largest gap sits at an interior p_o and can exceed this value, because
// u_k compresses differences near 1 (see max_regret).
inline double regret_upper_bound(double w, int k) {
    SpreadModel::check_spread(w);
    check_k(k);
    return std::pow(w / 4.0, static_cast<double>(k));
}

// Largest Pass@k gap between Repeater and Variator over all p_o. The gap is
// positive only in the upper clipping zone; writing t = 1 - p_o, it equals
// ((w+t)^2/(4w))^k - t^k on t in [0, w]. Found by a dense scan plus ternary
// refinement; exact value w/4 at k = 1.
inline double max_regret(double w, int k) {
    SpreadModel::check_spread(w);
    check_k(k);
    auto gap = [&](double t) {
        double s = (w + t) * (w + t) / (4.0 * w);
        return std::pow(s, static_cast<double>(k)) - std::pow(t, static_cast<double>(k));
    };
    if (k == 1) return w / 4.0;
    const int n = 4096;
    double best_t = 0.0, best = gap(0.0);
    for (int i = 1; i <= n; ++i) {
        double t = w * static_cast<double>(i) / n;
        double g = gap(t);
        if (g > best) {
            best = g;
            best_t = t;
        }
    }
    double lo = std::max(0.0, best_t - w / n), hi = std::min(w, best_t + w / n);
    for (int it = 0; it < 200; ++it) {
        double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (gap(m1) < gap(m2)) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    return std::max(best, gap(0.5 * (lo + hi)));
}

}  // namespace passk
