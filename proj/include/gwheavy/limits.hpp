#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "gwheavy/errors.hpp"

namespace gw {

namespace detail {

// 15-point Kronrod rule with embedded 7-point Gauss rule on [-1, 1].
constexpr double kKronrodNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
constexpr double kKronrodWeights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kGaussWeights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

template <typename F>
void gk15(const F& f, double a, double b, double& kronrod, double& err) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double resk = 0.0, resg = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double dx = half * kKronrodNodes[i];
        const double fsum = i == 7 ? f(mid) : f(mid - dx) + f(mid + dx);
        resk += kKronrodWeights[i] * fsum;
        // odd indices (and the centre, i = 7) carry the embedded Gauss rule
        if (i % 2 == 1) resg += kGaussWeights[i / 2] * fsum;
    }
    kronrod = resk * half;
    const double gauss = resg * half;
    err = std::abs(kronrod - gauss);
}

// Adaptive bisection around the Gauss-Kronrod panel.
template <typename F>
double adaptive_gk(const F& f, double a, double b, double abs_tol) {
    struct Panel {
        double a, b, value, err;
    };
    double value, err;
    gk15(f, a, b, value, err);
    std::vector<Panel> heap{{a, b, value, err}};
    double total = value, total_err = err;
    int iterations = 0;
    while (total_err > abs_tol) {
        if (++iterations > 2000)
            throw ResourceError("adaptive quadrature failed to reach the error target");
        // split the panel with the largest error estimate
        std::size_t worst = 0;
        for (std::size_t i = 1; i < heap.size(); ++i)
            if (heap[i].err > heap[worst].err) worst = i;
        const Panel p = heap[worst];
        const double mid = 0.5 * (p.a + p.b);
        Panel left{p.a, mid, 0, 0}, right{mid, p.b, 0, 0};
        gk15(f, left.a, left.b, left.value, left.err);
        gk15(f, right.a, right.b, right.value, right.err);
        total += left.value + right.value - p.value;
        total_err += left.err + right.err - p.err;
        heap[worst] = left;
        heap.push_back(right);
    }
    return total;
}

}  // namespace detail

// Laplace exponent of the subordinator driving the heavy fragmentation of
// a Brownian excursion:
//   Phi(q) = int_{1/2}^1 (1 - x^q) 2 (2 pi x^3 (1-x)^3)^{-1/2} dx.
// The substitution x = 1 - u^2 removes the endpoint singularity (the
// integrand extends continuously to u = 0 with value 4q/sqrt(2 pi)), after
// which the panels converge quickly.
inline double phi(double q, double abs_tol = 1e-10) {
    if (!(q > 0.0)) throw DomainError("phi: q must be positive");
    const double scale = 4.0 / std::sqrt(2.0 * M_PI);
    auto integrand = [q, scale](double u) {
        const double log1mx = std::log1p(-u * u);          // log(1 - u^2)
        const double one_minus_xq = -std::expm1(q * log1mx);  // 1 - (1-u^2)^q
        return scale * one_minus_xq / (std::exp(1.5 * log1mx) * u * u);
    };
    return detail::adaptive_gk(integrand, 0.0, 1.0 / std::sqrt(2.0), abs_tol);
}

// Moments of the total fragmentation time: E[T_inf^k] = k! / prod Phi(j/2).
inline double t_infinity_moment(std::int64_t k, double abs_tol = 1e-10) {
    if (k < 0) throw DomainError("t_infinity_moment: k must be >= 0");
    double value = 1.0;
    for (std::int64_t j = 1; j <= k; ++j)
        value *= static_cast<double>(j) / phi(static_cast<double>(j) / 2.0, abs_tol);
    return value;
}

// Theta distribution, the limit law of the rescaled tree height:
//   F(x) = sum_j (1 - 2 j^2 x^2) exp(-j^2 x^2),  x > 0.
inline double theta_cdf(double x) {
    if (!(x > 0.0)) throw DomainError("theta_cdf: x must be positive");
    double sum = 1.0;  // j = 0 term
    for (std::int64_t j = 1;; ++j) {
        const double a = static_cast<double>(j) * static_cast<double>(j) * x * x;
        if (a > 50.0) break;  // remaining terms are below 1e-16
        sum += 2.0 * (1.0 - 2.0 * a) * std::exp(-a);
    }
    return std::clamp(sum, 0.0, 1.0);
}

// Superlevel-set fragmentation following the heaviest component.
//
// The excursion is a sequence of samples on a unit-spaced grid. A component
// above level t is a maximal run of grid points with f > t, measured out to
// the bracketing at-or-below points, so its length is the run length plus
// one. For the contour of a tree this gives the component spanned by a
// depth-d subtree of size s length exactly 2s above level d - 1/2, so with
// half-integer thresholds the trace reproduces the discrete heavy path.
struct FragmentationTrace {
    std::vector<double> levels;    // 0, step/2, 3 step/2, ...
    std::vector<double> measures;  // tracked component length at each level
    double t_infinity = 0.0;       // completed steps times step

    // first recorded level at which the tracked measure is <= target
    double zeta(double target) const {
        for (std::size_t i = 0; i < measures.size(); ++i)
            if (measures[i] <= target) return levels[i];
        return t_infinity;
    }
};

inline FragmentationTrace heavy_fragmentation(const std::vector<double>& excursion,
                                              double level_step) {
    if (!(level_step > 0.0)) throw DomainError("heavy_fragmentation: level_step must be positive");
    if (excursion.size() < 2 || excursion.front() != 0.0 || excursion.back() != 0.0)
        throw DomainError("heavy_fragmentation: excursion must start and end at 0");
    for (double v : excursion)
        if (!(v >= 0.0)) throw DomainError("heavy_fragmentation: excursion must be non-negative");

    const std::int64_t last = static_cast<std::int64_t>(excursion.size()) - 1;

    FragmentationTrace trace;
    trace.levels.push_back(0.0);
    trace.measures.push_back(static_cast<double>(last));
    std::int64_t lo = 0, hi = last;  // tracked point range, bracketing points included
    std::int64_t step = 0;
    while (true) {
        const double t = (static_cast<double>(step) + 0.5) * level_step;
        std::int64_t best_lo = -1, best_len = 0;
        std::int64_t run_lo = -1;
        for (std::int64_t i = lo; i <= hi + 1; ++i) {
            if (i <= hi && excursion[static_cast<std::size_t>(i)] > t) {
                if (run_lo < 0) run_lo = i;
            } else if (run_lo >= 0) {
                const std::int64_t len = i - run_lo;
                if (len > best_len) {  // strict keeps the leftmost among ties
                    best_len = len;
                    best_lo = run_lo;
                }
                run_lo = -1;
            }
        }
        if (best_len == 0) break;
        ++step;
        lo = best_lo - 1;  // the bracketing points sit at or below t
        hi = best_lo + best_len;
        trace.levels.push_back(t);
        trace.measures.push_back(static_cast<double>(best_len + 1));
    }
    trace.t_infinity = static_cast<double>(step) * level_step;
    return trace;
}

// Least-squares fit of log y against log x; the slope is the estimated
// power-law exponent.
struct PowerLawFit {
    double slope = 0.0;
    double intercept = 0.0;  // natural-log intercept
    double r2 = 1.0;
};

inline PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) throw DomainError("fit_power_law: need at least 3 points");
    std::vector<double> lx, ly;
    for (const auto& [x, y] : points) {
        if (!(x > 0.0) || !(y > 0.0))
            throw DomainError("fit_power_law: points must be strictly positive");
        lx.push_back(std::log(x));
        ly.push_back(std::log(y));
    }
    const double n = static_cast<double>(points.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (sxx <= 0.0) throw DomainError("fit_power_law: degenerate x range");
    PowerLawFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    const double ss_res = syy - sxy * sxy / sxx;
    fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    return fit;
}

}  // namespace gw
