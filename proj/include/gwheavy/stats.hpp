#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "gwheavy/errors.hpp"

namespace gw {

struct SummaryStats {
    std::int64_t count = 0;
    double mean = 0.0;
    double stddev = 0.0;
    double stderror = 0.0;
};

// Two-pass mean/stddev with compensated summation in slot order, so the
// result does not depend on how replications were scheduled.
inline SummaryStats summarize(const std::vector<double>& values) {
    SummaryStats s;
    s.count = static_cast<std::int64_t>(values.size());
    if (values.empty()) return s;
    double sum = 0.0, c = 0.0;
    for (double v : values) {
        const double y = v - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    s.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double sq = 0.0;
        for (double v : values) sq += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
        s.stderror = s.stddev / std::sqrt(static_cast<double>(values.size()));
    }
    return s;
}

// Quantile of a sorted sample by linear interpolation at rank p (count-1).
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) throw DomainError("quantile of an empty sample");
    const double rank = p * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(rank);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = rank - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

namespace detail {

// Regularized upper incomplete gamma Q(a, x), series / continued fraction.
inline double gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw DomainError("gamma_q: bad arguments");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) {
        // P(a,x) by series, Q = 1 - P
        double ap = a, del = 1.0 / a, sum = del;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-15) break;
        }
        return 1.0 - sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    // Q(a,x) by Lentz continued fraction
    double b = x + 1.0 - a, c = 1e300, d = 1.0 / b, h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < 1e-300) d = 1e-300;
        c = b + an / c;
        if (std::abs(c) < 1e-300) c = 1e-300;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace detail

// p-value of a chi-square statistic with the given degrees of freedom.
inline double chi2_pvalue(double chi2, std::int64_t dof) {
    if (dof < 1) throw DomainError("chi2_pvalue: dof must be >= 1");
    return detail::gamma_q(static_cast<double>(dof) / 2.0, chi2 / 2.0);
}

struct Chi2Result {
    double chi2 = 0.0;
    std::int64_t dof = 0;
    double p_value = 1.0;
    std::int64_t pooled_cells = 0;
};

// Goodness of fit of observed counts against cell probabilities. Cells with
// expected count below `min_expected` are pooled (ascending by expectation)
// into one remainder cell to keep the chi-square approximation sound.
inline Chi2Result chi2_goodness_of_fit(const std::vector<std::int64_t>& observed,
                                       const std::vector<double>& probs,
                                       double min_expected = 5.0) {
    if (observed.size() != probs.size() || observed.empty())
        throw DomainError("chi2_goodness_of_fit: mismatched cells");
    std::int64_t total = 0;
    for (std::int64_t o : observed) total += o;
    const double n = static_cast<double>(total);

    std::vector<std::size_t> order(observed.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return probs[a] < probs[b]; });

    Chi2Result r;
    double pooled_expected = 0.0;
    std::int64_t pooled_observed = 0;
    std::int64_t cells = 0;
    std::size_t i = 0;
    for (; i < order.size(); ++i) {
        pooled_expected += probs[order[i]] * n;
        pooled_observed += observed[order[i]];
        if (pooled_expected >= min_expected) {
            ++i;
            break;
        }
        ++r.pooled_cells;
    }
    if (pooled_expected > 0.0) {
        const double d = static_cast<double>(pooled_observed) - pooled_expected;
        r.chi2 += d * d / pooled_expected;
        ++cells;
    }
    for (; i < order.size(); ++i) {
        const double expected = probs[order[i]] * n;
        const double d = static_cast<double>(observed[order[i]]) - expected;
        r.chi2 += d * d / expected;
        ++cells;
    }
    r.dof = std::max<std::int64_t>(cells - 1, 1);
    r.p_value = chi2_pvalue(r.chi2, r.dof);
    return r;
}

// Two-sample chi-square over shared cells; cells where both samples are
// small are pooled.
inline Chi2Result chi2_two_sample(const std::vector<std::int64_t>& a,
                                  const std::vector<std::int64_t>& b,
                                  double min_combined = 10.0) {
    if (a.size() != b.size() || a.empty()) throw DomainError("chi2_two_sample: mismatched cells");
    double na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        na += static_cast<double>(a[i]);
        nb += static_cast<double>(b[i]);
    }
    const double ra = std::sqrt(nb / na), rb = std::sqrt(na / nb);

    std::vector<std::size_t> order(a.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return a[x] + b[x] < a[y] + b[y];
    });

    Chi2Result r;
    double pa = 0.0, pb = 0.0;
    std::int64_t cells = 0;
    std::size_t i = 0;
    for (; i < order.size(); ++i) {
        pa += static_cast<double>(a[order[i]]);
        pb += static_cast<double>(b[order[i]]);
        if (pa + pb >= min_combined) {
            ++i;
            break;
        }
        ++r.pooled_cells;
    }
    if (pa + pb > 0.0) {
        const double d = ra * pa - rb * pb;
        r.chi2 += d * d / (pa + pb);
        ++cells;
    }
    for (; i < order.size(); ++i) {
        const double ca = static_cast<double>(a[order[i]]);
        const double cb = static_cast<double>(b[order[i]]);
        if (ca + cb == 0.0) continue;
        const double d = ra * ca - rb * cb;
        r.chi2 += d * d / (ca + cb);
        ++cells;
    }
    r.dof = std::max<std::int64_t>(cells - 1, 1);
    r.p_value = chi2_pvalue(r.chi2, r.dof);
    return r;
}

// Kolmogorov-Smirnov distance between a sample and a reference CDF.
inline double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) throw DomainError("ks_distance: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    }
    return d;
}

// Total variation distance between two pmfs on a shared index set.
inline double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
    const std::size_t m = std::max(p.size(), q.size());
    double tv = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double pi = i < p.size() ? p[i] : 0.0;
        const double qi = i < q.size() ? q[i] : 0.0;
        tv += std::abs(pi - qi);
    }
    return tv / 2.0;
}

}  // namespace gw
