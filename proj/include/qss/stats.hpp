#ifndef QSS_STATS_HPP
#define QSS_STATS_HPP

// Small statistics toolbox: chi-square goodness-of-fit and homogeneity
// tests, Wilson score intervals, total-variation distance.

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "qss/errors.hpp"

namespace qss {

namespace stats {

// Regularized lower incomplete gamma P(a, x) by series / continued fraction.
inline double gamma_p(double a, double x) {
    if (x < 0 || a <= 0) throw Error("gamma_p domain");
    if (x == 0) return 0;
    double gln = std::lgamma(a);
    if (x < a + 1.0) {
        double ap = a, sum = 1.0 / a, del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::fabs(del) < std::fabs(sum) * 1e-14) break;
        }
        return sum * std::exp(-x + a * std::log(x) - gln);
    }
    // continued fraction for Q(a,x)
    double b = x + 1.0 - a, c = 1e300, d = 1.0 / b, h = d;
    for (int i = 1; i < 500; ++i) {
        double an = -double(i) * (double(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < 1e-300) d = 1e-300;
        c = b + an / c;
        if (std::fabs(c) < 1e-300) c = 1e-300;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-14) break;
    }
    return 1.0 - std::exp(-x + a * std::log(x) - gln) * h;
}

// Survival function of the chi-square distribution.
inline double chi2_sf(double stat, double dof) {
    return 1.0 - gamma_p(dof / 2.0, stat / 2.0);
}

// Goodness-of-fit p-value of observed counts against uniform expectation.
inline double chi2_uniform_pvalue(const std::vector<std::uint64_t>& counts) {
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    if (total == 0 || counts.size() < 2) return 1.0;
    double expect = double(total) / double(counts.size());
    double stat = 0;
    for (auto c : counts) {
        double d = double(c) - expect;
        stat += d * d / expect;
    }
    return chi2_sf(stat, double(counts.size() - 1));
}

// Two-sample homogeneity test over arbitrary outcome labels; rare cells are
// pooled so expected counts stay reasonable.
template <typename Key>
inline double chi2_two_sample_pvalue(const std::map<Key, std::uint64_t>& a,
                                     const std::map<Key, std::uint64_t>& b,
                                     double min_expected = 5.0) {
    std::map<Key, std::pair<std::uint64_t, std::uint64_t>> cells;
    for (const auto& [k, v] : a) cells[k].first += v;
    for (const auto& [k, v] : b) cells[k].second += v;
    double na = 0, nb = 0;
    for (const auto& [k, v] : cells) {
        na += double(v.first);
        nb += double(v.second);
    }
    if (na == 0 || nb == 0) return 1.0;
    double total = na + nb;
    double stat = 0;
    double pool_a = 0, pool_b = 0, pool_tot = 0;
    std::size_t dof_cells = 0;
    for (const auto& [k, v] : cells) {
        double row = double(v.first + v.second);
        if (row * na / total < min_expected || row * nb / total < min_expected) {
            pool_a += double(v.first);
            pool_b += double(v.second);
            pool_tot += row;
            continue;
        }
        double ea = row * na / total, eb = row * nb / total;
        stat += (double(v.first) - ea) * (double(v.first) - ea) / ea;
        stat += (double(v.second) - eb) * (double(v.second) - eb) / eb;
        ++dof_cells;
    }
    if (pool_tot > 0) {
        double ea = pool_tot * na / total, eb = pool_tot * nb / total;
        if (ea >= min_expected && eb >= min_expected) {
            stat += (pool_a - ea) * (pool_a - ea) / ea;
            stat += (pool_b - eb) * (pool_b - eb) / eb;
            ++dof_cells;
        }
    }
    if (dof_cells < 2) return 1.0;
    return chi2_sf(stat, double(dof_cells - 1));
}

struct WilsonInterval {
    double lo = 0, hi = 1;
};

// Wilson score interval; z = 2.576 gives 99% coverage.
inline WilsonInterval wilson(std::uint64_t successes, std::uint64_t trials,
                             double z = 2.576) {
    if (trials == 0) return {};
    double n = double(trials), ph = double(successes) / n, z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (ph + z2 / (2 * n)) / denom;
    double margin = z * std::sqrt(ph * (1 - ph) / n + z2 / (4 * n * n)) / denom;
    return {std::max(0.0, center - margin), std::min(1.0, center + margin)};
}

inline double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size()) throw Error("distribution size mismatch");
    double s = 0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::fabs(p[i] - q[i]);
    return s / 2.0;
}

}  // namespace stats

}  // namespace qss

#endif
