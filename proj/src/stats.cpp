#include "hyperproc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "hyperproc/errors.hpp"

namespace hyperproc {

HistogramComparison compare_histogram_to_pmf(
    const std::map<long long, long long>& counts, long long lo, long long hi,
    const std::function<double(long long)>& target_pmf) {
    if (counts.empty()) throw EmptySample("empty histogram");
    if (lo > hi) throw DomainError("window is empty");
    HistogramComparison cmp;
    for (const auto& [value, count] : counts) cmp.sample_count += count;

    double target_inside = 0.0;
    double half_l1 = 0.0;
    const double n = static_cast<double>(cmp.sample_count);
    for (long long v = lo; v <= hi; ++v) {
        const auto it = counts.find(v);
        const double empirical =
            it == counts.end() ? 0.0 : static_cast<double>(it->second) / n;
        const double target = target_pmf(v);
        target_inside += target;
        half_l1 += std::abs(empirical - target);
    }
    long long outside = 0;
    for (const auto& [value, count] : counts) {
        if (value < lo || value > hi) outside += count;
    }
    cmp.tv_distance = 0.5 * half_l1;
    cmp.empirical_outside = static_cast<double>(outside) / n;
    cmp.target_outside = std::max(0.0, 1.0 - target_inside);
    return cmp;
}

double tv_between_histograms(const std::map<long long, long long>& a,
                             const std::map<long long, long long>& b) {
    if (a.empty() || b.empty()) throw EmptySample("empty histogram");
    double na = 0.0, nb = 0.0;
    for (const auto& [v, c] : a) na += static_cast<double>(c);
    for (const auto& [v, c] : b) nb += static_cast<double>(c);
    std::set<long long> support;
    for (const auto& [v, c] : a) support.insert(v);
    for (const auto& [v, c] : b) support.insert(v);
    double half_l1 = 0.0;
    for (long long v : support) {
        const auto ia = a.find(v);
        const auto ib = b.find(v);
        const double pa = ia == a.end() ? 0.0 : static_cast<double>(ia->second) / na;
        const double pb = ib == b.end() ? 0.0 : static_cast<double>(ib->second) / nb;
        half_l1 += std::abs(pa - pb);
    }
    return 0.5 * half_l1;
}

double atom_z_score(long long hits, long long trials, double p) {
    if (trials <= 0) throw EmptySample("no trials");
    if (!(p > 0.0 && p < 1.0)) throw DomainError("atom probability must be in (0,1)");
    const double n = static_cast<double>(trials);
    const double se = std::sqrt(p * (1.0 - p) / n);
    return (static_cast<double>(hits) / n - p) / se;
}

double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf) {
    if (samples.empty()) throw EmptySample("no samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double stat = 0.0;
    for (size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        stat = std::max(stat, std::abs(static_cast<double>(i + 1) / n - f));
        stat = std::max(stat, std::abs(f - static_cast<double>(i) / n));
    }
    return stat;
}

// Series for x < a+1, continued fraction otherwise (Lentz).
double regularized_gamma_p(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw DomainError("gamma P needs a > 0, x >= 0");
    if (x == 0.0) return 0.0;
    const double lg = std::lgamma(a);
    if (x < a + 1.0) {
        double term = 1.0 / a;
        double sum = term;
        double ap = a;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (std::abs(term) < std::abs(sum) * 1e-15) break;
        }
        return sum * std::exp(-x + a * std::log(x) - lg);
    }
    double b = x + 1.0 - a;
    double c = 1e300;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < 1e-300) d = 1e-300;
        c = b + an / c;
        if (std::abs(c) < 1e-300) c = 1e-300;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-15) break;
    }
    const double q = std::exp(-x + a * std::log(x) - lg) * h;
    return 1.0 - q;
}

double chi_square_upper_tail(double stat, double dof) {
    if (dof <= 0.0) return 1.0;
    if (stat <= 0.0) return 1.0;
    return 1.0 - regularized_gamma_p(0.5 * dof, 0.5 * stat);
}

ChiSquareResult chi_square_homogeneity(const std::map<std::string, long long>& a,
                                       const std::map<std::string, long long>& b,
                                       double min_expected) {
    if (a.empty() || b.empty()) throw EmptySample("empty sample");
    std::set<std::string> keys;
    for (const auto& [k, c] : a) keys.insert(k);
    for (const auto& [k, c] : b) keys.insert(k);

    // Pool sparse outcomes until each pooled bin is well populated.
    std::vector<std::pair<long long, long long>> bins;
    long long pool_a = 0, pool_b = 0;
    for (const auto& key : keys) {
        const auto ia = a.find(key);
        const auto ib = b.find(key);
        pool_a += ia == a.end() ? 0 : ia->second;
        pool_b += ib == b.end() ? 0 : ib->second;
        if (static_cast<double>(pool_a + pool_b) >= min_expected) {
            bins.emplace_back(pool_a, pool_b);
            pool_a = pool_b = 0;
        }
    }
    if (pool_a + pool_b > 0) {
        if (bins.empty()) {
            bins.emplace_back(pool_a, pool_b);
        } else {
            bins.back().first += pool_a;
            bins.back().second += pool_b;
        }
    }

    double total_a = 0.0, total_b = 0.0;
    for (const auto& [ca, cb] : bins) {
        total_a += static_cast<double>(ca);
        total_b += static_cast<double>(cb);
    }
    const double total = total_a + total_b;
    ChiSquareResult result;
    if (bins.size() < 2 || total_a == 0.0 || total_b == 0.0) return result;
    for (const auto& [ca, cb] : bins) {
        const double row = static_cast<double>(ca + cb);
        const double ea = row * total_a / total;
        const double eb = row * total_b / total;
        result.statistic += (static_cast<double>(ca) - ea) * (static_cast<double>(ca) - ea) / ea +
                            (static_cast<double>(cb) - eb) * (static_cast<double>(cb) - eb) / eb;
    }
    result.dof = static_cast<double>(bins.size() - 1);
    result.p_value = chi_square_upper_tail(result.statistic, result.dof);
    return result;
}

} // namespace hyperproc
