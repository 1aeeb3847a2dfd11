#ifndef HYPERPROC_STATS_HPP
#define HYPERPROC_STATS_HPP

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace hyperproc {

// Total-variation comparison of an integer-valued empirical histogram
// against a target pmf on the window [lo, hi]. Mass outside the window is
// reported, never silently dropped.
struct HistogramComparison {
    double tv_distance = 0.0;
    double empirical_outside = 0.0;  // fraction of samples below lo / above hi
    double target_outside = 0.0;     // target mass off the window
    long long sample_count = 0;
};

HistogramComparison compare_histogram_to_pmf(
    const std::map<long long, long long>& counts, long long lo, long long hi,
    const std::function<double(long long)>& target_pmf);

// TV distance between two empirical histograms over the union of their
// supports.
double tv_between_histograms(const std::map<long long, long long>& a,
                             const std::map<long long, long long>& b);

// Two-sided z-score of an observed hit frequency against P(hit) = p.
double atom_z_score(long long hits, long long trials, double p);

// Kolmogorov-Smirnov statistic of samples against a continuous cdf.
double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf);

// Regularized incomplete gamma P(a,x) and the chi-square upper tail,
// used for the sampler-equivalence homogeneity tests.
double regularized_gamma_p(double a, double x);
double chi_square_upper_tail(double stat, double dof);

// Two-sample homogeneity chi-square over matching bins. Bins are pooled
// greedily so every pooled bin holds at least min_expected counts in the
// combined data.
struct ChiSquareResult {
    double statistic = 0.0;
    double dof = 0.0;
    double p_value = 1.0;
};

ChiSquareResult chi_square_homogeneity(const std::map<std::string, long long>& a,
                                       const std::map<std::string, long long>& b,
                                       double min_expected = 10.0);

} // namespace hyperproc

#endif
