#ifndef HYPERPROC_MIXING_HPP
#define HYPERPROC_MIXING_HPP

#include <vector>

namespace hyperproc {

// Finite cardinality mixture {rho_k} (k >= 1), either a probability
// distribution over hyperedge sizes or a general non-negative intensity
// sequence {beta_k}. Evaluation of the generating function
// rho(x) = sum_k rho_k x^k and its first two derivatives is exact
// polynomial arithmetic.
class MixingDistribution {
public:
    struct Eval {
        double value;
        double d1;
        double d2;
    };

    // coeffs[i] is the weight of cardinality i+1.
    static MixingDistribution probability(std::vector<double> coeffs);
    static MixingDistribution intensity(std::vector<double> coeffs);

    bool is_probability() const { return is_probability_; }
    int max_cardinality() const { return static_cast<int>(coeffs_.size()); }
    double coeff(int k) const;  // rho_k; zero outside the support
    double rho1() const { return coeff(1); }
    double rho2() const { return coeff(2); }
    double total_mass() const;
    const std::vector<double>& coeffs() const { return coeffs_; }

    Eval eval(double x) const;          // DomainError outside [0,1]
    double derivative(double x) const { return eval(x).d1; }

    // beta = t * rho, as a general intensity.
    MixingDistribution scaled(double t) const;

    // Validates rho1 + rho2 > 0 (required by the process limit theory).
    void require_process_usable() const;

    // Cumulative weights for sampling a cardinality; last entry is the
    // total mass.
    std::vector<double> cardinality_cdf() const;

private:
    MixingDistribution(std::vector<double> coeffs, bool is_probability);

    std::vector<double> coeffs_;
    bool is_probability_;
};

} // namespace hyperproc

#endif
