#include "hyperproc/mixing.hpp"

#include <cmath>
#include <string>

#include "hyperproc/errors.hpp"

namespace hyperproc {

MixingDistribution::MixingDistribution(std::vector<double> coeffs, bool is_probability)
    : coeffs_(std::move(coeffs)), is_probability_(is_probability) {
    while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
    for (size_t i = 0; i < coeffs_.size(); ++i) {
        if (!(coeffs_[i] >= 0.0)) {
            throw DomainError("mixing coefficient rho_" + std::to_string(i + 1) +
                              " must be non-negative");
        }
    }
}

MixingDistribution MixingDistribution::probability(std::vector<double> coeffs) {
    MixingDistribution m(std::move(coeffs), true);
    const double total = m.total_mass();
    if (std::abs(total - 1.0) > 1e-9) {
        throw DomainError("probability coefficients must sum to 1 (got " +
                          std::to_string(total) + ")");
    }
    return m;
}

MixingDistribution MixingDistribution::intensity(std::vector<double> coeffs) {
    return MixingDistribution(std::move(coeffs), false);
}

double MixingDistribution::coeff(int k) const {
    if (k < 1 || k > static_cast<int>(coeffs_.size())) return 0.0;
    return coeffs_[static_cast<size_t>(k - 1)];
}

double MixingDistribution::total_mass() const {
    double total = 0.0;
    for (double c : coeffs_) total += c;
    return total;
}

MixingDistribution::Eval MixingDistribution::eval(double x) const {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw DomainError("generating function argument outside [0,1]: " +
                          std::to_string(x));
    }
    // Horner on p(x) = sum_k rho_k x^k with simultaneous derivatives.
    double v = 0.0, d1 = 0.0, d2 = 0.0;
    for (size_t i = coeffs_.size(); i-- > 0;) {
        d2 = d2 * x + 2.0 * d1;
        d1 = d1 * x + v;
        v = v * x + coeffs_[i];
    }
    // So far v = p(x)/x at the monomial offset; multiply the missing x in.
    d2 = d2 * x + 2.0 * d1;
    d1 = d1 * x + v;
    v = v * x;
    return {v, d1, d2};
}

MixingDistribution MixingDistribution::scaled(double t) const {
    std::vector<double> scaled_coeffs(coeffs_.size());
    for (size_t i = 0; i < coeffs_.size(); ++i) scaled_coeffs[i] = t * coeffs_[i];
    return intensity(std::move(scaled_coeffs));
}

void MixingDistribution::require_process_usable() const {
    if (coeff(1) + coeff(2) <= 0.0) {
        throw DomainError("process theory requires rho_1 + rho_2 > 0");
    }
}

std::vector<double> MixingDistribution::cardinality_cdf() const {
    std::vector<double> cdf(coeffs_.size());
    double acc = 0.0;
    for (size_t i = 0; i < coeffs_.size(); ++i) {
        acc += coeffs_[i];
        cdf[i] = acc;
    }
    return cdf;
}

} // namespace hyperproc
