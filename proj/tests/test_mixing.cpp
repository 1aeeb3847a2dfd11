#include <doctest.h>

#include <cmath>

#include "hyperproc/errors.hpp"
#include "hyperproc/mixing.hpp"

using namespace hyperproc;

TEST_CASE("generating function evaluation") {
    const auto square = MixingDistribution::probability({0.0, 1.0});  // x^2
    const auto e = square.eval(0.5);
    CHECK(e.value == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(e.d1 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(e.d2 == doctest::Approx(2.0).epsilon(1e-15));

    const auto cubic = MixingDistribution::probability({0.2, 0.0, 0.8});
    const auto at0 = cubic.eval(0.0);
    CHECK(at0.value == 0.0);
    CHECK(at0.d1 == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(at0.d2 == 0.0);
}

TEST_CASE("probability mixtures evaluate to 1 at x=1") {
    for (auto coeffs : {std::vector<double>{1.0},
                        std::vector<double>{0.25, 0.5, 0.25},
                        std::vector<double>{0.1, 0.2, 0.3, 0.4}}) {
        const auto m = MixingDistribution::probability(coeffs);
        CHECK(m.eval(1.0).value == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("validation") {
    CHECK_THROWS_AS(MixingDistribution::probability({0.5, 0.4}), DomainError);
    CHECK_THROWS_AS(MixingDistribution::probability({1.5, -0.5}), DomainError);
    CHECK_THROWS_AS(MixingDistribution::intensity({-0.1}), DomainError);
    const auto m = MixingDistribution::probability({1.0});
    CHECK_THROWS_AS(m.eval(-0.1), DomainError);
    CHECK_THROWS_AS(m.eval(1.1), DomainError);
    CHECK_THROWS_AS(MixingDistribution::intensity({0.0, 0.0, 1.0}).require_process_usable(),
                    DomainError);
    CHECK_NOTHROW(MixingDistribution::probability({0.0, 1.0}).require_process_usable());
}

TEST_CASE("scaling and accessors") {
    const auto rho = MixingDistribution::probability({0.3, 0.7});
    const auto beta = rho.scaled(0.4);
    CHECK_FALSE(beta.is_probability());
    CHECK(beta.coeff(1) == doctest::Approx(0.12));
    CHECK(beta.coeff(2) == doctest::Approx(0.28));
    CHECK(beta.coeff(3) == 0.0);
    CHECK(rho.max_cardinality() == 2);
    CHECK(rho.rho1() == doctest::Approx(0.3));
    CHECK(rho.rho2() == doctest::Approx(0.7));

    const auto cdf = rho.cardinality_cdf();
    REQUIRE(cdf.size() == 2);
    CHECK(cdf[0] == doctest::Approx(0.3));
    CHECK(cdf[1] == doctest::Approx(1.0));
}

TEST_CASE("trailing zero coefficients are trimmed") {
    const auto m = MixingDistribution::intensity({0.5, 0.0, 0.0});
    CHECK(m.max_cardinality() == 1);
}
