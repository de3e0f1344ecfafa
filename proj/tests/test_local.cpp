// Local restrictions of pseudo-distributions, full-distribution extraction,
// truncated indicators, and conditional selection weights.  Expected masses
// come from explicit distributions built in the oracle helpers.
#include <cmath>
#include <map>
#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "sosgap/local.hpp"
#include "support/oracles.hpp"

using namespace sosgap;

namespace {

std::map<Subset, double> uniform_weights(int n) {
    std::map<Subset, double> w;
    for (Subset p = 0; p < (Subset{1} << n); ++p) w[p] = std::ldexp(1.0, -n);
    return w;
}

}  // namespace

TEST_CASE("restriction of the uniform distribution to one coordinate") {
    const MomentVector mv =
        oracle::distribution_moments(BasisConvention::ZeroOne, 2, 2, uniform_weights(2));
    const LocalDistribution local = restrict_local(mv, 0b01);

    REQUIRE(local.support_set == 0b01);
    REQUIRE(local.convention == BasisConvention::ZeroOne);
    REQUIRE(local.mass.size() == 2);
    REQUIRE(local(0) == Catch::Approx(0.5).margin(1e-12));
    REQUIRE(local(0b01) == Catch::Approx(0.5).margin(1e-12));
    REQUIRE(local.total() == Catch::Approx(1.0).margin(1e-12));

    // The restriction reproduces the moments within S: gamma_{0} is the mass
    // of the points where coordinate 0 is selected.
    REQUIRE(local(0b01) == Catch::Approx(mv.moment(0b01)).margin(1e-12));

    // Points outside the support set are a caller error, not silently zero.
    REQUIRE_THROWS_AS(local(0b10), std::invalid_argument);
}

TEST_CASE("restriction and extraction recover a point mass") {
    const MomentVector mv =
        oracle::distribution_moments(BasisConvention::ZeroOne, 2, 4, {{0b11, 1.0}});

    const LocalDistribution local = restrict_local(mv, 0b11);
    REQUIRE(local(0b11) == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(local(0b00) == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(local(0b01) == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(local(0b10) == Catch::Approx(0.0).margin(1e-12));

    const std::map<Subset, double> points = extract_full_distribution(mv);
    REQUIRE(points.size() == 4);
    REQUIRE(points.at(0b11) == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(points.at(0b00) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("extraction inverts the moment map for genuine distributions") {
    std::mt19937_64 rng(41);
    for (BasisConvention conv : {BasisConvention::ZeroOne, BasisConvention::PlusMinus}) {
        for (int trial = 0; trial < 20; ++trial) {
            const int n = 2;
            const std::map<Subset, double> weights = oracle::random_distribution(rng, n);
            const MomentVector mv = oracle::distribution_moments(conv, n, 2 * n, weights);

            const std::map<Subset, double> recovered = extract_full_distribution(mv);
            for (const auto& [point, w] : weights)
                REQUIRE(recovered.at(point) == Catch::Approx(w).margin(1e-10));

            // Restriction to S = {0} gives the marginal of coordinate 0.
            const LocalDistribution marginal = restrict_local(mv, 0b01);
            REQUIRE(marginal(0b01) ==
                    Catch::Approx(weights.at(0b01) + weights.at(0b11)).margin(1e-10));
            REQUIRE(marginal(0b00) ==
                    Catch::Approx(weights.at(0b00) + weights.at(0b10)).margin(1e-10));
            REQUIRE(marginal.total() == Catch::Approx(1.0).margin(1e-10));
        }
    }
}

TEST_CASE("restriction and extraction argument checks") {
    const MomentVector shallow(BasisConvention::ZeroOne, 3, 2, {{0, 1.0}});
    // |S| = 2 exceeds the half degree t = 1.
    REQUIRE_THROWS_AS(restrict_local(shallow, 0b011), std::domain_error);
    // S mentions a variable outside the range.
    const MomentVector tiny(BasisConvention::ZeroOne, 2, 2, {{0, 1.0}});
    REQUIRE_THROWS_AS(restrict_local(tiny, 0b100), std::invalid_argument);

    // Extraction needs the full degree 2n.
    REQUIRE_THROWS_AS(extract_full_distribution(tiny), std::domain_error);
    // ... and refuses n > 4 even when the degree is available.
    const MomentVector wide(BasisConvention::ZeroOne, 5, 10, {{0, 1.0}});
    REQUIRE_THROWS_AS(extract_full_distribution(wide), std::invalid_argument);
}

TEST_CASE("truncated indicator drops exactly the high-degree terms") {
    // Indicator of "nothing selected among {0,1}" is 1 - x0 - x1 + x0*x1.
    const MomentVector deep(BasisConvention::ZeroOne, 2, 4, {{0, 1.0}});
    Polynomial expected = Polynomial::constant(BasisConvention::ZeroOne, 2, 1.0);
    expected -= Polynomial::variable(BasisConvention::ZeroOne, 2, 0);
    expected -= Polynomial::variable(BasisConvention::ZeroOne, 2, 1);
    REQUIRE(truncated_indicator(deep, 0b11, 0) == expected);  // half degree 2: drops x0*x1

    const MomentVector flat(BasisConvention::ZeroOne, 2, 2, {{0, 1.0}});
    REQUIRE(truncated_indicator(flat, 0b11, 0) ==
            Polynomial::constant(BasisConvention::ZeroOne, 2, 1.0));  // half degree 1
}

TEST_CASE("conditional weights on pinned distributions") {
    // Uniform over {0,1}^2 at full degree: conditioning on x0 = 1 leaves
    // coordinate 1 uniform, so the weight of item 1 is 1/2.
    const MomentVector uniform =
        oracle::distribution_moments(BasisConvention::ZeroOne, 2, 4, uniform_weights(2));
    REQUIRE(conditional_weight(uniform, 0b01, 0b01, 1) == Catch::Approx(0.5).margin(1e-12));

    // Point mass at the empty set: the conditioning event x0 = 1 has zero
    // mass, so the degenerate-denominator rule yields 0.
    const MomentVector empty_point =
        oracle::distribution_moments(BasisConvention::ZeroOne, 2, 4, {{0b00, 1.0}});
    REQUIRE(conditional_weight(empty_point, 0b01, 0b01, 1) == 0.0);

    // At half degree 1 the indicator of {x0 = 1, x1 = 0} truncates to the
    // zero polynomial, which also lands in the degenerate-denominator rule.
    const MomentVector flat =
        oracle::distribution_moments(BasisConvention::ZeroOne, 2, 2, uniform_weights(2));
    REQUIRE(conditional_weight(flat, 0b11, 0b01, 0) == 0.0);
}

TEST_CASE("conditional weight argument checks") {
    const MomentVector mv(BasisConvention::ZeroOne, 2, 2, {{0, 1.0}});
    REQUIRE_THROWS_AS(conditional_weight(mv, 0b01, 0b01, 2), std::invalid_argument);
    REQUIRE_THROWS_AS(conditional_weight(mv, 0b01, 0b01, -1), std::invalid_argument);
    // U must be contained in S.
    REQUIRE_THROWS_AS(conditional_weight(mv, 0b01, 0b10, 0), std::invalid_argument);
}
