#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "wigner/quantum.hpp"

using namespace wigner;

namespace {

// Exact double integral of 2 sin^2(l (x - y)) over every pair of open slits,
// using the antiderivative cos(k (x - y)) / k^2 of cos(k (x - y)).
double corner_oracle(int l, double w, double phi_o) {
    const double k = 2.0 * l;
    const double len = kPi * w / l;
    double total = 0.0;
    for (int n = 0; n < 2 * l; ++n) {
        const double a = kPi * n / l, b = a + len;
        for (int m = 0; m < 2 * l; ++m) {
            const double c = kPi * m / l + phi_o, d = c + len;
            const auto f = [k](double x, double y) { return std::cos(k * (x - y)) / (k * k); };
            const double cos_part = f(b, d) - f(b, c) - f(a, d) + f(a, c);
            total += len * len - cos_part;
        }
    }
    return total / (4.0 * kPi * kPi);
}

// Midpoint rule on the product grid, evaluated pair by pair.
double midpoint_oracle(int l, double w, double phi_o, int n) {
    const double len = kPi * w / l;
    const double h = len / n;
    double total = 0.0;
    for (int s = 0; s < 2 * l; ++s) {
        for (int t = 0; t < 2 * l; ++t) {
            for (int i = 0; i < n; ++i) {
                const double x = kPi * s / l + (i + 0.5) * h;
                for (int j = 0; j < n; ++j) {
                    const double y = kPi * t / l + phi_o + (j + 0.5) * h;
                    const double v = std::sin(l * (x - y));
                    total += 2.0 * v * v * h * h;
                }
            }
        }
    }
    return total / (4.0 * kPi * kPi);
}

}  // namespace

TEST_CASE("singlet law") {
    CHECK(singlet_probability(0, 0) == 0.0);
    CHECK(singlet_probability(0, 90) == doctest::Approx(1.0));
    CHECK(singlet_probability(10, 40) == doctest::Approx(0.25));
    const auto e = wigner_evaluation({0.0, 30.0, 60.0});
    CHECK(std::abs(e.lhs - 0.75) <= 1e-12);
    CHECK(std::abs(e.rhs - 0.5) <= 1e-12);
    CHECK_FALSE(e.satisfied);
    CHECK(wigner_evaluation({0.0, 0.0, 0.0}).satisfied);
}

TEST_CASE("violation scan") {
    const auto scan = max_violation_scan(1.0);
    CHECK(scan.angles.theta1 == 0.0);
    CHECK(scan.angles.theta2 == 30.0);
    CHECK(scan.angles.theta3 == 60.0);
    CHECK(scan.margin == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(scan.evaluated == 180u * 180u);
    CHECK(max_violation_scan(5.0).margin == doctest::Approx(0.25));
    CHECK_THROWS_AS(max_violation_scan(0.0), std::invalid_argument);
    CHECK_THROWS_AS(max_violation_scan(6.0), std::invalid_argument);
}

TEST_CASE("OAM coincidence law") {
    CHECK(oam_coincidence(100, 0.0, 0.0) == 1.0);
    CHECK(oam_coincidence(100, kPi / 200.0, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(oam_coincidence(3, 0.2, 0.1) == doctest::Approx(std::pow(std::cos(0.3), 2)));
}

TEST_CASE("Gauss-Legendre rule integrates polynomials exactly") {
    for (int n : {1, 2, 5, 16, 64}) {
        const auto rule = gauss_legendre(n);
        double wsum = 0.0;
        for (double w : rule.weights) wsum += w;
        CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
        for (int p = 0; p <= 2 * n - 1; ++p) {
            double q = 0.0;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) q += rule.weights[i] * std::pow(rule.nodes[i], p);
            const double exact = p % 2 ? 0.0 : 2.0 / (p + 1);
            CHECK(q == doctest::Approx(exact).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(gauss_legendre(0), std::invalid_argument);
}

TEST_CASE("slit-wheel extremes at W = 0.149") {
    const auto p = slitwheel_probability({100, 0.149, 0.0, 64});
    CHECK(p.p == p.p_min);
    CHECK(std::round(p.p_min * 1000) / 1000 == 0.002);
    CHECK(std::round(p.p_max * 1000) / 1000 == 0.043);
    CHECK(p.p_min == doctest::Approx(0.0015748855534066658).epsilon(1e-15));
    CHECK(p.p_max == doctest::Approx(0.04282711444659333).epsilon(1e-15));
    CHECK(slitwheel_probability({1, 0.999, 0.0, 64}).p == doctest::Approx(0.998).epsilon(1e-8));
}

TEST_CASE("closed form agrees with the exact slit-pair integral") {
    for (int l : {1, 10, 100}) {
        for (double w : {0.1, 0.149, 0.5}) {
            for (int k = 0; k < 8; ++k) {
                const double phi = kPi / l * k / 8.0;
                const double closed = slitwheel_probability({l, w, phi, 64}).p;
                CHECK(closed == doctest::Approx(corner_oracle(l, w, phi)).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("quadrature agrees with the closed form to 1e-6 relative") {
    for (int l : {1, 10, 100}) {
        for (double w : {0.1, 0.149, 0.5}) {
            for (int k = 0; k < 8; ++k) {
                const SlitWheelConfig c{l, w, kPi / l * k / 8.0, 64};
                const double closed = slitwheel_probability(c).p;
                const double numeric = slitwheel_probability_numeric(c);
                CHECK(std::abs(numeric - closed) / closed <= 1e-6);
            }
        }
    }
}

TEST_CASE("quadrature agrees with a brute-force midpoint sum for small l") {
    for (int l : {1, 2}) {
        for (double phi : {0.0, 0.3, 1.0}) {
            const double q = slitwheel_quadrature({l, 0.3, phi, 64}, 32);
            CHECK(q == doctest::Approx(midpoint_oracle(l, 0.3, phi, 200)).epsilon(1e-4));
        }
    }
}

TEST_CASE("slit-wheel invariants") {
    SUBCASE("periodic in pi / l") {
        for (int l : {1, 7, 100}) {
            const double a = slitwheel_probability({l, 0.2, 0.013, 64}).p;
            const double b = slitwheel_probability({l, 0.2, 0.013 + kPi / l, 64}).p;
            CHECK(a == doctest::Approx(b).epsilon(1e-12));
        }
    }
    SUBCASE("period average is W^2") {
        for (int l : {1, 100}) {
            for (double w : {0.1, 0.149, 0.8}) {
                const auto curve = fringe_curve(l, w, 1001);
                double mean = 0.0;
                for (std::size_t i = 0; i + 1 < curve.size(); ++i) mean += curve[i].probability;
                mean /= static_cast<double>(curve.size() - 1);
                CHECK(mean == doctest::Approx(w * w).epsilon(1e-12));
            }
        }
    }
    SUBCASE("extremes bracket the curve") {
        const auto p = slitwheel_probability({100, 0.149, 0.0, 64});
        for (const auto& s : fringe_curve(100, 0.149, 101)) {
            CHECK(s.probability >= p.p_min - 1e-15);
            CHECK(s.probability <= p.p_max + 1e-15);
        }
    }
    SUBCASE("validation") {
        CHECK_THROWS_AS(slitwheel_probability({0, 0.1, 0.0, 64}), std::invalid_argument);
        CHECK_THROWS_AS(slitwheel_probability({1, 1.0, 0.0, 64}), std::invalid_argument);
        CHECK_THROWS_AS(slitwheel_probability({1, 0.0, 0.0, 64}), std::invalid_argument);
        CHECK_THROWS_AS(slitwheel_probability_numeric({1, 0.5, 0.0, 8}), std::invalid_argument);
        CHECK_THROWS_AS(fringe_curve(1, 0.5, 1), std::invalid_argument);
    }
}

TEST_CASE("fringe CSV") {
    const auto curve = fringe_curve(100, 0.149, 3);
    const std::string csv = fringe_csv(curve);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "phi_o_rad,probability");
    int rows = 0;
    while (std::getline(in, line)) {
        const auto comma = line.find(',');
        REQUIRE(comma != std::string::npos);
        CHECK(std::stod(line.substr(comma + 1)) == curve[static_cast<std::size_t>(rows)].probability);
        ++rows;
    }
    CHECK(rows == 3);
    CHECK(curve.back().phi_o == doctest::Approx(kPi / 100));
}

TEST_CASE("equivalent singlet angle") {
    CHECK(equivalent_singlet_angle_deg(100, 0.3) == doctest::Approx(30.0));
    CHECK(equivalent_singlet_angle_deg(100, 0.6) == doctest::Approx(60.0));
}
