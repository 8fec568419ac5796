#pragma once

// Quantum predictions: the singlet coincidence law and the slit-wheel
// detection model for the |l,-l> + |-l,l> OAM state.
//
// Singlet angles are degrees. Slit-wheel angles are radians here; the CLI
// converts from degrees.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "wigner/inequality.hpp"

namespace wigner {

inline constexpr double kPi = 3.14159265358979323846;

constexpr double deg_to_rad(double deg) noexcept { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) noexcept { return rad * 180.0 / kPi; }

struct AngleTriple {
    double theta1 = 0.0;  // degrees
    double theta2 = 0.0;
    double theta3 = 0.0;
};

/// sin^2(theta_a - theta_b), angles in degrees.
double singlet_probability(double theta_a_deg, double theta_b_deg);

InequalityEvaluation wigner_evaluation(const AngleTriple& t);

struct ViolationScan {
    AngleTriple angles;
    double margin = 0.0;
    std::size_t evaluated = 0;
};

/// Exhaustive grid over theta2, theta3 in [0, 180) with theta1 = 0. Ties are
/// resolved in favour of the first triple in scan order (theta2 outer,
/// theta3 inner, both ascending). Throws std::invalid_argument unless
/// 0 < grid_step_deg <= 5.
ViolationScan max_violation_scan(double grid_step_deg);

/// cos^2(l (phi_a - phi_b)), radians.
double oam_coincidence(int l, double phi_a, double phi_b);

struct SlitWheelConfig {
    int l = 1;
    double slit_width_fraction = 0.5;
    double relative_angle = 0.0;  // radians; 0 is the coincidence minimum
    int quadrature_points = 64;   // Gauss-Legendre nodes per slit

    /// Throws std::invalid_argument on l < 1, W outside (0, 1) or fewer than
    /// 16 quadrature points.
    void validate() const;
};

struct SlitWheelPrediction {
    double p = 0.0;
    double p_min = 0.0;
    double p_max = 0.0;
};

/// Closed form P = W^2 - cos(2 l phi_o) sin^2(pi W) / pi^2.
SlitWheelPrediction slitwheel_probability(const SlitWheelConfig& c);

class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Quadrature of the joint angular density over the 2l slits of each wheel,
/// evaluated at `quadrature_points` and again at twice that. Throws
/// ConvergenceError if the two differ by more than 1e-8.
double slitwheel_probability_numeric(const SlitWheelConfig& c);

/// Same product-grid quadrature at a fixed node count, without the
/// convergence check.
double slitwheel_quadrature(const SlitWheelConfig& c, int points_per_slit);

struct FringeSample {
    double phi_o = 0.0;  // radians
    double probability = 0.0;
};

/// n_points samples of the closed form, evenly spaced over [0, pi/l]
/// inclusive. Throws for n_points < 2.
std::vector<FringeSample> fringe_curve(int l, double slit_width_fraction, int n_points);

/// CSV with header "phi_o_rad,probability" and 17 significant digits.
std::string fringe_csv(const std::vector<FringeSample>& curve);

/// Maps a wheel setting to the singlet angle with the same fringe phase:
/// the fringe phase 2 l phi equals twice the singlet angle, so theta = l phi.
/// This is an interpretation of the OAM settings, not a derived law.
constexpr double equivalent_singlet_angle_deg(int l, double wheel_angle_deg) noexcept {
    return l * wheel_angle_deg;
}

/// Gauss-Legendre nodes and weights on [-1, 1] via Newton iteration on P_n.
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussLegendreRule gauss_legendre(int n);

}  // namespace wigner
