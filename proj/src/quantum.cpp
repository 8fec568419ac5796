#include "wigner/quantum.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <span>

namespace wigner {

namespace {

// Fixed-order pairwise reduction so results do not depend on how the
// per-slit partials were produced.
double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

struct WheelMoments {
    double measure = 0.0;  // sum of weights
    double cos_sum = 0.0;  // sum of w * cos(2 l phi)
    double sin_sum = 0.0;  // sum of w * sin(2 l phi)
};

// Moments of one wheel's detection region: 2l slits [pi n / l, pi (n + W) / l]
// shifted by `offset`, with every node relabelled by `state_shift`.
WheelMoments wheel_moments(int l, double width, double offset, double state_shift, const GaussLegendreRule& rule) {
    const auto slits = static_cast<std::size_t>(2 * l);
    std::vector<double> m(slits), c(slits), s(slits);
    const double half_len = 0.5 * kPi * width / l;
    for (std::size_t n = 0; n < slits; ++n) {
        const double lo = kPi * static_cast<double>(n) / l + offset;
        const double mid = lo + half_len;
        double mn = 0.0, cn = 0.0, sn = 0.0;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double phi = mid + half_len * rule.nodes[q] - state_shift;
            const double w = half_len * rule.weights[q];
            mn += w;
            cn += w * std::cos(2.0 * l * phi);
            sn += w * std::sin(2.0 * l * phi);
        }
        m[n] = mn;
        c[n] = cn;
        s[n] = sn;
    }
    return {pairwise_sum(m), pairwise_sum(c), pairwise_sum(s)};
}

}  // namespace

double singlet_probability(double theta_a_deg, double theta_b_deg) {
    const double s = std::sin(deg_to_rad(theta_a_deg - theta_b_deg));
    return s * s;
}

InequalityEvaluation wigner_evaluation(const AngleTriple& t) {
    return make_evaluation(singlet_probability(t.theta1, t.theta3), singlet_probability(t.theta1, t.theta2),
                           singlet_probability(t.theta2, t.theta3), singlet_probability(t.theta1, t.theta1));
}

ViolationScan max_violation_scan(double grid_step_deg) {
    if (!(grid_step_deg > 0.0 && grid_step_deg <= 5.0)) {
        throw std::invalid_argument("grid step must satisfy 0 < step <= 5 degrees");
    }
    const auto steps = static_cast<int>(std::ceil(180.0 / grid_step_deg - 1e-9));
    ViolationScan best;
    best.margin = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < steps; ++i) {
        for (int j = 0; j < steps; ++j) {
            const AngleTriple t{0.0, i * grid_step_deg, j * grid_step_deg};
            const double margin = wigner_evaluation(t).margin();
            ++best.evaluated;
            if (margin > best.margin + kProbabilityTolerance) {
                best.angles = t;
                best.margin = margin;
            }
        }
    }
    return best;
}

double oam_coincidence(int l, double phi_a, double phi_b) {
    if (l < 1) throw std::invalid_argument("OAM quantum number must be >= 1");
    const double c = std::cos(l * (phi_a - phi_b));
    return c * c;
}

void SlitWheelConfig::validate() const {
    if (l < 1) throw std::invalid_argument("slit wheel l must be >= 1");
    if (!(slit_width_fraction > 0.0 && slit_width_fraction < 1.0)) {
        throw std::invalid_argument("slit width fraction must lie in (0, 1)");
    }
    if (!std::isfinite(relative_angle)) throw std::invalid_argument("relative angle must be finite");
    if (quadrature_points < 16) throw std::invalid_argument("at least 16 quadrature points per slit are required");
}

SlitWheelPrediction slitwheel_probability(const SlitWheelConfig& c) {
    c.validate();
    const double w2 = c.slit_width_fraction * c.slit_width_fraction;
    const double s = std::sin(kPi * c.slit_width_fraction);
    const double ripple = s * s / (kPi * kPi);
    return {w2 - std::cos(2.0 * c.l * c.relative_angle) * ripple, w2 - ripple, w2 + ripple};
}

double slitwheel_quadrature(const SlitWheelConfig& c, int points_per_slit) {
    c.validate();
    const auto rule = gauss_legendre(points_per_slit);
    const double shift = kPi / (2.0 * c.l);
    const auto a = wheel_moments(c.l, c.slit_width_fraction, 0.0, 0.0, rule);
    const auto b = wheel_moments(c.l, c.slit_width_fraction, c.relative_angle, shift, rule);
    // Density 2 cos^2(l (phi_a - phi_b)) / (4 pi^2) = (1 + cos 2l(phi_a - phi_b)) / (4 pi^2);
    // the product-grid double sum separates into per-wheel moments.
    return (a.measure * b.measure + a.cos_sum * b.cos_sum + a.sin_sum * b.sin_sum) / (4.0 * kPi * kPi);
}

double slitwheel_probability_numeric(const SlitWheelConfig& c) {
    const double coarse = slitwheel_quadrature(c, c.quadrature_points);
    const double fine = slitwheel_quadrature(c, 2 * c.quadrature_points);
    if (std::abs(fine - coarse) > 1e-8) {
        throw ConvergenceError("slit wheel quadrature not converged: " + std::to_string(coarse) + " vs " +
                               std::to_string(fine));
    }
    return coarse;
}

std::vector<FringeSample> fringe_curve(int l, double slit_width_fraction, int n_points) {
    if (n_points < 2) throw std::invalid_argument("fringe curve needs at least 2 points");
    SlitWheelConfig cfg{l, slit_width_fraction, 0.0, 64};
    std::vector<FringeSample> out;
    out.reserve(static_cast<std::size_t>(n_points));
    const double period = kPi / l;
    for (int k = 0; k < n_points; ++k) {
        cfg.relative_angle = period * k / (n_points - 1);
        out.push_back({cfg.relative_angle, slitwheel_probability(cfg).p});
    }
    return out;
}

std::string fringe_csv(const std::vector<FringeSample>& curve) {
    std::string out = "phi_o_rad,probability\n";
    char buf[64];
    for (const auto& s : curve) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", s.phi_o, s.probability);
        out += buf;
    }
    return out;
}

GaussLegendreRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("Gauss-Legendre rule needs n >= 1");
    GaussLegendreRule r;
    r.nodes.resize(static_cast<std::size_t>(n));
    r.weights.resize(static_cast<std::size_t>(n));
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // Recompute the derivative at the converged node.
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[static_cast<std::size_t>(i)] = -x;
        r.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        r.weights[static_cast<std::size_t>(i)] = w;
        r.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    return r;
}

}  // namespace wigner
