#include "evsim/wave_oracle.hpp"

#include <algorithm>
#include <cmath>

namespace evsim {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double sinc(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

// Adaptive Simpson with an absolute tolerance and a hard refinement cap.
// Works for double and complex<double> integrands.
template <class V, class F>
V adaptive_simpson_rec(const F& f, double a, double m, double b, V fa, V fm, V fb, V s,
                       double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const V flm = f(lm), frm = f(rm);
    const V sl = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const V sr = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const V s2 = sl + sr;
    if (std::abs(s2 - s) <= 15.0 * tol) return s2 + (s2 - s) / 15.0;
    if (depth <= 0) throw NumericalFailure("adaptive quadrature: refinement cap exceeded");
    return adaptive_simpson_rec(f, a, lm, m, fa, flm, fm, sl, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, rm, b, fm, frm, fb, sr, 0.5 * tol, depth - 1);
}

template <class V, class F>
V adaptive_simpson(const F& f, double a, double b, double tol, int depth = 28) {
    const double m = 0.5 * (a + b);
    const V fa = f(a), fm = f(m), fb = f(b);
    const V s = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_rec(f, a, m, b, fa, fm, fb, s, tol, depth);
}

}  // namespace

double double_slit_intensity(double theta, double a, double d, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("double_slit_intensity: bad wavelength");
    const double k = kTwoPi / lambda;
    const double st = std::sin(theta);
    const double s = sinc(0.5 * k * a * st);
    const double c = std::cos(0.5 * k * d * st);
    return s * s * c * c;
}

double gaussian_twin_intensity(double y, double d, double sigma, double X, double lambda) {
    const double k = kTwoPi / lambda;
    const double ks2 = k * sigma * sigma;
    const double b = ks2 * ks2 / (X * X + ks2 * ks2);
    return (std::cosh(b * y * d / (sigma * sigma)) + std::cos((1.0 - b) * k * y * d / X)) *
           std::exp(-b * (y * y + 0.25 * d * d) / (sigma * sigma));
}

double gaussian_twin_fringe_period(double d, double sigma, double X, double lambda) {
    const double k = kTwoPi / lambda;
    const double ks2 = k * sigma * sigma;
    const double b = ks2 * ks2 / (X * X + ks2 * ks2);
    return lambda * X / (d * (1.0 - b));
}

double two_source_intensity(double y, double d, double sigma, double X, double lambda,
                            bool paraxial) {
    const double k = kTwoPi / lambda;
    const auto path = [&](double dy) {
        return paraxial ? X + 0.5 * dy * dy / X : std::hypot(X, dy);
    };
    const auto f = [&](double u) {
        const double g = std::exp(-0.5 * u * u / (sigma * sigma));
        const std::complex<double> ph1 = std::polar(1.0, k * path(y - u - 0.5 * d));
        const std::complex<double> ph2 = std::polar(1.0, k * path(y - u + 0.5 * d));
        return g * (ph1 + ph2);
    };
    // Scale the absolute tolerance by the envelope mass so the stated relative
    // tolerance survives fringe cancellation.
    const double mass = 2.0 * std::sqrt(kTwoPi) * sigma;
    const double span = 8.0 * sigma;
    // Split into panels so the oscillatory kernel is sampled before refining.
    std::complex<double> amp = 0.0;
    const int panels = 16;
    for (int i = 0; i < panels; ++i) {
        const double a = -span + 2.0 * span * i / panels;
        const double b = -span + 2.0 * span * (i + 1) / panels;
        amp += adaptive_simpson<std::complex<double>>(f, a, b, 1e-6 * mass / panels);
    }
    return std::norm(amp);
}

BiprismOracle::BiprismOracle(const BiprismSpec& spec, double sigma, double source_x,
                             double screen_x, double lambda, double rel_tol)
    : spec_(spec), sigma_(sigma), source_x_(source_x), screen_x_(screen_x), lambda_(lambda),
      rel_tol_(rel_tol), half_(0.5 * spec.summit_angle) {
    spec_.validate();
    if (!(sigma > 0.0)) throw std::invalid_argument("biprism oracle: sigma must be positive");
    if (!(screen_x > spec.apex_x))
        throw std::invalid_argument("biprism oracle: screen must lie beyond the apex");
}

BiprismOracle::Point BiprismOracle::amplitude_density(double y) const {
    const double k = kTwoPi / lambda_;
    const double norm = 1.0 / (std::sqrt(kTwoPi) * sigma_ * spec_.summit_angle);

    Point out{0.0, 0.0};
    for (int arm : {+1, -1}) {
        // Emission height reaching y at angle beta, its Gaussian weight (with
        // the 1/|A| Jacobian of the arrival map) and the face-admissibility
        // indicator h > 0 (the traced ray really crosses this arm's face).
        struct Eval {
            double w, L, h;
        };
        const auto eval = [&](double beta) -> Eval {
            const PencilCoeffs c = pencil_coeffs(beta, arm, spec_, source_x_, screen_x_);
            const double ys = (y - c.B) / c.A;
            const double w =
                norm * std::exp(-0.5 * ys * ys / (sigma_ * sigma_)) / std::abs(c.A);
            return {w, c.C * ys + c.D, arm * (c.F * ys + c.G)};
        };

        // Locate the admissible beta-intervals: scan for sign changes of h,
        // bisect each boundary, then integrate the smooth pieces.
        const int n_scan = 256;
        std::vector<double> grid(n_scan + 1), hval(n_scan + 1);
        for (int i = 0; i <= n_scan; ++i) {
            grid[i] = -half_ + spec_.summit_angle * i / n_scan;
            hval[i] = eval(grid[i]).h;
        }
        std::vector<std::pair<double, double>> segments;
        double seg_start = hval[0] > 0.0 ? grid[0] : 0.0;
        bool open = hval[0] > 0.0;
        for (int i = 0; i < n_scan; ++i) {
            if ((hval[i] > 0.0) == (hval[i + 1] > 0.0)) continue;
            double a = grid[i], b = grid[i + 1];
            double ha = hval[i];
            for (int it = 0; it < 60; ++it) {
                const double m = 0.5 * (a + b);
                const double hm = eval(m).h;
                if ((hm > 0.0) == (ha > 0.0)) {
                    a = m;
                    ha = hm;
                } else {
                    b = m;
                }
            }
            const double root = 0.5 * (a + b);
            if (open) {
                segments.emplace_back(seg_start, root);
                open = false;
            } else {
                seg_start = root;
                open = true;
            }
        }
        if (open) segments.emplace_back(seg_start, half_);

        for (const auto& [a, b] : segments) {
            if (!(b > a)) continue;
            // Coarse mass estimate sets the absolute tolerance so the stated
            // relative tolerance holds through fringe cancellation.
            double mass = 0.0;
            const int nc = 32;
            for (int i = 0; i <= nc; ++i)
                mass += eval(a + (b - a) * i / nc).w * ((i == 0 || i == nc) ? 0.5 : 1.0);
            mass *= (b - a) / nc;
            const double tol = rel_tol_ * std::max(mass, 1e-300);

            out.density += adaptive_simpson<double>(
                [&](double beta) { return eval(beta).w; }, a, b, tol);
            out.amplitude += adaptive_simpson<std::complex<double>>(
                [&](double beta) {
                    const Eval e = eval(beta);
                    return e.w * std::polar(1.0, k * e.L);
                },
                a, b, tol);
        }
    }
    return out;
}

double BiprismOracle::firing_probability(double y) const {
    const Point p = amplitude_density(y);
    if (p.density <= 0.0) return 0.0;
    return std::norm(p.amplitude) / (p.density * p.density);
}

double expected_firings(double q, double m, double gamma) {
    const double g = gamma;
    const double v = (1.0 - g) / (1.0 + g);
    const double gm = std::exp(m * std::log(g));
    const double g2m = gm * gm;
    const double s1 = g * (1.0 - gm) / (1.0 - g);
    const double s2 = g * g * (1.0 - g2m) / (1.0 - g * g);
    return q * (m - 2.0 * s1 + s2) + v * (1.0 - q) * (m - s2);
}

double BiprismOracle::expected_counts(double y, double total_events, double bin_width,
                                      double gamma) const {
    const Point p = amplitude_density(y);
    if (p.density <= 0.0) return 0.0;
    const double q = std::norm(p.amplitude) / (p.density * p.density);
    const double mbar = total_events * p.density * bin_width;
    return expected_firings(q, mbar, gamma);
}

double BiprismOracle::analytic_fringe_period() const {
    return lambda_ / (2.0 * spec_.thin_prism_deflection());
}

TheoryProfile sample_profile(const std::function<double(double)>& oracle,
                             const std::vector<double>& coordinates) {
    TheoryProfile p;
    p.coordinates = coordinates;
    p.intensities.reserve(coordinates.size());
    for (double c : coordinates) p.intensities.push_back(oracle(c));
    return p;
}

}  // namespace evsim
