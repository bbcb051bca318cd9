#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "evsim/geometry.hpp"

namespace evsim {

// Raised when an adaptive quadrature fails to reach its tolerance within the
// refinement cap.
struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Theory curve sampled on the detector coordinates.
struct TheoryProfile {
    std::vector<double> coordinates;  // radians (semicircle) or meters (plane)
    std::vector<double> intensities;  // >= 0, arbitrary units
};

// Fraunhofer double-slit intensity, A = 1:
//   I(theta) = sinc^2(k a sin(theta)/2) * cos^2(k d sin(theta)/2).
// The sinc is evaluated by series below |x| = 1e-4.
double double_slit_intensity(double theta, double a, double d, double lambda);

// Two coherent Gaussian line sources in the paraxial regime (d << X,
// sigma << X), B = 1, b = (k sigma^2)^2 / (X^2 + (k sigma^2)^2):
//   I(y) = [cosh(b y d / sigma^2) + cos((1-b) k y d / X)]
//          * exp(-b (y^2 + d^2/4) / sigma^2).
double gaussian_twin_intensity(double y, double d, double sigma, double X, double lambda);
// Fringe period of the cosine factor: lambda X / (d (1-b)).
double gaussian_twin_fringe_period(double d, double sigma, double X, double lambda);

// Numerical two-virtual-source reference: coherent Kirchhoff superposition of
// two Gaussian line sources at y = +-d/2 in the plane x = 0, observed at
// (X, y).  With `paraxial` the path is expanded to X + (y - y_s)^2 / 2X (the
// closed form above is the exact integral of that kernel); otherwise exact
// distances are used.  Adaptive quadrature to 1e-6 relative; refinement cap
// exceeded -> NumericalFailure.
double two_source_intensity(double y, double d, double sigma, double X, double lambda,
                            bool paraxial = false);

// Numerical wave oracle for the biprism experiment: coherent superposition of
// the two refracted pencils with exact ray-traced optical-path phases,
// integrated over the Gaussian source profile and the emission-angle interval
// [-alpha/2, +alpha/2].  (The thin-prism virtual-image construction preserves
// directions but drops an O(n k X' beta^2) glass-phase term, so phases must
// come from the traced paths for the oracle to describe the event model.)
class BiprismOracle {
  public:
    BiprismOracle(const BiprismSpec& spec, double sigma, double source_x, double screen_x,
                  double lambda, double rel_tol = 1e-6);

    struct Point {
        std::complex<double> amplitude;  // coherent amplitude at y
        double density;                  // arrival density rho(y), normalized to 1 on the line
    };
    Point amplitude_density(double y) const;

    double intensity(double y) const { return std::norm(amplitude_density(y).amplitude); }
    // Absolute long-run firing probability of a detector at y: the squared
    // magnitude of the mean incoming phasor, q = |amp|^2 / rho^2.
    double firing_probability(double y) const;

    // Expected firings of a detector at y that receives Mbar = events * rho * w
    // messages, including the startup transient of the zero-initialized
    // detector memory (geometric sums s1, s2) and the residual firing floor
    // v = (1-gamma)/(1+gamma) of a fully mixed stream.
    double expected_counts(double y, double total_events, double bin_width,
                           double gamma) const;

    // Crossing-angle form of the two-virtual-source fringe spacing.  The
    // common-phase Gaussian source illuminates the biprism like a collimated
    // beam, so the two pencils interfere at angle 2 (n-1) tan(alpha/2) and the
    // spacing lambda / (2 (n-1) tan(alpha/2)) = lambda X' / d_v is independent
    // of the screen distance.
    double analytic_fringe_period() const;

    const BiprismSpec& spec() const { return spec_; }

  private:
    BiprismSpec spec_;
    double sigma_, source_x_, screen_x_, lambda_, rel_tol_;
    double half_;  // alpha / 2
};

// Expected firings for a detector with firing probability q receiving m
// messages, zero-initialized memory, memory parameter gamma.
double expected_firings(double q, double m, double gamma);

// Element-wise evaluation of a pointwise oracle on sorted coordinates.
TheoryProfile sample_profile(const std::function<double(double)>& oracle,
                             const std::vector<double>& coordinates);

}  // namespace evsim
