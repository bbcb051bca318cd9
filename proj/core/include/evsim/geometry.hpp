#pragma once

#include <stdexcept>
#include <vector>

#include "evsim/vec2.hpp"

namespace evsim {

// A ray in the screen plane: origin in meters, unit direction.
struct Ray {
    Vec2 origin;
    Vec2 dir;  // unit vector, |dir| = 1 within 1e-12
};

// Piecewise path through media of different refractive indices.  The optical
// length (sum of geometric length times index) is what sets the phase.
struct OpticalPath {
    struct Segment {
        double length = 0.0;  // meters, >= 0
        double index = 1.0;   // dimensionless, >= 1
    };
    std::vector<Segment> segments;

    double total_optical_length() const {
        double t = 0.0;
        for (const auto& s : segments) t += s.length * s.index;
        return t;
    }
};

// Fresnel biprism: two planar exit faces meeting at the apex (apex_x, 0),
// each inclined by alpha/2 so the full wedge (summit) angle is alpha.  The
// source sits inside the glass, so only the exit faces refract.
struct BiprismSpec {
    double summit_angle = 0.0;     // alpha, radians, 0 < alpha < pi/2
    double refractive_index = 1.0; // n > 1
    double apex_x = 0.0;           // X', meters, > 0

    void validate() const {
        if (!(summit_angle > 0.0) || !(summit_angle < 1.5707963267948966))
            throw std::invalid_argument("biprism: summit angle must be in (0, pi/2)");
        if (!(refractive_index > 1.0))
            throw std::invalid_argument("biprism: refractive index must exceed 1");
        if (!(apex_x > 0.0))
            throw std::invalid_argument("biprism: apex position must be positive");
    }

    // Thin-prism deflection of each half: delta = (n-1) tan(alpha/2).
    double thin_prism_deflection() const;
    // Virtual-source separation from the thin-prism construction,
    // d_v = 2 X' (n-1) tan(alpha/2).
    double virtual_source_separation() const;
};

// Phase accumulated along an optical path, reduced into [0, 2pi).
// The reduction is done once on the full length (not per segment) to bound
// rounding error.
double phase_of_path(double optical_length, double wavelength);

// Euclidean distance between two points.
double free_path_length(Vec2 from, Vec2 to);

// Outcome of tracing a ray through the biprism to the detector plane x = screen_x.
struct TraceResult {
    bool absorbed = false;    // total internal reflection at the exit face
    Vec2 arrival;             // point on the detector plane (valid unless absorbed)
    Ray exit_ray;             // refracted ray in air (valid unless absorbed)
    OpticalPath path;         // glass segment (index n) + air segment (index 1)
};

// Refract a ray originating inside the glass at the biprism exit face.
// Rays with y > 0 at the face cross the upper face, y < 0 the lower face;
// an exactly axial hit (y = 0) passes straight through.  Exact vector Snell
// law; total internal reflection is reported as an absorbed ray, not an error.
struct RefractResult {
    bool absorbed = false;
    Ray ray;          // refracted ray (origin on the face), valid unless absorbed
    double glass_length = 0.0;  // geometric length from ray origin to the face
};
RefractResult refract_at_biprism(const Ray& ray, const BiprismSpec& spec);

// Full two-segment trace: emission point inside the glass, direction angle
// beta, through the exit face, to the plane x = screen_x.  The refracted ray
// determines the arrival point.
TraceResult trace_through_biprism(Vec2 emission, double beta, const BiprismSpec& spec,
                                  double screen_x);

// For a fixed (beta, arm) the refracted pencil is a linear map of the emission
// height y_s: arrival y_D = A y_s + B, optical length L = C y_s + D, and the
// face-crossing height y_f = F y_s + G (the ray really crosses the upper face
// iff y_f > 0, the lower iff y_f < 0).  These coefficients drive both the
// mirror-symmetry tests and the numerical wave oracle.
struct PencilCoeffs {
    double A, B, C, D, F, G;
};
// arm = +1 selects the upper face, arm = -1 the lower face.
PencilCoeffs pencil_coeffs(double beta, int arm, const BiprismSpec& spec,
                           double source_x, double screen_x);

}  // namespace evsim
