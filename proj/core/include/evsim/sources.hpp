#pragma once

#include <stdexcept>
#include <variant>

#include "evsim/geometry.hpp"
#include "evsim/rng.hpp"
#include "evsim/vec2.hpp"

namespace evsim {

// One messenger as seen by the detector array: a unit two-vector encoding the
// accumulated phase, and the arrival coordinate on the screen (angle theta in
// radians for the semicircular screen, height y in meters for planar screens).
// The originating slit/source label is carried for diagnostics but never read
// by any detector.
struct Message {
    Vec2 e;            // (cos phi, sin phi), |e| = 1
    double arrival;    // theta [rad] or y [m]
    int which_way;     // 0 / 1: slit or half-prism of origin (diagnostics only)
};

// Source geometries.  All lengths in meters.
struct DoubleSlitSource {
    double slit_width;    // a
    double separation;    // d, center to center; a <= d
    double aperture;      // emission angle uniform on [-aperture, +aperture]
};
struct GaussianTwinSource {
    double sigma;         // std. deviation of each line
    double separation;    // d between the two line centers
    double aperture;      // emission angle uniform on [-aperture, +aperture]
};
struct BiprismSource {
    double sigma;         // std. deviation of the single Gaussian line
    double source_x;      // emission plane inside the glass (default 0)
    BiprismSpec biprism;
};

struct SourceSpec {
    std::variant<DoubleSlitSource, GaussianTwinSource, BiprismSource> variant;
    double wavelength;    // lambda > 0

    void validate() const;
};

// Raw emission draw: point and direction angle, before propagation.
struct Emission {
    Vec2 point;
    double angle;      // direction beta (or theta for the slit source)
    int which_way;
};

Emission emit_double_slit(const DoubleSlitSource& s, Rng& rng);
Emission emit_gaussian_twin(const GaussianTwinSource& s, Rng& rng);
Emission emit_biprism(const BiprismSource& s, Rng& rng);

// Composes emission, propagation and phase accumulation into one Message.
// `screen_x` is the semicircle radius or the detector-plane abscissa.
// For the biprism a totally internally reflected ray is reported as absorbed
// (the event is consumed, not retried, so the harness conservation ledger
// stays exact).
struct MessageResult {
    bool absorbed = false;
    Message message;
};
MessageResult next_message(const SourceSpec& spec, double screen_x, Rng& rng);

}  // namespace evsim
