#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "evsim/vec2.hpp"

namespace evsim {

// Adaptive threshold detector.  Its internal two-vector p relaxes toward each
// incoming message e by the convex update p' = gamma p + (1-gamma) e, and the
// detector fires (emits a 1) when |p|^2 exceeds a fresh uniform deviate.
// With gamma close to 1 the long-run firing frequency approaches the squared
// magnitude of the average incoming phasor, which is what turns a stream of
// individual particle events into an interference pattern.
struct DetectorState {
    Vec2 p{0.0, 0.0};          // internal memory vector, |p| <= 1
    double gamma = 0.999;      // memory parameter, 0 < gamma < 1
    double window_lo = 0.0;    // half-open acceptance window [lo, hi)
    double window_hi = 0.0;
    std::uint64_t received = 0;  // M: messages processed
    std::uint64_t fired = 0;     // N: ones emitted

    // Apply the memory update for one message; increments M.
    void update(Vec2 e) {
        if (std::abs(e.norm2() - 1.0) > 1e-9)
            throw std::invalid_argument("detector: message vector is not unit length");
        p = gamma * p + (1.0 - gamma) * e;
        ++received;
    }

    // Threshold decision against a uniform deviate r in [0,1); strict
    // inequality so the (measure-zero) tie is resolved deterministically.
    // Increments N when firing.  Must follow the update for the same message.
    bool fire(double r) {
        if (!(r >= 0.0) || !(r < 1.0)) throw std::invalid_argument("detector: deviate outside [0,1)");
        const bool s = p.norm2() > r;
        fired += s ? 1 : 0;
        return s;
    }
};

// A screen is a collection of identical detectors with contiguous, disjoint,
// half-open windows tiling [extent_lo, extent_hi) in the screen coordinate
// (radians on the semicircle, meters on a plane).
class DetectorArray {
  public:
    DetectorArray(double extent_lo, double extent_hi, std::size_t count, double gamma);

    // Routes the message to the unique detector whose window contains the
    // coordinate, runs update + fire there.  Returns false (and touches no
    // detector) when the arrival is off-screen.  `r` is the threshold deviate
    // drawn from that detector's own stream by the caller.
    struct Receipt {
        bool on_screen = false;
        std::size_t detector = 0;
        bool fired = false;
    };
    Receipt receive(double coordinate, Vec2 e, double r);

    // Window index lookup only (no state change); npos when off-screen.
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t locate(double coordinate) const;

    std::size_t size() const { return detectors_.size(); }
    double window_width() const { return width_; }
    double center(std::size_t j) const { return lo_ + (static_cast<double>(j) + 0.5) * width_; }
    const DetectorState& operator[](std::size_t j) const { return detectors_[j]; }
    DetectorState& operator[](std::size_t j) { return detectors_[j]; }

  private:
    double lo_, hi_, width_;
    std::vector<DetectorState> detectors_;
};

}  // namespace evsim
