#pragma once

#include <cstdint>

namespace evsim {

// Deterministic, splittable pseudo-random stream.
//
// Each (seed, stream_id) pair yields an independent SplitMix64 sequence whose
// initial state is a 64-bit mix of both values.  SplitMix64 passes standard
// statistical batteries, has a 2^64 period per stream, and -- crucially for
// reproducibility -- is defined by a handful of public constants, so any
// implementation can regenerate identical deviates:
//
//   state_0   = mix(seed ^ mix(stream_id + 0x9E3779B97F4A7C15))
//   next():     state += 0x9E3779B97F4A7C15
//               z = state
//               z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//               z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//               return z ^ (z >> 31)
//   uniform():  (next() >> 11) * 2^-53            -- double in [0, 1)
//   normal():   Box-Muller, sqrt(-2 ln(1-u1)) * cos(2 pi u2); consumes exactly
//               two uniforms per call and caches nothing, so the consumption
//               pattern (and therefore every downstream deviate) is fixed.
//
// Stream-id convention used by the harness: replica r draws emissions from
// stream r * 2^32 and detector j's threshold deviates from r * 2^32 + 1 + j.
class Rng {
  public:
    Rng(std::uint64_t seed, std::uint64_t stream_id)
        : state_(mix(seed ^ mix(stream_id + kGamma))) {}

    std::uint64_t next() {
        state_ += kGamma;
        return mix_out(state_);
    }

    // Uniform deviate on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Standard normal deviate (Box-Muller); two uniforms consumed per call.
    double normal();

    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  private:
    static std::uint64_t mix_out(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    static std::uint64_t mix(std::uint64_t z) {
        z += kGamma;
        return mix_out(z);
    }

    std::uint64_t state_;
};

// Stream-id helpers shared by harness and tests.
inline std::uint64_t emission_stream(std::uint64_t replica) { return replica << 32; }
inline std::uint64_t detector_stream(std::uint64_t replica, std::uint64_t detector) {
    return (replica << 32) + 1 + detector;
}

}  // namespace evsim
