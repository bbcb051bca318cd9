#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "evsim/sources.hpp"
#include "evsim/stats.hpp"
#include "evsim/wave_oracle.hpp"

namespace evsim {

enum class ScreenKind { Semicircle, Plane };

// Detector screen: a semicircle of radius x (coordinate = angle, radians) or
// a plane at abscissa x (coordinate = height, meters), tiled by `detectors`
// equal half-open windows spanning [extent_lo, extent_hi).
struct ScreenSpec {
    ScreenKind kind = ScreenKind::Plane;
    double x = 0.0;
    double extent_lo = 0.0;
    double extent_hi = 0.0;
    std::size_t detectors = 0;
};

struct ExperimentConfig {
    std::string name;  // "double-slit", "two-beam" or "biprism"
    SourceSpec source;
    ScreenSpec screen;
    double gamma = 0.999;
    std::uint64_t total_events = 0;
    std::uint64_t seed = 12345;
    unsigned replicas = 1;

    void validate() const;
};

// Principal output: one row per detector.
struct CountsProfile {
    std::vector<double> coordinates;
    std::vector<std::uint64_t> received;       // M
    std::vector<std::uint64_t> fired;          // N
    std::vector<double> theory;                // wave-theory reference
    std::vector<double> theory_fitted;         // scale * theory
};

struct RunResult {
    CountsProfile profile;
    std::uint64_t off_screen = 0;
    std::uint64_t absorbed = 0;
    double wall_seconds = 0.0;
};

struct FitReport {
    double scale = 0.0;
    double normalized_rmse = 0.0;
    double fringe_period_sim = 0.0;     // NaN when no flanking minima exist
    double fringe_period_theory = 0.0;  // same units as the screen coordinate
};

// Canonical experiment configurations (wavelength 670 nm throughout).
ExperimentConfig double_slit_config();                    // a = lambda, d = 5 lambda, X = 0.05 mm
ExperimentConfig two_beam_config();                       // d = 8 lambda, sigma = lambda, X = 0.1 mm
ExperimentConfig biprism_config(double screen_offset);    // n = 1.5631, alpha = 1 deg, X' = 45 mm

// Theory curve for the configured experiment, sampled at the detector
// centers.  Double slit and two-beam use the closed forms; the biprism uses
// the numerical pencil oracle's expected-count prediction (its firing
// probability is absolute and its message density varies across the screen,
// so expected counts -- not bare intensity -- is the comparable curve).
TheoryProfile theory_for(const ExperimentConfig& cfg);

// Runs total_events emission/detection cycles (split across replicas, each
// replica strictly sequential on its own RNG streams), merges replicas,
// attaches the fitted theory curve.  Deterministic for fixed config+seed.
RunResult run(const ExperimentConfig& cfg);

// Least-squares comparison plus the central-minima fringe-period estimates
// for both curves.
FitReport fit_and_compare(const CountsProfile& profile, const TheoryProfile& theory);

// Element-wise sum of M and N over replicas with identical geometry.
CountsProfile replica_merge(const std::vector<CountsProfile>& parts);

// CSV persistence (atomic: temp file + rename), header
// index,coordinate,received,fired,theory,theory_fitted; 17 significant
// digits; LF line endings.
void write_csv(const std::string& path, const CountsProfile& profile);

// Flat key=value fit report, plus run metadata.
void write_fit_report(const std::string& path, const ExperimentConfig& cfg,
                      const RunResult& result, const FitReport& fit);

// Flat key=value config file with explicit units on every length
// (canonical unit: meters; angles in radians).  Round-trips exactly.
std::string serialize_config(const ExperimentConfig& cfg);
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

// FNV-1a digest of the canonical serialization; logged with every run.
std::string config_digest(const ExperimentConfig& cfg);

// "0.05mm", "1deg", "670 nm", "0.999" -> canonical units (meters / radians /
// dimensionless).  Shared by the config parser and the CLI.
double parse_quantity(const std::string& raw);

}  // namespace evsim
