#include "evsim/sources.hpp"

#include <cmath>

namespace evsim {

void SourceSpec::validate() const {
    if (!(wavelength > 0.0)) throw std::invalid_argument("source: wavelength must be positive");
    if (const auto* ds = std::get_if<DoubleSlitSource>(&variant)) {
        if (!(ds->slit_width > 0.0) || !(ds->separation > 0.0))
            throw std::invalid_argument("double slit: lengths must be positive");
        if (!(ds->slit_width <= ds->separation))
            throw std::invalid_argument("double slit: slits overlap (a > d)");
        if (!(ds->aperture > 0.0)) throw std::invalid_argument("double slit: empty aperture");
    } else if (const auto* gt = std::get_if<GaussianTwinSource>(&variant)) {
        if (!(gt->sigma > 0.0) || !(gt->separation > 0.0))
            throw std::invalid_argument("twin source: lengths must be positive");
        if (!(gt->aperture > 0.0)) throw std::invalid_argument("twin source: empty aperture");
    } else {
        const auto& bp = std::get<BiprismSource>(variant);
        if (!(bp.sigma > 0.0)) throw std::invalid_argument("biprism source: sigma must be positive");
        bp.biprism.validate();
    }
}

Emission emit_double_slit(const DoubleSlitSource& s, Rng& rng) {
    const int which = rng.uniform() < 0.5 ? 0 : 1;
    const double center = (which == 0 ? +0.5 : -0.5) * s.separation;
    const double y = center + (rng.uniform() - 0.5) * s.slit_width;
    const double theta = (2.0 * rng.uniform() - 1.0) * s.aperture;
    return {{0.0, y}, theta, which};
}

Emission emit_gaussian_twin(const GaussianTwinSource& s, Rng& rng) {
    const int which = rng.uniform() < 0.5 ? 0 : 1;
    const double center = (which == 0 ? +0.5 : -0.5) * s.separation;
    const double y = center + s.sigma * rng.normal();
    const double theta = (2.0 * rng.uniform() - 1.0) * s.aperture;
    return {{0.0, y}, theta, which};
}

Emission emit_biprism(const BiprismSource& s, Rng& rng) {
    const double y = s.sigma * rng.normal();
    const double half = 0.5 * s.biprism.summit_angle;
    const double beta = (2.0 * rng.uniform() - 1.0) * half;
    // which_way is resolved at the exit face (the half-prism actually crossed);
    // provisional label from the emission angle.
    return {{s.source_x, y}, beta, beta >= 0.0 ? 0 : 1};
}

MessageResult next_message(const SourceSpec& spec, double screen_x, Rng& rng) {
    MessageResult out;
    const double lambda = spec.wavelength;

    if (const auto* ds = std::get_if<DoubleSlitSource>(&spec.variant)) {
        const Emission em = emit_double_slit(*ds, rng);
        // Screen is a semicircle of radius screen_x; a messenger emitted at
        // angle theta from the (sub-wavelength) slit region lands at angular
        // position theta, its phase set by the exact path to that point.
        const Vec2 hit{screen_x * std::cos(em.angle), screen_x * std::sin(em.angle)};
        const double phi = phase_of_path(free_path_length(em.point, hit), lambda);
        out.message = {unit_from_angle(phi), em.angle, em.which_way};
        return out;
    }
    if (const auto* gt = std::get_if<GaussianTwinSource>(&spec.variant)) {
        const Emission em = emit_gaussian_twin(*gt, rng);
        const double y = em.point.y + screen_x * std::tan(em.angle);
        const double phi = phase_of_path(free_path_length(em.point, {screen_x, y}), lambda);
        out.message = {unit_from_angle(phi), y, em.which_way};
        return out;
    }

    const auto& bp = std::get<BiprismSource>(spec.variant);
    const Emission em = emit_biprism(bp, rng);
    const TraceResult tr = trace_through_biprism(em.point, em.angle, bp.biprism, screen_x);
    if (tr.absorbed) {
        out.absorbed = true;
        return out;
    }
    const double phi = phase_of_path(tr.path.total_optical_length(), lambda);
    out.message = {unit_from_angle(phi), tr.arrival.y, tr.exit_ray.origin.y >= 0.0 ? 0 : 1};
    return out;
}

}  // namespace evsim
