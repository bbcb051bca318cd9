#include "evsim/geometry.hpp"

#include <cmath>

namespace evsim {

double BiprismSpec::thin_prism_deflection() const {
    return (refractive_index - 1.0) * std::tan(0.5 * summit_angle);
}

double BiprismSpec::virtual_source_separation() const {
    return 2.0 * apex_x * thin_prism_deflection();
}

double phase_of_path(double optical_length, double wavelength) {
    if (!(wavelength > 0.0)) throw std::invalid_argument("phase_of_path: wavelength must be positive");
    if (!(optical_length >= 0.0)) throw std::invalid_argument("phase_of_path: negative optical length");
    double r = std::fmod(optical_length, wavelength);
    double phi = 2.0 * M_PI * (r / wavelength);
    if (phi >= 2.0 * M_PI) phi -= 2.0 * M_PI;
    if (phi < 0.0) phi = 0.0;
    return phi;
}

double free_path_length(Vec2 from, Vec2 to) { return std::hypot(to.x - from.x, to.y - from.y); }

namespace {

// Intersection parameter t of a ray with one exit face.  The upper face is
// the line x = apex_x - y tan(alpha/2) for y > 0, the lower its mirror image.
// Returns the height at which the ray meets the (extended) face plane.
struct FaceHit {
    double t;        // ray parameter (geometric length, dir is unit)
    double y_face;   // y coordinate of the hit
};

FaceHit face_hit(const Ray& ray, const BiprismSpec& spec, int arm) {
    const double th = std::tan(0.5 * spec.summit_angle);
    // Face line: x + arm * y * th = apex_x  (arm = +1 upper, -1 lower).
    const double denom = ray.dir.x + arm * ray.dir.y * th;
    const double t = (spec.apex_x - ray.origin.x - arm * ray.origin.y * th) / denom;
    return {t, ray.origin.y + ray.dir.y * t};
}

Vec2 face_normal(const BiprismSpec& spec, int arm) {
    const double h = 0.5 * spec.summit_angle;
    return {std::cos(h), arm * std::sin(h)};
}

}  // namespace

RefractResult refract_at_biprism(const Ray& ray, const BiprismSpec& spec) {
    spec.validate();
    // A ray from inside the glass crosses exactly one face; pick the one whose
    // intersection lies on the correct side of the apex.
    FaceHit hit = face_hit(ray, spec, +1);
    int arm = +1;
    if (!(hit.y_face > 0.0)) {
        hit = face_hit(ray, spec, -1);
        arm = -1;
        if (!(hit.y_face < 0.0)) {
            // Exactly through the apex line: treat as straight-through.
            RefractResult out;
            out.glass_length = (spec.apex_x - ray.origin.x) / ray.dir.x;
            out.ray = {{spec.apex_x, 0.0}, ray.dir};
            return out;
        }
    }

    const Vec2 nhat = face_normal(spec, arm);
    const double n = spec.refractive_index;
    const double cosi = ray.dir.dot(nhat);
    const double cost2 = 1.0 - n * n * (1.0 - cosi * cosi);
    if (cost2 < 0.0) {
        RefractResult out;
        out.absorbed = true;
        return out;
    }
    const double cost = std::sqrt(cost2);
    const Vec2 refr = n * ray.dir + (cost - n * cosi) * nhat;

    RefractResult out;
    out.glass_length = hit.t;
    out.ray = {{ray.origin.x + ray.dir.x * hit.t, hit.y_face}, refr};
    return out;
}

TraceResult trace_through_biprism(Vec2 emission, double beta, const BiprismSpec& spec,
                                  double screen_x) {
    const Ray ray{emission, unit_from_angle(beta)};
    const RefractResult r = refract_at_biprism(ray, spec);
    TraceResult out;
    if (r.absorbed) {
        out.absorbed = true;
        return out;
    }
    const double s = (screen_x - r.ray.origin.x) / r.ray.dir.x;
    out.arrival = {screen_x, r.ray.origin.y + r.ray.dir.y * s};
    out.exit_ray = r.ray;
    out.path.segments = {{r.glass_length, spec.refractive_index}, {s, 1.0}};
    return out;
}

PencilCoeffs pencil_coeffs(double beta, int arm, const BiprismSpec& spec, double source_x,
                           double screen_x) {
    const double th = std::tan(0.5 * spec.summit_angle);
    const double n = spec.refractive_index;
    const double ux = std::cos(beta);
    const double uy = std::sin(beta);

    // Face hit parameter t = t0 + t1 * y_s, linear in the emission height.
    const double denom = ux + arm * uy * th;
    const double t0 = (spec.apex_x - source_x) / denom;
    const double t1 = -arm * th / denom;

    const Vec2 nhat = face_normal(spec, arm);
    const double cosi = ux * nhat.x + uy * nhat.y;
    const double cost2 = 1.0 - n * n * (1.0 - cosi * cosi);
    if (cost2 < 0.0) throw std::domain_error("pencil_coeffs: total internal reflection");
    const double cost = std::sqrt(cost2);
    const double rx = n * ux + (cost - n * cosi) * nhat.x;
    const double ry = n * uy + (cost - n * cosi) * nhat.y;

    // Air segment s = s0 + s1 * y_s to the plane x = screen_x.
    const double s0 = (screen_x - (source_x + ux * t0)) / rx;
    const double s1 = -ux * t1 / rx;

    PencilCoeffs c;
    c.A = 1.0 + uy * t1 + s1 * ry;   // arrival:        y_D = A y_s + B
    c.B = uy * t0 + s0 * ry;
    c.C = n * t1 + s1;               // optical length: L = C y_s + D
    c.D = n * t0 + s0;
    c.F = 1.0 + uy * t1;             // face height:    y_f = F y_s + G
    c.G = uy * t0;
    return c;
}

}  // namespace evsim
