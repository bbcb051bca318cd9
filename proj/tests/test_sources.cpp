#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "evsim/sources.hpp"

using namespace evsim;

namespace {
constexpr double kLambda = 670e-9;
constexpr double kPi = 3.141592653589793238462643383279;

SourceSpec slit_spec() {
    return {DoubleSlitSource{kLambda, 5 * kLambda, 0.5 * kPi}, kLambda};
}
SourceSpec twin_spec() {
    return {GaussianTwinSource{kLambda, 8 * kLambda, 0.02}, kLambda};
}
SourceSpec biprism_spec() {
    return {BiprismSource{0.531e-3, 0.0, {kPi / 180.0, 1.5631, 45e-3}}, kLambda};
}
}  // namespace

TEST_SUITE("sources") {

TEST_CASE("validation rejects malformed sources") {
    SourceSpec s = slit_spec();
    CHECK_NOTHROW(s.validate());
    std::get<DoubleSlitSource>(s.variant).slit_width = 6 * kLambda;  // a > d
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    std::get<DoubleSlitSource>(s.variant) = {0.0, 5 * kLambda, 1.0};
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = twin_spec();
    std::get<GaussianTwinSource>(s.variant).sigma = -1.0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = biprism_spec();
    s.wavelength = 0.0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("double slit: balanced slit choice and uniform support") {
    const auto spec = slit_spec();
    const auto& ds = std::get<DoubleSlitSource>(spec.variant);
    Rng rng(21, 0);
    const int n = 1000000;
    int upper = 0;
    double sum_abs_y = 0.0;
    for (int i = 0; i < n; ++i) {
        const Emission em = emit_double_slit(ds, rng);
        upper += em.which_way == 0;
        // Emission point confined to one of the two slit openings.
        const double dy = std::abs(std::abs(em.point.y) - 0.5 * ds.separation);
        CHECK(dy <= 0.5 * ds.slit_width + 1e-18);
        CHECK((em.which_way == 0) == (em.point.y > 0.0));
        CHECK(std::abs(em.angle) <= ds.aperture);
        sum_abs_y += std::abs(em.point.y);
    }
    // Binomial(n, 1/2): 3 sigma band.
    CHECK(std::abs(upper - n / 2.0) < 3.0 * 0.5 * std::sqrt(n));
    // Mean |y| is d/2 (slit offset) since the in-slit mean is the center.
    CHECK(sum_abs_y / n == doctest::Approx(0.5 * ds.separation).epsilon(1e-3));
}

TEST_CASE("gaussian twins: per-line sample sigma and bimodality") {
    const auto spec = twin_spec();
    const auto& gt = std::get<GaussianTwinSource>(spec.variant);
    Rng rng(22, 0);
    const int n = 1000000;
    double s = 0.0, s2 = 0.0;
    int cnt = 0;
    for (int i = 0; i < n; ++i) {
        const Emission em = emit_gaussian_twin(gt, rng);
        if (em.which_way != 0) continue;
        const double y = em.point.y - 0.5 * gt.separation;
        s += y;
        s2 += y * y;
        ++cnt;
    }
    const double mean = s / cnt;
    const double sd = std::sqrt(s2 / cnt - mean * mean);
    CHECK(std::abs(mean) < 4.0 * gt.sigma / std::sqrt(static_cast<double>(cnt)));
    CHECK(sd == doctest::Approx(gt.sigma).epsilon(0.01));
}

TEST_CASE("biprism emission: angle support, Gaussian height, unit direction") {
    const auto spec = biprism_spec();
    const auto& bp = std::get<BiprismSource>(spec.variant);
    const double half = 0.5 * bp.biprism.summit_angle;
    Rng rng(23, 0);
    const int n = 100000;
    std::vector<double> betas;
    betas.reserve(n);
    double s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const Emission em = emit_biprism(bp, rng);
        CHECK(std::abs(em.angle) <= half);
        CHECK(em.point.x == 0.0);
        betas.push_back(em.angle);
        s2 += em.point.y * em.point.y;
    }
    CHECK(std::sqrt(s2 / n) == doctest::Approx(bp.sigma).epsilon(0.01));
    // KS test of beta against uniform on [-half, half].
    std::sort(betas.begin(), betas.end());
    double d = 0.0;
    for (int i = 0; i < n; ++i) {
        const double cdf = (betas[i] + half) / (2.0 * half);
        d = std::max(d, std::abs(cdf - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - cdf));
    }
    CHECK(d < 1.628 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("messages carry unit phase vectors") {
    for (const SourceSpec& spec : {slit_spec(), twin_spec(), biprism_spec()}) {
        const double screen_x =
            std::holds_alternative<BiprismSource>(spec.variant) ? 52e-3 : 0.1e-3;
        Rng rng(24, 0);
        for (int i = 0; i < 2000; ++i) {
            const MessageResult mr = next_message(spec, screen_x, rng);
            if (mr.absorbed) continue;
            CHECK(std::abs(mr.message.e.norm() - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("double-slit arrival is the emission angle; mirrored slits dephase equally") {
    // On the semicircle axis (theta = 0) the two slit centers are equidistant,
    // so averaging over many messages near theta = 0 the two which-way classes
    // accumulate the same mean phase.
    const auto spec = slit_spec();
    Rng rng(25, 0);
    Vec2 acc[2] = {{0, 0}, {0, 0}};
    int cnt[2] = {0, 0};
    for (int i = 0; i < 400000; ++i) {
        const MessageResult mr = next_message(spec, 0.05e-3, rng);
        CHECK(std::abs(mr.message.arrival) <= 0.5 * kPi);
        if (std::abs(mr.message.arrival) > 0.01) continue;
        acc[mr.message.which_way] = acc[mr.message.which_way] + mr.message.e;
        ++cnt[mr.message.which_way];
    }
    REQUIRE(cnt[0] > 500);
    REQUIRE(cnt[1] > 500);
    const double phi0 = std::atan2(acc[0].y / cnt[0], acc[0].x / cnt[0]);
    const double phi1 = std::atan2(acc[1].y / cnt[1], acc[1].x / cnt[1]);
    CHECK(std::abs(phi0 - phi1) < 0.05);
}

TEST_CASE("biprism arrivals stay within the refracted envelope") {
    const auto spec = biprism_spec();
    const auto& bp = std::get<BiprismSource>(spec.variant);
    const double off = 7e-3;
    const double bound = 6.0 * bp.sigma +  // 6 sigma: ~1e-9 tail at 1e5 draws
                         off * std::tan(0.5 * bp.biprism.summit_angle +
                                        bp.biprism.thin_prism_deflection());
    Rng rng(26, 0);
    int absorbed = 0;
    for (int i = 0; i < 100000; ++i) {
        const MessageResult mr = next_message(spec, bp.biprism.apex_x + off, rng);
        if (mr.absorbed) {
            ++absorbed;
            continue;
        }
        CHECK(std::abs(mr.message.arrival) < bound);
        CHECK((mr.message.which_way == 0 || mr.message.which_way == 1));
    }
    // Total internal reflection is unreachable at a 1 degree summit angle.
    CHECK(absorbed == 0);
}

TEST_CASE("next_message is deterministic for a fixed stream") {
    const auto spec = biprism_spec();
    Rng a(31, 4), b(31, 4);
    for (int i = 0; i < 1000; ++i) {
        const MessageResult ma = next_message(spec, 52e-3, a);
        const MessageResult mb = next_message(spec, 52e-3, b);
        CHECK(ma.message.arrival == mb.message.arrival);
        CHECK(ma.message.e.x == mb.message.e.x);
        CHECK(ma.message.e.y == mb.message.e.y);
    }
}

}  // TEST_SUITE
