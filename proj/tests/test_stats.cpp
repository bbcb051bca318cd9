#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "evsim/rng.hpp"
#include "evsim/stats.hpp"

using namespace evsim;

TEST_SUITE("stats") {

TEST_CASE("chi-square critical values at the 1% level") {
    // Reference values from standard tables.
    CHECK(chi2_critical(10, 0.01) == doctest::Approx(23.209).epsilon(0.005));
    CHECK(chi2_critical(100, 0.01) == doctest::Approx(135.807).epsilon(0.005));
    // Wilson-Hilferty is only ~2.5% accurate at dof = 1.
    CHECK(chi2_critical(1, 0.05) == doctest::Approx(3.841).epsilon(0.03));
}

TEST_CASE("ks critical value") {
    CHECK(ks_critical_1pct(1000000) == doctest::Approx(1.628e-3).epsilon(1e-6));
}

TEST_CASE("variance inflation of correlated firings") {
    CHECK(dlm_variance_inflation(0.999) ==
          doctest::Approx(1.0 + 4.0 * 0.999 / 1.999).epsilon(1e-15));
    CHECK(dlm_variance_inflation(0.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("moving-average smoothing") {
    const std::vector<double> v{1, 2, 3, 4, 5};
    const auto s0 = smooth(v, 0);
    CHECK(s0 == v);
    const auto s1 = smooth(v, 1);
    CHECK(s1[0] == doctest::Approx(1.5));   // truncated edge window
    CHECK(s1[2] == doctest::Approx(3.0));
    CHECK(s1[4] == doctest::Approx(4.5));
}

TEST_CASE("scale fit recovers an exact multiple") {
    const std::vector<double> theory{0.1, 0.5, 1.0, 0.5, 0.1};
    std::vector<double> counts;
    for (double t : theory) counts.push_back(7.0 * t);
    const ScaleFit f = fit_scale(counts, theory);
    CHECK(f.scale == doctest::Approx(7.0).epsilon(1e-13));
    CHECK(f.nrmse == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("scale fit degrades linearly under small perturbation") {
    const std::vector<double> theory{0.2, 0.8, 1.0, 0.8, 0.2};
    std::vector<double> counts;
    for (double t : theory) counts.push_back(100.0 * t);
    counts[2] += 1.0;
    const ScaleFit f = fit_scale(counts, theory);
    CHECK(f.scale > 100.0);
    CHECK(f.nrmse > 0.0);
    CHECK(f.nrmse < 0.01);
}

TEST_CASE("scale fit rejects degenerate inputs") {
    CHECK_THROWS_AS(fit_scale({1.0, 2.0}, {0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(fit_scale({1.0}, {1.0, 2.0}), std::invalid_argument);
    const ScaleFit empty = fit_scale({0.0, 0.0}, {1.0, 2.0});  // nothing fired
    CHECK(empty.scale == 0.0);
    CHECK(empty.nrmse == 0.0);
}

TEST_CASE("nrmse of Poisson-resampled theory is near the shot-noise floor") {
    // Resample a smooth curve with Poisson noise at mean counts ~1e4; the
    // expected nrmse is ~ 1/sqrt(mean) ~ 1%.
    std::vector<double> theory, counts;
    Rng rng(17, 0);
    for (int i = 0; i < 200; ++i) {
        const double x = -3.0 + 6.0 * i / 199.0;
        const double mu = 1e4 * std::exp(-0.5 * x * x);
        theory.push_back(mu);
        counts.push_back(mu + std::sqrt(mu) * rng.normal());  // normal approx
    }
    const ScaleFit f = fit_scale(counts, theory);
    CHECK(f.scale == doctest::Approx(1.0).epsilon(0.01));
    CHECK(f.nrmse < 0.02);
    CHECK(f.nrmse > 0.001);
}

TEST_CASE("fringe period from central minima on a synthetic pattern") {
    const double period = 0.37;
    std::vector<double> coords, values;
    for (int i = 0; i < 801; ++i) {
        const double x = -2.0 + 4.0 * i / 800.0;
        coords.push_back(x);
        values.push_back(std::exp(-0.3 * x * x) *
                         std::pow(std::cos(3.14159265358979 * x / period), 2));
    }
    const auto p = fringe_period_central_minima(coords, values, 0);
    REQUIRE(p.has_value());
    CHECK(*p == doctest::Approx(period).epsilon(0.01));
    // Noise plus smoothing still recovers it.
    Rng rng(18, 0);
    std::vector<double> noisy = values;
    for (auto& v : noisy) v = std::max(0.0, v + 0.03 * rng.normal());
    const auto pn = fringe_period_central_minima(coords, noisy, 3);
    REQUIRE(pn.has_value());
    CHECK(*pn == doctest::Approx(period).epsilon(0.05));
}

TEST_CASE("fringe period is empty without flanking minima") {
    std::vector<double> coords, values;
    for (int i = 0; i < 101; ++i) {
        coords.push_back(i * 0.01);
        values.push_back(std::exp(-coords.back()));  // monotone, no fringes
    }
    CHECK_FALSE(fringe_period_central_minima(coords, values, 0).has_value());
}

TEST_CASE("fringe counting on a synthetic envelope") {
    const double period = 0.25, env_half = 1.0;
    std::vector<double> coords, values;
    for (int i = 0; i < 1601; ++i) {
        const double x = -2.0 + 4.0 * i / 1600.0;
        coords.push_back(x);
        values.push_back(std::exp(-x * x) *
                         std::pow(std::cos(3.14159265358979 * x / period), 2));
    }
    // Maxima at multiples of 0.25 within |x| <= 1: x = 0, +-.25, +-.5, +-.75, +-1.
    CHECK(count_fringes(coords, values, 0, env_half) == 9);
}

TEST_CASE("peak refinement lands on the true maximum") {
    std::vector<double> coords, values;
    for (int i = 0; i < 501; ++i) {
        const double x = -1.0 + 2.0 * i / 500.0;
        coords.push_back(x);
        values.push_back(std::exp(-8.0 * (x - 0.3123) * (x - 0.3123)));
    }
    const auto p = peak_near(coords, values, 0, 0.3, 0.2);
    REQUIRE(p.has_value());
    CHECK(*p == doctest::Approx(0.3123).epsilon(1e-3));
    CHECK_FALSE(peak_near(coords, values, 0, -0.9, 0.05).has_value());
}

TEST_CASE("mirror symmetry chi-square accepts symmetric noise, rejects skew") {
    const std::size_t nd = 100;
    Rng rng(19, 0);
    std::vector<std::uint64_t> received(nd), fired_sym(nd), fired_skew(nd);
    const double vif = dlm_variance_inflation(0.999);
    for (std::size_t j = 0; j < nd; ++j) {
        const double x = (static_cast<double>(j) + 0.5) / nd - 0.5;
        const double m = 20000.0;
        const double q = 0.1 + 0.3 * std::exp(-40.0 * x * x);
        received[j] = static_cast<std::uint64_t>(m);
        const double sd = std::sqrt(m * q * (1.0 - q) * vif);
        fired_sym[j] = static_cast<std::uint64_t>(std::max(0.0, m * q + sd * rng.normal()));
        // Skewed variant: 10% gradient across the screen.
        fired_skew[j] = static_cast<std::uint64_t>(
            std::max(0.0, m * q * (1.0 + 0.2 * x) + sd * rng.normal()));
    }
    const Chi2Result ok = mirror_symmetry_chi2(received, fired_sym, 0.999);
    CHECK(ok.dof > 20);
    CHECK(ok.pass_1pct);
    const Chi2Result bad = mirror_symmetry_chi2(received, fired_skew, 0.999);
    CHECK_FALSE(bad.pass_1pct);
}

TEST_CASE("homogeneity chi-square separates identical from shifted profiles") {
    const std::size_t nd = 80;
    Rng rng(20, 0);
    std::vector<std::uint64_t> ra(nd), fa(nd), rb(nd), fb(nd), fc(nd);
    const double vif = dlm_variance_inflation(0.999);
    for (std::size_t j = 0; j < nd; ++j) {
        const double q = 0.05 + 0.2 * std::sin(0.1 * static_cast<double>(j));
        const double m = 30000.0;
        ra[j] = rb[j] = static_cast<std::uint64_t>(m);
        const double sd = std::sqrt(m * q * (1.0 - q) * vif);
        fa[j] = static_cast<std::uint64_t>(std::max(0.0, m * q + sd * rng.normal()));
        fb[j] = static_cast<std::uint64_t>(std::max(0.0, m * q + sd * rng.normal()));
        fc[j] = static_cast<std::uint64_t>(std::max(0.0, m * (q * 1.1) + sd * rng.normal()));
    }
    CHECK(homogeneity_chi2(ra, fa, rb, fb, 0.999).pass_1pct);
    CHECK_FALSE(homogeneity_chi2(ra, fa, rb, fc, 0.999).pass_1pct);
}

}  // TEST_SUITE
