#include "evsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace evsim {

namespace {

// Inverse standard-normal CDF (Acklam's rational approximation, ~1e-9).
double norm_quantile(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) return -norm_quantile(1.0 - p);
    const double q = p - 0.5, r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

// Quadratic refinement of an extremum around sample i0.
double refine_quadratic(const std::vector<double>& x, const std::vector<double>& y, int i0,
                        int hw) {
    const int a = std::max(0, i0 - hw);
    const int b = std::min<int>(static_cast<int>(y.size()) - 1, i0 + hw);
    // Least-squares parabola y = p0 t^2 + p1 t + p2 with t = x - x[i0].
    double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0, t0 = 0, t1 = 0, t2 = 0;
    for (int i = a; i <= b; ++i) {
        const double t = x[i] - x[i0], v = y[i];
        const double tt = t * t;
        s0 += 1;  s1 += t;  s2 += tt;  s3 += tt * t;  s4 += tt * tt;
        t0 += v;  t1 += v * t;  t2 += v * tt;
    }
    // Solve the 3x3 normal equations by Cramer's rule.
    const double det = s4 * (s2 * s0 - s1 * s1) - s3 * (s3 * s0 - s1 * s2) +
                       s2 * (s3 * s1 - s2 * s2);
    if (std::abs(det) < 1e-300) return x[i0];
    const double p0 = (t2 * (s2 * s0 - s1 * s1) - s3 * (t1 * s0 - s1 * t0) +
                       s2 * (t1 * s1 - s2 * t0)) / det;
    const double p1 = (s4 * (t1 * s0 - t0 * s1) - t2 * (s3 * s0 - s1 * s2) +
                       s2 * (s3 * t0 - s2 * t1)) / det;
    if (std::abs(p0) < 1e-300) return x[i0];
    const double tm = -0.5 * p1 / p0;
    const double lo = x[a] - x[i0], hi = x[b] - x[i0];
    return x[i0] + std::clamp(tm, lo, hi);
}

double inflated_variance(double n, double m, double gamma) {
    if (m <= 0.0) return 0.0;
    return n * (1.0 - n / m) * dlm_variance_inflation(gamma);
}

}  // namespace

double chi2_critical(double dof, double alpha) {
    if (!(dof > 0.0)) throw std::invalid_argument("chi2_critical: dof must be positive");
    const double z = norm_quantile(1.0 - alpha);
    const double t = 2.0 / (9.0 * dof);
    const double u = 1.0 - t + z * std::sqrt(t);
    return dof * u * u * u;
}

double ks_critical_1pct(std::size_t n) { return 1.628 / std::sqrt(static_cast<double>(n)); }

double dlm_variance_inflation(double gamma) { return 1.0 + 4.0 * gamma / (1.0 + gamma); }

std::vector<double> smooth(const std::vector<double>& v, int w) {
    if (w <= 0) return v;
    const int n = static_cast<int>(v.size());
    std::vector<double> out(v.size());
    for (int i = 0; i < n; ++i) {
        const int a = std::max(0, i - w), b = std::min(n - 1, i + w);
        double s = 0.0;
        for (int j = a; j <= b; ++j) s += v[j];
        out[i] = s / (b - a + 1);
    }
    return out;
}

ScaleFit fit_scale(const std::vector<double>& counts, const std::vector<double>& theory) {
    if (counts.size() != theory.size() || counts.empty())
        throw std::invalid_argument("fit_scale: size mismatch");
    double ni = 0.0, ii = 0.0, nn = 0.0;
    for (std::size_t j = 0; j < counts.size(); ++j) {
        ni += counts[j] * theory[j];
        ii += theory[j] * theory[j];
        nn += counts[j] * counts[j];
    }
    if (ii <= 0.0) throw std::invalid_argument("fit_scale: degenerate fit (all-zero theory)");
    if (nn <= 0.0) return {0.0, 0.0};  // nothing fired: zero scale, nothing to misfit
    const double c = ni / ii;
    double r = 0.0;
    for (std::size_t j = 0; j < counts.size(); ++j) {
        const double e = counts[j] - c * theory[j];
        r += e * e;
    }
    return {c, std::sqrt(r / nn)};
}

std::optional<double> fringe_period_central_minima(const std::vector<double>& coords,
                                                   const std::vector<double>& values,
                                                   int smooth_hw) {
    const int n = static_cast<int>(values.size());
    if (n < 5) return std::nullopt;
    const std::vector<double> s = smooth(values, smooth_hw);
    // Central fringe: the interior local maximum nearest the screen midpoint.
    const double mid = 0.5 * (coords.front() + coords.back());
    int im = 0;
    for (int i = 1; i < n; ++i)
        if (std::abs(coords[i] - mid) < std::abs(coords[im] - mid)) im = i;
    int ic = -1;
    for (int off = 0; off < n; ++off) {
        for (int i : {im + off, im - off}) {
            if (i < 1 || i > n - 2) continue;
            if (s[i] >= s[i - 1] && s[i] >= s[i + 1]) {
                ic = i;
                break;
            }
        }
        if (ic >= 0) break;
    }
    if (ic < 0) return std::nullopt;
    const auto first_min = [&](int start, int step) -> std::optional<int> {
        for (int i = start; i > 0 && i < n - 1; i += step)
            if (s[i] <= s[i - 1] && s[i] <= s[i + 1]) return i;
        return std::nullopt;
    };
    const auto il = first_min(ic - 1, -1);
    const auto ir = first_min(ic + 1, +1);
    if (!il || !ir) return std::nullopt;
    // Three-point parabolic vertex around each minimum, offset clamped to one
    // bin width.
    const auto refine3 = [&](int i0) {
        const double a = s[i0 - 1], b = s[i0], c = s[i0 + 1];
        const double den = a - 2.0 * b + c;
        if (std::abs(den) < 1e-300) return coords[i0];
        const double w = 0.5 * (coords[i0 + 1] - coords[i0 - 1]);
        const double d = std::clamp(0.5 * w * (a - c) / den, -w, w);
        return coords[i0] + d;
    };
    return refine3(*ir) - refine3(*il);
}

int count_fringes(const std::vector<double>& coords, const std::vector<double>& values,
                  int smooth_hw, double env_half, double threshold_frac) {
    const int n = static_cast<int>(values.size());
    const std::vector<double> s = smooth(values, smooth_hw);
    double peak = 0.0;
    for (int i = 0; i < n; ++i)
        if (std::abs(coords[i]) <= env_half) peak = std::max(peak, s[i]);
    const double thr = threshold_frac * peak;
    const int w = std::max(1, smooth_hw);
    int cnt = 0;
    for (int i = w; i < n - w; ++i) {
        if (std::abs(coords[i]) > env_half || s[i] < thr) continue;
        bool is_max = true;
        for (int j = i - w; j <= i + w && is_max; ++j)
            if (s[j] > s[i] || (s[j] == s[i] && j < i)) is_max = false;
        if (is_max) ++cnt;
    }
    return cnt;
}

std::optional<double> peak_near(const std::vector<double>& coords,
                                const std::vector<double>& values, int smooth_hw,
                                double target, double halfspan) {
    const int n = static_cast<int>(values.size());
    const std::vector<double> s = smooth(values, smooth_hw);
    int best = -1;
    for (int i = 1; i < n - 1; ++i) {
        if (std::abs(coords[i] - target) > halfspan) continue;
        if (best < 0 || s[i] > s[best]) best = i;
    }
    if (best <= 0 || best >= n - 1) return std::nullopt;
    // The window maximum must be a genuine local peak; otherwise the curve is
    // still rising at the window edge and the real peak lies outside.
    if (s[best] < s[best - 1] || s[best] < s[best + 1]) return std::nullopt;
    return refine_quadratic(coords, s, best, std::max(2, smooth_hw));
}

Chi2Result mirror_symmetry_chi2(const std::vector<std::uint64_t>& received,
                                const std::vector<std::uint64_t>& fired, double gamma,
                                double min_pair_count) {
    const std::size_t n = fired.size();
    Chi2Result out;
    for (std::size_t j = 0; j < n / 2; ++j) {
        const std::size_t jm = n - 1 - j;
        const double na = static_cast<double>(fired[j]), nb = static_cast<double>(fired[jm]);
        if (na + nb < min_pair_count) continue;
        const double va = inflated_variance(na, static_cast<double>(received[j]), gamma);
        const double vb = inflated_variance(nb, static_cast<double>(received[jm]), gamma);
        if (va + vb <= 0.0) continue;
        out.chi2 += (na - nb) * (na - nb) / (va + vb);
        ++out.dof;
    }
    out.pass_1pct = out.dof > 0 && out.chi2 < chi2_critical(out.dof, 0.01);
    return out;
}

Chi2Result homogeneity_chi2(const std::vector<std::uint64_t>& received_a,
                            const std::vector<std::uint64_t>& fired_a,
                            const std::vector<std::uint64_t>& received_b,
                            const std::vector<std::uint64_t>& fired_b, double gamma,
                            double min_pair_count) {
    if (fired_a.size() != fired_b.size())
        throw std::invalid_argument("homogeneity_chi2: size mismatch");
    Chi2Result out;
    for (std::size_t j = 0; j < fired_a.size(); ++j) {
        const double na = static_cast<double>(fired_a[j]), nb = static_cast<double>(fired_b[j]);
        if (na + nb < min_pair_count) continue;
        const double va = inflated_variance(na, static_cast<double>(received_a[j]), gamma);
        const double vb = inflated_variance(nb, static_cast<double>(received_b[j]), gamma);
        if (va + vb <= 0.0) continue;
        out.chi2 += (na - nb) * (na - nb) / (va + vb);
        ++out.dof;
    }
    out.pass_1pct = out.dof > 0 && out.chi2 < chi2_critical(out.dof, 0.01);
    return out;
}

}  // namespace evsim
