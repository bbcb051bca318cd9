#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace evsim {

// Upper-tail chi-square critical value by the Wilson-Hilferty approximation.
// `alpha` is the tail probability (e.g. 0.01 for the 1% level).
double chi2_critical(double dof, double alpha);

// One-sample Kolmogorov-Smirnov critical value at the 1% level (asymptotic).
double ks_critical_1pct(std::size_t n);

// Variance inflation of the firing count of a memory-gamma threshold detector
// relative to an independent-Bernoulli count: successive firings are
// positively correlated through the internal vector, Var(N) ~ N (1 - N/M)
// times this factor (~3 at gamma = 0.999).  Without it a chi-square on firing
// counts of a *correct* simulator lands at chi2/dof ~ 2-3.
double dlm_variance_inflation(double gamma);

// Moving-average smoothing with half-width w (window 2w+1, edges truncated).
std::vector<double> smooth(const std::vector<double>& v, int w);

// Least-squares scale fit of counts against a theory curve:
//   c = sum(N I) / sum(I^2),  nrmse = sqrt(sum((N - c I)^2) / sum(N^2)).
struct ScaleFit {
    double scale;
    double nrmse;
};
ScaleFit fit_scale(const std::vector<double>& counts, const std::vector<double>& theory);

// Fringe period from the two central interior minima: smooth, take the local
// maximum nearest the screen midpoint as the central fringe, walk outward to
// the first local minimum on each side, refine both by the parabola through
// the three samples around each minimum.  (A global-maximum pick is unstable
// when the envelope decay per fringe is comparable to the bin-sampling wobble
// of the fringe peaks; a wide least-squares parabola is biased by asymmetric
// fringe shoulders.)  Empty when no flanking minima exist.
std::optional<double> fringe_period_central_minima(const std::vector<double>& coords,
                                                   const std::vector<double>& values,
                                                   int smooth_hw);

// Number of fringe maxima within |coord| <= env_half: local maxima of the
// smoothed curve exceeding `threshold_frac` of the in-envelope peak.
int count_fringes(const std::vector<double>& coords, const std::vector<double>& values,
                  int smooth_hw, double env_half, double threshold_frac = 0.25);

// Refined position of the local maximum of the smoothed curve nearest to
// `target` within +-halfspan.  Empty when no interior maximum is found.
std::optional<double> peak_near(const std::vector<double>& coords,
                                const std::vector<double>& values, int smooth_hw,
                                double target, double halfspan);

// Chi-square between a profile and its mirror image (detector j vs n-1-j),
// using the inflated detector variance; pairs with fewer than `min_pair_count`
// total firings are pooled out.  Returns the statistic and the dof.
struct Chi2Result {
    double chi2 = 0.0;
    int dof = 0;
    bool pass_1pct = false;
};
Chi2Result mirror_symmetry_chi2(const std::vector<std::uint64_t>& received,
                                const std::vector<std::uint64_t>& fired, double gamma,
                                double min_pair_count = 40.0);

// Chi-square homogeneity between two independent runs of equal total budget
// (e.g. merged replicas vs one long run), inflated variances as above.
Chi2Result homogeneity_chi2(const std::vector<std::uint64_t>& received_a,
                            const std::vector<std::uint64_t>& fired_a,
                            const std::vector<std::uint64_t>& received_b,
                            const std::vector<std::uint64_t>& fired_b, double gamma,
                            double min_pair_count = 40.0);

}  // namespace evsim
