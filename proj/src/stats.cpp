#include "cyclodetect/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cyclodetect {

namespace {

// Regularized lower incomplete gamma P(a, x), classic series / continued
// fraction split at x < a + 1 (Lentz's method for the fraction). Both branches
// share the prefactor exp(a ln x - x - lgamma(a)), which stays in range for
// every dof this library meets.
double gamma_p(double a, double x)
{
    if (x <= 0.0) {
        return 0.0;
    }
    const double log_prefactor = a * std::log(x) - x - std::lgamma(a);
    constexpr int kMaxIter = 4000000;
    constexpr double kEps = 1e-17;

    if (x < a + 1.0) {
        // P(a,x) = prefactor * sum_n x^n / (a (a+1) ... (a+n))
        double ap = a;
        double term = 1.0 / a;
        double sum = term;
        for (int n = 0; n < kMaxIter; ++n) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (std::abs(term) < std::abs(sum) * kEps) {
                break;
            }
        }
        return std::exp(log_prefactor) * sum;
    }

    // Q(a,x) via continued fraction, P = 1 - Q.
    constexpr double kTiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        const double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) {
            break;
        }
    }
    return 1.0 - std::exp(log_prefactor) * h;
}

// log of the chi-squared density with `a` = dof/2.
double chi2_log_pdf(double x, double a)
{
    return (a - 1.0) * std::log(x / 2.0) - x / 2.0 - std::lgamma(a)
           - std::log(2.0);
}

// Acklam's rational approximation to the standard normal quantile; only used
// to seed the chi-squared quantile search, so ~1e-9 accuracy is plenty.
double normal_quantile(double p)
{
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
    double q, r;
    if (p < plow) {
        q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q
                + c[5])
               / ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) {
        q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q
                 + c[5])
               / ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    q = p - 0.5;
    r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5])
           * q
           / (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r
              + 1.0);
}

// Exceedance counting against a sorted list: #elements < x plus half the ties,
// divided by the list size.
double midrank_fraction(const std::vector<double>& sorted, double x)
{
    const auto lo = std::lower_bound(sorted.begin(), sorted.end(), x);
    const auto hi = std::upper_bound(sorted.begin(), sorted.end(), x);
    const double below = static_cast<double>(lo - sorted.begin());
    const double ties = static_cast<double>(hi - lo);
    return (below + 0.5 * ties) / static_cast<double>(sorted.size());
}

} // namespace

double chi2_cdf(double x, int dof)
{
    if (dof < 1) {
        throw InvalidSpec("chi2_cdf: dof must be >= 1");
    }
    if (x <= 0.0) {
        return 0.0;
    }
    const double p = gamma_p(0.5 * dof, 0.5 * x);
    return std::min(1.0, std::max(0.0, p));
}

double chi2_quantile(double p, int dof)
{
    if (!(p > 0.0) || !(p < 1.0)) {
        throw InvalidProbability("chi2_quantile: p must lie in (0, 1)");
    }
    if (dof < 1) {
        throw InvalidSpec("chi2_quantile: dof must be >= 1");
    }
    const double k = static_cast<double>(dof);
    const double a = 0.5 * k;

    // Wilson-Hilferty seed; for deep lower tails (where it can go
    // non-positive) fall back on the leading term of the small-x expansion
    // P(a, x/2) ~ (x/2)^a / Gamma(a+1).
    const double z = normal_quantile(p);
    const double wh = 1.0 - 2.0 / (9.0 * k) + z * std::sqrt(2.0 / (9.0 * k));
    double x = k * wh * wh * wh;
    if (!(x > 0.0) || !std::isfinite(x)) {
        x = 2.0 * std::exp((std::log(p) + std::lgamma(a + 1.0)) / a);
    }

    // Bracket, then Newton with bisection fallback.
    double lo = 0.0;
    double hi = std::max(x * 2.0, 1.0);
    while (chi2_cdf(hi, dof) < p) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) {
            break;
        }
    }
    x = std::min(std::max(x, lo + 0.25 * (hi - lo)), hi);

    for (int iter = 0; iter < 200; ++iter) {
        const double f = chi2_cdf(x, dof) - p;
        if (f > 0.0) {
            hi = x;
        } else {
            lo = x;
        }
        if (std::abs(f) < 1e-13) {
            break;
        }
        const double step = f * std::exp(-chi2_log_pdf(x, a));
        double next = x - step;
        if (!(next > lo) || !(next < hi) || !std::isfinite(next)) {
            next = 0.5 * (lo + hi); // Newton left the bracket
        }
        if (std::abs(next - x) < 1e-14 * std::max(1.0, x)) {
            x = next;
            break;
        }
        x = next;
    }
    return x;
}

int glr_dof(NoiseStructureCase c, int n_antennas, int cycle_period,
            int n_blocks)
{
    const long l = n_antennas, p = cycle_period, n = n_blocks;
    long dof = 0;
    switch (c) {
    case NoiseStructureCase::ColoredCorrelated:
        dof = l * l * n * p * (p - 1);
        break;
    case NoiseStructureCase::ColoredUncorrelated:
        dof = l * n * p * (l * p - 1);
        break;
    case NoiseStructureCase::WhiteCorrelated:
        dof = l * l * (n * p * p - 1);
        break;
    case NoiseStructureCase::WhiteUncorrelated:
        dof = l * (l * n * p * p - 1);
        break;
    }
    return static_cast<int>(dof);
}

int avg_stat_dof(NoiseStructureCase c, int n_antennas, int cycle_period)
{
    const long l = n_antennas, p = cycle_period;
    switch (c) {
    case NoiseStructureCase::WhiteCorrelated:
        return static_cast<int>(l * l * (p * p - 1));
    case NoiseStructureCase::WhiteUncorrelated:
        return static_cast<int>(l * (l * p * p - 1));
    default:
        throw WrongCase("avg_stat_dof: averaged statistic is only defined for "
                        "the white-noise cases");
    }
}

int temporal_noise_dof(int n_antennas, int n_bins)
{
    return n_antennas * n_antennas * (n_bins - 1);
}

int spatial_noise_dof(int n_antennas, int n_bins)
{
    return n_bins * n_antennas * (n_antennas - 1);
}

RocCurve roc_and_auc(const std::vector<double>& null_scores,
                     const std::vector<double>& alt_scores)
{
    if (null_scores.empty() || alt_scores.empty()) {
        throw EmptyInput("roc_and_auc: both score lists must be non-empty");
    }
    std::vector<double> nulls = null_scores;
    std::vector<double> alts = alt_scores;
    std::sort(nulls.begin(), nulls.end(), std::greater<>());
    std::sort(alts.begin(), alts.end(), std::greater<>());
    const double n = static_cast<double>(nulls.size());
    const double m = static_cast<double>(alts.size());

    RocCurve roc;
    roc.pfa.push_back(0.0);
    roc.pd.push_back(0.0);

    // Sweep thresholds downward through the pooled distinct scores; each
    // threshold admits everything strictly above it.
    std::size_t i = 0, j = 0;
    while (i < nulls.size() || j < alts.size()) {
        double t;
        if (i < nulls.size() && j < alts.size()) {
            t = std::max(nulls[i], alts[j]);
        } else if (i < nulls.size()) {
            t = nulls[i];
        } else {
            t = alts[j];
        }
        while (i < nulls.size() && nulls[i] == t) ++i;
        while (j < alts.size() && alts[j] == t) ++j;
        roc.pfa.push_back(static_cast<double>(i) / n);
        roc.pd.push_back(static_cast<double>(j) / m);
    }

    double auc = 0.0;
    for (std::size_t k = 1; k < roc.pfa.size(); ++k) {
        auc += (roc.pfa[k] - roc.pfa[k - 1]) * 0.5 * (roc.pd[k] + roc.pd[k - 1]);
    }
    roc.auc = auc;
    return roc;
}

PairedAucDiff paired_auc_diff(const std::vector<double>& null_a,
                              const std::vector<double>& alt_a,
                              const std::vector<double>& null_b,
                              const std::vector<double>& alt_b)
{
    if (null_a.size() != null_b.size() || alt_a.size() != alt_b.size()) {
        throw LengthMismatch("paired_auc_diff: paired lists must align");
    }
    if (null_a.empty() || alt_a.empty()) {
        throw EmptyInput("paired_auc_diff: empty score lists");
    }
    const std::size_t m = alt_a.size();
    const std::size_t n = null_a.size();

    std::vector<double> sn_a = null_a, sn_b = null_b;
    std::vector<double> sa_a = alt_a, sa_b = alt_b;
    std::sort(sn_a.begin(), sn_a.end());
    std::sort(sn_b.begin(), sn_b.end());
    std::sort(sa_a.begin(), sa_a.end());
    std::sort(sa_b.begin(), sa_b.end());

    // DeLong structural components: v10 indexed by alternative trials,
    // v01 by null trials.
    double auc_a = 0.0, auc_b = 0.0;
    std::vector<double> d10(m), d01(n);
    for (std::size_t i = 0; i < m; ++i) {
        const double va = midrank_fraction(sn_a, alt_a[i]);
        const double vb = midrank_fraction(sn_b, alt_b[i]);
        auc_a += va;
        auc_b += vb;
        d10[i] = va - vb;
    }
    auc_a /= static_cast<double>(m);
    auc_b /= static_cast<double>(m);
    for (std::size_t j = 0; j < n; ++j) {
        const double va = 1.0 - midrank_fraction(sa_a, null_a[j]);
        const double vb = 1.0 - midrank_fraction(sa_b, null_b[j]);
        d01[j] = va - vb;
    }

    auto sample_var = [](const std::vector<double>& v) {
        if (v.size() < 2) {
            return 0.0;
        }
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        double acc = 0.0;
        for (double x : v) acc += (x - mean) * (x - mean);
        return acc / static_cast<double>(v.size() - 1);
    };

    PairedAucDiff out;
    out.auc_a = auc_a;
    out.auc_b = auc_b;
    out.diff = auc_a - auc_b;
    out.se = std::sqrt(sample_var(d10) / static_cast<double>(m)
                       + sample_var(d01) / static_cast<double>(n));
    return out;
}

double ks_distance(std::vector<double> samples, int dof)
{
    if (samples.empty()) {
        throw EmptyInput("ks_distance: empty sample list");
    }
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = chi2_cdf(samples[i], dof);
        d = std::max(d, f - static_cast<double>(i) / n);
        d = std::max(d, static_cast<double>(i + 1) / n - f);
    }
    return d;
}

double empirical_threshold(std::vector<double> null_scores, double pfa)
{
    if (null_scores.empty()) {
        throw EmptyInput("empirical_threshold: empty null scores");
    }
    if (!(pfa > 0.0) || !(pfa < 1.0)) {
        throw InvalidProbability("empirical_threshold: pfa must lie in (0, 1)");
    }
    std::sort(null_scores.begin(), null_scores.end(), std::greater<>());
    auto k = static_cast<std::size_t>(pfa * static_cast<double>(null_scores.size()));
    k = std::min(k, null_scores.size() - 1);
    return null_scores[k];
}

} // namespace cyclodetect
