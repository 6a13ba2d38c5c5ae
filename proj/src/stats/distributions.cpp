#include <cmath>
#include <limits>

#include "mobility/error.hpp"
#include "mobility/stats.hpp"

namespace mobility::stats {

namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxIterations = 20000;

// Stirling tail of log Gamma: lgamma(z) - [(z - 0.5) ln z - z + 0.5 ln 2pi].
double stirling_tail(double z) {
    const double z2 = z * z;
    return (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - 1.0 / (1680.0 * z2)) / z2) / z2) / z;
}

// ln B(a, b) without catastrophic cancellation when a or b is large.
double log_beta(double a, double b) {
    if (a < b) std::swap(a, b);  // a >= b
    if (a < 10.0) return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    // ln G(a) - ln G(a + b) via Stirling, arranged around log1p(b / a).
    const double ratio = -(a - 0.5) * std::log1p(b / a) - b * std::log(a + b) + b + stirling_tail(a) -
                         stirling_tail(a + b);
    return std::lgamma(b) + ratio;
}

// Modified Lentz evaluation of the incomplete beta continued fraction.
double beta_continued_fraction(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kEps) return h;
    }
    throw Error("incomplete beta continued fraction did not converge");
}

// x^a (1-x)^b / (a B(a,b)) with ln x and ln(1-x) supplied by the caller.
double beta_front(double a, double b, double log_x, double log_1mx) {
    return std::exp(a * log_x + b * log_1mx - log_beta(a, b)) / a;
}

// I_x(a, b) given both x and 1 - x to keep precision near either end.
double incomplete_beta(double a, double b, double x, double one_minus_x, double log_x, double log_1mx) {
    if (x <= 0.0) return 0.0;
    if (one_minus_x <= 0.0) return 1.0;
    if (x < (a + 1.0) / (a + b + 2.0)) return beta_front(a, b, log_x, log_1mx) * beta_continued_fraction(a, b, x);
    return 1.0 - beta_front(b, a, log_1mx, log_x) * beta_continued_fraction(b, a, one_minus_x);
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("incomplete beta needs a, b > 0");
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("incomplete beta needs x in [0, 1]");
    return incomplete_beta(a, b, x, 1.0 - x, std::log(x), std::log1p(-x));
}

double student_t_sf(double t, double dof) {
    if (!std::isfinite(t)) throw DataError("student_t_sf: non-finite t");
    if (!(dof > 0.0)) throw DataError("student_t_sf: dof must be positive");
    if (t == 0.0) return 0.5;
    // P(|T| > |t|) = I_x(dof/2, 1/2) with x = dof / (dof + t^2)
    const double t2 = t * t;
    const double x = dof / (dof + t2);
    const double one_minus_x = t2 / (dof + t2);
    const double log_x = -std::log1p(t2 / dof);
    const double log_1mx = std::log(t2) - std::log(dof + t2);
    const double two_tail = incomplete_beta(dof / 2.0, 0.5, x, one_minus_x, log_x, log_1mx);
    return t > 0.0 ? 0.5 * two_tail : 1.0 - 0.5 * two_tail;
}

double student_t_quantile(double prob, double dof) {
    if (!(prob > 0.0 && prob < 1.0)) throw std::domain_error("student_t_quantile: prob must be in (0, 1)");
    if (!(dof > 0.0)) throw std::domain_error("student_t_quantile: dof must be positive");
    if (prob == 0.5) return 0.0;
    if (prob < 0.5) return -student_t_quantile(1.0 - prob, dof);
    const double tail = 1.0 - prob;
    double lo = 0.0;
    double hi = 1.0;
    while (student_t_sf(hi, dof) > tail) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) return INFINITY;
    }
    // bisection to full double resolution; the sf is monotone in t
    for (int i = 0; i < 200 && hi - lo > 4 * std::numeric_limits<double>::epsilon() * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (student_t_sf(mid, dof) > tail)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

double normal_quantile(double prob) {
    if (!(prob > 0.0 && prob < 1.0)) throw std::domain_error("normal_quantile: prob must be in (0, 1)");
    // Acklam's rational approximation followed by one Halley step.
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                   1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                   6.680131188771972e+01,  -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                   -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                   3.754408661907416e+00};
    constexpr double low = 0.02425;
    double x = 0.0;
    if (prob < low) {
        const double q = std::sqrt(-2.0 * std::log(prob));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (prob <= 1.0 - low) {
        const double q = prob - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-prob));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // Halley refinement against the lower-tail CDF.
    for (int i = 0; i < 2; ++i) {
        const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - prob;
        const double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
        x -= u / (1.0 + x * u / 2.0);
    }
    return x;
}

}  // namespace mobility::stats
