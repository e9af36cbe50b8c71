#include "recon/special.hpp"

#include <cmath>
#include <stdexcept>

namespace recon::special {

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-14;
    constexpr double kFpMin = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw std::runtime_error("incomplete_beta: continued fraction did not converge");
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double nu) {
    const double x = nu / (nu + t * t);
    const double tail = 0.5 * incomplete_beta(nu / 2.0, 0.5, x);
    return t >= 0.0 ? 1.0 - tail : tail;
}

double corr_pvalue(double r, int n) {
    if (n < 3) throw std::invalid_argument("corr_pvalue: need n >= 3");
    r = std::clamp(r, -1.0, 1.0);
    if (std::fabs(r) >= 1.0) return 0.0;
    const double nu = n - 2;
    const double t = r * std::sqrt(nu / (1.0 - r * r));
    return 2.0 * (1.0 - student_t_cdf(std::fabs(t), nu));
}

double binom_test_half(int k, int n) {
    if (n <= 0 || k < 0 || k > n) throw std::invalid_argument("binom_test_half: bad arguments");
    const double ln_half_n = n * std::log(0.5);
    auto log_pmf = [&](int j) {
        return std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0) + ln_half_n;
    };
    const double lp_obs = log_pmf(k);
    double p = 0.0;
    for (int j = 0; j <= n; ++j) {
        const double lp = log_pmf(j);
        if (lp <= lp_obs + 1e-12) p += std::exp(lp);
    }
    return std::min(p, 1.0);
}

}  // namespace recon::special
