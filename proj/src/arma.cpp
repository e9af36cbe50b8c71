#include "recon/arma.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "recon/errors.hpp"

namespace recon::nulls {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Levinson-Durbin step: partial autocorrelations in (-1, 1) to the
// coefficients of a stationary AR polynomial 1 - a_1 z - ... - a_k z^k.
std::vector<double> pacf_to_coef(const std::vector<double>& r) {
    std::vector<double> a(r.size(), 0.0);
    for (std::size_t j = 0; j < r.size(); ++j) {
        const std::vector<double> prev = a;
        a[j] = r[j];
        for (std::size_t i = 0; i < j; ++i) a[i] = prev[i] - r[j] * prev[j - 1 - i];
    }
    return a;
}

// Inverse map; entries with |pacf| >= 1 signal a non-stationary polynomial.
std::vector<double> coef_to_pacf(std::vector<double> a) {
    std::vector<double> r(a.size(), 0.0);
    for (std::size_t j = a.size(); j-- > 0;) {
        r[j] = a[j];
        if (std::abs(r[j]) >= 1.0) return r;  // caller checks
        std::vector<double> prev(j);
        for (std::size_t i = 0; i < j; ++i)
            prev[i] = (a[i] + r[j] * a[j - 1 - i]) / (1.0 - r[j] * r[j]);
        for (std::size_t i = 0; i < j; ++i) a[i] = prev[i];
    }
    return r;
}

// |u| capped so pacf magnitudes stay a hair inside the unit interval; the
// implied polynomial roots then clear the unit circle by > 1e-6.
double bounded_tanh(double u) { return std::tanh(std::clamp(u, -6.0, 6.0)); }

struct StateSpace {
    Eigen::MatrixXd T;
    Eigen::MatrixXd RR;  // R R' with R = (1, theta_1, ..., theta_{m-1})'
    int m = 1;
};

StateSpace build_state_space(const std::vector<double>& ar, const std::vector<double>& ma) {
    const int p = static_cast<int>(ar.size());
    const int q = static_cast<int>(ma.size());
    const int m = std::max(p, q + 1);
    StateSpace ss;
    ss.m = m;
    ss.T = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < p; ++i) ss.T(i, 0) = ar[static_cast<std::size_t>(i)];
    for (int i = 0; i + 1 < m; ++i) ss.T(i, i + 1) = 1.0;
    Eigen::VectorXd R = Eigen::VectorXd::Zero(m);
    R[0] = 1.0;
    for (int i = 0; i < q; ++i) R[i + 1] = ma[static_cast<std::size_t>(i)];
    ss.RR = R * R.transpose();
    return ss;
}

// Stationary state covariance: vec(P) = (I - T (x) T)^{-1} vec(RR).
Eigen::MatrixXd stationary_cov(const StateSpace& ss) {
    const int m = ss.m;
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(m * m, m * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k)
                for (int l = 0; l < m; ++l) A(i * m + k, j * m + l) -= ss.T(i, j) * ss.T(k, l);
    Eigen::VectorXd vecRR(m * m);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) vecRR[j * m + i] = ss.RR(i, j);
    const Eigen::VectorXd vecP = A.partialPivLu().solve(vecRR);
    Eigen::MatrixXd P(m, m);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) P(i, j) = vecP[j * m + i];
    return P;
}

struct LikResult {
    double loglik = kNegInf;
    double sigma2 = 0.0;
};

// Concentrated exact Gaussian log likelihood: the filter runs at unit
// innovation variance and sigma2 is replaced by its maximizer.
LikResult concentrated_loglik(const Eigen::VectorXd& x, const std::vector<double>& ar,
                              const std::vector<double>& ma) {
    const StateSpace ss = build_state_space(ar, ma);
    const int m = ss.m;
    const Eigen::Index n = x.size();

    Eigen::MatrixXd P = stationary_cov(ss);
    if (!P.allFinite()) return {};
    Eigen::VectorXd a = Eigen::VectorXd::Zero(m);
    double wss = 0.0;
    double log_f = 0.0;
    for (Eigen::Index t = 0; t < n; ++t) {
        const double F = P(0, 0);
        if (!(F > 1e-12) || !std::isfinite(F)) return {};
        const double v = x[t] - a[0];
        wss += v * v / F;
        log_f += std::log(F);
        const Eigen::VectorXd K = ss.T * P.col(0) / F;
        a = ss.T * a + K * v;
        P = ss.T * P * ss.T.transpose() + ss.RR - K * K.transpose() * F;
    }
    LikResult out;
    out.sigma2 = wss / static_cast<double>(n);
    if (!(out.sigma2 > 0.0)) return {};
    out.loglik = -0.5 * static_cast<double>(n) *
                     (std::log(2.0 * std::numbers::pi) + 1.0 + std::log(out.sigma2)) -
                 0.5 * log_f;
    return out;
}

// Deterministic Nelder-Mead on an unconstrained vector.
struct SimplexResult {
    Eigen::VectorXd x;
    double f = kNegInf;
};

SimplexResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                          const Eigen::VectorXd& x0, double step) {
    const int d = static_cast<int>(x0.size());
    const int max_iter = 400 * d;
    std::vector<Eigen::VectorXd> pts(static_cast<std::size_t>(d) + 1, x0);
    for (int i = 0; i < d; ++i) pts[static_cast<std::size_t>(i) + 1][i] += step;
    std::vector<double> fv;
    fv.reserve(pts.size());
    for (const auto& pt : pts) fv.push_back(f(pt));

    auto order = [&] {
        std::vector<std::size_t> idx(pts.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        std::vector<Eigen::VectorXd> p2;
        std::vector<double> f2;
        for (std::size_t i : idx) {
            p2.push_back(pts[i]);
            f2.push_back(fv[i]);
        }
        pts.swap(p2);
        fv.swap(f2);
    };

    for (int it = 0; it < max_iter; ++it) {
        order();
        double spread = 0.0;
        for (std::size_t i = 1; i < pts.size(); ++i)
            spread = std::max(spread, (pts[i] - pts[0]).cwiseAbs().maxCoeff());
        if (std::abs(fv.back() - fv.front()) < 1e-10 * (1.0 + std::abs(fv.front())) &&
            spread < 1e-8)
            break;

        Eigen::VectorXd c = Eigen::VectorXd::Zero(d);
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) c += pts[i];
        c /= static_cast<double>(d);

        const Eigen::VectorXd xr = c + (c - pts.back());
        const double fr = f(xr);
        if (fr < fv.front()) {
            const Eigen::VectorXd xe = c + 2.0 * (c - pts.back());
            const double fe = f(xe);
            if (fe < fr) {
                pts.back() = xe;
                fv.back() = fe;
            } else {
                pts.back() = xr;
                fv.back() = fr;
            }
        } else if (fr < fv[fv.size() - 2]) {
            pts.back() = xr;
            fv.back() = fr;
        } else {
            const Eigen::VectorXd xc = c + 0.5 * (pts.back() - c);
            const double fc = f(xc);
            if (fc < fv.back()) {
                pts.back() = xc;
                fv.back() = fc;
            } else {
                for (std::size_t i = 1; i < pts.size(); ++i) {
                    pts[i] = pts[0] + 0.5 * (pts[i] - pts[0]);
                    fv[i] = f(pts[i]);
                }
            }
        }
    }
    order();
    return {pts[0], fv[0]};
}

std::vector<double> ar_from_u(const Eigen::VectorXd& u, int p) {
    std::vector<double> r(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) r[static_cast<std::size_t>(i)] = bounded_tanh(u[i]);
    return pacf_to_coef(r);
}

std::vector<double> ma_from_u(const Eigen::VectorXd& u, int p, int q) {
    std::vector<double> r(static_cast<std::size_t>(q));
    for (int i = 0; i < q; ++i) r[static_cast<std::size_t>(i)] = bounded_tanh(u[p + i]);
    std::vector<double> a = pacf_to_coef(r);
    for (double& v : a) v = -v;  // invertible polynomial 1 + theta_1 z + ...
    return a;
}

}  // namespace

double fit_ar1(const TimeSeries& s) {
    if (s.size() < 3) throw DataError("fit_ar1: need length >= 3");
    const Eigen::VectorXd x = s.to_vector();
    const Eigen::VectorXd c = x.array() - x.mean();
    const double denom = c.squaredNorm();
    if (!(denom > 0.0)) throw NumericError("fit_ar1: zero variance");
    double num = 0.0;
    for (Eigen::Index t = 1; t < c.size(); ++t) num += c[t] * c[t - 1];
    return std::clamp(num / denom, -0.999, 0.999);
}

double arma_loglik(const TimeSeries& s, const std::vector<double>& ar,
                   const std::vector<double>& ma, double mean) {
    const Eigen::VectorXd x = s.to_vector().array() - mean;
    return concentrated_loglik(x, ar, ma).loglik;
}

ArmaModel fit_arma(const TimeSeries& s, int p, int q) {
    if (p < 0 || p > 5 || q < 0 || q > 5) throw ConfigError("fit_arma: orders must be in 0..5");
    const Eigen::VectorXd y = s.to_vector();
    const Eigen::Index n = y.size();
    if (n <= p + q + 2) throw DataError("fit_arma: series too short for requested orders");

    ArmaModel m;
    m.p = p;
    m.q = q;

    if (p == 0 && q == 0) {
        m.mean = y.mean();
        m.sigma2 = (y.array() - m.mean).square().sum() / static_cast<double>(n);
        m.loglik = -0.5 * static_cast<double>(n) *
                   (std::log(2.0 * std::numbers::pi) + 1.0 + std::log(m.sigma2));
        m.aic = -2.0 * m.loglik + 2.0 * (p + q + 2);
        return m;
    }

    const double ybar = y.mean();
    const int d = p + q + 1;  // pacf parameters plus the mean
    auto neg = [&](const Eigen::VectorXd& u) {
        const Eigen::VectorXd x = y.array() - u[d - 1];
        const double ll = concentrated_loglik(x, ar_from_u(u, p), ma_from_u(u, p, q)).loglik;
        return std::isfinite(ll) ? -ll : 1e30;
    };

    // Three deterministic starts: all-zero, a lag-1-autocorrelation start on
    // the first AR slot, and a mildly positive start on every slot.
    std::vector<Eigen::VectorXd> starts;
    Eigen::VectorXd u0 = Eigen::VectorXd::Zero(d);
    u0[d - 1] = ybar;
    starts.push_back(u0);
    if (p > 0) {
        Eigen::VectorXd u1 = u0;
        u1[0] = std::atanh(std::clamp(fit_ar1(s), -0.9, 0.9));
        starts.push_back(u1);
    }
    Eigen::VectorXd u2 = u0;
    for (int i = 0; i + 1 < d; ++i) u2[i] = std::atanh(0.2);
    starts.push_back(u2);

    SimplexResult best;
    best.f = std::numeric_limits<double>::infinity();
    for (const auto& s0 : starts) {
        const SimplexResult r = nelder_mead(neg, s0, 0.25);
        if (r.f < best.f) best = r;
    }
    best = nelder_mead(neg, best.x, 0.05);  // polish with a fresh simplex
    if (!std::isfinite(best.f) || best.f >= 1e30)
        throw NumericError("fit_arma(" + std::to_string(p) + "," + std::to_string(q) +
                           "): optimizer failed from all starts");

    m.ar = ar_from_u(best.x, p);
    m.ma = ma_from_u(best.x, p, q);
    m.mean = best.x[d - 1];
    const LikResult lik = concentrated_loglik(Eigen::VectorXd(y.array() - m.mean), m.ar, m.ma);
    if (!std::isfinite(lik.loglik))
        throw NumericError("fit_arma: likelihood not finite at the optimum");
    m.sigma2 = lik.sigma2;
    m.loglik = lik.loglik;
    m.aic = -2.0 * m.loglik + 2.0 * (p + q + 2);

    // The transform keeps parameters strictly inside the region; a fit pinned
    // against the cap is a boundary (unit root) solution we refuse to report.
    std::vector<double> neg_ma = m.ma;
    for (double& v : neg_ma) v = -v;
    for (const auto& coefs : {m.ar, neg_ma})
        for (double r : coef_to_pacf(coefs))
            if (std::abs(r) > 0.9999879)
                throw NumericError("fit_arma: boundary (unit-root) solution");
    return m;
}

ArmaModel arma_select(const TimeSeries& s, int p_max, int q_max,
                      std::vector<std::string>* skipped) {
    if (p_max < 0 || p_max > 5 || q_max < 0 || q_max > 5)
        throw ConfigError("arma_select: order bounds must be in 0..5");
    bool have = false;
    ArmaModel best;
    for (int p = 0; p <= p_max; ++p)
        for (int q = 0; q <= q_max; ++q) {
            try {
                ArmaModel m = fit_arma(s, p, q);
                if (!have || m.aic < best.aic) {
                    best = std::move(m);
                    have = true;
                }
            } catch (const std::exception& e) {
                if (skipped)
                    skipped->push_back("(" + std::to_string(p) + "," + std::to_string(q) +
                                       "): " + e.what());
            }
        }
    if (!have) throw NumericError("arma_select: every (p,q) fit failed");
    return best;
}

Eigen::VectorXd arma_forecast(const ArmaModel& m, const TimeSeries& history, int h) {
    if (h < 1) throw ConfigError("arma_forecast: h must be >= 1");
    const Eigen::VectorXd x = history.to_vector().array() - m.mean;
    const StateSpace ss = build_state_space(m.ar, m.ma);

    Eigen::MatrixXd P = stationary_cov(ss);
    Eigen::VectorXd a = Eigen::VectorXd::Zero(ss.m);
    for (Eigen::Index t = 0; t < x.size(); ++t) {
        const double F = P(0, 0);
        if (!(F > 1e-12)) throw NumericError("arma_forecast: degenerate filter variance");
        const double v = x[t] - a[0];
        const Eigen::VectorXd K = ss.T * P.col(0) / F;
        a = ss.T * a + K * v;
        P = ss.T * P * ss.T.transpose() + ss.RR - K * K.transpose() * F;
    }
    Eigen::VectorXd out(h);
    for (int k = 0; k < h; ++k) {
        out[k] = m.mean + a[0];
        a = ss.T * a;
    }
    return out;
}

}  // namespace recon::nulls
