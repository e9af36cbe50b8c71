#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "recon/timeseries.hpp"

namespace recon::nulls {

// Gaussian ARMA(p, q) fitted by exact maximum likelihood.
struct ArmaModel {
    int p = 0;
    int q = 0;
    std::vector<double> ar;  // x_t = sum ar_i x_{t-i} + e_t + sum ma_j e_{t-j}
    std::vector<double> ma;
    double mean = 0.0;
    double sigma2 = 1.0;
    double loglik = 0.0;
    double aic = 0.0;  // -2 loglik + 2 (p + q + 2): mean and sigma2 counted
};

// Lag-1 sample autocorrelation of the demeaned series, clamped to
// (-0.999, 0.999).
double fit_ar1(const TimeSeries& s);

// Exact Gaussian likelihood through the state-space innovations recursion,
// maximized by a deterministic multi-start simplex search over a partial
// autocorrelation reparameterization (stationarity and invertibility are
// built into the transform). sigma2 is concentrated out analytically.
ArmaModel fit_arma(const TimeSeries& s, int p, int q);

// Concentrated log likelihood at given parameters (sigma2 maximized out).
// Used for optimizer sanity checks.
double arma_loglik(const TimeSeries& s, const std::vector<double>& ar,
                   const std::vector<double>& ma, double mean);

// Best-AIC model over the (p, q) grid [0, p_max] x [0, q_max]. Failed fits
// are skipped (and listed in `skipped` when provided); throws if all fail.
ArmaModel arma_select(const TimeSeries& s, int p_max = 5, int q_max = 5,
                      std::vector<std::string>* skipped = nullptr);

// Mean forecast h steps past the end of `history`; converges to the fitted
// mean as h grows.
Eigen::VectorXd arma_forecast(const ArmaModel& m, const TimeSeries& history, int h);

}  // namespace recon::nulls
