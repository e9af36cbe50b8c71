#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "recon/timeseries.hpp"

namespace recon::num {

// Principal component basis from an SVD of a centered matrix. Sign
// convention: in each loading column the entry of maximum absolute value is
// positive, so bases are reproducible across platforms.
struct PCBasis {
    Eigen::MatrixXd loadings;             // p x k, orthonormal columns
    Eigen::MatrixXd scores;               // n x k, scores = X * loadings
    std::vector<double> explained_variance;  // descending, denominator n-1
};

// principal_components(X, k): X must be column-centered by the caller.
// Throws NumericError if k exceeds min(rows, cols) or the numerical rank.
PCBasis principal_components(const Eigen::MatrixXd& X, int k);

struct LinearFit {
    double intercept = 0.0;
    std::vector<std::string> names;
    Eigen::VectorXd coefficients;
    TimeSeries residuals;
    double sse = 0.0;

    // Fitted map applied to new rows (columns in training order).
    Eigen::VectorXd predict(const Eigen::MatrixXd& X) const {
        return (X * coefficients).array() + intercept;
    }
};

// Least squares, QR based, no pseudo-inverse fallback: a rank-deficient
// design throws NumericError. With intercept=false the intercept is fixed
// at zero. X may have zero columns (intercept-only model).
// start_year indexes the residual series.
LinearFit ols_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, bool intercept = true,
                  std::vector<std::string> names = {}, int start_year = 0);

// Local quadratic regression with tricube weights over the ceil(span * n)
// nearest neighbors of each point, evaluated at every year. No robustness
// iterations.
TimeSeries loess_smooth(const TimeSeries& s, double span);
Eigen::VectorXd loess_smooth(const Eigen::VectorXd& y, double span);

double rmse(const Eigen::VectorXd& pred, const Eigen::VectorXd& actual);

struct DiffDiagnostics {
    double corr = 0.0;
    double corr_pvalue = 1.0;  // classical t reference; descriptive only
    int sign_agree = 0;
    int sign_total = 0;  // ties in either difference excluded
    double sign_pvalue = 1.0;  // exact two-sided binomial(sign_total, 1/2)
};

// First-difference agreement between prediction and truth.
DiffDiagnostics diff_diagnostics(const TimeSeries& pred, const TimeSeries& actual);

}  // namespace recon::num
