#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace recon::lasso {

// Solution of  min_b { ||y - b0 - X b||^2 + lambda * sum_j |b_j| }  with the
// intercept b0 unpenalized. The sum of squares is NOT divided by n, so lambda
// values are only comparable in these units.
struct LassoFit {
    double intercept = 0.0;
    Eigen::Index n_cols = 0;
    std::vector<std::pair<Eigen::Index, double>> nonzeros;  // ascending index
    std::vector<std::string> names;                         // empty or size n_cols
    double lambda = 0.0;
    double objective = 0.0;
    int sweeps = 0;

    Eigen::VectorXd dense() const {
        Eigen::VectorXd b = Eigen::VectorXd::Zero(n_cols);
        for (const auto& [j, v] : nonzeros) b[j] = v;
        return b;
    }
    Eigen::VectorXd predict(const Eigen::MatrixXd& X) const {
        Eigen::VectorXd out = Eigen::VectorXd::Constant(X.rows(), intercept);
        for (const auto& [j, v] : nonzeros) out += v * X.col(j);
        return out;
    }
    std::size_t n_selected() const { return nonzeros.size(); }
};

// Smallest penalty at which the penalized coefficients are all zero:
// 2 * max_j |x_j' (y - mean(y))|.
double lambda_max(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

// Cyclic coordinate descent with soft thresholding. Sweeps until the largest
// coefficient change falls below 1e-7 and the KKT conditions hold at half the
// reporting tolerance; throws NumericError after 10,000 sweeps.
LassoFit lasso_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda,
                   std::vector<std::string> names = {});

// Largest violation of the stationarity conditions: for zero coefficients
// max(|2 x_j' r| - lambda, 0), for nonzero |2 x_j' r - lambda * sign(b_j)|.
double kkt_violation(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const LassoFit& fit);

struct CvPoint {
    double lambda = 0.0;
    double mean_rmse = 0.0;
    double sd_rmse = 0.0;  // across rep-fold RMSEs
};

struct CvResult {
    double lambda_hat = 0.0;
    std::vector<CvPoint> curve;  // descending lambda
};

// Repeated k-fold cross-validation over a geometric grid from lambda_max down
// to lambda_max * 1e-4. Fold assignment is a seeded permutation redrawn each
// repetition; the winner minimizes the mean held-out RMSE over all rep-fold
// pairs, ties going to the larger (sparser) lambda. Deterministic given seed
// at any worker count.
CvResult lasso_cv(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int reps = 10,
                  int folds = 5, int grid_size = 100, std::uint64_t seed = 0, int workers = 1);

}  // namespace recon::lasso
