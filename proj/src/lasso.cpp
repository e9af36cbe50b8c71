#include "recon/lasso.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "recon/errors.hpp"
#include "recon/parallel.hpp"
#include "recon/rng.hpp"

namespace recon::lasso {

namespace {

double soft_threshold(double z, double gamma) {
    if (z > gamma) return z - gamma;
    if (z < -gamma) return z + gamma;
    return 0.0;
}

// Core solver on column-centered data. Returns the coefficient vector; the
// caller restores the intercept as mean(y) - mean(X) * beta.
struct CoreResult {
    Eigen::VectorXd beta;
    double sse = 0.0;
    int sweeps = 0;
};

CoreResult descend(const Eigen::MatrixXd& Xc, const Eigen::VectorXd& yc, double lambda,
                   Eigen::VectorXd beta0) {
    constexpr double kChangeTol = 1e-7;
    constexpr double kKktTol = 0.5e-5;  // half the reported invariant tolerance
    constexpr int kMaxSweeps = 10000;

    const Eigen::Index p = Xc.cols();
    Eigen::VectorXd beta = std::move(beta0);
    if (beta.size() != p) beta = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd colsq(p);
    for (Eigen::Index j = 0; j < p; ++j) colsq[j] = Xc.col(j).squaredNorm();

    Eigen::VectorXd r = yc;
    for (Eigen::Index j = 0; j < p; ++j)
        if (beta[j] != 0.0) r -= beta[j] * Xc.col(j);

    double objective = r.squaredNorm() + lambda * beta.cwiseAbs().sum();
    std::vector<Eigen::Index> active;
    active.reserve(static_cast<std::size_t>(p));

    auto sweep = [&](const std::vector<Eigen::Index>* subset) {
        double max_change = 0.0;
        auto update = [&](Eigen::Index j) {
            if (colsq[j] <= 0.0) return;  // centered-out (constant) column stays at 0
            const double old = beta[j];
            const double rho = Xc.col(j).dot(r) + colsq[j] * old;
            const double bnew = soft_threshold(rho, lambda / 2.0) / colsq[j];
            if (bnew != old) {
                r += (old - bnew) * Xc.col(j);
                beta[j] = bnew;
                max_change = std::max(max_change, std::abs(bnew - old));
            }
        };
        if (subset) {
            for (Eigen::Index j : *subset) update(j);
        } else {
            for (Eigen::Index j = 0; j < p; ++j) update(j);
        }
        const double obj = r.squaredNorm() + lambda * beta.cwiseAbs().sum();
        if (obj > objective + 1e-9 * (1.0 + std::abs(objective)))
            throw NumericError("lasso_fit: objective increased within a sweep");
        objective = obj;
        return max_change;
    };

    auto kkt_ok = [&]() {
        for (Eigen::Index j = 0; j < p; ++j) {
            const double g = 2.0 * Xc.col(j).dot(r);
            if (beta[j] == 0.0) {
                if (std::abs(g) > lambda + kKktTol) return false;
            } else if (std::abs(g - lambda * (beta[j] > 0 ? 1.0 : -1.0)) > kKktTol) {
                return false;
            }
        }
        return true;
    };

    int sweeps = 0;
    for (;;) {
        if (sweeps >= kMaxSweeps)
            throw NumericError("lasso_fit: no convergence after " + std::to_string(sweeps) +
                               " sweeps");
        double change = sweep(nullptr);
        ++sweeps;
        if (change < kChangeTol && kkt_ok()) break;

        // Iterate on the current active set until it stabilizes, then rescan.
        active.clear();
        for (Eigen::Index j = 0; j < p; ++j)
            if (beta[j] != 0.0) active.push_back(j);
        while (!active.empty() && sweeps < kMaxSweeps) {
            change = sweep(&active);
            ++sweeps;
            if (change < kChangeTol) break;
        }
    }
    return {std::move(beta), r.squaredNorm(), sweeps};
}

struct Centered {
    Eigen::MatrixXd Xc;
    Eigen::VectorXd yc;
    Eigen::VectorXd col_means;
    double y_mean = 0.0;
};

Centered center(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    Centered c;
    c.y_mean = y.mean();
    c.yc = y.array() - c.y_mean;
    c.col_means = X.colwise().mean();
    c.Xc = X.rowwise() - c.col_means.transpose();
    return c;
}

}  // namespace

double lambda_max(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    if (X.cols() == 0) throw NumericError("lambda_max: empty design");
    if (X.rows() != y.size()) throw NumericError("lambda_max: row count mismatch");
    const Eigen::VectorXd yc = y.array() - y.mean();
    return 2.0 * (X.transpose() * yc).cwiseAbs().maxCoeff();
}

LassoFit lasso_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda,
                   std::vector<std::string> names) {
    if (X.rows() != y.size()) throw NumericError("lasso_fit: row count mismatch");
    if (lambda < 0.0) throw NumericError("lasso_fit: lambda must be >= 0");
    if (!names.empty() && static_cast<Eigen::Index>(names.size()) != X.cols())
        throw NumericError("lasso_fit: name count mismatch");

    const Centered c = center(X, y);
    CoreResult core = descend(c.Xc, c.yc, lambda, Eigen::VectorXd());

    LassoFit fit;
    fit.n_cols = X.cols();
    fit.names = std::move(names);
    fit.lambda = lambda;
    fit.sweeps = core.sweeps;
    fit.intercept = c.y_mean - c.col_means.dot(core.beta);
    for (Eigen::Index j = 0; j < X.cols(); ++j)
        if (core.beta[j] != 0.0) fit.nonzeros.emplace_back(j, core.beta[j]);
    fit.objective = core.sse + lambda * core.beta.cwiseAbs().sum();
    return fit;
}

double kkt_violation(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const LassoFit& fit) {
    const Eigen::VectorXd beta = fit.dense();
    const Eigen::VectorXd r = y - fit.predict(X);
    double worst = 0.0;
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
        const double g = 2.0 * X.col(j).dot(r);
        double v;
        if (beta[j] == 0.0) {
            v = std::max(std::abs(g) - fit.lambda, 0.0);
        } else {
            v = std::abs(g - fit.lambda * (beta[j] > 0 ? 1.0 : -1.0));
        }
        worst = std::max(worst, v);
    }
    return worst;
}

CvResult lasso_cv(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int reps, int folds,
                  int grid_size, std::uint64_t seed, int workers) {
    const Eigen::Index n = X.rows();
    if (n != y.size()) throw NumericError("lasso_cv: row count mismatch");
    if (folds < 2 || n < folds) throw ConfigError("lasso_cv: degenerate folds");
    if (reps < 1 || grid_size < 2) throw ConfigError("lasso_cv: bad reps/grid");

    const double lmax = lambda_max(X, y);
    std::vector<double> grid(static_cast<std::size_t>(grid_size));
    for (int i = 0; i < grid_size; ++i)
        grid[static_cast<std::size_t>(i)] = lmax * std::pow(1e-4, static_cast<double>(i) / (grid_size - 1));

    // Fold labels per repetition, fixed up front so evaluation order is free.
    std::vector<std::vector<int>> fold_of(static_cast<std::size_t>(reps));
    for (int r = 0; r < reps; ++r) {
        RngStream rng = RngStream::substream(seed, {0xCF01, static_cast<std::uint64_t>(r)});
        const auto perm = rng.permutation(static_cast<std::size_t>(n));
        auto& f = fold_of[static_cast<std::size_t>(r)];
        f.resize(static_cast<std::size_t>(n));
        for (std::size_t i = 0; i < perm.size(); ++i) f[perm[i]] = static_cast<int>(i % static_cast<std::size_t>(folds));
    }

    const std::size_t n_tasks = static_cast<std::size_t>(reps) * static_cast<std::size_t>(folds);
    // rmse_at[task][lambda index]
    std::vector<std::vector<double>> rmse_at(n_tasks, std::vector<double>(grid.size(), 0.0));

    parallel_for(n_tasks, workers, [&](std::size_t task) {
        const int rep = static_cast<int>(task) / folds;
        const int fold = static_cast<int>(task) % folds;
        const auto& labels = fold_of[static_cast<std::size_t>(rep)];

        std::vector<Eigen::Index> train, test;
        for (Eigen::Index i = 0; i < n; ++i)
            (labels[static_cast<std::size_t>(i)] == fold ? test : train).push_back(i);
        if (test.empty() || train.empty()) throw ConfigError("lasso_cv: degenerate folds");

        Eigen::MatrixXd Xtr(train.size(), X.cols()), Xte(test.size(), X.cols());
        Eigen::VectorXd ytr(train.size()), yte(test.size());
        for (std::size_t i = 0; i < train.size(); ++i) {
            Xtr.row(static_cast<Eigen::Index>(i)) = X.row(train[i]);
            ytr[static_cast<Eigen::Index>(i)] = y[train[i]];
        }
        for (std::size_t i = 0; i < test.size(); ++i) {
            Xte.row(static_cast<Eigen::Index>(i)) = X.row(test[i]);
            yte[static_cast<Eigen::Index>(i)] = y[test[i]];
        }

        const Centered c = center(Xtr, ytr);
        Eigen::VectorXd warm = Eigen::VectorXd::Zero(X.cols());
        for (std::size_t g = 0; g < grid.size(); ++g) {
            CoreResult core = descend(c.Xc, c.yc, grid[g], warm);
            warm = core.beta;
            const double b0 = c.y_mean - c.col_means.dot(core.beta);
            const Eigen::VectorXd pred = (Xte * core.beta).array() + b0;
            rmse_at[task][g] = std::sqrt((pred - yte).squaredNorm() / static_cast<double>(yte.size()));
        }
    });

    CvResult out;
    out.curve.resize(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
        double sum = 0.0;
        for (std::size_t t = 0; t < n_tasks; ++t) sum += rmse_at[t][g];
        const double mean = sum / static_cast<double>(n_tasks);
        double ss = 0.0;
        for (std::size_t t = 0; t < n_tasks; ++t) ss += (rmse_at[t][g] - mean) * (rmse_at[t][g] - mean);
        out.curve[g] = {grid[g], mean,
                        n_tasks > 1 ? std::sqrt(ss / static_cast<double>(n_tasks - 1)) : 0.0};
    }
    // Scan from the top (largest lambda): strict improvement required, so ties
    // resolve to the sparser model.
    std::size_t best = 0;
    for (std::size_t g = 1; g < grid.size(); ++g)
        if (out.curve[g].mean_rmse < out.curve[best].mean_rmse) best = g;
    out.lambda_hat = out.curve[best].lambda;
    return out;
}

}  // namespace recon::lasso
