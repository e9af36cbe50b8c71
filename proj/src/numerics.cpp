#include "recon/numerics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "recon/errors.hpp"
#include "recon/special.hpp"

namespace recon::num {

PCBasis principal_components(const Eigen::MatrixXd& X, int k) {
    const Eigen::Index n = X.rows();
    const Eigen::Index p = X.cols();
    if (k < 1) throw NumericError("principal_components: k must be >= 1");
    if (k > std::min(n, p))
        throw NumericError("principal_components: k = " + std::to_string(k) +
                           " exceeds min(rows, cols) = " + std::to_string(std::min(n, p)));

    Eigen::BDCSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double tol = std::max(n, p) * 1e-14 * (sv.size() ? sv[0] : 0.0);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] > tol) ++rank;
    if (k > rank)
        throw NumericError("principal_components: k = " + std::to_string(k) +
                           " exceeds numerical rank " + std::to_string(rank));

    PCBasis basis;
    basis.loadings = svd.matrixV().leftCols(k);
    basis.explained_variance.resize(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
        // Fix the sign so the largest-magnitude loading entry is positive.
        Eigen::Index imax = 0;
        basis.loadings.col(j).cwiseAbs().maxCoeff(&imax);
        if (basis.loadings(imax, j) < 0.0) basis.loadings.col(j) = -basis.loadings.col(j);
        basis.explained_variance[static_cast<std::size_t>(j)] = sv[j] * sv[j] / static_cast<double>(n - 1);
    }
    basis.scores = X * basis.loadings;
    return basis;
}

LinearFit ols_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, bool intercept,
                  std::vector<std::string> names, int start_year) {
    const Eigen::Index n = y.size();
    if (X.rows() != n && X.cols() > 0) throw NumericError("ols_fit: row count mismatch");
    const Eigen::Index p = X.cols() + (intercept ? 1 : 0);
    if (n <= p)
        throw NumericError("ols_fit: need rows > params (n = " + std::to_string(n) +
                           ", params = " + std::to_string(p) + ")");
    if (!names.empty() && static_cast<Eigen::Index>(names.size()) != X.cols())
        throw NumericError("ols_fit: name count mismatch");

    Eigen::MatrixXd design(n, p);
    if (intercept) design.col(0).setOnes();
    if (X.cols() > 0) design.rightCols(X.cols()) = X;

    Eigen::VectorXd beta;
    if (p == 0) {
        beta.resize(0);
    } else {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
        qr.setThreshold(1e-10);
        if (qr.rank() < p)
            throw NumericError("ols_fit: singular design (rank " + std::to_string(qr.rank()) +
                               " of " + std::to_string(p) + ")");
        beta = qr.solve(y);
    }

    LinearFit fit;
    fit.intercept = intercept && p > 0 ? beta[0] : 0.0;
    fit.coefficients = intercept && p > 0 ? Eigen::VectorXd(beta.tail(X.cols())) : beta;
    fit.names = std::move(names);
    const Eigen::VectorXd resid = p > 0 ? Eigen::VectorXd(y - design * beta) : y;
    fit.residuals = TimeSeries::from_vector(start_year, resid);
    fit.sse = resid.squaredNorm();
    return fit;
}

namespace {

// Quadratic WLS at one evaluation point over [lo, hi] with tricube weights.
double local_quadratic(const Eigen::VectorXd& y, int lo, int hi, int center) {
    const double dmax = std::max<double>(center - lo, hi - center);
    // 3x3 normal equations in the shifted coordinate u = t - center.
    Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
    Eigen::Vector3d atb = Eigen::Vector3d::Zero();
    for (int t = lo; t <= hi; ++t) {
        const double d = std::abs(t - center) / (dmax > 0 ? dmax : 1.0);
        if (d >= 1.0) continue;  // boundary point of the neighborhood gets weight 0
        const double c = 1.0 - d * d * d;
        const double w = c * c * c;
        const double u = t - center;
        const Eigen::Vector3d row(1.0, u, u * u);
        ata.noalias() += w * row * row.transpose();
        atb.noalias() += w * y[t] * row;
    }
    Eigen::LLT<Eigen::Matrix3d> llt(ata);
    if (llt.info() != Eigen::Success)
        throw NumericError("loess_smooth: singular local fit (window too small)");
    return llt.solve(atb)[0];  // value at u = 0
}

}  // namespace

Eigen::VectorXd loess_smooth(const Eigen::VectorXd& y, double span) {
    const int n = static_cast<int>(y.size());
    if (span <= 0.0 || span > 1.0) throw NumericError("loess_smooth: span must be in (0,1]");
    const int q = static_cast<int>(std::ceil(span * n));
    if (q < 3) throw NumericError("loess_smooth: window of " + std::to_string(q) +
                                  " points cannot support a quadratic fit");
    if (q > n) throw NumericError("loess_smooth: window exceeds series length");

    Eigen::VectorXd out(n);
    for (int i = 0; i < n; ++i) {
        // On a regular grid the q nearest neighbors form a contiguous window;
        // slide it toward whichever side is closer.
        int lo = std::clamp(i - q / 2, 0, n - q);
        while (lo > 0 && i - (lo - 1) < (lo + q - 1) - i + 1) --lo;
        while (lo < n - q && (lo + q) - i < i - lo + 1) ++lo;
        out[i] = local_quadratic(y, lo, lo + q - 1, i);
    }
    return out;
}

TimeSeries loess_smooth(const TimeSeries& s, double span) {
    if (s.has_missing()) throw DataError("loess_smooth: series has missing values");
    return TimeSeries::from_vector(s.start_year(), loess_smooth(s.to_vector(), span));
}

double rmse(const Eigen::VectorXd& pred, const Eigen::VectorXd& actual) {
    if (pred.size() != actual.size() || pred.size() == 0)
        throw NumericError("rmse: length mismatch");
    return std::sqrt((pred - actual).squaredNorm() / static_cast<double>(pred.size()));
}

DiffDiagnostics diff_diagnostics(const TimeSeries& pred, const TimeSeries& actual) {
    if (pred.start_year() != actual.start_year() || pred.size() != actual.size())
        throw DataError("diff_diagnostics: series spans differ");
    if (pred.size() < 3) throw DataError("diff_diagnostics: need length >= 3");
    const Eigen::VectorXd p = pred.to_vector();
    const Eigen::VectorXd a = actual.to_vector();
    const Eigen::Index m = p.size() - 1;
    Eigen::VectorXd dp(m), da(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        dp[i] = p[i + 1] - p[i];
        da[i] = a[i + 1] - a[i];
    }

    const Eigen::VectorXd cp = dp.array() - dp.mean();
    const Eigen::VectorXd ca = da.array() - da.mean();
    const double denom = cp.norm() * ca.norm();
    if (denom <= 0.0) throw NumericError("diff_diagnostics: zero-variance differences");

    DiffDiagnostics d;
    d.corr = cp.dot(ca) / denom;
    d.corr_pvalue = special::corr_pvalue(d.corr, static_cast<int>(m));
    for (Eigen::Index i = 0; i < m; ++i) {
        if (dp[i] == 0.0 || da[i] == 0.0) continue;  // ties excluded
        ++d.sign_total;
        if ((dp[i] > 0.0) == (da[i] > 0.0)) ++d.sign_agree;
    }
    d.sign_pvalue = d.sign_total > 0 ? special::binom_test_half(d.sign_agree, d.sign_total) : 1.0;
    return d;
}

}  // namespace recon::num
