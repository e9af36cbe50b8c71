#include "recon/pseudo.hpp"

#include <cmath>

#include <Eigen/Core>

#include "recon/dataset.hpp"
#include "recon/errors.hpp"
#include "recon/rng.hpp"

namespace recon::nulls {

PseudoProxyClass PseudoProxyClass::ar1(double phi) {
    if (phi < 0.0 || phi >= 1.0) throw ConfigError("PseudoProxyClass: AR1 phi must be in [0,1)");
    PseudoProxyClass c;
    c.kind = Kind::Ar1;
    c.phi = phi;
    return c;
}

PseudoProxyClass PseudoProxyClass::empirical_ar1(std::vector<double> phi_list) {
    for (double p : phi_list)
        if (p <= -1.0 || p >= 1.0)
            throw ConfigError("PseudoProxyClass: empirical phi entries must be in (-1,1)");
    PseudoProxyClass c;
    c.kind = Kind::EmpiricalAr1;
    c.phi_list = std::move(phi_list);
    return c;
}

PseudoProxyClass PseudoProxyClass::brownian() {
    PseudoProxyClass c;
    c.kind = Kind::BrownianMotion;
    return c;
}

std::string PseudoProxyClass::label() const {
    switch (kind) {
        case Kind::WhiteNoise: return "white_noise";
        case Kind::Ar1: {
            std::string s = std::to_string(phi);
            s.erase(s.find_last_not_of('0') + 1);
            if (!s.empty() && s.back() == '.') s.pop_back();
            return "ar1_" + s;
        }
        case Kind::EmpiricalAr1: return "empirical_ar1";
        case Kind::BrownianMotion: return "brownian_motion";
    }
    return "unknown";
}

ProxyMatrix gen_pseudo(const PseudoProxyClass& cls, int n_years, int n_series,
                       std::uint64_t seed, int start_year) {
    if (n_years < 2) throw ConfigError("gen_pseudo: n_years must be >= 2");
    if (n_series < 1) throw ConfigError("gen_pseudo: n_series must be >= 1");
    if (cls.kind == PseudoProxyClass::Kind::EmpiricalAr1 &&
        static_cast<int>(cls.phi_list.size()) != n_series)
        throw ConfigError("gen_pseudo: phi_list length must equal n_series");

    std::vector<std::string> names;
    std::vector<TimeSeries> cols;
    names.reserve(static_cast<std::size_t>(n_series));
    for (int j = 0; j < n_series; ++j) {
        RngStream rng = RngStream::substream(seed, {static_cast<std::uint64_t>(j)});
        std::vector<double> x;
        switch (cls.kind) {
            case PseudoProxyClass::Kind::WhiteNoise:
                x = rng.stationary_ar1_path(n_years, 0.0);
                break;
            case PseudoProxyClass::Kind::Ar1:
                x = rng.stationary_ar1_path(n_years, cls.phi);
                break;
            case PseudoProxyClass::Kind::EmpiricalAr1: {
                const double phi = cls.phi_list[static_cast<std::size_t>(j)];
                // Negative empirical coefficients are legal here even though
                // the fixed-phi classes are restricted to [0,1).
                x.resize(static_cast<std::size_t>(n_years));
                x[0] = rng.normal() / std::sqrt(1.0 - phi * phi);
                for (int t = 1; t < n_years; ++t)
                    x[static_cast<std::size_t>(t)] = phi * x[static_cast<std::size_t>(t - 1)] + rng.normal();
                break;
            }
            case PseudoProxyClass::Kind::BrownianMotion: {
                x.resize(static_cast<std::size_t>(n_years));
                double cum = 0.0;
                for (int t = 0; t < n_years; ++t) {
                    cum += rng.normal();
                    x[static_cast<std::size_t>(t)] = cum;
                }
                break;
            }
        }
        names.push_back("pseudo" + std::to_string(j + 1));
        cols.push_back(TimeSeries::from_values(start_year, x));
    }
    ProxyMatrix raw(std::move(names), std::move(cols));
    return dataset::standardize(raw, raw.span());
}

std::vector<double> spurious_corr_experiment(int n, int reps, std::uint64_t seed, PairKind kind) {
    if (n < 3) throw ConfigError("spurious_corr_experiment: n must be >= 3");
    if (reps < 1) throw ConfigError("spurious_corr_experiment: reps must be >= 1");

    std::vector<double> corr(static_cast<std::size_t>(reps));
    for (int rep = 0; rep < reps; ++rep) {
        RngStream rng = RngStream::substream(seed, {static_cast<std::uint64_t>(rep)});
        Eigen::VectorXd a(n), b(n);
        if (kind == PairKind::RandomWalk) {
            double ca = 0.0, cb = 0.0;
            for (int t = 0; t < n; ++t) {
                ca += rng.normal();
                a[t] = ca;
            }
            for (int t = 0; t < n; ++t) {
                cb += rng.normal();
                b[t] = cb;
            }
        } else {
            for (int t = 0; t < n; ++t) a[t] = rng.normal();
            for (int t = 0; t < n; ++t) b[t] = rng.normal();
        }
        const Eigen::VectorXd da = a.array() - a.mean();
        const Eigen::VectorXd db = b.array() - b.mean();
        corr[static_cast<std::size_t>(rep)] = da.dot(db) / (da.norm() * db.norm());
    }
    return corr;
}

}  // namespace recon::nulls
