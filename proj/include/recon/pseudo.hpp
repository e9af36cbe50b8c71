#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "recon/timeseries.hpp"

namespace recon::nulls {

// Null benchmark generators. Every class is generated independently of any
// temperature data: the API takes shape, class parameters, and a seed only.
struct PseudoProxyClass {
    enum class Kind { WhiteNoise, Ar1, EmpiricalAr1, BrownianMotion };

    Kind kind = Kind::WhiteNoise;
    double phi = 0.0;               // Ar1 only
    std::vector<double> phi_list;   // EmpiricalAr1 only, one entry per series

    static PseudoProxyClass white_noise() { return {}; }
    static PseudoProxyClass ar1(double phi);
    static PseudoProxyClass empirical_ar1(std::vector<double> phi_list);
    static PseudoProxyClass brownian();

    std::string label() const;
};

// One pseudo-proxy matrix: WhiteNoise is i.i.d. N(0,1); Ar1 starts from its
// stationary distribution; EmpiricalAr1 uses phi_list[j] for column j;
// BrownianMotion is the cumulative sum of N(0,1) increments. Columns are
// standardized over the full span afterwards, mirroring the treatment of the
// real proxies. Deterministic given seed at any parallelism.
ProxyMatrix gen_pseudo(const PseudoProxyClass& cls, int n_years, int n_series,
                       std::uint64_t seed, int start_year = 1850);

enum class PairKind { RandomWalk, WhiteNoise };

// Pearson correlations of `reps` independent pairs of series of length n.
// RandomWalk pairs show the classic spurious-correlation spread; the
// WhiteNoise variant is the calibrated baseline.
std::vector<double> spurious_corr_experiment(int n, int reps, std::uint64_t seed,
                                             PairKind kind = PairKind::RandomWalk);

}  // namespace recon::nulls
