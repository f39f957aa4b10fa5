#pragma once

// Lyapunov spectrum estimation (log base 2), Lyapunov dimension, the
// full-dimensionality thresholds rho_m, and random-walk entropy.

#include <cstdint>
#include <optional>

#include "affinedim/ifs.hpp"

namespace affinedim {

struct SpectrumReport {
    std::vector<double> chi;     // log2, descending
    std::vector<double> stderr_; // per-exponent standard error (32-block batch means)
    long steps = 0;
    std::uint64_t seed = 0;
};

struct EntropyReport {
    double entropy_p = 0.0;        // H(p), bits
    double rw_entropy = 0.0;       // finite-n upper bound for h(p_Phi), bits
    int n_used = 0;
    std::optional<bool> free_semigroup;  // nullopt = unknown (budget stop)
};

// Exponents of the random product A_{w_1}...A_{w_n}: QR renormalization each
// step, Householder with positive-diagonal convention, accumulating log2 of
// the R diagonal.
SpectrumReport lyapunov_spectrum(const AffineIFS& ifs, long steps, std::uint64_t seed);

// Top-k exponents of a chain of arbitrary square matrices drawn with law
// `probs`; used for wedge-power cross-checks and proximality gaps.
SpectrumReport lyapunov_top_exponents(const std::vector<Matrix>& mats,
                                      const std::vector<double>& probs, int k,
                                      long steps, std::uint64_t seed);

// -sum p_i log2 p_i
double shannon_entropy(const std::vector<double>& p);

// dim_L from descending negative exponents and entropy H:
//   m = max{0 <= j <= d : 0 <= H + chi_1 + ... + chi_j}
//   m < d: m - (H + sum_{k<=m} chi_k) / chi_{m+1};  m = d: -d H / sum chi.
double lyapunov_dimension(const std::vector<double>& chi, double entropy);

// rho_m = (chi_1 - chi_m)(m-1)(m-2)/2 - sum_{k<=m} chi_k
double rho_threshold(const std::vector<double>& chi, int m);

constexpr long kDefaultConvolutionCap = 10'000'000;

// H(p_Phi^{*n})/n at n = n_max, by enumerating compositions and merging maps
// whose max-abs coefficient distance is <= dedup_tol.  The reported value is
// a subadditive upper bound on the random walk entropy.
EntropyReport random_walk_entropy(const AffineIFS& ifs, int n_max,
                                  double dedup_tol = 1e-9,
                                  long cap = kDefaultConvolutionCap);

// H(p_Phi^{*n}) for each n = 1..n_max (bits); exposed for subadditivity tests.
std::vector<double> convolution_entropies(const AffineIFS& ifs, int n_max,
                                          double dedup_tol = 1e-9,
                                          long cap = kDefaultConvolutionCap,
                                          bool* any_merge = nullptr);

}  // namespace affinedim
