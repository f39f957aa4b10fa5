#pragma once

// Furstenberg stationary measures on Grassmannians via boundary maps,
// flag sampling, and the regularity / transversality diagnostics.

#include <cstdint>

#include "affinedim/ifs.hpp"
#include "affinedim/lyapunov.hpp"

namespace affinedim {

struct GrassmannSample {
    int grade = 1;
    std::vector<Subspace> subspaces;
    long failures = 0;   // GapTooSmall draws, counted not thrown
    int depth = 0;
    std::uint64_t seed = 0;
};

struct Flag {
    std::vector<Subspace> levels;  // dims 0..d, nested
};

// L_m of the length-n random product A_{w_1}...A_{w_n}.  Propagates
// GapTooSmall when the product's m-th singular gap is below tolerance.
Subspace boundary_map(const AffineIFS& ifs, int prefix_len, int m, std::uint64_t seed,
                      double gap_tol = kDefaultSvdGapTol);
Subspace boundary_map_word(const AffineIFS& ifs, const Word& w, int m,
                           double gap_tol = kDefaultSvdGapTol);

// Smallest depth with 2^{n (chi_{m+1} - chi_m)} < 1e-8 from estimated
// exponents (clamped to [32, 4096]).
int default_boundary_depth(const AffineIFS& ifs, int m, std::uint64_t seed);

// N independent boundary-map draws at depth n (fresh i.i.d. word per draw).
// transpose = true samples nu_m^* from the transposed linear parts.
GrassmannSample sample_stationary(const AffineIFS& ifs, int m, long n_draws, int depth,
                                  std::uint64_t seed, bool transpose = false);

// Forward-chain variant for cross-validation: one orbit V_{t+1} = A_{w_t} V_t,
// recorded after burn-in.
GrassmannSample sample_stationary_forward(const AffineIFS& ifs, int m, long n_draws,
                                          long burn_in, std::uint64_t seed,
                                          bool transpose = false);

// All L_m of one product's SVD; nested by construction.
Flag flag_boundary(const AffineIFS& ifs, int prefix_len, std::uint64_t seed,
                   double gap_tol = kDefaultSvdGapTol);

struct RuelleCheck {
    std::vector<std::vector<bool>> pass;   // d x d
    std::vector<std::vector<double>> lhs;  // |<u_{n1,k}, u_{n2,l}>|
    std::vector<std::vector<double>> bound;
};

// Tests |<u_{n1,k}, u_{n2,l}>| <= 2^{-n1 (|chi_k - chi_l| - eps)} on one
// sampled trajectory, using the supplied exponent estimates.
RuelleCheck ruelle_decay_check(const AffineIFS& ifs, int n1, int n2, std::uint64_t seed,
                               double eps, const std::vector<double>& chi);

// Empirical fraction of sampled V with kappa(V, W) <= delta.
// Requires dim W = d - m.
double kappa_mass(const GrassmannSample& sample, const Subspace& W, double delta);

// Fraction of sampled lines V with |pi_V x| <= r^alpha (x a unit vector).
double guivarch_fraction(const GrassmannSample& sample, const Vector& x, double r,
                         double alpha);

// Mean Pluecker-coordinate vector of a sample (stationarity residual metric).
Vector plucker_moment(const GrassmannSample& sample);

// Pushforward of every subspace by one random generator per draw.
GrassmannSample pushforward_sample(const AffineIFS& ifs, const GrassmannSample& sample,
                                   std::uint64_t seed, bool transpose = false);

void write_plucker_csv(const GrassmannSample& sample, const std::string& path);

}  // namespace affinedim
