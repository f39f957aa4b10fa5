#pragma once

// Dyadic-partition entropy toolbox: histograms, conditional entropy,
// component measures, entropy-dimension slopes, non-conformal partitions,
// and the concentration/saturation predicates.

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "affinedim/ifs.hpp"

namespace affinedim {

// Integer multi-index of a level-n dyadic cell, floor(2^n x) per coordinate.
// n may be negative (coarse cells); |n| <= 62.
struct CellKey {
    std::vector<std::int64_t> idx;
    bool operator==(const CellKey& other) const { return idx == other.idx; }
};

struct CellKeyHash {
    std::size_t operator()(const CellKey& k) const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (std::int64_t v : k.idx) {
            h ^= static_cast<std::uint64_t>(v);
            h *= 0x100000001b3ULL;
            h ^= h >> 29;
        }
        return static_cast<std::size_t>(h);
    }
};

struct DyadicHistogram {
    int scale = 0;
    std::unordered_map<CellKey, double, CellKeyHash> cells;  // mass per cell
};

CellKey dyadic_cell(const Vector& x, int n);
DyadicHistogram build_histogram(const EmpiricalMeasure& theta, int n);

// -sum q log2 q over occupied cells.  With bias_correction, adds the
// Miller-Madow term (K-1)/(2N ln 2) where K = occupied cells, N = atoms.
double dyadic_entropy(const EmpiricalMeasure& theta, int n, bool bias_correction = false);

// H(theta, D_{n+k} | D_n) = H(theta, D_{n+k}) - H(theta, D_n)
double conditional_dyadic_entropy(const EmpiricalMeasure& theta, int n, int k);

// Restriction of theta to the level-n dyadic cell of x, renormalized.
EmpiricalMeasure component(const EmpiricalMeasure& theta, const Vector& x, int n);

// Component pushed onto [0,1)^m by the cell homothety y -> 2^n y - floor(2^n x).
EmpiricalMeasure rescaled_component(const EmpiricalMeasure& theta, const Vector& x, int n);

struct EntropySlope {
    std::vector<int> scales;
    std::vector<double> entropies;       // H(theta, D_n), bits
    std::vector<double> entropies_raw;   // without bias correction
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // RMS residual of the fit
};

// Least-squares slope of H(theta, D_n) against n over [scale_lo, scale_hi].
// Throws WindowTooSmall below 4 scales.
EntropySlope entropy_dimension(const EmpiricalMeasure& theta, int scale_lo, int scale_hi,
                               bool bias_correction = true);

// Largest usable top scale: occupied cells stay below N/20.
int suggest_scale_hi(const EmpiricalMeasure& theta, int scale_lo, int hard_cap = 30);

// Entropy w.r.t. the image partition UD(D_n) of psi's singular value
// decomposition A_psi = U D' U'.  Requires strictly decreasing singular
// values (GapTooSmall otherwise).
double nonconformal_entropy(const EmpiricalMeasure& theta, const AffineMap& psi, int n,
                            double gap_tol = kDefaultSvdGapTol);

// (V, eps)-concentration: exists x with theta(x + V^(eps)) >= 1 - eps.
struct ConcentrationResult {
    bool concentrated = false;
    Vector witness;         // the x found (best candidate either way)
    double best_mass = 0.0;
};
ConcentrationResult is_concentrated(const EmpiricalMeasure& theta, const Subspace& V,
                                    double eps);

// (V, eps, k)-saturation:
//   (1/k) H(theta, D_k) >= (1/k) H(pi_{V^perp} theta, D_k) + dim V - eps.
bool is_saturated(const EmpiricalMeasure& theta, const Subspace& V, double eps, int k);

// |(1/n) H(theta, D_{l+n}) - E_{l<=i<=l+n}((1/k) H(theta_{x,i}, D_{i+k}))|
double multiscale_identity_residual(const EmpiricalMeasure& theta, int l, int n, int k);

}  // namespace affinedim
