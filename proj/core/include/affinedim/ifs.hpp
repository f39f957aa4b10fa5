#pragma once

// Affine IFS representation, word composition, coding map, and Monte Carlo
// sampling of the self-affine measure and its pushforwards.

#include <cstdint>
#include <optional>
#include <vector>

#include "affinedim/linalg.hpp"
#include "affinedim/rng.hpp"

namespace affinedim {

struct AffineMap {
    Matrix linear;       // d x d, or m x d for projection maps
    Vector translation;  // length = rows of linear

    Vector operator()(const Vector& x) const { return linear * x + translation; }
    AffineMap after(const AffineMap& inner) const;  // this o inner
    static AffineMap identity(int d);
};

using Word = std::vector<int>;

class AffineIFS {
public:
    AffineIFS(std::vector<AffineMap> maps, std::vector<double> probs);

    int dim() const { return dim_; }
    int size() const { return static_cast<int>(maps_.size()); }
    const AffineMap& map(int i) const { return maps_[i]; }
    const std::vector<AffineMap>& maps() const { return maps_; }
    const std::vector<double>& probs() const { return probs_; }
    double max_norm() const { return max_norm_; }  // max_i ||A_i||_op

    AffineIFS transposed() const;  // linear parts transposed, translations kept

private:
    int dim_;
    std::vector<AffineMap> maps_;
    std::vector<double> probs_;
    double max_norm_;
};

struct EmpiricalMeasure {
    int ambient_dim = 0;
    Matrix points;    // N x m
    Vector weights;   // N, positive, sums to 1

    static EmpiricalMeasure uniform(Matrix pts);
    long size() const { return points.rows(); }
};

// phi_{i_1} o ... o phi_{i_n}; the empty word gives the identity.
AffineMap compose_word(const AffineIFS& ifs, const Word& u);

// phi_u(0); approximates the coding-map limit within ||A||^|u| * R.
Vector coding_point(const AffineIFS& ifs, const Word& u);

// R with the attractor contained in B(0, R).
double attractor_radius(const AffineIFS& ifs);

// The common fixed point if all maps share one (within 1e-9), else nullopt.
std::optional<Vector> common_fixed_point(const AffineIFS& ifs);

// Smallest depth with (max ||A_i||)^n * R below the resolution 2^-40.
int default_truncation_depth(const AffineIFS& ifs);

// N i.i.d. draws of the coding map at Bernoulli(p) words truncated at
// `depth` (0 = default depth).  Deterministic given seed, independent of
// evaluation order.
EmpiricalMeasure sample_measure(const AffineIFS& ifs, long n_points, int depth,
                                std::uint64_t seed);

// Pushforward by pi_V = basis^T x: coordinates of the orthogonal projection.
EmpiricalMeasure project_measure(const EmpiricalMeasure& theta, const Subspace& V);

// Pushforward by an affine map.
EmpiricalMeasure map_measure(const EmpiricalMeasure& theta, const AffineMap& f);

}  // namespace affinedim
