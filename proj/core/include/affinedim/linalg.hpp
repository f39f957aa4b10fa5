#pragma once

// Small dense exterior-algebra kernel: singular values, SVD subspaces,
// wedge powers, Pluecker coordinates, and the two Grassmannian distances.
// Ambient dimensions are expected to stay below ~10; binomial growth of the
// wedge bases is accepted.

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "affinedim/errors.hpp"

namespace affinedim {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

constexpr double kDefaultSvdGapTol = 1e-8;  // relative gap (a_l - a_{l+1}) / a_1

long binomial(int n, int k);

// Lexicographically ordered k-element subsets of {0,...,d-1}.
// Fixes the basis ordering of wedge spaces: {0,1} < {0,2} < {1,2} < ...
std::vector<std::vector<int>> multi_indices(int d, int k);

// An element of Gr_k(d), stored as a d x k orthonormal basis.  k = 0 is the
// zero subspace (basis has zero columns).
class Subspace {
public:
    Subspace(int ambient_dim, Matrix basis);

    // Orthonormalize arbitrary spanning columns (must have full column rank).
    static Subspace from_span(const Matrix& columns);
    static Subspace zero(int ambient_dim);
    static Subspace full(int ambient_dim);
    static Subspace coordinate(int ambient_dim, const std::vector<int>& axes);

    int ambient_dim() const { return ambient_dim_; }
    int dim() const { return static_cast<int>(basis_.cols()); }
    const Matrix& basis() const { return basis_; }

    Matrix projector() const;           // P_V, d x d
    Subspace orthogonal_complement() const;
    bool contains(const Subspace& other, double tol = 1e-8) const;

private:
    int ambient_dim_;
    Matrix basis_;
};

// Multi-vector in /\^k R^d, coordinates in the lexicographic multi-index basis.
struct WedgeVector {
    int ambient_dim = 0;
    int grade = 0;
    Vector coords;
};

// Descending singular values of A.
Vector singular_values(const Matrix& A);

// L_l(A): span of the top-l left singular vectors.  Throws GapTooSmall when
// the relative gap (a_l - a_{l+1})/a_1 is below gap_tol.
Subspace svd_subspace(const Matrix& A, int l, double gap_tol = kDefaultSvdGapTol);

// Matrix of /\^m A acting on /\^m R^d; entries are m x m minors of A.
Matrix wedge_power(const Matrix& A, int m);

// x_1 /\ ... /\ x_k for the columns of X (d x k), unnormalized.
WedgeVector wedge_columns(const Matrix& X);

// Pluecker embedding: unit-norm, first nonzero coordinate positive.
WedgeVector plucker(const Subspace& V);

// d_Gr(W1, W2) = || P_W1 - P_W2 ||_op.  Throws DimMismatch unless the
// subspace dimensions agree.
double grassmann_distance(const Subspace& W1, const Subspace& W2);

// kappa(V1, V2): infimum of d_Gr1 over lines of V1 x lines of V2, i.e. the
// sine of the smallest principal angle.  Infinity when either dim is 0.
double kappa(const Subspace& V1, const Subspace& V2);

double operator_norm(const Matrix& A);

}  // namespace affinedim
