#include "affinedim/linalg.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace affinedim {

long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

std::vector<std::vector<int>> multi_indices(int d, int k) {
    std::vector<std::vector<int>> out;
    if (k < 0 || k > d) return out;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        out.push_back(idx);
        int pos = k - 1;
        while (pos >= 0 && idx[pos] == d - k + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int j = pos + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

Subspace::Subspace(int ambient_dim, Matrix basis)
    : ambient_dim_(ambient_dim), basis_(std::move(basis)) {
    if (basis_.rows() != ambient_dim_)
        throw DimMismatch("Subspace: basis rows do not match ambient dim");
    const int k = static_cast<int>(basis_.cols());
    if (k > 0) {
        Matrix gram = basis_.transpose() * basis_;
        if ((gram - Matrix::Identity(k, k)).cwiseAbs().maxCoeff() > 1e-10)
            throw InvariantViolation("Subspace: basis not orthonormal");
    }
}

Subspace Subspace::from_span(const Matrix& columns) {
    const int d = static_cast<int>(columns.rows());
    const int k = static_cast<int>(columns.cols());
    if (k == 0) return zero(d);
    Eigen::HouseholderQR<Matrix> qr(columns);
    Matrix q = qr.householderQ() * Matrix::Identity(d, k);
    Matrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    for (int j = 0; j < k; ++j) {
        if (std::abs(r(j, j)) < 1e-12 * std::max(1.0, columns.norm()))
            throw InvariantViolation("Subspace::from_span: rank-deficient columns");
        if (r(j, j) < 0) q.col(j) = -q.col(j);
    }
    return Subspace(d, q);
}

Subspace Subspace::zero(int ambient_dim) {
    return Subspace(ambient_dim, Matrix(ambient_dim, 0));
}

Subspace Subspace::full(int ambient_dim) {
    return Subspace(ambient_dim, Matrix::Identity(ambient_dim, ambient_dim));
}

Subspace Subspace::coordinate(int ambient_dim, const std::vector<int>& axes) {
    Matrix b = Matrix::Zero(ambient_dim, static_cast<int>(axes.size()));
    for (std::size_t j = 0; j < axes.size(); ++j) b(axes[j], static_cast<int>(j)) = 1.0;
    return Subspace(ambient_dim, b);
}

Matrix Subspace::projector() const {
    if (dim() == 0) return Matrix::Zero(ambient_dim_, ambient_dim_);
    return basis_ * basis_.transpose();
}

Subspace Subspace::orthogonal_complement() const {
    const int d = ambient_dim_;
    const int k = dim();
    if (k == 0) return full(d);
    if (k == d) return zero(d);
    // Columns of Q beyond the first k complete the basis.
    Eigen::HouseholderQR<Matrix> qr(basis_);
    Matrix q = qr.householderQ();
    return Subspace(d, q.rightCols(d - k));
}

bool Subspace::contains(const Subspace& other, double tol) const {
    if (other.dim() == 0) return true;
    Matrix residual = other.basis() - projector() * other.basis();
    return residual.cwiseAbs().maxCoeff() <= tol;
}

Vector singular_values(const Matrix& A) {
    Eigen::JacobiSVD<Matrix> svd(A);
    return svd.singularValues();
}

Subspace svd_subspace(const Matrix& A, int l, double gap_tol) {
    const int rows = static_cast<int>(A.rows());
    if (l < 0 || l > rows)
        throw DimMismatch("svd_subspace: l out of range");
    if (l == 0) return Subspace::zero(rows);
    if (l == rows) return Subspace::full(rows);
    Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeThinU);
    Vector sv = svd.singularValues();
    const int k = static_cast<int>(sv.size());
    if (l < k) {
        double top = sv(0);
        double gap = (top > 0) ? (sv(l - 1) - sv(l)) / top : 0.0;
        if (gap < gap_tol) {
            std::ostringstream msg;
            msg << "svd_subspace: relative gap " << gap << " at l=" << l
                << " below tolerance " << gap_tol;
            throw GapTooSmall(msg.str());
        }
    }
    return Subspace(rows, svd.matrixU().leftCols(l));
}

Matrix wedge_power(const Matrix& A, int m) {
    const int d = static_cast<int>(A.rows());
    if (A.cols() != d) throw DimMismatch("wedge_power: square matrix required");
    if (m < 1 || m > d) throw DimMismatch("wedge_power: grade out of range");
    auto rows_idx = multi_indices(d, m);
    const long n = static_cast<long>(rows_idx.size());
    Matrix W(n, n);
    Matrix minor(m, m);
    for (long r = 0; r < n; ++r) {
        for (long c = 0; c < n; ++c) {
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j)
                    minor(i, j) = A(rows_idx[r][i], rows_idx[c][j]);
            W(r, c) = minor.determinant();
        }
    }
    return W;
}

WedgeVector wedge_columns(const Matrix& X) {
    const int d = static_cast<int>(X.rows());
    const int k = static_cast<int>(X.cols());
    if (k < 1 || k > d) throw DimMismatch("wedge_columns: grade out of range");
    auto idx = multi_indices(d, k);
    WedgeVector w;
    w.ambient_dim = d;
    w.grade = k;
    w.coords.resize(static_cast<long>(idx.size()));
    Matrix minor(k, k);
    for (std::size_t r = 0; r < idx.size(); ++r) {
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                minor(i, j) = X(idx[r][i], j);
        w.coords(static_cast<long>(r)) = minor.determinant();
    }
    return w;
}

WedgeVector plucker(const Subspace& V) {
    if (V.dim() < 1) throw DimMismatch("plucker: needs dim >= 1");
    WedgeVector w = wedge_columns(V.basis());
    double norm = w.coords.norm();
    w.coords /= norm;
    for (long i = 0; i < w.coords.size(); ++i) {
        if (std::abs(w.coords(i)) > 1e-12) {
            if (w.coords(i) < 0) w.coords = -w.coords;
            break;
        }
    }
    return w;
}

double grassmann_distance(const Subspace& W1, const Subspace& W2) {
    if (W1.ambient_dim() != W2.ambient_dim())
        throw DimMismatch("grassmann_distance: ambient dims differ");
    if (W1.dim() != W2.dim())
        throw DimMismatch("grassmann_distance: subspace dims differ");
    if (W1.dim() == 0) return 0.0;
    return operator_norm(W1.projector() - W2.projector());
}

double kappa(const Subspace& V1, const Subspace& V2) {
    if (V1.ambient_dim() != V2.ambient_dim())
        throw DimMismatch("kappa: ambient dims differ");
    if (V1.dim() == 0 || V2.dim() == 0)
        return std::numeric_limits<double>::infinity();
    // d_Gr1 between lines is the sine of their angle, so the infimum over
    // line pairs is sin of the smallest principal angle.
    Matrix C = V1.basis().transpose() * V2.basis();
    Vector sv = singular_values(C);
    double c = std::clamp(sv(0), 0.0, 1.0);
    return std::sqrt(std::max(0.0, 1.0 - c * c));
}

double operator_norm(const Matrix& A) {
    if (A.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(A);
    return svd.singularValues()(0);
}

}  // namespace affinedim
