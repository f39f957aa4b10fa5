#include "affinedim/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace affinedim {

namespace {

std::int64_t floor_scaled(double x, int n) {
    return static_cast<std::int64_t>(std::floor(std::ldexp(x, n)));
}

double entropy_of_masses(const DyadicHistogram& h) {
    double total = 0.0, ent = 0.0;
    for (const auto& [key, mass] : h.cells) total += mass;
    for (const auto& [key, mass] : h.cells) {
        double q = mass / total;
        if (q > 0) ent -= q * std::log2(q);
    }
    return ent;
}

}  // namespace

CellKey dyadic_cell(const Vector& x, int n) {
    CellKey key;
    key.idx.resize(static_cast<std::size_t>(x.size()));
    for (long i = 0; i < x.size(); ++i)
        key.idx[static_cast<std::size_t>(i)] = floor_scaled(x(i), n);
    return key;
}

DyadicHistogram build_histogram(const EmpiricalMeasure& theta, int n) {
    if (n < -62 || n > 62)
        throw InvariantViolation("build_histogram: scale out of [-62, 62]");
    DyadicHistogram h;
    h.scale = n;
    CellKey key;
    key.idx.resize(static_cast<std::size_t>(theta.ambient_dim));
    for (long r = 0; r < theta.size(); ++r) {
        for (int c = 0; c < theta.ambient_dim; ++c)
            key.idx[static_cast<std::size_t>(c)] = floor_scaled(theta.points(r, c), n);
        h.cells[key] += theta.weights(r);
    }
    return h;
}

double dyadic_entropy(const EmpiricalMeasure& theta, int n, bool bias_correction) {
    DyadicHistogram h = build_histogram(theta, n);
    double ent = entropy_of_masses(h);
    if (bias_correction) {
        double k = static_cast<double>(h.cells.size());
        double atoms = static_cast<double>(theta.size());
        ent += (k - 1.0) / (2.0 * atoms * std::numbers::ln2);
    }
    return ent;
}

double conditional_dyadic_entropy(const EmpiricalMeasure& theta, int n, int k) {
    if (k < 0) throw InvariantViolation("conditional_dyadic_entropy: k >= 0 required");
    if (k == 0) return 0.0;
    return dyadic_entropy(theta, n + k) - dyadic_entropy(theta, n);
}

EmpiricalMeasure component(const EmpiricalMeasure& theta, const Vector& x, int n) {
    CellKey cell = dyadic_cell(x, n);
    std::vector<long> rows;
    double mass = 0.0;
    for (long r = 0; r < theta.size(); ++r) {
        if (dyadic_cell(theta.points.row(r).transpose(), n) == cell) {
            rows.push_back(r);
            mass += theta.weights(r);
        }
    }
    if (rows.empty() || mass <= 0.0)
        throw EmptyCell("component: cell carries no mass");
    EmpiricalMeasure out;
    out.ambient_dim = theta.ambient_dim;
    out.points.resize(static_cast<long>(rows.size()), theta.ambient_dim);
    out.weights.resize(static_cast<long>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.points.row(static_cast<long>(i)) = theta.points.row(rows[i]);
        out.weights(static_cast<long>(i)) = theta.weights(rows[i]) / mass;
    }
    return out;
}

EmpiricalMeasure rescaled_component(const EmpiricalMeasure& theta, const Vector& x, int n) {
    EmpiricalMeasure comp = component(theta, x, n);
    CellKey cell = dyadic_cell(x, n);
    for (long r = 0; r < comp.size(); ++r)
        for (int c = 0; c < comp.ambient_dim; ++c)
            comp.points(r, c) = std::ldexp(comp.points(r, c), n) -
                                static_cast<double>(cell.idx[static_cast<std::size_t>(c)]);
    return comp;
}

EntropySlope entropy_dimension(const EmpiricalMeasure& theta, int scale_lo, int scale_hi,
                               bool bias_correction) {
    if (scale_hi - scale_lo + 1 < 4)
        throw WindowTooSmall("entropy_dimension: need at least 4 scales");
    EntropySlope out;
    for (int n = scale_lo; n <= scale_hi; ++n) {
        out.scales.push_back(n);
        out.entropies_raw.push_back(dyadic_entropy(theta, n, false));
        out.entropies.push_back(bias_correction ? dyadic_entropy(theta, n, true)
                                                : out.entropies_raw.back());
    }
    // least squares H = slope * n + intercept
    const double count = static_cast<double>(out.scales.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < out.scales.size(); ++i) {
        double xn = out.scales[i], y = out.entropies[i];
        sx += xn;
        sy += y;
        sxx += xn * xn;
        sxy += xn * y;
    }
    out.slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    out.intercept = (sy - out.slope * sx) / count;
    double ss = 0.0;
    for (std::size_t i = 0; i < out.scales.size(); ++i) {
        double r = out.entropies[i] - (out.slope * out.scales[i] + out.intercept);
        ss += r * r;
    }
    out.residual = std::sqrt(ss / count);
    return out;
}

int suggest_scale_hi(const EmpiricalMeasure& theta, int scale_lo, int hard_cap) {
    const double budget = static_cast<double>(theta.size()) / 20.0;
    int best = scale_lo + 3;
    for (int n = scale_lo; n <= hard_cap; ++n) {
        DyadicHistogram h = build_histogram(theta, n);
        if (static_cast<double>(h.cells.size()) >= budget && n > scale_lo + 3) break;
        best = n;
    }
    return best;
}

double nonconformal_entropy(const EmpiricalMeasure& theta, const AffineMap& psi, int n,
                            double gap_tol) {
    const int m = static_cast<int>(psi.linear.rows());
    if (m != theta.ambient_dim)
        throw DimMismatch("nonconformal_entropy: psi range dim != measure dim");
    Eigen::JacobiSVD<Matrix> svd(psi.linear, Eigen::ComputeFullU);
    Vector alpha = svd.singularValues();
    for (int i = 0; i + 1 < m; ++i)
        if ((alpha(i) - alpha(i + 1)) / alpha(0) < gap_tol)
            throw GapTooSmall("nonconformal_entropy: singular values not strictly decreasing");
    // Bin (UD)^{-1} x dyadically: cells are images of dyadic cells under UD.
    Matrix ud_inv = alpha.cwiseInverse().asDiagonal() * svd.matrixU().transpose();
    EmpiricalMeasure pulled;
    pulled.ambient_dim = m;
    pulled.points = theta.points * ud_inv.transpose();
    pulled.weights = theta.weights;
    return dyadic_entropy(pulled, n);
}

ConcentrationResult is_concentrated(const EmpiricalMeasure& theta, const Subspace& V,
                                    double eps) {
    if (V.ambient_dim() != theta.ambient_dim)
        throw DimMismatch("is_concentrated: ambient dims differ");
    if (eps <= 0) throw InvariantViolation("is_concentrated: eps > 0 required");
    ConcentrationResult res;
    Subspace W = V.orthogonal_complement();
    const int q = W.dim();
    if (q == 0 || eps >= 1.0) {
        res.concentrated = true;
        res.best_mass = 1.0;
        res.witness = Vector::Zero(theta.ambient_dim);
        return res;
    }
    Matrix proj = theta.points * W.basis();  // N x q

    // Bucket projected points into eps-cells, then evaluate the exact slab
    // mass around each occupied cell's centroid; candidates within eps of a
    // true optimum land in a neighboring cell, so the scan cannot miss a
    // (1 - eps)-mass slab by more than the cell quantization.
    std::map<std::vector<std::int64_t>, std::pair<double, Vector>> buckets;
    for (long r = 0; r < proj.rows(); ++r) {
        std::vector<std::int64_t> key(static_cast<std::size_t>(q));
        for (int c = 0; c < q; ++c)
            key[static_cast<std::size_t>(c)] =
                static_cast<std::int64_t>(std::floor(proj(r, c) / eps));
        auto& [mass, sum] = buckets[key];
        if (sum.size() == 0) sum = Vector::Zero(q);
        mass += theta.weights(r);
        sum += theta.weights(r) * proj.row(r).transpose();
    }
    Vector best_center = Vector::Zero(q);
    for (const auto& [key, acc] : buckets) {
        Vector center = acc.second / acc.first;
        double mass = 0.0;
        for (long r = 0; r < proj.rows(); ++r)
            if ((proj.row(r).transpose() - center).norm() <= eps) mass += theta.weights(r);
        if (mass > res.best_mass) {
            res.best_mass = mass;
            best_center = center;
        }
    }
    res.witness = W.basis() * best_center;
    res.concentrated = res.best_mass >= 1.0 - eps;
    return res;
}

bool is_saturated(const EmpiricalMeasure& theta, const Subspace& V, double eps, int k) {
    if (V.ambient_dim() != theta.ambient_dim)
        throw DimMismatch("is_saturated: ambient dims differ");
    if (k < 1) throw InvariantViolation("is_saturated: k >= 1 required");
    double lhs = dyadic_entropy(theta, k) / k;
    Subspace perp = V.orthogonal_complement();
    double rhs;
    if (perp.dim() == 0) {
        rhs = static_cast<double>(V.dim()) - eps;
    } else {
        rhs = dyadic_entropy(project_measure(theta, perp), k) / k +
              static_cast<double>(V.dim()) - eps;
    }
    return lhs >= rhs;
}

double multiscale_identity_residual(const EmpiricalMeasure& theta, int l, int n, int k) {
    if (n < 1 || k < 1 || k > n)
        throw InvariantViolation("multiscale_identity_residual: need n >= k >= 1");
    double lhs = dyadic_entropy(theta, l + n) / n;
    // E_{l <= i <= l+n} over both the scale i and x ~ theta of
    // (1/k) H(theta_{x,i}, D_{i+k}); grouped by level-i cell.
    double avg = 0.0;
    for (int i = l; i <= l + n; ++i) {
        std::unordered_map<CellKey, DyadicHistogram, CellKeyHash> fine;
        std::unordered_map<CellKey, double, CellKeyHash> coarse_mass;
        for (long r = 0; r < theta.size(); ++r) {
            Vector x = theta.points.row(r).transpose();
            CellKey coarse = dyadic_cell(x, i);
            coarse_mass[coarse] += theta.weights(r);
            fine[coarse].cells[dyadic_cell(x, i + k)] += theta.weights(r);
        }
        double level = 0.0;
        for (const auto& [cell, hist] : fine)
            level += coarse_mass[cell] * entropy_of_masses(hist) / k;
        avg += level;
    }
    avg /= static_cast<double>(n + 1);
    return std::abs(lhs - avg);
}

}  // namespace affinedim
