#include "affinedim/ifs.hpp"

#include <cmath>
#include <sstream>

#include "affinedim/parallel.hpp"

namespace affinedim {

AffineMap AffineMap::after(const AffineMap& inner) const {
    return {linear * inner.linear, linear * inner.translation + translation};
}

AffineMap AffineMap::identity(int d) {
    return {Matrix::Identity(d, d), Vector::Zero(d)};
}

AffineIFS::AffineIFS(std::vector<AffineMap> maps, std::vector<double> probs)
    : maps_(std::move(maps)), probs_(std::move(probs)) {
    if (maps_.empty()) throw InvariantViolation("AffineIFS: empty map list");
    if (probs_.size() != maps_.size())
        throw InvariantViolation("AffineIFS: probs size does not match maps");
    dim_ = static_cast<int>(maps_[0].linear.rows());
    max_norm_ = 0.0;
    for (std::size_t i = 0; i < maps_.size(); ++i) {
        const auto& m = maps_[i];
        if (m.linear.rows() != dim_ || m.linear.cols() != dim_)
            throw InvariantViolation("AffineIFS: maps must be square of equal dim");
        if (m.translation.size() != dim_)
            throw InvariantViolation("AffineIFS: translation dim mismatch");
        if (std::abs(m.linear.determinant()) <= 1e-12)
            throw InvariantViolation("AffineIFS: map " + std::to_string(i) +
                                     " is not invertible");
        double norm = operator_norm(m.linear);
        if (norm >= 1.0)
            throw InvariantViolation("AffineIFS: map " + std::to_string(i) +
                                     " is not a contraction (||A||_op = " +
                                     std::to_string(norm) + ")");
        max_norm_ = std::max(max_norm_, norm);
        if (probs_[i] <= 0.0)
            throw InvariantViolation("AffineIFS: probability " + std::to_string(i) +
                                     " not positive");
    }
    double sum = 0.0;
    for (double p : probs_) sum += p;
    if (std::abs(sum - 1.0) > 1e-12)
        throw InvariantViolation("AffineIFS: probabilities sum to " +
                                 std::to_string(sum));
}

AffineIFS AffineIFS::transposed() const {
    std::vector<AffineMap> t;
    t.reserve(maps_.size());
    for (const auto& m : maps_) t.push_back({m.linear.transpose(), m.translation});
    return AffineIFS(std::move(t), probs_);
}

EmpiricalMeasure EmpiricalMeasure::uniform(Matrix pts) {
    EmpiricalMeasure m;
    m.ambient_dim = static_cast<int>(pts.cols());
    m.weights = Vector::Constant(pts.rows(), 1.0 / static_cast<double>(pts.rows()));
    m.points = std::move(pts);
    return m;
}

AffineMap compose_word(const AffineIFS& ifs, const Word& u) {
    AffineMap acc = AffineMap::identity(ifs.dim());
    for (int letter : u) {
        if (letter < 0 || letter >= ifs.size())
            throw InvariantViolation("compose_word: letter out of range");
        acc = acc.after(ifs.map(letter));
    }
    return acc;
}

Vector coding_point(const AffineIFS& ifs, const Word& u) {
    // phi_u(0) evaluated right to left without forming the product matrix.
    Vector x = Vector::Zero(ifs.dim());
    for (auto it = u.rbegin(); it != u.rend(); ++it) x = ifs.map(*it)(x);
    return x;
}

double attractor_radius(const AffineIFS& ifs) {
    double max_a = 0.0;
    for (const auto& m : ifs.maps()) max_a = std::max(max_a, m.translation.norm());
    return max_a / (1.0 - ifs.max_norm());
}

std::optional<Vector> common_fixed_point(const AffineIFS& ifs) {
    const int d = ifs.dim();
    Vector x0 = (Matrix::Identity(d, d) - ifs.map(0).linear)
                    .partialPivLu()
                    .solve(ifs.map(0).translation);
    for (int i = 1; i < ifs.size(); ++i) {
        Vector xi = (Matrix::Identity(d, d) - ifs.map(i).linear)
                        .partialPivLu()
                        .solve(ifs.map(i).translation);
        if ((xi - x0).norm() > 1e-9) return std::nullopt;
    }
    return x0;
}

int default_truncation_depth(const AffineIFS& ifs) {
    double r = attractor_radius(ifs);
    if (r == 0.0) return 1;
    // smallest n with norm^n * R < 2^-40
    double n = (-40.0 * std::numbers::ln2 - std::log(r)) / std::log(ifs.max_norm());
    return std::max(1, static_cast<int>(std::ceil(n)));
}

EmpiricalMeasure sample_measure(const AffineIFS& ifs, long n_points, int depth,
                                std::uint64_t seed) {
    if (n_points < 1) throw InvariantViolation("sample_measure: N >= 1 required");
    if (depth <= 0) depth = default_truncation_depth(ifs);
    Matrix pts(n_points, ifs.dim());
    const auto& probs = ifs.probs();
    parallel_for(n_points, [&](long lo, long hi) {
        Word w(static_cast<std::size_t>(depth));
        for (long k = lo; k < hi; ++k) {
            CounterRng rng(derive_key(seed, static_cast<std::uint64_t>(k)));
            for (int j = 0; j < depth; ++j) w[static_cast<std::size_t>(j)] = rng.next_index(probs);
            pts.row(k) = coding_point(ifs, w).transpose();
        }
    });
    return EmpiricalMeasure::uniform(std::move(pts));
}

EmpiricalMeasure project_measure(const EmpiricalMeasure& theta, const Subspace& V) {
    if (theta.ambient_dim != V.ambient_dim())
        throw DimMismatch("project_measure: ambient dims differ");
    EmpiricalMeasure out;
    out.ambient_dim = V.dim();
    out.points = theta.points * V.basis();
    out.weights = theta.weights;
    return out;
}

EmpiricalMeasure map_measure(const EmpiricalMeasure& theta, const AffineMap& f) {
    if (f.linear.cols() != theta.ambient_dim)
        throw DimMismatch("map_measure: dims differ");
    EmpiricalMeasure out;
    out.ambient_dim = static_cast<int>(f.linear.rows());
    out.points = theta.points * f.linear.transpose();
    out.points.rowwise() += f.translation.transpose();
    out.weights = theta.weights;
    return out;
}

}  // namespace affinedim
