#include "affinedim/separation.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>

namespace affinedim {

const char* to_string(Certificate c) {
    switch (c) {
        case Certificate::Certified: return "certified";
        case Certificate::Refuted: return "refuted";
        default: return "unknown";
    }
}

double affine_norm(const Matrix& A, const Vector& a) {
    // max_{|x|<=1} |Ax + a| = max_{|y|=1} (y.a + ||A^T y||); ascend the convex
    // objective from deterministic starts (gradient step is monotone).
    const int d = static_cast<int>(A.rows());
    if (d == 0) return 0.0;
    auto objective = [&](const Vector& y) { return y.dot(a) + (A.transpose() * y).norm(); };
    std::vector<Vector> starts;
    if (a.norm() > 1e-300) starts.push_back(a.normalized());
    Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeFullU);
    for (int j = 0; j < d; ++j) {
        starts.push_back(svd.matrixU().col(j));
        starts.push_back(-svd.matrixU().col(j));
    }
    if (starts.empty()) starts.push_back(Vector::Unit(d, 0));
    double best = 0.0;
    for (Vector y : starts) {
        for (int iter = 0; iter < 25; ++iter) {
            Vector aty = A.transpose() * y;
            Vector grad = a;
            double n = aty.norm();
            if (n > 1e-300) grad += A * (aty / n);
            double gn = grad.norm();
            if (gn < 1e-300) break;
            Vector next = grad / gn;
            if ((next - y).norm() < 1e-14) {
                y = next;
                break;
            }
            y = next;
        }
        best = std::max(best, objective(y));
    }
    return best;
}

namespace {

struct Composition {
    Matrix linear;
    Vector trans;
};

std::vector<Composition> extend(const AffineIFS& ifs,
                                const std::vector<Composition>& prev) {
    std::vector<Composition> out;
    out.reserve(prev.size() * static_cast<std::size_t>(ifs.size()));
    for (const auto& g : prev)
        for (int i = 0; i < ifs.size(); ++i) {
            const auto& m = ifs.map(i);
            out.push_back({g.linear * m.linear, g.linear * m.translation + g.trans});
        }
    return out;
}

double max_abs_diff(const Composition& a, const Composition& b) {
    double m = (a.linear - b.linear).cwiseAbs().maxCoeff();
    return std::max(m, (a.trans - b.trans).cwiseAbs().maxCoeff());
}

}  // namespace

SeparationReport diophantine_gap(const AffineIFS& ifs, int n_max, double dedup_tol,
                                 long cap) {
    SeparationReport rep;
    rep.free_up_to = n_max;
    std::vector<Composition> level;
    for (const auto& m : ifs.maps()) level.push_back({m.linear, m.translation});
    bool collision_seen = false;
    for (int n = 1; n <= n_max; ++n) {
        if (n > 1) level = extend(ifs, level);
        if (static_cast<long>(level.size()) > cap)
            throw BudgetExceeded("diophantine_gap: composition cap exceeded at n=" +
                                 std::to_string(n));
        double gap = std::numeric_limits<double>::infinity();
        bool any_pair = false;
        for (std::size_t i = 0; i < level.size(); ++i)
            for (std::size_t j = i + 1; j < level.size(); ++j) {
                if (max_abs_diff(level[i], level[j]) <= dedup_tol) {
                    if (!collision_seen) {
                        collision_seen = true;
                        rep.free_up_to = n - 1;
                    }
                    continue;  // equal maps do not count toward the gap
                }
                any_pair = true;
                gap = std::min(gap, affine_norm(level[i].linear - level[j].linear,
                                                level[i].trans - level[j].trans));
            }
        rep.depths.push_back(n);
        rep.min_gaps.push_back(any_pair ? gap : 0.0);
    }
    rep.epsilon_fit = 1.0;
    for (std::size_t i = 0; i < rep.min_gaps.size(); ++i) {
        if (rep.min_gaps[i] <= 0.0) {
            rep.epsilon_fit = 0.0;
            break;
        }
        rep.epsilon_fit = std::min(
            rep.epsilon_fit, std::pow(rep.min_gaps[i], 1.0 / static_cast<double>(i + 1)));
    }
    return rep;
}

int free_semigroup_check(const AffineIFS& ifs, int n_max, double tol, long cap) {
    std::vector<Composition> level;
    for (const auto& m : ifs.maps()) level.push_back({m.linear, m.translation});
    for (int n = 1; n <= n_max; ++n) {
        if (n > 1) level = extend(ifs, level);
        if (static_cast<long>(level.size()) > cap)
            throw BudgetExceeded("free_semigroup_check: cap exceeded at n=" +
                                 std::to_string(n));
        // sort by flattened coefficients; collisions become adjacent
        std::vector<std::pair<std::vector<double>, std::size_t>> keys;
        keys.reserve(level.size());
        for (std::size_t i = 0; i < level.size(); ++i) {
            std::vector<double> k;
            for (long r = 0; r < level[i].linear.size(); ++r)
                k.push_back(level[i].linear.data()[r]);
            for (long r = 0; r < level[i].trans.size(); ++r) k.push_back(level[i].trans(r));
            keys.emplace_back(std::move(k), i);
        }
        std::sort(keys.begin(), keys.end());
        for (std::size_t i = 1; i < keys.size(); ++i)
            if (max_abs_diff(level[keys[i - 1].second], level[keys[i].second]) <= tol)
                return n - 1;
    }
    return n_max;
}

namespace {

// Invariant enclosing ball of the attractor, tightened by iterating
// K subset B(c, r)  =>  K subset union_i B(phi_i(c), ||A_i|| r) subset B(c', r').
std::pair<Vector, double> enclosing_ball(const AffineIFS& ifs) {
    const int d = ifs.dim();
    Vector c = Vector::Zero(d);
    double r = attractor_radius(ifs);
    for (int it = 0; it < 200; ++it) {
        std::vector<Vector> centers;
        std::vector<double> radii;
        for (const auto& m : ifs.maps()) {
            centers.push_back(m(c));
            radii.push_back(operator_norm(m.linear) * r);
        }
        Vector lo = centers[0].array() - radii[0];
        Vector hi = centers[0].array() + radii[0];
        for (std::size_t i = 1; i < centers.size(); ++i) {
            lo = lo.cwiseMin(Vector(centers[i].array() - radii[i]));
            hi = hi.cwiseMax(Vector(centers[i].array() + radii[i]));
        }
        Vector nc = (lo + hi) / 2.0;
        double nr = 0.0;
        for (std::size_t i = 0; i < centers.size(); ++i)
            nr = std::max(nr, (nc - centers[i]).norm() + radii[i]);
        if ((nc - c).norm() + std::abs(nr - r) < 1e-14 * (1.0 + r)) break;
        c = nc;
        r = nr;
    }
    return {c, r};
}

}  // namespace

Certificate ssc_check(const AffineIFS& ifs, int depth) {
    if (ifs.size() == 1) return Certificate::Certified;
    auto [center0, radius0] = enclosing_ball(ifs);
    const double slack = 1e-12 * (1.0 + radius0);
    // exact attractor points: fixed points of the generators
    std::vector<Vector> fixed;
    for (int i = 0; i < ifs.size(); ++i)
        fixed.push_back((Matrix::Identity(ifs.dim(), ifs.dim()) - ifs.map(i).linear)
                            .partialPivLu()
                            .solve(ifs.map(i).translation));

    struct Node {
        AffineMap map;
        int first;
    };
    std::vector<Node> level;
    for (int i = 0; i < ifs.size(); ++i) level.push_back({ifs.map(i), i});
    for (int k = 1; k <= depth; ++k) {
        if (k > 1) {
            std::vector<Node> next;
            next.reserve(level.size() * static_cast<std::size_t>(ifs.size()));
            for (const auto& node : level)
                for (int i = 0; i < ifs.size(); ++i)
                    next.push_back({node.map.after(ifs.map(i)), node.first});
            level = std::move(next);
            if (level.size() > 1'000'000) return Certificate::Unknown;
        }
        // certificate first: cylinder balls of distinct branches pairwise separated
        if (level.size() <= 4000) {
            std::vector<double> radii(level.size());
            std::vector<Vector> centers(level.size());
            for (std::size_t i = 0; i < level.size(); ++i) {
                radii[i] = radius0 * operator_norm(level[i].map.linear);
                centers[i] = level[i].map(center0);
            }
            bool ok = true;
            for (std::size_t i = 0; i < level.size() && ok; ++i)
                for (std::size_t j = i + 1; j < level.size() && ok; ++j) {
                    if (level[i].first == level[j].first) continue;
                    if ((centers[i] - centers[j]).norm() <= radii[i] + radii[j] + slack)
                        ok = false;
                }
            if (ok) return Certificate::Certified;
        }
        // refutation: attractor points of distinct branches coinciding within
        // the depth-k resolution
        const double resolution =
            std::max(0.5 * radius0 * std::pow(ifs.max_norm(), k), 1e-9 * (1.0 + radius0));
        std::vector<std::pair<Vector, int>> pts;
        for (const auto& node : level)
            for (const auto& f : fixed) pts.emplace_back(node.map(f), node.first);
        if (pts.size() <= 4000) {
            for (std::size_t i = 0; i < pts.size(); ++i)
                for (std::size_t j = i + 1; j < pts.size(); ++j)
                    if (pts[i].second != pts[j].second &&
                        (pts[i].first - pts[j].first).norm() <= resolution)
                        return Certificate::Refuted;
        }
    }
    return Certificate::Unknown;
}

namespace {

struct Parallelotope {
    Vector center;
    Matrix edges;  // columns are half-edge vectors
};

// candidate separating axes for the SAT test
std::vector<Vector> sat_axes(const Parallelotope& p, const Parallelotope& q) {
    const int d = static_cast<int>(p.center.size());
    std::vector<Vector> axes;
    auto add_normals = [&](const Matrix& edges) {
        if (d == 1) {
            axes.push_back(Vector::Ones(1));
            return;
        }
        // face normals: orthogonal to all edge columns but one
        for (int skip = 0; skip < d; ++skip) {
            Matrix others(d, d - 1);
            int c = 0;
            for (int j = 0; j < d; ++j)
                if (j != skip) others.col(c++) = edges.col(j);
            Eigen::FullPivLU<Matrix> lu(others.transpose());
            Matrix kernel = lu.kernel();
            if (kernel.cols() >= 1 && kernel.col(0).norm() > 1e-12)
                axes.push_back(kernel.col(0).normalized());
        }
    };
    add_normals(p.edges);
    add_normals(q.edges);
    if (d == 3) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                Eigen::Vector3d a = p.edges.col(i), b = q.edges.col(j);
                Eigen::Vector3d cr = a.cross(b);
                if (cr.norm() > 1e-12) axes.push_back(cr.normalized());
            }
    }
    return axes;
}

// signed overlap: negative means the axis separates the open sets
double axis_overlap(const Parallelotope& p, const Parallelotope& q, const Vector& axis) {
    double dist = std::abs(axis.dot(p.center - q.center));
    double extent = 0.0;
    for (long j = 0; j < p.edges.cols(); ++j) extent += std::abs(axis.dot(p.edges.col(j)));
    for (long j = 0; j < q.edges.cols(); ++j) extent += std::abs(axis.dot(q.edges.col(j)));
    return extent - dist;
}

}  // namespace

OscResult osc_check(const AffineIFS& ifs, const AxisBox& box, int depth) {
    OscResult res;
    const int d = ifs.dim();
    if (box.lo.size() != d || box.hi.size() != d)
        throw DimMismatch("osc_check: box dim mismatch");
    for (int c = 0; c < d; ++c)
        if (!(box.lo(c) < box.hi(c)))
            throw InvariantViolation("osc_check: box must be nonempty");
    Vector center = (box.lo + box.hi) / 2.0;
    Vector half = (box.hi - box.lo) / 2.0;
    const double scale = half.maxCoeff();
    const double slack = 1e-12 * scale;

    std::vector<Parallelotope> images;
    for (const auto& m : ifs.maps())
        images.push_back({m(center), m.linear * Matrix(half.asDiagonal())});

    // containment: all image vertices inside the closed box
    for (const auto& img : images) {
        for (long mask = 0; mask < (1L << d); ++mask) {
            Vector v = img.center;
            for (int c = 0; c < d; ++c)
                v += ((mask >> c) & 1 ? 1.0 : -1.0) * img.edges.col(c);
            for (int c = 0; c < d; ++c)
                if (v(c) < box.lo(c) - slack || v(c) > box.hi(c) + slack) {
                    res.osc = Certificate::Refuted;
                    res.detail = "image vertex escapes the box";
                    res.sosc = Certificate::Refuted;
                    return res;
                }
        }
    }

    // pairwise disjointness of the open images via separating axes
    bool all_disjoint = true;
    bool any_unknown = false;
    for (std::size_t i = 0; i < images.size(); ++i)
        for (std::size_t j = i + 1; j < images.size(); ++j) {
            auto axes = sat_axes(images[i], images[j]);
            double min_overlap = std::numeric_limits<double>::infinity();
            for (const auto& axis : axes)
                min_overlap = std::min(min_overlap, axis_overlap(images[i], images[j], axis));
            if (min_overlap <= slack) continue;  // separated (touching allowed)
            if (d <= 3) {
                res.osc = Certificate::Refuted;
                res.detail = "images " + std::to_string(i) + "," + std::to_string(j) +
                             " overlap (min axis overlap " + std::to_string(min_overlap) + ")";
                res.sosc = Certificate::Refuted;
                return res;
            }
            // beyond d = 3 the axis set is not complete, so no refutation
            any_unknown = true;
            all_disjoint = false;
        }
    if (!all_disjoint && any_unknown) {
        res.osc = Certificate::Unknown;
        res.sosc = Certificate::Unknown;
        return res;
    }
    res.osc = Certificate::Certified;

    // SOSC: an attractor point strictly inside U by more than the cylinder radius
    double radius = attractor_radius(ifs);
    res.sosc = Certificate::Unknown;
    int sosc_depth = std::min(depth, 12);
    double margin = radius * std::pow(ifs.max_norm(), sosc_depth);
    std::function<bool(Word&, int)> search = [&](Word& w, int k) -> bool {
        if (k == sosc_depth) {
            Vector p = coding_point(ifs, w);
            for (int c = 0; c < d; ++c)
                if (p(c) <= box.lo(c) + margin || p(c) >= box.hi(c) - margin) return false;
            return true;
        }
        for (int i = 0; i < ifs.size(); ++i) {
            w.push_back(i);
            if (search(w, k + 1)) {
                w.pop_back();
                return true;
            }
            w.pop_back();
        }
        return false;
    };
    Word w;
    if (ifs.size() > 1 && std::pow(ifs.size(), sosc_depth) > 1e6) sosc_depth = 6;
    if (search(w, 0)) res.sosc = Certificate::Certified;
    return res;
}

ProximalityReport proximality_check(const AffineIFS& ifs, int m, long steps,
                                    std::uint64_t seed) {
    if (m < 1 || m >= ifs.dim())
        throw DimMismatch("proximality_check: need 1 <= m < d");
    std::vector<Matrix> wedges;
    for (const auto& map : ifs.maps()) wedges.push_back(wedge_power(map.linear, m));
    SpectrumReport rep = lyapunov_top_exponents(wedges, ifs.probs(), 2, steps, seed);
    ProximalityReport out;
    out.gap = rep.chi[0] - rep.chi[1];
    out.stderr_ = std::sqrt(rep.stderr_[0] * rep.stderr_[0] +
                            rep.stderr_[1] * rep.stderr_[1]);
    out.evidence = out.gap > 3.0 * out.stderr_;
    return out;
}

IrreducibilityReport irreducibility_check(const AffineIFS& ifs, int m, int trials,
                                          std::uint64_t seed, double tol) {
    if (m < 1 || m >= ifs.dim())
        throw DimMismatch("irreducibility_check: need 1 <= m < d");
    std::vector<Matrix> wedges;
    for (const auto& map : ifs.maps()) wedges.push_back(wedge_power(map.linear, m));
    const long wd = wedges[0].rows();

    // candidate lines: real eigenvectors of short random products
    CounterRng rng(derive_key(seed, "irreducibility"));
    std::vector<Vector> candidates;
    auto add_candidate = [&](const Vector& v) {
        Vector u = v.normalized();
        for (const auto& c : candidates)
            if (std::abs(c.dot(u)) > 1.0 - 1e-9) return;
        candidates.push_back(u);
    };
    IrreducibilityReport rep;
    for (int t = 0; t < trials; ++t) {
        int len = 1 + static_cast<int>(rng.next_u64() % 3);
        Matrix prod = Matrix::Identity(wd, wd);
        for (int j = 0; j < len; ++j)
            prod = prod * wedges[static_cast<std::size_t>(rng.next_index(ifs.probs()))];
        Eigen::EigenSolver<Matrix> es(prod);
        for (long j = 0; j < wd; ++j)
            if (std::abs(es.eigenvalues()(j).imag()) < 1e-10 * es.eigenvalues().norm())
                add_candidate(es.eigenvectors().col(j).real());
        rep.trials_used = t + 1;

        // is any single candidate, or the full family, permuted by every generator?
        auto closed_under_generators = [&](const std::vector<Vector>& family) {
            for (const auto& w : wedges)
                for (const auto& v : family) {
                    Vector img = (w * v).normalized();
                    bool matched = false;
                    for (const auto& u : family)
                        if (std::abs(u.dot(img)) > 1.0 - tol) {
                            matched = true;
                            break;
                        }
                    if (!matched) return false;
                }
            return true;
        };
        for (const auto& c : candidates)
            if (closed_under_generators({c})) {
                rep.candidate_found = true;
                rep.candidates.push_back({ifs.dim(), m, c});
                return rep;
            }
        if (candidates.size() <= 16 && candidates.size() > 1 &&
            closed_under_generators(candidates)) {
            rep.candidate_found = true;
            for (const auto& c : candidates)
                rep.candidates.push_back({ifs.dim(), m, c});
            return rep;
        }
    }
    return rep;
}

}  // namespace affinedim
