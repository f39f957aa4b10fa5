#include "affinedim/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace affinedim {

namespace {

constexpr int kBlocks = 32;

// QR with positive diagonal of R; Q overwritten in place.
void positive_qr(Matrix& B, Vector& log_diag) {
    Eigen::HouseholderQR<Matrix> qr(B);
    const int k = static_cast<int>(B.cols());
    Matrix q = qr.householderQ() * Matrix::Identity(B.rows(), k);
    Matrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    for (int j = 0; j < k; ++j) {
        double diag = r(j, j);
        if (diag < 0) {
            q.col(j) = -q.col(j);
            diag = -diag;
        }
        log_diag(j) = std::log2(diag);
    }
    B = q;
}

SpectrumReport run_chain(const std::vector<Matrix>& mats,
                         const std::vector<double>& probs, int k, long steps,
                         std::uint64_t seed) {
    const int d = static_cast<int>(mats[0].rows());
    CounterRng rng(derive_key(seed, "lyapunov-chain"));
    Matrix frame = Matrix::Identity(d, k);
    Vector log_diag(k);
    Vector total = Vector::Zero(k);
    Matrix block_sums = Matrix::Zero(kBlocks, k);
    long block_len = std::max<long>(1, steps / kBlocks);
    for (long t = 0; t < steps; ++t) {
        int i = rng.next_index(probs);
        Matrix b = mats[static_cast<std::size_t>(i)] * frame;
        positive_qr(b, log_diag);
        frame = b;
        total += log_diag;
        long blk = std::min<long>(kBlocks - 1, t / block_len);
        block_sums.row(blk) += log_diag.transpose();
    }
    SpectrumReport rep;
    rep.steps = steps;
    rep.seed = seed;
    rep.chi.resize(static_cast<std::size_t>(k));
    rep.stderr_.resize(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
        double mean = total(j) / static_cast<double>(steps);
        rep.chi[static_cast<std::size_t>(j)] = mean;
        // batch means over per-step block averages
        double var = 0.0;
        int used = 0;
        for (int b = 0; b < kBlocks; ++b) {
            long len = (b == kBlocks - 1) ? steps - block_len * (kBlocks - 1) : block_len;
            if (len <= 0) continue;
            double bm = block_sums(b, j) / static_cast<double>(len);
            var += (bm - mean) * (bm - mean);
            ++used;
        }
        rep.stderr_[static_cast<std::size_t>(j)] =
            used > 1 ? std::sqrt(var / (used - 1) / used) : 0.0;
    }
    // exponents come out ordered for a converged frame; enforce it anyway
    std::sort(rep.chi.begin(), rep.chi.end(), std::greater<double>());
    return rep;
}

}  // namespace

SpectrumReport lyapunov_spectrum(const AffineIFS& ifs, long steps, std::uint64_t seed) {
    std::vector<Matrix> mats;
    mats.reserve(static_cast<std::size_t>(ifs.size()));
    for (const auto& m : ifs.maps()) mats.push_back(m.linear);
    return run_chain(mats, ifs.probs(), ifs.dim(), steps, seed);
}

SpectrumReport lyapunov_top_exponents(const std::vector<Matrix>& mats,
                                      const std::vector<double>& probs, int k,
                                      long steps, std::uint64_t seed) {
    if (mats.empty()) throw InvariantViolation("lyapunov_top_exponents: no matrices");
    if (k < 1 || k > mats[0].rows())
        throw DimMismatch("lyapunov_top_exponents: k out of range");
    return run_chain(mats, probs, k, steps, seed);
}

double shannon_entropy(const std::vector<double>& p) {
    double sum = 0.0, h = 0.0;
    for (double q : p) {
        if (q < 0) throw InvariantViolation("shannon_entropy: negative probability");
        if (q > 0) h -= q * std::log2(q);
        sum += q;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw InvariantViolation("shannon_entropy: probabilities do not sum to 1");
    return h;
}

double lyapunov_dimension(const std::vector<double>& chi, double entropy) {
    const int d = static_cast<int>(chi.size());
    if (entropy < 0) throw InvariantViolation("lyapunov_dimension: H < 0");
    for (int j = 1; j < d; ++j)
        if (chi[static_cast<std::size_t>(j)] > chi[static_cast<std::size_t>(j - 1)] + 1e-12)
            throw InvariantViolation("lyapunov_dimension: chi not descending");
    int m = 0;
    double partial = 0.0;
    for (int j = 1; j <= d; ++j) {
        double next = partial + chi[static_cast<std::size_t>(j - 1)];
        if (entropy + next >= 0) {
            m = j;
            partial = next;
        } else {
            break;
        }
    }
    if (m == d) {
        double total = std::accumulate(chi.begin(), chi.end(), 0.0);
        return -d * entropy / total;
    }
    return m - (entropy + partial) / chi[static_cast<std::size_t>(m)];
}

double rho_threshold(const std::vector<double>& chi, int m) {
    const int d = static_cast<int>(chi.size());
    if (m < 1 || m > d) throw DimMismatch("rho_threshold: m out of range");
    double partial = 0.0;
    for (int k = 1; k <= m; ++k) partial += chi[static_cast<std::size_t>(k - 1)];
    double coeff = static_cast<double>((m - 1) * (m - 2)) / 2.0;
    return (chi[0] - chi[static_cast<std::size_t>(m - 1)]) * coeff - partial;
}

namespace {

struct WeightedMap {
    std::vector<double> coeffs;  // linear row-major then translation
    double prob;
};

std::vector<double> flatten(const AffineMap& m) {
    const int d = static_cast<int>(m.linear.rows());
    std::vector<double> c;
    c.reserve(static_cast<std::size_t>(d * d + d));
    for (int r = 0; r < d; ++r)
        for (int col = 0; col < d; ++col) c.push_back(m.linear(r, col));
    for (int r = 0; r < d; ++r) c.push_back(m.translation(r));
    return c;
}

bool close(const std::vector<double>& a, const std::vector<double>& b, double tol) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > tol) return false;
    return true;
}

// Sort lexicographically and merge runs within dedup_tol of the run head.
void dedup(std::vector<WeightedMap>& maps, double tol, bool* merged) {
    std::sort(maps.begin(), maps.end(),
              [](const WeightedMap& a, const WeightedMap& b) { return a.coeffs < b.coeffs; });
    std::vector<WeightedMap> out;
    for (auto& m : maps) {
        if (!out.empty() && close(out.back().coeffs, m.coeffs, tol)) {
            out.back().prob += m.prob;
            if (merged) *merged = true;
        } else {
            out.push_back(std::move(m));
        }
    }
    maps = std::move(out);
}

}  // namespace

std::vector<double> convolution_entropies(const AffineIFS& ifs, int n_max,
                                          double dedup_tol, long cap, bool* any_merge) {
    if (any_merge) *any_merge = false;
    std::vector<WeightedMap> current;
    for (int i = 0; i < ifs.size(); ++i)
        current.push_back({flatten(ifs.map(i)), ifs.probs()[static_cast<std::size_t>(i)]});
    dedup(current, dedup_tol, any_merge);
    std::vector<double> entropies;
    // reconstruct AffineMap from flat coefficients for composition
    const int d = ifs.dim();
    auto unflatten = [d](const std::vector<double>& c) {
        AffineMap m;
        m.linear.resize(d, d);
        for (int r = 0; r < d; ++r)
            for (int col = 0; col < d; ++col) m.linear(r, col) = c[static_cast<std::size_t>(r * d + col)];
        m.translation.resize(d);
        for (int r = 0; r < d; ++r) m.translation(r) = c[static_cast<std::size_t>(d * d + r)];
        return m;
    };
    for (int n = 1; n <= n_max; ++n) {
        std::vector<double> probs;
        probs.reserve(current.size());
        for (const auto& m : current) probs.push_back(m.prob);
        entropies.push_back(shannon_entropy(probs));
        if (n == n_max) break;
        if (static_cast<long>(current.size()) * ifs.size() > cap)
            throw BudgetExceeded("random_walk_entropy: composition cap exceeded");
        std::vector<WeightedMap> next;
        next.reserve(current.size() * static_cast<std::size_t>(ifs.size()));
        for (const auto& wm : current) {
            AffineMap g = unflatten(wm.coeffs);
            for (int i = 0; i < ifs.size(); ++i) {
                AffineMap composed = ifs.map(i).after(g);
                next.push_back({flatten(composed),
                                wm.prob * ifs.probs()[static_cast<std::size_t>(i)]});
            }
        }
        dedup(next, dedup_tol, any_merge);
        current = std::move(next);
    }
    return entropies;
}

EntropyReport random_walk_entropy(const AffineIFS& ifs, int n_max, double dedup_tol,
                                  long cap) {
    bool merged = false;
    auto ents = convolution_entropies(ifs, n_max, dedup_tol, cap, &merged);
    EntropyReport rep;
    rep.entropy_p = shannon_entropy(ifs.probs());
    rep.n_used = static_cast<int>(ents.size());
    rep.rw_entropy = ents.back() / static_cast<double>(rep.n_used);
    rep.free_semigroup = !merged;
    return rep;
}

}  // namespace affinedim
