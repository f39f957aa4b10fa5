#include "affinedim/furstenberg.hpp"

#include <atomic>
#include <cmath>
#include <fstream>

#include "affinedim/parallel.hpp"

namespace affinedim {

namespace {

Matrix word_product(const AffineIFS& ifs, const Word& w) {
    Matrix p = Matrix::Identity(ifs.dim(), ifs.dim());
    int since_rescale = 0;
    for (int letter : w) {
        p = p * ifs.map(letter).linear;
        // rescale periodically; products of contractions underflow otherwise
        if (++since_rescale == 32) {
            double norm = p.cwiseAbs().maxCoeff();
            if (norm > 0 && norm < 1e-120) p /= norm;
            since_rescale = 0;
        }
    }
    double norm = p.cwiseAbs().maxCoeff();
    if (norm > 0) p /= norm;
    return p;
}

Word random_word(const AffineIFS& ifs, int len, std::uint64_t key) {
    CounterRng rng(key);
    Word w(static_cast<std::size_t>(len));
    for (int i = 0; i < len; ++i) w[static_cast<std::size_t>(i)] = rng.next_index(ifs.probs());
    return w;
}

}  // namespace

Subspace boundary_map_word(const AffineIFS& ifs, const Word& w, int m, double gap_tol) {
    return svd_subspace(word_product(ifs, w), m, gap_tol);
}

Subspace boundary_map(const AffineIFS& ifs, int prefix_len, int m, std::uint64_t seed,
                      double gap_tol) {
    return boundary_map_word(ifs, random_word(ifs, prefix_len, seed), m, gap_tol);
}

int default_boundary_depth(const AffineIFS& ifs, int m, std::uint64_t seed) {
    SpectrumReport rep = lyapunov_spectrum(ifs, 20000, derive_key(seed, "depth-probe"));
    double gap = rep.chi[static_cast<std::size_t>(m - 1)] -
                 rep.chi[static_cast<std::size_t>(m)];
    if (gap <= 1e-3) return 4096;
    // 2^{-n gap} < 1e-8  <=>  n > 8 log2(10) / gap
    int n = static_cast<int>(std::ceil(8.0 * std::log2(10.0) / gap));
    return std::clamp(n, 32, 4096);
}

GrassmannSample sample_stationary(const AffineIFS& ifs, int m, long n_draws, int depth,
                                  std::uint64_t seed, bool transpose) {
    const AffineIFS chain = transpose ? ifs.transposed() : ifs;
    GrassmannSample out;
    out.grade = m;
    out.depth = depth;
    out.seed = seed;
    std::vector<std::optional<Subspace>> slots(static_cast<std::size_t>(n_draws));
    std::atomic_long failures{0};
    parallel_for(n_draws, [&](long lo, long hi) {
        for (long i = lo; i < hi; ++i) {
            try {
                slots[static_cast<std::size_t>(i)] = boundary_map(
                    chain, depth, m, derive_key(seed, static_cast<std::uint64_t>(i)));
            } catch (const GapTooSmall&) {
                ++failures;
            }
        }
    });
    out.failures = failures.load();
    for (auto& s : slots)
        if (s) out.subspaces.push_back(std::move(*s));
    return out;
}

GrassmannSample sample_stationary_forward(const AffineIFS& ifs, int m, long n_draws,
                                          long burn_in, std::uint64_t seed,
                                          bool transpose) {
    const AffineIFS chain = transpose ? ifs.transposed() : ifs;
    GrassmannSample out;
    out.grade = m;
    out.depth = static_cast<int>(burn_in);
    out.seed = seed;
    CounterRng rng(derive_key(seed, "forward-chain"));
    // start from the top-m SVD frame of a short product to avoid degenerate starts
    Matrix frame = Matrix::Identity(ifs.dim(), m);
    for (long t = 0; t < burn_in + n_draws; ++t) {
        int i = rng.next_index(chain.probs());
        Matrix b = chain.map(i).linear * frame;
        Eigen::HouseholderQR<Matrix> qr(b);
        frame = qr.householderQ() * Matrix::Identity(ifs.dim(), m);
        if (t >= burn_in) out.subspaces.emplace_back(ifs.dim(), frame);
    }
    return out;
}

Flag flag_boundary(const AffineIFS& ifs, int prefix_len, std::uint64_t seed,
                   double gap_tol) {
    Matrix p = word_product(ifs, random_word(ifs, prefix_len, seed));
    Eigen::JacobiSVD<Matrix> svd(p, Eigen::ComputeFullU);
    Vector sv = svd.singularValues();
    const int d = ifs.dim();
    for (int l = 1; l < d; ++l)
        if ((sv(l - 1) - sv(l)) / sv(0) < gap_tol)
            throw GapTooSmall("flag_boundary: degenerate level " + std::to_string(l));
    Flag flag;
    flag.levels.reserve(static_cast<std::size_t>(d + 1));
    for (int l = 0; l <= d; ++l)
        flag.levels.emplace_back(d, svd.matrixU().leftCols(l));
    return flag;
}

RuelleCheck ruelle_decay_check(const AffineIFS& ifs, int n1, int n2, std::uint64_t seed,
                               double eps, const std::vector<double>& chi) {
    if (n2 < n1 || n1 < 1)
        throw InvariantViolation("ruelle_decay_check: need n2 >= n1 >= 1");
    const int d = ifs.dim();
    Word w = random_word(ifs, n2, derive_key(seed, "ruelle-word"));
    Word w1(w.begin(), w.begin() + n1);
    Matrix p1 = word_product(ifs, w1);
    Matrix p2 = word_product(ifs, w);
    Eigen::JacobiSVD<Matrix> svd1(p1, Eigen::ComputeFullU);
    Eigen::JacobiSVD<Matrix> svd2(p2, Eigen::ComputeFullU);
    RuelleCheck out;
    out.pass.assign(static_cast<std::size_t>(d), std::vector<bool>(static_cast<std::size_t>(d)));
    out.lhs.assign(static_cast<std::size_t>(d), std::vector<double>(static_cast<std::size_t>(d)));
    out.bound.assign(static_cast<std::size_t>(d), std::vector<double>(static_cast<std::size_t>(d)));
    for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
            double inner = std::abs(svd1.matrixU().col(k).dot(svd2.matrixU().col(l)));
            double gap = std::abs(chi[static_cast<std::size_t>(k)] -
                                  chi[static_cast<std::size_t>(l)]);
            double bound = std::exp2(-static_cast<double>(n1) * (gap - eps));
            out.lhs[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] = inner;
            out.bound[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] = bound;
            out.pass[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] =
                inner <= bound + 1e-12;
        }
    return out;
}

double kappa_mass(const GrassmannSample& sample, const Subspace& W, double delta) {
    if (sample.subspaces.empty()) return 0.0;
    const int d = sample.subspaces.front().ambient_dim();
    if (W.dim() != d - sample.grade)
        throw DimMismatch("kappa_mass: dim W must be d - m");
    long hits = 0;
    for (const auto& v : sample.subspaces)
        if (kappa(v, W) <= delta) ++hits;
    return static_cast<double>(hits) / static_cast<double>(sample.subspaces.size());
}

double guivarch_fraction(const GrassmannSample& sample, const Vector& x, double r,
                         double alpha) {
    if (sample.grade != 1)
        throw DimMismatch("guivarch_fraction: needs a sample of lines (m = 1)");
    if (r <= 0.0 || r >= 1.0)
        throw InvariantViolation("guivarch_fraction: r in (0,1) required");
    double threshold = std::pow(r, alpha);
    long hits = 0;
    for (const auto& v : sample.subspaces)
        if (std::abs(v.basis().col(0).dot(x)) <= threshold) ++hits;
    return sample.subspaces.empty()
               ? 0.0
               : static_cast<double>(hits) / static_cast<double>(sample.subspaces.size());
}

Vector plucker_moment(const GrassmannSample& sample) {
    if (sample.subspaces.empty()) throw InvariantViolation("plucker_moment: empty sample");
    Vector sum;
    for (const auto& v : sample.subspaces) {
        Vector coords = plucker(v).coords;
        if (sum.size() == 0) sum = Vector::Zero(coords.size());
        sum += coords;
    }
    return sum / static_cast<double>(sample.subspaces.size());
}

GrassmannSample pushforward_sample(const AffineIFS& ifs, const GrassmannSample& sample,
                                   std::uint64_t seed, bool transpose) {
    const AffineIFS chain = transpose ? ifs.transposed() : ifs;
    GrassmannSample out;
    out.grade = sample.grade;
    out.depth = sample.depth;
    out.seed = seed;
    CounterRng rng(derive_key(seed, "pushforward"));
    for (const auto& v : sample.subspaces) {
        int i = rng.next_index(chain.probs());
        out.subspaces.push_back(Subspace::from_span(chain.map(i).linear * v.basis()));
    }
    return out;
}

void write_plucker_csv(const GrassmannSample& sample, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(path + ": cannot open for writing");
    out.precision(17);
    for (const auto& v : sample.subspaces) {
        Vector coords = plucker(v).coords;
        for (long i = 0; i < coords.size(); ++i) {
            if (i) out << ',';
            out << coords(i);
        }
        out << '\n';
    }
}

}  // namespace affinedim
