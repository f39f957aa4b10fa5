#include "affinedim/cutset.hpp"

#include <cmath>

namespace affinedim {

namespace {

double alpha_m(const Matrix& A, int m) {
    return singular_values(A)(m - 1);
}

void expand(const AffineIFS& ifs, int m, double threshold, long cap, Word& prefix,
            const Matrix& product, double prob, CutSet& out) {
    for (int i = 0; i < ifs.size(); ++i) {
        Matrix next = product * ifs.map(i).linear;
        prefix.push_back(i);
        double p = prob * ifs.probs()[static_cast<std::size_t>(i)];
        if (alpha_m(next, m) <= threshold) {
            if (static_cast<long>(out.words.size()) >= cap)
                throw BudgetExceeded("build_cutset: word cap exceeded");
            out.words.push_back(prefix);
            out.weights.push_back(p);
        } else {
            expand(ifs, m, threshold, cap, prefix, next, p, out);
        }
        prefix.pop_back();
    }
}

}  // namespace

CutSet build_cutset(const AffineIFS& ifs, int m, int n, long cap) {
    if (m < 1 || m > ifs.dim()) throw DimMismatch("build_cutset: m out of range");
    if (n < 1) throw InvariantViolation("build_cutset: n >= 1 required");
    CutSet out;
    out.m = m;
    out.scale = n;
    Word prefix;
    expand(ifs, m, std::exp2(-n), cap, prefix, Matrix::Identity(ifs.dim(), ifs.dim()),
           1.0, out);
    return out;
}

Word sample_cutset_word(const AffineIFS& ifs, int m, int n, std::uint64_t seed) {
    if (m < 1 || m > ifs.dim()) throw DimMismatch("sample_cutset_word: m out of range");
    CounterRng rng(seed);
    double threshold = std::exp2(-n);
    Word w;
    Matrix product = Matrix::Identity(ifs.dim(), ifs.dim());
    while (true) {
        int letter = rng.next_index(ifs.probs());
        w.push_back(letter);
        product = product * ifs.map(letter).linear;
        if (alpha_m(product, m) <= threshold) return w;
    }
}

Word sample_fixed_word(const AffineIFS& ifs, int n, std::uint64_t seed) {
    CounterRng rng(seed);
    Word w(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = rng.next_index(ifs.probs());
    return w;
}

}  // namespace affinedim
