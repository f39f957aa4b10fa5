#pragma once

// Singular-value-stopped minimal cut-sets of the word tree and the random
// words drawn from them.

#include <cstdint>

#include "affinedim/ifs.hpp"

namespace affinedim {

struct CutSet {
    int m = 1;       // singular-value index
    int scale = 1;   // n: branches stop once alpha_m drops to <= 2^-n
    std::vector<Word> words;
    std::vector<double> weights;  // cylinder probabilities p_u
};

constexpr long kDefaultCutsetCap = 10'000'000;

// Depth-first expansion, each branch stopped at the first prefix with
// alpha_m(A_u) <= 2^-n.  Deterministic order (letters ascending).
// Throws BudgetExceeded past `cap` words.
CutSet build_cutset(const AffineIFS& ifs, int m, int n, long cap = kDefaultCutsetCap);

// One word of Psi_m(n) drawn with probability p_u, by streaming descent.
Word sample_cutset_word(const AffineIFS& ifs, int m, int n, std::uint64_t seed);

// U(n): n i.i.d. letters with law p.
Word sample_fixed_word(const AffineIFS& ifs, int n, std::uint64_t seed);

}  // namespace affinedim
