#pragma once

// Hypothesis checkers: SSC/OSC certificates, Diophantine gaps, free
// semigroup depth, proximality and strong-irreducibility evidence.

#include <cstdint>
#include <optional>

#include "affinedim/ifs.hpp"
#include "affinedim/lyapunov.hpp"

namespace affinedim {

enum class Certificate { Certified, Refuted, Unknown };
const char* to_string(Certificate c);

struct SeparationReport {
    std::vector<int> depths;
    std::vector<double> min_gaps;       // min ||phi_u - phi_w|| over distinct pairs
    double epsilon_fit = 0.0;           // min_n gap_n^{1/n}
    int free_up_to = 0;                 // largest n with all compositions distinct
};

constexpr long kDefaultGapCap = 8192;       // pairwise norm evaluations are quadratic
constexpr long kDefaultFreeCap = 2'000'000;

// sup_{|x| <= 1} |A x + a|  (the norm on affine maps used for gaps)
double affine_norm(const Matrix& A, const Vector& a);

// Per-depth minimum gaps between distinct length-n compositions and the
// fitted Diophantine epsilon.  Throws BudgetExceeded past `cap` compositions.
SeparationReport diophantine_gap(const AffineIFS& ifs, int n_max,
                                 double dedup_tol = 1e-9, long cap = kDefaultGapCap);

// Largest n <= n_max with all |Lambda|^n compositions pairwise distinct
// beyond tol; stops at the first collision depth.
int free_semigroup_check(const AffineIFS& ifs, int n_max, double tol = 1e-9,
                         long cap = kDefaultFreeCap);

// Ball-cover certificate for the strong separation condition.
Certificate ssc_check(const AffineIFS& ifs, int depth);

struct AxisBox {
    Vector lo;
    Vector hi;
};

struct OscResult {
    Certificate osc = Certificate::Unknown;
    Certificate sosc = Certificate::Unknown;
    std::string detail;
};

// Open set condition for a user-supplied open axis box U: image parallelotopes
// contained in U and pairwise disjoint (separating-axis test, d <= 3).
// SOSC additionally needs a sampled attractor point inside U.
OscResult osc_check(const AffineIFS& ifs, const AxisBox& box, int depth);

struct ProximalityReport {
    double gap = 0.0;     // top-two exponent gap of the wedge-m chain, bits
    double stderr_ = 0.0;
    bool evidence = false;  // gap positive at 3 sigma
};

ProximalityReport proximality_check(const AffineIFS& ifs, int m, long steps,
                                    std::uint64_t seed);

struct IrreducibilityReport {
    bool candidate_found = false;
    std::vector<WedgeVector> candidates;  // witness lines in the wedge space
    int trials_used = 0;
};

// Heuristic: candidate invariant wedge-lines from eigenvectors of short
// random products; reports a witness family permuted by every generator.
IrreducibilityReport irreducibility_check(const AffineIFS& ifs, int m, int trials,
                                          std::uint64_t seed, double tol = 1e-6);

}  // namespace affinedim
