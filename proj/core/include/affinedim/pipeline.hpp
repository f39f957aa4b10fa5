#pragma once

// End-to-end orchestration behind the CLI: spectrum reports, dimension
// estimation, theorem-verification reports, and rendering.

#include <cstdint>
#include <string>

#include "affinedim/entropy.hpp"
#include "affinedim/furstenberg.hpp"
#include "affinedim/lyapunov.hpp"
#include "affinedim/separation.hpp"

namespace affinedim {

struct SpectrumOutput {
    SpectrumReport spectrum;
    double entropy_p = 0.0;
    double dim_lyapunov = 0.0;
    std::vector<double> rho;  // rho_1 .. rho_d
};

SpectrumOutput run_spectrum(const AffineIFS& ifs, long steps, std::uint64_t seed);
std::string spectrum_text(const SpectrumOutput& out);
void write_spectrum_csv(const SpectrumOutput& out, const std::string& path);

struct ProjectedSlope {
    int grade = 0;
    Subspace subspace;
    EntropySlope slope;
};

struct DimensionOutput {
    EntropySlope full;                    // slope for mu itself
    std::vector<ProjectedSlope> projections;  // pi_V mu, V ~ nu_m^*
    long n_points = 0;
};

struct DimensionOptions {
    long n_points = 1'000'000;
    int scale_lo = 3;
    int scale_hi = 0;          // 0 = auto via suggest_scale_hi
    int projections_per_grade = 2;
    int max_grade = 2;         // project onto V with dim V <= this (and < d)
};

DimensionOutput run_dimension(const AffineIFS& ifs, const DimensionOptions& opt,
                              std::uint64_t seed);
void write_slope_csv(const EntropySlope& slope, const std::string& path);

enum class CheckStatus { Passed, Failed, Unknown };
const char* to_string(CheckStatus s);

enum class Verdict { Consistent, Inconsistent, HypothesesUnverified };
const char* to_string(Verdict v);

struct HypothesisCheck {
    std::string name;
    CheckStatus status = CheckStatus::Unknown;
    std::string detail;
};

struct VerificationReport {
    std::string theorem_id;  // d3-sosc | low-dim-projections | full-dim-rho | lyapunov-upper-bound
    std::vector<HypothesisCheck> hypotheses;
    double predicted = 0.0;
    double estimated = 0.0;
    double estimated_stderr = 0.0;
    double tolerance = 0.1;
    Verdict verdict = Verdict::HypothesesUnverified;
    std::string detail;
};

struct VerifyOptions {
    long n_points = 1'000'000;
    long spectrum_steps = 100'000;
    int rw_depth = 8;            // convolution depth for h(p_Phi)
    int scale_lo = 3;
    int scale_hi = 0;            // 0 = auto
    double tolerance = 0.1;
    int projections_per_grade = 2;
    std::vector<double> box_lo;  // OSC box; empty = unit box
    std::vector<double> box_hi;
};

VerificationReport run_verify(const AffineIFS& ifs, const std::string& theorem_id,
                              const VerifyOptions& opt, std::uint64_t seed);
std::string verification_text(const VerificationReport& rep);

struct RenderOptions {
    int resolution = 512;
    long n_points = 200'000;
};

// Grayscale log-density raster (PGM) of mu or pi_V mu; target dim must be
// <= 2 for the raster (DimTooHigh via DimMismatch otherwise).
void run_render(const AffineIFS& ifs, const Subspace* projection,
                const RenderOptions& opt, std::uint64_t seed,
                const std::string& raster_path, const std::string& csv_path);

}  // namespace affinedim
