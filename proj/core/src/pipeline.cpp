#include "affinedim/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace affinedim {

SpectrumOutput run_spectrum(const AffineIFS& ifs, long steps, std::uint64_t seed) {
    SpectrumOutput out;
    out.spectrum = lyapunov_spectrum(ifs, steps, derive_key(seed, "spectrum"));
    out.entropy_p = shannon_entropy(ifs.probs());
    out.dim_lyapunov = lyapunov_dimension(out.spectrum.chi, out.entropy_p);
    for (int m = 1; m <= ifs.dim(); ++m)
        out.rho.push_back(rho_threshold(out.spectrum.chi, m));
    return out;
}

std::string spectrum_text(const SpectrumOutput& out) {
    std::ostringstream ss;
    ss.precision(12);
    ss << "{\n  \"chi\": [";
    for (std::size_t i = 0; i < out.spectrum.chi.size(); ++i)
        ss << (i ? ", " : "") << out.spectrum.chi[i];
    ss << "],\n  \"stderr\": [";
    for (std::size_t i = 0; i < out.spectrum.stderr_.size(); ++i)
        ss << (i ? ", " : "") << out.spectrum.stderr_[i];
    ss << "],\n  \"H_p\": " << out.entropy_p;
    ss << ",\n  \"dim_L\": " << out.dim_lyapunov;
    ss << ",\n  \"rho\": [";
    for (std::size_t i = 0; i < out.rho.size(); ++i) ss << (i ? ", " : "") << out.rho[i];
    ss << "],\n  \"steps\": " << out.spectrum.steps;
    ss << ",\n  \"seed\": " << out.spectrum.seed << "\n}\n";
    return ss.str();
}

void write_spectrum_csv(const SpectrumOutput& out, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw Error(path + ": cannot open for writing");
    f.precision(17);
    f << "k,chi,stderr,rho\n";
    for (std::size_t i = 0; i < out.spectrum.chi.size(); ++i)
        f << (i + 1) << ',' << out.spectrum.chi[i] << ',' << out.spectrum.stderr_[i] << ','
          << out.rho[i] << '\n';
}

DimensionOutput run_dimension(const AffineIFS& ifs, const DimensionOptions& opt,
                              std::uint64_t seed) {
    DimensionOutput out;
    out.n_points = opt.n_points;
    EmpiricalMeasure mu = sample_measure(ifs, opt.n_points, 0, derive_key(seed, "sample"));
    int hi = opt.scale_hi > 0 ? opt.scale_hi : suggest_scale_hi(mu, opt.scale_lo);
    out.full = entropy_dimension(mu, opt.scale_lo, hi);
    int max_grade = std::min(opt.max_grade, ifs.dim() - 1);
    for (int m = 1; m <= max_grade; ++m) {
        GrassmannSample vs =
            sample_stationary(ifs, m, opt.projections_per_grade,
                              default_boundary_depth(ifs, m, derive_key(seed, "depth")),
                              derive_key(seed, "proj-grade-" + std::to_string(m)),
                              /*transpose=*/true);
        for (const auto& v : vs.subspaces) {
            EmpiricalMeasure proj = project_measure(mu, v);
            int phi = opt.scale_hi > 0 ? opt.scale_hi : suggest_scale_hi(proj, opt.scale_lo);
            out.projections.push_back({m, v, entropy_dimension(proj, opt.scale_lo, phi)});
        }
    }
    return out;
}

void write_slope_csv(const EntropySlope& slope, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw Error(path + ": cannot open for writing");
    f.precision(17);
    f << "n,H,H_over_n\n";
    for (std::size_t i = 0; i < slope.scales.size(); ++i)
        f << slope.scales[i] << ',' << slope.entropies[i] << ','
          << slope.entropies[i] / slope.scales[i] << '\n';
}

const char* to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::Passed: return "passed";
        case CheckStatus::Failed: return "failed";
        default: return "unknown";
    }
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Consistent: return "consistent";
        case Verdict::Inconsistent: return "inconsistent";
        default: return "hypotheses-unverified";
    }
}

namespace {

CheckStatus from_certificate(Certificate c) {
    switch (c) {
        case Certificate::Certified: return CheckStatus::Passed;
        case Certificate::Refuted: return CheckStatus::Failed;
        default: return CheckStatus::Unknown;
    }
}

// Fail-safe verdict ordering: a mismatch is only `inconsistent` when every
// hypothesis check passed.
Verdict settle(const std::vector<HypothesisCheck>& checks, double predicted,
               double estimated, double tolerance, bool one_sided = false) {
    double deviation = one_sided ? std::max(0.0, estimated - predicted)
                                 : std::abs(predicted - estimated);
    if (deviation <= tolerance) return Verdict::Consistent;
    for (const auto& c : checks)
        if (c.status != CheckStatus::Passed) return Verdict::HypothesesUnverified;
    return Verdict::Inconsistent;
}

double estimate_dim(const AffineIFS& ifs, const VerifyOptions& opt, std::uint64_t seed,
                    double* residual = nullptr) {
    EmpiricalMeasure mu =
        sample_measure(ifs, opt.n_points, 0, derive_key(seed, "verify-sample"));
    int hi = opt.scale_hi > 0 ? opt.scale_hi : suggest_scale_hi(mu, opt.scale_lo);
    EntropySlope slope = entropy_dimension(mu, opt.scale_lo, hi);
    if (residual) *residual = slope.residual;
    return slope.slope;
}

AxisBox verify_box(const AffineIFS& ifs, const VerifyOptions& opt) {
    AxisBox box;
    const int d = ifs.dim();
    if (!opt.box_lo.empty()) {
        box.lo = Eigen::Map<const Vector>(opt.box_lo.data(),
                                          static_cast<long>(opt.box_lo.size()));
        box.hi = Eigen::Map<const Vector>(opt.box_hi.data(),
                                          static_cast<long>(opt.box_hi.size()));
    } else {
        box.lo = Vector::Zero(d);
        box.hi = Vector::Ones(d);
    }
    return box;
}

void add_dynamics_checks(const AffineIFS& ifs, const VerifyOptions& opt,
                         std::uint64_t seed, std::vector<HypothesisCheck>& checks) {
    // no common fixed point
    HypothesisCheck fix{"no-common-fixed-point", CheckStatus::Passed, ""};
    if (auto p = common_fixed_point(ifs)) {
        fix.status = CheckStatus::Failed;
        std::ostringstream ss;
        ss << "common fixed point at (" << p->transpose() << ")";
        fix.detail = ss.str();
    }
    checks.push_back(fix);
    for (int m = 1; m < ifs.dim(); ++m) {
        ProximalityReport prox = proximality_check(
            ifs, m, opt.spectrum_steps, derive_key(seed, "prox-" + std::to_string(m)));
        checks.push_back({"proximality-m" + std::to_string(m),
                          prox.evidence ? CheckStatus::Passed : CheckStatus::Unknown,
                          "wedge gap " + std::to_string(prox.gap) + " +- " +
                              std::to_string(prox.stderr_)});
        IrreducibilityReport irr = irreducibility_check(
            ifs, m, 24, derive_key(seed, "irr-" + std::to_string(m)));
        checks.push_back({"strong-irreducibility-m" + std::to_string(m),
                          irr.candidate_found ? CheckStatus::Failed : CheckStatus::Unknown,
                          irr.candidate_found ? "invariant candidate family found"
                                              : "no invariant candidate found"});
    }
}

void add_diophantine_checks(const AffineIFS& ifs, std::vector<HypothesisCheck>& checks) {
    try {
        int depth = 6;
        while (std::pow(ifs.size(), depth) > kDefaultGapCap && depth > 2) --depth;
        SeparationReport gap = diophantine_gap(ifs, depth);
        bool positive = true;
        for (double g : gap.min_gaps)
            if (g <= 0.0) positive = false;
        checks.push_back({"diophantine-gap",
                          positive ? CheckStatus::Passed : CheckStatus::Failed,
                          "eps fit " + std::to_string(gap.epsilon_fit) + " to depth " +
                              std::to_string(depth)});
        int free_depth = free_semigroup_check(ifs, depth);
        checks.push_back({"free-semigroup",
                          free_depth >= depth ? CheckStatus::Passed : CheckStatus::Failed,
                          "free up to depth " + std::to_string(free_depth)});
    } catch (const BudgetExceeded& e) {
        checks.push_back({"diophantine-gap", CheckStatus::Unknown, e.what()});
    }
}

}  // namespace

VerificationReport run_verify(const AffineIFS& ifs, const std::string& theorem_id,
                              const VerifyOptions& opt, std::uint64_t seed) {
    VerificationReport rep;
    rep.theorem_id = theorem_id;
    rep.tolerance = opt.tolerance;

    SpectrumOutput spec = run_spectrum(ifs, opt.spectrum_steps, seed);

    if (theorem_id == "lyapunov-upper-bound") {
        rep.predicted = spec.dim_lyapunov;
        double residual = 0.0;
        rep.estimated = estimate_dim(ifs, opt, seed, &residual);
        rep.estimated_stderr = residual;
        rep.verdict = settle(rep.hypotheses, rep.predicted, rep.estimated, rep.tolerance,
                             /*one_sided=*/true);
        rep.detail = "estimated dim_e must not exceed dim_L + tolerance";
        return rep;
    }

    if (theorem_id == "d3-sosc") {
        if (ifs.dim() != 3) {
            rep.hypotheses.push_back({"ambient-dimension-3", CheckStatus::Failed,
                                      "d = " + std::to_string(ifs.dim())});
            rep.verdict = Verdict::HypothesesUnverified;
            return rep;
        }
        OscResult osc = osc_check(ifs, verify_box(ifs, opt), 8);
        rep.hypotheses.push_back({"sosc", from_certificate(osc.sosc), osc.detail});
        add_dynamics_checks(ifs, opt, seed, rep.hypotheses);
        rep.predicted = std::min(spec.dim_lyapunov, 3.0);
        double residual = 0.0;
        rep.estimated = estimate_dim(ifs, opt, seed, &residual);
        rep.estimated_stderr = residual;
        rep.verdict = settle(rep.hypotheses, rep.predicted, rep.estimated, rep.tolerance);
        return rep;
    }

    if (theorem_id == "low-dim-projections") {
        add_dynamics_checks(ifs, opt, seed, rep.hypotheses);
        add_diophantine_checks(ifs, rep.hypotheses);
        EmpiricalMeasure mu =
            sample_measure(ifs, opt.n_points, 0, derive_key(seed, "verify-sample"));
        double worst_dev = 0.0;
        double worst_pred = 0.0, worst_est = 0.0;
        std::ostringstream detail;
        int max_grade = std::min(2, ifs.dim() - 1);
        for (int m = 1; m <= max_grade; ++m) {
            GrassmannSample vs = sample_stationary(
                ifs, m, opt.projections_per_grade,
                default_boundary_depth(ifs, m, derive_key(seed, "vdepth")),
                derive_key(seed, "verify-proj-" + std::to_string(m)), /*transpose=*/true);
            double predicted = std::min(static_cast<double>(m), spec.dim_lyapunov);
            for (const auto& v : vs.subspaces) {
                EmpiricalMeasure proj = project_measure(mu, v);
                int hi = opt.scale_hi > 0 ? opt.scale_hi
                                          : suggest_scale_hi(proj, opt.scale_lo);
                double est = entropy_dimension(proj, opt.scale_lo, hi).slope;
                double dev = std::abs(est - predicted);
                detail << "m=" << m << " est=" << est << " pred=" << predicted << "; ";
                if (dev > worst_dev) {
                    worst_dev = dev;
                    worst_pred = predicted;
                    worst_est = est;
                }
            }
        }
        rep.predicted = worst_pred;
        rep.estimated = worst_est;
        rep.detail = detail.str();
        rep.verdict = settle(rep.hypotheses, rep.predicted, rep.estimated, rep.tolerance);
        return rep;
    }

    if (theorem_id == "full-dim-rho") {
        add_dynamics_checks(ifs, opt, seed, rep.hypotheses);
        add_diophantine_checks(ifs, rep.hypotheses);
        EntropyReport rw;
        try {
            rw = random_walk_entropy(ifs, opt.rw_depth);
        } catch (const BudgetExceeded& e) {
            rep.hypotheses.push_back({"rw-entropy", CheckStatus::Unknown, e.what()});
            rep.verdict = Verdict::HypothesesUnverified;
            return rep;
        }
        // h(p_Phi) >= rho_m needed for full m-dimensional projections; the
        // finite-n value is an upper bound for h, so the check is evidence.
        int best_m = 0;
        for (int m = 1; m <= ifs.dim(); ++m)
            if (rw.rw_entropy >= spec.rho[static_cast<std::size_t>(m - 1)]) best_m = m;
        if (best_m == 0) {
            rep.hypotheses.push_back({"rw-entropy-threshold", CheckStatus::Failed,
                                      "h upper bound " + std::to_string(rw.rw_entropy) +
                                          " below all rho_m"});
            rep.verdict = Verdict::HypothesesUnverified;
            return rep;
        }
        rep.hypotheses.push_back(
            {"rw-entropy-threshold",
             rw.free_semigroup.value_or(false) ? CheckStatus::Passed : CheckStatus::Unknown,
             "h(n=" + std::to_string(rw.n_used) + ") = " + std::to_string(rw.rw_entropy) +
                 " >= rho_" + std::to_string(best_m)});
        rep.predicted = static_cast<double>(best_m);
        EmpiricalMeasure mu =
            sample_measure(ifs, opt.n_points, 0, derive_key(seed, "verify-sample"));
        if (best_m == ifs.dim()) {
            int hi = opt.scale_hi > 0 ? opt.scale_hi : suggest_scale_hi(mu, opt.scale_lo);
            rep.estimated = entropy_dimension(mu, opt.scale_lo, hi).slope;
        } else {
            GrassmannSample vs = sample_stationary(
                ifs, best_m, 1, default_boundary_depth(ifs, best_m, seed),
                derive_key(seed, "rho-proj"), /*transpose=*/true);
            if (vs.subspaces.empty()) {
                rep.hypotheses.push_back(
                    {"projection-sample", CheckStatus::Unknown, "all draws degenerate"});
                rep.verdict = Verdict::HypothesesUnverified;
                return rep;
            }
            EmpiricalMeasure proj = project_measure(mu, vs.subspaces.front());
            int hi = opt.scale_hi > 0 ? opt.scale_hi : suggest_scale_hi(proj, opt.scale_lo);
            rep.estimated = entropy_dimension(proj, opt.scale_lo, hi).slope;
        }
        rep.verdict = settle(rep.hypotheses, rep.predicted, rep.estimated, rep.tolerance);
        return rep;
    }

    throw SpecParseError("run_verify: unknown theorem id '" + theorem_id + "'");
}

std::string verification_text(const VerificationReport& rep) {
    std::ostringstream ss;
    ss.precision(8);
    ss << "theorem: " << rep.theorem_id << "\n";
    for (const auto& c : rep.hypotheses)
        ss << "  check " << c.name << ": " << to_string(c.status)
           << (c.detail.empty() ? "" : " (" + c.detail + ")") << "\n";
    ss << "  predicted: " << rep.predicted << "\n";
    ss << "  estimated: " << rep.estimated << " +- " << rep.estimated_stderr << "\n";
    ss << "  tolerance: " << rep.tolerance << "\n";
    ss << "  verdict: " << to_string(rep.verdict) << "\n";
    if (!rep.detail.empty()) ss << "  detail: " << rep.detail << "\n";
    return ss.str();
}

void run_render(const AffineIFS& ifs, const Subspace* projection,
                const RenderOptions& opt, std::uint64_t seed,
                const std::string& raster_path, const std::string& csv_path) {
    EmpiricalMeasure mu = sample_measure(ifs, opt.n_points, 0, derive_key(seed, "render"));
    EmpiricalMeasure target = projection ? project_measure(mu, *projection) : mu;
    if (!csv_path.empty()) {
        std::ofstream f(csv_path);
        if (!f) throw Error(csv_path + ": cannot open for writing");
        f.precision(17);
        for (long i = 0; i < target.size(); ++i) {
            for (int c = 0; c < target.ambient_dim; ++c) {
                if (c) f << ',';
                f << target.points(i, c);
            }
            f << '\n';
        }
    }
    if (raster_path.empty()) return;
    if (target.ambient_dim > 2)
        throw DimMismatch("run_render: raster needs target dim <= 2 (got " +
                          std::to_string(target.ambient_dim) + ")");
    const int res = opt.resolution;
    const int height = target.ambient_dim == 1 ? 1 : res;
    Vector lo = target.points.colwise().minCoeff().transpose();
    Vector hi = target.points.colwise().maxCoeff().transpose();
    Vector span = (hi - lo).cwiseMax(1e-12);
    std::vector<double> counts(static_cast<std::size_t>(res) * height, 0.0);
    for (long i = 0; i < target.size(); ++i) {
        int px = std::min(res - 1, static_cast<int>((target.points(i, 0) - lo(0)) /
                                                    span(0) * res));
        int py = 0;
        if (target.ambient_dim == 2)
            py = std::min(res - 1,
                          static_cast<int>((target.points(i, 1) - lo(1)) / span(1) * res));
        counts[static_cast<std::size_t>(py) * res + px] += 1.0;
    }
    double max_log = 0.0;
    for (double& c : counts) {
        c = std::log1p(c);
        max_log = std::max(max_log, c);
    }
    std::ofstream f(raster_path, std::ios::binary);
    if (!f) throw Error(raster_path + ": cannot open for writing");
    f << "P5\n" << res << " " << height << "\n255\n";
    for (int y = height - 1; y >= 0; --y)
        for (int x = 0; x < res; ++x) {
            double v = max_log > 0 ? counts[static_cast<std::size_t>(y) * res + x] / max_log
                                   : 0.0;
            unsigned char pix = static_cast<unsigned char>(std::lround(v * 255.0));
            f.write(reinterpret_cast<const char*>(&pix), 1);
        }
}

}  // namespace affinedim
