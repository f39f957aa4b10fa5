// affinedim: spectra, dimensions, Furstenberg samples, separation
// diagnostics, cut-sets, theorem verification, and rendering for self-affine
// measures described by JSON spec files.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>

#include "affinedim/cutset.hpp"
#include "affinedim/io.hpp"
#include "affinedim/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSpecError = 2;
constexpr int kExitHypothesisFailure = 3;
constexpr int kExitBudgetExceeded = 4;

using namespace affinedim;

int run(int argc, char** argv) {
    CLI::App app{"dimension machinery for self-affine measures"};
    app.require_subcommand(1);

    std::string spec_path;
    std::uint64_t seed = 1;
    std::string out_prefix = "affinedim_out";

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("spec", spec_path, "IFS spec file (JSON)")->required();
        cmd->add_option("--seed", seed, "master seed; every stream derives from it");
        cmd->add_option("--out", out_prefix, "output file prefix");
    };

    // spectrum
    long steps = 100'000;
    auto* c_spec = app.add_subcommand("spectrum", "Lyapunov spectrum, dim_L, rho_m");
    add_common(c_spec);
    c_spec->add_option("--steps", steps, "chain length");

    // dimension
    DimensionOptions dim_opt;
    auto* c_dim = app.add_subcommand("dimension", "entropy-dimension slopes for mu and projections");
    add_common(c_dim);
    c_dim->add_option("-N,--points", dim_opt.n_points, "sample size");
    c_dim->add_option("--scale-lo", dim_opt.scale_lo, "lowest dyadic scale");
    c_dim->add_option("--scale-hi", dim_opt.scale_hi, "highest dyadic scale (0 = auto)");
    c_dim->add_option("--projections", dim_opt.projections_per_grade,
                      "projections per grade");

    // furstenberg
    int f_grade = 1;
    long f_draws = 1000;
    int f_depth = 0;
    bool f_transpose = false;
    auto* c_fur = app.add_subcommand("furstenberg", "sample a stationary Grassmannian measure");
    add_common(c_fur);
    c_fur->add_option("-m,--grade", f_grade, "Grassmannian grade");
    c_fur->add_option("-N,--draws", f_draws, "number of draws");
    c_fur->add_option("--depth", f_depth, "word length per draw (0 = auto)");
    c_fur->add_flag("--transpose", f_transpose, "use transposed linear parts (nu_m^*)");

    // separation
    int s_depth = 6;
    std::vector<double> box_lo, box_hi;
    auto* c_sep = app.add_subcommand("separation", "SSC/OSC, Diophantine gaps, freeness");
    add_common(c_sep);
    c_sep->add_option("--depth", s_depth, "enumeration depth");
    c_sep->add_option("--box-lo", box_lo, "OSC box lower corner");
    c_sep->add_option("--box-hi", box_hi, "OSC box upper corner");

    // cutset
    int cut_m = 1, cut_n = 8;
    long cut_cap = kDefaultCutsetCap;
    auto* c_cut = app.add_subcommand("cutset", "enumerate a singular-value cut-set");
    add_common(c_cut);
    c_cut->add_option("-m,--grade", cut_m, "singular value index");
    c_cut->add_option("-n,--scale", cut_n, "stopping scale (alpha_m <= 2^-n)");
    c_cut->add_option("--cap", cut_cap, "enumeration cap");

    // verify
    VerifyOptions ver_opt;
    std::string theorem_id = "lyapunov-upper-bound";
    auto* c_ver = app.add_subcommand("verify", "run a theorem-verification report");
    add_common(c_ver);
    c_ver->add_option("--theorem", theorem_id,
                      "d3-sosc | low-dim-projections | full-dim-rho | lyapunov-upper-bound");
    c_ver->add_option("-N,--points", ver_opt.n_points, "sample size");
    c_ver->add_option("--steps", ver_opt.spectrum_steps, "spectrum chain length");
    c_ver->add_option("--tolerance", ver_opt.tolerance, "dimension tolerance");
    c_ver->add_option("--rw-depth", ver_opt.rw_depth, "convolution depth for h(p_Phi)");
    c_ver->add_option("--box-lo", ver_opt.box_lo, "OSC box lower corner");
    c_ver->add_option("--box-hi", ver_opt.box_hi, "OSC box upper corner");

    // render
    RenderOptions ren_opt;
    std::vector<double> proj_cols;
    int proj_dim = 0;
    auto* c_ren = app.add_subcommand("render", "log-density raster and CSV point cloud");
    add_common(c_ren);
    c_ren->add_option("-N,--points", ren_opt.n_points, "sample size");
    c_ren->add_option("--resolution", ren_opt.resolution, "raster width");
    c_ren->add_option("--proj-dim", proj_dim, "projection subspace dimension (0 = none)");
    c_ren->add_option("--proj-basis", proj_cols,
                      "projection basis, column-major d*k values");

    CLI11_PARSE(app, argc, argv);

    AffineIFS ifs = load_ifs(spec_path);

    if (*c_spec) {
        SpectrumOutput out = run_spectrum(ifs, steps, seed);
        std::cout << spectrum_text(out);
        write_spectrum_csv(out, out_prefix + "_spectrum.csv");
        return kExitOk;
    }
    if (*c_dim) {
        DimensionOutput out = run_dimension(ifs, dim_opt, seed);
        std::cout.precision(8);
        std::cout << "dim_e(mu) slope: " << out.full.slope
                  << " (residual " << out.full.residual << ")\n";
        write_slope_csv(out.full, out_prefix + "_mu.csv");
        for (std::size_t i = 0; i < out.projections.size(); ++i) {
            const auto& p = out.projections[i];
            std::cout << "projection m=" << p.grade << " slope: " << p.slope.slope << "\n";
            write_slope_csv(p.slope, out_prefix + "_proj" + std::to_string(i) + ".csv");
        }
        EmpiricalMeasure mu = sample_measure(ifs, dim_opt.n_points, 0,
                                             derive_key(seed, "sample"));
        write_point_cloud(mu, out_prefix + "_cloud.afpc");
        return kExitOk;
    }
    if (*c_fur) {
        if (f_depth == 0) f_depth = default_boundary_depth(ifs, f_grade, seed);
        GrassmannSample sample =
            sample_stationary(ifs, f_grade, f_draws, f_depth, seed, f_transpose);
        std::cout << "draws: " << sample.subspaces.size()
                  << ", degenerate: " << sample.failures << ", depth: " << f_depth << "\n";
        write_plucker_csv(sample, out_prefix + "_plucker.csv");
        return kExitOk;
    }
    if (*c_sep) {
        SeparationReport gaps = diophantine_gap(ifs, std::min(s_depth, 8));
        std::cout << "n,min_gap\n";
        for (std::size_t i = 0; i < gaps.depths.size(); ++i)
            std::cout << gaps.depths[i] << ',' << gaps.min_gaps[i] << '\n';
        std::cout << "epsilon fit: " << gaps.epsilon_fit << "\n";
        std::cout << "free up to depth: " << gaps.free_up_to << "\n";
        Certificate ssc = ssc_check(ifs, s_depth);
        std::cout << "ssc: " << to_string(ssc) << "\n";
        if (!box_lo.empty()) {
            AxisBox box{Eigen::Map<Vector>(box_lo.data(), static_cast<long>(box_lo.size())),
                        Eigen::Map<Vector>(box_hi.data(), static_cast<long>(box_hi.size()))};
            OscResult osc = osc_check(ifs, box, s_depth);
            std::cout << "osc: " << to_string(osc.osc) << "\n";
            std::cout << "sosc: " << to_string(osc.sosc) << "\n";
        }
        std::ofstream csv(out_prefix + "_gaps.csv");
        csv << "n,min_gap\n";
        for (std::size_t i = 0; i < gaps.depths.size(); ++i)
            csv << gaps.depths[i] << ',' << gaps.min_gaps[i] << '\n';
        return kExitOk;
    }
    if (*c_cut) {
        CutSet cs = build_cutset(ifs, cut_m, cut_n, cut_cap);
        double total = 0.0;
        std::size_t max_len = 0;
        for (std::size_t i = 0; i < cs.words.size(); ++i) {
            total += cs.weights[i];
            max_len = std::max(max_len, cs.words[i].size());
        }
        std::cout << "words: " << cs.words.size() << ", weight sum: " << total
                  << ", max length: " << max_len << "\n";
        return kExitOk;
    }
    if (*c_ver) {
        VerificationReport rep = run_verify(ifs, theorem_id, ver_opt, seed);
        std::cout << verification_text(rep);
        return rep.verdict == Verdict::HypothesesUnverified ? kExitHypothesisFailure
                                                            : kExitOk;
    }
    if (*c_ren) {
        std::unique_ptr<Subspace> proj;
        if (proj_dim > 0) {
            if (static_cast<int>(proj_cols.size()) != ifs.dim() * proj_dim)
                throw SpecParseError("--proj-basis needs d*k values");
            Matrix b(ifs.dim(), proj_dim);
            for (int c = 0; c < proj_dim; ++c)
                for (int r = 0; r < ifs.dim(); ++r)
                    b(r, c) = proj_cols[static_cast<std::size_t>(c * ifs.dim() + r)];
            proj = std::make_unique<Subspace>(Subspace::from_span(b));
        }
        run_render(ifs, proj.get(), ren_opt, seed, out_prefix + ".pgm",
                   out_prefix + "_points.csv");
        std::cout << "wrote " << out_prefix << ".pgm and " << out_prefix
                  << "_points.csv\n";
        return kExitOk;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return kExitBudgetExceeded;
    } catch (const SpecParseError& e) {
        std::cerr << "spec error: " << e.what() << "\n";
        return kExitSpecError;
    } catch (const InvariantViolation& e) {
        std::cerr << "spec error: " << e.what() << "\n";
        return kExitSpecError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitHypothesisFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
