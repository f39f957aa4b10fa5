#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "affinedim/entropy.hpp"
#include "affinedim/io.hpp"
#include "affinedim/rng.hpp"

using namespace affinedim;

namespace {

// N x 1 uniform grid of 2^n atoms at cell centers of D_n on [0,1)
EmpiricalMeasure dyadic_grid_1d(int n) {
    long cells = 1L << n;
    Matrix pts(cells, 1);
    for (long i = 0; i < cells; ++i)
        pts(i, 0) = (static_cast<double>(i) + 0.5) / static_cast<double>(cells);
    return EmpiricalMeasure::uniform(pts);
}

EmpiricalMeasure random_cloud(std::uint64_t seed, long n, int d) {
    CounterRng rng(seed);
    Matrix pts(n, d);
    for (long i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) pts(i, j) = rng.next_double();
    return EmpiricalMeasure::uniform(pts);
}

}  // namespace

TEST_CASE("dyadic cell indexing") {
    Vector x(2);
    x << 0.3, 0.7;
    CellKey k = dyadic_cell(x, 2);
    CHECK(k.idx == std::vector<std::int64_t>{1, 2});
    Vector neg(1);
    neg << -0.25;
    CHECK(dyadic_cell(neg, 2).idx == std::vector<std::int64_t>{-1});
    CHECK(dyadic_cell(x, -1).idx == std::vector<std::int64_t>{0, 0});
}

TEST_CASE("entropy of a point mass is zero at every scale") {
    Matrix pts = Matrix::Constant(50, 2, 0.371);
    EmpiricalMeasure m = EmpiricalMeasure::uniform(pts);
    for (int n : {-3, 0, 4, 12}) CHECK(dyadic_entropy(m, n) == doctest::Approx(0.0));
}

TEST_CASE("uniform dyadic grid gives exactly n bits per coordinate") {
    EmpiricalMeasure g = dyadic_grid_1d(6);
    for (int n = 0; n <= 6; ++n)
        CHECK(dyadic_entropy(g, n) == doctest::Approx(static_cast<double>(n)).epsilon(1e-12));
    // beyond the grid resolution the entropy saturates
    CHECK(dyadic_entropy(g, 9) == doctest::Approx(6.0));

    // planar product grid: 2n bits
    int n = 4;
    long side = 1L << n;
    Matrix pts(side * side, 2);
    for (long i = 0; i < side; ++i)
        for (long j = 0; j < side; ++j) {
            pts(i * side + j, 0) = (static_cast<double>(i) + 0.5) / static_cast<double>(side);
            pts(i * side + j, 1) = (static_cast<double>(j) + 0.5) / static_cast<double>(side);
        }
    CHECK(dyadic_entropy(EmpiricalMeasure::uniform(pts), n) ==
          doctest::Approx(2.0 * static_cast<double>(n)));
}

TEST_CASE("conditional entropy is the two-scale difference") {
    EmpiricalMeasure m = random_cloud(1, 5000, 2);
    for (int n : {0, 2, 5})
        for (int k : {0, 1, 3}) {
            double direct = conditional_dyadic_entropy(m, n, k);
            double diff = dyadic_entropy(m, n + k) - dyadic_entropy(m, n);
            CHECK(direct == doctest::Approx(diff).epsilon(1e-9));
        }
    CHECK(conditional_dyadic_entropy(m, 3, 0) == doctest::Approx(0.0));
    // at most d bits per refinement level
    CHECK(conditional_dyadic_entropy(m, 3, 2) <= 2.0 * 2.0 + 1e-9);
}

TEST_CASE("component measures") {
    EmpiricalMeasure g = dyadic_grid_1d(4);
    Vector x(1);
    x << 0.1;
    EmpiricalMeasure comp = component(g, x, 1);  // left half
    CHECK(comp.weights.sum() == doctest::Approx(1.0));
    CHECK(comp.size() == 8);
    CHECK(comp.points.maxCoeff() < 0.5);

    EmpiricalMeasure resc = rescaled_component(g, x, 1);
    CHECK(resc.points.minCoeff() >= 0.0);
    CHECK(resc.points.maxCoeff() <= 1.0);
    // rescaling is a homothety: entropy at scale n equals component at n+1
    CHECK(dyadic_entropy(resc, 3) == doctest::Approx(dyadic_entropy(comp, 4)).epsilon(1e-12));

    Vector outside(1);
    outside << 7.0;
    CHECK_THROWS_AS(component(g, outside, 1), EmptyCell);
}

TEST_CASE("entropy slope recovers dimension for calibrated measures") {
    EmpiricalMeasure u = random_cloud(5, 400'000, 1);
    EntropySlope s = entropy_dimension(u, 2, 9);
    CHECK(s.slope == doctest::Approx(1.0).epsilon(0.02));
    CHECK(s.residual < 0.05);

    EmpiricalMeasure u2 = random_cloud(6, 400'000, 2);
    EntropySlope s2 = entropy_dimension(u2, 2, 7);
    CHECK(s2.slope == doctest::Approx(2.0).epsilon(0.02));

    CHECK_THROWS_AS(entropy_dimension(u, 2, 4), WindowTooSmall);
}

TEST_CASE("suggest_scale_hi stays within resolution") {
    EmpiricalMeasure u = random_cloud(8, 50'000, 2);
    int hi = suggest_scale_hi(u, 2);
    CHECK(hi >= 4);
    // occupied cells at hi stay below N/20
    CHECK(static_cast<long>(build_histogram(u, hi).cells.size()) < u.size() / 20);
}

TEST_CASE("nonconformal partition entropy") {
    EmpiricalMeasure m = random_cloud(9, 100'000, 2);
    // psi with U = identity: UD(D_n) refines axes by log2 of each alpha_i.
    Matrix a = Matrix::Zero(2, 2);
    a(0, 0) = 0.5;
    a(1, 1) = 0.125;
    AffineMap psi{a, Vector::Zero(2)};
    // D' = diag(2^-1, 2^-3) so UD(D_3) has cells 2^-4 x 2^-6:
    // for uniform measure H ~ 4 + 6 bits
    double h = nonconformal_entropy(m, psi, 3);
    double h_expected = dyadic_entropy(project_measure(m, Subspace::coordinate(2, {0})), 4) +
                        dyadic_entropy(project_measure(m, Subspace::coordinate(2, {1})), 6);
    CHECK(h == doctest::Approx(h_expected).epsilon(0.02));

    // equal singular values: no usable gap
    CHECK_THROWS_AS(nonconformal_entropy(m, AffineMap::identity(2), 4), GapTooSmall);

    // rotations do not change entropy of a rotation-invariant scaling psi
    double t = 0.3;
    Matrix rot(2, 2);
    rot << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    AffineMap psi_rot{rot * a, Vector::Zero(2)};
    // same singular values; cells congruent up to rotation, entropy close
    double h2 = nonconformal_entropy(m, psi_rot, 3);
    CHECK(h2 == doctest::Approx(h).epsilon(0.05));
}

TEST_CASE("concentration predicate") {
    // points on the x-axis are concentrated around every horizontal line
    Matrix pts(1000, 2);
    CounterRng rng(10);
    for (long i = 0; i < 1000; ++i) {
        pts(i, 0) = rng.next_double();
        pts(i, 1) = 0.01 * rng.next_gaussian();
    }
    EmpiricalMeasure m = EmpiricalMeasure::uniform(pts);
    Subspace x_axis = Subspace::coordinate(2, {0});
    ConcentrationResult r = is_concentrated(m, x_axis, 0.1);
    CHECK(r.concentrated);
    CHECK(r.best_mass >= 0.9);

    // not concentrated around the y-axis at small eps
    Subspace y_axis = Subspace::coordinate(2, {1});
    CHECK_FALSE(is_concentrated(m, y_axis, 0.05).concentrated);

    // any measure is (V, eps)-concentrated for eps close to 1
    CHECK(is_concentrated(m, y_axis, 0.95).concentrated);
}

TEST_CASE("saturation predicate") {
    // uniform planar measure is saturated on the x-axis direction:
    // H(theta,D_k)/k ~ 2 and H(pi_perp theta, D_k)/k ~ 1, dim V = 1.
    EmpiricalMeasure u = random_cloud(11, 300'000, 2);
    Subspace x_axis = Subspace::coordinate(2, {0});
    CHECK(is_saturated(u, x_axis, 0.1, 6));

    // a line measure is not saturated transversally: components carry no
    // extra entropy in the x direction.
    Matrix pts(100'000, 2);
    CounterRng rng(12);
    for (long i = 0; i < pts.rows(); ++i) {
        pts(i, 0) = rng.next_double();
        pts(i, 1) = 0.5;
    }
    EmpiricalMeasure line = EmpiricalMeasure::uniform(pts);
    CHECK_FALSE(is_saturated(line, Subspace::coordinate(2, {1}), 0.1, 6));
    // but it is saturated along its own direction
    CHECK(is_saturated(line, x_axis, 0.1, 6));
}

TEST_CASE("multiscale decomposition closes to O(k/n)") {
    AffineIFS ifs = load_ifs(std::string(AFFINEDIM_DATA_DIR) + "/ssc2d.json");
    EmpiricalMeasure m = sample_measure(ifs, 400'000, 0, 13);
    int l = 1, n = 8, k = 2;
    double res = multiscale_identity_residual(m, l, n, k);
    CHECK(res <= 4.0 * static_cast<double>(k) / static_cast<double>(n));
}

TEST_CASE("entropy toolbox invariants on random clouds") {
    for (std::uint64_t s = 0; s < 10; ++s) {
        EmpiricalMeasure m = random_cloud(derive_key(100, s), 20'000, 2);
        // concavity sandwich: conditional increments decrease on average
        double h1 = conditional_dyadic_entropy(m, 1, 2);
        double h2 = conditional_dyadic_entropy(m, 3, 2);
        CHECK(h1 >= 0.0);
        CHECK(h2 >= 0.0);
        // translation invariance of increments at matching alignment
        Matrix shifted = m.points.array() + 1.0;  // integer shift preserves cells
        EmpiricalMeasure m2 = EmpiricalMeasure::uniform(shifted);
        for (int n : {0, 3})
            CHECK(dyadic_entropy(m2, n) == doctest::Approx(dyadic_entropy(m, n)).epsilon(1e-9));
        // projection can only lose entropy
        EmpiricalMeasure px = project_measure(m, Subspace::coordinate(2, {0}));
        for (int n : {2, 4})
            CHECK(dyadic_entropy(px, n) <= dyadic_entropy(m, n) + 1e-9);
    }
}
