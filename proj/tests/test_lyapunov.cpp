#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "affinedim/io.hpp"
#include "affinedim/lyapunov.hpp"

using namespace affinedim;

namespace {

AffineIFS from_data(const char* name) {
    return load_ifs(std::string(AFFINEDIM_DATA_DIR) + "/" + name);
}

}  // namespace

TEST_CASE("single diagonal matrix gives exact exponents") {
    Matrix a = Matrix::Zero(2, 2);
    a(0, 0) = 0.5;
    a(1, 1) = 0.25;
    AffineIFS ifs({{a, Vector::Zero(2)}}, {1.0});
    SpectrumReport r = lyapunov_spectrum(ifs, 10'000, 3);
    REQUIRE(r.chi.size() == 2);
    CHECK(r.chi[0] == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(r.chi[1] == doctest::Approx(-2.0).epsilon(1e-10));
    CHECK(r.chi[0] >= r.chi[1]);
}

TEST_CASE("commuting diagonal pair matches the closed form") {
    // diag(1/2,1/8) and diag(1/4,1/4) with p = (1/2,1/2):
    // chi_x = (log2(1/2)+log2(1/4))/2 = -1.5, chi_y = (-3-2)/2 = -2.5
    AffineIFS ifs = from_data("diag2d.json");
    SpectrumReport r = lyapunov_spectrum(ifs, 200'000, 11);
    REQUIRE(r.chi.size() == 2);
    CHECK(std::abs(r.chi[0] - (-1.5)) <= 4.0 * r.stderr_[0] + 1e-6);
    CHECK(std::abs(r.chi[1] - (-2.5)) <= 4.0 * r.stderr_[1] + 1e-6);
    CHECK(r.stderr_[0] < 0.01);
}

TEST_CASE("conformal maps give equal exponents") {
    AffineIFS ifs = from_data("rotation2d.json");  // both ratios 0.4
    SpectrumReport r = lyapunov_spectrum(ifs, 50'000, 5);
    double expect = std::log2(0.4);
    CHECK(r.chi[0] == doctest::Approx(expect).epsilon(1e-6));
    CHECK(r.chi[1] == doctest::Approx(expect).epsilon(1e-6));
}

TEST_CASE("wedge chain top exponent equals partial sums of the spectrum") {
    AffineIFS ifs = from_data("ruelle2d.json");
    SpectrumReport full = lyapunov_spectrum(ifs, 300'000, 21);
    for (int m = 1; m <= 2; ++m) {
        std::vector<Matrix> wedges;
        for (const auto& f : ifs.maps()) wedges.push_back(wedge_power(f.linear, m));
        SpectrumReport top = lyapunov_top_exponents(wedges, ifs.probs(), 1, 300'000, 22);
        double partial = 0.0;
        for (int k = 0; k < m; ++k) partial += full.chi[static_cast<std::size_t>(k)];
        double sigma = 3.0 * (top.stderr_[0] +
                              (m > 0 ? full.stderr_[0] + full.stderr_[1] : 0.0));
        CHECK(std::abs(top.chi[0] - partial) <= sigma + 1e-6);
    }
}

TEST_CASE("spectrum is reproducible for a fixed seed") {
    AffineIFS ifs = from_data("ruelle2d.json");
    SpectrumReport a = lyapunov_spectrum(ifs, 20'000, 77);
    SpectrumReport b = lyapunov_spectrum(ifs, 20'000, 77);
    CHECK(a.chi == b.chi);
}

TEST_CASE("shannon entropy examples") {
    CHECK(shannon_entropy({1.0}) == doctest::Approx(0.0));
    CHECK(shannon_entropy({0.5, 0.5}) == doctest::Approx(1.0));
    CHECK(shannon_entropy({0.75, 0.25}) == doctest::Approx(0.811278).epsilon(1e-6));
    CHECK(shannon_entropy({0.25, 0.25, 0.25, 0.25}) == doctest::Approx(2.0));
}

TEST_CASE("lyapunov dimension closed forms") {
    // Cantor middle third: chi = log2(1/3), H = 1 -> dim = log 2/log 3
    double cantor = lyapunov_dimension({std::log2(1.0 / 3.0)}, 1.0);
    CHECK(cantor == doctest::Approx(std::log(2.0) / std::log(3.0)).epsilon(1e-12));

    // H = 0 -> m = 0 branch, dimension 0
    CHECK(lyapunov_dimension({-1.0, -2.0}, 0.0) == doctest::Approx(0.0));

    // m = 0 branch with positive H: dim = -H/chi_1
    CHECK(lyapunov_dimension({-2.0, -3.0}, 1.0) == doctest::Approx(0.5));

    // interior branch: chi = (-1,-2), H = 1.5 -> m=1, dim = 1 + 0.5/2
    CHECK(lyapunov_dimension({-1.0, -2.0}, 1.5) == doctest::Approx(1.25));

    // saturating branch m = d: chi = (-1,-1), H = 3 -> -dH/sum = 2*3/2 = 3
    CHECK(lyapunov_dimension({-1.0, -1.0}, 3.0) == doctest::Approx(3.0));

    // monotone in H
    for (double h = 0.0; h < 3.0; h += 0.25)
        CHECK(lyapunov_dimension({-1.0, -2.0}, h) <=
              lyapunov_dimension({-1.0, -2.0}, h + 0.25) + 1e-12);
}

TEST_CASE("rho thresholds") {
    std::vector<double> chi{-1.0, -2.0, -3.5};
    CHECK(rho_threshold(chi, 1) == doctest::Approx(1.0));          // -chi_1
    CHECK(rho_threshold(chi, 2) == doctest::Approx(3.0));          // -chi_1-chi_2
    // m=3: (chi_1-chi_3)*1 - (chi_1+chi_2+chi_3) = 2.5 + 6.5 = 9
    CHECK(rho_threshold(chi, 3) == doctest::Approx(9.0));
    // identity rho_3 = -chi_2 - 2 chi_3
    CHECK(rho_threshold(chi, 3) == doctest::Approx(-chi[1] - 2.0 * chi[2]));
}

TEST_CASE("random walk entropy of a free pair is H(p)") {
    AffineIFS ifs = from_data("cantor3.json");  // distinct translations: free
    EntropyReport r = random_walk_entropy(ifs, 6);
    CHECK(r.entropy_p == doctest::Approx(1.0));
    CHECK(r.rw_entropy == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(r.free_semigroup.has_value());
    CHECK(*r.free_semigroup);
}

TEST_CASE("identical maps have zero walk entropy") {
    Matrix a(1, 1);
    a << 0.5;
    AffineIFS ifs({{a, Vector::Zero(1)}, {a, Vector::Zero(1)}}, {0.5, 0.5});
    EntropyReport r = random_walk_entropy(ifs, 6);
    CHECK(r.rw_entropy == doctest::Approx(0.0));
    CHECK(*r.free_semigroup == false);
}

TEST_CASE("commuting pair walk entropy decays toward zero") {
    // {x/2, x/4} commute, so length-n products collapse to n+1 classes:
    // H_n/n = log2(n+1)/n -> 0 and is decreasing.
    AffineIFS ifs = from_data("commuting_pair.json");
    auto h = convolution_entropies(ifs, 8);
    for (int n = 1; n <= 8; ++n) {
        double expect = shannon_entropy([&] {
            std::vector<double> binom;
            double tot = std::pow(2.0, n);
            for (int k = 0; k <= n; ++k) {
                double c = 1.0;
                for (int j = 0; j < k; ++j)
                    c = c * static_cast<double>(n - j) / static_cast<double>(j + 1);
                binom.push_back(c / tot);
            }
            return binom;
        }());
        CHECK(h[static_cast<std::size_t>(n - 1)] == doctest::Approx(expect).epsilon(1e-9));
    }
    EntropyReport r = random_walk_entropy(ifs, 8);
    CHECK(r.rw_entropy < 0.6);
    CHECK(*r.free_semigroup == false);
}

TEST_CASE("convolution entropies are subadditive") {
    AffineIFS ifs = from_data("ssc2d.json");
    auto h = convolution_entropies(ifs, 7);
    for (std::size_t m = 1; m + 1 < h.size(); ++m)
        for (std::size_t n = 1; m + n <= h.size(); ++n)
            CHECK(h[m + n - 1] <= h[m - 1] + h[n - 1] + 1e-9);
    // normalized sequence bounded by H(p)
    for (std::size_t n = 1; n <= h.size(); ++n)
        CHECK(h[n - 1] / static_cast<double>(n) <= 1.0 + 1e-12);
}
