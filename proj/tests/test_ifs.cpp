#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "affinedim/io.hpp"

using namespace affinedim;

namespace {

AffineIFS cantor3() {
    return load_ifs(std::string(AFFINEDIM_DATA_DIR) + "/cantor3.json");
}

AffineIFS one_d(std::vector<std::pair<double, double>> maps, std::vector<double> p) {
    std::vector<AffineMap> ms;
    for (auto [a, t] : maps) {
        Matrix lin(1, 1);
        lin << a;
        Vector tr(1);
        tr << t;
        ms.push_back({lin, tr});
    }
    return AffineIFS(std::move(ms), std::move(p));
}

}  // namespace

TEST_CASE("AffineIFS invariants") {
    Matrix expanding(1, 1);
    expanding << 1.5;
    Vector t = Vector::Zero(1);
    CHECK_THROWS_AS(AffineIFS({{expanding, t}}, {1.0}), InvariantViolation);

    Matrix ok(1, 1);
    ok << 0.5;
    CHECK_THROWS_AS(AffineIFS({{ok, t}}, {0.5}), InvariantViolation);   // sum != 1
    CHECK_THROWS_AS(AffineIFS({{ok, t}, {ok, t}}, {1.0, 0.0}), InvariantViolation);

    Matrix singular = Matrix::Zero(2, 2);
    singular(0, 0) = 0.5;
    CHECK_THROWS_AS(AffineIFS({{singular, Vector::Zero(2)}}, {1.0}), InvariantViolation);
}

TEST_CASE("compose_word basics") {
    AffineIFS ifs = one_d({{0.5, 0.0}, {0.5, 0.5}}, {0.5, 0.5});
    AffineMap empty = compose_word(ifs, {});
    CHECK(empty.linear(0, 0) == 1.0);
    CHECK(empty.translation(0) == 0.0);

    // u = (0,1): x -> x/4 + 1/4
    AffineMap c = compose_word(ifs, {0, 1});
    CHECK(c.linear(0, 0) == doctest::Approx(0.25));
    CHECK(c.translation(0) == doctest::Approx(0.25));
}

TEST_CASE("compose_word is a semigroup morphism") {
    AffineIFS ifs = load_ifs(std::string(AFFINEDIM_DATA_DIR) + "/ssc2d.json");
    Word u{0, 1, 1}, v{1, 0, 0, 1};
    Word uv = u;
    uv.insert(uv.end(), v.begin(), v.end());
    AffineMap lhs = compose_word(ifs, uv);
    AffineMap rhs = compose_word(ifs, u).after(compose_word(ifs, v));
    CHECK((lhs.linear - rhs.linear).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((lhs.translation - rhs.translation).cwiseAbs().maxCoeff() < 1e-14);

    // linear part equals the product of the letter matrices
    Matrix prod = Matrix::Identity(2, 2);
    for (int letter : uv) prod = prod * ifs.map(letter).linear;
    CHECK((lhs.linear - prod).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("coding_point geometric series") {
    AffineIFS ifs = cantor3();
    CHECK(coding_point(ifs, {}).size() == 1);
    CHECK(coding_point(ifs, {}) == Vector::Zero(1));
    // all-ones word approaches the fixed point 1
    Word u(30, 1);
    CHECK(coding_point(ifs, u)(0) == doctest::Approx(1.0).epsilon(1e-12));

    // telescoping error bound: |phi_u(0) - phi_{u.v}(0)| <= R * max||A||^|u|
    double radius = attractor_radius(ifs);
    Word base{0, 1, 1, 0, 1};
    Vector p = coding_point(ifs, base);
    for (Word ext : {Word{0}, Word{1, 1}, Word{0, 1, 0, 1}}) {
        Word full = base;
        full.insert(full.end(), ext.begin(), ext.end());
        double bound = radius * std::pow(ifs.max_norm(), base.size());
        CHECK((coding_point(ifs, full) - p).norm() <= bound + 1e-15);
    }
}

TEST_CASE("attractor_radius") {
    AffineIFS linear_only = one_d({{0.5, 0.0}}, {1.0});
    CHECK(attractor_radius(linear_only) == 0.0);
    AffineIFS half_shift = one_d({{0.5, 0.5}}, {1.0});
    CHECK(attractor_radius(half_shift) == doctest::Approx(1.0));
}

TEST_CASE("common_fixed_point") {
    AffineIFS linear_pair = one_d({{0.5, 0.0}, {0.25, 0.0}}, {0.5, 0.5});
    auto p = common_fixed_point(linear_pair);
    REQUIRE(p.has_value());
    CHECK((*p)(0) == doctest::Approx(0.0));

    CHECK_FALSE(common_fixed_point(cantor3()).has_value());
}

TEST_CASE("sample_measure containment and reproducibility") {
    AffineIFS ifs = cantor3();
    EmpiricalMeasure m1 = sample_measure(ifs, 5000, 0, 42);
    EmpiricalMeasure m2 = sample_measure(ifs, 5000, 0, 42);
    CHECK((m1.points - m2.points).cwiseAbs().maxCoeff() == 0.0);  // bit-exact

    CHECK(m1.points.minCoeff() >= 0.0);
    CHECK(m1.points.maxCoeff() <= 1.0);
    double radius = attractor_radius(ifs);
    for (long i = 0; i < m1.size(); ++i)
        CHECK(m1.points.row(i).norm() <= radius + 1e-12);
}

TEST_CASE("sample_measure single map concentrates at the fixed point") {
    AffineIFS single = one_d({{0.5, 0.5}}, {1.0});
    EmpiricalMeasure m = sample_measure(single, 100, 0, 7);
    for (long i = 0; i < m.size(); ++i)
        CHECK(m.points(i, 0) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("empirical mean solves the barycenter fixed point") {
    AffineIFS ifs = load_ifs(std::string(AFFINEDIM_DATA_DIR) + "/ssc2d.json");
    const long n = 200'000;
    EmpiricalMeasure m = sample_measure(ifs, n, 0, 99);
    Vector mean = m.points.colwise().mean().transpose();
    // mean = sum p_i (A_i mean + a_i)  =>  (I - sum p_i A_i) mean = sum p_i a_i
    Matrix lhs = Matrix::Identity(2, 2);
    Vector rhs = Vector::Zero(2);
    for (int i = 0; i < ifs.size(); ++i) {
        lhs -= ifs.probs()[static_cast<std::size_t>(i)] * ifs.map(i).linear;
        rhs += ifs.probs()[static_cast<std::size_t>(i)] * ifs.map(i).translation;
    }
    Vector expected = lhs.partialPivLu().solve(rhs);
    double spread = std::sqrt((m.points.rowwise() - mean.transpose()).squaredNorm() /
                              static_cast<double>(n));
    double three_se = 3.0 * spread / std::sqrt(static_cast<double>(n));
    CHECK((mean - expected).norm() <= 3.0 * three_se);  // slack across coordinates
}

TEST_CASE("self-affinity of the sampled measure") {
    AffineIFS ifs = load_ifs(std::string(AFFINEDIM_DATA_DIR) + "/ssc2d.json");
    const long n = 100'000;
    EmpiricalMeasure fresh = sample_measure(ifs, n, 0, 123);
    EmpiricalMeasure base = sample_measure(ifs, n, 0, 456);
    // mixture sum p_i phi_i(base): concatenate pushforwards with p_i weights
    Vector mix_mean = Vector::Zero(2);
    Matrix mix_cov = Matrix::Zero(2, 2);
    for (int i = 0; i < ifs.size(); ++i) {
        EmpiricalMeasure push = map_measure(base, ifs.map(i));
        Vector mu_i = push.points.colwise().mean().transpose();
        Matrix centered = push.points.rowwise() - mu_i.transpose();
        Matrix cov_i = centered.transpose() * centered / static_cast<double>(n);
        double p = ifs.probs()[static_cast<std::size_t>(i)];
        mix_mean += p * mu_i;
        mix_cov += p * (cov_i + mu_i * mu_i.transpose());
    }
    mix_cov -= mix_mean * mix_mean.transpose();
    Vector f_mean = fresh.points.colwise().mean().transpose();
    Matrix fc = fresh.points.rowwise() - f_mean.transpose();
    Matrix f_cov = fc.transpose() * fc / static_cast<double>(n);
    CHECK((mix_mean - f_mean).norm() < 0.01);
    CHECK((mix_cov - f_cov).cwiseAbs().maxCoeff() < 0.01);
}

TEST_CASE("project_measure") {
    Matrix pts(3, 2);
    pts << 1, 2, 3, 4, 5, 6;
    EmpiricalMeasure m = EmpiricalMeasure::uniform(pts);

    EmpiricalMeasure x = project_measure(m, Subspace::coordinate(2, {0}));
    CHECK(x.ambient_dim == 1);
    CHECK(x.points(0, 0) == 1.0);
    CHECK(x.points(2, 0) == 5.0);

    EmpiricalMeasure full = project_measure(m, Subspace::full(2));
    for (long i = 0; i < 3; ++i)
        for (long j = i + 1; j < 3; ++j)
            CHECK((full.points.row(i) - full.points.row(j)).norm() ==
                  doctest::Approx((pts.row(i) - pts.row(j)).norm()));

    for (long i = 0; i < 3; ++i)
        CHECK(x.points.row(i).norm() <= pts.row(i).norm() + 1e-12);

    CHECK_THROWS_AS(project_measure(m, Subspace::coordinate(3, {0})), DimMismatch);
}

TEST_CASE("spec file round trip and parse errors") {
    AffineIFS ifs = load_ifs(std::string(AFFINEDIM_DATA_DIR) + "/sosc3d.json");
    CHECK(ifs.dim() == 3);
    CHECK(ifs.size() == 3);

    std::string tmp = "/tmp/affinedim_test_spec.json";
    save_ifs(ifs, tmp);
    AffineIFS back = load_ifs(tmp);
    for (int i = 0; i < ifs.size(); ++i) {
        CHECK((ifs.map(i).linear - back.map(i).linear).cwiseAbs().maxCoeff() == 0.0);
        CHECK((ifs.map(i).translation - back.map(i).translation).cwiseAbs().maxCoeff() ==
              0.0);
    }
    std::remove(tmp.c_str());

    CHECK_THROWS_AS(parse_ifs("{not json"), SpecParseError);
    CHECK_THROWS_AS(parse_ifs("{\"dim\": 1}"), SpecParseError);
    CHECK_THROWS_AS(parse_ifs(R"({"dim":1,"maps":[{"A":[0.5,0.5],"a":[0]}],"p":[1.0]})"),
                    SpecParseError);
}

TEST_CASE("point cloud cache round trip") {
    AffineIFS ifs = cantor3();
    EmpiricalMeasure m = sample_measure(ifs, 1000, 0, 5);
    std::string tmp = "/tmp/affinedim_test_cloud.afpc";
    write_point_cloud(m, tmp);
    EmpiricalMeasure back = read_point_cloud(tmp);
    CHECK(back.ambient_dim == 1);
    CHECK(back.size() == 1000);
    CHECK((back.points - m.points).cwiseAbs().maxCoeff() == 0.0);
    std::remove(tmp.c_str());
}
