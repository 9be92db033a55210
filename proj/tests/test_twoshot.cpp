#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "superadd/coherent.hpp"
#include "superadd/twoshot.hpp"

using namespace superadd;
using Catch::Matchers::WithinAbs;

TEST_CASE("ansatz basis is orthonormal and satisfies the symmetry conditions", "[twoshot][property]") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> gamma_deg(0.01, 90.0), eta_u(-7.0, 7.0);
    for (int trial = 0; trial < 300; ++trial) {
        const Angle g = Angle::degrees(gamma_deg(rng));
        const double eta = eta_u(rng);
        const MeasurementBasis e = ansatz_basis(eta, g);
        const Eigen::MatrixXd r = e.rows();
        CHECK((r * r.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-10);

        const auto abc = two_shot_alphabet(g);
        CHECK_THAT(inner(abc.c, e[2]), WithinAbs(std::cos(eta), 1e-10));
        CHECK_THAT(inner(abc.a, e[0]), WithinAbs(inner(abc.b, e[1]), 1e-10));
        CHECK_THAT(inner(abc.a, e[2]), WithinAbs(inner(abc.b, e[2]), 1e-10));
        CHECK_THAT(inner(abc.c, e[0]), WithinAbs(inner(abc.c, e[1]), 1e-10));
    }
}

TEST_CASE("ansatz basis matches the explicit letter expansion", "[twoshot]") {
    for (auto [gdeg, eta] : {std::pair{15.0, 0.3}, {30.0, 1.2}, {60.0, -0.7}, {80.0, 2.5}}) {
        const MeasurementBasis e = ansatz_basis(eta, Angle::degrees(gdeg));
        const auto lit = oracle::expansion_basis(eta, oracle::deg(gdeg));
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK((e[k].coords() - Eigen::VectorXd(lit[k])).norm() < 1e-9);
        }
    }
}

TEST_CASE("ansatz basis stays well defined at tiny angles", "[twoshot]") {
    const MeasurementBasis e = ansatz_basis(1.0, Angle::degrees(1e-6));
    const Eigen::MatrixXd r = e.rows();
    CHECK((r * r.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK_THROWS_AS(ansatz_basis(1.0, Angle::degrees(0)), DomainError);
}

TEST_CASE("rate examples", "[twoshot]") {
    CHECK_THAT(rate(0.7, 0.0, Angle::degrees(20)), WithinAbs(0.0, 1e-15));
    // Orthogonal letters, e3 = c and e1, e2 = a, b: noiseless three-symbol channel.
    CHECK_THAT(rate(0.0, 1.0 / 3, Angle::degrees(90)), WithinAbs(0.5 * std::log2(3.0), 1e-12));
    CHECK_THROWS_AS(rate(0.0, 0.6, Angle::degrees(20)), DomainError);
}

TEST_CASE("fast evaluator, validated rate and literal expansion agree", "[twoshot][property]") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> gd(0.5, 89.5), e(0.0, std::numbers::pi), pp(0.0, 0.5);
    for (int trial = 0; trial < 200; ++trial) {
        const double g = gd(rng), eta = e(rng), p = pp(rng);
        const double r = rate(eta, p, Angle::degrees(g));
        CHECK_THAT(AnsatzRate(Angle::degrees(g))(eta, p), WithinAbs(r, 1e-13));
        if (g > 5.0) {
            CHECK_THAT(oracle::expansion_rate(eta, p, oracle::deg(g)), WithinAbs(r, 1e-10));
        }
    }
}

TEST_CASE("rate is symmetric under exchanging a and b", "[twoshot][property]") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> gd(1, 89), e(0.0, std::numbers::pi), pp(0.0, 0.5), w(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const Angle g = Angle::degrees(gd(rng));
        const double eta = e(rng);
        const auto abc = two_shot_alphabet(g);
        const MeasurementBasis basis = ansatz_basis(eta, g);
        // Unequal priors on a and b make the check non-trivial.
        const double pa = 0.4 * w(rng), pb = 0.4 * w(rng);
        const Ensemble fwd({{pa, abc.a}, {pb, abc.b}, {1 - pa - pb, abc.c}});
        const Ensemble swapped({{pa, abc.b}, {pb, abc.a}, {1 - pa - pb, abc.c}});
        const MeasurementBasis relabeled({basis[1], basis[0], basis[2]});
        CHECK_THAT(measured_mutual_information(swapped, relabeled),
                   WithinAbs(measured_mutual_information(fwd, basis), 1e-12));
        (void)pp;
    }
}

TEST_CASE("optimize_r2 reproduces the small-angle ratio", "[twoshot]") {
    const Angle g = Angle::degrees(2);
    const RateResult r = optimize_r2(g);
    CHECK_THAT(r.bits_per_transmission / c1(g), WithinAbs(1.02818, 1e-3));
    CHECK(r.converged);
    CHECK(r.params.at("p") <= 0.5);
}

TEST_CASE("optimize_r2 finds the narrow peak at very small angles", "[twoshot]") {
    for (double deg : {0.2, 0.05, 0.01}) {
        const Angle g = Angle::degrees(deg);
        CHECK_THAT(optimize_r2(g).bits_per_transmission / c1(g), WithinAbs(1.02818, 2e-4));
        CHECK_THAT(optimize_r2_truncated(g).bits_per_transmission / c1(g), WithinAbs(1.02818, 2e-4));
    }
}

TEST_CASE("optimize_r2 is deterministic", "[twoshot]") {
    const RateResult a = optimize_r2(Angle::degrees(12));
    const RateResult b = optimize_r2(Angle::degrees(12));
    CHECK(a.bits_per_transmission == b.bits_per_transmission);
    CHECK(a.params == b.params);
}

TEST_CASE("superadditivity holds below the crossover and fails above 25 degrees", "[twoshot][property]") {
    const Angle ten = Angle::degrees(10);
    CHECK(optimize_r2(ten).bits_per_transmission > c1(ten));
    CHECK(optimize_r2(Angle::degrees(25)).bits_per_transmission < c1(Angle::degrees(25)));
    for (int i = 1; i <= 50; ++i) {
        const Angle below = Angle::degrees(18.5 * i / 50);
        CHECK(optimize_r2(below).bits_per_transmission > c1(below));
        const Angle above = Angle::degrees(25.0 + 65.0 * i / 51);
        CHECK(optimize_r2(above).bits_per_transmission < c1(above));
    }
}

TEST_CASE("R2 - C1 is single peaked", "[twoshot]") {
    std::vector<double> diff;
    for (int i = 1; i <= 36; ++i) {
        const Angle g = Angle::degrees(0.5 * i);
        diff.push_back(optimize_r2(g).bits_per_transmission - c1(g));
    }
    const auto peak = std::max_element(diff.begin(), diff.end()) - diff.begin();
    CHECK(peak > 0);
    CHECK(peak < static_cast<long>(diff.size()) - 1);
    for (long i = 0; i < peak; ++i) {
        CHECK(diff[i] < diff[i + 1]);
    }
    for (long i = peak; i + 1 < static_cast<long>(diff.size()); ++i) {
        CHECK(diff[i] > diff[i + 1]);
    }
}

TEST_CASE("optimize_r2 matches an exhaustive grid", "[twoshot]") {
    const Angle g = Angle::degrees(10);
    const AnsatzRate r(g);
    const double dense = oracle::grid_max([&](double e, double p) { return oracle::expansion_rate(e, p, g.rad()); }, 400, 200);
    const double opt = optimize_r2(g).bits_per_transmission;
    CHECK(opt >= dense - 1e-12);
    CHECK_THAT(opt, WithinAbs(dense, 1e-6));
    (void)r;
}

TEST_CASE("optimize_general stays between C1 and Cinf and beats the ansatz", "[twoshot]") {
    const Angle g = Angle::degrees(10);
    const RateResult gen = optimize_general(g, 1);
    CHECK(gen.label == "lower bound probe");
    CHECK(gen.bits_per_transmission >= optimize_r2(g).bits_per_transmission - 1e-7);
    CHECK(gen.bits_per_transmission >= c1(g) - 1e-7);
    CHECK(gen.bits_per_transmission <= c_infinity(g) + 1e-9);

    SECTION("different seeds agree") {
        CHECK_THAT(optimize_general(g, 12345).bits_per_transmission, WithinAbs(gen.bits_per_transmission, 1e-6));
    }
    SECTION("annealing alone, without warm starts, finds the optimum") {
        GeneralSearchOptions opt;
        opt.warm_starts = false;
        CHECK_THAT(optimize_general(g, 77, opt).bits_per_transmission, WithinAbs(gen.bits_per_transmission, 1e-6));
    }
    SECTION("prior parameterization reaches the simplex faces") {
        const auto t = detail::angles_from_simplex({0.3, 0.3, 0.4, 0.0});
        const Eigen::Vector4d back = detail::simplex_from_angles(t.data());
        CHECK((back - Eigen::Vector4d(0.3, 0.3, 0.4, 0.0)).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("optimize_general above the crossover matches C1", "[twoshot]") {
    for (double deg : {30.0, 60.0}) {
        const Angle g = Angle::degrees(deg);
        const double gen = optimize_general(g, 3).bits_per_transmission;
        CHECK(gen >= c1(g) - 1e-7);
        CHECK(gen <= c_infinity(g) + 1e-9);
    }
}

TEST_CASE("crossover_angle", "[twoshot]") {
    SECTION("ansatz curve") {
        const Angle x = crossover_angle([](Angle g) { return optimize_r2(g).bits_per_transmission; },
                                        Angle::degrees(15), Angle::degrees(25));
        CHECK_THAT(x.deg(), WithinAbs(19.0, 0.5));
    }
    SECTION("synthetic curve with a known root") {
        auto fn = [](Angle g) { return c1(g) + 1e-3 * (12.345 - g.deg()); };
        CHECK_THAT(crossover_angle(fn, Angle::degrees(5), Angle::degrees(40)).deg(), WithinAbs(12.345, 0.01));
    }
    SECTION("no sign change") {
        auto fn = [](Angle g) { return c1(g) + 0.01; };
        CHECK_THROWS_AS(crossover_angle(fn, Angle::degrees(15), Angle::degrees(25)), BracketingError);
    }
}
