#include <algorithm>
#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "superadd/capacities.hpp"

using namespace superadd;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("binary_entropy", "[capacities]") {
    CHECK(binary_entropy(0.5) == 1.0);
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK_THAT(binary_entropy(0.25), WithinAbs(oracle::kBinaryEntropyQuarter, 1e-14));
    CHECK_THAT(binary_entropy(0.25), WithinAbs(oracle::entropy_nats_route({0.25, 0.75}), 1e-14));
    CHECK_THROWS_AS(binary_entropy(-0.1), DomainError);
    CHECK_THROWS_AS(binary_entropy(1.1), DomainError);
}

TEST_CASE("probability clamping", "[capacities]") {
    CHECK(clamp_probability(-1e-14) == 0.0);
    CHECK(clamp_probability(-5e-13) == 0.0);
    CHECK_THROWS_AS(clamp_probability(-1e-11), DomainError);
    const double probs[] = {0.5, 0.5, -1e-15};
    CHECK_THAT(shannon_entropy(probs), WithinAbs(1.0, 1e-15));
}

TEST_CASE("one-shot and asymptotic capacities", "[capacities]") {
    const Angle right = Angle::degrees(90), zero = Angle::degrees(0), ten = Angle::degrees(10);
    CHECK_THAT(c1(right), WithinAbs(1.0, 1e-12));
    CHECK_THAT(c1(zero), WithinAbs(0.0, 1e-12));
    CHECK_THAT(c_infinity(right), WithinAbs(1.0, 1e-12));
    CHECK_THAT(c_infinity(zero), WithinAbs(0.0, 1e-12));
    CHECK_THAT(c1(ten), WithinAbs(oracle::kC1At10Deg, 1e-12));
    CHECK_THAT(c_infinity(ten), WithinAbs(oracle::kCinfAt10Deg, 1e-12));
    CHECK_THROWS_AS(c1(Angle::degrees(91)), DomainError);
    CHECK_THROWS_AS(c_infinity(Angle::degrees(-1)), DomainError);
}

TEST_CASE("both algebraic forms of C1 agree", "[capacities]") {
    for (int i = 0; i <= 90; ++i) {
        const Angle g = Angle::degrees(i);
        const double s = std::sin(g.rad());
        CHECK_THAT(c1(g), WithinAbs(1.0 - binary_entropy(0.5 * (1.0 + s)), 1e-13));
    }
}

TEST_CASE("C1 < Cinf strictly inside (0, 90)", "[capacities][property]") {
    for (int i = 1; i < 1000; ++i) {
        const Angle g = Angle::degrees(90.0 * i / 1000);
        CHECK(c1(g) < c_infinity(g));
    }
}

TEST_CASE("ratio_curve", "[capacities]") {
    const Angle gs[] = {Angle::degrees(5), Angle::degrees(10), Angle::degrees(90)};
    const SweepTable t = ratio_curve(gs);
    const auto &ratio = t.column("ratio");
    CHECK_THAT(ratio[2], WithinAbs(1.0, 1e-12));
    CHECK_THAT(ratio[1], WithinAbs(oracle::kRatioAt10Deg, 1e-6));
    CHECK(ratio[0] > ratio[1]);

    const Angle bad[] = {Angle::degrees(0), Angle::degrees(10)};
    CHECK_THROWS_AS(ratio_curve(bad), DomainError);
}

namespace {

Ensemble one_shot_ensemble(Angle g, double q) {
    const auto [u0, u1] = embed_alphabet(g);
    return Ensemble({{q, u0}, {1.0 - q, u1}});
}

MeasurementBasis rotated_basis(double theta) {
    return MeasurementBasis({StateVector{std::cos(theta), std::sin(theta)},
                             StateVector{-std::sin(theta), std::cos(theta)}});
}

} // namespace

TEST_CASE("measured_mutual_information examples", "[capacities]") {
    SECTION("noiseless binary channel") {
        CHECK_THAT(measured_mutual_information(one_shot_ensemble(Angle::degrees(90), 0.5), rotated_basis(0.0)),
                   WithinAbs(1.0, 1e-15));
    }
    SECTION("single certain letter") {
        const Ensemble e({{1.0, StateVector::normalized(Eigen::Vector2d(1, 2))}});
        CHECK_THAT(measured_mutual_information(e, rotated_basis(0.3)), WithinAbs(0.0, 1e-15));
    }
    SECTION("one-shot optimal measurement bisects the states at 25 degrees") {
        const Angle g = Angle::degrees(25);
        const double theta = g.rad() / 2 - std::numbers::pi / 4;
        CHECK_THAT(measured_mutual_information(one_shot_ensemble(g, 0.5), rotated_basis(theta)),
                   WithinAbs(c1(g), 1e-9));
    }
    SECTION("incomplete basis is rejected") {
        const MeasurementBasis partial({StateVector{1.0, 0.0, 0.0}, StateVector{0.0, 1.0, 0.0}});
        const Ensemble e({{1.0, StateVector::normalized(Eigen::Vector3d(1, 1, 1))}});
        CHECK_THROWS_AS(measured_mutual_information(e, partial), CompletenessError);
    }
    SECTION("dimension mismatch") {
        CHECK_THROWS_AS(measured_mutual_information(one_shot_ensemble(Angle::degrees(10), 0.5),
                                                    MeasurementBasis({StateVector{1.0, 0.0, 0.0}})),
                        DomainError);
    }
}

TEST_CASE("Ensemble validates priors", "[capacities]") {
    CHECK_THROWS_AS(Ensemble({{0.6, StateVector{1.0, 0.0}}, {0.6, StateVector{0.0, 1.0}}}), DomainError);
    CHECK_THROWS_AS(Ensemble({{-0.1, StateVector{1.0, 0.0}}, {1.1, StateVector{0.0, 1.0}}}), DomainError);
}

TEST_CASE("mutual information properties on random ensembles", "[capacities][property]") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int dim = 2 + trial % 3;
        const int letters = 1 + trial % 4;

        std::vector<double> w(static_cast<std::size_t>(letters));
        for (auto &x : w) {
            x = unit(rng);
        }
        const double total = std::accumulate(w.begin(), w.end(), 0.0);
        std::vector<Letter> ls;
        std::vector<Eigen::VectorXd> raw_states;
        for (int i = 0; i < letters; ++i) {
            raw_states.push_back(oracle::random_unit(rng, dim));
            ls.push_back({w[static_cast<std::size_t>(i)] / total, StateVector(raw_states.back())});
        }
        const Ensemble ens(ls);

        // Random orthonormal basis from a QR factorization.
        Eigen::MatrixXd m(dim, dim);
        for (int c = 0; c < dim; ++c) {
            m.col(c) = oracle::random_unit(rng, dim);
        }
        const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(m).householderQ();
        std::vector<StateVector> bv;
        std::vector<Eigen::VectorXd> raw_basis;
        for (int k = 0; k < dim; ++k) {
            raw_basis.push_back(q.col(k));
            bv.push_back(StateVector::normalized(q.col(k)));
        }
        const MeasurementBasis basis(bv);

        const double mi = measured_mutual_information(ens, basis);
        std::vector<double> priors;
        for (const auto &l : ls) {
            priors.push_back(l.prior);
        }
        CHECK(mi >= -1e-10);
        CHECK(mi <= shannon_entropy(priors) + 1e-10);
        CHECK_THAT(mi, WithinAbs(oracle::mi_from_joint(priors, raw_states, raw_basis), 1e-12));

        // Relabeling the outcomes changes nothing.
        std::vector<StateVector> shuffled = bv;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        CHECK_THAT(measured_mutual_information(ens, MeasurementBasis(shuffled)), WithinAbs(mi, 1e-12));
    }
}

TEST_CASE("maximizing the one-shot functional reproduces C1", "[capacities][property]") {
    for (double deg : {3.0, 10.0, 25.0, 45.0, 70.0}) {
        const Angle g = Angle::degrees(deg);
        // Outer search over the prior, inner over the basis rotation; each by
        // a coarse grid followed by golden-section refinement.
        auto best_over_theta = [&](double q) {
            const Ensemble e = one_shot_ensemble(g, q);
            auto f = [&](double t) { return measured_mutual_information(e, rotated_basis(t)); };
            double best_t = 0.0, best_v = -1.0;
            for (int i = 0; i < 360; ++i) {
                const double t = std::numbers::pi * i / 360;
                if (f(t) > best_v) {
                    best_v = f(t);
                    best_t = t;
                }
            }
            const double step = std::numbers::pi / 360;
            return oracle::golden_max(f, best_t - step, best_t + step);
        };
        const double best = oracle::golden_max(best_over_theta, 0.05, 0.95, 1e-10);
        CHECK_THAT(best, WithinAbs(c1(g), 1e-8));
    }
}
