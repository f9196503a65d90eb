#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "nicert/classify.hpp"
#include "nicert/errors.hpp"
#include "nicert/spectral.hpp"

using namespace nicert;
using cplx = std::complex<double>;

namespace {

TransferMatrix scalar_tf(std::initializer_list<double> num, std::initializer_list<double> den) {
    return TransferMatrix::scalar(RationalFunction(Polynomial(num), Polynomial(den)));
}

TransferMatrix dyad2(double ax, double ay, const RationalFunction& g) {
    Eigen::VectorXd a(2);
    a << ax, ay;
    a.normalize();
    return TransferMatrix::dyad(a, g);
}

RationalFunction lag(double k, double tau) {
    return RationalFunction(Polynomial({k}), Polynomial({1.0, tau}));
}

RationalFunction damped(double k, double wn, double zeta) {
    return RationalFunction(Polynomial({k * wn * wn}), Polynomial({wn * wn, 2.0 * zeta * wn, 1.0}));
}

}  // namespace

TEST_CASE("classify_ni scalar catalog") {
    SUBCASE("unit lag is SNI") {
        // j(G - G*) = 2w/(1+w^2) > 0 on (0, inf)
        NIClassification c = classify_ni(scalar_tf({1.0}, {1.0, 1.0}));
        CHECK(c.verdict == NIVerdict::SNI);
        CHECK(c.stable);
        CHECK(c.strictness_margin > 0.0);
    }

    SUBCASE("integrator is NI with an origin marginal pole") {
        NIClassification c = classify_ni(scalar_tf({1.0}, {0.0, 1.0}));
        CHECK(c.verdict == NIVerdict::NI);
        CHECK_FALSE(c.stable);
        REQUIRE(c.marginal_poles.size() == 1);
        CHECK(std::abs(c.marginal_poles[0].location) < 1e-10);
    }

    SUBCASE("differentiator-like s/(s+1) is NotNI with witness at omega = 1") {
        // j(G - G*)(jw) = -2w/(1+w^2), minimized at w = 1 with value -1
        NIClassification c = classify_ni(scalar_tf({0.0, 1.0}, {1.0, 1.0}));
        REQUIRE(c.verdict == NIVerdict::NotNI);
        REQUIRE(c.witness.has_value());
        CHECK(c.witness->clause == NIClause::FrequencyInequality);
        CHECK(c.witness->omega0 == doctest::Approx(1.0).epsilon(1e-4));
        CHECK(c.witness->defect == doctest::Approx(-1.0).epsilon(1e-9));
        CHECK(replay_witness(scalar_tf({0.0, 1.0}, {1.0, 1.0}), *c.witness) ==
              doctest::Approx(c.witness->defect).epsilon(1e-9));
    }

    SUBCASE("undamped oscillator is marginal NI") {
        NIClassification c = classify_ni(scalar_tf({1.0}, {4.0, 0.0, 1.0}));
        CHECK(c.verdict == NIVerdict::NI);
        CHECK_FALSE(c.stable);
        CHECK(c.marginal_poles.size() == 2);
    }

    SUBCASE("constants are NI but not SNI") {
        CHECK(classify_ni(TransferMatrix::constant(5.0 * Eigen::MatrixXd::Identity(1, 1))).verdict ==
              NIVerdict::NI);
        CHECK(classify_ni(TransferMatrix::constant(-3.0 * Eigen::MatrixXd::Identity(2, 2))).verdict ==
              NIVerdict::NI);
    }

    SUBCASE("open-RHP pole fails membership") {
        NIClassification c = classify_ni(scalar_tf({1.0}, {-1.0, 1.0}));
        REQUIRE(c.verdict == NIVerdict::NotNI);
        CHECK(c.witness->clause == NIClause::RHPPole);
        CHECK(replay_witness(scalar_tf({1.0}, {-1.0, 1.0}), *c.witness) ==
              doctest::Approx(1.0).epsilon(1e-9));
    }

    SUBCASE("biproper (s+2)/(s+1) is SNI") {
        CHECK(classify_ni(scalar_tf({2.0, 1.0}, {1.0, 1.0})).verdict == NIVerdict::SNI);
    }

    SUBCASE("double integrator is NI") {
        // lim s^2 G = 1 >= 0 and s^3 G -> 0
        NIClassification c = classify_ni(scalar_tf({1.0}, {0.0, 0.0, 1.0}));
        CHECK(c.verdict == NIVerdict::NI);
    }

    SUBCASE("negative integrator is NotNI through the frequency clause") {
        NIClassification c = classify_ni(scalar_tf({-1.0}, {0.0, 1.0}));
        CHECK(c.verdict == NIVerdict::NotNI);
        CHECK(c.witness->clause == NIClause::FrequencyInequality);
    }

    SUBCASE("negative undamped residue is NotNI") {
        // -1/(s^2+4): residue of jG at 2j is negative
        NIClassification c = classify_ni(scalar_tf({-1.0}, {4.0, 0.0, 1.0}));
        REQUIRE(c.verdict == NIVerdict::NotNI);
        CHECK(c.witness->clause == NIClause::AxisResidue);
        double replay = replay_witness(scalar_tf({-1.0}, {4.0, 0.0, 1.0}), *c.witness);
        CHECK(replay == doctest::Approx(c.witness->defect).epsilon(1e-9));
    }

    SUBCASE("triple origin pole fails the origin clause") {
        // +1/s^3 already violates the frequency inequality (j(G-G*) = -2/w^3);
        // -1/s^3 passes it and is caught by the origin-limit clause.
        NIClassification cpos = classify_ni(scalar_tf({1.0}, {0.0, 0.0, 0.0, 1.0}));
        REQUIRE(cpos.verdict == NIVerdict::NotNI);
        CHECK(cpos.witness->clause == NIClause::FrequencyInequality);
        NIClassification c = classify_ni(scalar_tf({-1.0}, {0.0, 0.0, 0.0, 1.0}));
        REQUIRE(c.verdict == NIVerdict::NotNI);
        CHECK(c.witness->clause == NIClause::OriginLimit);
        CHECK(c.witness->defect == doctest::Approx(-3.0));
    }

    SUBCASE("negative double origin pole fails the origin limit sign") {
        NIClassification c = classify_ni(scalar_tf({-1.0}, {0.0, 0.0, 1.0}));
        REQUIRE(c.verdict == NIVerdict::NotNI);
        CHECK(c.witness->clause == NIClause::OriginLimit);
    }
}

TEST_CASE("classify_ni MIMO") {
    SUBCASE("two independent lag modes make a 2x2 SNI system") {
        // Both directions keep a 1/w decay, so strictness certifies across
        // the whole grid.
        TransferMatrix G = dyad2(1.0, 0.3, lag(1.0, 0.7)) + dyad2(-0.4, 1.0, lag(2.0, 3.0));
        NIClassification c = classify_ni(G);
        CHECK(c.verdict == NIVerdict::SNI);
    }

    SUBCASE("a direction decaying into the tolerance certifies NI, not SNI") {
        // The damped mode's direction falls off like 1/w^3 and drops below
        // the certificate tolerance at the grid edge.
        TransferMatrix G = dyad2(1.0, 0.3, lag(1.0, 0.7)) + dyad2(-0.4, 1.0, damped(2.0, 3.0, 0.4));
        NIClassification c = classify_ni(G);
        CHECK(c.verdict == NIVerdict::NI);
        CHECK(c.stable);
    }

    SUBCASE("rank-one dyad is NI but not SNI for n = 2") {
        TransferMatrix G = dyad2(1.0, 1.0, lag(1.0, 1.0));
        NIClassification c = classify_ni(G);
        CHECK(c.verdict == NIVerdict::NI);
        CHECK(c.stable);
        CHECK(std::abs(c.strictness_margin) <= 1e-9);
    }

    SUBCASE("verdict invariant under orthogonal congruence") {
        TransferMatrix G = dyad2(1.0, 0.2, lag(1.5, 0.3)) + dyad2(0.1, -1.0, damped(1.0, 0.8, 0.2));
        double th = 0.7;
        Eigen::MatrixXd T(2, 2);
        T << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
        TransferMatrix GT = T.transpose() * G * T;
        CHECK(classify_ni(G).verdict == classify_ni(GT).verdict);

        TransferMatrix H2(2);
        H2.at(0, 0) = RationalFunction(Polynomial({0.0, 1.0}), Polynomial({1.0, 1.0}));
        H2.at(1, 1) = lag(1.0, 1.0);
        TransferMatrix H2T = T.transpose() * H2 * T;
        NIClassification c1 = classify_ni(H2), c2 = classify_ni(H2T);
        CHECK(c1.verdict == NIVerdict::NotNI);
        CHECK(c2.verdict == NIVerdict::NotNI);
        CHECK(c1.witness->omega0 == doctest::Approx(c2.witness->omega0).epsilon(1e-6));
        CHECK(c1.witness->defect == doctest::Approx(c2.witness->defect).epsilon(1e-6));
    }

    SUBCASE("static and instantaneous gains of NI systems obey the gain ordering") {
        std::mt19937 gen(3);
        std::normal_distribution<double> nd(0.0, 1.0);
        for (int rep = 0; rep < 12; ++rep) {
            Eigen::VectorXd a(2), b(2);
            for (int i = 0; i < 2; ++i) {
                a(i) = nd(gen);
                b(i) = nd(gen);
            }
            a.normalize();
            b.normalize();
            double k1 = 0.4 + 0.1 * rep, k2 = 1.3;
            TransferMatrix G = TransferMatrix::dyad(a, lag(k1, 0.5)) +
                               TransferMatrix::dyad(b, damped(k2, 2.0, 0.3));
            NIClassification c = classify_ni(G);
            REQUIRE(c.verdict != NIVerdict::NotNI);
            GainData g = gains(G);
            // Both gains symmetric, G(0) - G(inf) >= 0; strict for SNI.
            CHECK((*g.static_gain - g.static_gain->transpose()).norm() < 1e-9);
            CHECK((g.instantaneous_gain - g.instantaneous_gain.transpose()).norm() < 1e-9);
            double lmin = symmetric_lambda_min(*g.static_gain - g.instantaneous_gain);
            CHECK(lmin >= -1e-9);
            if (c.verdict == NIVerdict::SNI) CHECK(lmin > 0.0);
        }
    }

    SUBCASE("NotNI witness replays below zero") {
        // Witness quadratic form reproduces the defect: x* j(G-G*) x < 0.
        TransferMatrix H2(2);
        H2.at(0, 0) = RationalFunction(Polynomial({0.0, 1.0}), Polynomial({1.0, 1.0}));
        H2.at(1, 1) = lag(1.0, 1.0);
        NIClassification c = classify_ni(H2);
        REQUIRE(c.verdict == NIVerdict::NotNI);
        Eigen::MatrixXcd Gw = eval_at(H2, cplx(0.0, c.witness->omega0));
        cplx j(0.0, 1.0);
        cplx q =
            (c.witness->direction.adjoint() * (j * (Gw - Gw.adjoint())) * c.witness->direction)(0, 0);
        CHECK(q.real() == doctest::Approx(c.witness->defect).epsilon(1e-9));
        CHECK(q.real() < 0.0);
        CHECK(c.witness->direction.norm() == doctest::Approx(1.0));
    }
}

TEST_CASE("is_positive_real") {
    SUBCASE("unit lag is positive real") {
        CHECK(is_positive_real(scalar_tf({1.0}, {1.0, 1.0})).passive);
    }

    SUBCASE("negative constant is not") {
        PassivityReport r =
            is_positive_real(TransferMatrix::constant(-Eigen::MatrixXd::Identity(1, 1)));
        CHECK_FALSE(r.passive);
    }

    SUBCASE("band-pass s/(s^2+s+1) is positive real") {
        // Re G(jw) = w^2 / ((1-w^2)^2 + w^2) >= 0
        CHECK(is_positive_real(scalar_tf({0.0, 1.0}, {1.0, 1.0, 1.0})).passive);
    }

    SUBCASE("unstable input raises") {
        CHECK_THROWS_AS(is_positive_real(scalar_tf({1.0}, {-1.0, 1.0})), NotStableError);
    }

    SUBCASE("lossless s/(s^2+1) passes through the residue condition") {
        CHECK(is_positive_real(scalar_tf({0.0, 1.0}, {1.0, 0.0, 1.0})).passive);
    }

    SUBCASE("negative lossless fails the residue condition") {
        CHECK_FALSE(is_positive_real(scalar_tf({0.0, -1.0}, {1.0, 0.0, 1.0})).passive);
    }
}

TEST_CASE("is_output_strictly_passive") {
    SUBCASE("identity: epsilon* = 2") {
        auto r =
            is_output_strictly_passive(TransferMatrix::constant(Eigen::MatrixXd::Identity(1, 1)));
        CHECK(r.output_strictly_passive);
        CHECK(r.epsilon_star == doctest::Approx(2.0).epsilon(1e-6));
    }

    SUBCASE("unit lag: pointwise ratio is constant 2") {
        auto r = is_output_strictly_passive(scalar_tf({1.0}, {1.0, 1.0}));
        CHECK(r.output_strictly_passive);
        CHECK(r.epsilon_star == doctest::Approx(2.0).epsilon(1e-6));
    }

    SUBCASE("integrator is rejected") {
        CHECK_THROWS_AS(is_output_strictly_passive(scalar_tf({1.0}, {0.0, 1.0})), NotStableError);
    }

    SUBCASE("skew constant is passive but not output strictly passive") {
        // G + G* = 0 while G*G = I.
        Eigen::MatrixXd S(2, 2);
        S << 0.0, 1.0, -1.0, 0.0;
        auto r = is_output_strictly_passive(TransferMatrix::constant(S));
        CHECK_FALSE(r.output_strictly_passive);
    }
}

TEST_CASE("SNI implies NI on a sampled family") {
    // Verdict lattice: every SNI verdict also satisfies the NI clauses.
    std::mt19937 gen(11);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    for (int rep = 0; rep < 10; ++rep) {
        TransferMatrix G = dyad2(u(gen), u(gen), lag(u(gen), u(gen))) +
                           dyad2(-u(gen), u(gen), damped(u(gen), u(gen) + 0.5, 0.4)) +
                           TransferMatrix::constant(Eigen::MatrixXd::Identity(2, 2) * u(gen));
        NIClassification c = classify_ni(G);
        if (c.verdict == NIVerdict::SNI) {
            CHECK(c.stable);
            CHECK(c.marginal_poles.empty());
            CHECK(c.strictness_margin > 0.0);
        }
        CHECK(c.verdict != NIVerdict::NotNI);
    }
}
