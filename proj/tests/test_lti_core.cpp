#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "nicert/errors.hpp"
#include "nicert/polynomial.hpp"
#include "nicert/rational.hpp"
#include "nicert/spectral.hpp"
#include "nicert/state_space.hpp"
#include "nicert/transfer_matrix.hpp"

using namespace nicert;
using cplx = std::complex<double>;

namespace {

TransferMatrix scalar_tf(std::initializer_list<double> num, std::initializer_list<double> den) {
    return TransferMatrix::scalar(RationalFunction(Polynomial(num), Polynomial(den)));
}

}  // namespace

TEST_CASE("Polynomial arithmetic and gcd") {
    SUBCASE("degree and trim") {
        CHECK(Polynomial{}.degree() == -1);
        CHECK(Polynomial({1.0}).degree() == 0);
        CHECK(Polynomial({1.0, 2.0, 0.0}).degree() == 1);
    }

    SUBCASE("evaluation by Horner") {
        Polynomial p({1.0, 2.0, 3.0});  // 1 + 2s + 3s^2
        CHECK(p(2.0) == doctest::Approx(17.0));
        cplx v = p(cplx(0.0, 1.0));
        CHECK(v.real() == doctest::Approx(-2.0));
        CHECK(v.imag() == doctest::Approx(2.0));
    }

    SUBCASE("divmod identity on random inputs") {
        std::mt19937 gen(42);
        std::normal_distribution<double> d(0.0, 1.0);
        for (int rep = 0; rep < 50; ++rep) {
            std::vector<double> ac(5), bc(3);
            for (auto& c : ac) c = d(gen);
            for (auto& c : bc) c = d(gen);
            bc.back() += 2.0;  // keep the divisor well scaled
            Polynomial a(ac), b(bc), q, r;
            Polynomial::divmod(a, b, q, r);
            Polynomial recon = q * b + r;
            for (int k = 0; k <= a.degree(); ++k) {
                CHECK(recon.coeff(k) == doctest::Approx(a.coeff(k)).epsilon(1e-9));
            }
            CHECK(r.degree() < b.degree());
        }
    }

    SUBCASE("gcd of constructed common factors") {
        Polynomial f({1.0, 1.0});            // s + 1
        Polynomial a = f * Polynomial({2.0, 3.0, 1.0});
        Polynomial b = f * Polynomial({5.0, 1.0});
        Polynomial g = Polynomial::gcd(a, b);
        REQUIRE(g.degree() == 1);
        CHECK(g.coeff(0) == doctest::Approx(1.0));
        CHECK(g.coeff(1) == doctest::Approx(1.0));
    }

    SUBCASE("roots of (s+1)(s+2)") {
        Polynomial p({2.0, 3.0, 1.0});
        auto r = p.roots();
        REQUIRE(r.size() == 2);
        CHECK(r[0].real() == doctest::Approx(-2.0));
        CHECK(r[1].real() == doctest::Approx(-1.0));
    }
}

TEST_CASE("RationalFunction reduction") {
    SUBCASE("common factor cancels") {
        // (s+1)(s+2) / (s+1)(s+3) -> (s+2)/(s+3)
        RationalFunction r(Polynomial({1.0, 1.0}) * Polynomial({2.0, 1.0}),
                           Polynomial({1.0, 1.0}) * Polynomial({3.0, 1.0}));
        CHECK(r.num().degree() == 1);
        CHECK(r.den().degree() == 1);
        CHECK(r.at_zero() == doctest::Approx(2.0 / 3.0));
    }

    SUBCASE("denominator made monic") {
        RationalFunction r(Polynomial({2.0}), Polynomial({2.0, 4.0}));  // 2/(4s+2)
        CHECK(r.den().leading() == doctest::Approx(1.0));
        CHECK(r.at_zero() == doctest::Approx(1.0));
    }

    SUBCASE("origin pole order") {
        RationalFunction r(Polynomial({1.0}), Polynomial({0.0, 0.0, 1.0}));  // 1/s^2
        CHECK(r.origin_pole_order() == 2);
        CHECK(RationalFunction(Polynomial({1.0}), Polynomial({1.0, 1.0})).origin_pole_order() == 0);
    }

    SUBCASE("derivative of 1/(s+1)") {
        RationalFunction r(Polynomial({1.0}), Polynomial({1.0, 1.0}));
        CHECK(r.derivative().at_zero() == doctest::Approx(-1.0));
    }
}

TEST_CASE("eval_at") {
    SUBCASE("static gain of the unit lag") {
        TransferMatrix G = scalar_tf({1.0}, {1.0, 1.0});
        CHECK(eval_at(G, cplx(0.0, 0.0))(0, 0).real() == doctest::Approx(1.0));
    }

    SUBCASE("1/(s+1) at s = j") {
        // 1/(1+j) = (1-j)/2
        TransferMatrix G = scalar_tf({1.0}, {1.0, 1.0});
        cplx v = eval_at(G, cplx(0.0, 1.0))(0, 0);
        CHECK(v.real() == doctest::Approx(0.5));
        CHECK(v.imag() == doctest::Approx(-0.5));
    }

    SUBCASE("pole at the origin raises") {
        TransferMatrix G = scalar_tf({1.0}, {0.0, 1.0});
        CHECK_THROWS_AS(eval_at(G, cplx(0.0, 0.0)), EvalAtPole);
    }
}

TEST_CASE("poles") {
    SUBCASE("integrator") {
        auto pls = poles(scalar_tf({1.0}, {0.0, 1.0}));
        REQUIRE(pls.size() == 1);
        CHECK(std::abs(pls[0].location) < 1e-12);
        CHECK(pls[0].multiplicity == 1);
        REQUIRE(pls[0].residue.has_value());
        CHECK((*pls[0].residue)(0, 0).real() == doctest::Approx(1.0));
    }

    SUBCASE("undamped pair 1/(s^2+4) carries residues -+ j/4") {
        // partial fractions: 1/((s-2j)(s+2j)), residue at +2j is 1/(4j) = -j/4
        auto pls = poles(scalar_tf({1.0}, {4.0, 0.0, 1.0}));
        REQUIRE(pls.size() == 2);
        CHECK(pls[0].location.imag() == doctest::Approx(-2.0));
        CHECK(pls[1].location.imag() == doctest::Approx(2.0));
        REQUIRE(pls[1].residue.has_value());
        CHECK((*pls[1].residue)(0, 0).imag() == doctest::Approx(-0.25));
        CHECK((*pls[1].residue)(0, 0).real() == doctest::Approx(0.0));
        REQUIRE(pls[0].residue.has_value());
        CHECK((*pls[0].residue)(0, 0).imag() == doctest::Approx(0.25));
    }

    SUBCASE("repeated location across channels reports order 1") {
        TransferMatrix G(2);
        G.at(0, 0) = RationalFunction(Polynomial({1.0}), Polynomial({1.0, 1.0}));
        G.at(1, 1) = RationalFunction(Polynomial({1.0}), Polynomial({1.0, 1.0}));
        auto pls = poles(G);
        REQUIRE(pls.size() == 1);
        CHECK(pls[0].location.real() == doctest::Approx(-1.0));
        CHECK(pls[0].multiplicity == 1);
    }

    SUBCASE("constants have no poles") {
        CHECK(poles(TransferMatrix::constant(Eigen::MatrixXd::Identity(2, 2))).empty());
    }
}

TEST_CASE("gains") {
    SUBCASE("unit lag") {
        GainData g = gains(scalar_tf({1.0}, {1.0, 1.0}));
        REQUIRE(g.static_gain.has_value());
        CHECK((*g.static_gain)(0, 0) == doctest::Approx(1.0));
        CHECK(g.instantaneous_gain(0, 0) == doctest::Approx(0.0));
    }

    SUBCASE("biproper (s+2)/(s+1)") {
        GainData g = gains(scalar_tf({2.0, 1.0}, {1.0, 1.0}));
        CHECK((*g.static_gain)(0, 0) == doctest::Approx(2.0));
        CHECK(g.instantaneous_gain(0, 0) == doctest::Approx(1.0));
    }

    SUBCASE("integrator marks the origin pole") {
        GainData g = gains(scalar_tf({1.0}, {0.0, 1.0}));
        CHECK(g.pole_at_origin());
        CHECK(g.instantaneous_gain(0, 0) == doctest::Approx(0.0));
    }
}

TEST_CASE("scaled_origin_limit") {
    CHECK(scaled_origin_limit(scalar_tf({1.0}, {0.0, 0.0, 1.0}), 2)(0, 0) == doctest::Approx(1.0));
    CHECK(scaled_origin_limit(scalar_tf({1.0}, {0.0, 1.0}), 2)(0, 0) == doctest::Approx(0.0));
    CHECK_THROWS_AS(scaled_origin_limit(scalar_tf({1.0}, {0.0, 0.0, 0.0, 1.0}), 2), LimitDiverges);
}

TEST_CASE("close_loop") {
    SUBCASE("unit lag with unit negative gain") {
        // 1 - P C = (s+2)/(s+1), closed-loop pole at -2.
        TransferMatrix P = scalar_tf({1.0}, {1.0, 1.0});
        TransferMatrix C = TransferMatrix::constant(-Eigen::MatrixXd::Identity(1, 1));
        auto eigs = close_loop(P, C).pole_eigenvalues();
        REQUIRE(eigs.size() == 1);
        CHECK(eigs(0).real() == doctest::Approx(-2.0));
    }

    SUBCASE("algebraic loop raises") {
        TransferMatrix P = TransferMatrix::constant(Eigen::MatrixXd::Identity(1, 1));
        TransferMatrix C = TransferMatrix::constant(Eigen::MatrixXd::Identity(1, 1));
        CHECK_THROWS_AS(close_loop(P, C), IllPosedError);
    }

    SUBCASE("poles at -1 +- sqrt(2)") {
        // (s+1)^2 = 2
        TransferMatrix P = scalar_tf({2.0}, {1.0, 1.0});
        TransferMatrix C = scalar_tf({1.0}, {1.0, 1.0});
        auto eigs = close_loop(P, C).pole_eigenvalues();
        REQUIRE(eigs.size() == 2);
        std::vector<double> re{eigs(0).real(), eigs(1).real()};
        std::sort(re.begin(), re.end());
        CHECK(re[0] == doctest::Approx(-1.0 - std::sqrt(2.0)));
        CHECK(re[1] == doctest::Approx(-1.0 + std::sqrt(2.0)));
    }
}

TEST_CASE("spectral") {
    SUBCASE("diagonal") {
        Eigen::MatrixXd M(2, 2);
        M << 2.0, 0.0, 0.0, -1.0;
        SpectralSummary s = spectral(M);
        CHECK(s.lambda_max == doctest::Approx(2.0));
        CHECK(s.lambda_min == doctest::Approx(-1.0));
        CHECK(s.sigma_min == doctest::Approx(1.0));
    }

    SUBCASE("nilpotent block is singular") {
        Eigen::MatrixXd M(2, 2);
        M << 0.0, 1.0, 0.0, 0.0;
        CHECK(spectral(M).sigma_min == doctest::Approx(0.0));
    }

    SUBCASE("symmetric 2x2") {
        Eigen::MatrixXd M(2, 2);
        M << 1.0, 2.0, 2.0, 1.0;
        SpectralSummary s = spectral(M);
        CHECK(s.lambda_max == doctest::Approx(3.0));
        CHECK(s.lambda_min == doctest::Approx(-1.0));
    }

    SUBCASE("rotation has complex spectrum") {
        Eigen::MatrixXd M(2, 2);
        M << 0.0, 1.0, -1.0, 0.0;
        CHECK_THROWS_AS(spectral(M), ComplexSpectrum);
    }
}

TEST_CASE("realization round trips") {
    std::mt19937 gen(7);
    std::uniform_real_distribution<double> u(0.2, 3.0);
    std::normal_distribution<double> nd(0.0, 1.0);

    auto random_plant = [&](int n) {
        TransferMatrix G(n);
        for (int m = 0; m < 3; ++m) {
            Eigen::VectorXd a(n);
            for (int i = 0; i < n; ++i) a(i) = nd(gen);
            a.normalize();
            double wn = u(gen), zeta = 0.3 * u(gen);
            RationalFunction mode(Polynomial({wn * wn}),
                                  Polynomial({wn * wn, 2.0 * zeta * wn, 1.0}));
            G = G + TransferMatrix::dyad(a, mode);
        }
        return G;
    };

    SUBCASE("minimal realization matches eval_at on 16 probes") {
        for (int n : {1, 2, 3}) {
            TransferMatrix G = random_plant(n);
            StateSpaceRealization ss = minimal_realization(G);
            for (int k = 0; k < 16; ++k) {
                cplx s(0.0, std::pow(10.0, -2.0 + 4.0 * k / 15.0));
                Eigen::MatrixXcd want = eval_at(G, s);
                Eigen::MatrixXcd got = ss.eval(s);
                CHECK((want - got).norm() <= 1e-8 * (1.0 + want.norm()));
            }
        }
    }

    SUBCASE("minimal realization prunes duplicated channels") {
        // Two identical diagonal lags need two states, not four.
        TransferMatrix G(2);
        G.at(0, 0) = RationalFunction(Polynomial({1.0}), Polynomial({1.0, 1.0}));
        G.at(1, 1) = RationalFunction(Polynomial({1.0}), Polynomial({1.0, 1.0}));
        CHECK(minimal_realization(G).order() == 2);
        // A rank-one dyad with one mode needs exactly one state.
        Eigen::VectorXd a(2);
        a << 1.0, 1.0;
        a.normalize();
        TransferMatrix H =
            TransferMatrix::dyad(a, RationalFunction(Polynomial({1.0}), Polynomial({1.0, 1.0})));
        CHECK(minimal_realization(H).order() == 1);
    }

    SUBCASE("closed-loop poles invariant under plant realization similarity") {
        // close_loop starts from the rational data, so feeding an equivalent
        // rational description must give identical poles.
        TransferMatrix P = random_plant(2);
        TransferMatrix C = TransferMatrix::constant(-0.4 * Eigen::MatrixXd::Identity(2, 2));
        auto e1 = close_loop(P, C).pole_eigenvalues();
        // Rebuild P from a state-space similarity by reconstructing entries
        // through an equivalent sum order.
        TransferMatrix P2 = P + TransferMatrix(2);  // arithmetic identity, re-reduced entries
        auto e2 = close_loop(P2, C).pole_eigenvalues();
        REQUIRE(e1.size() == e2.size());
        std::vector<double> r1, r2;
        for (int i = 0; i < e1.size(); ++i) {
            r1.push_back(e1(i).real());
            r2.push_back(e2(i).real());
        }
        std::sort(r1.begin(), r1.end());
        std::sort(r2.begin(), r2.end());
        for (size_t i = 0; i < r1.size(); ++i) CHECK(r1[i] == doctest::Approx(r2[i]).epsilon(1e-8));
    }

    SUBCASE("instantaneous gain matches the response at omega = 1e9") {
        TransferMatrix G = scalar_tf({2.0, 1.0}, {1.0, 1.0});  // (s+2)/(s+1)
        GainData g = gains(G);
        Eigen::MatrixXcd hf = eval_at(G, cplx(0.0, 1e9));
        CHECK(std::abs(hf(0, 0) - cplx(g.instantaneous_gain(0, 0), 0.0)) < 1e-6);
    }
}

TEST_CASE("rational matrix inverse") {
    SUBCASE("2x2 with rational entries") {
        TransferMatrix M(2);
        M.at(0, 0) = RationalFunction(Polynomial({1.0, 1.0}), Polynomial({1.0}));  // s+1
        M.at(0, 1) = RationalFunction::constant(1.0);
        M.at(1, 0) = RationalFunction::constant(0.0);
        M.at(1, 1) = RationalFunction(Polynomial({2.0, 1.0}), Polynomial({1.0}));  // s+2
        TransferMatrix inv = M.inverse();
        TransferMatrix prod = M * inv;
        for (double w : {0.3, 1.7, 9.2}) {
            Eigen::MatrixXcd I2 = Eigen::MatrixXcd::Identity(2, 2);
            CHECK((eval_at(prod, cplx(0.0, w)) - I2).norm() < 1e-9);
        }
    }
}
