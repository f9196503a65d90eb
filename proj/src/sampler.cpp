#include "nicert/sampler.hpp"

#include <cmath>

#include "nicert/classify.hpp"
#include "nicert/errors.hpp"
#include "nicert/spectral.hpp"

namespace nicert {

namespace {

// splitmix64; the output stream is part of the sampler's determinism
// contract, so it is spelled out rather than delegated to std::.
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }
    double normal() {
        double u1 = std::max(uniform(), 1e-300);
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }
    Eigen::VectorXd unit_vector(int n) {
        Eigen::VectorXd v(n);
        do {
            for (int i = 0; i < n; ++i) v(i) = normal();
        } while (v.norm() < 1e-8);
        return v / v.norm();
    }
};

// Known NI modal building blocks.
RationalFunction damped_mode(double wn, double zeta) {
    return RationalFunction(Polynomial({wn * wn}), Polynomial({wn * wn, 2.0 * zeta * wn, 1.0}));
}
RationalFunction lag_mode(double tau) {
    return RationalFunction(Polynomial({1.0}), Polynomial({1.0, tau}));
}
RationalFunction undamped_mode(double wn) {
    return RationalFunction(Polynomial({wn * wn}), Polynomial({wn * wn, 0.0, 1.0}));
}
RationalFunction integrator_mode() {
    return RationalFunction(Polynomial({1.0}), Polynomial({0.0, 1.0}));
}

Eigen::MatrixXd random_symmetric(Rng& rng, int n, double lo, double hi) {
    Eigen::MatrixXd V(n, n);
    for (int j = 0; j < n; ++j) V.col(j) = rng.unit_vector(n);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(V);
    Eigen::MatrixXd Q = qr.householderQ();
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) d(i) = rng.uniform(lo, hi);
    return Q * d.asDiagonal() * Q.transpose();
}

TransferMatrix build_candidate(const SampleSpec& spec, Rng& rng) {
    const UncertaintyKind kind = spec.cls.kind;
    const bool sni = kind_is_sni(kind);
    const bool strictly_proper = kind == UncertaintyKind::StrictlyProperNI;
    const bool allow_integrator = kind == UncertaintyKind::StrictlyProperNI ||
                                  kind == UncertaintyKind::NI_NoDoubleOriginPole;
    const bool allow_undamped = !sni;
    const bool feedthrough_psd = kind == UncertaintyKind::N0_DcBoundedNonneg ||
                                 kind == UncertaintyKind::N0_InstNonnegDcStrict ||
                                 kind == UncertaintyKind::SNI_InstNonneg ||
                                 kind == UncertaintyKind::SNI_InstNonnegDcBounded ||
                                 kind == UncertaintyKind::SNI_DcBoundedNonneg;

    TransferMatrix P(spec.n);
    for (int m = 0; m < spec.modes; ++m) {
        Eigen::VectorXd a = rng.unit_vector(spec.n);
        double k = rng.log_uniform(0.2, 1.0) * spec.scale;
        double pick = rng.uniform();
        RationalFunction g;
        if (allow_integrator && pick < 0.25) {
            g = integrator_mode();
        } else if (allow_undamped && pick < 0.45) {
            g = undamped_mode(rng.log_uniform(1e-2, 1e2));
        } else if (pick < 0.75) {
            g = damped_mode(rng.log_uniform(1e-2, 1e2), rng.log_uniform(1e-2, 1.0));
        } else {
            g = lag_mode(rng.log_uniform(1e-2, 1e2));
        }
        P = P + TransferMatrix::dyad(a, k * g);
    }
    if (sni) {
        // Isotropic lag keeps the strict frequency inequality full rank.
        double k = rng.uniform(0.3, 1.0) * spec.scale;
        double tau = rng.log_uniform(0.05, 20.0);
        TransferMatrix iso(spec.n);
        for (int i = 0; i < spec.n; ++i) iso.at(i, i) = k * lag_mode(tau);
        P = P + iso;
    }
    if (!strictly_proper && kind != UncertaintyKind::NI_NoDoubleOriginPole &&
        rng.uniform() < 0.6) {
        Eigen::MatrixXd F = feedthrough_psd ? random_symmetric(rng, spec.n, 0.0, 0.4 * spec.scale)
                                            : random_symmetric(rng, spec.n, -0.4 * spec.scale,
                                                               0.4 * spec.scale);
        P = P + TransferMatrix::constant(F);
    }

    // Rescale so the class dc bound holds with headroom.
    if (spec.cls.gamma) {
        GainData g = gains(P);
        if (g.static_gain) {
            double lmax = symmetric_lambda_max(*g.static_gain);
            double target = 0.8 * *spec.cls.gamma;
            if (lmax > target) P = (target / lmax) * P;
        }
    }
    return P;
}

}  // namespace

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
    Rng r(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
    return r.next();
}

TransferMatrix sample_plant(const SampleSpec& spec) {
    validate_class(spec.cls);
    if (spec.n < 1 || spec.n > 4) throw Error("sampler supports dimensions 1..4");
    if (spec.modes < 1 || spec.modes > 8) throw Error("sampler supports 1..8 modes");
    for (int attempt = 0; attempt < 100; ++attempt) {
        Rng rng(split_seed(spec.seed, static_cast<std::uint64_t>(attempt)));
        TransferMatrix P = build_candidate(spec, rng);
        if (class_membership(P, spec.cls).in_class) return P;
    }
    throw SamplerExhausted("no in-class sample after 100 attempts for " +
                           kind_name(spec.cls.kind));
}

}  // namespace nicert
