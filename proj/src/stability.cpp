#include "nicert/stability.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "nicert/classify.hpp"
#include "nicert/errors.hpp"
#include "nicert/spectral.hpp"
#include "nicert/state_space.hpp"
#include "nicert/tolerances.hpp"

namespace nicert {

namespace {

struct LoopGains {
    Eigen::MatrixXd p0, pinf, c0, cinf;
};

void require_lemma2_hypotheses(const TransferMatrix& P, const TransferMatrix& C) {
    NIClassification cp = classify_ni(P);
    if (cp.verdict == NIVerdict::NotNI) {
        throw PreconditionViolated("P is not NI (defect " +
                                   std::to_string(cp.witness ? cp.witness->defect : 0.0) +
                                   " at omega " +
                                   std::to_string(cp.witness ? cp.witness->omega0 : 0.0) + ")");
    }
    if (gains(P).pole_at_origin()) {
        throw PreconditionViolated("P has a pole at the origin");
    }
    NIClassification cc = classify_ni(C);
    if (cc.verdict != NIVerdict::SNI) {
        throw PreconditionViolated("C is not SNI (margin " +
                                   std::to_string(cc.strictness_margin) + " at omega " +
                                   std::to_string(cc.strictness_omega) + ")");
    }
}

LoopGains loop_gains(const TransferMatrix& P, const TransferMatrix& C) {
    GainData gp = gains(P), gc = gains(C);
    if (!gp.static_gain || !gc.static_gain) throw PreconditionViolated("static gain undefined");
    return {*gp.static_gain, gp.instantaneous_gain, *gc.static_gain, gc.instantaneous_gain};
}

// Shared skeleton: well-posedness plus two strict lambda_max conditions.
StabilityVerdict gain_condition_verdict(const Eigen::MatrixXd& wellposed,
                                        const Eigen::MatrixXd& cond_b,
                                        const Eigen::MatrixXd& cond_c) {
    StabilityVerdict v;
    double smin = sigma_min(wellposed.cast<std::complex<double>>());
    double smax = sigma_max(wellposed.cast<std::complex<double>>());
    v.condition_values["a_sigma_min"] = smin;
    if (smin <= tol::det_wellposed * std::max(1.0, smax)) {
        v.status = StabilityStatus::IllPosed;
        v.failed_condition = "a";
        return v;
    }
    double lb = spectral(cond_b).lambda_max;
    v.condition_values["b_lambda_max"] = lb;
    if (std::abs(lb) <= tol::eig_margin) v.boundary = true;
    if (lb >= 0.0) {
        v.status = StabilityStatus::Unstable;
        v.failed_condition = "b";
        return v;
    }
    double lc = spectral(cond_c).lambda_max;
    v.condition_values["c_lambda_max"] = lc;
    if (std::abs(lc) <= tol::eig_margin) v.boundary = true;
    if (lc >= 0.0) {
        v.status = StabilityStatus::Unstable;
        v.failed_condition = "c";
        return v;
    }
    v.status = StabilityStatus::Stable;
    return v;
}

StabilityVerdict lemma2_conditions(const LoopGains& g) {
    const int n = static_cast<int>(g.p0.rows());
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd W = I - g.pinf * g.cinf;
    Eigen::MatrixXd b = W.inverse() * (g.pinf * g.c0 - I);
    Eigen::MatrixXd c = (I - g.c0 * g.pinf).inverse() * (g.c0 * g.p0 - I);
    return gain_condition_verdict(W, b, c);
}

StabilityVerdict lemma3_conditions(const LoopGains& g) {
    const int n = static_cast<int>(g.p0.rows());
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd W = I - g.pinf * g.cinf;
    Eigen::MatrixXd b = (g.p0 * g.cinf - I) * W.inverse();
    Eigen::MatrixXd c = (g.c0 * g.p0 - I) * (I - g.cinf * g.p0).inverse();
    return gain_condition_verdict(W, b, c);
}

}  // namespace

PsiParameter default_psi(const Eigen::MatrixXd& p_inf) {
    // Psi = -c I with c chosen so lambda_max(P(inf) Psi) = c * (-lambda_min(P(inf))) < 1
    // for any symmetric P(inf).
    double lmin = symmetric_lambda_min(p_inf);
    double c = 0.5 / (1.0 + std::max(0.0, -lmin));
    PsiParameter psi;
    psi.psi = -c * Eigen::MatrixXd::Identity(p_inf.rows(), p_inf.cols());
    return psi;
}

StabilityVerdict oracle_stability(const TransferMatrix& P, const TransferMatrix& C) {
    StabilityVerdict v;
    StateSpaceRealization cl;
    try {
        cl = close_loop(P, C);
    } catch (const IllPosedError&) {
        v.status = StabilityStatus::IllPosed;
        v.failed_condition = "well-posedness";
        return v;
    }
    Eigen::VectorXcd eigs = cl.pole_eigenvalues();
    double max_re = -std::numeric_limits<double>::infinity();
    std::complex<double> worst(0.0, 0.0);
    for (int i = 0; i < eigs.size(); ++i) {
        if (eigs(i).real() > max_re) {
            max_re = eigs(i).real();
            worst = eigs(i);
        }
    }
    v.condition_values["max_re_pole"] = eigs.size() ? max_re : -1.0;
    if (eigs.size() == 0 || max_re < -tol::stability_re) {
        v.status = StabilityStatus::Stable;
    } else {
        v.status = StabilityStatus::Unstable;
        v.offending_pole = worst;
    }
    return v;
}

StabilityVerdict lemma2_check(const TransferMatrix& P, const TransferMatrix& C) {
    require_lemma2_hypotheses(P, C);
    return lemma2_conditions(loop_gains(P, C));
}

StabilityVerdict lemma3_check(const TransferMatrix& P, const TransferMatrix& C) {
    require_lemma2_hypotheses(P, C);
    return lemma3_conditions(loop_gains(P, C));
}

StabilityVerdict lemma4_check(const TransferMatrix& P, const TransferMatrix& C,
                              std::optional<PsiParameter> psi_in) {
    NIClassification cp = classify_ni(P);
    if (cp.verdict == NIVerdict::NotNI) throw PreconditionViolated("P is not NI");
    NIClassification cc = classify_ni(C);
    if (cc.verdict != NIVerdict::SNI) throw PreconditionViolated("C is not SNI");

    GainData gp = gains(P), gc = gains(C);
    const int n = P.dim();
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd& pinf = gp.instantaneous_gain;

    PsiParameter psi = psi_in ? *psi_in : default_psi(pinf);
    if (symmetric_lambda_max(psi.psi) >= 0.0) throw PsiInvalid("Psi must be negative definite");
    if ((psi.psi - psi.psi.transpose()).norm() > 1e-9 * (1.0 + psi.psi.norm())) {
        throw PsiInvalid("Psi must be symmetric");
    }
    if (spectral(Eigen::MatrixXd(pinf * psi.psi)).lambda_max >= 1.0) {
        throw PsiInvalid("lambda_max(P(inf) Psi) must be below 1");
    }

    StabilityVerdict v;
    // (a) well-posedness, (b) as in the origin-free test.
    Eigen::MatrixXd W = I - pinf * gc.instantaneous_gain;
    double smin = sigma_min(W.cast<std::complex<double>>());
    v.condition_values["a_sigma_min"] = smin;
    if (smin <= tol::det_wellposed * std::max(1.0, sigma_max(W.cast<std::complex<double>>()))) {
        v.status = StabilityStatus::IllPosed;
        v.failed_condition = "a";
        return v;
    }
    double lb = spectral(Eigen::MatrixXd(W.inverse() * (pinf * *gc.static_gain - I))).lambda_max;
    v.condition_values["b_lambda_max"] = lb;
    if (std::abs(lb) <= tol::eig_margin) v.boundary = true;
    if (lb >= 0.0) {
        v.status = StabilityStatus::Unstable;
        v.failed_condition = "b";
        return v;
    }

    // (c) exact rational limit at s = 0 of
    //     (I - Psi P(inf)) (I - C P(inf))^{-1} (C P - I) (I - Psi P)^{-1}.
    TransferMatrix expr = TransferMatrix::constant(I - psi.psi * pinf) *
                          (TransferMatrix::identity(n) - C * pinf).inverse() *
                          (C * P - TransferMatrix::identity(n)) *
                          (TransferMatrix::identity(n) - TransferMatrix::constant(psi.psi) * P)
                              .inverse();
    Eigen::MatrixXcd L = expr.eval({0.0, 0.0});
    if (L.imag().norm() > 1e-8 * (1.0 + L.norm())) throw Error("limit at s=0 is not real");
    double lc = spectral(Eigen::MatrixXd(L.real())).lambda_max;
    v.condition_values["c_lambda_max"] = lc;
    if (std::abs(lc) <= tol::eig_margin) v.boundary = true;
    if (lc >= 0.0) {
        v.status = StabilityStatus::Unstable;
        v.failed_condition = "c";
        return v;
    }
    v.status = StabilityStatus::Stable;
    return v;
}

HomotopyReport theorem1_check(const TransferMatrix& P, const TransferMatrix& C) {
    require_lemma2_hypotheses(P, C);
    LoopGains g = loop_gains(P, C);
    const int n = static_cast<int>(g.p0.rows());
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);

    HomotopyReport rep;
    const int kGrid = 101;
    rep.tau_grid.resize(kGrid);
    rep.det_b.resize(kGrid);
    rep.det_c.resize(kGrid);

    auto det3_b = [&](double tau) -> std::array<double, 3> {
        return {(tau * g.pinf * g.cinf - I).determinant(),
                (tau * g.p0 * g.cinf - I).determinant(),
                (tau * g.p0 * g.c0 - I).determinant()};
    };
    auto det3_c = [&](double tau) -> std::array<double, 3> {
        return {(tau * g.pinf * g.cinf - I).determinant(),
                (tau * g.pinf * g.c0 - I).determinant(),
                (tau * g.p0 * g.c0 - I).determinant()};
    };

    bool a_ok = true, b_ok = true, c_ok = true;
    for (int i = 0; i < kGrid; ++i) {
        double tau = static_cast<double>(i) / (kGrid - 1);
        rep.tau_grid[i] = tau;
        rep.det_b[i] = det3_b(tau);
        rep.det_c[i] = det3_c(tau);
        LoopGains sg{tau * g.p0, tau * g.pinf, g.c0, g.cinf};
        if (lemma2_conditions(sg).status != StabilityStatus::Stable) a_ok = false;
    }

    // Refine wherever a determinant magnitude dips low or changes sign.
    auto family_nonzero = [&](auto det3, int comp) {
        double prev_tau = 0.0;
        double prev = det3(0.0)[comp];
        bool ok = std::abs(prev) > 1e-9;
        for (int i = 1; i < kGrid && ok; ++i) {
            double tau = static_cast<double>(i) / (kGrid - 1);
            double cur = det3(tau)[comp];
            if (std::abs(cur) <= 1e-9) ok = false;
            bool suspicious = (cur > 0) != (prev > 0) ||
                              std::min(std::abs(cur), std::abs(prev)) < 1e-6;
            if (ok && suspicious) {
                double lo = prev_tau, hi = tau, flo = prev;
                for (int it = 0; it < 60; ++it) {
                    double mid = 0.5 * (lo + hi);
                    double fm = det3(mid)[comp];
                    ++rep.refinements;
                    if (std::abs(fm) <= 1e-9) {
                        ok = false;
                        break;
                    }
                    if ((fm > 0) != (flo > 0)) {
                        hi = mid;
                    } else {
                        lo = mid;
                        flo = fm;
                    }
                }
                if ((cur > 0) != (prev > 0)) ok = false;  // a sign change is a crossing
            }
            prev = cur;
            prev_tau = tau;
        }
        return ok;
    };

    for (int comp = 0; comp < 3; ++comp) {
        if (!family_nonzero(det3_b, comp)) b_ok = false;
        if (!family_nonzero(det3_c, comp)) c_ok = false;
    }

    rep.statement_a = a_ok;
    rep.statement_b = b_ok;
    rep.statement_c = c_ok;
    rep.equivalent_verdict = (a_ok == b_ok) && (b_ok == c_ok);
    return rep;
}

StabilityVerdict theorem2_check(const TransferMatrix& P, const TransferMatrix& C) {
    require_lemma2_hypotheses(P, C);
    LoopGains g = loop_gains(P, C);
    bool pinf_psd = symmetric_lambda_min(g.pinf) >= -tol::eig_margin;
    bool cinf_psd = symmetric_lambda_min(g.cinf) >= -tol::eig_margin;
    if (!pinf_psd && !cinf_psd) {
        throw PreconditionViolated("neither P(inf) nor C(inf) is positive semidefinite");
    }
    StabilityVerdict v;
    double l00 = spectral(Eigen::MatrixXd(g.p0 * g.c0)).lambda_max;
    double linf = spectral(Eigen::MatrixXd(g.pinf * g.cinf)).lambda_max;
    v.condition_values["lambda_max_p0c0"] = l00;
    v.condition_values["lambda_max_pinf_cinf"] = linf;
    if (std::abs(l00 - 1.0) <= tol::eig_margin || std::abs(linf - 1.0) <= tol::eig_margin) {
        v.boundary = true;
    }
    if (l00 < 1.0 && linf < 1.0) {
        v.status = StabilityStatus::Stable;
    } else {
        v.status = StabilityStatus::Inconclusive;
        v.failed_condition = l00 >= 1.0 ? "lambda_max_p0c0" : "lambda_max_pinf_cinf";
    }
    return v;
}

}  // namespace nicert
