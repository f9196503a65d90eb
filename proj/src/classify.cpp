#include "nicert/classify.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>

#include "nicert/errors.hpp"
#include "nicert/spectral.hpp"
#include "nicert/tolerances.hpp"

namespace nicert {

namespace {

const std::complex<double> kJ(0.0, 1.0);

Eigen::MatrixXcd hermitian_part(const Eigen::MatrixXcd& M) { return 0.5 * (M + M.adjoint()); }

// j(G(jw) - G(jw)^*), symmetrized.
Eigen::MatrixXcd ni_form(const Eigen::MatrixXcd& Gjw) {
    return hermitian_part(kJ * (Gjw - Gjw.adjoint()));
}

// G(jw) + G(jw)^*.
Eigen::MatrixXcd pr_form(const Eigen::MatrixXcd& Gjw) {
    return hermitian_part(Gjw + Gjw.adjoint());
}

struct PointEval {
    double omega = 0.0;
    double lam = 0.0;    // smallest eigenvalue of the form
    double scale = 1.0;  // max(1, ||G(jw)||_F)
    bool valid = false;
};

using FormFn = Eigen::MatrixXcd (*)(const Eigen::MatrixXcd&);

PointEval eval_form(const TransferMatrix& G, double omega, FormFn form) {
    PointEval p;
    p.omega = omega;
    try {
        Eigen::MatrixXcd Gjw = G.eval({0.0, omega});
        p.scale = std::max(1.0, Gjw.norm());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(form(Gjw), Eigen::EigenvaluesOnly);
        p.lam = es.eigenvalues().minCoeff();
        p.valid = true;
    } catch (const EvalAtPole&) {
        p.valid = false;  // excluded point: jw is a pole
    }
    return p;
}

std::vector<double> build_grid(const ClassifyOptions& opt, const std::vector<double>& axis_omegas) {
    std::vector<double> grid;
    grid.reserve(static_cast<size_t>(opt.base_points) + 24 * axis_omegas.size());
    double lmin = std::log10(opt.omega_min), lmax = std::log10(opt.omega_max);
    for (int i = 0; i < opt.base_points; ++i) {
        double t = lmin + (lmax - lmin) * i / (opt.base_points - 1);
        grid.push_back(std::pow(10.0, t));
    }
    // Extra resolution around imaginary-axis poles.
    for (double w : axis_omegas) {
        if (w <= 0.0) continue;
        for (double d : {1e-2, 1e-3, 1e-4}) {
            grid.push_back(w * (1.0 + d));
            if (w * (1.0 - d) > 0.0) grid.push_back(w * (1.0 - d));
        }
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

struct ScanResult {
    // Violation track: lam / max(1, ||G||); decides the membership clause.
    double min_normalized = 0.0;
    double raw_at_min = 0.0;
    double argmin = 0.0;
    // Strictness track: lam / ||G||, a phase-margin-like relative quantity
    // that stays meaningful where the response rolls off.
    double strict_min = 0.0;
    double strict_argmin = 0.0;
    int evaluated = 0;
    int refined = 0;
};

double strict_ratio(const PointEval& p) {
    return p.lam / std::max(p.scale_raw, 1e-300);
}

// Scan lam_min(form(G(jw))) over the grid, refine sign changes of the
// violation indicator by log-bisection, and polish the track minimizers by
// golden section.
ScanResult scan_form(const TransferMatrix& G, const ClassifyOptions& opt, FormFn form,
                     const std::vector<double>& axis_omegas) {
    std::vector<double> grid = build_grid(opt, axis_omegas);
    ScanResult res;
    std::vector<PointEval> pts;
    pts.reserve(grid.size());
    for (double w : grid) pts.push_back(eval_form(G, w, form));

    bool first = true;
    size_t argmin_idx = 0, strict_idx = 0;
    for (size_t i = 0; i < pts.size(); ++i) {
        if (!pts[i].valid) continue;
        ++res.evaluated;
        double mu = pts[i].lam / pts[i].scale;
        if (first || mu < res.min_normalized) {
            res.min_normalized = mu;
            res.raw_at_min = pts[i].lam;
            res.argmin = pts[i].omega;
            argmin_idx = i;
        }
        if (first || strict_ratio(pts[i]) < res.strict_min) {
            res.strict_min = strict_ratio(pts[i]);
            res.strict_argmin = pts[i].omega;
            strict_idx = i;
        }
        first = false;
    }
    if (first) return res;  // nothing evaluable (should not happen on a real grid)

    auto consider = [&](const PointEval& p) {
        if (!p.valid) return;
        ++res.refined;
        double mu = p.lam / p.scale;
        if (mu < res.min_normalized) {
            res.min_normalized = mu;
            res.raw_at_min = p.lam;
            res.argmin = p.omega;
        }
        if (strict_ratio(p) < res.strict_min) {
            res.strict_min = strict_ratio(p);
            res.strict_argmin = p.omega;
        }
    };

    // Bisection where the violation indicator changes sign.
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        if (!pts[i].valid || !pts[i + 1].valid) continue;
        double fi = pts[i].lam + opt.tol * pts[i].scale;
        double fj = pts[i + 1].lam + opt.tol * pts[i + 1].scale;
        if (fi == 0.0 || fj == 0.0 || (fi > 0) == (fj > 0)) continue;
        double lo = std::log(pts[i].omega), hi = std::log(pts[i + 1].omega);
        for (int it = 0; it < 40; ++it) {
            double mid = 0.5 * (lo + hi);
            PointEval pm = eval_form(G, std::exp(mid), form);
            consider(pm);
            if (!pm.valid) break;
            double fm = pm.lam + opt.tol * pm.scale;
            if ((fm > 0) == (fi > 0)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }

    // Golden-section polish of a track minimizer in log-frequency.
    auto polish = [&](size_t center, auto key) {
        size_t ilo = center > 0 ? center - 1 : center;
        size_t ihi = center + 1 < pts.size() ? center + 1 : center;
        if (!pts[ilo].valid || !pts[ihi].valid) return;
        double a = std::log(pts[ilo].omega);
        double b = std::log(pts[ihi].omega);
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        PointEval p1 = eval_form(G, std::exp(x1), form);
        PointEval p2 = eval_form(G, std::exp(x2), form);
        consider(p1);
        consider(p2);
        for (int it = 0; it < 90 && p1.valid && p2.valid; ++it) {
            if (key(p1) < key(p2)) {
                b = x2;
                x2 = x1;
                p2 = p1;
                x1 = b - gr * (b - a);
                p1 = eval_form(G, std::exp(x1), form);
                consider(p1);
            } else {
                a = x1;
                x1 = x2;
                p1 = p2;
                x2 = a + gr * (b - a);
                p2 = eval_form(G, std::exp(x2), form);
                consider(p2);
            }
        }
    };
    polish(argmin_idx, [](const PointEval& p) { return p.lam / p.scale; });
    if (strict_idx != argmin_idx) polish(strict_idx, strict_ratio);
    return res;
}

Eigen::VectorXcd min_eigenvector(const Eigen::MatrixXcd& H) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    return es.eigenvectors().col(0);
}

double skew_norm(const Eigen::MatrixXcd& M) { return (M - hermitian_part(M)).norm(); }

// Defect of an axis-pole residue condition: negative when violated.
double axis_residue_defect(const PoleData& pd) {
    if (pd.multiplicity > 1) return -static_cast<double>(pd.multiplicity);
    Eigen::MatrixXcd jr = kJ * (*pd.residue);
    double sc = std::max(1.0, jr.norm());
    return hermitian_lambda_min(jr) / sc - skew_norm(jr) / sc;
}

// Defect of the origin-pole limit conditions: negative when violated.
double origin_defect(const TransferMatrix& G, int order) {
    if (order > 2) return -static_cast<double>(order);
    Eigen::MatrixXd L2 = scaled_origin_limit(G, 2);
    Eigen::MatrixXd L3 = scaled_origin_limit(G, 3);
    double sc = std::max(1.0, L2.norm());
    return symmetric_lambda_min(0.5 * (L2 + L2.transpose())) / sc -
           (L2 - L2.transpose()).norm() / sc - L3.norm() / std::max(1.0, L3.norm() + sc);
}

}  // namespace

Eigen::VectorXcd normalize_phase(Eigen::VectorXcd x) {
    double nrm = x.norm();
    if (nrm > 0.0) x /= nrm;
    for (int i = 0; i < x.size(); ++i) {
        if (std::abs(x(i)) > 1e-7) {
            x *= std::conj(x(i)) / std::abs(x(i));
            break;
        }
    }
    return x;
}

NIClassification classify_ni(const TransferMatrix& G, const ClassifyOptions& opt) {
    if (!G.is_proper()) throw Error("classify_ni requires a proper transfer matrix");
    NIClassification out;
    std::vector<PoleData> pls = poles(G);

    std::vector<double> axis_omegas;
    for (const auto& p : pls) {
        if (is_axis_pole(p.location)) {
            out.marginal_poles.push_back(p);
            axis_omegas.push_back(std::abs(p.location.imag()));
        }
    }
    out.stable = !has_axis_pole(pls) && !has_rhp_pole(pls);

    // Frequency-inequality scan (also feeds strictness data downstream).
    ScanResult scan = scan_form(G, opt, ni_form, axis_omegas);
    out.strictness_margin = scan.min_normalized;
    out.strictness_omega = scan.argmin;
    out.grid = {opt.omega_min, opt.omega_max, scan.evaluated, scan.refined, opt.tol};
    if (scan.evaluated > 0) {
        try {
            Eigen::MatrixXcd Gw = G.eval({0.0, scan.argmin});
            out.strictness_direction = normalize_phase(min_eigenvector(ni_form(Gw)));
        } catch (const EvalAtPole&) {
        }
    }

    // Clause (i): no open-RHP poles.
    for (const auto& p : pls) {
        if (is_rhp_pole(p.location)) {
            out.verdict = NIVerdict::NotNI;
            out.rhp_pole = p.location;
            NIWitness w;
            w.clause = NIClause::RHPPole;
            w.omega0 = p.location.imag();
            w.defect = p.location.real();
            w.direction = Eigen::VectorXcd::Zero(G.dim());
            out.witness = w;
            return out;
        }
    }

    // Clause (ii): the frequency inequality on the grid.
    if (scan.min_normalized < -opt.tol) {
        out.verdict = NIVerdict::NotNI;
        NIWitness w;
        w.clause = NIClause::FrequencyInequality;
        w.omega0 = scan.argmin;
        w.direction = out.strictness_direction;
        w.defect = scan.raw_at_min;
        out.witness = w;
        return out;
    }

    // Clause (iii): nonzero axis poles must be simple with PSD j-residue.
    for (const auto& p : out.marginal_poles) {
        double w0 = p.location.imag();
        if (std::abs(p.location) < 10.0 * tol::axis_pole) continue;  // origin handled below
        if (w0 < 0.0) continue;  // conjugate reported once
        double defect = p.multiplicity > 1 ? -static_cast<double>(p.multiplicity)
                                           : axis_residue_defect(p);
        if (defect < -opt.tol) {
            out.verdict = NIVerdict::NotNI;
            NIWitness w;
            w.clause = NIClause::AxisResidue;
            w.omega0 = w0;
            w.defect = defect;
            w.direction = p.residue ? normalize_phase(min_eigenvector(hermitian_part(kJ * *p.residue)))
                                    : Eigen::VectorXcd::Zero(G.dim());
            out.witness = w;
            return out;
        }
    }

    // Clause (iv): origin-pole limit conditions.
    for (const auto& p : out.marginal_poles) {
        if (std::abs(p.location) >= 10.0 * tol::axis_pole) continue;
        double defect = origin_defect(G, p.multiplicity);
        if (defect < -opt.tol) {
            out.verdict = NIVerdict::NotNI;
            NIWitness w;
            w.clause = NIClause::OriginLimit;
            w.omega0 = 0.0;
            w.at_origin = true;
            w.defect = defect;
            if (p.multiplicity <= 2) {
                Eigen::MatrixXd L2 = scaled_origin_limit(G, 2);
                w.direction = normalize_phase(
                    min_eigenvector((0.5 * (L2 + L2.transpose())).cast<std::complex<double>>()));
            } else {
                w.direction = Eigen::VectorXcd::Zero(G.dim());
            }
            out.witness = w;
            return out;
        }
    }

    out.verdict = (out.stable && scan.min_normalized > opt.tol) ? NIVerdict::SNI : NIVerdict::NI;
    return out;
}

double replay_witness(const TransferMatrix& G, const NIWitness& w) {
    switch (w.clause) {
        case NIClause::RHPPole: {
            double best = -1e300;
            for (const auto& p : poles(G)) best = std::max(best, p.location.real());
            return best;
        }
        case NIClause::FrequencyInequality: {
            Eigen::MatrixXcd Gw = G.eval({0.0, w.omega0});
            std::complex<double> q = w.direction.adjoint() * ni_form(Gw) * w.direction;
            return q.real();
        }
        case NIClause::AxisResidue: {
            for (const auto& p : poles(G)) {
                if (!is_axis_pole(p.location)) continue;
                if (std::abs(p.location.imag() - w.omega0) <= 1e-6 * (1.0 + w.omega0)) {
                    return p.multiplicity > 1 ? -static_cast<double>(p.multiplicity)
                                              : axis_residue_defect(p);
                }
            }
            throw Error("witness replay: axis pole not found");
        }
        case NIClause::OriginLimit: {
            for (const auto& p : poles(G)) {
                if (std::abs(p.location) < 10.0 * tol::axis_pole) {
                    return origin_defect(G, p.multiplicity);
                }
            }
            throw Error("witness replay: origin pole not found");
        }
    }
    throw Error("witness replay: unknown clause");
}

PassivityReport is_positive_real(const TransferMatrix& G, const ClassifyOptions& opt) {
    std::vector<PoleData> pls = poles(G);
    std::vector<double> axis_omegas;
    for (const auto& p : pls) {
        if (is_rhp_pole(p.location)) {
            throw NotStableError("positive-real test on a system with an open-RHP pole");
        }
        if (is_axis_pole(p.location)) axis_omegas.push_back(std::abs(p.location.imag()));
    }

    PassivityReport rep;
    // Axis poles: simple with Hermitian PSD residue, else fail.
    for (const auto& p : pls) {
        if (!is_axis_pole(p.location)) continue;
        if (p.multiplicity > 1 || !p.residue) {
            rep.passive = false;
            rep.witness_omega = p.location.imag();
            rep.min_value = -static_cast<double>(p.multiplicity);
            return rep;
        }
        const Eigen::MatrixXcd& R = *p.residue;
        double sc = std::max(1.0, R.norm());
        if (hermitian_lambda_min(R) < -opt.tol * sc || skew_norm(R) > 1e-7 * sc) {
            rep.passive = false;
            rep.witness_omega = p.location.imag();
            rep.min_value = hermitian_lambda_min(R) / sc;
            return rep;
        }
    }

    ScanResult scan = scan_form(G, opt, pr_form, axis_omegas);
    double minv = scan.min_normalized;
    double argmin = scan.argmin;
    // The definition includes w = 0 and the limit at infinity.
    GainData g = gains(G);
    if (g.static_gain) {
        double v = symmetric_lambda_min(0.5 * (*g.static_gain + g.static_gain->transpose())) /
                   std::max(1.0, g.static_gain->norm());
        if (v < minv) {
            minv = v;
            argmin = 0.0;
        }
    }
    {
        const Eigen::MatrixXd& D = g.instantaneous_gain;
        double v = symmetric_lambda_min(0.5 * (D + D.transpose())) / std::max(1.0, D.norm());
        if (v < minv) {
            minv = v;
            argmin = std::numeric_limits<double>::infinity();
        }
    }
    rep.min_value = minv;
    rep.passive = minv >= -opt.tol;
    if (!rep.passive) rep.witness_omega = argmin;
    return rep;
}

OutputStrictPassivityReport is_output_strictly_passive(const TransferMatrix& G,
                                                       const ClassifyOptions& opt) {
    std::vector<PoleData> pls = poles(G);
    for (const auto& p : pls) {
        if (p.location.real() > -tol::axis_pole * (1.0 + std::abs(p.location))) {
            throw NotStableError("output strict passivity requires RH-infinity membership");
        }
    }

    OutputStrictPassivityReport rep;
    double eps_star = std::numeric_limits<double>::infinity();
    double argmin = 0.0;

    auto consider = [&](const Eigen::MatrixXcd& Gw, double omega) {
        Eigen::MatrixXcd A = pr_form(Gw);
        Eigen::MatrixXcd B = Gw.adjoint() * Gw;
        B = hermitian_part(B);
        double sc = std::max(1.0, Gw.norm());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> esB(B);
        double bmax = esB.eigenvalues().maxCoeff();
        double cut = 1e-12 * std::max(bmax, 1.0);
        std::vector<int> range_idx, ker_idx;
        for (int i = 0; i < esB.eigenvalues().size(); ++i) {
            (esB.eigenvalues()(i) > cut ? range_idx : ker_idx).push_back(i);
        }
        // On ker(B) the inequality degenerates to A >= 0.
        for (int i : ker_idx) {
            Eigen::VectorXcd v = esB.eigenvectors().col(i);
            double q = (v.adjoint() * A * v).real()(0, 0);
            if (q < -opt.tol * sc) {
                eps_star = -std::numeric_limits<double>::infinity();
                argmin = omega;
            }
        }
        if (range_idx.empty()) return;
        Eigen::MatrixXcd Vr(Gw.rows(), static_cast<int>(range_idx.size()));
        for (size_t k = 0; k < range_idx.size(); ++k) Vr.col(static_cast<int>(k)) = esB.eigenvectors().col(range_idx[k]);
        Eigen::MatrixXcd Ar = Vr.adjoint() * A * Vr;
        Eigen::MatrixXcd Br = Vr.adjoint() * B * Vr;
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> ges(Ar, Br,
                                                                       Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
        double e = ges.eigenvalues().minCoeff();
        if (e < eps_star) {
            eps_star = e;
            argmin = omega;
        }
    };

    for (double w : build_grid(opt, {})) {
        try {
            consider(G.eval({0.0, w}), w);
        } catch (const EvalAtPole&) {
        }
    }
    GainData g = gains(G);
    if (g.static_gain) consider(g.static_gain->cast<std::complex<double>>(), 0.0);
    consider(g.instantaneous_gain.cast<std::complex<double>>(),
             std::numeric_limits<double>::infinity());

    rep.epsilon_star = eps_star;
    rep.output_strictly_passive = eps_star > opt.tol;
    if (!rep.output_strictly_passive) rep.witness_omega = argmin;
    return rep;
}

}  // namespace nicert
