#include "nicert/converse.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "nicert/classify.hpp"
#include "nicert/errors.hpp"
#include "nicert/sampler.hpp"
#include "nicert/spectral.hpp"
#include "nicert/stability.hpp"
#include "nicert/state_space.hpp"
#include "nicert/tolerances.hpp"

namespace nicert {

namespace {

constexpr double kThetaSnap = 1e-10;
const std::complex<double> kJ(0.0, 1.0);

void require_stable_controller(const TransferMatrix& C) {
    for (const auto& p : poles(C)) {
        if (p.location.real() > -tol::axis_pole * (1.0 + std::abs(p.location))) {
            throw ControllerUnstable("controller has a pole with Re >= 0");
        }
    }
}

Eigen::MatrixXd symmetrized_static_gain(const TransferMatrix& C) {
    GainData g = gains(C);
    if (!g.static_gain) throw PreconditionViolated("controller static gain undefined");
    return 0.5 * (*g.static_gain + g.static_gain->transpose());
}

Eigen::MatrixXd symmetrized_inst_gain(const TransferMatrix& C) {
    GainData g = gains(C);
    return 0.5 * (g.instantaneous_gain + g.instantaneous_gain.transpose());
}

// Descending eigendecomposition of a symmetric matrix: M = U diag(D) U^T
// with D(0) the largest eigenvalue.
void eig_descending(const Eigen::MatrixXd& M, Eigen::MatrixXd& U, Eigen::VectorXd& D) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    const int n = static_cast<int>(M.rows());
    U.resize(n, n);
    D.resize(n);
    for (int i = 0; i < n; ++i) {
        U.col(i) = es.eigenvectors().col(n - 1 - i);
        D(i) = es.eigenvalues()(n - 1 - i);
    }
}

// P(s) = f(s) p(s) f(-s)^T with f(s) = alpha s + beta.
TransferMatrix f_outer(const Eigen::VectorXd& alpha, const Eigen::VectorXd& beta,
                       const RationalFunction& p) {
    const int n = static_cast<int>(alpha.size());
    TransferMatrix P(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            // (beta_i + alpha_i s)(beta_j - alpha_j s)
            Polynomial cross({beta(i) * beta(j), alpha(i) * beta(j) - beta(i) * alpha(j),
                              -alpha(i) * alpha(j)});
            P.at(i, j) = p * RationalFunction(cross, Polynomial::one());
        }
    }
    return P;
}

struct ConditionRow {
    std::string label;
    bool pass;
    ViolationKind kind;   // violation to report when this row fails
    double margin;        // signed distance from the boundary
};

// Evaluates the controller-side conditions of the class in theorem order.
std::vector<ConditionRow> controller_conditions(const TransferMatrix& C,
                                                const UncertaintyClass& cls,
                                                const NIClassification& cc) {
    std::vector<ConditionRow> rows;
    const bool needs_sni = !kind_is_sni(cls.kind);  // marginally-stable plant sets need SNI C
    const UncertaintyKind k = cls.kind;

    if (needs_sni) {
        rows.push_back({"controller-sni", cc.verdict == NIVerdict::SNI, ViolationKind::NotSNI,
                        cc.strictness_margin});
    } else {
        rows.push_back({"controller-ni", cc.verdict != NIVerdict::NotNI, ViolationKind::NotNI,
                        cc.strictness_margin});
    }

    const bool membership_ok = rows[0].pass;
    Eigen::MatrixXd C0, Cinf;
    if (membership_ok) {
        C0 = symmetrized_static_gain(C);
        Cinf = symmetrized_inst_gain(C);
    }

    auto inst_nonneg = [&] {
        double lmin = membership_ok ? symmetric_lambda_min(Cinf) : 0.0;
        rows.push_back({"inst-gain-psd", membership_ok && lmin >= -tol::eig_margin,
                        ViolationKind::InstGainSign, lmin});
    };
    auto dc_bound = [&](double bound, bool strict, const std::string& label) {
        double lmax = membership_ok ? symmetric_lambda_max(C0) : 0.0;
        bool ok = strict ? lmax < bound : lmax <= bound + tol::eig_margin;
        rows.push_back({label, membership_ok && ok, ViolationKind::StaticGainBound, lmax - bound});
    };

    switch (k) {
        case UncertaintyKind::StrictlyProperNI:
        case UncertaintyKind::NI_NoDoubleOriginPole:
            dc_bound(0.0, /*strict=*/true, "static-gain-negative-definite");
            break;
        case UncertaintyKind::N0_DcBounded:
        case UncertaintyKind::N0_DcBoundedNonneg:
            inst_nonneg();
            dc_bound(1.0 / *cls.gamma, true, "static-gain-below-inverse-gamma");
            break;
        case UncertaintyKind::N0_InstNonnegDcStrict:
            dc_bound(1.0 / *cls.gamma, false, "static-gain-at-most-inverse-gamma");
            break;
        case UncertaintyKind::SNI_InstNonneg:
            dc_bound(0.0, false, "static-gain-negative-semidefinite");
            break;
        case UncertaintyKind::SNI_InstNonnegDcBounded:
            dc_bound(1.0 / *cls.gamma, true, "static-gain-below-inverse-gamma");
            break;
        case UncertaintyKind::SNI_DcBounded:
        case UncertaintyKind::SNI_DcBoundedNonneg:
            inst_nonneg();
            dc_bound(1.0 / *cls.gamma, true, "static-gain-below-inverse-gamma");
            break;
    }
    return rows;
}

struct CatalogInterval {
    char name;
    double lo;
    double hi;  // +inf when unbounded
};

RationalFunction catalog_p(char name, double param, double omega0, double r, double theta) {
    const double w2 = omega0 * omega0;
    switch (name) {
        case 'a':
            return RationalFunction(Polynomial({(param * param - w2) / r}),
                                    Polynomial({param * param, 0.0, 1.0}));
        case 'b':
            return RationalFunction(Polynomial({(w2 - param * param) / r}),
                                    Polynomial({param * param, 0.0, 1.0}));
        case 'c':
            return RationalFunction(Polynomial({param * omega0 / r}),
                                    Polynomial({w2, param, 1.0}));
        case 'd':
        case 'e': {
            double sec = 1.0 / std::cos(theta);
            double damping = (param * param - w2) * std::tan(theta) / omega0;
            return RationalFunction(Polynomial({(param * param - w2) * sec / r}),
                                    Polynomial({param * param, damping, 1.0}));
        }
    }
    throw Error("unknown catalog case");
}

CatalogInterval catalog_interval(char name, double omega0, double r, double theta,
                                 double beta_sq, double gamma) {
    const double inf = std::numeric_limits<double>::infinity();
    switch (name) {
        case 'a':
            if (beta_sq > gamma * r) {
                return {'a', omega0, omega0 * std::sqrt(beta_sq / (beta_sq - gamma * r))};
            }
            return {'a', omega0, inf};
        case 'b':
            return {'b', omega0 * std::sqrt(beta_sq / (beta_sq + gamma * r)), omega0};
        case 'c':
            if (beta_sq <= 0.0) return {'c', 0.0, inf};
            return {'c', 0.0, gamma * r * omega0 / beta_sq};
        case 'd': {
            double q = beta_sq - gamma * r * std::cos(theta);
            if (beta_sq > gamma * r * std::cos(theta) && q > 0.0) {
                return {'d', omega0, omega0 * std::sqrt(beta_sq / q)};
            }
            return {'d', omega0, inf};
        }
        case 'e': {
            double q = beta_sq - gamma * r * std::cos(theta);  // cos < 0 here, so q > beta_sq
            return {'e', omega0 * std::sqrt(beta_sq / q), omega0};
        }
    }
    throw Error("unknown catalog case");
}

// Interior choice: midpoint in the squared parameter for the resonance-type
// parameters, plain midpoint for the damping parameter c, and twice the
// lower endpoint (or the natural scale) when unbounded above.
double pick_interior(const CatalogInterval& iv, double omega0) {
    if (!std::isfinite(iv.hi)) {
        return iv.lo > 0.0 ? 2.0 * iv.lo : omega0;
    }
    if (iv.name == 'c') return 0.5 * (iv.lo + iv.hi);
    return std::sqrt(0.5 * (iv.lo * iv.lo + iv.hi * iv.hi));
}

double safe_endpoint(const CatalogInterval& iv) {
    // Endpoint toward which the plant's dc gain shrinks.
    switch (iv.name) {
        case 'a':
        case 'd':
            return iv.lo;  // a, d -> omega0 kills the numerator
        case 'b':
        case 'e':
            return iv.hi;  // b, e -> omega0 likewise
        case 'c':
            return 0.0;
    }
    throw Error("unknown catalog case");
}

CounterexampleRecipe make_catalog(const TransferMatrix& C, const UncertaintyClass& cls,
                                  double omega0, const Eigen::VectorXcd& x, bool ni_mode) {
    CounterexampleRecipe rec;
    rec.kind = RecipeKind::CatalogSecondOrder;
    rec.omega0 = omega0;
    rec.x = x;
    rec.alpha = x.imag() / omega0;
    rec.beta = x.real();

    std::complex<double> v = (x.adjoint() * C.eval({0.0, omega0}) * x)(0, 0);
    rec.r = std::abs(v);
    double theta = std::atan2(v.imag(), v.real());
    if (theta < -kThetaSnap || theta > M_PI + kThetaSnap) {
        throw Error("violation phase outside [0, pi]");
    }
    theta = std::clamp(theta, 0.0, M_PI);
    rec.theta = theta;

    char name;
    if (std::abs(theta - M_PI / 2) <= kThetaSnap) {
        name = 'c';
        theta = M_PI / 2;
    } else if (theta <= kThetaSnap) {
        name = 'a';
        theta = 0.0;
    } else if (theta >= M_PI - kThetaSnap) {
        name = 'b';
        theta = M_PI;
    } else {
        name = theta < M_PI / 2 ? 'd' : 'e';
    }
    if (ni_mode && (name == 'a' || name == 'b')) {
        throw Error("strict NI violation cannot have a real violation value");
    }

    const double gamma = cls.gamma.value_or(1.0);
    const double beta_sq = rec.beta.squaredNorm();
    CatalogInterval iv = catalog_interval(name, omega0, rec.r, theta, beta_sq, gamma);
    double param = pick_interior(iv, omega0);

    auto build = [&](double prm) {
        return f_outer(rec.alpha, rec.beta, catalog_p(name, prm, omega0, rec.r, theta));
    };
    TransferMatrix P = build(param);
    // The pin is parameter independent; only the dc bound moves.  Bisect
    // toward the safe endpoint if the interior choice overshoots.
    double safe = safe_endpoint(iv);
    for (int it = 0; it < 64; ++it) {
        GainData g = gains(P);
        double lmax = symmetric_lambda_max(*g.static_gain);
        if (lmax <= 0.98 * gamma) break;
        param = (name == 'c') ? 0.5 * (param + safe)
                              : std::sqrt(0.5 * (param * param + safe * safe));
        P = build(param);
    }
    rec.catalog_param_name = name;
    rec.catalog_param = param;
    rec.plant = P;
    return rec;
}

CounterexampleRecipe make_resonant_rank_one(const TransferMatrix& C, const UncertaintyClass& cls,
                                            double omega0, const Eigen::VectorXcd& x) {
    (void)C;
    CounterexampleRecipe rec;
    rec.kind = RecipeKind::ResonantRankOneEps;
    rec.omega0 = omega0;
    rec.x = x;
    rec.alpha = x.imag() / omega0;
    rec.beta = x.real();
    const double gamma = cls.gamma.value_or(1.0);
    double beta_sq = rec.beta.squaredNorm();
    rec.epsilon = beta_sq > 1e-300 ? std::min(gamma * omega0 * omega0 / (2.0 * beta_sq), 1.0) : 1.0;
    RationalFunction core(Polynomial({rec.epsilon}),
                          Polynomial({omega0 * omega0, 0.0, 1.0}));
    rec.plant = f_outer(rec.alpha, rec.beta, core);
    return rec;
}

CounterexampleRecipe make_resonant_plus_lossless(const TransferMatrix& C, double omega0) {
    Eigen::MatrixXcd Cw = C.eval({0.0, omega0});
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Cw, Eigen::ComputeFullU);
    const int n = static_cast<int>(Cw.rows());
    double smin = svd.singularValues()(n - 1);
    if (smin > 1e-6 * std::max(1.0, svd.singularValues()(0))) {
        throw NotSynthesizable(
            "output-strict-passivity violation with nonsingular C(jw0); the general "
            "positive-real completion is outside this library");
    }
    Eigen::VectorXcd t1 = normalize_phase(svd.matrixU().col(n - 1));

    CounterexampleRecipe rec;
    rec.kind = RecipeKind::ResonantPlusLossless;
    rec.omega0 = omega0;
    rec.x = t1;
    rec.alpha = t1.imag() / omega0;
    rec.beta = t1.real();
    rec.lossless.omega1 = omega0 / 2.0;
    rec.lossless.k = (omega0 * omega0 - rec.lossless.omega1 * rec.lossless.omega1) / omega0;

    // G - G(inf) with G = f p0 f(-.)^T, p0 = 1/(s^2 + w0^2); the lossless term
    // (w0/s) N reduces to w0 k / (s^2 + w1^2) alpha alpha^T.
    RationalFunction p0(Polynomial({1.0}), Polynomial({omega0 * omega0, 0.0, 1.0}));
    TransferMatrix G = f_outer(rec.alpha, rec.beta, p0);
    Eigen::MatrixXd Ginf = -rec.alpha * rec.alpha.transpose();
    RationalFunction loss(Polynomial({omega0 * rec.lossless.k}),
                          Polynomial({rec.lossless.omega1 * rec.lossless.omega1, 0.0, 1.0}));
    TransferMatrix N_over_s(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) N_over_s.at(i, j) = (rec.alpha(i) * rec.alpha(j)) * loss;
    rec.plant = G - TransferMatrix::constant(Ginf) + N_over_s;
    return rec;
}

RationalFunction first_order_lag() {
    return RationalFunction(Polynomial({1.0}), Polynomial({1.0, 1.0}));  // 1/(s+1)
}

Eigen::MatrixXd controller_dc_derivative(const TransferMatrix& C) {
    const int n = C.dim();
    Eigen::MatrixXd E0(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) E0(i, j) = C.at(i, j).derivative().at_zero();
    return E0;
}

CounterexampleRecipe make_static_gain_recipe(const TransferMatrix& C,
                                             const UncertaintyClass& cls) {
    Eigen::MatrixXd C0 = symmetrized_static_gain(C);
    CounterexampleRecipe rec;
    Eigen::VectorXd evals;
    eig_descending(C0, rec.U, evals);
    const int n = static_cast<int>(C0.rows());
    rec.D = evals.asDiagonal();
    double d11 = evals(0);

    switch (cls.kind) {
        case UncertaintyKind::StrictlyProperNI:
        case UncertaintyKind::NI_NoDoubleOriginPole: {
            if (d11 > tol::eig_margin) {
                // M = U diag(1/d11, 0) U^T over (s+1).
                Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
                diag(0) = 1.0 / d11;
                rec.M = rec.U * diag.asDiagonal() * rec.U.transpose();
                rec.kind = RecipeKind::SchurFirstOrder;
                rec.plant = TransferMatrix(n);
                for (int i = 0; i < n; ++i) {
                    for (int j = 0; j < n; ++j) rec.plant.at(i, j) = rec.M(i, j) * first_order_lag();
                }
            } else {
                // d11 == 0 branch: integrator with ||M E(0)|| < 1.
                rec.E0 = controller_dc_derivative(C);
                double a = 1.0 / (2.0 * (sigma_max(rec.E0.cast<std::complex<double>>()) + 1.0));
                Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
                diag(0) = a;
                rec.M = rec.U * diag.asDiagonal() * rec.U.transpose();
                rec.kind = RecipeKind::SchurIntegrator;
                RationalFunction integ(Polynomial({1.0}), Polynomial({0.0, 1.0}));
                rec.plant = TransferMatrix(n);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) rec.plant.at(i, j) = rec.M(i, j) * integ;
            }
            break;
        }
        case UncertaintyKind::N0_DcBounded:
        case UncertaintyKind::N0_DcBoundedNonneg:
        case UncertaintyKind::N0_InstNonnegDcStrict: {
            rec.kind = RecipeKind::SchurConstant;
            rec.M = (1.0 / d11) * Eigen::MatrixXd::Identity(n, n);
            rec.plant = TransferMatrix::constant(rec.M);
            break;
        }
        case UncertaintyKind::SNI_InstNonneg: {
            Eigen::VectorXd diag = Eigen::VectorXd::Ones(n);
            diag(0) = 1.0 / d11;
            rec.M = rec.U * diag.asDiagonal() * rec.U.transpose();
            rec.kind = RecipeKind::SchurFirstOrder;
            rec.plant = TransferMatrix(n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) rec.plant.at(i, j) = rec.M(i, j) * first_order_lag();
            break;
        }
        case UncertaintyKind::SNI_InstNonnegDcBounded:
        case UncertaintyKind::SNI_DcBounded:
        case UncertaintyKind::SNI_DcBoundedNonneg: {
            rec.kind = RecipeKind::SchurFirstOrder;
            rec.M = (1.0 / d11) * Eigen::MatrixXd::Identity(n, n);
            rec.plant = TransferMatrix(n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) rec.plant.at(i, j) = rec.M(i, j) * first_order_lag();
            break;
        }
    }
    return rec;
}

CounterexampleRecipe make_inst_gain_lag(const TransferMatrix& C) {
    Eigen::MatrixXd Cinf = symmetrized_inst_gain(C);
    double lmin = symmetric_lambda_min(Cinf);
    if (lmin >= 0.0) throw Error("instantaneous-gain recipe needs a negative eigenvalue");
    const int n = static_cast<int>(Cinf.rows());
    CounterexampleRecipe rec;
    rec.kind = RecipeKind::InstGainLag;
    // P = s / (lambda_min(C(inf)) (s+1)) I
    RationalFunction g(Polynomial({0.0, 1.0 / lmin}), Polynomial({1.0, 1.0}));
    rec.plant = TransferMatrix(n);
    for (int i = 0; i < n; ++i) rec.plant.at(i, i) = g;
    rec.M = (1.0 / lmin) * Eigen::MatrixXd::Identity(n, n);
    return rec;
}

}  // namespace

std::string recipe_kind_name(RecipeKind k) {
    switch (k) {
        case RecipeKind::ResonantRankOneEps: return "resonant-rank-one-eps";
        case RecipeKind::CatalogSecondOrder: return "catalog-second-order";
        case RecipeKind::SchurConstant: return "schur-constant";
        case RecipeKind::SchurFirstOrder: return "schur-first-order";
        case RecipeKind::SchurIntegrator: return "schur-integrator";
        case RecipeKind::InstGainLag: return "inst-gain-lag";
        case RecipeKind::InverseStaticGain: return "inverse-static-gain";
        case RecipeKind::ResonantPlusLossless: return "resonant-plus-lossless";
    }
    throw Error("unknown recipe kind");
}

NecessityVerdict necessity_check(const TransferMatrix& C, const UncertaintyClass& cls) {
    validate_class(cls);
    require_stable_controller(C);
    NIClassification cc = classify_ni(C);

    NecessityVerdict v;
    std::vector<ConditionRow> rows = controller_conditions(C, cls, cc);
    for (const auto& r : rows) v.controller_conditions.emplace_back(r.label, r.pass);

    if (cls.kind == UncertaintyKind::NI_NoDoubleOriginPole) {
        v.status = NecessityStatus::ClassImpossible;
        Violation viol;
        viol.kind = ViolationKind::NonexistenceClass;
        v.violation = viol;
        return v;
    }

    for (const auto& r : rows) {
        if (r.pass) continue;
        v.status = NecessityStatus::Violated;
        Violation viol;
        viol.kind = r.kind;
        viol.margin = r.margin;
        switch (r.kind) {
            case ViolationKind::NotSNI:
            case ViolationKind::NotNI:
                viol.omega0 = cc.strictness_omega;
                viol.direction = cc.strictness_direction;
                break;
            case ViolationKind::StaticGainBound: {
                viol.at_origin = true;
                Eigen::MatrixXd U;
                Eigen::VectorXd D;
                eig_descending(symmetrized_static_gain(C), U, D);
                viol.direction = U.col(0).cast<std::complex<double>>();
                break;
            }
            case ViolationKind::InstGainSign: {
                viol.at_infinity = true;
                Eigen::MatrixXd U;
                Eigen::VectorXd D;
                eig_descending(symmetrized_inst_gain(C), U, D);
                viol.direction = U.col(U.cols() - 1).cast<std::complex<double>>();
                break;
            }
            case ViolationKind::NonexistenceClass:
                break;
        }
        v.violation = viol;
        return v;
    }
    v.status = NecessityStatus::RobustlyStabilizing;
    return v;
}

CounterexampleRecipe synthesize_destabilizer(const TransferMatrix& C, const UncertaintyClass& cls,
                                             const NecessityVerdict& verdict) {
    validate_class(cls);
    if (verdict.status == NecessityStatus::RobustlyStabilizing) {
        throw PreconditionViolated("controller satisfies the necessity conditions");
    }

    if (cls.kind == UncertaintyKind::NI_NoDoubleOriginPole) {
        UncertaintyClass strict{UncertaintyKind::StrictlyProperNI, std::nullopt};
        NecessityVerdict inner = necessity_check(C, strict);
        if (inner.status == NecessityStatus::RobustlyStabilizing) {
            // C is SNI with C(0) < 0: the inverse static gain pins a blocking
            // zero of I - P C at the origin.
            CounterexampleRecipe rec;
            rec.kind = RecipeKind::InverseStaticGain;
            Eigen::MatrixXd C0 = symmetrized_static_gain(C);
            rec.M = C0.inverse();
            rec.plant = TransferMatrix::constant(rec.M);
            return rec;
        }
        return synthesize_destabilizer(C, strict, inner);
    }

    if (!verdict.violation) throw PreconditionViolated("verdict carries no violation");
    const Violation& viol = *verdict.violation;

    switch (viol.kind) {
        case ViolationKind::NotSNI: {
            double omega0 = viol.omega0;
            Eigen::VectorXcd x = viol.direction;
            if (cls.kind == UncertaintyKind::StrictlyProperNI) {
                return make_resonant_plus_lossless(C, omega0);
            }
            std::complex<double> v = (x.adjoint() * C.eval({0.0, omega0}) * x)(0, 0);
            double scale = std::max(1.0, C.eval({0.0, omega0}).norm());
            if (std::abs(v) <= 1e-8 * scale) {
                return make_resonant_rank_one(C, cls, omega0, x);
            }
            return make_catalog(C, cls, omega0, x, /*ni_mode=*/false);
        }
        case ViolationKind::NotNI:
            return make_catalog(C, cls, viol.omega0, viol.direction, /*ni_mode=*/true);
        case ViolationKind::StaticGainBound:
            return make_static_gain_recipe(C, cls);
        case ViolationKind::InstGainSign:
            return make_inst_gain_lag(C);
        case ViolationKind::NonexistenceClass:
            break;  // handled above
    }
    throw Error("unreachable synthesis dispatch");
}

VerificationReport verify_counterexample(const CounterexampleRecipe& recipe,
                                         const TransferMatrix& C, const UncertaintyClass& cls) {
    VerificationReport rep;
    const TransferMatrix& P = recipe.plant;

    MembershipReport mem = class_membership(P, cls);
    if (!mem.in_class) {
        throw VerificationFailed("class-membership", "synthesized plant not in class: " + mem.reason);
    }
    rep.in_class = true;

    // Closed-loop data (shared by the pin and the oracle clause).
    bool ill_posed = false;
    Eigen::VectorXcd cl_eigs;
    try {
        cl_eigs = close_loop(P, C).pole_eigenvalues();
    } catch (const IllPosedError&) {
        ill_posed = true;
    }

    auto min_eig_distance = [&](std::complex<double> target) {
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < cl_eigs.size(); ++i) {
            best = std::min(best, std::abs(cl_eigs(i) - target));
            best = std::min(best, std::abs(cl_eigs(i) - std::conj(target)));
        }
        return best;
    };

    double pin_value = std::numeric_limits<double>::infinity();
    switch (recipe.kind) {
        case RecipeKind::CatalogSecondOrder: {
            Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(P.dim(), P.dim());
            pin_value = sigma_min(I - P.eval({0.0, recipe.omega0}) * C.eval({0.0, recipe.omega0}));
            break;
        }
        case RecipeKind::SchurConstant:
        case RecipeKind::SchurFirstOrder:
        case RecipeKind::InverseStaticGain: {
            GainData gp = gains(P), gc = gains(C);
            Eigen::MatrixXd I = Eigen::MatrixXd::Identity(P.dim(), P.dim());
            pin_value = sigma_min(
                (I - *gp.static_gain * *gc.static_gain).cast<std::complex<double>>());
            break;
        }
        case RecipeKind::InstGainLag: {
            GainData gp = gains(P), gc = gains(C);
            Eigen::MatrixXd I = Eigen::MatrixXd::Identity(P.dim(), P.dim());
            pin_value = sigma_min(
                (I - gp.instantaneous_gain * gc.instantaneous_gain).cast<std::complex<double>>());
            break;
        }
        case RecipeKind::ResonantRankOneEps:
        case RecipeKind::ResonantPlusLossless:
            pin_value = ill_posed ? 0.0 : min_eig_distance({0.0, recipe.omega0}) /
                                              (1.0 + recipe.omega0);
            break;
        case RecipeKind::SchurIntegrator:
            pin_value = ill_posed ? 0.0 : min_eig_distance({0.0, 0.0});
            break;
    }
    rep.values["pin"] = pin_value;
    double pin_tol = recipe.kind == RecipeKind::InverseStaticGain ? 1e-8 : tol::pin;
    if (recipe.kind == RecipeKind::InverseStaticGain && !ill_posed) {
        // The blocking zero pins a closed-loop pole at the origin itself.
        double d0 = min_eig_distance({0.0, 0.0});
        rep.values["origin_pole_distance"] = d0;
        if (d0 >= pin_tol) {
            throw VerificationFailed("pin", "no closed-loop pole at the origin");
        }
    }
    if (!(pin_value < pin_tol)) {
        throw VerificationFailed("pin", "engineered singularity not reproduced; value " +
                                            std::to_string(pin_value));
    }
    rep.pinned = true;

    StabilityVerdict oracle = oracle_stability(P, C);
    rep.values["oracle_status"] = static_cast<double>(oracle.status);
    if (oracle.status == StabilityStatus::Stable) {
        throw VerificationFailed("oracle", "closed loop is stable; the plant does not destabilize");
    }
    rep.loop_not_stable = true;
    return rep;
}

SufficiencyReport sufficiency_check(const TransferMatrix& C, const UncertaintyClass& cls,
                                    int samples, std::uint64_t seed) {
    NecessityVerdict nec = necessity_check(C, cls);
    if (nec.status != NecessityStatus::RobustlyStabilizing) {
        throw PreconditionViolated("sufficiency check requires the necessity conditions to hold");
    }

    int threads = 1;
    if (const char* env = std::getenv("NI_CERTIFY_THREADS")) {
        threads = std::max(1, std::min(std::atoi(env),
                                       static_cast<int>(std::thread::hardware_concurrency())));
    }

    SufficiencyReport rep;
    rep.samples = samples;
    std::vector<int> stable(static_cast<size_t>(samples), 0);
    std::vector<int> confirms(static_cast<size_t>(samples), 0);
    std::vector<std::string> failures(static_cast<size_t>(samples));

    auto worker = [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            SampleSpec spec;
            spec.cls = cls;
            spec.n = C.dim();
            spec.modes = 1 + (i % 3);
            spec.seed = split_seed(seed, static_cast<std::uint64_t>(i));
            TransferMatrix P = sample_plant(spec);
            StabilityVerdict v = oracle_stability(P, C);
            if (v.status != StabilityStatus::Stable) {
                failures[static_cast<size_t>(i)] = "sample " + std::to_string(i) + " destabilizes";
                continue;
            }
            stable[static_cast<size_t>(i)] = 1;
            if (cls.kind == UncertaintyKind::StrictlyProperNI) {
                PsiParameter psi{symmetrized_static_gain(C)};
                StabilityVerdict l4 = lemma4_check(P, C, psi);
                if (l4.status == StabilityStatus::Stable) confirms[static_cast<size_t>(i)] = 1;
            }
        }
    };

    if (threads <= 1) {
        worker(0, samples);
    } else {
        std::vector<std::thread> pool;
        int chunk = (samples + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            int b = t * chunk, e = std::min(samples, (t + 1) * chunk);
            if (b < e) pool.emplace_back(worker, b, e);
        }
        for (auto& th : pool) th.join();
    }

    for (int i = 0; i < samples; ++i) {
        if (!failures[static_cast<size_t>(i)].empty()) {
            throw SufficiencyCounterexample(failures[static_cast<size_t>(i)]);
        }
        rep.stable += stable[static_cast<size_t>(i)];
        rep.psi_static_gain_confirms += confirms[static_cast<size_t>(i)];
    }
    return rep;
}

TransferMatrix lossless_completion(const Eigen::VectorXd& alpha, const LosslessTerm& t) {
    const int n = static_cast<int>(alpha.size());
    // N(s) = k s / (s^2 + w1^2) alpha alpha^T
    RationalFunction g(Polynomial({0.0, t.k}), Polynomial({t.omega1 * t.omega1, 0.0, 1.0}));
    TransferMatrix N(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) N.at(i, j) = (alpha(i) * alpha(j)) * g;
    return N;
}

}  // namespace nicert
