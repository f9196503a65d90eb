#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nicert/transfer_matrix.hpp"
#include "nicert/uncertainty.hpp"

namespace nicert {

enum class NecessityStatus { RobustlyStabilizing, Violated, ClassImpossible };

enum class ViolationKind { NotSNI, NotNI, StaticGainBound, InstGainSign, NonexistenceClass };

struct Violation {
    ViolationKind kind;
    double omega0 = 0.0;  // violation frequency for the membership kinds
    bool at_origin = false;
    bool at_infinity = false;
    Eigen::VectorXcd direction;
    double margin = 0.0;  // how badly the condition fails
};

struct NecessityVerdict {
    NecessityStatus status = NecessityStatus::Violated;
    // Labeled controller-side conditions in theorem order.
    std::vector<std::pair<std::string, bool>> controller_conditions;
    std::optional<Violation> violation;
};

/// Evaluate the controller-side necessity condition of the class.
NecessityVerdict necessity_check(const TransferMatrix& C, const UncertaintyClass& cls);

enum class RecipeKind {
    ResonantRankOneEps,
    CatalogSecondOrder,
    SchurConstant,
    SchurFirstOrder,
    SchurIntegrator,
    InstGainLag,
    InverseStaticGain,
    ResonantPlusLossless,
};

std::string recipe_kind_name(RecipeKind k);

struct LosslessTerm {
    double omega1 = 0.0;
    double k = 0.0;
};

/// Every intermediate of a synthesized destabilizing plant, plus the plant.
struct CounterexampleRecipe {
    RecipeKind kind;
    double omega0 = 0.0;
    Eigen::VectorXcd x;       // violation direction (unit)
    double r = 0.0;           // |x* C(jw0) x|
    double theta = 0.0;       // arg x* C(jw0) x in [0, pi]
    Eigen::VectorXd alpha, beta;  // f(s) = alpha s + beta with f(jw0) = x
    char catalog_param_name = 0;  // one of a,b,c,d,e
    double catalog_param = 0.0;
    double epsilon = 0.0;
    Eigen::MatrixXd M, U, D;  // spectral-decomposition recipes
    Eigen::MatrixXd E0;       // C'(0) for the integrator recipe
    LosslessTerm lossless;
    TransferMatrix plant{1};
};

/// Construct an in-class destabilizing plant for a violated condition.
/// Throws NotSynthesizable for the documented out-of-scope violation.
CounterexampleRecipe synthesize_destabilizer(const TransferMatrix& C, const UncertaintyClass& cls,
                                             const NecessityVerdict& verdict);

struct VerificationReport {
    bool in_class = false;
    bool pinned = false;
    bool loop_not_stable = false;
    std::map<std::string, double> values;
};

/// Re-verify a recipe end to end: class membership, the engineered
/// singularity, and the closed-loop oracle.  Throws VerificationFailed with
/// the failed clause.
VerificationReport verify_counterexample(const CounterexampleRecipe& recipe,
                                         const TransferMatrix& C, const UncertaintyClass& cls);

struct SufficiencyReport {
    int samples = 0;
    int stable = 0;
    int psi_static_gain_confirms = 0;  // origin-pole test replays with Psi = C(0)
};

/// Draw in-class plants and assert oracle stability for each; for the
/// strictly proper class additionally replay the origin-pole test with
/// Psi = C(0).  Throws SufficiencyCounterexample on any unstable loop.
SufficiencyReport sufficiency_check(const TransferMatrix& C, const UncertaintyClass& cls,
                                    int samples, std::uint64_t seed);

/// The lossless completion term N(s) = k s / (s^2 + omega1^2) * alpha alpha^T
/// used by the resonant-plus-lossless recipe.
TransferMatrix lossless_completion(const Eigen::VectorXd& alpha, const LosslessTerm& t);

}  // namespace nicert
