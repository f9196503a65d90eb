#include "nicert/uncertainty.hpp"

#include <cmath>

#include "nicert/classify.hpp"
#include "nicert/errors.hpp"
#include "nicert/spectral.hpp"
#include "nicert/tolerances.hpp"

namespace nicert {

bool kind_requires_gamma(UncertaintyKind k) {
    switch (k) {
        case UncertaintyKind::StrictlyProperNI:
        case UncertaintyKind::NI_NoDoubleOriginPole:
        case UncertaintyKind::SNI_InstNonneg:
            return false;
        default:
            return true;
    }
}

bool kind_is_sni(UncertaintyKind k) {
    switch (k) {
        case UncertaintyKind::SNI_InstNonneg:
        case UncertaintyKind::SNI_InstNonnegDcBounded:
        case UncertaintyKind::SNI_DcBounded:
        case UncertaintyKind::SNI_DcBoundedNonneg:
            return true;
        default:
            return false;
    }
}

std::string kind_name(UncertaintyKind k) {
    switch (k) {
        case UncertaintyKind::StrictlyProperNI: return "strictly-proper-ni";
        case UncertaintyKind::NI_NoDoubleOriginPole: return "ni-no-double-origin-pole";
        case UncertaintyKind::N0_DcBounded: return "n0-dc-bounded";
        case UncertaintyKind::N0_DcBoundedNonneg: return "n0-dc-bounded-nonneg";
        case UncertaintyKind::N0_InstNonnegDcStrict: return "n0-inst-nonneg-dc-strict";
        case UncertaintyKind::SNI_InstNonneg: return "sni-inst-nonneg";
        case UncertaintyKind::SNI_InstNonnegDcBounded: return "sni-inst-nonneg-dc-bounded";
        case UncertaintyKind::SNI_DcBounded: return "sni-dc-bounded";
        case UncertaintyKind::SNI_DcBoundedNonneg: return "sni-dc-bounded-nonneg";
    }
    throw Error("unknown uncertainty kind");
}

std::optional<UncertaintyKind> kind_from_name(const std::string& name) {
    for (UncertaintyKind k : {UncertaintyKind::StrictlyProperNI,
                              UncertaintyKind::NI_NoDoubleOriginPole,
                              UncertaintyKind::N0_DcBounded,
                              UncertaintyKind::N0_DcBoundedNonneg,
                              UncertaintyKind::N0_InstNonnegDcStrict,
                              UncertaintyKind::SNI_InstNonneg,
                              UncertaintyKind::SNI_InstNonnegDcBounded,
                              UncertaintyKind::SNI_DcBounded,
                              UncertaintyKind::SNI_DcBoundedNonneg}) {
        if (kind_name(k) == name) return k;
    }
    return std::nullopt;
}

void validate_class(const UncertaintyClass& cls) {
    if (kind_requires_gamma(cls.kind)) {
        if (!cls.gamma) throw Error("class " + kind_name(cls.kind) + " requires gamma");
        if (*cls.gamma <= 0.0) throw Error("gamma must be positive");
    }
}

MembershipReport class_membership(const TransferMatrix& P, const UncertaintyClass& cls) {
    validate_class(cls);
    MembershipReport rep;
    NIClassification c = classify_ni(P);
    const double slack = 100.0 * tol::eig_margin;

    if (kind_is_sni(cls.kind)) {
        if (c.verdict != NIVerdict::SNI) {
            rep.reason = "plant is not SNI";
            return rep;
        }
    } else if (c.verdict == NIVerdict::NotNI) {
        rep.reason = "plant is not NI";
        return rep;
    }

    GainData g = gains(P);
    std::vector<PoleData> pls = poles(P);
    double gamma = cls.gamma.value_or(0.0);

    auto dc_le_gamma = [&](bool strict) {
        double lmax = symmetric_lambda_max(*g.static_gain);
        return strict ? lmax < gamma : lmax <= gamma + slack;
    };
    auto dc_nonneg = [&] { return symmetric_lambda_min(*g.static_gain) >= -slack; };
    auto inst_nonneg = [&] { return symmetric_lambda_min(g.instantaneous_gain) >= -slack; };

    switch (cls.kind) {
        case UncertaintyKind::StrictlyProperNI:
            if (g.instantaneous_gain.norm() > slack) {
                rep.reason = "plant is not strictly proper";
                return rep;
            }
            break;
        case UncertaintyKind::NI_NoDoubleOriginPole:
            for (const auto& p : pls) {
                if (std::abs(p.location) < 10.0 * tol::axis_pole && p.multiplicity > 1) {
                    rep.reason = "plant has a double pole at the origin";
                    return rep;
                }
            }
            break;
        case UncertaintyKind::N0_DcBounded:
        case UncertaintyKind::N0_DcBoundedNonneg:
        case UncertaintyKind::N0_InstNonnegDcStrict:
            if (g.pole_at_origin()) {
                rep.reason = "plant has a pole at the origin";
                return rep;
            }
            if (cls.kind == UncertaintyKind::N0_InstNonnegDcStrict) {
                if (!inst_nonneg()) {
                    rep.reason = "P(inf) is not positive semidefinite";
                    return rep;
                }
                if (!dc_le_gamma(/*strict=*/true)) {
                    rep.reason = "P(0) does not satisfy the strict gamma bound";
                    return rep;
                }
            } else {
                if (!dc_le_gamma(/*strict=*/false)) {
                    rep.reason = "P(0) exceeds gamma I";
                    return rep;
                }
                if (cls.kind == UncertaintyKind::N0_DcBoundedNonneg && !dc_nonneg()) {
                    rep.reason = "P(0) is not positive semidefinite";
                    return rep;
                }
            }
            break;
        case UncertaintyKind::SNI_InstNonneg:
        case UncertaintyKind::SNI_InstNonnegDcBounded:
            if (!inst_nonneg()) {
                rep.reason = "P(inf) is not positive semidefinite";
                return rep;
            }
            if (cls.kind == UncertaintyKind::SNI_InstNonnegDcBounded && !dc_le_gamma(false)) {
                rep.reason = "P(0) exceeds gamma I";
                return rep;
            }
            break;
        case UncertaintyKind::SNI_DcBounded:
        case UncertaintyKind::SNI_DcBoundedNonneg:
            if (!dc_le_gamma(false)) {
                rep.reason = "P(0) exceeds gamma I";
                return rep;
            }
            if (cls.kind == UncertaintyKind::SNI_DcBoundedNonneg && !dc_nonneg()) {
                rep.reason = "P(0) is not positive semidefinite";
                return rep;
            }
            break;
    }
    rep.in_class = true;
    return rep;
}

}  // namespace nicert
