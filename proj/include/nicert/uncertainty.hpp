#pragma once

#include <optional>
#include <string>

#include "nicert/transfer_matrix.hpp"

namespace nicert {

// The nine plant uncertainty classes the converse checks cover.  Kinds with
// "N0" range over NI plants free of origin poles; "SNI" kinds over stable
// strictly-NI plants; the remaining two admit imaginary-axis poles.
enum class UncertaintyKind {
    StrictlyProperNI,         // strictly proper NI, origin poles allowed
    NI_NoDoubleOriginPole,    // NI without double origin poles (no controller exists)
    N0_DcBounded,             // P(0) <= gamma I
    N0_DcBoundedNonneg,       // 0 <= P(0) <= gamma I
    N0_InstNonnegDcStrict,    // P(inf) >= 0, P(0) < gamma I
    SNI_InstNonneg,           // P(inf) >= 0
    SNI_InstNonnegDcBounded,  // P(inf) >= 0, P(0) <= gamma I
    SNI_DcBounded,            // P(0) <= gamma I
    SNI_DcBoundedNonneg,      // 0 <= P(0) <= gamma I
};

struct UncertaintyClass {
    UncertaintyKind kind;
    std::optional<double> gamma;  // required for the bounded kinds
};

bool kind_requires_gamma(UncertaintyKind k);
bool kind_is_sni(UncertaintyKind k);  // plant set consists of stable SNI systems

/// Kebab-cased CLI name, e.g. "sni-inst-nonneg".
std::string kind_name(UncertaintyKind k);
std::optional<UncertaintyKind> kind_from_name(const std::string& name);

/// Validates gamma presence/positivity; throws Error otherwise.
void validate_class(const UncertaintyClass& cls);

struct MembershipReport {
    bool in_class = false;
    std::string reason;  // first failed requirement when not in class
};

/// Full membership check of a plant against a class: classification verdict,
/// pole structure, and gain bounds.
MembershipReport class_membership(const TransferMatrix& P, const UncertaintyClass& cls);

}  // namespace nicert
