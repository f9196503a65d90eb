#pragma once

#include <string>

#include "json.hpp"
#include "nicert/classify.hpp"
#include "nicert/converse.hpp"
#include "nicert/stability.hpp"
#include "nicert/state_space.hpp"
#include "nicert/transfer_matrix.hpp"

namespace nicert {

using nlohmann::json;

/// System file format:
/// {"n": 2, "entries": [[{"num":[b0,b1,...],"den":[a0,a1,...]}, ...], ...]}
/// with ascending coefficients.
json system_to_json(const TransferMatrix& G);
TransferMatrix system_from_json(const json& j);

TransferMatrix load_system(const std::string& path);
void save_system(const TransferMatrix& G, const std::string& path);

/// Realization export: {"A":[[...]],"B":[[...]],"C":[[...]],"D":[[...]]}.
json realization_to_json(const StateSpaceRealization& ss);

json matrix_to_json(const Eigen::MatrixXd& M);
Eigen::MatrixXd matrix_from_json(const json& j);

json classification_to_json(const NIClassification& c, const ClassifyOptions& opt);
json verdict_to_json(const StabilityVerdict& v);
json homotopy_to_json(const HomotopyReport& r);
json necessity_to_json(const NecessityVerdict& v);
json recipe_to_json(const CounterexampleRecipe& r);

std::string verdict_name(StabilityStatus s);
std::string ni_verdict_name(NIVerdict v);

/// FNV-1a hash of a file's bytes, as "fnv1a64:<hex>".
std::string file_hash(const std::string& path);

}  // namespace nicert
