#include "nicert/json_io.hpp"

#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>

#include "nicert/errors.hpp"
#include "nicert/uncertainty.hpp"

namespace nicert {

namespace {

json poly_to_json(const Polynomial& p) {
    json out = json::array();
    if (p.is_zero()) {
        out.push_back(0.0);
        return out;
    }
    for (double c : p.coeffs()) out.push_back(c);
    return out;
}

Polynomial poly_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw Error("coefficient list must be a nonempty array");
    std::vector<double> c;
    for (const auto& v : j) {
        if (!v.is_number()) throw Error("coefficient must be a number");
        c.push_back(v.get<double>());
    }
    return Polynomial(std::move(c));
}

json cvec_to_json(const Eigen::VectorXcd& v, bool imag) {
    json out = json::array();
    for (int i = 0; i < v.size(); ++i) out.push_back(imag ? v(i).imag() : v(i).real());
    return out;
}

}  // namespace

json system_to_json(const TransferMatrix& G) {
    json j;
    j["n"] = G.dim();
    json rows = json::array();
    for (int i = 0; i < G.dim(); ++i) {
        json row = json::array();
        for (int k = 0; k < G.dim(); ++k) {
            json e;
            e["num"] = poly_to_json(G.at(i, k).num());
            e["den"] = poly_to_json(G.at(i, k).den());
            row.push_back(e);
        }
        rows.push_back(row);
    }
    j["entries"] = rows;
    return j;
}

TransferMatrix system_from_json(const json& j) {
    if (!j.contains("n") || !j.contains("entries")) throw Error("system JSON needs n and entries");
    int n = j["n"].get<int>();
    if (n < 1 || n > 16) throw Error("system dimension out of range");
    const json& rows = j["entries"];
    if (!rows.is_array() || static_cast<int>(rows.size()) != n) {
        throw Error("entries must be an n-row array");
    }
    TransferMatrix G(n);
    for (int i = 0; i < n; ++i) {
        const json& row = rows[static_cast<size_t>(i)];
        if (!row.is_array() || static_cast<int>(row.size()) != n) {
            throw Error("entries row has wrong length");
        }
        for (int k = 0; k < n; ++k) {
            const json& e = row[static_cast<size_t>(k)];
            RationalFunction r(poly_from_json(e.at("num")), poly_from_json(e.at("den")));
            if (!r.is_proper()) throw Error("entry (" + std::to_string(i) + "," +
                                            std::to_string(k) + ") is not proper");
            G.at(i, k) = std::move(r);
        }
    }
    return G;
}

TransferMatrix load_system(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    json j;
    in >> j;
    return system_from_json(j);
}

void save_system(const TransferMatrix& G, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << system_to_json(G).dump(2) << "\n";
}

json matrix_to_json(const Eigen::MatrixXd& M) {
    json rows = json::array();
    for (int i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
        rows.push_back(row);
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw Error("matrix JSON must be a nonempty array of rows");
    int rows = static_cast<int>(j.size());
    int cols = static_cast<int>(j[0].size());
    Eigen::MatrixXd M(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (static_cast<int>(j[static_cast<size_t>(i)].size()) != cols) {
            throw Error("ragged matrix JSON");
        }
        for (int c = 0; c < cols; ++c) M(i, c) = j[static_cast<size_t>(i)][static_cast<size_t>(c)].get<double>();
    }
    return M;
}

json realization_to_json(const StateSpaceRealization& ss) {
    json j;
    j["A"] = matrix_to_json(ss.A);
    j["B"] = matrix_to_json(ss.B);
    j["C"] = matrix_to_json(ss.C);
    j["D"] = matrix_to_json(ss.D);
    return j;
}

std::string ni_verdict_name(NIVerdict v) {
    switch (v) {
        case NIVerdict::NotNI: return "not-ni";
        case NIVerdict::NI: return "ni";
        case NIVerdict::SNI: return "sni";
    }
    throw Error("unknown verdict");
}

std::string verdict_name(StabilityStatus s) {
    switch (s) {
        case StabilityStatus::Stable: return "stable";
        case StabilityStatus::Unstable: return "unstable";
        case StabilityStatus::IllPosed: return "ill-posed";
        case StabilityStatus::Inconclusive: return "inconclusive";
    }
    throw Error("unknown status");
}

json classification_to_json(const NIClassification& c, const ClassifyOptions& opt) {
    json j;
    j["verdict"] = ni_verdict_name(c.verdict);
    j["stable"] = c.stable;
    if (c.witness) {
        json w;
        switch (c.witness->clause) {
            case NIClause::RHPPole: w["clause"] = "rhp-pole"; break;
            case NIClause::FrequencyInequality: w["clause"] = "frequency-inequality"; break;
            case NIClause::AxisResidue: w["clause"] = "axis-residue"; break;
            case NIClause::OriginLimit: w["clause"] = "origin-limit"; break;
        }
        if (c.witness->at_origin) {
            w["omega0"] = "origin";
        } else if (c.witness->at_infinity) {
            w["omega0"] = "infinity";
        } else {
            w["omega0"] = c.witness->omega0;
        }
        w["x_re"] = cvec_to_json(c.witness->direction, false);
        w["x_im"] = cvec_to_json(c.witness->direction, true);
        w["defect"] = c.witness->defect;
        j["witness"] = w;
    }
    json mp = json::array();
    for (const auto& p : c.marginal_poles) {
        json e;
        e["re"] = p.location.real();
        e["im"] = p.location.imag();
        e["multiplicity"] = p.multiplicity;
        mp.push_back(e);
    }
    j["marginal_poles"] = mp;
    j["strictness_margin"] = c.strictness_margin;
    j["strictness_omega"] = c.strictness_omega;
    j["grid"] = {{"omega_min", c.grid.omega_min},
                 {"omega_max", c.grid.omega_max},
                 {"evaluated_points", c.grid.base_points},
                 {"refined_points", c.grid.refined_points},
                 {"tol", opt.tol}};
    return j;
}

json verdict_to_json(const StabilityVerdict& v) {
    json j;
    j["status"] = verdict_name(v.status);
    if (v.offending_pole) {
        j["offending_pole"] = {{"re", v.offending_pole->real()}, {"im", v.offending_pole->imag()}};
    }
    if (v.failed_condition) j["failed_condition"] = *v.failed_condition;
    j["boundary"] = v.boundary;
    j["condition_values"] = v.condition_values;
    return j;
}

json homotopy_to_json(const HomotopyReport& r) {
    json j;
    j["tau_grid"] = r.tau_grid;
    json db = json::array(), dc = json::array();
    for (const auto& t : r.det_b) db.push_back({t[0], t[1], t[2]});
    for (const auto& t : r.det_c) dc.push_back({t[0], t[1], t[2]});
    j["det_conditions_b"] = db;
    j["det_conditions_c"] = dc;
    j["statement_a"] = r.statement_a;
    j["statement_b"] = r.statement_b;
    j["statement_c"] = r.statement_c;
    j["equivalent_verdict"] = r.equivalent_verdict;
    j["refinements"] = r.refinements;
    return j;
}

json necessity_to_json(const NecessityVerdict& v) {
    json j;
    switch (v.status) {
        case NecessityStatus::RobustlyStabilizing: j["status"] = "robustly-stabilizing"; break;
        case NecessityStatus::Violated: j["status"] = "violated"; break;
        case NecessityStatus::ClassImpossible: j["status"] = "class-impossible"; break;
    }
    json conds = json::array();
    for (const auto& [label, pass] : v.controller_conditions) {
        conds.push_back({{"condition", label}, {"holds", pass}});
    }
    j["controller_conditions"] = conds;
    if (v.violation) {
        json w;
        switch (v.violation->kind) {
            case ViolationKind::NotSNI: w["kind"] = "not-sni"; break;
            case ViolationKind::NotNI: w["kind"] = "not-ni"; break;
            case ViolationKind::StaticGainBound: w["kind"] = "static-gain-bound"; break;
            case ViolationKind::InstGainSign: w["kind"] = "inst-gain-sign"; break;
            case ViolationKind::NonexistenceClass: w["kind"] = "nonexistence-class"; break;
        }
        if (v.violation->at_origin) {
            w["omega0"] = "origin";
        } else if (v.violation->at_infinity) {
            w["omega0"] = "infinity";
        } else {
            w["omega0"] = v.violation->omega0;
        }
        if (v.violation->direction.size() > 0) {
            w["x_re"] = cvec_to_json(v.violation->direction, false);
            w["x_im"] = cvec_to_json(v.violation->direction, true);
        }
        w["margin"] = v.violation->margin;
        j["violation"] = w;
    }
    return j;
}

json recipe_to_json(const CounterexampleRecipe& r) {
    json j;
    j["recipe_kind"] = recipe_kind_name(r.kind);
    j["omega0"] = r.omega0;
    if (r.x.size() > 0) {
        j["x_re"] = cvec_to_json(r.x, false);
        j["x_im"] = cvec_to_json(r.x, true);
    }
    j["r"] = r.r;
    j["theta"] = r.theta;
    if (r.alpha.size() > 0) {
        j["alpha"] = std::vector<double>(r.alpha.data(), r.alpha.data() + r.alpha.size());
        j["beta"] = std::vector<double>(r.beta.data(), r.beta.data() + r.beta.size());
    }
    if (r.catalog_param_name != 0) {
        j["catalog_param"] = {{"name", std::string(1, r.catalog_param_name)},
                              {"value", r.catalog_param}};
    }
    if (r.epsilon != 0.0) j["epsilon"] = r.epsilon;
    if (r.M.size() > 0) j["M"] = matrix_to_json(r.M);
    if (r.U.size() > 0) j["U"] = matrix_to_json(r.U);
    if (r.D.size() > 0) j["D"] = matrix_to_json(r.D);
    if (r.E0.size() > 0) j["E0"] = matrix_to_json(r.E0);
    if (r.lossless.k != 0.0) {
        j["lossless"] = {{"omega1", r.lossless.omega1}, {"k", r.lossless.k}};
    }
    j["plant"] = system_to_json(r.plant);
    return j;
}

std::string file_hash(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << "fnv1a64:" << std::hex << h;
    return os.str();
}

}  // namespace nicert
