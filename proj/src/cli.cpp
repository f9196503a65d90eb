#include "nicert/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "nicert/errors.hpp"
#include "nicert/json_io.hpp"
#include "nicert/sampler.hpp"
#include "nicert/tolerances.hpp"
#include "nicert/uncertainty.hpp"

namespace nicert::cli {

namespace {

json tolerance_block(const ClassifyOptions& opt) {
    return {{"rank_rel", tol::rank_rel},
            {"axis_pole", tol::axis_pole},
            {"eig_margin", tol::eig_margin},
            {"det_wellposed", tol::det_wellposed},
            {"freq_ineq", opt.tol},
            {"pin", tol::pin},
            {"stability_re", tol::stability_re},
            {"grid", {{"omega_min", opt.omega_min},
                      {"omega_max", opt.omega_max},
                      {"base_points", opt.base_points}}}};
}

struct ReportSink {
    std::string verb;
    json inputs = json::object();
    json body = json::object();
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    void add_input(const std::string& path) { inputs[path] = file_hash(path); }

    void emit(const std::string& json_path, const ClassifyOptions& opt) {
        json rep;
        rep["verb"] = verb;
        rep["inputs"] = inputs;
        rep["report"] = body;
        rep["tolerances"] = tolerance_block(opt);
        rep["timing_ms"] =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();
        if (!json_path.empty()) {
            std::ofstream out(json_path);
            if (!out) throw Error("cannot write " + json_path);
            out << rep.dump(2) << "\n";
        }
    }
};

UncertaintyClass parse_class(const std::string& name, double gamma, bool gamma_set) {
    auto kind = kind_from_name(name);
    if (!kind) throw Error("unknown class '" + name + "'");
    UncertaintyClass cls{*kind, std::nullopt};
    if (gamma_set) cls.gamma = gamma;
    validate_class(cls);
    return cls;
}

int run_or_usage_error(const std::vector<std::string>& args) {
    CLI::App app{"negative-imaginary analysis, feedback certificates, and counterexample synthesis"};
    app.require_subcommand(1);

    ClassifyOptions opt;
    std::string json_path;
    app.add_option("--json", json_path, "write the machine report to this path")->capture_default_str();
    app.add_option("--omega-min", opt.omega_min, "frequency grid lower edge")->capture_default_str();
    app.add_option("--omega-max", opt.omega_max, "frequency grid upper edge")->capture_default_str();
    app.add_option("--grid-points", opt.base_points, "base grid size")->capture_default_str();
    app.add_option("--freq-tol", opt.tol, "frequency inequality tolerance")->capture_default_str();

    // classify
    auto* classify_cmd = app.add_subcommand("classify", "NI / SNI membership of a system");
    std::string classify_file;
    classify_cmd->add_option("system", classify_file, "system JSON file")->required();

    // certify
    auto* certify_cmd = app.add_subcommand("certify", "feedback stability of [P, C]");
    std::string certify_method = "oracle";
    std::string plant_file, controller_file, psi_file;
    certify_cmd->add_option("--method", certify_method, "oracle|lemma2|lemma3|lemma4|thm1|thm2")
        ->check(CLI::IsMember({"oracle", "lemma2", "lemma3", "lemma4", "thm1", "thm2"}));
    certify_cmd->add_option("--psi", psi_file, "symmetric matrix JSON for the lemma4 parameter");
    certify_cmd->add_option("plant", plant_file, "plant JSON")->required();
    certify_cmd->add_option("controller", controller_file, "controller JSON")->required();

    // robust-check / attack / prove-sufficiency / sample
    std::string class_name, out_file, ctrl_file;
    double gamma = 0.0;
    int samples = 100, dim = 1, modes = 2;
    std::uint64_t seed = 1;
    double scale = 1.0;

    auto add_class_opts = [&](CLI::App* cmd, bool need_ctrl) {
        cmd->add_option("--class", class_name, "uncertainty class (kebab-case)")->required();
        cmd->add_option("--gamma", gamma, "static-gain bound for the bounded classes");
        if (need_ctrl) cmd->add_option("controller", ctrl_file, "controller JSON")->required();
    };

    auto* robust_cmd = app.add_subcommand("robust-check", "necessity conditions for a class");
    add_class_opts(robust_cmd, true);

    auto* attack_cmd = app.add_subcommand("attack", "synthesize a destabilizing in-class plant");
    add_class_opts(attack_cmd, true);
    attack_cmd->add_option("-o,--output", out_file, "write the plant system JSON here");

    auto* suff_cmd = app.add_subcommand("prove-sufficiency", "sampled sufficiency sweep");
    add_class_opts(suff_cmd, true);
    suff_cmd->add_option("--samples", samples, "number of sampled plants")->capture_default_str();
    suff_cmd->add_option("--seed", seed, "sampler seed")->capture_default_str();

    auto* sample_cmd = app.add_subcommand("sample", "draw one in-class plant");
    add_class_opts(sample_cmd, false);
    sample_cmd->add_option("-n,--dim", dim, "system dimension")->capture_default_str();
    sample_cmd->add_option("--modes", modes, "modal terms")->capture_default_str();
    sample_cmd->add_option("--seed", seed, "sampler seed")->capture_default_str();
    sample_cmd->add_option("--scale", scale, "gain scale")->capture_default_str();
    sample_cmd->add_option("-o,--output", out_file, "output system JSON")->required();

    std::vector<const char*> argv;
    argv.push_back("nicert");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    ReportSink sink;

    if (classify_cmd->parsed()) {
        sink.verb = "classify";
        sink.add_input(classify_file);
        TransferMatrix G = load_system(classify_file);
        NIClassification c = classify_ni(G, opt);
        sink.body = classification_to_json(c, opt);
        sink.emit(json_path, opt);
        std::cout << "verdict: " << ni_verdict_name(c.verdict) << "\n";
        if (c.witness) {
            std::cout << "witness: omega0=" << c.witness->omega0
                      << " defect=" << c.witness->defect << "\n";
        }
        return c.verdict == NIVerdict::NotNI ? 1 : 0;
    }

    if (certify_cmd->parsed()) {
        sink.verb = "certify";
        sink.add_input(plant_file);
        sink.add_input(controller_file);
        TransferMatrix P = load_system(plant_file);
        TransferMatrix C = load_system(controller_file);
        if (certify_method == "thm1") {
            HomotopyReport rep = theorem1_check(P, C);
            sink.body = homotopy_to_json(rep);
            sink.emit(json_path, opt);
            std::cout << "homotopy statements agree: " << (rep.equivalent_verdict ? "yes" : "no")
                      << ", stable for all tau: " << (rep.statement_a ? "yes" : "no") << "\n";
            return rep.equivalent_verdict && rep.statement_a ? 0 : 1;
        }
        StabilityVerdict v;
        if (certify_method == "oracle") {
            v = oracle_stability(P, C);
        } else if (certify_method == "lemma2") {
            v = lemma2_check(P, C);
        } else if (certify_method == "lemma3") {
            v = lemma3_check(P, C);
        } else if (certify_method == "lemma4") {
            std::optional<PsiParameter> psi;
            if (!psi_file.empty()) {
                std::ifstream in(psi_file);
                if (!in) throw Error("cannot open " + psi_file);
                json pj;
                in >> pj;
                psi = PsiParameter{matrix_from_json(pj)};
            }
            v = lemma4_check(P, C, psi);
        } else {
            v = theorem2_check(P, C);
        }
        sink.body = verdict_to_json(v);
        sink.emit(json_path, opt);
        std::cout << "status: " << verdict_name(v.status);
        if (v.failed_condition) std::cout << " (condition " << *v.failed_condition << ")";
        std::cout << "\n";
        return v.status == StabilityStatus::Stable ? 0 : 1;
    }

    if (robust_cmd->parsed()) {
        sink.verb = "robust-check";
        sink.add_input(ctrl_file);
        UncertaintyClass cls = parse_class(class_name, gamma, robust_cmd->count("--gamma") > 0);
        TransferMatrix C = load_system(ctrl_file);
        NecessityVerdict v = necessity_check(C, cls);
        sink.body = necessity_to_json(v);
        sink.emit(json_path, opt);
        for (const auto& [label, ok] : v.controller_conditions) {
            std::cout << (ok ? "  [ok]   " : "  [fail] ") << label << "\n";
        }
        switch (v.status) {
            case NecessityStatus::RobustlyStabilizing:
                std::cout << "robustly stabilizing for class " << kind_name(cls.kind) << "\n";
                return 0;
            case NecessityStatus::ClassImpossible:
                std::cout << "no stable controller stabilizes this class\n";
                return 1;
            case NecessityStatus::Violated:
                std::cout << "necessity violated\n";
                return 1;
        }
    }

    if (attack_cmd->parsed()) {
        sink.verb = "attack";
        sink.add_input(ctrl_file);
        UncertaintyClass cls = parse_class(class_name, gamma, attack_cmd->count("--gamma") > 0);
        TransferMatrix C = load_system(ctrl_file);
        NecessityVerdict v = necessity_check(C, cls);
        if (v.status == NecessityStatus::RobustlyStabilizing) {
            std::cout << "controller satisfies the necessity conditions; nothing to attack\n";
            sink.body = necessity_to_json(v);
            sink.emit(json_path, opt);
            return 1;
        }
        CounterexampleRecipe rec = synthesize_destabilizer(C, cls, v);
        VerificationReport ver = verify_counterexample(rec, C, cls);
        sink.body["necessity"] = necessity_to_json(v);
        sink.body["recipe"] = recipe_to_json(rec);
        sink.body["verification"] = {{"in_class", ver.in_class},
                                     {"pinned", ver.pinned},
                                     {"loop_not_stable", ver.loop_not_stable},
                                     {"values", ver.values}};
        sink.emit(json_path, opt);
        if (!out_file.empty()) save_system(rec.plant, out_file);
        std::cout << "destabilizing plant synthesized (" << recipe_kind_name(rec.kind)
                  << "), verified\n";
        return 0;
    }

    if (suff_cmd->parsed()) {
        sink.verb = "prove-sufficiency";
        sink.add_input(ctrl_file);
        UncertaintyClass cls = parse_class(class_name, gamma, suff_cmd->count("--gamma") > 0);
        TransferMatrix C = load_system(ctrl_file);
        SufficiencyReport rep = sufficiency_check(C, cls, samples, seed);
        sink.body = {{"samples", rep.samples},
                     {"stable", rep.stable},
                     {"psi_static_gain_confirms", rep.psi_static_gain_confirms},
                     {"seed", seed}};
        sink.emit(json_path, opt);
        std::cout << rep.stable << "/" << rep.samples << " sampled loops stable\n";
        return rep.stable == rep.samples ? 0 : 1;
    }

    if (sample_cmd->parsed()) {
        sink.verb = "sample";
        UncertaintyClass cls = parse_class(class_name, gamma, sample_cmd->count("--gamma") > 0);
        SampleSpec spec{cls, dim, modes, seed, scale};
        TransferMatrix P = sample_plant(spec);
        save_system(P, out_file);
        sink.body = {{"class", kind_name(cls.kind)}, {"n", dim}, {"modes", modes},
                     {"seed", seed}, {"output", out_file}};
        sink.emit(json_path, opt);
        std::cout << "sample written to " << out_file << "\n";
        return 0;
    }

    return 2;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    try {
        return run_or_usage_error(args);
    } catch (const CLI::Error&) {
        return 2;
    } catch (const VerificationFailed& e) {
        std::cerr << "error: verification failed (" << e.clause() << "): " << e.what() << "\n";
        return 1;
    } catch (const NotSynthesizable& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace nicert::cli
