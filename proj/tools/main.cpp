// Command-line front end for the quasipolynomial recasting pipeline:
// validate / embed / lv / check-bec / simulate / verify / examples.
//
// Exit codes: 0 success, 1 validation error, 2 domain error, 3 I/O error.
// Failures print a machine-readable JSON object to standard error.

#include "lvnf/errors.hpp"
#include "lvnf/examples.hpp"
#include "lvnf/json_io.hpp"
#include "lvnf/nonpoly.hpp"
#include "lvnf/qp_system.hpp"
#include "lvnf/simulate.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace {

using lvnf::AuxSpec;
using lvnf::AuxTransform;
using lvnf::GeneralSystem;
using lvnf::IntegratorConfig;
using lvnf::LVSystem;
using lvnf::ModelKind;
using lvnf::QPSystem;
using lvnf::Rational;
using nlohmann::json;

int exit_code_for(lvnf::Error::Kind kind) {
    switch (kind) {
        case lvnf::Error::Kind::Validation: return 1;
        case lvnf::Error::Kind::Domain: return 2;
        case lvnf::Error::Kind::Io: return 3;
        case lvnf::Error::Kind::Internal: return 1;
    }
    return 1;
}

const char* kind_label(lvnf::Error::Kind kind) {
    switch (kind) {
        case lvnf::Error::Kind::Validation: return "validation";
        case lvnf::Error::Kind::Domain: return "domain";
        case lvnf::Error::Kind::Io: return "io";
        case lvnf::Error::Kind::Internal: return "internal";
    }
    return "internal";
}

void print_error(const std::string& kind, const std::string& message) {
    json j;
    j["error"]["kind"] = kind;
    j["error"]["message"] = message;
    std::cerr << j.dump(2) << "\n";
}

// The common result channel: stdout by default, a file with --out.
void emit(const std::string& out_path, const std::string& content) {
    lvnf::write_text_file(out_path.empty() ? "-" : out_path, content);
}

// --aux accepts either a JSON file path or an inline "p=...,q=..." form
// (p components separated by ':'). The inline form addresses the single
// function of the system; multi-function systems need the file form.
AuxSpec parse_aux(const std::string& arg, const GeneralSystem& sys) {
    if (arg.empty()) return lvnf::examples::default_aux(sys);
    if (arg.find('=') == std::string::npos) {
        return lvnf::aux_from_json(lvnf::read_text_file(arg));
    }
    if (sys.functions.size() != 1) {
        throw lvnf::ValidationError(
            "inline --aux addresses exactly one function; this system has " +
            std::to_string(sys.functions.size()) + ", use an aux JSON file");
    }
    AuxTransform t = AuxTransform::identity(sys.var_count());
    std::string token;
    std::stringstream ss(arg);
    while (std::getline(ss, token, ',')) {
        auto eq = token.find('=');
        if (eq == std::string::npos) {
            throw lvnf::ValidationError("bad --aux token '" + token +
                                        "', expected key=value");
        }
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        if (key == "q") {
            t.q = Rational::parse(value);
        } else if (key == "p") {
            t.p.clear();
            std::string comp;
            std::stringstream ps(value);
            while (std::getline(ps, comp, ':')) t.p.push_back(Rational::parse(comp));
        } else {
            throw lvnf::ValidationError("unknown --aux key '" + key +
                                        "', expected p or q");
        }
    }
    if (t.p.size() != sys.var_count()) {
        throw lvnf::ValidationError("--aux p needs " + std::to_string(sys.var_count()) +
                                    " ':'-separated components");
    }
    AuxSpec spec;
    spec.by_function[sys.functions[0].name] = std::move(t);
    return spec;
}

json rational_matrix_json(const lvnf::RationalMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
        rows.push_back(std::move(row));
    }
    return rows;
}

struct ValidateArgs {
    std::string input;
    std::string out;
};

int cmd_validate(const ValidateArgs& args) {
    const std::string text = lvnf::read_text_file(args.input);
    json report;
    bool valid = false;
    switch (lvnf::detect_model(text)) {
        case ModelKind::General: {
            GeneralSystem sys = lvnf::general_from_json(text);
            lvnf::GeneralValidationReport rep = lvnf::validate_general(sys);
            valid = rep.valid;
            report["kind"] = "general";
            report["valid"] = rep.valid;
            report["issues"] = rep.issues;
            break;
        }
        case ModelKind::QP: {
            QPSystem sys = lvnf::qp_from_json(text);
            lvnf::ValidationReport rep = lvnf::validate(sys);
            valid = rep.valid;
            report["kind"] = "glv";
            report["valid"] = rep.valid;
            report["issues"] = rep.issues;
            report["variables"] = rep.var_count;
            report["quasimonomials"] = rep.monomial_count;
            break;
        }
        case ModelKind::LV: {
            LVSystem sys = lvnf::lv_from_json(text);
            std::vector<std::string> issues;
            const std::size_t m = sys.dim();
            if (m == 0) issues.push_back("the LV system is empty");
            if (sys.A_prime.rows() != m || sys.A_prime.cols() != m) {
                issues.push_back("A_prime must be square with one row per quasimonomial");
            }
            if (sys.lambda_prime.rows() != m || sys.lambda_prime.cols() != 1) {
                issues.push_back("lambda_prime must be a column with one entry per quasimonomial");
            }
            if (sys.z0 && sys.z0->size() != m) {
                issues.push_back("z0 must have one entry per quasimonomial");
            }
            valid = issues.empty();
            report["kind"] = "lv";
            report["valid"] = valid;
            report["issues"] = issues;
            break;
        }
    }
    emit(args.out, report.dump(2) + "\n");
    return valid ? 0 : 1;
}

struct EmbedArgs {
    std::string input;
    std::string aux;
    std::string out;
};

int cmd_embed(const EmbedArgs& args) {
    GeneralSystem sys = lvnf::general_from_json(lvnf::read_text_file(args.input));
    AuxSpec spec = parse_aux(args.aux, sys);
    lvnf::EmbeddingResult result = lvnf::introduce_aux(sys, spec);
    emit(args.out, lvnf::to_json(result.glv));
    return 0;
}

struct LvArgs {
    std::string input;
    std::string out;
};

int cmd_lv(const LvArgs& args) {
    const std::string text = lvnf::read_text_file(args.input);
    if (lvnf::detect_model(text) != ModelKind::QP) {
        throw lvnf::ValidationError("lv expects a GLV system; run embed first");
    }
    QPSystem sys = lvnf::qp_from_json(text);
    emit(args.out, lvnf::to_json(lvnf::lv_embed(sys)));
    return 0;
}

struct CheckBecArgs {
    std::string first;
    std::string second;
    std::string out;
};

int cmd_check_bec(const CheckBecArgs& args) {
    QPSystem a = lvnf::qp_from_json(lvnf::read_text_file(args.first));
    QPSystem b = lvnf::qp_from_json(lvnf::read_text_file(args.second));
    lvnf::BecVerdict verdict = lvnf::check_bec(a, b);
    json j;
    j["equivalent"] = verdict.equivalent;
    j["witness"] = verdict.witness ? rational_matrix_json(*verdict.witness) : json(nullptr);
    j["diagnostic"] = verdict.diagnostic;
    emit(args.out, j.dump(2) + "\n");
    return 0;
}

struct SimulateArgs {
    std::string input;
    std::string out;
    IntegratorConfig cfg;
};

int cmd_simulate(const SimulateArgs& args) {
    const std::string text = lvnf::read_text_file(args.input);
    lvnf::Trajectory traj;
    switch (lvnf::detect_model(text)) {
        case ModelKind::General:
            traj = lvnf::simulate(lvnf::general_from_json(text), args.cfg);
            break;
        case ModelKind::QP:
            traj = lvnf::simulate(lvnf::qp_from_json(text), args.cfg);
            break;
        case ModelKind::LV:
            traj = lvnf::simulate(lvnf::lv_from_json(text), args.cfg);
            break;
    }
    if (traj.truncated) {
        print_error("domain",
                    "trajectory truncated at t = " + std::to_string(*traj.truncated_at) +
                        "; partial trajectory written");
    }
    emit(args.out, lvnf::trajectory_csv(traj));
    return 0;
}

struct VerifyArgs {
    std::string input;
    std::string aux;
    std::string out;
    IntegratorConfig cfg;
};

int cmd_verify(const VerifyArgs& args) {
    const std::string text = lvnf::read_text_file(args.input);
    lvnf::VerifyReport rep;
    switch (lvnf::detect_model(text)) {
        case ModelKind::General: {
            GeneralSystem sys = lvnf::general_from_json(text);
            rep = lvnf::verify_equivalence(sys, parse_aux(args.aux, sys), args.cfg);
            break;
        }
        case ModelKind::QP:
            if (!args.aux.empty()) {
                throw lvnf::ValidationError(
                    "--aux applies to general systems; a GLV system is already embedded");
            }
            rep = lvnf::verify_equivalence(lvnf::qp_from_json(text), args.cfg);
            break;
        case ModelKind::LV:
            throw lvnf::ValidationError(
                "verify expects a general system or a GLV system, not an LV normal form");
    }
    emit(args.out, lvnf::to_json(rep));
    return 0;
}

struct ExamplesArgs {
    std::string name;
    std::vector<std::string> params;
    std::string out;
};

int cmd_examples(const ExamplesArgs& args) {
    std::map<std::string, double> bound;
    for (const std::string& p : args.params) {
        auto eq = p.find('=');
        if (eq == std::string::npos) {
            throw lvnf::ValidationError("bad --param '" + p + "', expected name=value");
        }
        const std::string name = p.substr(0, eq);
        try {
            bound[name] = std::stod(p.substr(eq + 1));
        } catch (const std::exception&) {
            throw lvnf::ValidationError("bad --param value in '" + p + "'");
        }
    }
    auto take = [&bound](const std::string& name, double fallback) {
        auto it = bound.find(name);
        if (it == bound.end()) return fallback;
        double v = it->second;
        bound.erase(it);
        return v;
    };

    GeneralSystem sys;
    if (args.name == "enzyme") {
        sys = lvnf::examples::enzyme_system(take("a", 1.0), take("b", 1.0),
                                            take("c", 1.0), take("d", 1.0));
    } else if (args.name == "morse") {
        sys = lvnf::examples::morse_system(take("d", 1.0), take("alpha", 1.0),
                                           take("c", 4.0));
    } else {
        throw lvnf::ValidationError("unknown example '" + args.name +
                                    "'; available: enzyme, morse");
    }
    if (!bound.empty()) {
        throw lvnf::ValidationError("unknown parameter '" + bound.begin()->first +
                                    "' for example '" + args.name + "'");
    }

    if (args.out == "-") {
        emit("-", lvnf::to_json(sys));
        return 0;
    }
    const std::string sys_path = args.out.empty() ? args.name + ".json" : args.out;
    std::string aux_path = sys_path;
    const auto dot = aux_path.rfind(".json");
    if (dot != std::string::npos && dot == aux_path.size() - 5) {
        aux_path.erase(dot);
    }
    aux_path += "_aux.json";
    lvnf::write_text_file(sys_path, lvnf::to_json(sys));
    lvnf::write_text_file(aux_path, lvnf::to_json(lvnf::examples::default_aux(sys)));
    std::cerr << "wrote " << sys_path << " and " << aux_path << "\n";
    return 0;
}

void add_integrator_flags(CLI::App* cmd, IntegratorConfig& cfg) {
    cmd->add_option("--t0", cfg.t0, "start time (default 0)");
    cmd->add_option("--t1", cfg.t1, "end time (default 1)");
    cmd->add_option("--dt", cfg.dt, "fixed integration step (default 1e-4)");
    cmd->add_option("--record-every", cfg.record_every,
                    "record every k-th step (default 1)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quasipolynomial recasting pipeline: embed ODE systems into "
                 "generalized Lotka-Volterra form and reduce them to the "
                 "Lotka-Volterra normal form."};
    app.require_subcommand(1);

    ValidateArgs validate_args;
    CLI::App* validate = app.add_subcommand("validate", "Check a model file");
    validate->add_option("input", validate_args.input,
                         "model JSON (general, GLV, or LV); '-' reads stdin")
        ->required();
    validate->add_option("--out", validate_args.out, "report path (default stdout)");

    EmbedArgs embed_args;
    CLI::App* embed = app.add_subcommand(
        "embed", "Introduce auxiliary variables: general system -> GLV system");
    embed->add_option("input", embed_args.input, "general-system JSON; '-' reads stdin")
        ->required();
    embed->add_option("--aux", embed_args.aux,
                      "aux JSON file or inline 'p=...,q=...' (p components "
                      "':'-separated); default p=0, q=1");
    embed->add_option("--out", embed_args.out, "output path (default stdout)");

    LvArgs lv_args;
    CLI::App* lv = app.add_subcommand(
        "lv", "Reduce a GLV system to its Lotka-Volterra normal form");
    lv->add_option("input", lv_args.input, "GLV JSON; '-' reads stdin")->required();
    lv->add_option("--out", lv_args.out, "output path (default stdout)");

    CheckBecArgs bec_args;
    CLI::App* bec = app.add_subcommand(
        "check-bec", "Decide whether two GLV systems share their equivalence class");
    bec->add_option("first", bec_args.first, "GLV JSON")->required();
    bec->add_option("second", bec_args.second, "GLV JSON")->required();
    bec->add_option("--out", bec_args.out, "verdict path (default stdout)");

    SimulateArgs sim_args;
    CLI::App* sim = app.add_subcommand("simulate", "Integrate a model, write CSV");
    sim->add_option("input", sim_args.input, "model JSON; '-' reads stdin")->required();
    add_integrator_flags(sim, sim_args.cfg);
    sim->add_option("--out", sim_args.out, "CSV path (default stdout)");

    VerifyArgs verify_args;
    CLI::App* verify = app.add_subcommand(
        "verify", "Integrate original and recast systems, report the deviation");
    verify->add_option("input", verify_args.input,
                       "general-system or GLV JSON; '-' reads stdin")
        ->required();
    verify->add_option("--aux", verify_args.aux, "aux choice (as in embed)");
    add_integrator_flags(verify, verify_args.cfg);
    verify->add_option("--out", verify_args.out, "report path (default stdout)");

    ExamplesArgs ex_args;
    CLI::App* examples = app.add_subcommand(
        "examples", "Write a bundled example system and its default aux spec");
    examples->add_option("name", ex_args.name, "enzyme | morse")->required();
    examples->add_option("--param", ex_args.params,
                         "override a model parameter, e.g. --param c=2");
    examples->add_option("--out", ex_args.out,
                         "system path ('-' prints the system JSON alone)");

    try {
        app.parse(argc, argv);
        if (validate->parsed()) return cmd_validate(validate_args);
        if (embed->parsed()) return cmd_embed(embed_args);
        if (lv->parsed()) return cmd_lv(lv_args);
        if (bec->parsed()) return cmd_check_bec(bec_args);
        if (sim->parsed()) return cmd_simulate(sim_args);
        if (verify->parsed()) return cmd_verify(verify_args);
        if (examples->parsed()) return cmd_examples(ex_args);
        throw lvnf::InternalError("no subcommand dispatched");
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error("validation", e.what());
        return 1;
    } catch (const lvnf::Error& e) {
        print_error(kind_label(e.kind()), e.what());
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        print_error("internal", e.what());
        return 1;
    }
}
