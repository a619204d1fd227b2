#include "frame_iterates/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "frame_iterates/errors.hpp"

namespace fi {

namespace {

const std::vector<std::string> kCommands = {"generate", "analyze", "represent", "dual", "perturb", "ladder", "reproduce"};

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::ParseError, "'" + path + "': " + e.what());
    }
}

// Applies the keys of a --config file; unknown keys are rejected so that typos do not pass silently.
void apply_config(RunConfig& cfg, const nlohmann::json& j) {
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "command") cfg.command = value.get<std::string>();
            else if (key == "name") cfg.name = value.get<std::string>();
            else if (key == "input") cfg.inputs = value.is_array() ? value.get<std::vector<std::string>>()
                                                                   : std::vector<std::string>{value.get<std::string>()};
            else if (key == "output") cfg.output = value.get<std::string>();
            else if (key == "spec") cfg.spec_path = value.get<std::string>();
            else if (key == "windows") cfg.windows = value.get<std::vector<long>>();
            else if (key == "tau_scale") cfg.tau_scale = value.get<double>();
            else if (key == "eta") cfg.eta = value.get<double>();
            else if (key == "edge_width") cfg.edge_width = value.get<int>();
            else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
            else if (key == "format") cfg.format = value.get<std::string>();
            else if (key == "c") cfg.c = value.get<double>();
            else if (key == "alpha") cfg.alpha = value.get<double>();
            else throw Error(ErrorKind::ParseError, "unknown config key '" + key + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::ParseError, std::string("config: ") + e.what());
    }
}

FrameFamily load_family(const RunConfig& cfg, std::size_t which = 0) {
    if (cfg.inputs.size() > which) return read_family(cfg.inputs[which]);
    if (which == 0 && !cfg.spec_path.empty()) return generate(spec_from_json(read_json_file(cfg.spec_path)));
    throw Error(ErrorKind::SpecError, cfg.command + " needs --input" + (which == 0 ? " or --spec" : " twice"));
}

GeneratorSpec load_spec(const RunConfig& cfg) {
    if (cfg.spec_path.empty()) throw Error(ErrorKind::SpecError, cfg.command + " needs --spec");
    return spec_from_json(read_json_file(cfg.spec_path));
}

void contract(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorKind::ContractViolation, what);
}

Json analyze(const RunConfig& cfg, const Tolerances& tol) {
    const FrameFamily fam = load_family(cfg);
    const SynthesisOperator syn = synthesis(fam, tol);
    const KernelBasis exact = kernel_basis(syn, tol);
    const KernelBasis diag_ker = diagnostic_kernel(syn, tol);
    const ShiftDefect right = shift_invariance_defect(diag_ker, ShiftDirection::Right, tol);
    const ShiftDefect left = shift_invariance_defect(diag_ker, ShiftDirection::Left, tol);
    Json j{{"family", fam.label},
           {"window", Json::array({fam.k_min, fam.k_max})},
           {"ambient", fam.ambient_dim()},
           {"diagnostics", to_json(frame_bounds(syn))},
           {"kernel", Json{{"dim", exact.dim},
                           {"diagnostic_dim", diag_ker.dim},
                           {"near", diag_ker.near},
                           {"defect_right", number(right.defect)},
                           {"defect_left", number(left.defect)},
                           {"trusted", right.trusted},
                           {"interior_dim", right.interior_dim},
                           {"quarantined", right.quarantined}}}};
    if (cfg.inputs.empty()) {
        const GeneratorSpec spec = load_spec(cfg);
        j["spec"] = spec_to_json(spec);
        if (spec.kind == GeneratorKind::ShiftInvariant) {
            Json p = to_json(phi_profile(profile_samples(spec.profile, 16, 8), 8));
            j["phi"] = p;
        }
    }
    return j;
}

Json represent(const RunConfig& cfg, const Tolerances& tol) {
    const FrameFamily fam = load_family(cfg);
    const IteratedRep rep = build_iterated(fam, tol);
    Json j{{"family", fam.label}, {"representation", to_json(rep)}};
    if (!rep.representable) {
        j["verdict"] = "NotRepresentable";
        return j;
    }
    j["verdict"] = "representable";
    j["norm_bounds"] = to_json(norm_bounds_check(rep, frame_bounds(fam, tol), false));
    j["intertwining"] = to_json(intertwining_check(fam, rep, tol));
    j["toeplitz"] = to_json(toeplitz_unitarity_check(fam, rep));
    return j;
}

void attach_uniqueness(const FrameFamily& fam, const IteratedRep& rep, DualFamily& dual, Json& out,
                       const Tolerances& tol) {
    try {
        const UniquenessReport u = dual_operator_uniqueness(fam, rep, dual, tol);
        dual.uniqueness_residual = u.residual;
        out = to_json(dual);
        out["uniqueness"] = to_json(u);
        contract(u.residual <= 1e-7, dual.provenance + " dual: ||V T* - I|| = " + std::to_string(u.residual));
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::NotApplicable) throw;
        out = to_json(dual);
        out["uniqueness"] = Json{{"applicable", false}, {"reason", e.what()}};
    }
}

Json dual(const RunConfig& cfg, const Tolerances& tol) {
    const FrameFamily fam = load_family(cfg);
    const IteratedRep rep = build_iterated(fam, tol);
    Json duals = Json::array();

    DualFamily can = canonical_dual(fam, rep, tol);
    contract(can.reconstruction_residual <= 1e-8, "canonical dual does not reconstruct");
    if (rep.invertible && can.iterated_form_residual)
        contract(*can.iterated_form_residual <= 1e-7, "canonical dual is not an iterated system");
    Json entry;
    if (rep.representable) attach_uniqueness(fam, rep, can, entry, tol);
    else entry = to_json(can);
    duals.push_back(entry);

    if (rep.invertible) {
        DualFamily h0 = dual_from_h0(fam, rep, random_span_vector(fam, cfg.seed), tol);
        contract(h0.reconstruction_residual <= 1e-8, "h0-formula dual does not reconstruct");
        attach_uniqueness(fam, rep, h0, entry, tol);
        duals.push_back(entry);
    }
    if (cfg.inputs.size() >= 2) {
        DualFamily user = user_dual(fam, read_family(cfg.inputs[1]));
        if (rep.representable && user.reconstruction_residual <= 1e-8) attach_uniqueness(fam, rep, user, entry, tol);
        else entry = to_json(user);
        entry["verified"] = user.reconstruction_residual <= 1e-8;
        duals.push_back(entry);
    }
    return Json{{"family", fam.label}, {"representation", to_json(rep)}, {"duals", duals}};
}

Json perturb(const RunConfig& cfg, const Tolerances& tol) {
    const FrameFamily f = load_family(cfg, 0);
    const FrameFamily g = load_family(cfg, 1);
    const PerturbationVerdict v = measure_perturbation(f, g, tol);
    const OracleReport o = monte_carlo_oracle(f, g, 10000, cfg.seed);
    Json j{{"f", f.label}, {"g", g.label}, {"perturbation", to_json(v)}, {"oracle", to_json(o)}};
    if (v.cond_l1l2) j["transfer"] = to_json(check_representability_transfer(f, g, v, tol));
    contract(o.mu_sup <= v.mu_min * (1.0 + 1e-10) + 1e-14, "Monte-Carlo mu exceeds the operator norm");
    contract(o.lambda1_sup <= v.lambda1_min * (1.0 + 1e-10) + 1e-14, "Monte-Carlo lambda_1 exceeds the measured value");
    contract(o.ratio_min >= o.gram_min - 1e-8 && o.ratio_max <= o.gram_max + 1e-8,
             "sampled ||Uc||^2 / ||c||^2 leaves the Gram spectrum");
    return j;
}

std::string render(const RunConfig& cfg, const Json& report, const std::string& csv) {
    if (cfg.format == "csv" && !csv.empty()) return csv;
    return report.dump(2) + "\n";
}

}  // namespace

Tolerances tolerances_for(const RunConfig& cfg) {
    Tolerances tol;
    if (cfg.tau_scale) {
        if (!(*cfg.tau_scale > 0.0)) throw Error(ErrorKind::SpecError, "--tau-scale must be positive");
        tol.tau_scale = *cfg.tau_scale;
    }
    if (cfg.eta) {
        if (!(*cfg.eta > 0.0)) throw Error(ErrorKind::SpecError, "--eta must be positive");
        tol.eta = *cfg.eta;
    }
    if (cfg.edge_width) {
        if (*cfg.edge_width <= 0) throw Error(ErrorKind::SpecError, "--edge-width must be positive");
        tol.edge_width = *cfg.edge_width;
    }
    return tol;
}

RunConfig parse_command_line(int argc, const char* const* argv) {
    CLI::App app{"Finite-window analysis of iterated frame systems {T^k f_0}", "frame-iterates"};
    std::string command, name, config_path, spec_path, output, format;
    std::vector<std::string> inputs;
    std::vector<long> windows;
    double tau_scale = 0, eta = 0, c = 0, alpha = 0;
    int edge_width = 0;
    std::uint64_t seed = 1;

    app.add_option("command", command, "generate | analyze | represent | dual | perturb | ladder | reproduce")
        ->check(CLI::IsMember(kCommands));
    app.add_option("name", name, "reproduction name (reproduce only)");
    app.add_option("--config", config_path, "JSON file with defaults; explicit flags take precedence");
    app.add_option("--spec", spec_path, "generator spec JSON file");
    app.add_option("--input", inputs, "family file (.json or .csv); perturb and dual accept a second one");
    app.add_option("--output", output, "report path, written atomically; stdout when omitted");
    app.add_option("--windows", windows, "ladder windows, ascending, e.g. 8,16,32,64")->delimiter(',');
    app.add_option("--tau-scale", tau_scale, "multiplier of the rank cutoff");
    app.add_option("--eta", eta, "edge-mass bound for trusted kernel directions");
    app.add_option("--edge-width", edge_width, "coefficient slots per window end");
    app.add_option("--seed", seed, "seed for probe vectors and Monte-Carlo oracles");
    app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--c", c, "translation of f_0 for sinc-perturb");
    app.add_option("--alpha", alpha, "coefficient for mu-independence");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        throw;
    } catch (const CLI::ParseError& e) {
        throw Error(ErrorKind::ParseError, e.what());
    }

    RunConfig cfg;
    if (app.count("--config")) apply_config(cfg, read_json_file(config_path));
    if (app.count("command")) cfg.command = command;
    if (app.count("name")) cfg.name = name;
    if (app.count("--spec")) cfg.spec_path = spec_path;
    if (app.count("--input")) cfg.inputs = inputs;
    if (app.count("--output")) cfg.output = output;
    if (app.count("--windows")) cfg.windows = windows;
    if (app.count("--tau-scale")) cfg.tau_scale = tau_scale;
    if (app.count("--eta")) cfg.eta = eta;
    if (app.count("--edge-width")) cfg.edge_width = edge_width;
    if (app.count("--seed")) cfg.seed = seed;
    if (app.count("--format")) cfg.format = format;
    if (app.count("--c")) cfg.c = c;
    if (app.count("--alpha")) cfg.alpha = alpha;

    if (cfg.command.empty()) throw Error(ErrorKind::ParseError, "missing command");
    if (std::find(kCommands.begin(), kCommands.end(), cfg.command) == kCommands.end())
        throw Error(ErrorKind::ParseError, "unknown command '" + cfg.command + "'");
    if (cfg.format != "json" && cfg.format != "csv") throw Error(ErrorKind::ParseError, "--format must be json or csv");
    for (std::size_t i = 1; i < cfg.windows.size(); ++i)
        if (cfg.windows[i] <= cfg.windows[i - 1]) throw Error(ErrorKind::ParseError, "--windows must be ascending");
    return cfg;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        const Tolerances tol = tolerances_for(cfg);
        Json report = envelope(cfg.command, tol);
        report["seed"] = cfg.seed;
        std::string csv;
        if (cfg.command == "generate") {
            const GeneratorSpec spec = load_spec(cfg);
            const FrameFamily fam = generate(spec);
            report["spec"] = spec_to_json(spec);
            report.update(family_to_json(fam));
            if (cfg.format == "csv") {
                std::ostringstream s;
                write_csv(s, fam.vectors);
                csv = s.str();
            }
        } else if (cfg.command == "analyze") {
            report["report"] = analyze(cfg, tol);
        } else if (cfg.command == "represent") {
            report["report"] = represent(cfg, tol);
        } else if (cfg.command == "dual") {
            report["report"] = dual(cfg, tol);
        } else if (cfg.command == "perturb") {
            report["report"] = perturb(cfg, tol);
        } else if (cfg.command == "ladder") {
            const GeneratorSpec spec = load_spec(cfg);
            LadderOptions opt;
            opt.tol = tol;
            const std::vector<long> windows = cfg.windows.empty() ? std::vector<long>{8, 16, 32, 64} : cfg.windows;
            const BoundednessLadder ladder = boundedness_ladder(spec, windows, opt);
            report["spec"] = spec_to_json(spec);
            report["report"] = to_json(ladder);
            csv = ladder_csv(ladder);
        } else if (cfg.command == "reproduce") {
            if (cfg.name.empty()) throw Error(ErrorKind::SpecError, "reproduce needs a name");
            report["name"] = cfg.name;
            report["report"] = reproduce(cfg.name, cfg);
            report["status"] = "ok";
        } else {
            throw Error(ErrorKind::ParseError, "unknown command '" + cfg.command + "'");
        }
        const std::string text = render(cfg, report, csv);
        if (cfg.output.empty()) out << text;
        else write_atomic(cfg.output, text);
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.kind() == ErrorKind::ContractViolation ? kExitContract : kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    try {
        cfg = parse_command_line(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << "usage: frame-iterates <command> [name] [--spec FILE] [--input FILE]... [--output FILE]\n"
               "       [--windows 8,16,32,64] [--tau-scale X] [--eta X] [--edge-width W] [--seed N]\n"
               "       [--format json|csv] [--c X] [--alpha X] [--config FILE]\n"
               "commands: generate analyze represent dual perturb ladder reproduce\n"
               "reproductions:";
        for (const auto& n : reproduction_names()) out << ' ' << n;
        out << '\n';
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return run(cfg, out, err);
}

}  // namespace fi
