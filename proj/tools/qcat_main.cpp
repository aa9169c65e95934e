#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "qcat/io.hpp"
#include "qcat/protocols.hpp"
#include "qcat/soundness.hpp"

namespace {

using nlohmann::ordered_json;
using namespace qcat;

constexpr int kExitParse = 2;
constexpr int kExitInvalid = 3;
constexpr int kExitCertification = 4;
constexpr int kExitUnknownRule = 5;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw QcatError("cannot write file: " + path);
    out << text;
}

// Loads and validates a document; exits 2 on parse errors, 3 on defects.
Diagram load_diagram(const std::string& path) {
    Diagram d;
    try {
        d = parse_document(read_file(path));
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        std::exit(kExitParse);
    }
    const std::vector<Defect> defects = validate(d);
    if (!defects.empty()) {
        std::cerr << "invalid diagram:\n";
        for (const Defect& defect : defects) std::cerr << "  " << defect.display() << "\n";
        std::exit(kExitInvalid);
    }
    return d;
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("QCAT_SEED")) {
        try {
            return std::stoull(env);
        } catch (...) {
            std::cerr << "warning: ignoring non-numeric QCAT_SEED\n";
        }
    }
    return 7;
}

std::string format_amp(const Complex& c) {
    std::ostringstream os;
    os.precision(12);
    os << c.real();
    if (c.imag() >= 0)
        os << "+" << c.imag() << "i";
    else
        os << c.imag() << "i";
    return os.str();
}

ordered_json trace_json(const RewriteTrace& trace) {
    ordered_json steps = ordered_json::array();
    for (const RewriteStep& s : trace.steps) {
        ordered_json js;
        js["rule"] = s.rule;
        js["match"] = s.summary;
        js["deposited"] = ordered_json::array({s.deposited.real(), s.deposited.imag()});
        js["verdict"] = s.verdict.empty() ? "unverified" : s.verdict;
        steps.push_back(std::move(js));
    }
    ordered_json out;
    out["steps"] = std::move(steps);
    out["step_limit_reached"] = trace.step_limit_reached;
    return out;
}

void maybe_write_report(const std::optional<std::string>& path, const ordered_json& report) {
    if (path.has_value()) write_file(*path, report.dump(2) + "\n");
}

int cmd_eval(const std::string& file, const std::optional<std::string>& out_path) {
    const Diagram d = load_diagram(file);
    const ComplexTensor value = evaluate(d);

    std::ostringstream os;
    os << "legs:";
    if (value.legs().empty()) {
        os << " scalar\n";
        os << "scalar = " << format_amp(value.scalar_value()) << "\n";
    } else {
        os << " out[";
        for (int i = 0; i < value.n_outputs(); ++i)
            os << (i ? "," : "") << value.legs()[static_cast<std::size_t>(i)].dim;
        os << "] in[";
        for (int i = 0; i < value.n_inputs(); ++i)
            os << (i ? "," : "")
               << value.legs()[static_cast<std::size_t>(value.n_outputs() + i)].dim;
        os << "]\n";
        std::vector<int> idx(value.legs().size(), 0);
        for (std::size_t flat = 0; flat < value.size(); ++flat) {
            const Complex amp = value.amplitudes()[flat];
            if (std::abs(amp) > 1e-12) {
                os << "[";
                for (std::size_t i = 0; i < idx.size(); ++i) os << (i ? "," : "") << idx[i];
                os << "] = " << format_amp(amp) << "\n";
            }
            for (int axis = static_cast<int>(idx.size()) - 1; axis >= 0; --axis) {
                if (++idx[static_cast<std::size_t>(axis)] <
                    value.legs()[static_cast<std::size_t>(axis)].dim)
                    break;
                idx[static_cast<std::size_t>(axis)] = 0;
            }
        }
    }
    std::cout << os.str();
    if (out_path.has_value()) write_file(*out_path, os.str());
    return 0;
}

int cmd_rewrite(const std::string& file, const std::string& rules_csv, int max_steps, bool verify,
                const std::optional<std::string>& out_path,
                const std::optional<std::string>& report_path) {
    const Diagram d = load_diagram(file);

    std::vector<std::string> strategy;
    std::stringstream ss(rules_csv);
    std::string token;
    while (std::getline(ss, token, ','))
        if (!token.empty()) strategy.push_back(token);
    for (const std::string& name : strategy)
        if (find_rule(name) == nullptr) {
            std::cerr << "unknown rule: " << name << "\n";
            return kExitUnknownRule;
        }

    const auto t0 = std::chrono::steady_clock::now();
    const NormalizeResult result = normalize(d, strategy, max_steps, verify);
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - t0)
                             .count();

    const std::string doc = serialize_document(result.diagram);
    if (out_path.has_value())
        write_file(*out_path, doc);
    else
        std::cout << doc;

    ordered_json report;
    report["command"] = "rewrite";
    report["rules"] = strategy;
    report["trace"] = trace_json(result.trace);
    report["steps_applied"] = result.trace.steps.size();
    report["timing_ms"] = elapsed;
    maybe_write_report(report_path, report);

    std::cerr << "applied " << result.trace.steps.size() << " steps";
    if (result.trace.step_limit_reached) std::cerr << " (step limit reached)";
    std::cerr << "\n";
    if (verify && !result.trace.all_verified_ok()) {
        std::cerr << "soundness failure: a verified step did not preserve the evaluation\n";
        return kExitCertification;
    }
    return 0;
}

int cmd_verify_rules(const std::string& dims_csv, int trials, std::uint64_t seed,
                     const std::optional<std::string>& report_path,
                     const std::string& reproducer_dir) {
    std::vector<int> dims;
    std::stringstream ss(dims_csv);
    std::string token;
    while (std::getline(ss, token, ','))
        if (!token.empty()) dims.push_back(std::stoi(token));

    std::string corrupt;
    if (const char* env = std::getenv("QCAT_CORRUPT_RULE")) corrupt = env;

    const auto t0 = std::chrono::steady_clock::now();
    const SoundnessReport report = verify_builtin_rules(dims, trials, seed, corrupt);
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - t0)
                             .count();

    ordered_json jreport;
    jreport["command"] = "verify-rules";
    jreport["seed"] = seed;
    jreport["trials"] = trials;
    ordered_json rows = ordered_json::array();
    for (const RuleCheckRow& row : report.rows) {
        std::ostringstream line;
        line << row.rule << " d=" << row.dim << ": " << row.passed << "/" << row.trials << " pass";
        if (row.unverified > 0) line << ", " << row.unverified << " unverified";
        if (row.failed > 0) line << ", " << row.failed << " FAIL";
        std::cout << line.str() << "\n";
        ordered_json jrow;
        jrow["rule"] = row.rule;
        jrow["dim"] = row.dim;
        jrow["passed"] = row.passed;
        jrow["failed"] = row.failed;
        jrow["unverified"] = row.unverified;
        jrow["verdict"] = row.failed == 0 ? "pass" : "fail";
        rows.push_back(std::move(jrow));
    }
    jreport["rows"] = std::move(rows);
    jreport["timing_ms"] = elapsed;
    jreport["verdict"] = report.all_passed() ? "pass" : "fail";
    maybe_write_report(report_path, jreport);

    if (!report.all_passed()) {
        for (std::size_t i = 0; i < report.failures.size(); ++i) {
            const RuleTrialFailure& f = report.failures[i];
            std::ostringstream path;
            path << reproducer_dir << "/qcat-reproducer-" << f.rule << "-d" << f.dim << "-t"
                 << f.trial << ".qcat.json";
            write_file(path.str(), serialize_document(f.host, false));
            std::cerr << "FAIL " << f.rule << " d=" << f.dim << " trial " << f.trial << ": "
                      << f.reason << " (reproducer: " << path.str() << ")\n";
        }
        return kExitCertification;
    }
    std::cout << "all rules sound: " << report.rows.size() << " rule/dim combinations, " << trials
              << " trials each\n";
    return 0;
}

void print_protocol_report(const ProtocolReport& report) {
    std::cout << "protocol: " << report.protocol << "  d=" << report.dim;
    if (report.seed != 0) std::cout << "  seed=" << report.seed;
    std::cout << "\n";
    if (!report.branches.empty()) {
        std::cout << "branch            probability    max deviation\n";
        for (const ProtocolBranchRow& row : report.branches) {
            std::ostringstream line;
            line.setf(std::ios::left);
            line.width(18);
            line << row.label;
            std::ostringstream nums;
            nums.precision(6);
            nums << std::fixed << row.probability;
            nums << "       ";
            nums.precision(3);
            nums << std::scientific << row.deviation;
            std::cout << line.str() << nums.str() << "\n";
        }
    }
    {
        std::ostringstream os;
        os.precision(3);
        os << std::scientific << report.completeness_residual;
        std::cout << "completeness residual: " << os.str() << "\n";
    }
    if (report.protocol == "ghz") {
        std::ostringstream os;
        os.precision(3);
        os << std::scientific << report.state_error;
        std::cout << "state error: " << os.str() << "  rewrite steps: " << report.trace.steps.size()
                  << "\n";
    } else {
        std::ostringstream os;
        os.precision(3);
        os << std::scientific << report.channel_error;
        std::cout << "channel error: " << os.str() << "\n";
    }
    for (const std::string& note : report.notes) std::cout << "note: " << note << "\n";
    std::cout << (report.passed ? "PASS" : "FAIL") << "\n";
}

ordered_json protocol_report_json(const ProtocolReport& report) {
    ordered_json out;
    out["command"] = "protocol";
    out["protocol"] = report.protocol;
    out["dim"] = report.dim;
    out["seed"] = report.seed;
    ordered_json branches = ordered_json::array();
    for (const ProtocolBranchRow& row : report.branches) {
        ordered_json jb;
        jb["label"] = row.label;
        jb["probability"] = row.probability;
        jb["deviation"] = row.deviation;
        branches.push_back(std::move(jb));
    }
    out["branches"] = std::move(branches);
    out["completeness_residual"] = report.completeness_residual;
    out["channel_error"] = report.channel_error;
    out["state_error"] = report.state_error;
    if (!report.trace.steps.empty()) out["trace"] = trace_json(report.trace);
    out["notes"] = report.notes;
    out["verdict"] = report.passed ? "pass" : "fail";
    return out;
}

int cmd_protocol(const std::string& name, int dim, std::uint64_t seed, int p, int q, int trials,
                 const std::optional<std::string>& report_path) {
    ProtocolReport report;
    if (name == "ghz") {
        report = run_ghz(dim);
    } else if (name == "superdense") {
        report = run_superdense(dim, p, q);
    } else if (name == "teleport") {
        report = run_teleport(dim, trials, seed);
    } else if (name == "gate-teleport") {
        report = run_gate_teleport(dim, std::min(trials, 5), seed);
    } else {
        std::cerr << "unknown protocol: " << name << "\n";
        return kExitParse;
    }
    print_protocol_report(report);
    maybe_write_report(report_path, protocol_report_json(report));
    return report.passed ? 0 : kExitCertification;
}

int cmd_export(const std::string& file, const std::string& format,
               const std::optional<std::string>& out_path) {
    const Diagram d = load_diagram(file);
    if (format != "dot") {
        std::cerr << "unknown export format: " << format << "\n";
        return kExitParse;
    }
    const std::string text = export_dot(d);
    if (out_path.has_value())
        write_file(*out_path, text);
    else
        std::cout << text;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qudit circuit diagrams: evaluation, certified rewriting, protocols"};
    app.require_subcommand(1);

    std::string file;
    std::optional<std::string> out_path, report_path;

    auto* eval = app.add_subcommand("eval", "evaluate a diagram to its tensor");
    eval->add_option("file", file, "diagram document (.qcat.json)")->required();
    eval->add_option("--out", out_path, "also write the printed tensor to a file");

    std::string rules_csv;
    int max_steps = 100;
    bool verify = false;
    auto* rewrite = app.add_subcommand("rewrite", "apply rewrite rules until fixpoint");
    rewrite->add_option("file", file, "diagram document (.qcat.json)")->required();
    rewrite->add_option("--rules", rules_csv, "comma-separated rule names, in strategy order")
        ->required();
    rewrite->add_option("--max-steps", max_steps, "step limit");
    rewrite->add_flag("--verify", verify, "certify every step numerically");
    rewrite->add_option("--out", out_path, "output document path (default: stdout)");
    rewrite->add_option("--report", report_path, "machine-readable JSON report path");

    std::string dims_csv = "2,3,4,5";
    int trials = 25;
    std::uint64_t seed = default_seed();
    std::string reproducer_dir = ".";
    auto* verify_rules =
        app.add_subcommand("verify-rules", "randomized soundness check of every builtin rule");
    verify_rules->add_option("--dims", dims_csv, "comma-separated dimensions");
    verify_rules->add_option("--trials", trials, "random hosts per rule and dimension");
    verify_rules->add_option("--seed", seed, "RNG seed (default: QCAT_SEED or 7)");
    verify_rules->add_option("--report", report_path, "JSON report path");
    verify_rules->add_option("--reproducer-dir", reproducer_dir,
                             "directory for failure reproducer files");

    std::string protocol_name;
    int dim = 2, enc_p = 0, enc_q = 0, protocol_trials = 10;
    auto* protocol = app.add_subcommand("protocol", "run a certified protocol reproduction");
    protocol->add_option("name", protocol_name, "ghz | superdense | teleport | gate-teleport")
        ->required();
    protocol->add_option("--dim", dim, "qudit dimension");
    protocol->add_option("--seed", seed, "RNG seed (default: QCAT_SEED or 7)");
    protocol->add_option("--p", enc_p, "superdense encoding p");
    protocol->add_option("--q", enc_q, "superdense encoding q");
    protocol->add_option("--trials", protocol_trials, "random density-operator trials");
    protocol->add_option("--report", report_path, "JSON report path");

    std::string format = "dot";
    auto* export_cmd = app.add_subcommand("export", "export a diagram as Graphviz text");
    export_cmd->add_option("file", file, "diagram document (.qcat.json)")->required();
    export_cmd->add_option("--format", format, "output format (dot)");
    export_cmd->add_option("--out", out_path, "output path (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (eval->parsed()) return cmd_eval(file, out_path);
        if (rewrite->parsed())
            return cmd_rewrite(file, rules_csv, max_steps, verify, out_path, report_path);
        if (verify_rules->parsed())
            return cmd_verify_rules(dims_csv, trials, seed, report_path, reproducer_dir);
        if (protocol->parsed())
            return cmd_protocol(protocol_name, dim, seed, enc_p, enc_q, protocol_trials,
                                report_path);
        if (export_cmd->parsed()) return cmd_export(file, format, out_path);
    } catch (const UnknownRule& e) {
        std::cerr << e.what() << "\n";
        return kExitUnknownRule;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kExitInvalid;
    } catch (const QcatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
