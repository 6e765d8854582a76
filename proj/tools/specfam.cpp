// specfam command line: gen | analyze | split | reconstruct | verify
//
// Exit codes: 0 pass, 1 a check failed, 2 usage or I/O error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>

#include "CLI11.hpp"
#include "json.hpp"
#include "specfam/error.hpp"
#include "specfam/gallery.hpp"
#include "specfam/matrix_market.hpp"
#include "specfam/verify.hpp"

namespace {

using namespace specfam;

constexpr int exit_pass = 0;
constexpr int exit_fail = 1;
constexpr int exit_usage = 2;

struct Options {
    std::string kind = "random";
    std::size_t dim = 8;
    std::uint64_t seed = 1;
    std::string mode = "real";
    std::vector<double> spectrum;
    std::string input;
    std::string out;
    VerifyConfig cfg;
};

// Write to a sibling temp file and rename, so a reader never sees half a report.
void emit(const std::string& text, const std::string& out) {
    if (out.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    const std::filesystem::path target(out);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        f << text;
        f.flush();
        if (!f) throw std::runtime_error("write to '" + tmp.string() + "' failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot move report into '" + out + "': " + ec.message());
    }
}

OperatorSpec make_spec(const Options& o) {
    OperatorSpec s;
    s.kind = o.input.empty() ? parse_kind(o.kind) : OperatorKind::file;
    s.dim = o.dim;
    s.seed = o.seed;
    s.spectrum = o.spectrum;
    s.path = o.input;
    s.mode = parse_mode(o.mode);
    if (s.kind == OperatorKind::file && s.path.empty()) throw Error("--kind file needs --input <path>");
    if (s.kind == OperatorKind::diagonal && s.spectrum.empty()) throw Error("--kind diagonal needs --spectrum");
    if (s.kind != OperatorKind::diagonal && s.kind != OperatorKind::file && s.dim < 1) {
        throw Error("--dim must be at least 1");
    }
    return s;
}

template <Field T>
int run(const std::string& verb, const Options& o, const OperatorSpec& spec) {
    const auto a = generate<T>(spec);
    if (verb == "gen") {
        std::ostringstream os;
        write_matrix_market(os, a);
        emit(os.str(), o.out);
        return exit_pass;
    }
    nlohmann::json report;
    int code = exit_pass;
    if (verb == "verify") {
        report = verify_report(a, spec, o.cfg);
        if (report["status"] != "pass") code = exit_fail;
    } else {
        report = report_envelope(verb, spec);
        if (verb == "analyze") report["family"] = analyze_report(a, o.cfg);
        if (verb == "split") report["split"] = split_report(a, o.cfg);
        if (verb == "reconstruct") report["quadrature"] = reconstruct_report(a, o.cfg);
    }
    emit(report.dump(2) + "\n", o.out);
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral families of self-adjoint matrices"};
    app.require_subcommand(1, 1);
    Options o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--kind", o.kind, "laplacian1d | oscillator | random | diagonal | file")
            ->check(CLI::IsMember({"laplacian1d", "oscillator", "random", "diagonal", "file"}));
        sub->add_option("--dim", o.dim, "matrix dimension");
        sub->add_option("--seed", o.seed, "random seed");
        sub->add_option("--mode", o.mode, "real | complex")->check(CLI::IsMember({"real", "complex"}));
        sub->add_option("--spectrum", o.spectrum, "eigenvalues for --kind diagonal")->delimiter(',');
        sub->add_option("--input", o.input, "Matrix Market file (implies --kind file)");
        sub->add_option("--out", o.out, "output path (default stdout)");
        sub->add_option("--k-max", o.cfg.k_max, "largest quadrature refinement")
            ->check(CLI::Range(1, 1 << 20));
        sub->add_option("--tol-scale", o.cfg.tol_scale, "multiplier on every tolerance")
            ->check(CLI::PositiveNumber);
        sub->add_option("--beta", o.cfg.beta, "splitting parameter");
        sub->add_option("--trials", o.cfg.trials, "random probes per check")->check(CLI::Range(1, 100000));
    };
    const std::pair<const char*, const char*> verbs[] = {
        {"gen", "write the operator as Matrix Market"},
        {"analyze", "jump points and family residuals for both routes"},
        {"split", "E = P_F(B+beta,beta) and the parts A_-, A_+"},
        {"reconstruct", "quadrature error table and operator reconstruction"},
        {"verify", "run every check; exit 1 if any fails"},
    };
    for (auto [verb, what] : verbs) add_common(app.add_subcommand(verb, what));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_pass : exit_usage;
    }
    const std::string verb = app.get_subcommands().front()->get_name();
    o.cfg.seed = o.seed;

    try {
        const auto spec = make_spec(o);
        return spec.mode == FieldMode::real ? run<double>(verb, o, spec) : run<Complex>(verb, o, spec);
    } catch (const std::exception& e) {
        std::cerr << "specfam " << verb << ": " << e.what() << "\n";
        return exit_usage;
    }
}
