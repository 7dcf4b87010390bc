#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "entroscope/errors.hpp"
#include "entroscope/homotopy.hpp"
#include "entroscope/io.hpp"
#include "entroscope/lab.hpp"

namespace {

using namespace entroscope;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitTruncated = 2;
constexpr int kExitChecksFailed = 3;

void apply_breakpoint_cap_env() {
    const char* raw = std::getenv("ENTROSCOPE_BREAKPOINT_CAP");
    if (!raw) return;
    try {
        const unsigned long long cap = std::stoull(raw);
        set_breakpoint_cap(static_cast<std::size_t>(cap));
    } catch (const std::exception&) {
        std::cerr << "warning: ignoring invalid ENTROSCOPE_BREAKPOINT_CAP='" << raw << "'\n";
    }
}

Rational parse_rational_arg(const std::string& text, const std::string& what) {
    const auto value = Rational::parse(text);
    if (!value) throw ParameterError("cannot parse " + what + " '" + text + "' as a rational");
    return *value;
}

io::MapDocument load_unit_map(const std::string& path) {
    io::MapDocument doc = io::load_map(path);
    if (doc.map.domain_lo() != Rational(0) || doc.map.domain_hi() != Rational(1) ||
        !doc.map.is_unit_map()) {
        throw ValidationError("the input map must be a self-map of [0,1]");
    }
    return doc;
}

int cmd_entropy(const std::string& input, unsigned n_max, unsigned n_cap, double tol,
                const std::string& format, bool base2) {
    const io::MapDocument doc = load_unit_map(input);
    const EntropyEstimate est = entropy_estimate(doc.map, n_max, n_cap, tol);
    if (format == "json") {
        std::cout << io::estimate_to_json(est, base2);
    } else if (format == "csv") {
        std::cout << io::estimate_to_csv(est, base2);
    } else {
        std::cout << io::estimate_to_text(est, base2);
    }
    return est.truncated ? kExitTruncated : kExitOk;
}

int cmd_homotopy(const std::string& input, const std::string& family,
                 const std::vector<std::string>& t_args, const std::string& alpha_arg,
                 const std::string& out_dir, bool plot) {
    const io::MapDocument doc = load_unit_map(input);

    Rational alpha(0);
    if (family == "Halpha") {
        if (alpha_arg.empty()) throw ParameterError("family Halpha requires --alpha");
        alpha = parse_rational_arg(alpha_arg, "--alpha");
        if (alpha < Rational(20)) throw ParameterError("--alpha must be at least 20");
    }

    std::vector<Rational> ts;
    for (const std::string& arg : t_args) {
        Rational t = parse_rational_arg(arg, "--t");
        if (t < Rational(0) || t > Rational(1)) {
            throw ParameterError("homotopy parameter t must lie in [0,1], got " + t.str());
        }
        ts.push_back(std::move(t));
    }

    std::filesystem::create_directories(out_dir);
    for (const Rational& t : ts) {
        PLMap h = [&] {
            if (family == "Halpha") return homotopy_H_alpha(doc.map, t, alpha);
            if (family == "H1") return homotopy_H1(doc.map, t);
            if (family == "H2") return homotopy_H2(doc.map, t);
            return homotopy_H(doc.map, t);
        }();
        const std::string stem = family + "_t_" + t.numerator().get_str() + "_" +
                                 t.denominator().get_str();
        const std::filesystem::path base = std::filesystem::path(out_dir) / stem;
        std::string meta = family + " at t=" + t.str();
        if (family == "Halpha") meta += " alpha=" + alpha.str();
        if (!doc.metadata.empty()) meta += " of " + doc.metadata;
        io::save_map(base.string() + ".json", io::MapDocument{h, meta});
        if (plot) {
            std::ofstream svg(base.string() + ".svg");
            if (!svg) throw ValidationError("cannot write " + base.string() + ".svg");
            svg << io::map_to_svg(h);
        }
        std::cout << base.string() << ".json\n";
    }
    return kExitOk;
}

int report_and_exit_code(const VerificationReport& report, const std::string& format) {
    if (format == "json") {
        std::cout << io::report_to_json(report);
    } else {
        std::cout << io::report_to_text(report);
    }
    if (!report.all_passed()) {
        for (const std::string& name : report.failing_names()) {
            std::cerr << "failed: " << name << "\n";
        }
        return kExitChecksFailed;
    }
    return kExitOk;
}

int cmd_verify(unsigned long seed, unsigned long corpus_size, const std::string& format) {
    return report_and_exit_code(run_full_suite(seed, corpus_size), format);
}

int cmd_example(const std::string& name, const std::string& x0_arg,
                const std::vector<unsigned long>& ns, const std::string& format) {
    if (name == "convexity-gt") {
        return report_and_exit_code(run_example_convexity_gt(), format);
    }
    if (name == "convexity-le0") {
        return report_and_exit_code(run_example_convexity_le0(), format);
    }
    const Rational x0 = parse_rational_arg(x0_arg, "--x0");
    return report_and_exit_code(run_fixed_point_counterexample(x0, ns), format);
}

}  // namespace

int main(int argc, char** argv) {
    apply_breakpoint_cap_env();

    CLI::App app{"exact piecewise-linear interval maps: certified entropy bounds, box maps and "
                 "entropy-monotone homotopies"};
    app.require_subcommand(1);

    std::string input, format = "text", family, alpha_arg, out_dir = ".";
    std::vector<std::string> t_args;
    unsigned n_max = 10, n_cap = 8;
    double tol = 1e-9;
    bool base2 = false, plot = false;
    unsigned long seed = 7, corpus_size = 100;
    std::string example_name, x0_arg = "1/3";
    std::vector<unsigned long> ns = {10, 100, 1000};

    CLI::App* entropy = app.add_subcommand("entropy", "certified entropy bounds for a map file");
    entropy->add_option("input", input, "map document (JSON)")->required();
    entropy->add_option("--n-max", n_max, "depth of the lap-count trace")->check(CLI::PositiveNumber);
    entropy->add_option("--n-cap", n_cap, "largest horseshoe size searched")
        ->check(CLI::Range(2u, 1000u));
    entropy->add_option("--tol", tol, "spectral-radius bracket width")->check(CLI::PositiveNumber);
    entropy->add_option("--format", format, "text, json or csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    entropy->add_flag("--base2", base2, "report bits instead of nats");

    CLI::App* homotopy = app.add_subcommand("homotopy", "evaluate a homotopy at given times");
    homotopy->add_option("input", input, "map document (JSON)")->required();
    homotopy->add_option("--family", family, "Halpha, H1, H2 or H")
        ->required()
        ->check(CLI::IsMember({"Halpha", "H1", "H2", "H"}));
    homotopy->add_option("--t", t_args, "homotopy times, rationals in [0,1]")->required();
    homotopy->add_option("--alpha", alpha_arg, "steepness, required for Halpha (>= 20)");
    homotopy->add_option("--out", out_dir, "output directory");
    homotopy->add_flag("--plot", plot, "also write an SVG per map");

    CLI::App* verify = app.add_subcommand("verify", "run the whole verification suite");
    verify->add_option("--seed", seed, "corpus seed");
    verify->add_option("--corpus-size", corpus_size, "number of random maps")
        ->check(CLI::PositiveNumber);
    verify->add_option("--format", format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));

    CLI::App* example = app.add_subcommand("example", "run one named counterexample");
    example->add_option("name", example_name, "convexity-gt, convexity-le0 or fixed-point")
        ->required()
        ->check(CLI::IsMember({"convexity-gt", "convexity-le0", "fixed-point"}));
    example->add_option("--x0", x0_arg, "pinned fixed point for fixed-point");
    example->add_option("--n", ns, "denominators for fixed-point");
    example->add_option("--format", format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (entropy->parsed()) return cmd_entropy(input, n_max, n_cap, tol, format, base2);
        if (homotopy->parsed()) return cmd_homotopy(input, family, t_args, alpha_arg, out_dir, plot);
        if (verify->parsed()) return cmd_verify(seed, corpus_size, format);
        if (example->parsed()) return cmd_example(example_name, x0_arg, ns, format);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
