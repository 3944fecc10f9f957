// Command-line surface over the set-embedding library. All I/O is JSON on
// files or stdio. Exit codes: 0 success, 2 usage/parse error, 3 numerical
// failure.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "setrep/analysis.hpp"
#include "setrep/json_io.hpp"

namespace {

using setrep::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

std::string read_input(const std::string& path) {
    if (path.empty() || path == "-") {
        std::stringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("--input", "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const json& j, const std::string& path) {
    std::string text = j.dump(2) + "\n";
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    out << text;
}

setrep::SetMatrix load_matrix(const std::string& path) {
    return setrep::set_matrix_from_json(json::parse(read_input(path)));
}

std::vector<double> parse_grid(const std::string& spec) {
    std::vector<double> grid;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) grid.push_back(std::stod(tok));
    }
    if (grid.empty()) throw CLI::ValidationError("--grid", "empty grid");
    return grid;
}

struct Options {
    std::string input;
    std::string output;
    std::string arch = "lp";
    std::string bank_mode = "moment-curve";
    std::string grid = "0,1,2";
    std::string claim_id;
    int n = 0;
    int d = 0;
    std::uint64_t seed = 0;
    double tol = 1e-6;
    long budget = 1000000;
    int trials = 20;
    std::string epsilons = "0,1e-9,1e-6,1e-3";
};

setrep::ToleranceConfig tolerance_from(const Options& opt) {
    setrep::ToleranceConfig cfg;
    cfg.verify_rel = opt.tol;
    return cfg;
}

int run_dims(const Options& opt) {
    write_output(setrep::to_json(setrep::dims(opt.n, opt.d, setrep::arch_from_string(opt.arch))),
                 opt.output);
    return kExitOk;
}

int run_encode(const Options& opt) {
    setrep::SetMatrix x = load_matrix(opt.input);
    setrep::Arch arch = setrep::arch_from_string(opt.arch);
    setrep::BankMode mode = setrep::bank_mode_from_string(opt.bank_mode);
    setrep::Embedding emb =
        arch == setrep::Arch::LP
            ? setrep::encode_lp(x, setrep::assemble_lp_weights(x.rows(), x.cols(), mode, opt.seed))
            : setrep::encode_le(x,
                                setrep::assemble_le_exponents(x.rows(), x.cols(), mode, opt.seed));
    write_output(setrep::to_json(emb), opt.output);
    return kExitOk;
}

int run_decode(const Options& opt) {
    setrep::Embedding emb = setrep::embedding_from_json(json::parse(read_input(opt.input)));
    setrep::ToleranceConfig cfg = tolerance_from(opt);
    setrep::DecodeReport report;
    if (emb.arch == setrep::Arch::LP) {
        auto w = setrep::assemble_lp_weights(emb.header.n, emb.header.d, emb.header.bank_mode,
                                             emb.header.seed);
        report = setrep::decode_lp(emb, w, cfg);
    } else {
        auto e = setrep::assemble_le_exponents(emb.header.n, emb.header.d, emb.header.bank_mode,
                                               emb.header.seed);
        report = setrep::decode_le(emb, e, cfg);
    }
    write_output(setrep::to_json(report), opt.output);
    return kExitOk;
}

int run_roundtrip(const Options& opt) {
    setrep::SetMatrix x = load_matrix(opt.input);
    auto [report, distance] =
        setrep::roundtrip(x, setrep::arch_from_string(opt.arch),
                          setrep::bank_mode_from_string(opt.bank_mode), opt.seed,
                          tolerance_from(opt));
    json out = {{"report", setrep::to_json(report)}, {"distance", distance}};
    write_output(out, opt.output);
    return (report.verified && distance <= opt.tol) ? kExitOk : kExitNumeric;
}

int run_verify(const Options& opt) {
    setrep::ClaimReport report;
    if (opt.claim_id == "counterexample") {
        report = setrep::reproduce_counterexample();
    } else if (opt.claim_id == "injectivity_sweep") {
        report = setrep::injectivity_sweep(opt.n, opt.d, parse_grid(opt.grid),
                                           setrep::arch_from_string(opt.arch));
    } else if (opt.claim_id == "lower_bound") {
        // K = D canonical-basis weights: the channel projections themselves.
        std::vector<std::vector<double>> weights;
        for (int i = 0; i < opt.d; ++i) {
            std::vector<double> e(opt.d, 0.0);
            e[i] = 1.0;
            weights.push_back(std::move(e));
        }
        auto hit = setrep::collision_search(opt.n, opt.d, weights, parse_grid(opt.grid),
                                            opt.budget);
        report.claim_id = "lower_bound";
        report.passed = hit.has_value();
        if (hit) {
            report.details = {{"x", setrep::to_json(hit->first)},
                              {"x_prime", setrep::to_json(hit->second)}};
        } else {
            report.details = {{"note", "budget exhausted without a hit (inconclusive)"}};
        }
    } else if (opt.claim_id == "exact_representation") {
        setrep::SetMatrix x = load_matrix(opt.input);
        report = setrep::exact_representation_check(
            [](const setrep::SetMatrix& m) {
                double s = 0.0;
                for (double v : m.data()) s += v;
                return s;
            },
            x, setrep::arch_from_string(opt.arch));
        report.details["f"] = "entry sum";
    } else {
        throw CLI::ValidationError("claim_id", "unknown claim: " + opt.claim_id);
    }
    write_output(setrep::to_json(report), opt.output);
    return report.passed ? kExitOk : kExitNumeric;
}

int run_probe(const Options& opt) {
    setrep::SetMatrix x = load_matrix(opt.input);
    setrep::ClaimReport report =
        setrep::continuity_probe(x, setrep::arch_from_string(opt.arch), parse_grid(opt.epsilons),
                                 opt.trials);
    write_output(setrep::to_json(report), opt.output);
    return kExitOk;
}

int run_conditioning(const Options& opt) {
    write_output(setrep::to_json(setrep::conditioning_report(opt.n > 0 ? opt.n : 6)), opt.output);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"injective permutation-invariant set embeddings: encode, decode, verify"};
    app.require_subcommand(1);

    Options opt;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--output", opt.output, "output file (default stdout)");
        sub->add_option("--tol", opt.tol, "verification tolerance");
        sub->add_option("--seed", opt.seed, "seed for seeded-random banks");
        sub->add_option("--bank-mode", opt.bank_mode, "moment-curve | seeded-random");
    };

    CLI::App* dims_cmd = app.add_subcommand("dims", "dimension formulas and bounds");
    dims_cmd->add_option("--n", opt.n, "set size")->required();
    dims_cmd->add_option("--d", opt.d, "feature dimension")->required();
    dims_cmd->add_option("--arch", opt.arch, "lp | le")->required();
    add_common(dims_cmd);

    CLI::App* encode_cmd = app.add_subcommand("encode", "pooled embedding of a set matrix");
    encode_cmd->add_option("--input", opt.input, "SetMatrix JSON ('-' = stdin)");
    encode_cmd->add_option("--arch", opt.arch, "lp | le")->required();
    add_common(encode_cmd);

    CLI::App* decode_cmd = app.add_subcommand("decode", "invert an embedding JSON");
    decode_cmd->add_option("--input", opt.input, "Embedding JSON ('-' = stdin)");
    add_common(decode_cmd);

    CLI::App* roundtrip_cmd = app.add_subcommand("roundtrip", "encode, decode, and compare");
    roundtrip_cmd->add_option("--input", opt.input, "SetMatrix JSON ('-' = stdin)");
    roundtrip_cmd->add_option("--arch", opt.arch, "lp | le")->required();
    add_common(roundtrip_cmd);

    CLI::App* verify_cmd = app.add_subcommand("verify", "run a claim check");
    verify_cmd
        ->add_option("claim_id", opt.claim_id,
                     "counterexample | injectivity_sweep | lower_bound | exact_representation")
        ->required();
    verify_cmd->add_option("--n", opt.n, "set size");
    verify_cmd->add_option("--d", opt.d, "feature dimension");
    verify_cmd->add_option("--arch", opt.arch, "lp | le");
    verify_cmd->add_option("--grid", opt.grid, "comma-separated grid values");
    verify_cmd->add_option("--budget", opt.budget, "pair budget for searches");
    verify_cmd->add_option("--input", opt.input, "SetMatrix JSON where needed");
    add_common(verify_cmd);

    CLI::App* probe_cmd = app.add_subcommand("probe", "continuity probe (report only)");
    probe_cmd->add_option("--input", opt.input, "SetMatrix JSON ('-' = stdin)");
    probe_cmd->add_option("--arch", opt.arch, "lp | le");
    probe_cmd->add_option("--epsilons", opt.epsilons, "comma-separated noise levels");
    probe_cmd->add_option("--trials", opt.trials, "perturbations per epsilon");
    add_common(probe_cmd);

    CLI::App* cond_cmd = app.add_subcommand("conditioning", "power-sum conditioning table");
    cond_cmd->add_option("--n", opt.n, "max degree (default 6)");
    add_common(cond_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (dims_cmd->parsed()) return run_dims(opt);
        if (encode_cmd->parsed()) return run_encode(opt);
        if (decode_cmd->parsed()) return run_decode(opt);
        if (roundtrip_cmd->parsed()) return run_roundtrip(opt);
        if (verify_cmd->parsed()) return run_verify(opt);
        if (probe_cmd->parsed()) return run_probe(opt);
        if (cond_cmd->parsed()) return run_conditioning(opt);
    } catch (const setrep::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const setrep::ShapeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const setrep::Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitUsage;
}
