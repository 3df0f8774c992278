// Command-line driver: graph generation and ingestion, private mechanism
// runs, the randomized-response baseline, cut-error evaluation between two
// graphs, and the module invariant suites.
//
// Exit codes: 0 success, 1 verification failure, 2 config error, 3 input
// error, 4 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "motifcut/common.hpp"
#include "motifcut/eval.hpp"
#include "motifcut/graph_io.hpp"
#include "motifcut/mechanism.hpp"
#include "motifcut/noise.hpp"
#include "motifcut/report.hpp"
#include "motifcut/run_config.hpp"
#include "motifcut/verify.hpp"

namespace {

using namespace motifcut;

CutMode parse_cut_mode(const RunConfig& cfg) {
    if (cfg.cut_mode == "exhaustive") return CutMode::exhaustive();
    const std::string prefix = "sampled:";
    if (cfg.cut_mode.rfind(prefix, 0) == 0) {
        const char* first = cfg.cut_mode.data() + prefix.size();
        const char* last = cfg.cut_mode.data() + cfg.cut_mode.size();
        std::uint64_t k = 0;
        auto [ptr, ec] = std::from_chars(first, last, k);
        if (ec == std::errc() && ptr == last && k > 0) return CutMode::sampled(k, cfg.seed);
    }
    throw ConfigError("--cut-mode must be 'exhaustive' or 'sampled:<k>', got '" + cfg.cut_mode +
                      "'");
}

int worker_count(std::size_t jobs) {
    unsigned hw = std::thread::hardware_concurrency();
    std::uint64_t cap = hw ? hw : 1;
    if (const char* env = std::getenv("MOTIFCUT_THREADS")) {
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(env, env + std::string(env).size(), v);
        if (ec != std::errc() || *ptr != '\0' || v == 0)
            throw ConfigError("MOTIFCUT_THREADS must be a positive integer");
        cap = v;
    }
    if (cap > jobs) cap = jobs;
    return static_cast<int>(cap ? cap : 1);
}

// Inserts a seed tag before the extension, "out.json" -> "out.s7.json".
std::string seed_tagged(const std::string& path, std::uint64_t seed) {
    std::string tag = ".s" + std::to_string(seed);
    std::size_t dot = path.find_last_of('.');
    std::size_t slash = path.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + tag;
    return path.substr(0, dot) + tag + path.substr(dot);
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open for writing: " + path);
    out << text;
    if (!out) throw InputError("write failed: " + path);
}

int cmd_gen(const RunConfig& cfg) {
    if (cfg.n < 0) throw ConfigError("--n must be nonnegative");
    NoiseStream stream(cfg.seed);
    WeightedGraph g;
    if (cfg.model == "gnp") {
        g = gen_gnp(cfg.n, cfg.p, stream);
    } else if (cfg.model == "complete") {
        g = gen_complete(cfg.n);
    } else if (cfg.model == "regular") {
        g = gen_regular(cfg.n, cfg.degree, stream);
    } else {
        throw ConfigError("--model must be gnp, complete, or regular");
    }
    if (cfg.output.empty()) {
        write_graph(g, std::cout);
    } else {
        write_graph_file(g, cfg.output);
    }
    return 0;
}

struct RunOutcome {
    std::uint64_t seed{0};
    MechanismResult result;
};

int cmd_run(const RunConfig& cfg) {
    if (cfg.input.empty()) throw ConfigError("run requires --input");
    WeightedGraph g = parse_graph_file(cfg.input);
    validate_nonnegative(g, cfg.input);

    std::vector<std::uint64_t> seeds;
    if (cfg.sweep) {
        if (cfg.seed_hi < cfg.seed_lo) throw ConfigError("--seeds range is reversed");
        for (std::uint64_t s = cfg.seed_lo; s <= cfg.seed_hi; ++s) seeds.push_back(s);
    } else {
        seeds.push_back(cfg.seed);
    }

    std::vector<RunOutcome> outcomes(seeds.size());
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    // Workers must not leak exceptions across the join; the first failure is
    // rethrown afterwards with its type intact so exit codes stay faithful.
    std::exception_ptr first_error;
    auto work = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= seeds.size()) return;
            try {
                outcomes[i].seed = seeds[i];
                outcomes[i].result =
                    run_mechanism(g, cfg.epsilon, cfg.delta, cfg.beta, seeds[i], cfg.constants);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    int workers = worker_count(seeds.size());
    if (workers <= 1 || seeds.size() == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    std::ostringstream csv;
    csv << csv_header() << '\n';
    for (const RunOutcome& o : outcomes) {
        const bool tag = seeds.size() > 1;
        if (!cfg.output.empty())
            write_graph_file(o.result.output,
                             tag ? seed_tagged(cfg.output, o.seed) : cfg.output);
        if (!cfg.report_path.empty())
            emit_report_file(o.result.report,
                             tag ? seed_tagged(cfg.report_path, o.seed) : cfg.report_path,
                             ReportFormat::json);
        csv << csv_row(o.result.report) << '\n';
    }
    if (!cfg.csv_path.empty()) write_text_file(cfg.csv_path, csv.str());
    if (cfg.output.empty() && cfg.report_path.empty() && !outcomes.empty()) {
        if (cfg.format == "csv-summary")
            std::cout << csv.str();
        else
            emit_report(outcomes.front().result.report, std::cout, ReportFormat::json);
    }
    for (const RunOutcome& o : outcomes)
        if (o.result.report.degenerate)
            std::cerr << "seed " << o.seed
                      << ": degenerate input, released the empty graph ("
                      << o.result.report.degenerate_reason << ")\n";
    return 0;
}

int cmd_baseline(const RunConfig& cfg) {
    if (cfg.input.empty()) throw ConfigError("baseline requires --input");
    if (cfg.baseline != "rr") throw ConfigError("--baseline must be rr");
    WeightedGraph g = parse_graph_file(cfg.input);
    validate_nonnegative(g, cfg.input);
    NoiseStream stream(cfg.seed);
    WeightedGraph noisy = randomized_response(g, cfg.epsilon, stream);
    if (cfg.clip_negative) noisy = clip_negative(noisy);
    if (cfg.output.empty()) {
        write_graph(noisy, std::cout);
    } else {
        write_graph_file(noisy, cfg.output);
    }
    return 0;
}

int cmd_eval(const RunConfig& cfg) {
    if (cfg.input.empty() || cfg.other.empty())
        throw ConfigError("eval requires --input and --other");
    WeightedGraph a = parse_graph_file(cfg.input);
    WeightedGraph b = parse_graph_file(cfg.other);
    CutErrorResult r = max_cut_error(a, b, parse_cut_mode(cfg));
    nlohmann::json j{{"max_error", r.max_error},
                     {"cuts_evaluated", r.cuts_evaluated},
                     {"argmax_side", r.argmax_side}};
    std::string text = j.dump(2) + "\n";
    if (cfg.output.empty())
        std::cout << text;
    else
        write_text_file(cfg.output, text);
    return 0;
}

int cmd_verify(const RunConfig& cfg) {
    std::vector<CheckResult> results = run_all_verifications(cfg.seed);
    int failed = 0;
    for (const CheckResult& r : results) {
        std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.name;
        if (!r.pass) {
            std::cout << "  [" << r.detail << "]";
            ++failed;
        }
        std::cout << '\n';
    }
    std::cout << results.size() - static_cast<std::size_t>(failed) << "/" << results.size()
              << " checks passed\n";
    return failed == 0 ? 0 : 1;
}

// Splits "lo:hi" into the sweep bounds.
void apply_seed_range(RunConfig& cfg, const std::string& range) {
    std::size_t colon = range.find(':');
    if (colon == std::string::npos)
        throw ConfigError("--seeds expects lo:hi, got '" + range + "'");
    auto parse_u64 = [&](const std::string& s) {
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size())
            throw ConfigError("--seeds bound is not an integer: '" + s + "'");
        return v;
    };
    cfg.seed_lo = parse_u64(range.substr(0, colon));
    cfg.seed_hi = parse_u64(range.substr(colon + 1));
    cfg.sweep = true;
}

int dispatch(const RunConfig& cfg) {
    if (cfg.subcommand == "gen") return cmd_gen(cfg);
    if (cfg.subcommand == "run") return cmd_run(cfg);
    if (cfg.subcommand == "baseline") return cmd_baseline(cfg);
    if (cfg.subcommand == "eval") return cmd_eval(cfg);
    if (cfg.subcommand == "verify") return cmd_verify(cfg);
    throw ConfigError("unknown subcommand '" + cfg.subcommand + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Private release of triangle-motif cut structure"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string seed_range;

    CLI::App* gen = app.add_subcommand("gen", "Generate a unit-weight random graph");
    gen->add_option("--model", cfg.model, "gnp | complete | regular")->capture_default_str();
    gen->add_option("--n", cfg.n, "vertex count")->required();
    gen->add_option("--p", cfg.p, "edge probability for gnp")->capture_default_str();
    gen->add_option("--d", cfg.degree, "degree for regular")->capture_default_str();
    gen->add_option("--seed", cfg.seed, "generator seed")->capture_default_str();
    gen->add_option("--output", cfg.output, "output path (stdout when empty)");

    CLI::App* run = app.add_subcommand("run", "Run the private mechanism");
    run->add_option("--input", cfg.input, "input graph file")->required();
    run->add_option("--output", cfg.output, "released graph path");
    run->add_option("--report", cfg.report_path, "JSON report path");
    run->add_option("--csv", cfg.csv_path, "CSV summary path");
    run->add_option("--eps", cfg.epsilon, "privacy budget epsilon")->capture_default_str();
    run->add_option("--delta", cfg.delta, "privacy parameter delta")->capture_default_str();
    run->add_option("--beta", cfg.beta, "failure probability beta")->capture_default_str();
    run->add_option("--seed", cfg.seed, "run seed")->capture_default_str();
    run->add_option("--seeds", seed_range, "seed sweep range lo:hi");
    run->add_option("--ct", cfg.constants.c_t, "step-count constant")->capture_default_str();
    run->add_option("--clambda", cfg.constants.c_lambda, "regularizer constant")
        ->capture_default_str();
    run->add_option("--ceta", cfg.constants.c_eta, "step-size constant")->capture_default_str();
    run->add_option("--cdegw", cfg.constants.c_deg_w, "degenerate weight threshold constant")
        ->capture_default_str();
    run->add_option("--cdegl3", cfg.constants.c_deg_l3,
                    "degenerate sensitivity threshold constant")
        ->capture_default_str();
    run->add_option("--format", cfg.format, "stdout format: json | csv-summary")
        ->capture_default_str();

    CLI::App* baseline = app.add_subcommand("baseline", "Run the randomized-response baseline");
    baseline->add_option("--input", cfg.input, "input graph file")->required();
    baseline->add_option("--baseline", cfg.baseline, "baseline name (rr)")->capture_default_str();
    baseline->add_option("--eps", cfg.epsilon, "privacy budget epsilon")->capture_default_str();
    baseline->add_option("--seed", cfg.seed, "noise seed")->capture_default_str();
    baseline->add_option("--output", cfg.output, "output path (stdout when empty)");
    baseline->add_flag("--clip-negative", cfg.clip_negative, "zero out negative noisy weights");

    CLI::App* eval = app.add_subcommand("eval", "Max triangle-cut error between two graphs");
    eval->add_option("--input", cfg.input, "first graph file")->required();
    eval->add_option("--other", cfg.other, "second graph file")->required();
    eval->add_option("--cut-mode", cfg.cut_mode, "exhaustive | sampled:<k>")
        ->capture_default_str();
    eval->add_option("--seed", cfg.seed, "sampling seed")->capture_default_str();
    eval->add_option("--output", cfg.output, "result path (stdout when empty)");

    CLI::App* verify = app.add_subcommand("verify", "Run the module invariant suites");
    verify->add_option("--seed", cfg.seed, "suite seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        for (CLI::App* sub : {gen, run, baseline, eval, verify})
            if (sub->parsed()) cfg.subcommand = sub->get_name();
        if (!seed_range.empty()) apply_seed_range(cfg, seed_range);
        return dispatch(cfg);
    } catch (const ConfigError& ex) {
        std::cerr << "config error: " << ex.what() << '\n';
        return 2;
    } catch (const InputError& ex) {
        std::cerr << "input error: " << ex.what() << '\n';
        return 3;
    } catch (const NumericError& ex) {
        std::cerr << "numerical failure: " << ex.what() << '\n';
        return 4;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 4;
    }
}
