// brp: batch runner for the branched rough path library.
//
// Every verification suite and computation is exposed as a subcommand with
// machine-readable JSON output and a human-readable summary.  Exit codes:
//   0  all checks passed
//   2  at least one violation found
//   3  numeric non-convergence
//   4  bad configuration or unreadable input
//
// The only environment variable consulted is BRP_THREADS (suite-level
// parallelism for `lemmas` and `all`); reports are assembled single-writer
// in a fixed order, so the output does not depend on the thread count.

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "branched/bounds.hpp"
#include "branched/character.hpp"
#include "branched/extension.hpp"
#include "branched/hopf.hpp"
#include "branched/lift.hpp"
#include "branched/poly.hpp"
#include "branched/report.hpp"
#include "branched/trees.hpp"

using namespace branched;
using nlohmann::json;

namespace {

constexpr int kPass = 0;
constexpr int kViolation = 2;
constexpr int kNonConvergence = 3;
constexpr int kConfig = 4;

constexpr long double kNegInf = -std::numeric_limits<long double>::infinity();

int config_error(const std::string& message) {
    std::cerr << "error: " << message << std::endl;
    return kConfig;
}

// BRP_THREADS is the one supported environment variable.
int thread_count(std::string& error) {
    const char* raw = std::getenv("BRP_THREADS");
    if (raw == nullptr) return 1;
    try {
        std::size_t end = 0;
        int n = std::stoi(raw, &end);
        if (end != std::string(raw).size() || n < 1 || n > 64)
            throw std::invalid_argument("range");
        return n;
    } catch (const std::exception&) {
        error = "BRP_THREADS must be an integer in [1, 64], got \"" +
                std::string(raw) + "\"";
        return -1;
    }
}

// Runs independent suite jobs, optionally on a small thread pool.  Results
// land at fixed indices, so the assembled report order never changes.
std::vector<std::vector<CheckReport>> run_jobs(
    const std::vector<std::function<std::vector<CheckReport>()>>& jobs,
    int threads) {
    std::vector<std::vector<CheckReport>> results(jobs.size());
    std::exception_ptr first_error;
    if (threads <= 1) {
        for (std::size_t i = 0; i < jobs.size(); ++i) results[i] = jobs[i]();
        return results;
    }
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            try {
                results[i] = jobs[i]();
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    int n = std::min<std::size_t>(threads, jobs.size());
    pool.reserve(n);
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
    return results;
}

// Prints the text summary, writes the JSON file when requested, and maps
// the verdict to the exit-code contract.
int finish(const std::vector<CheckReport>& reports, const json& config,
           const std::string& output) {
    std::cout << render_reports_text(reports);
    if (!output.empty()) {
        save_reports_json(reports, output, config);
        std::cout << "report written to " << output << std::endl;
    }
    for (const CheckReport& r : reports)
        if (r.violations > 0) return kViolation;
    return kPass;
}

std::string format_ld(long double v, int precision = 17) {
    std::ostringstream os;
    os << std::setprecision(precision) << static_cast<double>(v);
    return os.str();
}

// --- enumerate -----------------------------------------------------------

struct EnumerateOptions {
    int n = 5;
    int alphabet = 0;
    bool forests = false;
};

int run_enumerate(const EnumerateOptions& opt) {
    if (opt.n < 0 || opt.n > 16)
        return config_error("--n must be in [0, 16]");
    if (opt.alphabet < 0 || opt.alphabet > 9)
        return config_error("--alphabet must be in [0, 9]");
    if (opt.forests) {
        std::vector<Forest> all = enumerate_forests(opt.n, opt.alphabet);
        for (const Forest& f : all) std::cout << f.key() << "\n";
        std::cout << all.size() << " forests with " << opt.n << " vertices"
                  << std::endl;
    } else {
        std::vector<Tree> all = enumerate_trees(opt.n, opt.alphabet);
        for (const Tree& t : all) std::cout << t.key() << "\n";
        std::cout << all.size() << " trees with " << opt.n << " vertices"
                  << std::endl;
    }
    return kPass;
}

// --- coproduct -----------------------------------------------------------

struct CoproductOptions {
    std::string forest;
    std::string output;
};

int run_coproduct(const CoproductOptions& opt) {
    Forest f;
    try {
        f = parse_forest(opt.forest);
    } catch (const std::exception& e) {
        return config_error(std::string("cannot parse forest: ") + e.what());
    }
    const auto& terms = coproduct_forest(f);
    json terms_json = json::array();
    for (const CutTerm& t : terms) {
        std::cout << t.mult << " * " << t.pruned.key() << " (x) "
                  << t.trunk.key() << "\n";
        terms_json.push_back({{"mult", t.mult.str()},
                              {"pruned", t.pruned.key()},
                              {"trunk", t.trunk.key()}});
    }
    std::cout << terms.size() << " aggregated terms for " << f.key()
              << std::endl;
    if (!opt.output.empty()) {
        json out = {{"schema", 1},
                    {"config", {{"command", "coproduct"}, {"forest", f.key()}}},
                    {"terms", terms_json}};
        std::ofstream file(opt.output);
        if (!file) return config_error("cannot write " + opt.output);
        file << out.dump(2) << "\n";
    }
    return kPass;
}

// --- shared path-source plumbing ------------------------------------------

struct SourceOptions {
    std::string csv;
    std::string poly;
    bool weierstrass = false;
    bool identity = false;
    double gamma = 0.75;  // Hoelder exponent of the Weierstrass preset
    std::uint64_t seed = 1;
    int terms = 16;
    int dim = 2;
    int samples = (1 << 12) + 1;
};

int source_count(const SourceOptions& s, bool allow_identity) {
    return (s.csv.empty() ? 0 : 1) + (s.poly.empty() ? 0 : 1) +
           (s.weierstrass ? 1 : 0) +
           (allow_identity && s.identity ? 1 : 0);
}

// Loads or synthesizes the sampled path for the numeric commands.
int make_path_data(const SourceOptions& s, PathData& data) {
    if (!s.csv.empty()) {
        try {
            data = load_path_csv(s.csv);
        } catch (const std::exception& e) {
            return config_error(std::string("cannot load ") + s.csv + ": " +
                                e.what());
        }
        return kPass;
    }
    if (!s.poly.empty()) {
        try {
            data = sample_polynomial(named_polynomial_path(s.poly), s.samples);
        } catch (const std::exception& e) {
            return config_error(e.what());
        }
        return kPass;
    }
    if (!(s.gamma > 0.5 && s.gamma <= 1.0))
        return config_error("--gamma must be in (0.5, 1] for sampled paths");
    if (s.terms < 1 || s.terms > 40)
        return config_error("--terms must be in [1, 40]");
    if (s.dim < 1 || s.dim > 9) return config_error("--dim must be in [1, 9]");
    data = weierstrass_preset(s.gamma, s.seed, s.samples, s.terms, s.dim);
    return kPass;
}

json source_config(const SourceOptions& s) {
    json j;
    if (!s.csv.empty()) j["csv"] = s.csv;
    if (!s.poly.empty()) j["polynomial"] = s.poly;
    if (s.weierstrass) {
        j["weierstrass"] = {{"gamma", s.gamma},
                            {"seed", s.seed},
                            {"terms", s.terms},
                            {"dim", s.dim}};
    }
    if (s.identity) j["identity"] = true;
    if (s.csv.empty()) j["samples"] = s.samples;
    return j;
}

// --- lift ----------------------------------------------------------------

struct LiftOptions {
    SourceOptions source;
    int max_degree = 3;
    int anchor_index = 0;
    int levels = 10;
    double tol = 1e-7;
    std::string output;
};

int run_lift(const LiftOptions& opt) {
    if (source_count(opt.source, false) != 1)
        return config_error(
            "pick exactly one path source: --csv, --poly or --weierstrass");
    if (opt.max_degree < 1 || opt.max_degree > 6)
        return config_error("--max-degree must be in [1, 6]");
    if (opt.levels < 3 || opt.levels > 16)
        return config_error("--levels must be in [3, 16]");
    if (!(opt.tol > 0)) return config_error("--tol must be positive");

    PathData data;
    if (int rc = make_path_data(opt.source, data); rc != kPass) return rc;

    YoungLift lift;
    try {
        lift = lift_young(data, opt.max_degree, opt.anchor_index, opt.levels,
                          opt.tol);
    } catch (const std::exception& e) {
        return config_error(e.what());
    }

    std::cout << "young lift: dimension=" << data.dimension()
              << " samples=" << data.samples()
              << " max_degree=" << opt.max_degree
              << " output_points=" << lift.out_times.size() << "\n"
              << "refinement: levels=" << lift.levels << " achieved_delta="
              << format_ld(lift.achieved_delta, 6)
              << " converged=" << (lift.converged ? "yes" : "no")
              << std::endl;

    if (!opt.output.empty()) {
        json config = {{"command", "lift"},
                       {"source", source_config(opt.source)},
                       {"max_degree", opt.max_degree},
                       {"anchor_index", opt.anchor_index},
                       {"levels", opt.levels},
                       {"tol", opt.tol}};
        json values;
        for (const auto& [key, vals] : lift.values) values[key] = vals;
        json out = {{"schema", 1},
                    {"config", config},
                    {"out_times", lift.out_times},
                    {"out_indices", lift.out_indices},
                    {"levels", lift.levels},
                    {"achieved_delta", lift.achieved_delta},
                    {"converged", lift.converged},
                    {"values", values}};
        std::ofstream file(opt.output);
        if (!file) return config_error("cannot write " + opt.output);
        file << out.dump(2) << "\n";
        std::cout << "lift written to " << opt.output << std::endl;
    }
    return lift.converged ? kPass : kNonConvergence;
}

// --- extend ----------------------------------------------------------------

struct ExtendOptions {
    std::string poly;
    bool identity = false;
    int truncation = 1;   // N: degrees kept from the source
    int max_degree = 4;   // M: degrees reconstructed by extension
    std::string anchor = "0";
    int grid_den = 4;
    int level_cap = 12;
    std::string output;
};

int run_extend(const ExtendOptions& opt) {
    if (opt.poly.empty() == !opt.identity)
        return config_error("pick exactly one source: --poly or --identity");
    if (opt.truncation < 1) return config_error("--N must be >= 1");
    if (opt.max_degree < opt.truncation)
        return config_error("--M must be >= --N");
    if (opt.max_degree > 6) return config_error("--M must be <= 6");
    if (opt.grid_den < 1 || opt.grid_den > 16)
        return config_error("--grid-den must be in [1, 16]");
    if (opt.level_cap < 3 || opt.level_cap > 20)
        return config_error("--level must be in [3, 20]");

    Rational anchor;
    try {
        anchor = Rational(opt.anchor);
    } catch (const std::exception&) {
        return config_error("cannot parse --anchor \"" + opt.anchor +
                            "\" as a rational p/q");
    }
    if (anchor < 0 || anchor >= 1)
        return config_error("--anchor must lie in [0, 1)");

    IdentitySource<Rational> identity;
    std::unique_ptr<PolySource> poly;
    const PathSource<Rational>* base = &identity;
    int alphabet = 0;
    if (!opt.poly.empty()) {
        try {
            poly = std::make_unique<PolySource>(named_polynomial_path(opt.poly));
        } catch (const std::exception& e) {
            return config_error(e.what());
        }
        base = poly.get();
        alphabet = poly->alphabet();
    }

    TruncatedSource<Rational> truncated(*base, opt.truncation);
    Extender<Rational> ext(truncated, opt.truncation, anchor, opt.level_cap);

    json values;
    long long evaluated = 0;
    int max_levels = 0;
    try {
        for (int n = 1; n <= opt.max_degree; ++n)
            for (const Tree& tau : enumerate_trees(n, alphabet)) {
                json per_tree;
                for (int i = 1; i <= opt.grid_den; ++i) {
                    Rational b(i, opt.grid_den);
                    if (b <= anchor) continue;
                    per_tree[std::to_string(i) + "/" +
                             std::to_string(opt.grid_den)] =
                        ext.value(tau, b).str();
                    max_levels = std::max(max_levels, ext.last_levels());
                    ++evaluated;
                }
                values[tau.key()] = std::move(per_tree);
            }
    } catch (const NonConvergence& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kNonConvergence;
    }

    std::cout << "extension: source="
              << (opt.poly.empty() ? "identity" : opt.poly)
              << " N=" << opt.truncation << " M=" << opt.max_degree
              << " anchor=" << anchor.str() << " values=" << evaluated
              << " deepest_ladder=" << max_levels << std::endl;

    if (!opt.output.empty()) {
        json config = {{"command", "extend"},
                       {"source", opt.poly.empty() ? "identity" : opt.poly},
                       {"N", opt.truncation},
                       {"M", opt.max_degree},
                       {"anchor", anchor.str()},
                       {"grid_den", opt.grid_den},
                       {"level_cap", opt.level_cap}};
        json out = {{"schema", 1}, {"config", config}, {"values", values}};
        std::ofstream file(opt.output);
        if (!file) return config_error("cannot write " + opt.output);
        file << out.dump(2) << "\n";
        std::cout << "extension written to " << opt.output << std::endl;
    }
    return kPass;
}

// --- verify-decay -----------------------------------------------------------

struct DecayOptions {
    SourceOptions source;
    double gamma = 1.0;
    int N = 1;
    int max_tree = 5;
    int pairs = 5;
    double tol = 1e-9;
    std::string output;
};

void print_decay(const DecayCheckResult& res) {
    std::cout << render_reports_text({res.strict, res.inflated});
    std::cout << "norm_factor_log=" << format_ld(res.log_norm_factor, 6)
              << " decay_constant_log=" << format_ld(res.log_cbar_strict, 6)
              << " inflated=" << format_ld(res.log_cbar_inflated, 6)
              << std::endl;
}

int run_verify_decay(const DecayOptions& opt) {
    if (source_count(opt.source, true) != 1)
        return config_error(
            "pick exactly one source: --identity, --poly, --csv or "
            "--weierstrass");
    if (!(opt.gamma > 0 && opt.gamma <= 1))
        return config_error("--gamma must be in (0, 1]");
    if (opt.N < 1) return config_error("--N must be >= 1");
    if (opt.max_tree < opt.N || opt.max_tree > 7)
        return config_error("--max-tree must be in [N, 7]");
    if (opt.pairs < 1 || opt.pairs > 64)
        return config_error("--pairs must be in [1, 64]");
    if (!(opt.tol > 0)) return config_error("--tol must be positive");

    json config = {{"command", "verify-decay"},
                   {"source", source_config(opt.source)},
                   {"gamma", opt.gamma},
                   {"N", opt.N},
                   {"max_tree", opt.max_tree},
                   {"pairs", opt.pairs},
                   {"tol", opt.tol}};

    DecayCheckResult res;
    try {
        if (opt.source.identity || !opt.source.poly.empty()) {
            // exact sources: nested rational pairs (i/2P, 1 - i/2P)
            int P = opt.pairs;
            std::vector<std::pair<Rational, Rational>> rpairs;
            std::vector<std::pair<long double, long double>> pairs;
            for (int i = 0; i < P; ++i) {
                Rational s(i, 2 * P), t(2 * P - i, 2 * P);
                rpairs.emplace_back(s, t);
                pairs.emplace_back(to_ld(s), to_ld(t));
            }
            if (opt.source.identity) {
                auto value_log = [&](const Tree& tau, std::size_t i) {
                    long double w =
                        to_ld(rpairs[i].second - rpairs[i].first);
                    long double lg =
                        tau.size() * std::log(w) -
                        static_cast<long double>(
                            log_abs(Rational(tree_factorial(tau))).lg);
                    return LogVal::from_log(lg);
                };
                res = verify_decay(opt.gamma, opt.N, opt.max_tree, 0, pairs,
                                   value_log, opt.tol);
            } else {
                PolynomialLift lift(named_polynomial_path(opt.source.poly));
                int alphabet = lift.dimension() == 1 ? 0 : lift.dimension();
                auto value_log = [&](const Tree& tau, std::size_t i) {
                    return log_abs(lift.tree_value(tau, rpairs[i].first,
                                                   rpairs[i].second));
                };
                res = verify_decay(opt.gamma, opt.N, opt.max_tree, alphabet,
                                   pairs, value_log, opt.tol);
            }
        } else {
            // sampled sources run through the numeric lift and Chen shifts
            PathData data;
            if (int rc = make_path_data(opt.source, data); rc != kPass)
                return rc;
            int alphabet = data.dimension() == 1 ? 0 : data.dimension();
            int levels = 0;  // as deep as the sample resolution allows
            for (std::size_t m = data.samples() - 1;
                 m > 1 && m % 2 == 0 && levels < 12; m /= 2)
                ++levels;
            if (levels < 3)
                return config_error(
                    "need at least 2^3 + 1 dyadically spaced samples");
            YoungLift lift =
                lift_young(data, opt.max_tree, 0, levels, opt.tol * 1e-2);
            if (!lift.converged) {
                std::cerr << "error: young lift did not converge; "
                             "achieved_delta="
                          << format_ld(lift.achieved_delta, 6) << std::endl;
                return kNonConvergence;
            }
            std::size_t out = lift.out_times.size();
            int P = std::min<std::size_t>(opt.pairs, out / 2);
            std::vector<std::pair<long double, long double>> pairs;
            std::vector<std::map<std::string, double>> shifted;
            for (int i = 0; i < P; ++i) {
                std::size_t a = i, b = out - 1 - i;
                pairs.emplace_back(lift.out_times[a], lift.out_times[b]);
                shifted.push_back(
                    chen_shift(lift, opt.max_tree, alphabet, a, b));
            }
            auto value_log = [&](const Tree& tau, std::size_t i) {
                double v = shifted[i].at(tau.key());
                if (v == 0.0) return LogVal{};
                return LogVal::from_log(std::log(std::fabs(
                    static_cast<long double>(v))));
            };
            res = verify_decay(opt.gamma, opt.N, opt.max_tree, alphabet,
                               pairs, value_log, opt.tol);
        }
    } catch (const NonConvergence& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kNonConvergence;
    } catch (const std::exception& e) {
        return config_error(e.what());
    }

    print_decay(res);
    if (!opt.output.empty()) {
        save_reports_json({res.strict, res.inflated}, opt.output, config);
        std::cout << "report written to " << opt.output << std::endl;
    }
    return res.strict.pass() ? kPass : kViolation;
}

// --- counterexample ---------------------------------------------------------

struct CounterOptions {
    double gamma = 0.5;
    double beta = 2.0;
    double a = 0.5;
    double b = 1.0;
    int n_max = 200;
    double threshold = 1e3;
    double ratio_tol = 1e-6;
    std::string csv;
    std::string output;
};

int run_counterexample_cmd(const CounterOptions& opt) {
    if (!(opt.gamma >= 0 && opt.gamma < 1))
        return config_error("--gamma must be in [0, 1)");
    if (!(opt.beta > 0 && opt.a > 0 && opt.b > 0))
        return config_error("--beta, --a and --b must be positive");
    if (opt.n_max < 1 || opt.n_max > 5000)
        return config_error("--n-max must be in [1, 5000]");
    if (!(opt.threshold > 0) || !(opt.ratio_tol > 0))
        return config_error("--threshold and --ratio-tol must be positive");

    CounterexampleResult res =
        run_counterexample(opt.gamma, opt.beta, opt.a, opt.b, opt.n_max,
                           opt.threshold, opt.ratio_tol);

    std::ostringstream csv;
    csv << "n,exact_sum,lower_bound\n";
    for (std::size_t n = 0; n < res.points.size(); ++n)
        csv << n << "," << format_ld(res.points[n].exact_sum) << ","
            << format_ld(res.points[n].lower_bound) << "\n";

    std::ostringstream summary;
    summary << render_reports_text({res.report});
    summary << "ratio_limit="
            << format_ld(counterexample_ratio_limit(opt.gamma, opt.beta,
                                                    opt.a, opt.b), 10)
            << " first_n_above_threshold=" << res.n_cross << "\n";

    if (opt.csv.empty()) {
        std::cout << csv.str();
        std::cerr << summary.str();
    } else {
        std::ofstream file(opt.csv);
        if (!file) return config_error("cannot write " + opt.csv);
        file << csv.str();
        std::cout << summary.str() << "series written to " << opt.csv
                  << std::endl;
    }
    if (!opt.output.empty()) {
        json config = {{"command", "counterexample"}, {"gamma", opt.gamma},
                       {"beta", opt.beta},           {"a", opt.a},
                       {"b", opt.b},                 {"n_max", opt.n_max},
                       {"threshold", opt.threshold},
                       {"ratio_tol", opt.ratio_tol}};
        save_reports_json({res.report}, opt.output, config);
    }
    return res.report.pass() ? kPass : kViolation;
}

// --- lemmas ------------------------------------------------------------------

struct LemmaOptions {
    double gamma = 0.5;
    int max_tree = 7;
    unsigned seed = 2026;
    int chars = 5;
    double tol = 1e-12;
    std::string output;
};

std::vector<std::function<std::vector<CheckReport>()>> lemma_jobs(
    const LemmaOptions& opt) {
    long double g = opt.gamma;
    long double tol = opt.tol;
    int M = opt.max_tree;
    int total = std::min(M - 1, 6);  // degree cap for n + k split suites
    unsigned seed = opt.seed;
    int chars = opt.chars;
    std::vector<std::function<std::vector<CheckReport>()>> jobs;
    auto one = [&jobs](std::function<CheckReport()> f) {
        jobs.push_back([f = std::move(f)]() {
            return std::vector<CheckReport>{f()};
        });
    };
    one([=] { return check_tree_binomial(M); });
    one([=] { return check_induction_identity(std::min(M, 6), Rational(7, 3)); });
    one([=] { return check_forest_factorisation(total, 50, seed); });
    one([=] { return check_star_norm_bound(g, total, chars, seed, tol); });
    one([=] { return check_concavity(g, std::min(M + 1, 8), tol); });
    one([=] { return check_counting(std::min(M, 7)); });
    one([=] { return check_factorial_decay_forest(g, total, chars, seed, tol); });
    one([=] { return check_computation_lemma(g, total, chars, seed, tol); });
    one([=] { return check_taylor_binomial(20, 3, 10, tol); });
    one([=] { return check_taylor_identity(20, 3, 1e-9L); });
    one([=] { return check_kernel_quadrature_agreement(1e-6L); });
    one([=] { return check_overlapping(20, 3, 3, 10, tol); });
    one([=] { return check_decreasing(20, 3, 10, tol); });
    one([=] { return check_adjacent(20, 3, 10, tol); });
    one([=] {
        return check_main_lemma_identity(1, {2, 3, 4}, 4, 1e-10L);
    });
    return jobs;
}

int run_lemmas(const LemmaOptions& opt) {
    if (!(opt.gamma > 0 && opt.gamma <= 1))
        return config_error("--gamma must be in (0, 1]");
    if (opt.max_tree < 3 || opt.max_tree > 8)
        return config_error("--max-tree must be in [3, 8]");
    if (opt.chars < 1 || opt.chars > 50)
        return config_error("--chars must be in [1, 50]");
    if (!(opt.tol > 0)) return config_error("--tol must be positive");

    std::string env_error;
    int threads = thread_count(env_error);
    if (threads < 0) return config_error(env_error);

    json config = {{"command", "lemmas"},   {"gamma", opt.gamma},
                   {"max_tree", opt.max_tree}, {"seed", opt.seed},
                   {"chars", opt.chars},    {"tol", opt.tol}};

    auto results = run_jobs(lemma_jobs(opt), threads);
    std::vector<CheckReport> reports;
    for (auto& group : results)
        for (auto& r : group) reports.push_back(std::move(r));
    return finish(reports, config, opt.output);
}

// --- all ---------------------------------------------------------------------

// Self-contained enumeration check against the multiset recurrence
// a(n+1) = (1/n) sum_{k<=n} (sum_{d|k} d a(d)) a(n-k+1).
CheckReport enumeration_report() {
    CheckReport r;
    r.suite = "tree-enumeration";
    r.params["max_n"] = "7";
    std::vector<long long> a{0, 1};
    for (int n = 1; n < 7; ++n) {
        long long acc = 0;
        for (int k = 1; k <= n; ++k) {
            long long inner = 0;
            for (int d = 1; d <= k; ++d)
                if (k % d == 0) inner += d * a[d];
            acc += inner * a[n - k + 1];
        }
        a.push_back(acc / n);
    }
    for (int n = 1; n <= 7; ++n) {
        bool ok = count_trees(n, 0) == a[n] &&
                  enumerate_trees(n, 0).size() ==
                      static_cast<std::size_t>(a[n]);
        r.record("n=" + std::to_string(n), ok ? kNegInf : 0.0L,
                 ok ? 0.0L : kNegInf, 0.0L);
    }
    return r;
}

// Counit and coassociativity, exact over all forests up to six vertices.
CheckReport hopf_axiom_report() {
    CheckReport r;
    r.suite = "coproduct-axioms";
    r.params["max_forest"] = "6";
    for (int n = 0; n <= 6; ++n)
        for (const Forest& f : enumerate_forests(n)) {
            int left = 0, right = 0;
            bool ok = true;
            for (const CutTerm& t : coproduct_forest(f)) {
                if (t.pruned.empty()) {
                    ++left;
                    ok = ok && t.trunk == f && t.mult == 1;
                }
                if (t.trunk.empty()) {
                    ++right;
                    ok = ok && t.pruned == f && t.mult == 1;
                }
            }
            ok = ok && left == 1 && right == 1 &&
                 double_coproduct_left(f) == double_coproduct_right(f);
            r.record(f.key(), ok ? kNegInf : 0.0L, ok ? 0.0L : kNegInf, 0.0L);
        }
    return r;
}

// Extension of degree-one identity data against the closed form, exactly.
CheckReport extension_report() {
    CheckReport r;
    r.suite = "extension-fixed-point";
    r.params["N"] = "1";
    r.params["max_tree"] = "4";
    r.params["level_cap"] = "12";
    IdentitySource<Rational> base;
    TruncatedSource<Rational> truncated(base, 1);
    Extender<Rational> ext(truncated, 1, Rational(0), 12);
    for (int n = 1; n <= 4; ++n)
        for (const Tree& tau : enumerate_trees(n))
            for (int i = 1; i <= 4; ++i) {
                Rational b(i, 4);
                bool ok = ext.value(tau, b) ==
                          rational_pow(b, n) / Rational(tree_factorial(tau));
                r.record(tau.key() + " t=" + b.str(), ok ? kNegInf : 0.0L,
                         ok ? 0.0L : kNegInf, 0.0L);
            }
    return r;
}

// Numeric Young lift of (t, t^2) against the exact polynomial lift, and the
// Chen identity across an interior output point.
CheckReport young_lift_report() {
    CheckReport r;
    r.suite = "young-lift-parabola";
    r.params["samples"] = std::to_string((1 << 12) + 1);
    r.params["max_degree"] = "4";
    auto comps = named_polynomial_path("parabola");
    PathData data = sample_polynomial(comps, (1 << 12) + 1);
    YoungLift lift = lift_young(data, 4, 0, 10, 1e-8);
    if (!lift.converged)
        throw NonConvergence("young lift of the parabola did not converge");
    PolynomialLift exact(comps);
    long long den = static_cast<long long>(data.samples()) - 1;
    for (int n = 1; n <= 4; ++n)
        for (const Tree& tau : enumerate_trees(n, 2)) {
            const auto& vals = lift.values.at(tau.key());
            long double worst = 0.0L;
            for (std::size_t p = 0; p < lift.out_times.size(); ++p) {
                Rational t(static_cast<long long>(lift.out_indices[p]), den);
                long double want =
                    to_ld(exact.tree_value(tau, Rational(0), t));
                worst = std::max(worst,
                                 std::fabs(static_cast<long double>(vals[p]) -
                                           want));
            }
            r.record(tau.key(), std::log(worst), std::log(1e-6L), 0.0L);
        }
    std::size_t pa = lift.out_times.size() / 4;
    std::size_t pb = (3 * lift.out_times.size()) / 4;
    auto shifted = chen_shift(lift, 4, 2, pa, pb);
    Rational ta(static_cast<long long>(lift.out_indices[pa]), den);
    Rational tb(static_cast<long long>(lift.out_indices[pb]), den);
    for (const auto& [key, value] : shifted) {
        long double want = to_ld(exact.tree_value(parse_tree(key), ta, tb));
        long double err =
            std::fabs(static_cast<long double>(value) - want);
        r.record("chen " + key, std::log(err), std::log(1e-5L), 0.0L);
    }
    return r;
}

// Crossover of the branched bound past the geometric-form bound.
CheckReport crossover_report() {
    CheckReport r;
    r.suite = "branched-geometric-crossover";
    r.params["gamma"] = "0.75";
    CrossoverResult c = branched_geometric_crossover(0.75L);
    bool ok = c.exists && c.dominant_after;
    r.record("gamma=0.75", ok ? kNegInf : 0.0L, ok ? 0.0L : kNegInf, 0.0L);
    r.notes = "log10(n0)=" + format_ld(c.log10_n0, 6) +
              " decay_constant_log=" + format_ld(c.log_cbar1, 6);
    return r;
}

std::vector<CheckReport> decay_suite(const std::string& source) {
    std::vector<std::pair<long double, long double>> pairs = {
        {0.0L, 1.0L}, {0.0L, 0.5L}, {0.25L, 0.75L}, {0.5L, 1.0L},
        {0.125L, 0.875L}};
    std::vector<std::pair<Rational, Rational>> rpairs;
    for (const auto& [s, t] : pairs)
        rpairs.emplace_back(Rational(static_cast<long>(s * 8), 8),
                            Rational(static_cast<long>(t * 8), 8));
    DecayCheckResult res;
    if (source == "identity") {
        auto value_log = [&](const Tree& tau, std::size_t i) {
            long double w = to_ld(rpairs[i].second - rpairs[i].first);
            long double lg = tau.size() * std::log(w) -
                             static_cast<long double>(
                                 log_abs(Rational(tree_factorial(tau))).lg);
            return LogVal::from_log(lg);
        };
        res = verify_decay(1.0L, 1, 6, 0, pairs, value_log, 1e-12L);
    } else {
        PolynomialLift lift(named_polynomial_path(source));
        auto value_log = [&](const Tree& tau, std::size_t i) {
            return log_abs(
                lift.tree_value(tau, rpairs[i].first, rpairs[i].second));
        };
        res = verify_decay(1.0L, 1, 6, 2, pairs, value_log, 1e-12L);
    }
    res.strict.params["source"] = source;
    res.inflated.params["source"] = source;
    return {res.strict, res.inflated};
}

struct AllOptions {
    std::string output;
};

int run_all(const AllOptions& opt) {
    std::string env_error;
    int threads = thread_count(env_error);
    if (threads < 0) return config_error(env_error);

    LemmaOptions lemmas;  // defaults: gamma 0.5, trees <= 7, concavity <= 8
    auto jobs = lemma_jobs(lemmas);
    auto one = [&jobs](std::function<CheckReport()> f) {
        jobs.push_back([f = std::move(f)]() {
            return std::vector<CheckReport>{f()};
        });
    };
    // a second gamma for the norm suites, matching the identity-path case
    one([] { return check_star_norm_bound(1.0L, 6, 5, 2026u, 1e-12L); });
    one([] { return check_computation_lemma(1.0L, 6, 5, 2026u, 1e-12L); });
    one([] { return check_factorial_decay_forest(1.0L, 6, 5, 2026u, 1e-12L); });
    one([] { return check_concavity(0.3L, 8, 1e-12L); });
    one([] { return check_concavity(0.9L, 8, 1e-12L); });
    one([] { return enumeration_report(); });
    one([] { return hopf_axiom_report(); });
    one([] { return extension_report(); });
    one([] { return young_lift_report(); });
    one([] { return crossover_report(); });
    jobs.push_back([] { return decay_suite("identity"); });
    jobs.push_back([] { return decay_suite("parabola"); });
    jobs.push_back([] { return decay_suite("cubic"); });
    one([] {
        return run_counterexample(0.5L, 2.0L, 0.5L, 1.0L, 200, 1e3L, 1e-6L)
            .report;
    });

    json config = {{"command", "all"},
                   {"gamma", lemmas.gamma},
                   {"max_tree", lemmas.max_tree},
                   {"seed", lemmas.seed}};

    std::vector<CheckReport> reports;
    try {
        auto results = run_jobs(jobs, threads);
        for (auto& group : results)
            for (auto& r : group) reports.push_back(std::move(r));
    } catch (const NonConvergence& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kNonConvergence;
    }
    return finish(reports, config, opt.output);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"branched rough path toolkit"};
    app.require_subcommand(1);

    EnumerateOptions enum_opt;
    auto* cmd_enum = app.add_subcommand(
        "enumerate", "List rooted trees or forests with a given vertex count");
    cmd_enum->add_option("--n", enum_opt.n, "vertex count")->required();
    cmd_enum->add_option("--alphabet", enum_opt.alphabet,
                         "label alphabet size, 0 for unlabelled");
    cmd_enum->add_flag("--forests", enum_opt.forests,
                       "list forests instead of trees");

    CoproductOptions cop_opt;
    auto* cmd_cop = app.add_subcommand(
        "coproduct", "Print the aggregated coproduct of a forest");
    cmd_cop->add_option("--forest", cop_opt.forest,
                        "forest in bracket notation, e.g. [*.*] or *.*")
        ->required();
    cmd_cop->add_option("--output", cop_opt.output, "JSON output file");

    auto add_source = [](CLI::App* cmd, SourceOptions& s, bool identity) {
        cmd->add_option("--csv", s.csv, "path samples as CSV (t,x1,...,xd)");
        cmd->add_option("--poly", s.poly,
                        "named polynomial path: identity, parabola or cubic");
        cmd->add_flag("--weierstrass", s.weierstrass,
                      "synthesize a Weierstrass-type preset path");
        if (identity)
            cmd->add_flag("--identity", s.identity,
                          "canonical identity-path character");
        cmd->add_option("--seed", s.seed, "preset RNG seed");
        cmd->add_option("--terms", s.terms, "preset series terms");
        cmd->add_option("--dim", s.dim, "preset dimension");
        cmd->add_option("--samples", s.samples,
                        "sample count for synthesized paths (2^k + 1)");
    };

    LiftOptions lift_opt;
    auto* cmd_lift = app.add_subcommand(
        "lift", "Young lift of a sampled path to tree iterated integrals");
    add_source(cmd_lift, lift_opt.source, false);
    cmd_lift->add_option("--gamma", lift_opt.source.gamma,
                         "Hoelder exponent of the preset");
    cmd_lift->add_option("--max-degree", lift_opt.max_degree,
                         "highest tree degree to lift");
    cmd_lift->add_option("--anchor-index", lift_opt.anchor_index,
                         "sample index the lift is anchored at");
    cmd_lift->add_option("--levels", lift_opt.levels,
                         "dyadic refinement levels");
    cmd_lift->add_option("--tol", lift_opt.tol, "refinement tolerance");
    cmd_lift->add_option("--output", lift_opt.output, "JSON output file");

    ExtendOptions ext_opt;
    auto* cmd_ext = app.add_subcommand(
        "extend",
        "Reconstruct higher-degree values from a truncated character");
    cmd_ext->add_option("--poly", ext_opt.poly, "named polynomial source");
    cmd_ext->add_flag("--identity", ext_opt.identity, "identity-path source");
    cmd_ext->add_option("--N", ext_opt.truncation, "truncation degree kept");
    cmd_ext->add_option("--M", ext_opt.max_degree, "target degree");
    cmd_ext->add_option("--anchor", ext_opt.anchor, "anchor time, rational");
    cmd_ext->add_option("--grid-den", ext_opt.grid_den,
                        "endpoint grid denominator");
    cmd_ext->add_option("--level", ext_opt.level_cap,
                        "dyadic refinement level cap");
    cmd_ext->add_option("--output", ext_opt.output, "JSON output file");

    DecayOptions decay_opt;
    auto* cmd_decay = app.add_subcommand(
        "verify-decay", "Check the factorial decay bound for a path");
    add_source(cmd_decay, decay_opt.source, true);
    cmd_decay->add_option("--gamma", decay_opt.gamma, "Hoelder exponent");
    cmd_decay->add_option("--N", decay_opt.N, "control degree");
    cmd_decay->add_option("--max-tree", decay_opt.max_tree,
                          "largest tree degree checked");
    cmd_decay->add_option("--pairs", decay_opt.pairs, "time pairs sampled");
    cmd_decay->add_option("--tol", decay_opt.tol, "slack tolerance");
    cmd_decay->add_option("--output", decay_opt.output, "JSON output file");

    CounterOptions counter_opt;
    auto* cmd_counter = app.add_subcommand(
        "counterexample",
        "Divergent cut-sum family breaking the neoclassical analogue");
    cmd_counter->add_option("--gamma", counter_opt.gamma, "exponent in [0,1)");
    cmd_counter->add_option("--beta", counter_opt.beta, "norm weight base");
    cmd_counter->add_option("--a", counter_opt.a, "left interval width");
    cmd_counter->add_option("--b", counter_opt.b, "right interval width");
    cmd_counter->add_option("--n-max", counter_opt.n_max, "largest corolla");
    cmd_counter->add_option("--threshold", counter_opt.threshold,
                            "divergence threshold the sum must exceed");
    cmd_counter->add_option("--ratio-tol", counter_opt.ratio_tol,
                            "tolerance for the ratio limit");
    cmd_counter->add_option("--csv", counter_opt.csv,
                            "CSV output file (default: stdout)");
    cmd_counter->add_option("--output", counter_opt.output,
                            "JSON report file");

    LemmaOptions lemma_opt;
    auto* cmd_lemmas = app.add_subcommand(
        "lemmas", "Run every algebraic and kernel inequality suite");
    cmd_lemmas->add_option("--gamma", lemma_opt.gamma, "Hoelder exponent");
    cmd_lemmas->add_option("--max-tree", lemma_opt.max_tree,
                           "largest tree degree");
    cmd_lemmas->add_option("--seed", lemma_opt.seed,
                           "seed for random characters");
    cmd_lemmas->add_option("--chars", lemma_opt.chars,
                           "random characters per suite");
    cmd_lemmas->add_option("--tol", lemma_opt.tol, "slack tolerance");
    cmd_lemmas->add_option("--output", lemma_opt.output, "JSON output file");

    AllOptions all_opt;
    auto* cmd_all = app.add_subcommand(
        "all", "Run the complete verification battery at default sizes");
    cmd_all->add_option("--output", all_opt.output, "JSON output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfig;
    }

    try {
        if (cmd_enum->parsed()) return run_enumerate(enum_opt);
        if (cmd_cop->parsed()) return run_coproduct(cop_opt);
        if (cmd_lift->parsed()) return run_lift(lift_opt);
        if (cmd_ext->parsed()) return run_extend(ext_opt);
        if (cmd_decay->parsed()) return run_verify_decay(decay_opt);
        if (cmd_counter->parsed()) return run_counterexample_cmd(counter_opt);
        if (cmd_lemmas->parsed()) return run_lemmas(lemma_opt);
        if (cmd_all->parsed()) return run_all(all_opt);
    } catch (const NonConvergence& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kNonConvergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kConfig;
    }
    return kConfig;
}
