#include "filmspec/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <variant>

#include "filmspec/bounds.hpp"
#include "filmspec/eigensolver.hpp"
#include "filmspec/errors.hpp"
#include "filmspec/parallel.hpp"
#include "filmspec/resolvent.hpp"
#include "filmspec/spectral.hpp"
#include "filmspec/truncation.hpp"
#include "filmspec/version.hpp"

namespace filmspec::cli {
namespace {

using json = nlohmann::ordered_json;
using Cell = std::variant<std::int64_t, double, bool, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    json meta_extra = json::object();
};

struct Common {
    std::optional<double> eps;
    int M = 4000;
    int n_max = 400;
    double step = 0.01;
    double tol = 1e-8;
    int count = 10;
    std::string format = "csv";
    std::string out_path;
    unsigned threads = 1;
};

void write_cell(std::ostream& os, const Cell& c) {
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
                if (std::isnan(v)) {
                    os << "nan";
                } else if (std::isinf(v)) {
                    os << (v > 0 ? "inf" : "-inf");
                } else {
                    os << std::setprecision(17) << v;
                }
            } else if constexpr (std::is_same_v<T, bool>) {
                os << (v ? "true" : "false");
            } else {
                os << v;
            }
        },
        c);
}

json cell_json(const Cell& c) {
    return std::visit([](const auto& v) { return json(v); }, c);
}

void emit(const Table& t, const Common& opt, std::ostream& os) {
    if (opt.format == "json") {
        json meta = json::object();
        meta["epsilon"] = opt.eps ? json(*opt.eps) : json(nullptr);
        meta["M"] = opt.M;
        meta["tol"] = opt.tol;
        meta["version"] = kVersion;
        for (const auto& [k, v] : t.meta_extra.items()) {
            meta[k] = v;
        }
        json data = json::array();
        for (const auto& row : t.rows) {
            json obj = json::object();
            for (std::size_t i = 0; i < t.columns.size(); ++i) {
                obj[t.columns[i]] = cell_json(row[i]);
            }
            data.push_back(std::move(obj));
        }
        json doc = json::object();
        doc["meta"] = std::move(meta);
        doc["data"] = std::move(data);
        os << doc.dump(2) << '\n';
        return;
    }
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        os << (i ? "," : "") << t.columns[i];
    }
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) {
                os << ',';
            }
            write_cell(os, row[i]);
        }
        os << '\n';
    }
}

double require_eps(const Common& opt) {
    if (!opt.eps) {
        throw ConfigError("--eps is required");
    }
    return *opt.eps;
}

Table eig_table(const Common& opt, bool with_proj, std::optional<int> proj_n_max) {
    const double eps = require_eps(opt);
    require_subcritical(eps);
    SpectrumOptions so;
    so.step = opt.step;
    so.threads = opt.threads;
    auto recs = compute_spectrum(eps, opt.count, opt.M, opt.tol, so);
    Table t;
    t.columns = {"index", "lambda", "bracket_lo", "bracket_hi", "M"};
    if (with_proj) {
        const int n_max = proj_n_max.value_or(default_eigenvector_size(eps, opt.M));
        t.columns.push_back("proj_norm");
        t.meta_extra["n_max"] = n_max;
        parallel_for(recs.size(), opt.threads, [&](std::size_t i) {
            const auto v = build_eigenvector(eps, recs[i], n_max);
            recs[i].proj_norm = projection_norm(v, recs[i].index).proj_norm;
        });
    }
    for (const auto& r : recs) {
        std::vector<Cell> row{std::int64_t{r.index}, r.lambda, r.bracket.lo, r.bracket.hi, std::int64_t{r.M}};
        if (with_proj) {
            row.emplace_back(*r.proj_norm);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table scan_table(const Common& opt, double lo, double hi) {
    const double eps = require_eps(opt);
    require_subcritical(eps);
    if (!(hi > lo) || lo < 0.0) {
        throw ConfigError("scan needs 0 <= lo < hi");
    }
    if (!(opt.step > 0.0)) {
        throw ConfigError("--step must be positive");
    }
    const auto res = scan(eps, lo, hi, opt.step, opt.M, opt.threads);
    Table t;
    t.columns = {"lambda", "sign", "log_abs_f"};
    for (const auto& p : res.points) {
        t.rows.push_back({p.lambda, std::int64_t{p.f.sign}, p.f.log_abs});
    }
    t.meta_extra["sign_changes"] = res.brackets.size();
    return t;
}

Table eigvec_table(const Common& opt, int index, std::optional<int> theta, std::optional<int> n_max_flag) {
    const double eps = require_eps(opt);
    require_subcritical(eps);
    if (index < 1) {
        throw ConfigError("--index must be >= 1");
    }
    SpectrumOptions so;
    so.step = opt.step;
    so.threads = opt.threads;
    const auto recs = compute_spectrum(eps, index, opt.M, opt.tol, so);
    const auto& rec = recs.back();
    const int n_max = n_max_flag.value_or(default_eigenvector_size(eps, opt.M));
    const auto v = build_eigenvector(eps, rec, n_max);
    Table t;
    t.meta_extra["index"] = index;
    t.meta_extra["lambda"] = v.lambda;
    t.meta_extra["n_max"] = n_max;
    t.meta_extra["peak_index"] = v.peak_index;
    if (theta) {
        t.columns = {"theta", "re", "im"};
        for (const auto& s : synthesize_theta_samples(v, *theta)) {
            t.rows.push_back({s.theta, s.value.real(), s.value.imag()});
        }
    } else {
        t.columns = {"n", "v"};
        for (int n = 1; n <= v.n_max(); ++n) {
            t.rows.push_back({std::int64_t{n}, v.entries.value(n)});
        }
    }
    return t;
}

Table resolvent_table(const Common& opt, std::optional<int> cols, bool stability) {
    const double eps = require_eps(opt);
    const auto pair = build_fundamental_pair(eps, opt.n_max, opt.M);
    const auto kernel = assemble_kernel(pair, opt.threads);
    const auto hs = hs_norm(kernel);
    const int n_cols = cols.value_or(opt.n_max / 2);
    Table t;
    t.columns = {"n_max",          "hs_window",      "hs_tail",     "hs_corrected",
                 "column_constant", "identity_residual", "sigma_spread", "upper_constant",
                 "dominant_eigenvalue"};
    std::vector<Cell> row{std::int64_t{opt.n_max}, hs.window, hs.tail, hs.corrected, hs.column_constant,
                          verify_inverse_identity(eps, kernel, n_cols), sigma_spread(pair),
                          upper_kernel_constant(kernel), dominant_eigenvalue(kernel)};
    if (stability) {
        const int doubled = 2 * opt.n_max;
        const auto big = assemble_kernel(build_fundamental_pair(eps, doubled, std::max(opt.M, doubled + 3)),
                                         opt.threads);
        t.columns.push_back("hs_doubled_relative_change");
        row.emplace_back(std::abs(hs_norm(big).corrected - hs.corrected) / hs.corrected);
    }
    t.meta_extra["identity_columns"] = n_cols;
    t.rows.push_back(std::move(row));
    return t;
}

Table truncate_table(const Common& opt, const std::vector<int>& sizes, double match_tol) {
    const double eps = require_eps(opt);
    require_subcritical(eps);
    for (int n : sizes) {
        if (n < 2 || n > 2000) {
            throw ConfigError("truncation sizes must lie in [2, 2000]");
        }
    }
    SpectrumOptions so;
    so.threads = opt.threads;
    so.step = opt.step;
    const auto recs = compute_spectrum(eps, opt.count, opt.M, opt.tol, so);
    const auto runs = truncation_sweep(eps, sizes, recs, match_tol, opt.threads);
    Table t;
    t.columns = {"N",         "index",    "shooting",      "nearest_re",      "nearest_im",
                 "distance",  "matched",  "nonreal_count", "agreement_prefix", "all_matched",
                 "trace_error", "conjugate_pairs"};
    bool every_all_matched = true;
    for (const auto& run : runs) {
        every_all_matched = every_all_matched && run.report.all_matched;
        for (const auto& m : run.report.matches) {
            t.rows.push_back({std::int64_t{run.N}, std::int64_t{m.index}, m.shooting, m.nearest.real(),
                              m.nearest.imag(), m.distance, m.matched,
                              std::int64_t{run.report.nonreal_count},
                              std::int64_t{run.report.agreement_prefix}, run.report.all_matched,
                              run.trace_error, run.conjugate_pairs});
        }
    }
    t.meta_extra["match_tol"] = match_tol;
    t.meta_extra["all_matched_every_N"] = every_all_matched;
    return t;
}

Table verify_table(const Common& opt, bool suite, const std::string& bound, double lambda, double delta,
                   int window_end, bool& all_pass) {
    std::vector<BoundCheckReport> reports;
    if (suite) {
        reports = run_bound_suite(opt.threads);
    } else {
        const double eps = require_eps(opt);
        if (bound == "growth") {
            reports = check_growth_envelope(eps, lambda, delta, window_end);
        } else if (bound == "subordinate") {
            reports.push_back(check_subordinate_envelope(eps, lambda, opt.M, window_end));
        } else if (bound == "monotone") {
            reports.push_back(check_monotonicity(eps, lambda, opt.M));
        } else if (bound == "lambda-monotone") {
            reports.push_back(check_lambda_monotonicity(eps, lambda, opt.M));
        } else if (bound == "supercritical") {
            reports.push_back(check_supercritical_regime(eps, lambda, window_end));
        } else if (bound == "positive") {
            reports.push_back(check_positive_spectrum(eps, {0.0, 0.5, 1.0}, {opt.M, 2 * opt.M}));
        } else {
            throw ConfigError("--bound must be given (or use --suite)");
        }
    }
    Table t;
    t.columns = {"bound_id", "epsilon", "lambda", "N_emp", "window_end", "seed_index", "pass", "recheck"};
    all_pass = true;
    for (const auto& r : reports) {
        const bool re = recheck(r);
        all_pass = all_pass && r.pass && re;
        t.rows.push_back({std::string(to_string(r.bound_id)), r.params.epsilon(), r.params.lambda(),
                          std::int64_t{r.N_emp}, std::int64_t{r.window_end}, std::int64_t{r.seed_index}, r.pass,
                          re});
    }
    return t;
}

std::vector<EigenvalueRecord> read_spectrum_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open " + path);
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw ConfigError(path + " is empty");
    }
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string h;
        while (std::getline(ss, h, ',')) {
            header.push_back(h);
        }
    }
    const auto col = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            throw ConfigError(path + " has no '" + name + "' column");
        }
        return static_cast<std::size_t>(it - header.begin());
    };
    const auto ci = col("index");
    const auto cl = col("lambda");
    std::vector<EigenvalueRecord> recs;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string x;
        while (std::getline(ss, x, ',')) {
            f.push_back(x);
        }
        if (f.size() <= std::max(ci, cl)) {
            throw ConfigError("short row in " + path);
        }
        EigenvalueRecord r;
        try {
            r.index = std::stoi(f[ci]);
            r.lambda = std::stod(f[cl]);
        } catch (const std::exception&) {
            throw ConfigError("bad number in " + path + ": " + line);
        }
        recs.push_back(r);
    }
    return recs;
}

Table fit_table(const Common& opt, const std::string& input) {
    std::vector<EigenvalueRecord> recs;
    if (!input.empty()) {
        recs = read_spectrum_csv(input);
    } else {
        const double eps = require_eps(opt);
        SpectrumOptions so;
        so.step = opt.step;
        so.threads = opt.threads;
        recs = compute_spectrum(eps, opt.count, opt.M, opt.tol, so);
    }
    const auto fit = fit_power_law(recs);
    Table t;
    t.columns = {"alpha", "gamma", "points"};
    t.rows.push_back({fit.alpha, fit.gamma, static_cast<std::int64_t>(recs.size())});
    return t;
}

void add_common(CLI::App* sub, Common& opt, bool eps_required) {
    auto* e = sub->add_option("--eps", opt.eps, "film parameter epsilon, 0 < eps < 2");
    if (eps_required) {
        e->required();
    }
    sub->add_option("--M", opt.M, "backward-recursion cutoff")->capture_default_str();
    sub->add_option("--tol", opt.tol, "bisection tolerance on lambda")->capture_default_str();
    sub->add_option("--format", opt.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    sub->add_option("--out", opt.out_path, "write results to this file");
    sub->add_option("--threads", opt.threads, "worker cap (0 = auto)")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectrum, eigenvectors and resolvent of the one-sided thin-film operator", "filmspec"};
    app.require_subcommand(1);
    Common opt;

    auto* eig = app.add_subcommand("eig", "first --count real eigenvalues");
    add_common(eig, opt, true);
    bool with_proj = false;
    std::optional<int> proj_n_max;
    eig->add_option("--count", opt.count, "number of eigenvalues")->capture_default_str();
    eig->add_option("--step", opt.step, "scan step")->capture_default_str();
    eig->add_flag("--proj", with_proj, "add the projection norm column");
    eig->add_option("--n-max", proj_n_max, "eigenvector window for --proj");

    auto* scan_cmd = app.add_subcommand("scan", "sign and log|f| on a lambda grid");
    add_common(scan_cmd, opt, true);
    double lo = 0.0;
    double hi = 4.0;
    scan_cmd->add_option("--lo", lo)->capture_default_str();
    scan_cmd->add_option("--hi", hi)->capture_default_str();
    scan_cmd->add_option("--step", opt.step)->capture_default_str();

    auto* eigvec = app.add_subcommand("eigvec", "eigenvector entries or theta-grid synthesis");
    add_common(eigvec, opt, true);
    int index = 1;
    std::optional<int> theta;
    std::optional<int> vec_n_max;
    eigvec->add_option("--index", index, "eigenvalue index, 1-based")->capture_default_str();
    eigvec->add_option("--theta", theta, "theta grid size; emits (theta, re, im)");
    eigvec->add_option("--n-max", vec_n_max, "eigenvector window");
    eigvec->add_option("--step", opt.step)->capture_default_str();

    auto* resolvent = app.add_subcommand("resolvent", "kernel of the inverse: norms and identity residual");
    add_common(resolvent, opt, true);
    std::optional<int> cols;
    bool stability = false;
    resolvent->add_option("--n-max", opt.n_max)->capture_default_str();
    resolvent->add_option("--cols", cols, "columns checked in the inverse identity (default n_max/2)");
    resolvent->add_flag("--stability", stability, "also report the change under n_max doubling");

    auto* truncate = app.add_subcommand("truncate", "finite-section spectra against shooting eigenvalues");
    add_common(truncate, opt, true);
    std::vector<int> sizes{50, 100, 200, 400};
    double match_tol = 1e-3;
    truncate->add_option("--sizes", sizes, "truncation sizes")->delimiter(',')->capture_default_str();
    truncate->add_option("--count", opt.count)->capture_default_str();
    truncate->add_option("--match-tol", match_tol)->capture_default_str();
    truncate->add_option("--step", opt.step)->capture_default_str();

    auto* verify = app.add_subcommand("verify", "inequality checks with empirical onsets");
    add_common(verify, opt, false);
    bool suite = false;
    std::string bound;
    double lambda = 0.0;
    double delta = 0.5;
    int window_end = 2000;
    verify->add_flag("--suite", suite, "run the full parameter suite");
    verify->add_option("--bound", bound, "growth|subordinate|monotone|lambda-monotone|supercritical|positive");
    verify->add_option("--lambda", lambda)->capture_default_str();
    verify->add_option("--delta", delta)->capture_default_str();
    verify->add_option("--window-end", window_end)->capture_default_str();

    auto* fit = app.add_subcommand("fit", "power-law fit lambda_n ~ alpha n^gamma");
    add_common(fit, opt, false);
    std::string input;
    fit->add_option("--input", input, "CSV with index and lambda columns");
    fit->add_option("--count", opt.count)->capture_default_str();
    fit->add_option("--step", opt.step)->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        const auto subs = app.get_subcommands();
        err << (subs.empty() ? app.help() : subs.front()->help());
        return kUsageError;
    }

    try {
        if (opt.M < 1000) {
            throw ConfigError("--M must be >= 1000");
        }
        if (opt.count < 1) {
            throw ConfigError("--count must be >= 1");
        }
        if (!(opt.tol >= 0.0)) {
            throw ConfigError("--tol must be >= 0");
        }
        Table table;
        int code = kOk;
        if (eig->parsed()) {
            table = eig_table(opt, with_proj, proj_n_max);
        } else if (scan_cmd->parsed()) {
            table = scan_table(opt, lo, hi);
        } else if (eigvec->parsed()) {
            table = eigvec_table(opt, index, theta, vec_n_max);
        } else if (resolvent->parsed()) {
            table = resolvent_table(opt, cols, stability);
        } else if (truncate->parsed()) {
            table = truncate_table(opt, sizes, match_tol);
        } else if (verify->parsed()) {
            bool all_pass = true;
            table = verify_table(opt, suite, bound, lambda, delta, window_end, all_pass);
            code = all_pass ? kOk : kComputationError;
        } else {
            table = fit_table(opt, input);
        }
        if (opt.out_path.empty()) {
            emit(table, opt, out);
        } else {
            std::ofstream f(opt.out_path, std::ios::binary);
            if (!f) {
                throw ConfigError("cannot write " + opt.out_path);
            }
            emit(table, opt, f);
        }
        return code;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kComputationError;
    }
}

}  // namespace filmspec::cli
