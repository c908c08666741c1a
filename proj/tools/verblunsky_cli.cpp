// Command-line front end: model parsing, coefficient/phase/PACF tables,
// predictor tables, verification reports, and the naive-vs-FFT benchmark.

#include "verblunsky/analysis.hpp"
#include "verblunsky/engine.hpp"
#include "verblunsky/oracle.hpp"
#include "verblunsky/phase.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

namespace {

using namespace verblunsky;

struct CommonOpts {
    std::string phi, theta, config, format = "csv", out;
    double d = 0.0;
    bool d_set = false;
    std::size_t n_max = 20;
    TruncationPolicy pol;
    int threads = 0;
};

RealSeq parse_csv_list(const std::string& text) {
    RealSeq out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stod(tok));
    }
    return out;
}

ModelSpec build_spec(const CommonOpts& o) {
    ModelSpec spec;
    if (!o.config.empty()) {
        std::ifstream in(o.config);
        if (!in) throw CLI::ValidationError("--config", "cannot open " + o.config);
        spec = spec_from_config(in);
    }
    if (!o.phi.empty()) spec.ar = parse_csv_list(o.phi);
    if (!o.theta.empty()) spec.ma = parse_csv_list(o.theta);
    if (o.d_set) spec.d = o.d;
    return spec;
}

void add_common(CLI::App* cmd, CommonOpts& o, bool with_policy = true) {
    cmd->add_option("--phi", o.phi,
                    "AR coefficients phi_1,... (Phi(z) = 1 - phi_1 z - ...)");
    cmd->add_option("--theta", o.theta,
                    "MA coefficients theta_1,... (Theta(z) = 1 + theta_1 z + ...)");
    cmd->add_option("--d", o.d, "memory parameter in (-1/2, 1/2)")
        ->each([&o](const std::string&) { o.d_set = true; });
    cmd->add_option("--config", o.config, "key-value spec file (keys: phi, theta, d)");
    cmd->add_option("--n-max", o.n_max, "largest index computed");
    cmd->add_option("--format", o.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", o.out, "output path (default stdout)");
    if (with_policy) {
        cmd->add_option("--V", o.pol.V, "state/inner-sum length");
        cmd->add_option("--k-max", o.pol.k_max, "series term cap");
        cmd->add_option("--tol", o.pol.term_tol, "relative series stop tolerance");
        cmd->add_option("--beta-V", o.pol.beta_inner,
                        "phase-coefficient inner length (0=auto)");
        cmd->add_option("--threads", o.threads, "worker threads (0=auto)");
    }
}

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw CLI::ValidationError("--out", "cannot open " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

// one row of named cells; an empty cell prints as nothing in CSV, null in JSON
using Cell = std::optional<double>;

struct Table {
    std::vector<std::string> columns;
    std::vector<bool> integer_col;
    std::vector<std::vector<Cell>> rows;

    void write(std::ostream& os, const std::string& format) const {
        if (format == "csv") {
            for (std::size_t c = 0; c < columns.size(); ++c)
                os << columns[c] << (c + 1 < columns.size() ? "," : "\n");
            for (const auto& row : rows) {
                for (std::size_t c = 0; c < row.size(); ++c) {
                    if (row[c]) {
                        if (integer_col[c])
                            os << (long long)std::llround(*row[c]);
                        else
                            os << fmt17(*row[c]);
                    }
                    os << (c + 1 < row.size() ? "," : "\n");
                }
            }
        } else {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& row : rows) {
                nlohmann::json obj;
                for (std::size_t c = 0; c < row.size(); ++c) {
                    if (!row[c])
                        obj[columns[c]] = nullptr;
                    else if (integer_col[c])
                        obj[columns[c]] = (long long)std::llround(*row[c]);
                    else
                        obj[columns[c]] = *row[c];
                }
                arr.push_back(std::move(obj));
            }
            os << arr.dump(2) << "\n";
        }
    }
};

int run_coeffs(const CommonOpts& o) {
    const ModelSpec spec = build_spec(o);
    require_valid(spec);
    const CoeffTable ct = coeff_table(spec, o.n_max + 1, o.n_max + 1);
    Table t;
    t.columns = {"n", "c", "a", "gamma"};
    t.integer_col = {true, false, false, false};
    for (std::size_t n = 0; n <= o.n_max; ++n)
        t.rows.push_back({Cell(double(n)), Cell(ct.c[n]), Cell(ct.a[n]), Cell(ct.gamma[n])});
    Sink sink(o.out);
    t.write(sink.stream(), o.format);
    return 0;
}

int run_beta(const CommonOpts& o) {
    const ModelSpec spec = build_spec(o);
    require_valid(spec);
    const BetaTable bt = beta(spec, o.n_max, o.pol);
    const bool exact = spec.p() == 0 && spec.q() == 0 && spec.d > 0.0;
    RealSeq beta_exact;
    if (exact) beta_exact = exact_farima_refs(spec.d, o.n_max).first;
    Table t;
    t.columns = {"n", "beta", "est_error", "beta_exact"};
    t.integer_col = {true, false, false, false};
    for (std::size_t n = 0; n <= o.n_max; ++n)
        t.rows.push_back({Cell(double(n)), Cell(bt.beta[n]), Cell(bt.est_error[n]),
                          exact ? Cell(beta_exact[n]) : Cell()});
    Sink sink(o.out);
    t.write(sink.stream(), o.format);
    return 0;
}

int run_pacf(const CommonOpts& o) {
    const ModelSpec spec = build_spec(o);
    require_valid(spec);
    const auto results = pacf_sweep(spec, o.n_max, o.pol, o.threads);
    const RealSeq gamma = autocovariance(spec, o.n_max + 2);
    const auto lev = levinson(gamma, o.n_max);
    Table t;
    t.columns = {"n", "alpha_series", "alpha_oracle", "diff", "terms_used", "converged"};
    t.integer_col = {true, false, false, false, true, true};
    bool all_converged = true;
    for (std::size_t n = 1; n <= o.n_max; ++n) {
        const auto& r = results[n - 1];
        if (n == 1) {
            t.rows.push_back(
                {Cell(1.0), Cell(), Cell(lev.alpha[0]), Cell(), Cell(), Cell(1.0)});
            continue;
        }
        all_converged = all_converged && r.converged;
        t.rows.push_back({Cell(double(n)), Cell(r.alpha), Cell(lev.alpha[n - 1]),
                          Cell(r.alpha - lev.alpha[n - 1]), Cell(double(r.terms_used)),
                          Cell(r.converged ? 1.0 : 0.0)});
    }
    Sink sink(o.out);
    t.write(sink.stream(), o.format);
    return all_converged ? 0 : 2;
}

int run_predict(const CommonOpts& o) {
    const ModelSpec spec = build_spec(o);
    require_valid(spec);
    const std::size_t W = spec.d > 0.0 ? std::max<std::size_t>(o.pol.head, 64) : o.pol.V;
    const std::size_t n_beta = o.n_max + 2 * W + 2;
    const std::size_t inner = o.pol.beta_inner_for(spec.d);
    const CoeffTable ct = coeff_table(spec, inner + n_beta + 2, o.n_max + 2);
    const BetaTable bt = beta(spec, ct, n_beta, o.pol);
    const PacfEngine eng(spec, &ct, bt, o.pol);
    const PredictorTable pt = eng.predictors(o.n_max);

    RealSeq al(o.n_max, 0.0);
    al[0] = levinson(ct.gamma, 1).alpha[0];
    for (std::size_t n = 2; n <= o.n_max; ++n) al[n - 1] = eng.alpha(n).alpha;

    Table t;
    t.columns = {"n", "j", "phi", "szego_residual"};
    t.integer_col = {true, true, false, false};
    bool all_converged = true;
    for (std::size_t n = 1; n <= o.n_max; ++n) {
        all_converged = all_converged && pt.row_converged[n - 1];
        for (std::size_t j = 1; j <= n; ++j) {
            Cell res;
            if (n + 1 <= o.n_max)
                res = pt.at(n, j) - pt.at(n + 1, j) - pt.at(n, n + 1 - j) * al[n];
            t.rows.push_back({Cell(double(n)), Cell(double(j)), Cell(pt.at(n, j)), res});
        }
    }
    Sink sink(o.out);
    t.write(sink.stream(), o.format);
    return all_converged ? 0 : 2;
}

int run_verify(const CommonOpts& o) {
    const ModelSpec spec = build_spec(o);
    bool all_pass = false;
    const nlohmann::json j = verify_bundle(spec, o.pol, o.n_max, all_pass);
    Sink sink(o.out);
    sink.stream() << j.dump(2) << "\n";
    return all_pass ? 0 : 2;
}

int run_bench(const CommonOpts& o) {
    Table t;
    t.columns = {"V", "naive_ms", "fft_ms", "speedup", "max_rel_diff"};
    t.integer_col = {true, false, false, false, false};
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (std::size_t lg = 10; lg <= 16; ++lg) {
        const std::size_t V = std::size_t{1} << lg;
        RealSeq b(3 * V), x(V);
        for (double& v : b) v = uni(rng);
        for (double& v : x) v = uni(rng);
        const auto t0 = std::chrono::steady_clock::now();
        const RealSeq yn = correlate_tail(b, x, 0, V, CorrelateMode::naive);
        const auto t1 = std::chrono::steady_clock::now();
        RealSeq yf;
        const int reps = V >= (std::size_t{1} << 15) ? 3 : 10;
        for (int r = 0; r < reps; ++r) yf = correlate_tail(b, x, 0, V, CorrelateMode::fft);
        const auto t2 = std::chrono::steady_clock::now();
        double scale = 0.0, diff = 0.0;
        for (double v : yn) scale = std::max(scale, std::abs(v));
        for (std::size_t i = 0; i < V; ++i) diff = std::max(diff, std::abs(yn[i] - yf[i]));
        const double naive_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        const double fft_ms =
            std::chrono::duration<double, std::milli>(t2 - t1).count() / reps;
        t.rows.push_back({Cell(double(V)), Cell(naive_ms), Cell(fft_ms),
                          Cell(naive_ms / fft_ms), Cell(diff / scale)});
    }
    Sink sink(o.out);
    t.write(sink.stream(), o.format);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Verblunsky coefficients (PACF) of ARMA/FARIMA models via the "
                 "phase-coefficient series, cross-checked against Levinson-Durbin"};
    app.require_subcommand(1);

    CommonOpts oc, ob, op, opr, ov, obn;
    ov.n_max = 30;
    auto* c_coeffs = app.add_subcommand("coeffs", "MA/AR coefficients and autocovariances");
    add_common(c_coeffs, oc, false);
    auto* c_beta = app.add_subcommand("beta", "phase coefficients with error estimates");
    add_common(c_beta, ob);
    auto* c_pacf = app.add_subcommand("pacf", "series PACF vs Levinson oracle");
    add_common(c_pacf, op);
    auto* c_pred = app.add_subcommand("predict", "finite predictor coefficients");
    add_common(c_pred, opr);
    auto* c_verify = app.add_subcommand("verify", "full verification bundle (JSON)");
    add_common(c_verify, ov);
    auto* c_bench = app.add_subcommand("bench", "naive vs FFT correlation timings");
    add_common(c_bench, obn, false);

    CLI11_PARSE(app, argc, argv);
    try {
        if (c_coeffs->parsed()) return run_coeffs(oc);
        if (c_beta->parsed()) return run_beta(ob);
        if (c_pacf->parsed()) return run_pacf(op);
        if (c_pred->parsed()) return run_predict(opr);
        if (c_verify->parsed()) return run_verify(ov);
        if (c_bench->parsed()) return run_bench(obn);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
