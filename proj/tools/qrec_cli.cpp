// Command-line front end: damp / recover / extend on a single state, CSV
// sweeps over p, the Monte-Carlo robust-angle search, and canonical data
// sets under fixed seeds.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qrec/qrec.hpp"

namespace {

constexpr double pi = 3.141592653589793238462643383279502884;

constexpr std::uint64_t default_seed_constant = 12345;

// canonical Monte-Carlo runs: fixed seeds, rank-2 ensemble, 10^4 samples
constexpr std::uint64_t table2_seed = 7001;
constexpr std::uint64_t fig3_seed = 303;
constexpr std::size_t mc_samples = 10000;
constexpr std::size_t mc_rank = 2;

std::uint64_t default_seed() {
    const char* env = std::getenv("QREC_SEED");
    if (env == nullptr || *env == '\0') return default_seed_constant;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') {
        throw qrec::ValidationError("QREC_SEED must be a decimal unsigned integer, got \"" +
                                    std::string(env) + "\"");
    }
    return v;
}

qrec::DensityMatrix resolve_state(const std::string& source, std::uint64_t seed,
                                  std::size_t rank) {
    if (source == "rho1") return qrec::rho1();
    if (source == "rho2") return qrec::rho2();
    if (source == "random") {
        qrec::RngStream stream(seed, 0);
        return qrec::random_density_matrix(stream, 4, rank);
    }
    return qrec::read_state_file(source);
}

struct GridSpec {
    double start;
    double end;
    double step;
};

GridSpec parse_grid(const std::string& text) {
    GridSpec g{};
    char trailing = '\0';
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &g.start, &g.end, &g.step, &trailing) != 3) {
        throw qrec::ValidationError("grid must be start:end:step, got \"" + text + "\"");
    }
    return g;
}

std::vector<double> linear_points(const GridSpec& g) {
    if (!(g.step > 0.0) || !(g.end >= g.start)) {
        throw qrec::ValidationError("grid needs step > 0 and end >= start");
    }
    std::vector<double> out;
    for (std::size_t k = 0;; ++k) {
        const double v = g.start + static_cast<double>(k) * g.step;
        if (v > g.end + g.step * 1e-9) break;
        out.push_back(v);
    }
    return out;
}

// --out picks a file; otherwise results go to stdout
class OutputSink {
  public:
    explicit OutputSink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw qrec::ValidationError("cannot open for writing: " + path);
        }
    }

    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

  private:
    std::ofstream file_;
};

nlohmann::json single_doc(const qrec::DensityMatrix& input, const qrec::DensityMatrix& output,
                          double success, std::uint64_t seed) {
    return {{"state", qrec::state_to_json(output)},
            {"success_probability", success},
            {"fidelity_vs_input", qrec::fidelity(output, input).value},
            {"concurrence_input", qrec::concurrence(input).value},
            {"concurrence_output", qrec::concurrence(output).value},
            {"seed", seed}};
}

void emit_json(const std::string& out_path, const nlohmann::json& doc) {
    OutputSink sink(out_path);
    sink.stream() << doc.dump(2) << '\n';
}

std::string join_numbers(const std::vector<double>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) s += ',';
        s += qrec::csv_number(xs[i]);
    }
    return s;
}

// shared flags of the single-state commands
struct StateOptions {
    std::string source;
    std::uint64_t seed = default_seed_constant;
    std::size_t rank = 4;
    std::string out;

    void attach(CLI::App* cmd) {
        cmd->add_option("--state", source, "rho1, rho2, random, or a JSON state file")
            ->required();
        cmd->add_option("--seed", seed, "seed for --state random")
            ->default_val(default_seed());
        cmd->add_option("--rank", rank, "Ginibre rank for --state random")->default_val(4);
        cmd->add_option("--out", out, "output file (default: stdout)");
    }
};

void run_sweep(const StateOptions& state_opts, const std::string& grid_text,
               const std::vector<double>& xs) {
    const qrec::DensityMatrix input =
        resolve_state(state_opts.source, state_opts.seed, state_opts.rank);
    const qrec::TwoQubitParams params = qrec::to_params(input);
    const std::vector<double> ps = linear_points(parse_grid(grid_text));

    OutputSink sink(state_opts.out);
    qrec::CsvWriter csv(sink.stream());
    csv.comment("command", "sweep");
    csv.comment("state", state_opts.source);
    csv.comment("seed", std::to_string(state_opts.seed));
    csv.comment("p_grid", grid_text);
    if (!xs.empty()) csv.comment("x", join_numbers(xs));

    std::vector<std::string> names = {"p", "F_d", "F_r", "C_d", "C_r"};
    for (double x : xs) {
        names.push_back("F_r_x" + qrec::csv_number(x));
        names.push_back("C_r_x" + qrec::csv_number(x));
    }
    csv.header(names);

    for (double p : ps) {
        const qrec::DampingParam d(p);
        const qrec::DensityMatrix damped = qrec::damp_two_closed_form(params, d);
        std::vector<std::optional<double>> cells;
        cells.emplace_back(p);
        cells.emplace_back(qrec::fidelity(damped, input).value);
        std::optional<double> f_r, c_r;
        if (p < 1.0) {
            const qrec::PostSelectedOutcome rec = qrec::recovered_closed_form(params, d);
            f_r = qrec::fidelity(rec.state, input).value;
            c_r = qrec::concurrence(rec.state).value;
        }
        cells.push_back(f_r);
        cells.emplace_back(qrec::concurrence(damped).value);
        cells.push_back(c_r);
        for (double x : xs) {
            std::optional<double> f_x, c_x;
            if (p < 1.0) {
                const qrec::PostSelectedOutcome ext =
                    qrec::run_extended(params, qrec::ExtendedConfig(x, d));
                f_x = qrec::fidelity(ext.state, input).value;
                c_x = qrec::concurrence(ext.state).value;
            }
            cells.push_back(f_x);
            cells.push_back(c_x);
        }
        csv.row(cells);
    }
}

void run_robust(double p_lower, double p_upper, std::size_t n, std::uint64_t seed,
                std::size_t rank, const std::string& grid_text, bool as_json,
                const std::string& out_path) {
    qrec::ThetaGrid grid{0.0, 2.0 * pi, pi / 10.0};
    if (!grid_text.empty()) {
        const GridSpec g = parse_grid(grid_text);
        grid = {g.start, g.end, g.step};
    }
    const qrec::UncertaintySpec spec{p_lower, p_upper, {4, rank}, n, seed};
    const qrec::FidelityReport report = qrec::optimize_theta(grid, spec);

    OutputSink sink(out_path);
    if (as_json) {
        sink.stream() << qrec::report_to_json(report).dump(2) << '\n';
    } else {
        qrec::CsvWriter csv(sink.stream());
        csv.comment("command", "robust");
        qrec::write_report_csv(csv, report);
    }
}

const std::vector<double> extended_x_values = {0.1, 0.5, 0.8};

void reproduce_fig2(qrec::CsvWriter& csv) {
    csv.comment("content", "fidelity of damped and recovered states vs p, reference states");
    csv.comment("p_grid", "0:0.95:0.05");
    csv.header({"p", "f_damped_rho1", "f_recovered_rho1", "f_damped_rho2", "f_recovered_rho2"});
    const qrec::DensityMatrix states[2] = {qrec::rho1(), qrec::rho2()};
    for (double p : linear_points({0.0, 0.95, 0.05})) {
        const qrec::DampingParam d(p);
        std::vector<std::optional<double>> cells{p};
        for (const auto& state : states) {
            const qrec::TwoQubitParams params = qrec::to_params(state);
            const qrec::DensityMatrix damped = qrec::damp_two_closed_form(params, d);
            cells.emplace_back(qrec::fidelity(damped, state).value);
            cells.emplace_back(
                qrec::fidelity(qrec::recovered_closed_form(params, d).state, state).value);
        }
        csv.row(cells);
    }
}

void reproduce_fig3(qrec::CsvWriter& csv) {
    csv.comment("content", "ensemble-average fidelity vs known p, adaptive angle");
    csv.comment("seed", std::to_string(fig3_seed));
    csv.comment("n_samples", std::to_string(mc_samples));
    csv.comment("rank", std::to_string(mc_rank));
    csv.comment("p_grid", "0.05:0.95:0.05");
    csv.header({"p", "f_recovered_mean", "f_recovered_se", "f_damped_mean", "f_damped_se"});
    for (double p : linear_points({0.05, 0.95, 0.05})) {
        const qrec::BaselinePair b =
            qrec::baselines_at_p(qrec::DampingParam(p), {4, mc_rank}, mc_samples, fig3_seed);
        csv.row({p, b.recovered.mean, b.recovered.se, b.damped.mean, b.damped.se});
    }
}

// fig5: concurrence, fig6: fidelity; basic recovery plus the extended scheme
// at x = 0.1, 0.5, 0.8 for both reference states
void reproduce_extended(qrec::CsvWriter& csv, bool concurrence_metric) {
    const char* metric = concurrence_metric ? "C" : "f";
    csv.comment("content", concurrence_metric
                               ? "concurrence of damped, recovered, and extended-recovered states"
                               : "fidelity of damped, recovered, and extended-recovered states");
    csv.comment("x", join_numbers(extended_x_values));
    csv.comment("p_grid", "0:0.95:0.05");

    std::vector<std::string> names{"p"};
    const char* suffixes[2] = {"_rho1", "_rho2"};
    for (const char* suffix : suffixes) {
        names.push_back(std::string(metric) + "_damped" + suffix);
        names.push_back(std::string(metric) + "_recovered" + suffix);
        for (double x : extended_x_values) {
            names.push_back(std::string(metric) + "_recovered_x" + qrec::csv_number(x) + suffix);
        }
    }
    csv.header(names);

    const qrec::DensityMatrix states[2] = {qrec::rho1(), qrec::rho2()};
    auto score = [&](const qrec::DensityMatrix& out, const qrec::DensityMatrix& ref) {
        return concurrence_metric ? qrec::concurrence(out).value
                                  : qrec::fidelity(out, ref).value;
    };
    for (double p : linear_points({0.0, 0.95, 0.05})) {
        const qrec::DampingParam d(p);
        std::vector<std::optional<double>> cells{p};
        for (const auto& state : states) {
            const qrec::TwoQubitParams params = qrec::to_params(state);
            cells.emplace_back(score(qrec::damp_two_closed_form(params, d), state));
            cells.emplace_back(score(qrec::recovered_closed_form(params, d).state, state));
            for (double x : extended_x_values) {
                cells.emplace_back(
                    score(qrec::run_extended(params, qrec::ExtendedConfig(x, d)).state, state));
            }
        }
        csv.row(cells);
    }
}

void reproduce_mismatch(qrec::CsvWriter& csv, const qrec::DensityMatrix& state,
                        const char* state_name) {
    const double p_hat = 0.7;
    csv.comment("content", "fixed-angle vs adaptive recovery fidelity under p mismatch");
    csv.comment("state", state_name);
    csv.comment("p_hat", p_hat);
    csv.comment("theta_fixed", std::atan(1.0 / std::sqrt(1.0 - p_hat)));
    csv.comment("p_grid", "0:0.99:0.01");
    csv.header({"p", "f_fixed", "f_adaptive", "f_damped"});
    for (const qrec::MismatchRow& row :
         qrec::mismatch_study(qrec::to_params(state), p_hat, linear_points({0.0, 0.99, 0.01}))) {
        csv.row({row.p, row.f_fixed, row.f_adaptive, row.f_damped});
    }
}

void reproduce_table2(qrec::CsvWriter& csv) {
    csv.comment("content", "average fidelity per gate angle over random states and p");
    const qrec::UncertaintySpec spec{0.1, 0.9, {4, mc_rank}, mc_samples, table2_seed};
    const qrec::FidelityReport report =
        qrec::optimize_theta(qrec::ThetaGrid{0.0, 2.0 * pi, pi / 10.0}, spec);
    qrec::write_report_csv(csv, report);
}

void run_reproduce(const std::string& target, const std::string& out_opt) {
    const std::string path = out_opt.empty() ? target + ".csv" : out_opt;
    qrec::CsvWriter csv(path);
    csv.comment("target", target);
    if (target == "fig2") {
        reproduce_fig2(csv);
    } else if (target == "fig3") {
        reproduce_fig3(csv);
    } else if (target == "fig5") {
        reproduce_extended(csv, true);
    } else if (target == "fig6") {
        reproduce_extended(csv, false);
    } else if (target == "fig7") {
        reproduce_mismatch(csv, qrec::rho1(), "rho1");
    } else if (target == "fig8") {
        reproduce_mismatch(csv, qrec::rho2(), "rho2");
    } else {
        reproduce_table2(csv);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"amplitude-damping recovery toolkit"};
    app.require_subcommand(1);

    try {
        StateOptions damp_opts;
        double damp_p = 0.0;
        auto* damp_cmd = app.add_subcommand("damp", "apply amplitude damping to a state");
        damp_opts.attach(damp_cmd);
        damp_cmd->add_option("--p", damp_p, "decay probability in [0, 1]")->required();
        damp_cmd->callback([&] {
            const qrec::DensityMatrix input =
                resolve_state(damp_opts.source, damp_opts.seed, damp_opts.rank);
            const qrec::DensityMatrix damped =
                qrec::damp_two_closed_form(qrec::to_params(input), qrec::DampingParam(damp_p));
            emit_json(damp_opts.out, single_doc(input, damped, 1.0, damp_opts.seed));
        });

        StateOptions rec_opts;
        double rec_p = 0.0;
        double rec_theta = 0.0;
        bool rec_degrees = false;
        auto* rec_cmd =
            app.add_subcommand("recover", "damp a state, then run post-selected recovery");
        rec_opts.attach(rec_cmd);
        rec_cmd->add_option("--p", rec_p, "decay probability in [0, 1]")->required();
        auto* theta_opt = rec_cmd->add_option(
            "--theta", rec_theta,
            "gate angle (default: matched to p as atan(1/sqrt(1-p)))");
        rec_cmd->add_flag("--degrees", rec_degrees, "interpret --theta in degrees")
            ->needs(theta_opt);
        rec_cmd->callback([&] {
            const qrec::DensityMatrix input =
                resolve_state(rec_opts.source, rec_opts.seed, rec_opts.rank);
            const qrec::TwoQubitParams params = qrec::to_params(input);
            const qrec::DampingParam d(rec_p);
            qrec::PostSelectedOutcome out = [&] {
                if (theta_opt->count() == 0) return qrec::recovered_closed_form(params, d);
                const double theta = rec_degrees ? rec_theta * pi / 180.0 : rec_theta;
                return qrec::run_recovery_circuit(qrec::damp_two_closed_form(params, d),
                                                  qrec::HadamardAngle(theta));
            }();
            emit_json(rec_opts.out,
                      single_doc(input, out.state, out.success_probability, rec_opts.seed));
        });

        StateOptions ext_opts;
        double ext_p = 0.0;
        double ext_x = 1.0;
        auto* ext_cmd =
            app.add_subcommand("extend", "prepare, damp, then recover (extended scheme)");
        ext_opts.attach(ext_cmd);
        ext_cmd->add_option("--p", ext_p, "decay probability in [0, 1]")->required();
        ext_cmd->add_option("--x", ext_x, "preparation strength, x = tan^2(theta1)")->required();
        ext_cmd->callback([&] {
            const qrec::DensityMatrix input =
                resolve_state(ext_opts.source, ext_opts.seed, ext_opts.rank);
            const qrec::PostSelectedOutcome out = qrec::run_extended(
                qrec::to_params(input), qrec::ExtendedConfig(ext_x, qrec::DampingParam(ext_p)));
            emit_json(ext_opts.out,
                      single_doc(input, out.state, out.success_probability, ext_opts.seed));
        });

        StateOptions sweep_opts;
        std::string sweep_grid = "0:0.95:0.05";
        bool sweep_extended = false;
        std::vector<double> sweep_xs;
        auto* sweep_cmd =
            app.add_subcommand("sweep", "CSV of fidelity and concurrence over a p grid");
        sweep_opts.attach(sweep_cmd);
        sweep_cmd->add_option("--p-grid", sweep_grid, "p grid as start:end:step")
            ->capture_default_str();
        sweep_cmd->add_flag("--extended", sweep_extended,
                            "add extended-scheme columns (default x: 0.1,0.5,0.8)");
        sweep_cmd->add_option("--x", sweep_xs, "extended-scheme x values")->delimiter(',');
        sweep_cmd->callback([&] {
            if (sweep_extended && sweep_xs.empty()) sweep_xs = extended_x_values;
            run_sweep(sweep_opts, sweep_grid, sweep_xs);
        });

        double rob_lower = 0.1, rob_upper = 0.9;
        std::size_t rob_n = mc_samples;
        std::uint64_t rob_seed = 0;
        std::size_t rob_rank = 4;
        std::string rob_grid, rob_out;
        bool rob_json = false;
        auto* rob_cmd = app.add_subcommand(
            "robust", "grid-search the gate angle for best average fidelity under uncertainty");
        rob_cmd->add_option("--p-lower", rob_lower, "lower end of the p interval")
            ->capture_default_str();
        rob_cmd->add_option("--p-upper", rob_upper, "upper end of the p interval")
            ->capture_default_str();
        rob_cmd->add_option("--n", rob_n, "Monte-Carlo samples")->capture_default_str();
        rob_cmd->add_option("--seed", rob_seed, "master seed")->default_val(default_seed());
        rob_cmd->add_option("--rank", rob_rank, "Ginibre rank of the state ensemble")
            ->capture_default_str();
        rob_cmd->add_option("--theta-grid", rob_grid,
                            "angle grid as start:end:step (default: 0 to 2pi, step pi/10)");
        rob_cmd->add_flag("--json", rob_json, "emit the full JSON report instead of CSV");
        rob_cmd->add_option("--out", rob_out, "output file (default: stdout)");
        rob_cmd->callback([&] {
            run_robust(rob_lower, rob_upper, rob_n, rob_seed, rob_rank, rob_grid, rob_json,
                       rob_out);
        });

        std::string rep_target, rep_out;
        auto* rep_cmd =
            app.add_subcommand("reproduce", "write a canonical data set under its fixed seed");
        rep_cmd->add_option("target", rep_target, "one of the documented data sets")
            ->required()
            ->check(CLI::IsMember({"fig2", "fig3", "fig5", "fig6", "fig7", "fig8", "table2"}));
        rep_cmd->add_option("--out", rep_out, "output file (default: <target>.csv)");
        rep_cmd->callback([&] { run_reproduce(rep_target, rep_out); });

        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const qrec::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const qrec::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
