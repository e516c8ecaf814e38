// Acceptance gate: one PASS/FAIL line per criterion with the measured values
// and elapsed time pinned in code. Exits 0 only when every criterion passes.

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "qrec/qrec.hpp"

namespace {

constexpr double pi = 3.141592653589793238462643383279502884;

using qrec::ComplexMatrix;
using qrec::cplx;
using qrec::DampingParam;
using qrec::DensityMatrix;
using qrec::HadamardAngle;
using qrec::TwoQubitParams;

struct Outcome {
    bool pass;
    std::string detail;
};

struct Corpus {
    std::vector<DensityMatrix> states;
    std::vector<double> ps;
};

Corpus draw_corpus(std::uint64_t seed, std::size_t n, double p_max) {
    Corpus c;
    c.states.reserve(n);
    c.ps.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        qrec::RngStream state_stream(seed, 2 * i);
        qrec::RngStream p_stream(seed, 2 * i + 1);
        c.states.push_back(qrec::random_density_matrix(state_stream, 4, i % 4 + 1));
        c.ps.push_back(p_max * p_stream.uniform01());
    }
    return c;
}

std::string fmt(const char* pattern, ...) {
    char buf[512];
    va_list args;
    va_start(args, pattern);
    std::vsnprintf(buf, sizeof buf, pattern, args);
    va_end(args);
    return buf;
}

// 1: closed-form damping equals the Kraus application on 1000 random pairs
Outcome channel_equivalence() {
    const Corpus corpus = draw_corpus(9101, 1000, 1.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < corpus.states.size(); ++i) {
        const DampingParam d(corpus.ps[i]);
        const DensityMatrix via_kraus = qrec::damp_two_kraus(corpus.states[i], d);
        const DensityMatrix via_form =
            qrec::damp_two_closed_form(qrec::to_params(corpus.states[i]), d);
        worst = std::max(worst, qrec::max_abs_diff(via_kraus.matrix(), via_form.matrix()));
    }
    return {worst <= 1e-12, fmt("max |delta| = %.3g (limit 1e-12) over 1000 pairs", worst)};
}

// 2: the 16-dim circuit at the matched angle equals the recovery closed form
Outcome recovery_equivalence() {
    const Corpus corpus = draw_corpus(9102, 1000, 0.95);
    double worst = 0.0;
    for (std::size_t i = 0; i < corpus.states.size(); ++i) {
        const DampingParam d(corpus.ps[i]);
        const DensityMatrix damped =
            qrec::damp_two_closed_form(qrec::to_params(corpus.states[i]), d);
        const HadamardAngle angle(std::atan(1.0 / std::sqrt(d.q())));
        const DensityMatrix via_circuit = qrec::run_recovery_circuit(damped, angle).state;
        const DensityMatrix via_form =
            qrec::recovered_closed_form(qrec::to_params(corpus.states[i]), d).state;
        worst = std::max(worst, qrec::max_abs_diff(via_circuit.matrix(), via_form.matrix()));
    }
    return {worst <= 1e-10, fmt("max |delta| = %.3g (limit 1e-10) over 1000 pairs", worst)};
}

// 3: N rho_r - rho_in has the predicted sparse structure on the same corpus
Outcome error_matrix_identity() {
    const Corpus corpus = draw_corpus(9102, 1000, 0.95);
    double worst = 0.0;
    for (std::size_t i = 0; i < corpus.states.size(); ++i) {
        const double p = corpus.ps[i];
        const TwoQubitParams s = qrec::to_params(corpus.states[i]);
        const DensityMatrix rec = qrec::recovered_closed_form(s, DampingParam(p)).state;
        const double n = 1.0 + (1.0 - s.a + s.d) * p + p * p * s.d;
        const ComplexMatrix residual = cplx(n) * rec.matrix() - corpus.states[i].matrix();

        ComplexMatrix expected(4, 4);
        expected(0, 0) = p * (s.b + s.c) + p * p * s.d;
        expected(0, 1) = p * s.j;
        expected(0, 2) = p * s.i;
        expected(1, 1) = p * s.d;
        expected(2, 2) = p * s.d;
        expected(1, 0) = std::conj(expected(0, 1));
        expected(2, 0) = std::conj(expected(0, 2));
        worst = std::max(worst, qrec::max_abs_diff(residual, expected));
    }
    return {worst <= 1e-12, fmt("max |delta| = %.3g (limit 1e-12) over 1000 pairs", worst)};
}

// 4: at p = 0 both recovery schemes return the input
Outcome identity_at_zero() {
    double worst = 0.0;
    for (std::size_t i = 0; i < 100; ++i) {
        qrec::RngStream stream(9104, i);
        const DensityMatrix rho = qrec::random_density_matrix(stream, 4, i % 4 + 1);
        const TwoQubitParams s = qrec::to_params(rho);
        worst = std::max(worst, qrec::max_abs_diff(
                                    qrec::recovered_closed_form(s, DampingParam(0.0)).state.matrix(),
                                    rho.matrix()));
        for (double x : {0.1, 0.5, 1.0, 2.0}) {
            const DensityMatrix out =
                qrec::run_extended(s, qrec::ExtendedConfig(x, DampingParam(0.0))).state;
            worst = std::max(worst, qrec::max_abs_diff(out.matrix(), rho.matrix()));
        }
    }
    return {worst <= 1e-12, fmt("max |delta| = %.3g (limit 1e-12), 100 states, x in "
                                "{0.1, 0.5, 1, 2}",
                                worst)};
}

// 5: fidelity and concurrence unit checks
Outcome metric_suite() {
    std::vector<std::string> failures;

    qrec::RngStream stream(9105, 0);
    const DensityMatrix rho = qrec::random_density_matrix(stream, 4, 4);
    const double self = qrec::fidelity(rho, rho).value;
    if (std::abs(self - 1.0) > 1e-12) failures.push_back(fmt("F(rho,rho) = %.15g", self));

    ComplexMatrix e0(4, 4), e3(4, 4);
    e0(0, 0) = 1.0;
    e3(3, 3) = 1.0;
    const double ortho =
        qrec::fidelity(DensityMatrix::validate(e0), DensityMatrix::validate(e3)).value;
    if (ortho > 1e-12) failures.push_back(fmt("orthogonal F = %.3g", ortho));

    ComplexMatrix bell(4, 4);
    bell(0, 0) = bell(0, 3) = bell(3, 0) = bell(3, 3) = 0.5;
    const double c_bell = qrec::concurrence(DensityMatrix::validate(bell)).value;
    if (std::abs(c_bell - 1.0) > 1e-12) failures.push_back(fmt("Bell C = %.15g", c_bell));

    const double c_product = qrec::concurrence(DensityMatrix::validate(e0)).value;
    if (c_product > 1e-12) failures.push_back(fmt("product C = %.3g", c_product));

    double worst_x = 0.0;
    for (std::size_t i = 0; i < 100; ++i) {
        qrec::RngStream rng(9105, i + 1);
        double diag[4];
        double sum = 0.0;
        for (double& v : diag) {
            v = 0.05 + rng.uniform01();
            sum += v;
        }
        TwoQubitParams s;
        s.a = diag[0] / sum; s.b = diag[1] / sum; s.c = diag[2] / sum; s.d = diag[3] / sum;
        s.g = std::polar(rng.uniform01() * std::sqrt(s.a * s.d), rng.uniform(0.0, 6.28));
        s.h = std::polar(rng.uniform01() * std::sqrt(s.b * s.c), rng.uniform(0.0, 6.28));
        const double expected =
            2.0 * std::max({0.0, std::abs(s.g) - std::sqrt(s.b * s.c),
                            std::abs(s.h) - std::sqrt(s.a * s.d)});
        worst_x = std::max(worst_x,
                           std::abs(qrec::concurrence(qrec::from_params(s)).value - expected));
    }
    if (worst_x > 1e-10) failures.push_back(fmt("X-state C mismatch %.3g", worst_x));

    double worst_lu = 0.0;
    for (std::size_t i = 0; i < 50; ++i) {
        qrec::RngStream rs(9106, 2 * i);
        qrec::RngStream us(9106, 2 * i + 1);
        const DensityMatrix state = qrec::random_density_matrix(rs, 4, i % 4 + 1);

        ComplexMatrix u2[2];
        for (auto& u : u2) {
            const cplx a = us.gaussian(), b = us.gaussian();
            const double na = std::sqrt(std::norm(a) + std::norm(b));
            const cplx c = std::conj(-b / na), d = std::conj(a / na);
            u = ComplexMatrix(2, 2);
            u(0, 0) = a / na; u(0, 1) = c;
            u(1, 0) = b / na; u(1, 1) = d;
        }
        const ComplexMatrix u = qrec::kron(u2[0], u2[1]);
        const DensityMatrix rotated =
            DensityMatrix::validate(u * state.matrix() * u.adjoint());
        worst_lu = std::max(worst_lu, std::abs(qrec::concurrence(rotated).value -
                                               qrec::concurrence(state).value));
        worst_lu = std::max(worst_lu, std::abs(qrec::fidelity(rotated, rotated).value - 1.0));
    }
    if (worst_lu > 1e-9) failures.push_back(fmt("local-unitary drift %.3g", worst_lu));

    if (!failures.empty()) {
        std::string joined;
        for (const auto& f : failures) joined += (joined.empty() ? "" : "; ") + f;
        return {false, joined};
    }
    return {true, fmt("6 checks: self-F, orthogonal-F, Bell C, product C, X-state C (max "
                      "%.3g), local-unitary (max %.3g)",
                      worst_x, worst_lu)};
}

// 6: recovered fidelity beats damped fidelity for both reference states
Outcome fidelity_ordering() {
    double min_gap_strict = 1.0;
    double min_gap = 1.0;
    for (const DensityMatrix& state : {qrec::rho1(), qrec::rho2()}) {
        const TwoQubitParams s = qrec::to_params(state);
        for (int k = 1; k <= 19; ++k) {
            const double p = 0.05 * k;
            const DampingParam d(p);
            const double f_d = qrec::fidelity(qrec::damp_two_closed_form(s, d), state).value;
            const double f_r =
                qrec::fidelity(qrec::recovered_closed_form(s, d).state, state).value;
            min_gap = std::min(min_gap, f_r - f_d);
            if (p >= 0.1) min_gap_strict = std::min(min_gap_strict, f_r - f_d);
        }
    }
    return {min_gap >= 0.0 && min_gap_strict > 0.0,
            fmt("min F_r - F_d = %.3g overall, %.3g for p >= 0.1", min_gap, min_gap_strict)};
}

// 7: both reference states lose entanglement at a finite p*; recovery helps
// below p* and cannot help beyond it
Outcome sudden_death() {
    std::string detail;
    bool ok = true;
    for (const auto& [state, name] :
         {std::pair{qrec::rho1(), "state 1"}, std::pair{qrec::rho2(), "state 2"}}) {
        const TwoQubitParams s = qrec::to_params(state);
        const auto p_star = qrec::esd_point(s, qrec::DampingPath::damped);
        if (!p_star || !(*p_star > 0.0 && *p_star < 1.0)) {
            ok = false;
            detail += fmt("%s: no death point; ", name);
            continue;
        }
        double worst_gap = 1.0;
        double worst_tail = 0.0;
        for (double p = 0.02; p < 0.98; p += 0.02) {
            const double c_d =
                qrec::concurrence(qrec::damp_two_closed_form(s, DampingParam(p))).value;
            const double c_r =
                qrec::concurrence(qrec::recovered_closed_form(s, DampingParam(p)).state).value;
            if (p < *p_star - 0.01) worst_gap = std::min(worst_gap, c_r - c_d);
            if (p > *p_star + 0.01) worst_tail = std::max(worst_tail, c_r);
        }
        if (worst_gap < 0.0 || worst_tail > 1e-12) ok = false;
        detail += fmt("%s: p* = %.4f, min C_r - C_d = %.3g below, max C_r = %.3g above; ",
                      name, *p_star, worst_gap, worst_tail);
    }
    return {ok, detail};
}

// 8: the preparation stage keeps entanglement alive beyond the basic death
// point, and x = 1 reduces to the basic scheme
Outcome extended_scheme() {
    bool ok = true;
    std::string detail;
    for (const auto& [state, name] :
         {std::pair{qrec::rho1(), "state 1"}, std::pair{qrec::rho2(), "state 2"}}) {
        const TwoQubitParams s = qrec::to_params(state);
        const double p_star = *qrec::esd_point(s, qrec::DampingPath::damped);
        double min_c = 1.0;
        for (double p = p_star + 0.05; p < 0.95; p += 0.05) {
            const DensityMatrix out =
                qrec::run_extended(s, qrec::ExtendedConfig(0.1, DampingParam(p))).state;
            min_c = std::min(min_c, qrec::concurrence(out).value);
        }
        if (!(min_c > 0.0)) ok = false;
        detail += fmt("%s: min C(x=0.1, p > %.3f) = %.3g; ", name, p_star, min_c);
    }

    double worst = 0.0;
    const TwoQubitParams s1 = qrec::to_params(qrec::rho1());
    for (double p = 0.05; p <= 0.91; p += 0.05) {
        const DampingParam d(p);
        const auto ext = qrec::run_extended(s1, qrec::ExtendedConfig(1.0, d));
        const auto basic = qrec::recovered_closed_form(s1, d);
        worst = std::max(worst, std::abs(qrec::concurrence(ext.state).value -
                                         qrec::concurrence(basic.state).value));
        worst = std::max(worst, std::abs(qrec::fidelity(ext.state, qrec::rho1()).value -
                                         qrec::fidelity(basic.state, qrec::rho1()).value));
    }
    if (worst > 1e-10) ok = false;
    detail += fmt("max |x=1 - basic| = %.3g (limit 1e-10)", worst);
    return {ok, detail};
}

// 9: the canonical Monte-Carlo run lands on the documented optimum and
// statistics, and the angle curve is pi-periodic at grid level
Outcome robust_statistics() {
    const qrec::UncertaintySpec spec{0.1, 0.9, {4, 2}, 10000, 7001};
    const qrec::FidelityReport report =
        qrec::optimize_theta(qrec::ThetaGrid{0.0, 2.0 * pi, pi / 10.0}, spec);

    bool ok = true;
    std::string detail;

    if (report.theta_opt != report.thetas[3] ||
        std::abs(report.theta_opt - 3.0 * pi / 10.0) > 1e-12) {
        ok = false;
    }
    detail += fmt("theta_opt = %.6f (want 3pi/10 = %.6f); ", report.theta_opt, 3.0 * pi / 10.0);

    const double f_opt = report.f_bar[3].mean;
    const double f_zero = report.f_bar[0].mean;
    if (std::abs(f_opt - 0.790) > 0.05) ok = false;
    if (std::abs(report.f_adaptive.mean - 0.838) > 0.03) ok = false;
    if (std::abs(report.f_damped.mean - 0.727) > 0.03) ok = false;
    if (std::abs(f_zero - 0.250) > 0.03) ok = false;
    detail += fmt("F(3pi/10) = %.6f (0.790 +- 0.05), F_adaptive = %.6f (0.838 +- 0.03), "
                  "F_damped = %.6f (0.727 +- 0.03), F(0) = %.6f (0.250 +- 0.03); ",
                  f_opt, report.f_adaptive.mean, report.f_damped.mean, f_zero);

    double worst_period = 0.0;
    for (std::size_t k = 0; k + 10 < report.thetas.size(); ++k) {
        const auto& lo = report.f_bar[k];
        const auto& hi = report.f_bar[k + 10];
        const double gap = std::abs(lo.mean - hi.mean);
        const double allowed = 2.0 * std::sqrt(lo.se * lo.se + hi.se * hi.se);
        worst_period = std::max(worst_period, gap - allowed);
    }
    if (worst_period > 0.0) ok = false;
    detail += fmt("periodicity slack %.3g", worst_period);
    return {ok, detail};
}

// 10: the fixed-angle curve crosses above the damped curve inside the
// documented windows
Outcome mismatch_crossings() {
    bool ok = true;
    std::string detail;
    const struct {
        DensityMatrix state;
        const char* name;
        double lo, hi;
    } cases[2] = {{qrec::rho1(), "state 1", 0.30, 0.40}, {qrec::rho2(), "state 2", 0.50, 0.60}};

    for (const auto& c : cases) {
        std::vector<double> grid;
        for (double p = 0.0; p < 0.9899; p += 0.0025) grid.push_back(p);
        const auto rows = qrec::mismatch_study(qrec::to_params(c.state), 0.7, grid);

        double crossing = -1.0;
        for (std::size_t k = 1; k < rows.size(); ++k) {
            const double before = rows[k - 1].f_fixed - rows[k - 1].f_damped;
            const double after = rows[k].f_fixed - rows[k].f_damped;
            if (before <= 0.0 && after > 0.0) {
                crossing =
                    rows[k - 1].p + (rows[k].p - rows[k - 1].p) * (-before) / (after - before);
                break;
            }
        }
        const bool inside = crossing >= c.lo && crossing <= c.hi;
        if (!inside) ok = false;
        detail += fmt("%s: crossing at p = %.4f (want [%.2f, %.2f])%s; ", c.name, crossing,
                      c.lo, c.hi, inside ? "" : " MISSED");
    }
    return {ok, detail};
}

// 11: the canonical table reproduction is byte-identical across runs
Outcome determinism() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path();
    const fs::path first = dir / "qrec_acceptance_table2_a.csv";
    const fs::path second = dir / "qrec_acceptance_table2_b.csv";

    for (const fs::path& out : {first, second}) {
        const std::string cmd =
            std::string(QREC_CLI_PATH) + " reproduce table2 --out " + out.string();
        const int status = std::system(cmd.c_str());
        if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
            return {false, fmt("CLI run failed with status %d", status)};
        }
    }

    const auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const std::string a = slurp(first);
    const std::string b = slurp(second);
    fs::remove(first);
    fs::remove(second);
    if (a.empty() || a != b) {
        return {false, fmt("outputs differ (%zu vs %zu bytes)", a.size(), b.size())};
    }
    return {true, fmt("two runs byte-identical (%zu bytes)", a.size())};
}

// 12: every path preserves trace and positivity, damping composes, and the
// standard error scales like 1/sqrt(n)
Outcome property_suites() {
    bool ok = true;
    std::string detail;

    double worst_trace = 0.0;
    double worst_semigroup = 0.0;
    const std::size_t n = 10000;
    try {
        for (std::size_t i = 0; i < n; ++i) {
            qrec::RngStream state_stream(9112, 2 * i);
            qrec::RngStream p_stream(9112, 2 * i + 1);
            const DensityMatrix rho = qrec::random_density_matrix(state_stream, 4, i % 4 + 1);
            const TwoQubitParams s = qrec::to_params(rho);
            const double u = p_stream.uniform01();

            // channel paths at p = u, circuit paths at 0.95 u to stay clear of
            // the undefined angle at p = 1; every constructor validates
            // Hermiticity, trace, and positivity
            const DensityMatrix closed = qrec::damp_two_closed_form(s, DampingParam(u));
            const DensityMatrix kraus = qrec::damp_two_kraus(rho, DampingParam(u));
            const DampingParam pc(0.95 * u);
            const DensityMatrix circuit =
                qrec::run_recovery_circuit(qrec::damp_two_closed_form(s, pc),
                                           HadamardAngle(std::atan(1.0 / std::sqrt(pc.q()))))
                    .state;
            const DensityMatrix extended =
                qrec::run_extended(s, qrec::ExtendedConfig(0.5, pc)).state;
            for (const DensityMatrix* m : {&closed, &kraus, &circuit, &extended}) {
                worst_trace =
                    std::max(worst_trace, std::abs(m->matrix().trace() - cplx(1.0)));
            }

            const double u2 = p_stream.uniform01();
            const DensityMatrix two_steps =
                qrec::damp_two_closed_form(qrec::to_params(closed), DampingParam(u2));
            const DensityMatrix one_step = qrec::damp_two_closed_form(
                s, DampingParam(1.0 - (1.0 - u) * (1.0 - u2)));
            worst_semigroup = std::max(
                worst_semigroup, qrec::max_abs_diff(two_steps.matrix(), one_step.matrix()));
        }
    } catch (const std::exception& e) {
        return {false, fmt("state validation failed: %s", e.what())};
    }
    if (worst_trace > 1e-12 || worst_semigroup > 1e-12) ok = false;
    detail += fmt("10^4 inputs: max |tr - 1| = %.3g, max semigroup |delta| = %.3g "
                  "(limits 1e-12); ",
                  worst_trace, worst_semigroup);

    double se[3];
    const std::size_t sizes[3] = {100, 1000, 10000};
    for (int k = 0; k < 3; ++k) {
        const qrec::UncertaintySpec spec{0.1, 0.9, {4, 2}, sizes[k], 9113};
        se[k] = qrec::average_fidelity(HadamardAngle(3.0 * pi / 10.0), spec).se;
    }
    const double ideal = std::sqrt(10.0);
    for (int k = 0; k < 2; ++k) {
        const double ratio = se[k] / se[k + 1];
        if (!(ratio >= ideal / 2.0 && ratio <= ideal * 2.0)) ok = false;
        detail += fmt("se(n=%zu)/se(n=%zu) = %.3f (want %.3f within x2)%s", sizes[k],
                      sizes[k + 1], ratio, ideal, k == 0 ? ", " : "");
    }
    return {ok, detail};
}

} // namespace

int main() {
    const struct {
        int id;
        const char* label;
        double time_limit; // seconds, 0 = unbounded
        std::function<Outcome()> run;
    } criteria[] = {
        {1, "channel closed form vs Kraus", 1.0, channel_equivalence},
        {2, "recovery circuit vs closed form", 10.0, recovery_equivalence},
        {3, "error-matrix identity", 0.0, error_matrix_identity},
        {4, "identity at p = 0", 0.0, identity_at_zero},
        {5, "metric unit suite", 0.0, metric_suite},
        {6, "recovered fidelity dominates damped", 5.0, fidelity_ordering},
        {7, "entanglement sudden death", 0.0, sudden_death},
        {8, "extended scheme beyond sudden death", 0.0, extended_scheme},
        {9, "robust-angle statistics", 300.0, robust_statistics},
        {10, "fixed-angle crossing windows", 0.0, mismatch_crossings},
        {11, "byte-identical reproduction", 0.0, determinism},
        {12, "property suites", 0.0, property_suites},
    };

    int passed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome{false, ""};
        try {
            outcome = c.run();
        } catch (const std::exception& e) {
            outcome = {false, fmt("unexpected exception: %s", e.what())};
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.time_limit > 0.0 && seconds > c.time_limit) {
            outcome.pass = false;
            outcome.detail += fmt(" [over the %.0f s budget]", c.time_limit);
        }
        std::printf("%s criterion %2d: %s: %s [%.2f s]\n", outcome.pass ? "PASS" : "FAIL",
                    c.id, c.label, outcome.detail.c_str(), seconds);
        std::fflush(stdout);
        if (outcome.pass) ++passed;
    }
    std::printf("%d/12 criteria passed\n", passed);
    return passed == 12 ? 0 : 1;
}
