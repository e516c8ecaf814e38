#pragma once

// Post-selected recovery: the four-qubit circuit simulation for arbitrary
// gate angle, the closed form at the matched angle theta = atan(1/sqrt(q)),
// and the extended scheme that prepares the state before damping.

#include <cmath>
#include <utility>

#include "qrec/channel.hpp"
#include "qrec/states.hpp"

namespace qrec {

struct HadamardAngle {
    double theta; // radians, canonical range [0, 2 pi)

    explicit HadamardAngle(double radians) {
        if (!std::isfinite(radians)) throw ValidationError("gate angle must be finite");
        constexpr double two_pi = 2.0 * 3.141592653589793238462643383279502884;
        theta = std::fmod(radians, two_pi);
        if (theta < 0.0) theta += two_pi;
    }
};

struct PostSelectedOutcome {
    DensityMatrix state;        // normalized post-selected state
    double success_probability; // trace of the projected, pre-normalization matrix
};

// x = tan^2(theta1) fixes the preparation angle; the recovery angle theta2
// solves x q y = 1 with y = tan^2(theta2)
struct ExtendedConfig {
    double x;
    DampingParam p;

    ExtendedConfig(double x_, DampingParam p_) : x(x_), p(p_) {
        if (!(x_ > 0.0)) throw ValidationError("extended scheme needs x > 0, got " + std::to_string(x_));
    }

    double theta1() const { return std::atan(std::sqrt(x)); }
    double theta2() const { return std::atan(std::sqrt(1.0 / (x * p.q()))); }
};

inline ComplexMatrix hadamard_gate(HadamardAngle angle) {
    const double c = std::cos(angle.theta);
    const double s = std::sin(angle.theta);
    ComplexMatrix h(2, 2);
    h(0, 0) = c; h(0, 1) = -s;
    h(1, 0) = s; h(1, 1) = c;
    return h;
}

// the two CNOT orientations used by the circuit: the first flips its first
// qubit when its second qubit is 1, the second flips its second qubit when
// its first qubit is 1
inline std::pair<ComplexMatrix, ComplexMatrix> cnot_gates() {
    ComplexMatrix uc1(4, 4), uc2(4, 4);
    uc1(0, 0) = 1; uc1(1, 3) = 1; uc1(2, 2) = 1; uc1(3, 1) = 1;
    uc2(0, 0) = 1; uc2(1, 1) = 1; uc2(2, 3) = 1; uc2(3, 2) = 1;
    return {uc1, uc2};
}

// Full 16-dimensional simulation, qubit order (A1, S1, S2, A2). Both
// ancillas start as H_theta |0><0| H_theta^dag, the first CNOT acts on
// (A1, S1), the second on (S2, A2), and post-selection keeps both ancillas
// in |0>. The returned state is the renormalized reduction onto (S1, S2).
inline PostSelectedOutcome run_recovery_circuit(const DensityMatrix& rho_in, HadamardAngle angle) {
    if (rho_in.dim() != 4) {
        throw DimensionMismatch("run_recovery_circuit: expected dimension 4, got " +
                                std::to_string(rho_in.dim()));
    }
    const double c = std::cos(angle.theta);
    const double s = std::sin(angle.theta);
    ComplexMatrix rho_a(2, 2);
    rho_a(0, 0) = c * c; rho_a(0, 1) = c * s;
    rho_a(1, 0) = c * s; rho_a(1, 1) = s * s;

    const ComplexMatrix rho_ad = kron(kron(rho_a, rho_in.matrix()), rho_a);

    auto [uc1, uc2] = cnot_gates();
    const ComplexMatrix u = kron(uc1, uc2);
    const ComplexMatrix rho_f = u * rho_ad * u.adjoint();

    ComplexMatrix p0(2, 2);
    p0(0, 0) = 1.0;
    const ComplexMatrix i2 = ComplexMatrix::identity(2);
    const ComplexMatrix proj = kron(kron(p0, i2), kron(i2, p0));
    const ComplexMatrix projected = proj * rho_f * proj;

    const double succ = projected.trace().real();
    if (succ < tol::succ) {
        throw ZeroSuccess("post-selection probability " + std::to_string(succ) +
                          " below cutoff, no state delivered");
    }
    ComplexMatrix reduced = partial_trace(projected, {2, 2, 2, 2}, {1, 2});
    reduced = cplx(1.0 / succ) * reduced;
    return {DensityMatrix::validate(reduced), succ};
}

// Closed form at theta = atan(1/sqrt(q)): state is the printed numerator over
// N = 1 + (1 - a + d) p + p^2 d. The success probability follows from the
// circuit identity trace = (q/(1+q))^2 N, which the tests pin against the
// simulated trace.
inline PostSelectedOutcome recovered_closed_form(const TwoQubitParams& s, DampingParam d) {
    if (d.p == 1.0) {
        throw DegenerateDamping("recovery angle undefined at p = 1 (tan^-1(1/0))");
    }
    const double p = d.p;
    const double q = d.q();
    const double n = 1.0 + (1.0 - s.a + s.d) * p + p * p * s.d;

    ComplexMatrix m(4, 4);
    m(0, 0) = s.a + s.b * p + s.c * p + p * p * s.d;
    m(0, 1) = s.e + p * s.j;
    m(0, 2) = s.f + s.i * p;
    m(0, 3) = s.g;
    m(1, 1) = s.b + p * s.d;
    m(1, 2) = s.h;
    m(1, 3) = s.i;
    m(2, 2) = s.c + p * s.d;
    m(2, 3) = s.j;
    m(3, 3) = s.d;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < i; ++j) m(i, j) = std::conj(m(j, i));
    m = cplx(1.0 / n) * m;

    const double ratio = q / (1.0 + q);
    return {DensityMatrix::validate(m), ratio * ratio * n};
}

// Preparation stage: the recovery circuit applied to the undamped state at
// angle theta1 = atan(sqrt(x)). Entry (k, l) of the unnormalized output is
// the input entry scaled by w_k w_l with w = (1, sqrt(x), sqrt(x), x)/(1+x);
// the success probability is its trace.
inline PostSelectedOutcome prepare_state(const TwoQubitParams& s, double x) {
    if (!(x > 0.0)) throw ValidationError("prepare_state needs x > 0, got " + std::to_string(x));
    const double sx = std::sqrt(x);
    const double w[4] = {1.0 / (1.0 + x), sx / (1.0 + x), sx / (1.0 + x), x / (1.0 + x)};

    ComplexMatrix m(4, 4);
    m(0, 0) = s.a * w[0] * w[0];
    m(0, 1) = s.e * w[0] * w[1];
    m(0, 2) = s.f * w[0] * w[2];
    m(0, 3) = s.g * w[0] * w[3];
    m(1, 1) = s.b * w[1] * w[1];
    m(1, 2) = s.h * w[1] * w[2];
    m(1, 3) = s.i * w[1] * w[3];
    m(2, 2) = s.c * w[2] * w[2];
    m(2, 3) = s.j * w[2] * w[3];
    m(3, 3) = s.d * w[3] * w[3];
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < i; ++j) m(i, j) = std::conj(m(j, i));

    const double succ = m.trace().real();
    if (succ < tol::succ) {
        throw ZeroSuccess("preparation post-selection probability " + std::to_string(succ) +
                          " below cutoff");
    }
    ComplexMatrix normalized = cplx(1.0 / succ) * m;
    return {DensityMatrix::validate(normalized), succ};
}

// prepare at angle theta1, damp with the closed form, then recover through
// the circuit at theta2; the success probability is the product of the two
// post-selection probabilities
inline PostSelectedOutcome run_extended(const TwoQubitParams& s, const ExtendedConfig& cfg) {
    if (cfg.p.p == 1.0) {
        throw DegenerateDamping("extended recovery undefined at p = 1");
    }
    const PostSelectedOutcome prepared = prepare_state(s, cfg.x);
    const DensityMatrix damped = damp_two_closed_form(to_params(prepared.state), cfg.p);
    const PostSelectedOutcome recovered = run_recovery_circuit(damped, HadamardAngle(cfg.theta2()));
    return {recovered.state, prepared.success_probability * recovered.success_probability};
}

} // namespace qrec
