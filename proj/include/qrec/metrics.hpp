#pragma once

// Uhlmann fidelity, Wootters concurrence, and entanglement sudden death
// location along a damping path.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "qrec/channel.hpp"
#include "qrec/recovery.hpp"
#include "qrec/states.hpp"

namespace qrec {

struct MetricValue {
    enum class Kind { fidelity, concurrence };

    double value;
    Kind kind;

    operator double() const { return value; }
};

namespace detail {

// both metrics live in [0, 1]; roundoff may spill slightly past the ends,
// anything further out means the computation went wrong
inline double clamp_unit(double v, const char* what) {
    constexpr double window = 1e-9;
    if (!(v >= -window && v <= 1.0 + window)) {
        throw NumericalError(std::string(what) + " = " + std::to_string(v) +
                             " outside [0, 1] beyond roundoff");
    }
    return std::min(1.0, std::max(0.0, v));
}

} // namespace detail

// [Tr sqrt(sqrt(rho) sigma sqrt(rho))]^2
inline MetricValue fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim()) {
        throw DimensionMismatch("fidelity: dimensions " + std::to_string(rho.dim()) + " and " +
                                std::to_string(sigma.dim()) + " differ");
    }
    const ComplexMatrix root = psd_sqrt(rho.matrix());
    ComplexMatrix inner = root * sigma.matrix() * root;
    inner = cplx(0.5) * (inner + inner.adjoint());
    const double tr = psd_sqrt(inner).trace().real();
    return {detail::clamp_unit(tr * tr, "fidelity"), MetricValue::Kind::fidelity};
}

namespace detail {

inline ComplexMatrix sigma_y_pair() {
    ComplexMatrix sy(2, 2);
    sy(0, 1) = cplx(0.0, -1.0);
    sy(1, 0) = cplx(0.0, 1.0);
    return kron(sy, sy);
}

inline ComplexMatrix spin_flipped(const ComplexMatrix& rho) {
    ComplexMatrix conj_rho(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) conj_rho(i, j) = std::conj(rho(i, j));
    const ComplexMatrix s = sigma_y_pair();
    return s * conj_rho * s;
}

} // namespace detail

// C = max(0, l1 - l2 - l3 - l4) with l_i the decreasing square roots of the
// eigenvalues of rho rho~; computed from the Hermitian product
// sqrt(rho) rho~ sqrt(rho), which shares the spectrum
inline MetricValue concurrence(const DensityMatrix& rho) {
    if (rho.dim() != 4) {
        throw DimensionMismatch("concurrence: defined for dimension 4, got " +
                                std::to_string(rho.dim()));
    }
    const ComplexMatrix root = psd_sqrt(rho.matrix());
    ComplexMatrix prod = root * detail::spin_flipped(rho.matrix()) * root;
    prod = cplx(0.5) * (prod + prod.adjoint());
    const EigenDecomposition eig = hermitian_eig(prod);

    // the square root amplifies round-off in the zero modes of a
    // rank-deficient product, so cut the spectrum the same way psd_sqrt does
    const double floor = tol::sqrt_floor * std::max(eig.eigenvalues.front(), 0.0);
    double lam[4];
    for (std::size_t i = 0; i < 4; ++i) {
        const double v = eig.eigenvalues[i];
        if (v < -tol::neg) {
            throw NumericalError("concurrence eigenvalue " + std::to_string(v) +
                                 " negative beyond roundoff");
        }
        lam[i] = v <= floor ? 0.0 : std::sqrt(v);
    }
    std::sort(lam, lam + 4, std::greater<>());
    const double c = lam[0] - lam[1] - lam[2] - lam[3];
    return {detail::clamp_unit(std::max(0.0, c), "concurrence"), MetricValue::Kind::concurrence};
}

// consistency probe for the concurrence spectrum: the power sums of the
// lambda^2 must match the moments Tr((rho rho~)^k); returns the worst
// absolute mismatch over k = 1..4
inline double concurrence_spectrum_defect(const DensityMatrix& rho) {
    const ComplexMatrix root = psd_sqrt(rho.matrix());
    ComplexMatrix prod = root * detail::spin_flipped(rho.matrix()) * root;
    prod = cplx(0.5) * (prod + prod.adjoint());
    const EigenDecomposition eig = hermitian_eig(prod);

    const ComplexMatrix direct = rho.matrix() * detail::spin_flipped(rho.matrix());
    ComplexMatrix pow_k = direct;
    double worst = 0.0;
    for (int k = 1; k <= 4; ++k) {
        double moment = pow_k.trace().real();
        double sum = 0.0;
        for (double v : eig.eigenvalues) sum += std::pow(std::max(0.0, v), k);
        worst = std::max(worst, std::abs(moment - sum));
        if (k < 4) pow_k = pow_k * direct;
    }
    return worst;
}

enum class DampingPath { damped, recovered };

namespace detail {

inline double concurrence_along(const TwoQubitParams& s, DampingPath path, double p) {
    const DampingParam d(p);
    if (path == DampingPath::damped) return concurrence(damp_two_closed_form(s, d));
    return concurrence(recovered_closed_form(s, d).state);
}

} // namespace detail

// Smallest p at which the concurrence hits zero along the chosen path, if it
// does on [0, 1]. Scans a 101-point grid for the first bracket, then bisects
// to the requested width. The recovered path is evaluated at 1 - 1e-9 in
// place of the endpoint p = 1, where its angle is undefined.
inline std::optional<double> esd_point(const TwoQubitParams& s, DampingPath path,
                                       double width = 1e-4) {
    constexpr double recovered_end = 1.0 - 1e-9;
    auto conc = [&](double p) {
        if (path == DampingPath::recovered && p >= recovered_end) p = recovered_end;
        return detail::concurrence_along(s, path, p);
    };

    if (conc(0.0) <= 0.0) {
        throw NoInitialEntanglement("esd_point: state is separable before damping");
    }

    double lo = 0.0;
    bool found = false;
    for (int k = 1; k <= 100; ++k) {
        const double p = static_cast<double>(k) / 100.0;
        if (conc(p) <= 0.0) {
            lo = static_cast<double>(k - 1) / 100.0;
            found = true;
            break;
        }
    }
    if (!found) return std::nullopt;

    double hi = lo + 0.01;
    while (hi - lo > width) {
        const double mid = 0.5 * (lo + hi);
        if (conc(mid) <= 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace qrec
