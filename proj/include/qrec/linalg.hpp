#pragma once

// Dense complex matrix kernel sized for dimensions up to 16: Kronecker
// products, cyclic Jacobi eigendecomposition for Hermitian matrices, PSD
// square root, partial trace. Everything is by-value and allocation-happy;
// robustness beats speed at these sizes.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <sstream>
#include <vector>

#include "qrec/errors.hpp"

namespace qrec {

using cplx = std::complex<double>;

namespace tol {
inline constexpr double herm = 1e-10;        // max |H - H^dag| accepted as Hermitian
inline constexpr double eig = 1e-11;         // eigendecomposition reconstruction bound
inline constexpr double neg = 1e-10;         // eigenvalues in [-neg, 0) clamp to 0
inline constexpr double succ = 1e-12;        // post-selection trace cutoff
inline constexpr double trace_one = 1e-10;   // |tr - 1| bound for density matrices
inline constexpr double jacobi_off = 1e-13;  // off-diagonal Frobenius convergence target
inline constexpr int jacobi_max_sweeps = 100;
inline constexpr double sqrt_floor = 1e-12;  // relative spectral cutoff inside psd_sqrt
} // namespace tol

struct ComplexMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<cplx> data; // row-major

    ComplexMatrix() = default;
    ComplexMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

    cplx& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix m(cols, rows);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) m(j, i) = std::conj((*this)(i, j));
        return m;
    }

    cplx trace() const {
        cplx t = 0.0;
        for (std::size_t i = 0; i < std::min(rows, cols); ++i) t += (*this)(i, i);
        return t;
    }

    bool is_finite() const {
        for (const cplx& z : data)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        return true;
    }
};

inline void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
    if (a.rows != b.rows || a.cols != b.cols) {
        std::ostringstream os;
        os << op << ": shape mismatch " << a.rows << "x" << a.cols << " vs " << b.rows << "x" << b.cols;
        throw DimensionMismatch(os.str());
    }
}

inline ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "add");
    ComplexMatrix m(a.rows, a.cols);
    for (std::size_t k = 0; k < a.data.size(); ++k) m.data[k] = a.data[k] + b.data[k];
    return m;
}

inline ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "subtract");
    ComplexMatrix m(a.rows, a.cols);
    for (std::size_t k = 0; k < a.data.size(); ++k) m.data[k] = a.data[k] - b.data[k];
    return m;
}

inline ComplexMatrix operator*(const cplx& s, const ComplexMatrix& a) {
    ComplexMatrix m(a.rows, a.cols);
    for (std::size_t k = 0; k < a.data.size(); ++k) m.data[k] = s * a.data[k];
    return m;
}

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols != b.rows) {
        std::ostringstream os;
        os << "multiply: inner dimensions " << a.cols << " vs " << b.rows;
        throw DimensionMismatch(os.str());
    }
    ComplexMatrix m(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx(0.0)) continue;
            for (std::size_t j = 0; j < b.cols; ++j) m(i, j) += aik * b(k, j);
        }
    return m;
}

inline double max_abs(const ComplexMatrix& a) {
    double m = 0.0;
    for (const cplx& z : a.data) m = std::max(m, std::abs(z));
    return m;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "compare");
    double m = 0.0;
    for (std::size_t k = 0; k < a.data.size(); ++k) m = std::max(m, std::abs(a.data[k] - b.data[k]));
    return m;
}

inline double hermiticity_defect(const ComplexMatrix& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j)
            m = std::max(m, std::abs(a(i, j) - std::conj(a(j, i))));
    return m;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix m(a.rows * b.rows, a.cols * b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) {
            const cplx aij = a(i, j);
            for (std::size_t k = 0; k < b.rows; ++k)
                for (std::size_t l = 0; l < b.cols; ++l)
                    m(i * b.rows + k, j * b.cols + l) = aij * b(k, l);
        }
    return m;
}

struct EigenDecomposition {
    std::vector<double> eigenvalues; // sorted descending
    ComplexMatrix eigenvectors;      // unitary, columns match eigenvalue order
};

// Cyclic Jacobi for complex Hermitian matrices. Each pivot (p,q) is rotated
// away by the unitary that is the identity except
//   U(p,p) = c, U(p,q) = -s e^{i phi}, U(q,p) = s e^{-i phi}, U(q,q) = c
// where A(p,q) = |A(p,q)| e^{i phi}. Converged when the off-diagonal
// Frobenius norm drops below tol::jacobi_off.
inline EigenDecomposition hermitian_eig(const ComplexMatrix& h) {
    if (h.rows != h.cols) {
        throw DimensionMismatch("hermitian_eig: matrix is " + std::to_string(h.rows) + "x" +
                                std::to_string(h.cols));
    }
    const double defect = hermiticity_defect(h);
    if (defect > tol::herm) {
        std::ostringstream os;
        os << "hermitian_eig: not Hermitian, max |H - H^dag| = " << defect;
        throw NotHermitian(os.str());
    }
    const std::size_t n = h.rows;

    // work on the averaged matrix so round-off asymmetry cannot bias rotations
    ComplexMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (h(i, j) + std::conj(h(j, i)));
    ComplexMatrix v = ComplexMatrix::identity(n);

    auto off_norm = [&a, n]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) s += std::norm(a(i, j));
        return std::sqrt(s);
    };

    int sweeps = 0;
    while (off_norm() >= tol::jacobi_off) {
        if (++sweeps > tol::jacobi_max_sweeps) {
            throw NoConvergence("hermitian_eig: no convergence after " +
                                std::to_string(tol::jacobi_max_sweeps) + " sweeps");
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx beta = a(p, q);
                const double ab = std::abs(beta);
                if (ab == 0.0) continue;
                const cplx phase = beta / ab;
                const double alpha = a(p, p).real();
                const double gamma = a(q, q).real();
                const double tau = (alpha - gamma) / (2.0 * ab);
                double t;
                if (std::abs(tau) > 1e12) {
                    t = 1.0 / (2.0 * tau);
                } else {
                    t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                }
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                for (std::size_t k = 0; k < n; ++k) { // A <- A U
                    const cplx akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp + s * std::conj(phase) * akq;
                    a(k, q) = -s * phase * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) { // A <- U^dag A
                    const cplx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk + s * phase * aqk;
                    a(q, k) = -s * std::conj(phase) * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                for (std::size_t k = 0; k < n; ++k) { // V <- V U
                    const cplx vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp + s * std::conj(phase) * vkq;
                    v(k, q) = -s * phase * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&a](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });

    EigenDecomposition ed;
    ed.eigenvalues.resize(n);
    ed.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        ed.eigenvalues[j] = a(order[j], order[j]).real();
        for (std::size_t i = 0; i < n; ++i) ed.eigenvectors(i, j) = v(i, order[j]);
    }
    return ed;
}

// Hermitian PSD square root. Eigenvalues in [-tol::neg, 0) clamp to zero,
// anything lower is rejected.
inline ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
    EigenDecomposition ed = hermitian_eig(m);
    const std::size_t n = m.rows;
    // eigenvalues below sqrt_floor * max are round-off debris of a
    // rank-deficient input; the square root would amplify them from
    // O(eps) to O(sqrt(eps)), so they are cut to exact zeros instead
    const double floor = tol::sqrt_floor * std::max(ed.eigenvalues.front(), 0.0);
    std::vector<double> roots(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double lam = ed.eigenvalues[k];
        if (lam < -tol::neg) {
            std::ostringstream os;
            os << "psd_sqrt: eigenvalue " << lam << " below -" << tol::neg;
            throw NotPSD(os.str());
        }
        roots[k] = lam <= floor ? 0.0 : std::sqrt(lam);
    }
    ComplexMatrix s(n, n);
    const ComplexMatrix& v = ed.eigenvectors;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            cplx acc = 0.0;
            for (std::size_t k = 0; k < n; ++k) acc += v(i, k) * roots[k] * std::conj(v(j, k));
            s(i, j) = acc;
        }
    for (std::size_t i = 0; i < n; ++i) // result is Hermitian by construction; tidy round-off
        for (std::size_t j = i; j < n; ++j) {
            const cplx avg = 0.5 * (s(i, j) + std::conj(s(j, i)));
            s(i, j) = avg;
            s(j, i) = std::conj(avg);
        }
    return s;
}

// Partial trace over the subsystems not listed in `keep`. Subsystem 0 is the
// leftmost tensor factor; basis |q0 q1 ...> maps to row index
// sum_k q_k 2^(n-1-k), matching the left-to-right Kronecker layout.
inline ComplexMatrix partial_trace(const ComplexMatrix& rho, const std::vector<std::size_t>& dims,
                                   const std::vector<std::size_t>& keep) {
    if (rho.rows != rho.cols) throw DimensionMismatch("partial_trace: matrix not square");
    std::size_t total = 1;
    for (std::size_t d : dims) total *= d;
    if (total != rho.rows) {
        throw DimensionMismatch("partial_trace: subsystem dimensions multiply to " +
                                std::to_string(total) + ", matrix is " + std::to_string(rho.rows));
    }
    if (keep.empty()) throw DimensionMismatch("partial_trace: keep set is empty");
    std::vector<bool> kept(dims.size(), false);
    for (std::size_t k : keep) {
        if (k >= dims.size()) throw DimensionMismatch("partial_trace: keep index out of range");
        if (kept[k]) throw DimensionMismatch("partial_trace: duplicate keep index");
        kept[k] = true;
    }

    std::vector<std::size_t> stride(dims.size(), 1);
    for (std::size_t k = dims.size(); k-- > 1;) stride[k - 1] = stride[k] * dims[k];

    std::vector<std::size_t> keep_idx, trace_idx;
    for (std::size_t k = 0; k < dims.size(); ++k) (kept[k] ? keep_idx : trace_idx).push_back(k);

    std::size_t out_dim = 1;
    for (std::size_t k : keep_idx) out_dim *= dims[k];

    // mixed-radix offsets of every kept and traced configuration
    auto offsets = [&](const std::vector<std::size_t>& subsystems) {
        std::vector<std::size_t> offs{0};
        for (std::size_t k : subsystems) {
            std::vector<std::size_t> next;
            next.reserve(offs.size() * dims[k]);
            for (std::size_t base : offs)
                for (std::size_t d = 0; d < dims[k]; ++d) next.push_back(base + d * stride[k]);
            offs = std::move(next);
        }
        return offs;
    };
    const std::vector<std::size_t> keep_offs = offsets(keep_idx);
    const std::vector<std::size_t> trace_offs = offsets(trace_idx);

    ComplexMatrix out(out_dim, out_dim);
    for (std::size_t r = 0; r < out_dim; ++r)
        for (std::size_t c = 0; c < out_dim; ++c) {
            cplx acc = 0.0;
            for (std::size_t t : trace_offs) acc += rho(keep_offs[r] + t, keep_offs[c] + t);
            out(r, c) = acc;
        }
    return out;
}

} // namespace qrec
