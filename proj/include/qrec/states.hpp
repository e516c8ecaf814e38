#pragma once

// Density matrices validated at construction, the ten-parameter two-qubit
// layout, two bundled reference states, and Ginibre random state generation.

#include <cstdint>
#include <sstream>
#include <utility>

#include "qrec/linalg.hpp"
#include "qrec/rng.hpp"

namespace qrec {

class DensityMatrix {
public:
    // sole way to build one: rejects anything that is not a Hermitian,
    // unit-trace, PSD matrix of power-of-2 dimension
    static DensityMatrix validate(const ComplexMatrix& m) {
        if (m.rows != m.cols) {
            throw DimensionMismatch("density matrix must be square, got " + std::to_string(m.rows) +
                                    "x" + std::to_string(m.cols));
        }
        const std::size_t n = m.rows;
        if (n < 2 || (n & (n - 1)) != 0) {
            throw DimensionMismatch("density matrix dimension must be a power of 2, got " +
                                    std::to_string(n));
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const cplx z = m(i, j);
                if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
                    std::ostringstream os;
                    os << "non-finite entry at (" << i << ", " << j << ")";
                    throw ValidationError(os.str());
                }
            }
        const double defect = hermiticity_defect(m);
        if (defect > tol::herm) {
            std::size_t wi = 0, wj = 0;
            double worst = -1.0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    const double d = std::abs(m(i, j) - std::conj(m(j, i)));
                    if (d > worst) { worst = d; wi = i; wj = j; }
                }
            std::ostringstream os;
            os << "not Hermitian: max |m - m^dag| = " << defect << " at (" << wi << ", " << wj << ")";
            throw NotHermitian(os.str());
        }
        const double tr_err = std::abs(m.trace() - cplx(1.0));
        if (tr_err > tol::trace_one) {
            std::ostringstream os;
            os << "trace is not 1: |tr - 1| = " << tr_err;
            throw NotUnitTrace(os.str());
        }
        const EigenDecomposition ed = hermitian_eig(m);
        const double min_eig = ed.eigenvalues.back();
        if (min_eig < -tol::neg) {
            std::ostringstream os;
            os << "not positive semidefinite: smallest eigenvalue " << min_eig;
            throw NotPSD(os.str());
        }
        return DensityMatrix(m);
    }

    const ComplexMatrix& matrix() const { return m_; }
    std::size_t dim() const { return m_.rows; }
    cplx operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

private:
    explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {}
    ComplexMatrix m_;
};

// the ten independent entries of a two-qubit state: four populations on the
// diagonal and six upper-triangle coherences, lower triangle by conjugation
struct TwoQubitParams {
    double a = 0, b = 0, c = 0, d = 0;
    cplx e, f, g, h, i, j;
};

inline DensityMatrix from_params(const TwoQubitParams& p) {
    ComplexMatrix m(4, 4);
    m(0, 0) = p.a; m(0, 1) = p.e;              m(0, 2) = p.f;              m(0, 3) = p.g;
    m(1, 0) = std::conj(p.e); m(1, 1) = p.b;   m(1, 2) = p.h;              m(1, 3) = p.i;
    m(2, 0) = std::conj(p.f); m(2, 1) = std::conj(p.h); m(2, 2) = p.c;     m(2, 3) = p.j;
    m(3, 0) = std::conj(p.g); m(3, 1) = std::conj(p.i); m(3, 2) = std::conj(p.j); m(3, 3) = p.d;
    return DensityMatrix::validate(m);
}

inline TwoQubitParams to_params(const DensityMatrix& rho) {
    if (rho.dim() != 4) {
        throw DimensionMismatch("to_params: expected dimension 4, got " + std::to_string(rho.dim()));
    }
    TwoQubitParams p;
    p.a = rho(0, 0).real(); p.b = rho(1, 1).real();
    p.c = rho(2, 2).real(); p.d = rho(3, 3).real();
    p.e = rho(0, 1); p.f = rho(0, 2); p.g = rho(0, 3);
    p.h = rho(1, 2); p.i = rho(1, 3); p.j = rho(2, 3);
    return p;
}

// reference states used throughout the bundled experiments
inline DensityMatrix rho1() {
    TwoQubitParams p;
    p.a = 0.4; p.b = 0.1; p.c = 0.3; p.d = 0.2; p.g = 0.25;
    return from_params(p);
}

inline DensityMatrix rho2() {
    TwoQubitParams p;
    p.a = 0.6; p.b = 0.12; p.c = 0.11; p.d = 0.17; p.g = 0.25;
    return from_params(p);
}

// Ginibre construction: G is dim x rank with i.i.d. standard complex Gaussian
// entries (filled row-major), and the state is G G^dag normalized by its
// trace. rank = dim gives the Hilbert-Schmidt ensemble; lower ranks give the
// corresponding induced measures.
inline DensityMatrix random_density_matrix(RngStream& rng, std::size_t dim, std::size_t rank) {
    if (rank < 1 || rank > dim) {
        throw DimensionMismatch("random_density_matrix: rank " + std::to_string(rank) +
                                " outside [1, " + std::to_string(dim) + "]");
    }
    ComplexMatrix g(dim, rank);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < rank; ++j) g(i, j) = rng.gaussian();
    ComplexMatrix m = g * g.adjoint();
    const double tr = m.trace().real();
    m = cplx(1.0 / tr) * m;
    for (std::size_t i = 0; i < dim; ++i) // kill round-off asymmetry before validation
        for (std::size_t j = i; j < dim; ++j) {
            const cplx avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
            m(i, j) = avg;
            m(j, i) = std::conj(avg);
        }
    return DensityMatrix::validate(m);
}

inline DensityMatrix random_density_matrix(RngStream& rng, std::size_t dim = 4) {
    return random_density_matrix(rng, dim, dim);
}

} // namespace qrec
