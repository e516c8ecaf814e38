#pragma once

// shared builders for the test suite

#include <cstdint>

#include "qrec/qrec.hpp"

namespace test_helpers {

inline qrec::DensityMatrix random_state(std::uint64_t seed, std::uint64_t index,
                                        std::size_t rank = 4) {
    qrec::RngStream stream(seed, index);
    return qrec::random_density_matrix(stream, 4, rank);
}

inline qrec::DensityMatrix bell_phi_plus() {
    qrec::ComplexMatrix m(4, 4);
    m(0, 0) = 0.5;
    m(0, 3) = 0.5;
    m(3, 0) = 0.5;
    m(3, 3) = 0.5;
    return qrec::DensityMatrix::validate(m);
}

inline qrec::DensityMatrix basis_state(std::size_t k) {
    qrec::ComplexMatrix m(4, 4);
    m(k, k) = 1.0;
    return qrec::DensityMatrix::validate(m);
}

// Gram-Schmidt on a random complex 2x2: column 0 normalized, column 1
// orthogonalized against it
inline qrec::ComplexMatrix random_unitary_2(qrec::RngStream& rng) {
    qrec::cplx v0 = rng.gaussian();
    qrec::cplx v1 = rng.gaussian();
    qrec::cplx w0 = rng.gaussian();
    qrec::cplx w1 = rng.gaussian();
    const double nv = std::sqrt(std::norm(v0) + std::norm(v1));
    v0 /= nv;
    v1 /= nv;
    const qrec::cplx overlap = std::conj(v0) * w0 + std::conj(v1) * w1;
    w0 -= overlap * v0;
    w1 -= overlap * v1;
    const double nw = std::sqrt(std::norm(w0) + std::norm(w1));
    qrec::ComplexMatrix u(2, 2);
    u(0, 0) = v0;
    u(1, 0) = v1;
    u(0, 1) = w0 / nw;
    u(1, 1) = w1 / nw;
    return u;
}

} // namespace test_helpers
