#pragma once

// Counter-based random streams. Draw j of stream (master_seed, stream_index)
// is a pure function of the triple, so any subset of a Monte-Carlo corpus can
// be regenerated independently, in any order, on any number of workers.

#include <cmath>
#include <complex>
#include <cstdint>

namespace qrec {

namespace detail {
inline constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}
} // namespace detail

class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
        : key_(detail::mix64(master_seed ^ detail::mix64(stream_index + detail::golden))) {}

    std::uint64_t next_u64() { return detail::mix64(key_ + (++count_) * detail::golden); }

    // uniform on [0, 1), 53-bit resolution
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // one Box-Muller pair per call: real and imaginary parts are independent
    // N(0,1) draws (overall scale is irrelevant to trace-normalized uses)
    std::complex<double> gaussian() {
        const double u1 = 1.0 - uniform01(); // (0, 1], keeps log finite
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double w = 2.0 * 3.141592653589793238462643383279502884 * u2;
        return {r * std::cos(w), r * std::sin(w)};
    }

private:
    std::uint64_t key_;
    std::uint64_t count_ = 0;
};

} // namespace qrec
