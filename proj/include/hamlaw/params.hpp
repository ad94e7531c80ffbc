#pragma once

#include <cstdint>
#include <string>

namespace hamlaw {

/// Window geometry shared by every l-cycle / l-path with given (r, ell).
struct CycleGeometry {
    unsigned s = 0;              // window stride r - ell
    unsigned t = 0;              // unique t in [1, s] with t = r (mod s)
    std::uint64_t lambda = 0;    // t! (s - t)!
};

/// (r, ell) -> (s, t, lambda). Requires r > ell >= 2.
CycleGeometry derive_constants(unsigned r, unsigned ell);

/// The universe an experiment runs in: n vertices, r-uniform edges, overlap ell, density p.
struct Params {
    unsigned n = 0;
    unsigned r = 0;
    unsigned ell = 0;
    double p = 0.0;

    unsigned s = 0;
    unsigned t = 0;
    std::uint64_t lambda = 0;
    unsigned m_edges = 0;  // n / s

    /// Validates and fills the derived fields. Throws InvalidArgument.
    static Params make(unsigned n, unsigned r, unsigned ell, double p);

    /// p = c * lambda * e^s / n^s.
    static Params from_c(unsigned n, unsigned r, unsigned ell, double c);

    Params with_p(double new_p) const;

    std::string describe() const;
};

}  // namespace hamlaw
