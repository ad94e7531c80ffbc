#include "hamlaw/params.hpp"

#include <cmath>
#include <sstream>

#include "hamlaw/combinadic.hpp"
#include "hamlaw/errors.hpp"

namespace hamlaw {

namespace {

std::uint64_t small_factorial(unsigned k) {
    std::uint64_t out = 1;
    for (unsigned i = 2; i <= k; ++i) out *= i;
    return out;
}

}  // namespace

CycleGeometry derive_constants(unsigned r, unsigned ell) {
    if (ell < 2) throw InvalidArgument("derive_constants: ell must be at least 2");
    if (ell >= r) throw InvalidArgument("derive_constants: ell must be smaller than r");
    if (r > 20) throw InvalidArgument("derive_constants: r too large");
    CycleGeometry g;
    g.s = r - ell;
    g.t = r % g.s == 0 ? g.s : r % g.s;
    g.lambda = small_factorial(g.t) * small_factorial(g.s - g.t);
    return g;
}

Params Params::make(unsigned n, unsigned r, unsigned ell, double p) {
    const CycleGeometry g = derive_constants(r, ell);
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("Params: p must lie in [0, 1]");
    if (n > kMaxVertices) throw InvalidArgument("Params: n exceeds " + std::to_string(kMaxVertices));
    if (n <= r) throw InvalidArgument("Params: need n > r");
    if (n % g.s != 0) throw InvalidArgument("Params: s = r - ell must divide n");
    Params out;
    out.n = n;
    out.r = r;
    out.ell = ell;
    out.p = p;
    out.s = g.s;
    out.t = g.t;
    out.lambda = g.lambda;
    out.m_edges = n / g.s;
    return out;
}

Params Params::from_c(unsigned n, unsigned r, unsigned ell, double c) {
    const CycleGeometry g = derive_constants(r, ell);
    const double p = c * static_cast<double>(g.lambda) * std::exp(static_cast<double>(g.s)) /
                     std::pow(static_cast<double>(n), static_cast<double>(g.s));
    if (p > 1.0) throw InvalidArgument("Params::from_c: c gives p > 1");
    return make(n, r, ell, p);
}

Params Params::with_p(double new_p) const { return make(n, r, ell, new_p); }

std::string Params::describe() const {
    std::ostringstream os;
    os << "n=" << n << " r=" << r << " ell=" << ell << " p=" << p << " (s=" << s << " t=" << t
       << " lambda=" << lambda << " m=" << m_edges << ")";
    return os.str();
}

}  // namespace hamlaw
