#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hamlaw/bigint.hpp"
#include "hamlaw/combinadic.hpp"
#include "hamlaw/params.hpp"

namespace hamlaw {

inline constexpr unsigned kDefaultAutCap = 14;

/// A small hypergraph given as vertex count plus edge list; used for Aut computations.
struct EdgePattern {
    unsigned v = 0;
    unsigned r = 0;
    std::vector<std::vector<Vertex>> edges;  // each sorted
};

/// One Hamilton ell-cycle copy. Window i is the r vertices at positions
/// {i*s, ..., i*s + r - 1} (mod n) of `sequence`.
struct CycleCopy {
    unsigned r = 0;
    unsigned ell = 0;
    std::vector<Vertex> sequence;  // witness order; not canonical
    std::vector<Rank> edge_ranks;  // sorted; this is the identity of the copy

    unsigned n() const { return static_cast<unsigned>(sequence.size()); }
    std::vector<std::vector<Vertex>> edges() const;
};

/// An ell-path with k edges on ell + k*s vertices.
struct PathCopy {
    unsigned r = 0;
    unsigned ell = 0;
    unsigned k = 0;
    std::vector<Vertex> sequence;
    std::vector<Rank> edge_ranks;  // ranks in a universe of `n_universe` vertices
    unsigned n_universe = 0;

    unsigned v() const { return static_cast<unsigned>(sequence.size()); }
    std::vector<std::vector<Vertex>> edges() const;
};

/// Windows of a cyclic sequence with stride s. Each window sorted; order follows positions.
std::vector<std::vector<Vertex>> cycle_windows(std::span<const Vertex> sequence, unsigned r, unsigned s);
std::vector<std::vector<Vertex>> path_windows(std::span<const Vertex> sequence, unsigned r, unsigned s);

/// Cycle copy laid out along `sequence` (a permutation of [0, n)).
/// Throws InvalidArgument if the windows are not r distinct vertices or are not pairwise distinct.
CycleCopy make_cycle_copy(std::vector<Vertex> sequence, unsigned r, unsigned ell);
PathCopy make_path_copy(std::vector<Vertex> sequence, unsigned r, unsigned ell, unsigned n_universe);

CycleCopy build_cycle(unsigned n, unsigned r, unsigned ell);
PathCopy build_path(unsigned k, unsigned r, unsigned ell);

inline unsigned path_vertex_count(unsigned k, unsigned r, unsigned ell) { return ell + k * (r - ell); }

EdgePattern pattern_of(const CycleCopy& c);
EdgePattern pattern_of(const PathCopy& p);

/// Number of permutations of [0, v) mapping the edge set onto itself.
/// Backtracking with degree and pair-codegree pruning; parallel over the image of the first vertex.
/// Throws ResourceLimit when v > cap.
BigInt aut_bruteforce(const EdgePattern& pattern, unsigned cap = kDefaultAutCap);
BigInt aut_bruteforce_serial(const EdgePattern& pattern, unsigned cap = kDefaultAutCap);

/// Per (r, ell): whether 2 (n/s) lambda^(n/s) = Aut(C^(r)_{n,ell}) holds on every n in [first_valid_n, cap]
/// with s | n, checked by brute force.
struct ClosedFormValidation {
    bool validated = false;
    unsigned first_valid_n = 0;
    std::vector<unsigned> checked_n;
    std::vector<unsigned> mismatched_n;
};
ClosedFormValidation validate_cycle_closed_form(unsigned r, unsigned ell, unsigned cap = kDefaultAutCap);

BigInt aut_cycle_closed_form(unsigned n, unsigned r, unsigned ell);

/// Exact Aut(C^(r)_{n,ell}); brute force up to the cap, the validated closed form above it.
BigInt aut_cycle(unsigned n, unsigned r, unsigned ell, unsigned cap = kDefaultAutCap);

/// N_H = (n)_{v(H)} / Aut(H).
BigInt count_copies_complete(unsigned v_h, const BigInt& aut_h, unsigned n);
BigInt count_copies_complete(const CycleCopy& c, unsigned n, unsigned cap = kDefaultAutCap);
BigInt count_copies_complete(const PathCopy& p, unsigned n, unsigned cap = kDefaultAutCap);

/// N_C(n) = n! / Aut(C^(r)_{n,ell}).
BigInt cycle_copy_count(unsigned n, unsigned r, unsigned ell, unsigned cap = kDefaultAutCap);

struct ATable {
    unsigned r = 0;
    unsigned ell = 0;
    CycleGeometry geometry;
    std::vector<BigInt> aut_path;   // index k-1
    std::vector<Rational> A;        // A_k = Aut(P_k) / lambda^k, index k-1
    unsigned k_stab = 0;            // smallest k after which A is constant on the brute-forced range
    unsigned k_bruteforce = 0;      // largest k computed by brute force
    bool stabilization_observed = false;  // at least 3 consecutive equal values
    bool extrapolated = false;      // some requested entries came from the stabilized value
    Rational stable;                // A at the largest brute-forced k

    const Rational& a(unsigned k) const { return A.at(k - 1); }
    const Rational& stable_value() const { return stable; }
};

/// A_1..A_K. Entries with v(P_k) above the cap are extrapolated from the stabilized value,
/// which requires stabilization over >= 3 consecutive brute-forced k (else ResourceLimit).
ATable compute_A_table(unsigned r, unsigned ell, unsigned K, unsigned cap = kDefaultAutCap);

/// Aut(P_k), brute force or extrapolated through compute_A_table.
BigInt aut_path(unsigned k, unsigned r, unsigned ell, unsigned cap = kDefaultAutCap);

/// Everything structural for one (n, r, ell, K), as emitted by the `constants` subcommand.
struct StructureConstants {
    CycleGeometry geometry;
    ATable table;
    std::optional<unsigned> n;
    BigInt aut_cycle;
    BigInt n_cycles;
    bool aut_cycle_from_closed_form = false;
};
StructureConstants structure_constants(std::optional<unsigned> n, unsigned r, unsigned ell, unsigned K,
                                       unsigned cap = kDefaultAutCap);

}  // namespace hamlaw
