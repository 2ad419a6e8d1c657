#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fgraph/arith.hpp"
#include "fgraph/common.hpp"
#include "fgraph/graph.hpp"
#include "fgraph/maps.hpp"

namespace fgraph::formulas {

using maps::Space;

// ---------------------------------------------------------------------------
// A closed-form output: either an exact integer count or an asymptotic
// envelope coeff * p^exponent where only the order of growth is guaranteed
// and the coefficient is a heuristic reference value.
// ---------------------------------------------------------------------------

struct Prediction {
    enum class Kind { Exact, Envelope };
    Kind kind = Kind::Exact;
    u64 exact = 0;
    double coeff = 0.0;     // Envelope only
    double exponent = 0.0;  // Envelope only: power of p
    std::string provenance;
    bool hypothesis_flag = false;  // set when p = 2 or p | d
    std::string flag_reason;

    double value_at(double p) const;
    std::string to_json() const;
};

/// Shape of a split map: a power factors, b Chebyshev factors, and random
/// blocks of dimension k with multiplicity c, all of one degree d.
struct SplitSignature {
    u64 a = 0;
    u64 b = 0;
    std::vector<std::pair<int, int>> random_dims;  // (k, c), k ascending
    u64 d = 2;

    int K() const;
    int N() const;
    int block_count() const;  // sum of multiplicities c
    int max_random_dim() const;
    std::string label() const;
    bool operator==(const SplitSignature&) const = default;

    /// Recover the signature of a split (or conjugated split) of
    /// power/Chebyshev/random blocks; nullopt when a component is a plain
    /// polynomial that is neither.
    static std::optional<SplitSignature> from_spec(const maps::MapSpec& spec);
};

// ---------------------------------------------------------------------------
// Dimension 1
// ---------------------------------------------------------------------------

struct Dim1Result {
    Prediction count;
    u64 max_tail = 0;
    u64 leaf_lower_bound = 0;  // power maps only
};

/// Periodic count of z -> z^d: m^- + 1 on A^1, m^- + 2 on P^1; max tail
/// max_q ceil(v_q(p-1)/v_q(d)) over primes q | d; at least (p-1)/2 leaves.
Dim1Result predict_power_dim1(u64 p, u64 d, Space space);

/// Periodic count of T_d: (m^- + m^+)/2 on A^1, one more on P^1 (composite
/// d allowed); max tail takes the larger of the p-1 and p+1 valuations.
Dim1Result predict_cheby_dim1(u64 p, u64 d, Space space);

/// Exact leaf count of T_d on A^1 for prime d: (p-1)/2 when d = 2 or
/// 2d = p+1, otherwise (d-1)(p±1)/(2d) with the sign fixed by which of
/// p±1 is divisible by d; 0 when T_d is a permutation.
Prediction predict_cheby_leaves(u64 p, u64 d);

// ---------------------------------------------------------------------------
// Split maps in any dimension
// ---------------------------------------------------------------------------

/// K = 0: exact product count (affine), plus sum_{i<N} (m^-+1)^i points at
/// infinity (projective). K != 0: envelope with exponent K/2.
Prediction predict_split(const SplitSignature& sig, u64 p, Space space);

/// Max tail: power formula for b = 0, Chebyshev formula otherwise; envelope
/// exponent max(k_i)/2 when random blocks are present.
Prediction predict_split_tail(const SplitSignature& sig, u64 p);

// ---------------------------------------------------------------------------
// The powering map on A^N / P^N
// ---------------------------------------------------------------------------

Prediction predict_power_dimN_total(u64 p, u64 d, int N, Space space);

/// #Per_k: dynamic programming over divisors of m^- grouped by the
/// multiplicative order of d, never by raw tuple enumeration.
Prediction predict_power_dimN_period_k(u64 p, u64 d, int N, u64 k, Space space);

/// Exact (tail, period) of one affine point from coordinate orders alone.
graph::OrbitStats predict_power_dimN_point(u64 p, u64 d, std::span<const u64> coords);

struct PreperiodicResult {
    Prediction total;
    std::map<u64, u64> per_tail;  // populated for prime d only
};

/// Strictly preperiodic points: p^N - (m^-+1)^N in total, and for prime d
/// the per-tail breakdown of the full d-ary trees.
PreperiodicResult predict_power_dimN_preperiodic(u64 p, u64 d, int N, Space space);

/// Leaf lower bound (half of all points; 0 in the permutation case).
double predict_power_dimN_leaves(u64 p, u64 d, int N, Space space);

/// Exact preimage count of an affine point: product over coordinates of
/// (1 for zero, gcd(d, p-1) for a solvable power residue, else no preimage).
u64 preimage_profile(u64 p, u64 d, std::span<const u64> coords);

// ---------------------------------------------------------------------------
// Random-map reference curves (asymptotic, not desk-exact)
// ---------------------------------------------------------------------------

/// tau_0 = 0, tau_{k+1} = e^{tau_k - 1}; increases toward the fixed point 1.
double tau(int k);

struct RandomExpectations {
    double periodic;  // sqrt(pi n / 8)
    double max_tail;  // log(2) sqrt(2 pi n)
};
RandomExpectations random_asymptotics(u64 n);

/// Expected fraction of points surviving k iterations of the image.
double kth_image_fraction(u64 n, int k);

/// CSV rows for a batch of predictions.
std::string predictions_to_csv(std::span<const std::pair<std::string, Prediction>> rows);

}  // namespace fgraph::formulas
