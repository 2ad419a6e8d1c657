#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fgraph/arith.hpp"
#include "fgraph/common.hpp"

namespace fgraph::maps {

using arith::Fp;

// ---------------------------------------------------------------------------
// Point spaces. Affine N-space is indexed by base-p digits (coordinate 1 is
// the least significant digit). Projective N-space enumerates normalized
// representatives only: the chart of a point is the position D of its last
// nonzero coordinate (scaled to 1), charts are laid out consecutively, so
// #P^N = sum_{D=0}^{N} p^D.
// ---------------------------------------------------------------------------

enum class Space { Affine, Projective };

struct SpaceDesc {
    Space kind = Space::Affine;
    int dim = 1;
    u64 p = 2;

    u64 size() const;
    static SpaceDesc affine(int n, u64 p) { return {Space::Affine, n, p}; }
    static SpaceDesc projective(int n, u64 p) { return {Space::Projective, n, p}; }
    bool operator==(const SpaceDesc&) const = default;
};

struct PointIndex {
    Space space = Space::Affine;
    int dim = 1;
    u64 index = 0;
};

/// Affine: N coordinates. Projective: N+1 homogeneous coordinates, normalized
/// so the last nonzero one equals 1.
std::vector<u64> decode_point(const SpaceDesc& s, u64 index);
u64 encode_point(const SpaceDesc& s, std::span<const u64> coords);

// ---------------------------------------------------------------------------
// PGL matrix: integer entries, reduced mod p at evaluation time so one matrix
// can conjugate across a whole prime sequence. Must be square and nonsingular
// over Q; per-prime nonsingularity is checked when an evaluator is built.
// ---------------------------------------------------------------------------

struct PglMatrix {
    int n = 0;                // matrix is n x n, acting on P^{n-1}
    std::vector<i64> entries; // row-major

    i64 at(int r, int c) const { return entries[(size_t)r * n + c]; }
    static PglMatrix identity(int n);
    /// Affine-linear means the last row is (0, ..., 0, nonzero): the
    /// hyperplane at infinity is preserved and A^N maps into itself.
    bool is_affine_linear() const;
};

// ---------------------------------------------------------------------------
// Symbolic map description. A split map is a product of 1- or k-dimensional
// blocks all sharing one degree; conjugation wraps any spec with a change of
// variables.
// ---------------------------------------------------------------------------

struct MapSpec {
    enum class Kind { Power, Chebyshev, Poly, Random, Split, Conjugated };

    Kind kind = Kind::Power;
    u64 degree = 2;            // common degree d
    int dim = 1;               // N
    std::vector<i64> coeffs;   // Poly: c0..c_d, reduced mod p at evaluation
    u64 seed = 0;              // Random
    std::vector<MapSpec> components;  // Split blocks, or the single inner map of Conjugated
    PglMatrix alpha;           // Conjugated

    static MapSpec power(u64 d);
    static MapSpec chebyshev(u64 d);
    static MapSpec poly(std::vector<i64> coeffs);
    static MapSpec random_map(int k, u64 seed, u64 nominal_degree);
    static MapSpec split(std::vector<MapSpec> components);

    /// Throws std::invalid_argument on any structural violation (mixed
    /// degrees in a split, empty poly, bad matrix shape, ...).
    void validate() const;

    std::string to_json() const;
    static MapSpec from_json(const std::string& text);
};

/// F^alpha = alpha^-1 . F . alpha. Rejects non-square alpha and matrices
/// singular over Q; mod-p singularity surfaces as BadReductionError later.
MapSpec conjugate(MapSpec spec, PglMatrix alpha);

// ---------------------------------------------------------------------------
// Evaluation. An Evaluator binds a spec to a prime: coefficients reduced,
// alpha inverted, random tables materialized. It is immutable afterwards and
// safe to share across threads.
// ---------------------------------------------------------------------------

class Evaluator {
  public:
    Evaluator(const MapSpec& spec, u64 p, u64 table_budget = kDefaultTableBudget);
    ~Evaluator();
    Evaluator(Evaluator&&) noexcept;
    Evaluator& operator=(Evaluator&&) noexcept;

    u64 p() const;
    int dim() const;

    /// Index-level evaluation on A^N (base-p encoding).
    u64 affine_index(u64 index) const;
    /// Index-level evaluation on P^N (normalized-representative encoding).
    u64 projective_index(u64 index) const;

    /// Coordinate-level affine evaluation; in.size() == out.size() == N.
    void affine(std::span<const u64> in, std::span<u64> out) const;

    static constexpr u64 kDefaultTableBudget = 100'000'000;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Single-coordinate kernels.

/// z^d by square-and-multiply.
Fp eval_power(u64 d, Fp z);
u64 eval_power(u64 d, u64 z, u64 p);

/// Monic Chebyshev value T_d(z), normalization T_2 = x^2 - 2, evaluated by
/// the halving scheme T_{2k} = T_k^2 - 2, T_{2k+1} = T_k T_{k+1} - x.
/// Requires d >= 1.
Fp eval_cheby(u64 d, Fp z);
u64 eval_cheby(u64 d, u64 z, u64 p);

/// One-shot conveniences (build a throwaway Evaluator).
PointIndex eval_affine(const MapSpec& spec, const PointIndex& pt, u64 p);
PointIndex eval_projective(const MapSpec& spec, const PointIndex& pt, u64 p);

}  // namespace fgraph::maps
