#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fgraph/common.hpp"
#include "fgraph/formulas.hpp"
#include "fgraph/graph.hpp"
#include "fgraph/maps.hpp"

namespace fgraph::classify {

// ---------------------------------------------------------------------------
// Black-box identification of a degree-d self-map from cycle statistics over
// an engineered prime sequence.
// ---------------------------------------------------------------------------

/// Per-prime affine evaluation oracle; throws BadReductionError when the map
/// does not reduce mod p (that prime is skipped and reported).
using PointFn = graph::PointFn;
using OracleFactory = std::function<PointFn(u64 p)>;

OracleFactory oracle_from_spec(const maps::MapSpec& spec);

struct EvidenceRow {
    u64 p = 0;
    u64 periodic = 0;  // #Per over A^N(F_p)
    u64 max_tail = 0;
    u64 m_minus = 0;
    u64 m_plus = 0;
};

struct CycleEvidence {
    int dim = 1;
    u64 d = 2;
    std::vector<EvidenceRow> rows;     // p strictly increasing
    std::vector<u64> skipped_primes;   // bad reduction
};

struct GatherOptions {
    u64 max_points = 100'000'000;
    unsigned threads = 0;
};

CycleEvidence gather_evidence(const OracleFactory& oracle, std::span<const u64> primes, int dim,
                              u64 d, const GatherOptions& opts = {});
CycleEvidence gather_evidence(const maps::MapSpec& spec, std::span<const u64> primes,
                              const GatherOptions& opts = {});

enum class Label { Power, Chebyshev, Random, Unknown };
std::string label_name(Label l);

struct PerPrimeRow {
    u64 p = 0;
    u64 observed = 0;
    double predicted = 0.0;
    bool matched = false;
};

struct Verdict {
    Label label = Label::Unknown;                       // dimension-1 verdicts
    std::optional<formulas::SplitSignature> signature;  // dimension-N verdicts
    double confidence = 0.0;  // fraction of primes whose counts matched
    double count_exponent = 0.0;
    double tail_exponent = 0.0;
    std::vector<PerPrimeRow> table;
    std::string to_json() const;
};

/// Candidate scores retained for plot emission.
struct Candidate {
    formulas::SplitSignature sig;
    double score = 0.0;
    double confidence = 0.0;
    std::vector<double> predicted;  // per evidence row
};

/// Growth-rate discriminant, then exact-count comparison against the power
/// and Chebyshev formulas. Needs at least four usable primes.
Verdict classify_dim1(const CycleEvidence& evidence, u64 d);

struct DimNResult {
    Verdict verdict;
    std::vector<Candidate> candidates;  // sorted best-first
};

/// Signature recovery for N >= 2 over a constant-m^- prime sequence:
/// least-squares scoring of every signature with a + b + K = N against the
/// observed counts and max tails.
DimNResult classify_dimN(const OracleFactory& oracle, u64 d, int dim, std::span<const u64> primes,
                         const GatherOptions& opts = {});
DimNResult classify_dimN(const maps::MapSpec& spec, u64 d, int dim, std::span<const u64> primes,
                         const GatherOptions& opts = {});

/// Plot-ready CSV: p, observed, one predicted column per candidate.
std::string candidates_to_csv(const CycleEvidence& evidence, std::span<const Candidate> candidates);

}  // namespace fgraph::classify
