#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fgraph/arith.hpp"
#include "fgraph/common.hpp"

namespace fgraph::primes {

// ---------------------------------------------------------------------------
// Engineered prime sequences: forms for which the m+/m- quantities take
// known values, plus constant-m^- scans for the dimension-N classifier.
// ---------------------------------------------------------------------------

enum class Form {
    Mersenne,              // p = 2^q - 1, q prime
    SophieGermain,         // p = 2q + 1, q prime (q coprime to d when d is set)
    CongruentMinusOneMod,  // p = -1 (mod d), d odd
    ConstantMMinus,        // primes with m_pair(p, d).m_minus == target
};

struct Bounds {
    u64 min_p = 3;
    u64 max_p = 1ull << 40;  // hard ceiling for any sequence request
    std::size_t max_count = 1000;
};

struct SequenceSpec {
    Form form = Form::Mersenne;
    u64 d = 0;              // required for CongruentMinusOneMod / ConstantMMinus,
                            // optional for SophieGermain (enforces q coprime to d)
    u64 target_m_minus = 0; // ConstantMMinus
    Bounds bounds;
};

/// Strictly increasing primes satisfying the form exactly; an empty result
/// inside the bounds is a valid answer, not an error.
std::vector<u64> generate(const SequenceSpec& spec);

struct FormCheck {
    bool ok = false;
    u64 expected_m_minus = 0;
    u64 expected_m_plus = 0;  // 0 = no claim
    u64 actual_m_minus = 0;
    u64 actual_m_plus = 0;
    std::string detail;
};

/// Check the claimed m+/m- consequences of the prime-form lemma for one
/// (p, d, form) triple. Throws std::invalid_argument when the lemma makes no
/// claim for the combination (e.g. Mersenne with d not a power of two).
FormCheck verify_form_consequences(u64 p, u64 d, Form form);

/// Smallest m^- value hitting at least `want` primes with that constant
/// m_pair value below the cap; 0 when none does.
u64 default_constant_mminus_target(u64 d, u64 max_p, std::size_t want = 5);

}  // namespace fgraph::primes
