#include "fgraph/primes.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>

namespace fgraph::primes {

using arith::is_prime;
using arith::m_pair;

namespace {

bool is_power_of_two(u64 x) { return x != 0 && (x & (x - 1)) == 0; }

void check_bounds(const Bounds& b) {
    if (b.max_p > (1ull << 40)) throw std::invalid_argument("prime bound above 2^40 cap");
    if (b.min_p > b.max_p) throw std::invalid_argument("empty prime bounds");
}

}  // namespace

std::vector<u64> generate(const SequenceSpec& spec) {
    check_bounds(spec.bounds);
    std::vector<u64> out;
    auto emit = [&](u64 p) {
        if (p >= spec.bounds.min_p && p <= spec.bounds.max_p) out.push_back(p);
        return out.size() < spec.bounds.max_count;
    };

    switch (spec.form) {
        case Form::Mersenne: {
            for (u64 q = 2; q <= 40; ++q) {
                if (!is_prime(q)) continue;
                u64 p = (1ull << q) - 1;
                if (p > spec.bounds.max_p) break;
                if (is_prime(p) && !emit(p)) break;
            }
            break;
        }
        case Form::SophieGermain: {
            for (u64 q = 2; 2 * q + 1 <= spec.bounds.max_p; q = (q == 2 ? 3 : q + 2)) {
                if (!is_prime(q)) continue;
                if (spec.d != 0 && spec.d % q == 0) continue;  // lemma needs q coprime to d
                u64 p = 2 * q + 1;
                if (is_prime(p) && !emit(p)) break;
            }
            break;
        }
        case Form::CongruentMinusOneMod: {
            if (spec.d < 3 || spec.d % 2 == 0)
                throw std::invalid_argument("p = -1 (mod d) form requires odd d >= 3");
            for (u64 p = spec.d - 1; p <= spec.bounds.max_p; p += spec.d) {
                if (p < 2) continue;
                if (is_prime(p) && !emit(p)) break;
            }
            break;
        }
        case Form::ConstantMMinus: {
            if (spec.d < 2) throw std::invalid_argument("constant-m^- form requires d >= 2");
            if (spec.target_m_minus == 0)
                throw std::invalid_argument("constant-m^- form requires a target");
            for (u64 p = spec.bounds.min_p | 1; p <= spec.bounds.max_p; p += 2) {
                if (!is_prime(p)) continue;
                if (m_pair(p, spec.d).m_minus == spec.target_m_minus && !emit(p)) break;
            }
            break;
        }
    }
    return out;
}

FormCheck verify_form_consequences(u64 p, u64 d, Form form) {
    if (!is_prime(p)) throw std::invalid_argument("verify_form_consequences: p must be prime");
    if (d < 2) throw std::invalid_argument("verify_form_consequences: d must be >= 2");
    FormCheck chk;
    arith::MPair m = m_pair(p, d);
    chk.actual_m_minus = m.m_minus;
    chk.actual_m_plus = m.m_plus;

    switch (form) {
        case Form::Mersenne: {
            if (!is_power_of_two(p + 1)) throw std::invalid_argument("p is not a Mersenne prime");
            if (!is_power_of_two(d)) throw std::invalid_argument("Mersenne claim needs d = 2^k");
            u64 q = (u64)std::countr_zero(p + 1);
            chk.expected_m_plus = 1;
            chk.expected_m_minus = (1ull << (q - 1)) - 1;
            chk.ok = chk.actual_m_plus == chk.expected_m_plus && chk.actual_m_minus == chk.expected_m_minus;
            chk.detail = "Mersenne p = 2^" + std::to_string(q) + " - 1";
            return chk;
        }
        case Form::SophieGermain: {
            if (p < 5 || p % 2 == 0 || !is_prime((p - 1) / 2))
                throw std::invalid_argument("p is not a Sophie Germain prime (p = 2q+1)");
            u64 q = (p - 1) / 2;
            if (d % 2 != 0) throw std::invalid_argument("Sophie Germain claim needs even d");
            if (d % q == 0) throw std::invalid_argument("Sophie Germain claim needs q coprime to d");
            chk.expected_m_minus = q;
            chk.ok = chk.actual_m_minus == chk.expected_m_minus;
            chk.detail = "Sophie Germain q = " + std::to_string(q);
            return chk;
        }
        case Form::CongruentMinusOneMod: {
            if (d % 2 == 0) throw std::invalid_argument("p = -1 (mod d) claim needs odd d");
            if ((p + 1) % d != 0) throw std::invalid_argument("p is not -1 mod d");
            chk.expected_m_minus = p - 1;
            chk.ok = chk.actual_m_minus == chk.expected_m_minus;
            chk.detail = "p = -1 (mod " + std::to_string(d) + ")";
            return chk;
        }
        case Form::ConstantMMinus:
            throw std::invalid_argument("constant-m^- sequences carry no lemma claim");
    }
    throw std::logic_error("unreachable");
}

u64 default_constant_mminus_target(u64 d, u64 max_p, std::size_t want) {
    if (d < 2) throw std::invalid_argument("d must be >= 2");
    std::map<u64, std::size_t> buckets;
    for (u64 p = 3; p <= max_p; p += 2)
        if (is_prime(p)) ++buckets[m_pair(p, d).m_minus];
    for (auto [m, count] : buckets)
        if (count >= want) return m;
    return 0;
}

}  // namespace fgraph::primes
