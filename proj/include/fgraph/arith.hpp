#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fgraph/common.hpp"

namespace fgraph::arith {

// ---------------------------------------------------------------------------
// Modular arithmetic. All residues are canonical in [0, m); intermediate
// products go through 128-bit so nothing overflows below 2^64.
// ---------------------------------------------------------------------------

inline u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>((u128)a * b % m); }

inline u64 add_mod(u64 a, u64 b, u64 m) {
    u64 s = a + b;
    if (s >= m || s < a) s -= m;
    return s;
}

inline u64 sub_mod(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + (m - b); }

u64 pow_mod(u64 base, u64 exp, u64 m);

/// Inverse of a modulo m via extended Euclid; throws if gcd(a, m) != 1.
u64 inv_mod(u64 a, u64 m);

/// Deterministic Miller-Rabin, exact for all n < 2^64.
bool is_prime(u64 n);

/// Prime factorization, trial division plus Pollard rho.
/// Returns (prime, exponent) pairs with primes ascending. factorize(1) = {}.
std::vector<std::pair<u64, int>> factorize(u64 n);

/// All positive divisors of n, ascending.
std::vector<u64> divisors(u64 n);

u64 euler_phi(u64 n);

/// Largest e with q^e | x. Requires x >= 1 and q prime.
int valuation(u64 x, u64 q);

/// Least k >= 1 with a^k = 1 (mod n). Requires gcd(a, n) = 1.
/// mult_order(a, 1) = 1 for every a.
u64 mult_order(u64 a, u64 n);

// ---------------------------------------------------------------------------
// Prime field element. Thin value type; the heavy per-point loops use the raw
// u64 kernels above, Fp is the checked API-surface form.
// ---------------------------------------------------------------------------

struct Fp {
    u64 value = 0;
    u64 p = 2;

    Fp() = default;
    Fp(u64 v, u64 prime) : value(v % prime), p(prime) {}

    Fp operator+(Fp o) const { return unchecked(add_mod(value, o.value, p), p); }
    Fp operator-(Fp o) const { return unchecked(sub_mod(value, o.value, p), p); }
    Fp operator*(Fp o) const { return unchecked(mul_mod(value, o.value, p), p); }
    Fp pow(u64 e) const { return unchecked(pow_mod(value, e, p), p); }
    Fp inv() const { return unchecked(inv_mod(value, p), p); }
    bool operator==(const Fp&) const = default;

    static Fp unchecked(u64 v, u64 prime) {
        Fp z;
        z.value = v;
        z.p = prime;
        return z;
    }
};

// ---------------------------------------------------------------------------
// The m+/m- quantities: the largest divisor of p-1 (resp. p+1) coprime to d.
// Every counting theorem in this library is phrased through them.
// ---------------------------------------------------------------------------

struct MPair {
    u64 m_minus = 0;
    u64 m_plus = 0;
    u64 p = 0;
    u64 d = 0;
};

/// Requires p prime and d >= 2.
MPair m_pair(u64 p, u64 d);

/// Strip from n every factor of a prime dividing d.
u64 coprime_part(u64 n, u64 d);

}  // namespace fgraph::arith
