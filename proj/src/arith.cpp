#include "fgraph/arith.hpp"

#include <algorithm>
#include <numeric>

namespace fgraph::arith {

u64 pow_mod(u64 base, u64 exp, u64 m) {
    if (m == 1) return 0;
    u64 r = 1;
    base %= m;
    while (exp) {
        if (exp & 1) r = mul_mod(r, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return r;
}

u64 inv_mod(u64 a, u64 m) {
    a %= m;
    i64 t = 0, new_t = 1;
    u64 r = m, new_r = a;
    while (new_r != 0) {
        u64 q = r / new_r;
        i64 tmp_t = t - (i64)q * new_t;
        t = new_t;
        new_t = tmp_t;
        u64 tmp_r = r - q * new_r;
        r = new_r;
        new_r = tmp_r;
    }
    if (r != 1) throw std::invalid_argument("inv_mod: element not invertible");
    return t < 0 ? (u64)(t + (i64)m) : (u64)t;
}

namespace {

bool miller_rabin_witness(u64 n, u64 a, u64 d, int s) {
    u64 x = pow_mod(a % n, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
        x = mul_mod(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

}  // namespace

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0) return n == q;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // This witness set is deterministic below 2^64 (Sinclair / Sorenson-Webster).
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (!miller_rabin_witness(n, a, d, s)) return false;
    }
    return true;
}

namespace {

u64 pollard_rho(u64 n) {
    // Brent's variant; n must be odd, composite, not a prime power we already peeled.
    if (n % 2 == 0) return 2;
    u64 c = 1;
    while (true) {
        u64 x = 2, y = 2, d = 1;
        u64 count = 0, limit = 2;
        while (d == 1) {
            u64 prod = 1;
            u64 x0 = x;
            for (int i = 0; i < 128 && count < limit; ++i, ++count) {
                x = add_mod(mul_mod(x, x, n), c, n);
                u64 diff = x > y ? x - y : y - x;
                if (diff == 0) break;
                prod = mul_mod(prod, diff, n);
            }
            d = std::gcd(prod, n);
            if (count >= limit && d == 1) {
                y = x = x0;
                // re-sync the hare
                for (u64 i = 0; i < limit; ++i) x = add_mod(mul_mod(x, x, n), c, n);
                y = x;
                limit *= 2;
                count = 0;
            }
        }
        if (d != n && d != 1) return d;
        ++c;  // cycle degenerated, retry with a new increment
    }
}

void factor_rec(u64 n, std::vector<u64>& primes) {
    if (n == 1) return;
    if (is_prime(n)) {
        primes.push_back(n);
        return;
    }
    u64 d = pollard_rho(n);
    factor_rec(d, primes);
    factor_rec(n / d, primes);
}

}  // namespace

std::vector<std::pair<u64, int>> factorize(u64 n) {
    if (n == 0) throw std::invalid_argument("factorize: n must be positive");
    std::vector<u64> primes;
    for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull,
                  41ull, 43ull, 47ull, 53ull, 59ull, 61ull, 67ull, 71ull, 73ull, 79ull, 83ull,
                  89ull, 97ull}) {
        while (n % q == 0) {
            primes.push_back(q);
            n /= q;
        }
    }
    if (n > 1) factor_rec(n, primes);
    std::sort(primes.begin(), primes.end());
    std::vector<std::pair<u64, int>> out;
    for (u64 q : primes) {
        if (!out.empty() && out.back().first == q)
            ++out.back().second;
        else
            out.emplace_back(q, 1);
    }
    return out;
}

std::vector<u64> divisors(u64 n) {
    if (n == 0) throw std::invalid_argument("divisors: n must be positive");
    std::vector<u64> divs{1};
    for (auto [q, e] : factorize(n)) {
        size_t base = divs.size();
        u64 qe = 1;
        for (int i = 1; i <= e; ++i) {
            qe *= q;
            for (size_t j = 0; j < base; ++j) divs.push_back(divs[j] * qe);
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

u64 euler_phi(u64 n) {
    if (n == 0) throw std::invalid_argument("euler_phi: n must be positive");
    u64 phi = n;
    for (auto [q, e] : factorize(n)) {
        phi -= phi / q;
        (void)e;
    }
    return phi;
}

int valuation(u64 x, u64 q) {
    if (x == 0) throw std::invalid_argument("valuation: x = 0 has infinite valuation");
    if (q < 2 || !is_prime(q)) throw std::invalid_argument("valuation: q must be prime");
    int e = 0;
    while (x % q == 0) {
        x /= q;
        ++e;
    }
    return e;
}

u64 mult_order(u64 a, u64 n) {
    if (n == 0) throw std::invalid_argument("mult_order: modulus must be positive");
    if (n == 1) return 1;
    a %= n;
    if (std::gcd(a, n) != 1) throw std::invalid_argument("mult_order: gcd(a, n) != 1");
    u64 order = euler_phi(n);
    for (auto [q, e] : factorize(order)) {
        (void)e;
        while (order % q == 0 && pow_mod(a, order / q, n) == 1) order /= q;
    }
    return order;
}

u64 coprime_part(u64 n, u64 d) {
    for (auto [q, e] : factorize(d)) {
        (void)e;
        while (n % q == 0) n /= q;
    }
    return n;
}

MPair m_pair(u64 p, u64 d) {
    if (d < 2) throw std::invalid_argument("m_pair: d must be >= 2");
    if (!is_prime(p)) throw std::invalid_argument("m_pair: p must be prime");
    MPair m;
    m.p = p;
    m.d = d;
    m.m_minus = coprime_part(p - 1, d);
    m.m_plus = coprime_part(p + 1, d);
    return m;
}

}  // namespace fgraph::arith
