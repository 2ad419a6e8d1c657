#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <vector>

#include "fgraph/arith.hpp"

using namespace fgraph;
using namespace fgraph::arith;

namespace {

// independent sieve used as the primality oracle
std::vector<bool> sieve(u64 n) {
    std::vector<bool> is(n + 1, true);
    is[0] = is[1] = false;
    for (u64 i = 2; i * i <= n; ++i)
        if (is[i])
            for (u64 j = i * i; j <= n; j += i) is[j] = false;
    return is;
}

}  // namespace

TEST_CASE("m_pair worked examples") {
    auto m = m_pair(37, 2);
    CHECK(m.m_minus == 9);
    CHECK(m.m_plus == 19);

    m = m_pair(31, 4);
    CHECK(m.m_minus == 15);
    CHECK(m.m_plus == 1);

    m = m_pair(7, 2);
    CHECK(m.m_minus == 3);
    CHECK(m.m_plus == 1);
}

TEST_CASE("m_pair rejects bad input") {
    CHECK_THROWS_AS(m_pair(15, 2), std::invalid_argument);
    CHECK_THROWS_AS(m_pair(7, 1), std::invalid_argument);
}

TEST_CASE("m_pair reassembles p-1 and p+1") {
    for (u64 p : {3ull, 5ull, 7ull, 11ull, 37ull, 97ull, 193ull, 769ull}) {
        for (u64 d : {2ull, 3ull, 4ull, 6ull, 12ull}) {
            auto m = m_pair(p, d);
            u64 back_minus = m.m_minus, back_plus = m.m_plus;
            for (auto [q, e] : factorize(d)) {
                (void)e;
                for (int v = valuation(p - 1, q); v > 0; --v) back_minus *= q;
                for (int v = valuation(p + 1, q); v > 0; --v) back_plus *= q;
            }
            CHECK(back_minus == p - 1);
            CHECK(back_plus == p + 1);
            CHECK(std::gcd(m.m_minus, d) == 1);
            CHECK(std::gcd(m.m_plus, d) == 1);
        }
    }
}

TEST_CASE("mult_order examples") {
    CHECK(mult_order(3, 7) == 6);
    CHECK(mult_order(1, 12) == 1);
    CHECK(mult_order(1, 1) == 1);
    CHECK(mult_order(2, 9) == 6);
    CHECK_THROWS_AS(mult_order(6, 9), std::invalid_argument);
}

TEST_CASE("mult_order divides euler_phi (Lagrange)") {
    for (u64 n = 2; n <= 500; ++n) {
        u64 phi = euler_phi(n);
        for (u64 a = 1; a < n; ++a) {
            if (std::gcd(a, n) != 1) continue;
            u64 ord = mult_order(a, n);
            CHECK(phi % ord == 0);
            CHECK(pow_mod(a, ord, n) == 1);
        }
    }
}

TEST_CASE("valuation examples") {
    CHECK(valuation(12, 2) == 2);
    CHECK(valuation(7, 2) == 0);
    CHECK(valuation(36, 3) == 2);
    CHECK_THROWS_AS(valuation(0, 2), std::invalid_argument);
    CHECK_THROWS_AS(valuation(12, 4), std::invalid_argument);
}

TEST_CASE("euler_phi and divisors") {
    CHECK(euler_phi(1) == 1);
    CHECK(euler_phi(9) == 6);
    CHECK(divisors(12) == std::vector<u64>{1, 2, 3, 4, 6, 12});
    CHECK(divisors(1) == std::vector<u64>{1});
    CHECK_THROWS_AS(euler_phi(0), std::invalid_argument);
    CHECK_THROWS_AS(divisors(0), std::invalid_argument);
}

TEST_CASE("totient sums over divisors") {
    for (u64 n = 1; n <= 10'000; ++n) {
        u64 sum = 0;
        for (u64 k : divisors(n)) sum += euler_phi(k);
        REQUIRE(sum == n);
    }
}

TEST_CASE("primality matches a sieve up to 1e5") {
    auto is = sieve(100'000);
    for (u64 n = 0; n <= 100'000; ++n) REQUIRE(is_prime(n) == is[n]);
}

TEST_CASE("primality on selected large values") {
    CHECK(is_prime((1ull << 31) - 1));
    CHECK(is_prime(2'147'483'647));
    CHECK_FALSE(is_prime(2047));          // 23 * 89, a 2-pseudoprime
    CHECK_FALSE(is_prime(561));           // Carmichael
    CHECK_FALSE(is_prime(1'373'653));     // strong pseudoprime to small bases
    CHECK(is_prime(1'000'000'007));
    CHECK_FALSE(is_prime(1'000'000'007ull * 998'244'353ull));
}

TEST_CASE("factorize reassembles and finds large factors") {
    auto f = factorize(2ull * 2 * 3 * 37 * 37);
    CHECK(f == std::vector<std::pair<u64, int>>{{2, 2}, {3, 1}, {37, 2}});

    u64 n = 1'000'003ull * 1'000'033ull;
    auto g = factorize(n);
    REQUIRE(g.size() == 2);
    CHECK(g[0] == std::pair<u64, int>{1'000'003, 1});
    CHECK(g[1] == std::pair<u64, int>{1'000'033, 1});

    for (u64 x : {720ull, 1ull, 97ull, 2ull * 3 * 5 * 7 * 11 * 13 * 17 * 19, (1ull << 40) - 1}) {
        u64 back = 1;
        for (auto [q, e] : factorize(x))
            for (int i = 0; i < e; ++i) back *= q;
        CHECK(back == x);
    }
}

TEST_CASE("Fp arithmetic stays canonical") {
    Fp a(40, 37), b(5, 37);
    CHECK(a.value == 3);
    CHECK((a + b).value == 8);
    CHECK((a - b).value == 35);
    CHECK((a * b).value == 15);
    CHECK((a.pow(36)).value == 1);
    CHECK((b * b.inv()).value == 1);
}

TEST_CASE("pow_mod and inv_mod basics") {
    CHECK(pow_mod(2, 10, 1'000'000'007) == 1024);
    CHECK(pow_mod(5, 0, 7) == 1);
    CHECK(pow_mod(3, 6, 7) == 1);
    CHECK(inv_mod(3, 7) == 5);
    CHECK_THROWS_AS(inv_mod(6, 9), std::invalid_argument);
    // double-width products: no overflow near 2^63
    u64 big = (1ull << 62) + 12345;
    CHECK(mul_mod(big, big, (1ull << 61) - 1) == (u64)(((u128)big * big) % ((1ull << 61) - 1)));
}
