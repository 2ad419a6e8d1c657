#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "fgraph/maps.hpp"

using namespace fgraph;
using namespace fgraph::maps;

TEST_CASE("eval_power basics") {
    CHECK(eval_power(2, 3, 7) == 2);
    CHECK(eval_power(5, 0, 13) == 0);
    CHECK(eval_power(3, 2, 11) == 8);
}

TEST_CASE("eval_cheby small values") {
    CHECK(eval_cheby(2, 3, 7) == 0);   // 9 - 2 = 7
    CHECK(eval_cheby(3, 1, 5) == 3);   // 1 - 3 = -2
    CHECK(eval_cheby(1, 4, 7) == 4);   // T_1 = x
    CHECK_THROWS_AS(eval_cheby(0, 1, 7), std::invalid_argument);
}

TEST_CASE("eval_cheby matches the coefficient recurrence") {
    // brute-force oracle: T_0 = 2, T_1 = x, T_{k+1} = x T_k - T_{k-1}
    for (u64 p : {5ull, 7ull, 31ull, 101ull}) {
        for (u64 z = 0; z < p; ++z) {
            u64 a = 2 % p, b = z;
            for (u64 d = 1; d <= 20; ++d) {
                CHECK(eval_cheby(d, z, p) == b);
                u64 next = arith::sub_mod(arith::mul_mod(z, b, p), a, p);
                a = b;
                b = next;
            }
        }
    }
}

TEST_CASE("Chebyshev composition T_ab = T_a . T_b") {
    for (u64 p : {7ull, 11ull, 31ull}) {
        for (u64 a = 1; a <= 8; ++a) {
            for (u64 b = 1; a * b <= 64; ++b) {
                for (u64 z = 0; z < p; ++z) {
                    CHECK(eval_cheby(a * b, z, p) == eval_cheby(a, eval_cheby(b, z, p), p));
                }
            }
        }
    }
}

TEST_CASE("Chebyshev semiconjugacy with the power map") {
    for (u64 p : {7ull, 13ull, 31ull}) {
        for (u64 z = 1; z < p; ++z) {
            u64 zi = arith::inv_mod(z, p);
            for (u64 d : {2ull, 3ull, 5ull, 6ull}) {
                u64 lhs = eval_cheby(d, arith::add_mod(z, zi, p), p);
                u64 rhs = arith::add_mod(arith::pow_mod(z, d, p), arith::pow_mod(zi, d, p), p);
                CHECK(lhs == rhs);
            }
        }
    }
}

TEST_CASE("space sizes") {
    CHECK(SpaceDesc::affine(1, 7).size() == 7);
    CHECK(SpaceDesc::affine(3, 37).size() == 50653);
    CHECK(SpaceDesc::affine(0, 5).size() == 1);
    CHECK(SpaceDesc::projective(1, 7).size() == 8);
    CHECK(SpaceDesc::projective(2, 7).size() == 57);
    CHECK(SpaceDesc::projective(0, 7).size() == 1);
}

TEST_CASE("point encoding round-trips") {
    for (auto s : {SpaceDesc::affine(2, 5), SpaceDesc::affine(3, 3), SpaceDesc::projective(2, 5),
                   SpaceDesc::projective(1, 7)}) {
        for (u64 i = 0; i < s.size(); ++i) {
            auto coords = decode_point(s, i);
            CHECK(encode_point(s, coords) == i);
        }
    }
}

TEST_CASE("projective encoding normalizes scalar multiples") {
    SpaceDesc s = SpaceDesc::projective(2, 7);
    std::vector<u64> v{3, 5, 2};
    for (u64 scale = 1; scale < 7; ++scale) {
        std::vector<u64> w{3 * scale % 7, 5 * scale % 7, 2 * scale % 7};
        CHECK(encode_point(s, w) == encode_point(s, v));
    }
    // distinct points get distinct indices: the encoding is a bijection
    std::set<u64> seen;
    for (u64 i = 0; i < s.size(); ++i) {
        seen.insert(encode_point(s, decode_point(s, i)));
    }
    CHECK(seen.size() == s.size());
}

TEST_CASE("split affine evaluation, worked example mod 37") {
    auto spec = MapSpec::split({MapSpec::power(2), MapSpec::chebyshev(2), MapSpec::chebyshev(2)});
    Evaluator ev(spec, 37);
    std::vector<u64> in{3, 4, 5}, out(3);
    ev.affine(in, out);
    CHECK(out == std::vector<u64>{9, 14, 23});
}

TEST_CASE("split maps reject mixed degrees") {
    CHECK_THROWS_AS(MapSpec::split({MapSpec::power(2), MapSpec::chebyshev(3)}), std::invalid_argument);
}

TEST_CASE("explicit polynomial evaluation") {
    // x^2 + 1 mod 5
    auto spec = MapSpec::poly({1, 0, 1});
    Evaluator ev(spec, 5);
    std::vector<u64> in{3}, out(1);
    ev.affine(in, out);
    CHECK(out[0] == 0);  // 10 mod 5
    // negative coefficients reduce mod p: x^2 - 2 is the Chebyshev map
    auto t2 = MapSpec::poly({-2, 0, 1});
    Evaluator evt(t2, 7);
    for (u64 z = 0; z < 7; ++z) {
        in[0] = z;
        evt.affine(in, out);
        CHECK(out[0] == eval_cheby(2, z, 7));
    }
}

TEST_CASE("projective evaluation fixes infinity for the power map") {
    auto spec = MapSpec::power(2);
    SpaceDesc s = SpaceDesc::projective(1, 7);
    // (1:0) is the point at infinity in chart 0
    u64 inf = encode_point(s, std::vector<u64>{1, 0});
    CHECK(eval_projective(spec, {Space::Projective, 1, inf}, 7).index == inf);
    // (0:1) is the origin
    u64 zero = encode_point(s, std::vector<u64>{0, 1});
    CHECK(eval_projective(spec, {Space::Projective, 1, zero}, 7).index == zero);
}

TEST_CASE("split map at the hyperplane at infinity is the power map") {
    auto spec = MapSpec::split({MapSpec::power(2), MapSpec::chebyshev(2), MapSpec::chebyshev(2)});
    SpaceDesc s = SpaceDesc::projective(3, 37);
    Evaluator ev(spec, 37);
    for (u64 x = 0; x < 37; ++x) {
        for (u64 y = 0; y < 37; ++y) {
            std::vector<u64> pt{x, y, 1, 0};  // last nonzero normalized, at infinity
            u64 img = ev.projective_index(encode_point(s, pt));
            std::vector<u64> expect{x * x % 37, y * y % 37, 1, 0};
            CHECK(img == encode_point(s, expect));
        }
    }
}

TEST_CASE("projective evaluation agrees with affine on the affine chart") {
    for (u64 p : {5ull, 7ull, 13ull}) {
        auto spec = MapSpec::split({MapSpec::power(3), MapSpec::chebyshev(3)});
        SpaceDesc ps = SpaceDesc::projective(2, p);
        SpaceDesc as = SpaceDesc::affine(2, p);
        Evaluator ev(spec, p);
        for (u64 x = 0; x < p; ++x) {
            for (u64 y = 0; y < p; ++y) {
                std::vector<u64> aff{x, y}, prj{x, y, 1};
                u64 ai = ev.affine_index(encode_point(as, aff));
                u64 pi = ev.projective_index(encode_point(ps, prj));
                auto aimg = decode_point(as, ai);
                std::vector<u64> lift{aimg[0], aimg[1], 1};
                CHECK(pi == encode_point(ps, lift));
            }
        }
    }
}

TEST_CASE("conjugation by the identity changes nothing") {
    auto inner = MapSpec::split({MapSpec::power(2), MapSpec::chebyshev(2)});
    auto conj = maps::conjugate(inner, PglMatrix::identity(3));
    Evaluator e1(inner, 11), e2(conj, 11);
    for (u64 i = 0; i < SpaceDesc::affine(2, 11).size(); ++i)
        CHECK(e1.affine_index(i) == e2.affine_index(i));
    for (u64 i = 0; i < SpaceDesc::projective(2, 11).size(); ++i)
        CHECK(e1.projective_index(i) == e2.projective_index(i));
}

TEST_CASE("conjugating the squaring map by (1-x)/x gives x^2/(2x^2-2x+1)") {
    // alpha = (1-x)/x as a linear fractional transformation
    PglMatrix alpha;
    alpha.n = 2;
    alpha.entries = {-1, 1, 1, 0};
    auto conj = maps::conjugate(MapSpec::power(2), alpha);
    for (u64 p : {7ull, 11ull, 13ull}) {
        SpaceDesc s = SpaceDesc::projective(1, p);
        Evaluator ev(conj, p);
        for (u64 i = 0; i < s.size(); ++i) {
            auto c = decode_point(s, i);  // (x : w)
            u64 x = c[0], w = c[1];
            // image (x^2 : 2x^2 - 2xw + w^2)
            u64 x2 = arith::mul_mod(x, x, p);
            u64 den = arith::add_mod(arith::mul_mod(2, x2, p), arith::mul_mod(w, w, p), p);
            den = arith::sub_mod(den, arith::mul_mod(2, arith::mul_mod(x, w, p), p), p);
            std::vector<u64> expect{x2, den};
            CHECK(ev.projective_index(i) == encode_point(s, expect));
        }
    }
}

TEST_CASE("singular alpha is rejected") {
    PglMatrix alpha;
    alpha.n = 2;
    alpha.entries = {1, 2, 2, 4};
    CHECK_THROWS_AS(maps::conjugate(MapSpec::power(2), alpha), std::invalid_argument);
    // invertible over Q but singular mod 5 (det = 5)
    PglMatrix alpha5;
    alpha5.n = 2;
    alpha5.entries = {1, 0, 0, 5};
    auto conj = maps::conjugate(MapSpec::power(2), alpha5);
    CHECK_THROWS_AS(Evaluator(conj, 5), BadReductionError);
    CHECK_NOTHROW(Evaluator(conj, 7));
}

namespace {

/// multiset of orbit pairs via plain per-point iteration (independent oracle)
std::multiset<std::pair<u64, u64>> orbit_multiset(Evaluator& ev, const SpaceDesc& s) {
    std::multiset<std::pair<u64, u64>> out;
    auto step = [&](u64 i) {
        return s.kind == Space::Affine ? ev.affine_index(i) : ev.projective_index(i);
    };
    for (u64 start = 0; start < s.size(); ++start) {
        u64 slow = step(start), fast = step(step(start));
        while (slow != fast) {
            slow = step(slow);
            fast = step(step(fast));
        }
        u64 period = 1;
        for (u64 x = step(slow); x != slow; x = step(x)) ++period;
        u64 tail = 0;
        u64 a = start, b = slow;
        while (a != b) {
            a = step(a);
            b = step(b);
            ++tail;
        }
        out.insert({tail, period});
    }
    return out;
}

}  // namespace

TEST_CASE("conjugation preserves the multiset of orbit statistics") {
    std::mt19937_64 rng(20240817);
    for (u64 p : {5ull, 7ull, 11ull, 13ull}) {
        auto inner = MapSpec::split({MapSpec::power(2), MapSpec::chebyshev(2)});
        Evaluator base(inner, p);
        SpaceDesc proj = SpaceDesc::projective(2, p);
        auto want = orbit_multiset(base, proj);
        for (int trial = 0; trial < 4; ++trial) {
            // random integer matrix, det != 0 over Q and mod p
            PglMatrix alpha;
            alpha.n = 3;
            while (true) {
                alpha.entries.clear();
                for (int i = 0; i < 9; ++i) alpha.entries.push_back((i64)(rng() % 7));
                try {
                    auto c = maps::conjugate(inner, alpha);
                    Evaluator ev(c, p);
                    CHECK(orbit_multiset(ev, proj) == want);
                    break;
                } catch (const std::invalid_argument&) {
                    continue;
                } catch (const BadReductionError&) {
                    continue;
                }
            }
        }
    }
}

TEST_CASE("affine conjugation by affine-linear alpha stays total") {
    // alpha = [[2, 3], [0, 1]] acts on A^1 as x -> 2x + 3
    PglMatrix alpha;
    alpha.n = 2;
    alpha.entries = {2, 3, 0, 1};
    CHECK(alpha.is_affine_linear());
    auto conj = maps::conjugate(MapSpec::power(2), alpha);
    Evaluator ev(conj, 11), base(MapSpec::power(2), 11);
    // F^alpha(x) = alpha^-1(F(alpha(x)))
    for (u64 x = 0; x < 11; ++x) {
        u64 ax = (2 * x + 3) % 11;
        u64 fax = base.affine_index(ax);
        u64 expect = arith::mul_mod(arith::sub_mod(fax, 3, 11), arith::inv_mod(2, 11), 11);
        CHECK(ev.affine_index(x) == expect);
    }
}

TEST_CASE("non-affine conjugation can push affine points to infinity") {
    PglMatrix alpha;
    alpha.n = 2;
    alpha.entries = {-1, 1, 1, 0};
    auto conj = maps::conjugate(MapSpec::power(2), alpha);
    Evaluator ev(conj, 13);
    int poles = 0;
    for (u64 x = 0; x < 13; ++x) {
        std::vector<u64> in{x}, out(1);
        try {
            ev.affine(in, out);
        } catch (const std::domain_error&) {
            ++poles;
        }
    }
    // x^2/(2x^2 - 2x + 1): the denominator factors mod 13 with roots 3 and 11
    CHECK(poles == 2);
}

TEST_CASE("random map tables are deterministic, in range and keyed by seed") {
    auto r1 = MapSpec::random_map(1, 42, 2);
    Evaluator a(r1, 101), b(r1, 101);
    bool all_equal = true, in_range = true;
    for (u64 i = 0; i < 101; ++i) {
        all_equal &= a.affine_index(i) == b.affine_index(i);
        in_range &= a.affine_index(i) < 101;
    }
    CHECK(all_equal);
    CHECK(in_range);
    auto r2 = MapSpec::random_map(1, 43, 2);
    Evaluator c(r2, 101);
    int differs = 0;
    for (u64 i = 0; i < 101; ++i) differs += a.affine_index(i) != c.affine_index(i);
    CHECK(differs > 50);
}

TEST_CASE("random blocks participate in splits across dimensions") {
    auto spec = MapSpec::split({MapSpec::power(2), MapSpec::random_map(2, 7, 2)});
    Evaluator ev(spec, 5);
    std::vector<u64> in{3, 1, 4}, out(3);
    ev.affine(in, out);
    CHECK(out[0] == 4);  // power coordinate unaffected by the random block
    CHECK(out[1] < 5);
    CHECK(out[2] < 5);
}

TEST_CASE("JSON round-trip reproduces evaluation") {
    PglMatrix alpha;
    alpha.n = 3;
    alpha.entries = {1, 2, 0, 0, 1, 3, 0, 0, 1};
    auto spec = maps::conjugate(
        MapSpec::split({MapSpec::poly({1, 0, 2}), MapSpec::random_map(1, 9, 2)}), alpha);
    auto text = spec.to_json();
    auto back = MapSpec::from_json(text);
    Evaluator e1(spec, 13), e2(back, 13);
    for (u64 i = 0; i < SpaceDesc::affine(2, 13).size(); ++i)
        CHECK(e1.affine_index(i) == e2.affine_index(i));
}

TEST_CASE("JSON rejects malformed specs") {
    CHECK_THROWS(MapSpec::from_json("{\"kind\":\"nope\"}"));
    CHECK_THROWS(MapSpec::from_json("{\"kind\":\"split\",\"components\":["
                                    "{\"kind\":\"power\",\"d\":2},{\"kind\":\"cheby\",\"d\":3}]}"));
    CHECK_THROWS(MapSpec::from_json("not json at all"));
}

TEST_CASE("dimension mismatches are rejected") {
    auto spec = MapSpec::split({MapSpec::power(2), MapSpec::power(2)});
    CHECK_THROWS_AS(eval_affine(spec, {Space::Affine, 1, 0}, 7), std::invalid_argument);
    CHECK_THROWS_AS(eval_projective(spec, {Space::Affine, 2, 0}, 7), std::invalid_argument);
}
