#include "fgraph/formulas.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace fgraph::formulas {

using arith::is_prime;
using arith::m_pair;
using arith::MPair;
using arith::mult_order;
using arith::valuation;

namespace {

constexpr double kPi = 3.14159265358979323846;

u64 to_u64(u128 v, const char* what) {
    if (v > (u128)UINT64_MAX) throw ResourceError(std::string(what) + " exceeds 64 bits");
    return (u64)v;
}

u128 pow_u128(u64 base, u64 exp, const char* what) {
    u128 r = 1;
    for (u64 i = 0; i < exp; ++i) {
        r *= base;
        if (r > (u128)UINT64_MAX) throw ResourceError(std::string(what) + " exceeds 64 bits");
    }
    return r;
}

u128 binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    u128 r = 1;
    for (int i = 0; i < k; ++i) r = r * (u128)(n - i) / (u128)(i + 1);
    return r;
}

void apply_hypothesis_flags(Prediction& pred, u64 p, u64 d) {
    if (p == 2) {
        pred.hypothesis_flag = true;
        pred.flag_reason = "p = 2 is outside the theorem hypotheses (every power map is a permutation)";
    } else if (d % p == 0) {
        pred.hypothesis_flag = true;
        pred.flag_reason = "p divides d, outside the cited hypotheses";
    }
}

void require_prime_and_degree(u64 p, u64 d) {
    if (!is_prime(p)) throw std::invalid_argument("p must be prime");
    if (d < 2) throw std::invalid_argument("d must be >= 2");
}

/// max over primes q | d of ceil(v_q(n) / v_q(d)).
u64 power_tail_bound(u64 n, u64 d) {
    u64 best = 0;
    for (auto [q, e] : arith::factorize(d)) {
        u64 vn = (u64)valuation(n, q);
        u64 t = (vn + e - 1) / e;
        best = std::max(best, t);
    }
    return best;
}

}  // namespace

double Prediction::value_at(double p) const {
    if (kind == Kind::Exact) return (double)exact;
    return coeff * std::pow(p, exponent);
}

std::string Prediction::to_json() const {
    nlohmann::json j;
    j["kind"] = kind == Kind::Exact ? "exact" : "envelope";
    if (kind == Kind::Exact)
        j["value"] = exact;
    else {
        j["coeff"] = coeff;
        j["exponent"] = exponent;
    }
    j["provenance"] = provenance;
    if (hypothesis_flag) j["flag"] = flag_reason;
    return j.dump();
}

int SplitSignature::K() const {
    int k = 0;
    for (auto [kd, c] : random_dims) k += kd * c;
    return k;
}

int SplitSignature::N() const { return (int)(a + b) + K(); }

int SplitSignature::block_count() const {
    int total = 0;
    for (auto [kd, c] : random_dims) total += c;
    return total;
}

int SplitSignature::max_random_dim() const {
    int m = 0;
    for (auto [kd, c] : random_dims) m = std::max(m, kd);
    return m;
}

std::string SplitSignature::label() const {
    std::ostringstream os;
    os << "P^" << a << "xT^" << b;
    for (auto [k, c] : random_dims) os << "xR" << k << "^" << c;
    return os.str();
}

std::optional<SplitSignature> SplitSignature::from_spec(const maps::MapSpec& spec) {
    const maps::MapSpec* s = &spec;
    while (s->kind == maps::MapSpec::Kind::Conjugated) s = &s->components.front();
    SplitSignature sig;
    sig.d = s->degree;
    std::map<int, int> rnd;
    auto absorb = [&](const maps::MapSpec& c) -> bool {
        switch (c.kind) {
            case maps::MapSpec::Kind::Power:
                ++sig.a;
                return true;
            case maps::MapSpec::Kind::Chebyshev:
                ++sig.b;
                return true;
            case maps::MapSpec::Kind::Random:
                ++rnd[c.dim];
                return true;
            default:
                return false;
        }
    };
    if (s->kind == maps::MapSpec::Kind::Split) {
        for (const auto& c : s->components)
            if (!absorb(c)) return std::nullopt;
    } else if (!absorb(*s)) {
        return std::nullopt;
    }
    sig.random_dims.assign(rnd.begin(), rnd.end());
    return sig;
}

// ---------------------------------------------------------------------------
// Dimension 1
// ---------------------------------------------------------------------------

Dim1Result predict_power_dim1(u64 p, u64 d, Space space) {
    require_prime_and_degree(p, d);
    MPair m = m_pair(p, d);
    Dim1Result r;
    r.count.kind = Prediction::Kind::Exact;
    r.count.exact = space == Space::Affine ? m.m_minus + 1 : m.m_minus + 2;
    r.count.provenance = "power-dim1-count";
    apply_hypothesis_flags(r.count, p, d);
    r.max_tail = power_tail_bound(p - 1, d);
    r.leaf_lower_bound = (p - 1) / 2;
    return r;
}

Dim1Result predict_cheby_dim1(u64 p, u64 d, Space space) {
    require_prime_and_degree(p, d);
    MPair m = m_pair(p, d);
    Dim1Result r;
    r.count.kind = Prediction::Kind::Exact;
    r.count.exact = (m.m_minus + m.m_plus) / 2 + (space == Space::Projective ? 1 : 0);
    r.count.provenance = "cheby-dim1-count";
    apply_hypothesis_flags(r.count, p, d);
    r.max_tail = std::max(power_tail_bound(p - 1, d), power_tail_bound(p + 1, d));
    return r;
}

Prediction predict_cheby_leaves(u64 p, u64 d) {
    require_prime_and_degree(p, d);
    if (!is_prime(d)) throw std::invalid_argument("predict_cheby_leaves requires prime d");
    Prediction pred;
    pred.kind = Prediction::Kind::Exact;
    pred.provenance = "cheby-leaves";
    apply_hypothesis_flags(pred, p, d);
    if (d == 2) {
        pred.exact = (p - 1) / 2;
    } else if ((p - 1) % d == 0) {
        pred.exact = (d - 1) * (p - 1) / (2 * d);
    } else if ((p + 1) % d == 0) {
        pred.exact = (d - 1) * (p + 1) / (2 * d);
    } else {
        pred.exact = 0;  // permutation: no vertex is preimage-free
    }
    return pred;
}

// ---------------------------------------------------------------------------
// Split maps
// ---------------------------------------------------------------------------

namespace {

u128 group_factor(const SplitSignature& sig, const MPair& m, const char* what) {
    u128 g = 1;
    for (u64 i = 0; i < sig.a; ++i) {
        g *= m.m_minus + 1;
        if (g > (u128)UINT64_MAX) throw ResourceError(std::string(what) + " exceeds 64 bits");
    }
    for (u64 i = 0; i < sig.b; ++i) {
        g *= (m.m_minus + m.m_plus) / 2;
        if (g > (u128)UINT64_MAX) throw ResourceError(std::string(what) + " exceeds 64 bits");
    }
    return g;
}

u128 geometric_sum(u64 base, int terms, const char* what) {
    // 1 + base + ... + base^(terms-1)
    u128 total = 0, pw = 1;
    for (int i = 0; i < terms; ++i) {
        total += pw;
        pw *= base;
        if (total > (u128)UINT64_MAX || pw > (u128)UINT64_MAX * 2)
            throw ResourceError(std::string(what) + " exceeds 64 bits");
    }
    return total;
}

}  // namespace

Prediction predict_split(const SplitSignature& sig, u64 p, Space space) {
    require_prime_and_degree(p, sig.d);
    MPair m = m_pair(p, sig.d);
    Prediction pred;
    pred.provenance = "split-count";
    apply_hypothesis_flags(pred, p, sig.d);
    u128 group = group_factor(sig, m, "split count");
    if (sig.K() == 0) {
        u128 total = group;
        if (space == Space::Projective) total += geometric_sum(m.m_minus + 1, sig.N(), "split count");
        pred.kind = Prediction::Kind::Exact;
        pred.exact = to_u64(total, "split count");
        return pred;
    }
    pred.kind = Prediction::Kind::Envelope;
    pred.coeff = (double)group * std::pow(kPi / 8.0, sig.block_count() / 2.0);
    pred.exponent = sig.K() / 2.0;
    if (!pred.flag_reason.empty()) pred.flag_reason += "; ";
    pred.hypothesis_flag = true;
    pred.flag_reason += "envelope coefficient is heuristic; only the growth order is from the theorem";
    return pred;
}

Prediction predict_split_tail(const SplitSignature& sig, u64 p) {
    require_prime_and_degree(p, sig.d);
    Prediction pred;
    pred.provenance = "split-tail";
    apply_hypothesis_flags(pred, p, sig.d);
    if (sig.K() == 0) {
        pred.kind = Prediction::Kind::Exact;
        if (sig.N() == 0)
            pred.exact = 0;
        else if (sig.b == 0)
            pred.exact = power_tail_bound(p - 1, sig.d);
        else
            pred.exact = std::max(power_tail_bound(p - 1, sig.d), power_tail_bound(p + 1, sig.d));
        return pred;
    }
    pred.kind = Prediction::Kind::Envelope;
    pred.coeff = std::log(2.0) * std::sqrt(2.0 * kPi);
    pred.exponent = sig.max_random_dim() / 2.0;
    pred.hypothesis_flag = true;
    pred.flag_reason = "envelope coefficient is heuristic; only the growth order is from the theorem";
    return pred;
}

// ---------------------------------------------------------------------------
// Powering map on A^N / P^N
// ---------------------------------------------------------------------------

Prediction predict_power_dimN_total(u64 p, u64 d, int N, Space space) {
    require_prime_and_degree(p, d);
    if (N < 0) throw std::invalid_argument("N must be >= 0");
    MPair m = m_pair(p, d);
    Prediction pred;
    pred.kind = Prediction::Kind::Exact;
    pred.provenance = "power-dimN-total";
    apply_hypothesis_flags(pred, p, d);
    if (space == Space::Affine)
        pred.exact = to_u64(pow_u128(m.m_minus + 1, N, "periodic count"), "periodic count");
    else
        pred.exact = to_u64(geometric_sum(m.m_minus + 1, N + 1, "periodic count"), "periodic count");
    return pred;
}

namespace {

/// Weighted tuple DP: for each count of nonzero coordinates I and each
/// achievable lcm of coordinate periods L, the number of ordered I-tuples of
/// divisors of m^- whose orders lcm to L, weighted by phi of each divisor.
std::map<std::pair<int, u64>, u128> period_tuple_dp(u64 m_minus, u64 d, int N) {
    // group divisors k | m^- by r = ord_k(d); weight(r) = sum of phi(k)
    std::map<u64, u128> weight;
    for (u64 k : arith::divisors(m_minus)) weight[mult_order(d, k)] += arith::euler_phi(k);

    std::map<std::pair<int, u64>, u128> dp;
    dp[{0, 1}] = 1;
    for (auto [r, w] : weight) {
        std::map<std::pair<int, u64>, u128> next = dp;
        for (const auto& [state, ways] : dp) {
            auto [slots, l] = state;
            u64 l2 = std::lcm(l, r);
            u128 wt = 1;
            for (int t = 1; slots + t <= N; ++t) {
                wt *= w;
                next[{slots + t, l2}] += ways * wt * binom(slots + t, t);
            }
        }
        dp = std::move(next);
    }
    return dp;
}

}  // namespace

Prediction predict_power_dimN_period_k(u64 p, u64 d, int N, u64 k, Space space) {
    require_prime_and_degree(p, d);
    if (k == 0) throw std::invalid_argument("period k must be >= 1");
    if (N < 0) throw std::invalid_argument("N must be >= 0");
    MPair m = m_pair(p, d);
    auto dp = period_tuple_dp(m.m_minus, d, N);

    // affine count in dimension n, as a function of n
    auto affine_count = [&](int n) -> u128 {
        u128 total = (k == 1) ? 1 : 0;  // the all-zero point is fixed
        for (int I = 1; I <= n; ++I) {
            auto it = dp.find({I, k});
            if (it != dp.end()) total += binom(n, I) * it->second;
        }
        return total;
    };

    Prediction pred;
    pred.kind = Prediction::Kind::Exact;
    pred.provenance = "power-dimN-period-k";
    apply_hypothesis_flags(pred, p, d);
    u128 total = 0;
    if (space == Space::Affine) {
        total = affine_count(N);
    } else {
        for (int D = 0; D <= N; ++D) total += affine_count(D);
    }
    pred.exact = to_u64(total, "periodic count");
    return pred;
}

graph::OrbitStats predict_power_dimN_point(u64 p, u64 d, std::span<const u64> coords) {
    require_prime_and_degree(p, d);
    MPair m = m_pair(p, d);
    u64 tail = 0, period = 1;
    for (u64 z : coords) {
        z %= p;
        if (z == 0) continue;
        u64 ord = mult_order(z, p);
        tail = std::max(tail, power_tail_bound(ord, d));
        u64 g = std::gcd(ord, m.m_minus);
        period = std::lcm(period, mult_order(d, g));
    }
    return {(u32)tail, (u32)period};
}

PreperiodicResult predict_power_dimN_preperiodic(u64 p, u64 d, int N, Space space) {
    require_prime_and_degree(p, d);
    if (N < 0) throw std::invalid_argument("N must be >= 0");
    MPair m = m_pair(p, d);
    PreperiodicResult r;
    r.total.kind = Prediction::Kind::Exact;
    r.total.provenance = "power-dimN-preperiodic";
    apply_hypothesis_flags(r.total, p, d);
    if (space == Space::Affine) {
        u128 all = pow_u128(p, N, "point count");
        u128 per = pow_u128(m.m_minus + 1, N, "point count");
        r.total.exact = to_u64(all - per, "preperiodic count");
    } else {
        u128 all = geometric_sum(p, N + 1, "point count");
        u128 per = geometric_sum(m.m_minus + 1, N + 1, "point count");
        r.total.exact = to_u64(all - per, "preperiodic count");
    }

    // Per-tail counts hold for prime d: the trees are full d-ary of height
    // v_d(p-1), so with j nonzero coordinates there are
    // binom(N,j) (d^j - 1) (m^-)^j d^{j(k-1)} points of tail exactly k.
    if (!is_prime(d)) return r;
    int nu = (p - 1) % d == 0 ? valuation(p - 1, d) : 0;
    auto tail_count = [&](int n, u64 k) -> u128 {
        u128 total = 0;
        for (int j = 0; j <= n; ++j) {
            u128 dj = pow_u128(d, j, "tail count");
            u128 term = binom(n, j) * (dj - 1);
            term *= pow_u128(m.m_minus, j, "tail count");
            for (u64 i = 1; i < k; ++i) {
                term *= dj;
                if (term > (u128)UINT64_MAX) throw ResourceError("tail count exceeds 64 bits");
            }
            total += term;
        }
        return total;
    };
    for (int k = 1; k <= nu; ++k) {
        u128 total = 0;
        if (space == Space::Affine) {
            total = tail_count(N, k);
        } else {
            for (int D = 0; D <= N; ++D) total += tail_count(D, k);
        }
        r.per_tail[(u64)k] = to_u64(total, "tail count");
    }
    return r;
}

double predict_power_dimN_leaves(u64 p, u64 d, int N, Space space) {
    require_prime_and_degree(p, d);
    if (std::gcd(d, p - 1) == 1) return 0.0;  // permutation
    if (space == Space::Affine) return std::pow((double)p, N) / 2.0;
    double total = 0;
    for (int D = 0; D <= N; ++D) total += std::pow((double)p, D);
    return total / 2.0;
}

u64 preimage_profile(u64 p, u64 d, std::span<const u64> coords) {
    require_prime_and_degree(p, d);
    u64 g = std::gcd(d, p - 1);
    u64 count = 1;
    for (u64 z : coords) {
        z %= p;
        if (z == 0) continue;
        if (arith::pow_mod(z, (p - 1) / g, p) != 1) return 0;
        count *= g;
    }
    return count;
}

// ---------------------------------------------------------------------------
// Random-map reference curves
// ---------------------------------------------------------------------------

double tau(int k) {
    double t = 0.0;
    for (int i = 0; i < k; ++i) t = std::exp(t - 1.0);
    return t;
}

RandomExpectations random_asymptotics(u64 n) {
    if (n == 0) throw std::invalid_argument("random_asymptotics: n must be >= 1");
    return {std::sqrt(kPi * (double)n / 8.0), std::log(2.0) * std::sqrt(2.0 * kPi * (double)n)};
}

double kth_image_fraction(u64 n, int k) {
    (void)n;
    return 1.0 - tau(k);
}

std::string predictions_to_csv(std::span<const std::pair<std::string, Prediction>> rows) {
    std::ostringstream os;
    os << "name,kind,value,coeff,exponent,provenance,flag\n";
    for (const auto& [name, p] : rows) {
        os << name << ",";
        if (p.kind == Prediction::Kind::Exact)
            os << "exact," << p.exact << ",,,";
        else
            os << "envelope,," << p.coeff << "," << p.exponent << ",";
        os << p.provenance << ",";
        os << (p.hypothesis_flag ? p.flag_reason : "") << "\n";
    }
    return os.str();
}

}  // namespace fgraph::formulas
