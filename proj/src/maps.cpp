#include "fgraph/maps.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include <json.hpp>

namespace fgraph::maps {

using arith::add_mod;
using arith::inv_mod;
using arith::mul_mod;
using arith::pow_mod;
using arith::sub_mod;

// ---------------------------------------------------------------------------
// Spaces and point encodings
// ---------------------------------------------------------------------------

u64 SpaceDesc::size() const {
    if (dim < 0) throw std::invalid_argument("SpaceDesc: negative dimension");
    u128 total = 0;
    u128 pw = 1;
    for (int i = 0; i < dim; ++i) {
        pw *= p;
        if (pw > (u128)UINT64_MAX) throw ResourceError("space size exceeds 64 bits");
    }
    if (kind == Space::Affine) return (u64)pw;
    // sum_{D=0}^{N} p^D
    pw = 1;
    for (int i = 0; i <= dim; ++i) {
        total += pw;
        pw *= p;
    }
    if (total > (u128)UINT64_MAX) throw ResourceError("space size exceeds 64 bits");
    return (u64)total;
}

std::vector<u64> decode_point(const SpaceDesc& s, u64 index) {
    if (s.kind == Space::Affine) {
        std::vector<u64> coords(s.dim);
        for (int i = 0; i < s.dim; ++i) {
            coords[i] = index % s.p;
            index /= s.p;
        }
        return coords;
    }
    std::vector<u64> coords(s.dim + 1, 0);
    u64 offset = 0, chart_size = 1;
    for (int chart = 0; chart <= s.dim; ++chart) {
        if (index < offset + chart_size) {
            u64 rem = index - offset;
            for (int i = 0; i < chart; ++i) {
                coords[i] = rem % s.p;
                rem /= s.p;
            }
            coords[chart] = 1;
            return coords;
        }
        offset += chart_size;
        chart_size *= s.p;
    }
    throw std::out_of_range("decode_point: index outside projective space");
}

u64 encode_point(const SpaceDesc& s, std::span<const u64> coords) {
    if (s.kind == Space::Affine) {
        if ((int)coords.size() != s.dim) throw std::invalid_argument("encode_point: dimension mismatch");
        u64 index = 0;
        for (int i = s.dim - 1; i >= 0; --i) index = index * s.p + coords[i] % s.p;
        return index;
    }
    if ((int)coords.size() != s.dim + 1) throw std::invalid_argument("encode_point: dimension mismatch");
    int last = -1;
    for (int i = s.dim; i >= 0; --i) {
        if (coords[i] % s.p != 0) {
            last = i;
            break;
        }
    }
    if (last < 0) throw std::invalid_argument("encode_point: all-zero projective point");
    u64 scale = inv_mod(coords[last] % s.p, s.p);
    u64 offset = 0, chart_size = 1;
    for (int chart = 0; chart < last; ++chart) {
        offset += chart_size;
        chart_size *= s.p;
    }
    u64 index = 0;
    for (int i = last - 1; i >= 0; --i) index = index * s.p + mul_mod(coords[i] % s.p, scale, s.p);
    return offset + index;
}

// ---------------------------------------------------------------------------
// PGL matrices
// ---------------------------------------------------------------------------

PglMatrix PglMatrix::identity(int n) {
    PglMatrix m;
    m.n = n;
    m.entries.assign((size_t)n * n, 0);
    for (int i = 0; i < n; ++i) m.entries[(size_t)i * n + i] = 1;
    return m;
}

bool PglMatrix::is_affine_linear() const {
    for (int c = 0; c + 1 < n; ++c)
        if (at(n - 1, c) != 0) return false;
    return at(n - 1, n - 1) != 0;
}

namespace {

/// Fraction-free determinant (Bareiss); entries stay exact in 128 bits for
/// the small matrices used here.
__int128 integer_det(const PglMatrix& m) {
    int n = m.n;
    std::vector<__int128> a(m.entries.begin(), m.entries.end());
    __int128 prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a[(size_t)k * n + k] == 0) {
            int piv = -1;
            for (int r = k + 1; r < n; ++r)
                if (a[(size_t)r * n + k] != 0) {
                    piv = r;
                    break;
                }
            if (piv < 0) return 0;
            for (int c = 0; c < n; ++c) std::swap(a[(size_t)k * n + c], a[(size_t)piv * n + c]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                a[(size_t)i * n + j] =
                    (a[(size_t)i * n + j] * a[(size_t)k * n + k] - a[(size_t)i * n + k] * a[(size_t)k * n + j]) / prev;
        prev = a[(size_t)k * n + k];
    }
    return sign * a[(size_t)(n - 1) * n + (n - 1)];
}

u64 reduce_mod(i64 v, u64 p) {
    i64 r = v % (i64)p;
    if (r < 0) r += (i64)p;
    return (u64)r;
}

std::vector<u64> matrix_mod(const PglMatrix& m, u64 p) {
    std::vector<u64> out(m.entries.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = reduce_mod(m.entries[i], p);
    return out;
}

/// Gauss-Jordan inverse mod p; throws BadReductionError on singular input.
std::vector<u64> matrix_inverse_mod(std::vector<u64> a, int n, u64 p) {
    std::vector<u64> inv((size_t)n * n, 0);
    for (int i = 0; i < n; ++i) inv[(size_t)i * n + i] = 1;
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (a[(size_t)r * n + col] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) throw BadReductionError("matrix singular mod p");
        if (piv != col) {
            for (int c = 0; c < n; ++c) {
                std::swap(a[(size_t)piv * n + c], a[(size_t)col * n + c]);
                std::swap(inv[(size_t)piv * n + c], inv[(size_t)col * n + c]);
            }
        }
        u64 s = inv_mod(a[(size_t)col * n + col], p);
        for (int c = 0; c < n; ++c) {
            a[(size_t)col * n + c] = mul_mod(a[(size_t)col * n + c], s, p);
            inv[(size_t)col * n + c] = mul_mod(inv[(size_t)col * n + c], s, p);
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            u64 f = a[(size_t)r * n + col];
            if (f == 0) continue;
            for (int c = 0; c < n; ++c) {
                a[(size_t)r * n + c] = sub_mod(a[(size_t)r * n + c], mul_mod(f, a[(size_t)col * n + c], p), p);
                inv[(size_t)r * n + c] = sub_mod(inv[(size_t)r * n + c], mul_mod(f, inv[(size_t)col * n + c], p), p);
            }
        }
    }
    return inv;
}

void matrix_apply(const std::vector<u64>& m, int n, std::span<const u64> in, std::span<u64> out, u64 p) {
    for (int r = 0; r < n; ++r) {
        u64 acc = 0;
        for (int c = 0; c < n; ++c) acc = add_mod(acc, mul_mod(m[(size_t)r * n + c], in[c], p), p);
        out[r] = acc;
    }
}

u64 splitmix64(u64& state) {
    u64 z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

// ---------------------------------------------------------------------------
// MapSpec construction and validation
// ---------------------------------------------------------------------------

MapSpec MapSpec::power(u64 d) {
    MapSpec s;
    s.kind = Kind::Power;
    s.degree = d;
    s.dim = 1;
    return s;
}

MapSpec MapSpec::chebyshev(u64 d) {
    MapSpec s;
    s.kind = Kind::Chebyshev;
    s.degree = d;
    s.dim = 1;
    return s;
}

MapSpec MapSpec::poly(std::vector<i64> coeffs) {
    MapSpec s;
    s.kind = Kind::Poly;
    s.coeffs = std::move(coeffs);
    s.degree = s.coeffs.empty() ? 0 : s.coeffs.size() - 1;
    s.dim = 1;
    s.validate();
    return s;
}

MapSpec MapSpec::random_map(int k, u64 seed, u64 nominal_degree) {
    MapSpec s;
    s.kind = Kind::Random;
    s.dim = k;
    s.seed = seed;
    s.degree = nominal_degree;
    return s;
}

MapSpec MapSpec::split(std::vector<MapSpec> components) {
    MapSpec s;
    s.kind = Kind::Split;
    s.components = std::move(components);
    s.dim = 0;
    s.degree = s.components.empty() ? 1 : s.components.front().degree;
    for (const auto& c : s.components) s.dim += c.dim;
    s.validate();
    return s;
}

MapSpec conjugate(MapSpec spec, PglMatrix alpha) {
    MapSpec s;
    s.kind = MapSpec::Kind::Conjugated;
    s.degree = spec.degree;
    s.dim = spec.dim;
    s.alpha = std::move(alpha);
    s.components.push_back(std::move(spec));
    s.validate();
    return s;
}

void MapSpec::validate() const {
    switch (kind) {
        case Kind::Power:
        case Kind::Chebyshev:
            if (dim != 1) throw std::invalid_argument("power/chebyshev blocks are one-dimensional");
            if (degree < 1) throw std::invalid_argument("degree must be >= 1");
            break;
        case Kind::Poly:
            if (dim != 1) throw std::invalid_argument("poly blocks are one-dimensional");
            if (coeffs.empty()) throw std::invalid_argument("poly needs at least one coefficient");
            if (coeffs.size() > 1 && coeffs.back() == 0)
                throw std::invalid_argument("poly leading coefficient must be nonzero");
            if (degree != coeffs.size() - 1) throw std::invalid_argument("poly degree/coefficients mismatch");
            break;
        case Kind::Random:
            if (dim < 1) throw std::invalid_argument("random block dimension must be >= 1");
            break;
        case Kind::Split: {
            int n = 0;
            for (const auto& c : components) {
                if (c.kind == Kind::Split || c.kind == Kind::Conjugated)
                    throw std::invalid_argument("split components must be plain blocks");
                c.validate();
                if (c.degree != degree)
                    throw std::invalid_argument("split components must share one degree");
                n += c.dim;
            }
            if (n != dim) throw std::invalid_argument("split dimension mismatch");
            break;
        }
        case Kind::Conjugated: {
            if (components.size() != 1) throw std::invalid_argument("conjugated wraps exactly one map");
            components.front().validate();
            if (dim != components.front().dim || degree != components.front().degree)
                throw std::invalid_argument("conjugated dimension/degree mismatch");
            if (alpha.n != dim + 1 || alpha.entries.size() != (size_t)alpha.n * alpha.n)
                throw std::invalid_argument("alpha must be (N+1)x(N+1)");
            if (integer_det(alpha) == 0) throw std::invalid_argument("alpha singular over Q");
            break;
        }
    }
}

// ---------------------------------------------------------------------------
// JSON serialization
// ---------------------------------------------------------------------------

namespace {

nlohmann::json spec_to_json(const MapSpec& s) {
    nlohmann::json j;
    switch (s.kind) {
        case MapSpec::Kind::Power:
            j["kind"] = "power";
            j["d"] = s.degree;
            break;
        case MapSpec::Kind::Chebyshev:
            j["kind"] = "cheby";
            j["d"] = s.degree;
            break;
        case MapSpec::Kind::Poly:
            j["kind"] = "poly";
            j["coeffs"] = s.coeffs;
            break;
        case MapSpec::Kind::Random:
            j["kind"] = "random";
            j["k"] = s.dim;
            j["seed"] = s.seed;
            j["d"] = s.degree;
            break;
        case MapSpec::Kind::Split: {
            j["kind"] = "split";
            j["d"] = s.degree;
            auto arr = nlohmann::json::array();
            for (const auto& c : s.components) arr.push_back(spec_to_json(c));
            j["components"] = arr;
            break;
        }
        case MapSpec::Kind::Conjugated: {
            j["kind"] = "conjugated";
            j["inner"] = spec_to_json(s.components.front());
            auto rows = nlohmann::json::array();
            for (int r = 0; r < s.alpha.n; ++r) {
                auto row = nlohmann::json::array();
                for (int c = 0; c < s.alpha.n; ++c) row.push_back(s.alpha.at(r, c));
                rows.push_back(row);
            }
            j["alpha"] = rows;
            break;
        }
    }
    j["N"] = s.dim;
    return j;
}

MapSpec spec_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "power") return MapSpec::power(j.at("d").get<u64>());
    if (kind == "cheby") return MapSpec::chebyshev(j.at("d").get<u64>());
    if (kind == "poly") return MapSpec::poly(j.at("coeffs").get<std::vector<i64>>());
    if (kind == "random")
        return MapSpec::random_map(j.at("k").get<int>(), j.at("seed").get<u64>(), j.at("d").get<u64>());
    if (kind == "split") {
        std::vector<MapSpec> comps;
        for (const auto& c : j.at("components")) comps.push_back(spec_from_json(c));
        return MapSpec::split(std::move(comps));
    }
    if (kind == "conjugated") {
        MapSpec inner = spec_from_json(j.at("inner"));
        PglMatrix alpha;
        const auto& rows = j.at("alpha");
        alpha.n = (int)rows.size();
        for (const auto& row : rows) {
            if ((int)row.size() != alpha.n) throw std::invalid_argument("alpha must be square");
            for (const auto& v : row) alpha.entries.push_back(v.get<i64>());
        }
        return conjugate(std::move(inner), std::move(alpha));
    }
    throw std::invalid_argument("unknown map kind: " + kind);
}

}  // namespace

std::string MapSpec::to_json() const { return spec_to_json(*this).dump(2); }

MapSpec MapSpec::from_json(const std::string& text) {
    MapSpec s = spec_from_json(nlohmann::json::parse(text));
    s.validate();
    return s;
}

// ---------------------------------------------------------------------------
// Single-coordinate kernels
// ---------------------------------------------------------------------------

u64 eval_power(u64 d, u64 z, u64 p) { return pow_mod(z, d, p); }

Fp eval_power(u64 d, Fp z) { return Fp::unchecked(eval_power(d, z.value, z.p), z.p); }

u64 eval_cheby(u64 d, u64 z, u64 p) {
    if (d == 0) throw std::invalid_argument("eval_cheby: d = 0 (constant map) rejected");
    z %= p;
    const u64 two = 2 % p;
    // pair (a, b) = (T_k, T_{k+1}) walking the bits of d from the top
    u64 a = two, b = z;
    int bits = 64 - std::countl_zero(d);
    for (int i = bits - 1; i >= 0; --i) {
        u64 cross = sub_mod(mul_mod(a, b, p), z, p);  // T_{2k+1}
        if ((d >> i) & 1) {
            a = cross;
            b = sub_mod(mul_mod(b, b, p), two, p);
        } else {
            b = cross;
            a = sub_mod(mul_mod(a, a, p), two, p);
        }
    }
    return a;
}

Fp eval_cheby(u64 d, Fp z) { return Fp::unchecked(eval_cheby(d, z.value, z.p), z.p); }

// ---------------------------------------------------------------------------
// Evaluator
// ---------------------------------------------------------------------------

struct Evaluator::Impl {
    u64 p = 2;
    int dim = 0;
    u64 table_budget = kDefaultTableBudget;

    struct Block {
        MapSpec::Kind kind;
        int offset = 0;
        int width = 1;
        u64 degree = 2;
        std::vector<u64> coeffs;  // Poly, reduced mod p, degree+1 entries
        u64 lead = 1;             // top coefficient mod p (image at infinity)
        std::vector<u64> table;   // Random
    };
    std::vector<Block> blocks;

    // Conjugation wrapper state.
    bool conjugated = false;
    std::unique_ptr<Impl> inner;
    std::vector<u64> alpha_mod, alpha_inv;
    bool affine_linear = false;
    // Affine-linear fast path: forward x -> A x + b, backward y -> Ai y + bi.
    std::vector<u64> A, bvec, Ai, bivec;

    void build(const MapSpec& spec);
    void eval_affine(std::span<const u64> in, std::span<u64> out) const;
    void eval_homogeneous(std::span<const u64> in, std::span<u64> out) const;

    // Evaluation uses fixed stack buffers; keeps the per-point loops free of
    // heap traffic and reentrant across nested conjugations.
    static constexpr int kMaxDim = 16;
};

void Evaluator::Impl::build(const MapSpec& spec) {
    spec.validate();
    if (spec.dim > kMaxDim) throw ResourceError("map dimension exceeds evaluator limit");
    dim = spec.dim;
    if (spec.kind == MapSpec::Kind::Conjugated) {
        conjugated = true;
        inner = std::make_unique<Impl>();
        inner->p = p;
        inner->table_budget = table_budget;
        inner->build(spec.components.front());
        int n = dim + 1;
        alpha_mod = matrix_mod(spec.alpha, p);
        bool nonzero = false;
        for (u64 v : alpha_mod) nonzero |= (v != 0);
        if (!nonzero) throw BadReductionError("alpha vanishes mod p");
        alpha_inv = matrix_inverse_mod(alpha_mod, n, p);
        affine_linear = spec.alpha.is_affine_linear() && alpha_mod[(size_t)n * n - 1] != 0;
        if (affine_linear) {
            // scale so the bottom-right entry is 1, then split off A and b
            u64 s = inv_mod(alpha_mod[(size_t)n * n - 1], p);
            u64 si = inv_mod(alpha_inv[(size_t)n * n - 1], p);
            A.assign((size_t)dim * dim, 0);
            Ai.assign((size_t)dim * dim, 0);
            bvec.assign(dim, 0);
            bivec.assign(dim, 0);
            for (int r = 0; r < dim; ++r) {
                for (int c = 0; c < dim; ++c) {
                    A[(size_t)r * dim + c] = mul_mod(alpha_mod[(size_t)r * n + c], s, p);
                    Ai[(size_t)r * dim + c] = mul_mod(alpha_inv[(size_t)r * n + c], si, p);
                }
                bvec[r] = mul_mod(alpha_mod[(size_t)r * n + dim], s, p);
                bivec[r] = mul_mod(alpha_inv[(size_t)r * n + dim], si, p);
            }
        }
        return;
    }

    // Plain blocks: a non-split spec is a single block.
    std::vector<const MapSpec*> comps;
    if (spec.kind == MapSpec::Kind::Split) {
        for (const auto& c : spec.components) comps.push_back(&c);
    } else {
        comps.push_back(&spec);
    }
    int offset = 0;
    for (const MapSpec* c : comps) {
        Block b;
        b.kind = c->kind;
        b.offset = offset;
        b.width = c->dim;
        b.degree = c->degree;
        if (c->kind == MapSpec::Kind::Poly) {
            b.coeffs.resize(c->coeffs.size());
            for (size_t i = 0; i < c->coeffs.size(); ++i) b.coeffs[i] = reduce_mod(c->coeffs[i], p);
            b.lead = b.coeffs.back();
            if (c->coeffs.size() > 1 && b.lead == 0)
                throw BadReductionError("poly leading coefficient vanishes mod p");
        } else if (c->kind == MapSpec::Kind::Random) {
            u128 n = 1;
            for (int i = 0; i < c->dim; ++i) {
                n *= p;
                if (n > table_budget) throw ResourceError("random block table exceeds budget");
            }
            u64 size = (u64)n;
            b.table.resize(size);
            // Uniform image table, stream keyed by (seed, p, k). Identical
            // keys reproduce the identical table.
            u64 state = c->seed;
            state ^= splitmix64(state) + 0x632be59bd9b4e019ULL * p + 0x9e3779b97f4a7c15ULL * (u64)c->dim;
            const u64 bound = UINT64_MAX - UINT64_MAX % size;
            for (u64 i = 0; i < size; ++i) {
                // rejection sampling keeps the table exactly uniform
                u64 draw;
                do {
                    draw = splitmix64(state);
                } while (draw >= bound);
                b.table[i] = draw % size;
            }
        }
        offset += c->dim;
        blocks.push_back(std::move(b));
    }
}

void Evaluator::Impl::eval_affine(std::span<const u64> in, std::span<u64> out) const {
    if (conjugated) {
        if (affine_linear) {
            u64 t[kMaxDim], u[kMaxDim];
            for (int r = 0; r < dim; ++r) {
                u64 acc = bvec[r];
                for (int c = 0; c < dim; ++c) acc = add_mod(acc, mul_mod(A[(size_t)r * dim + c], in[c], p), p);
                t[r] = acc;
            }
            inner->eval_affine({t, (size_t)dim}, {u, (size_t)dim});
            for (int r = 0; r < dim; ++r) {
                u64 acc = bivec[r];
                for (int c = 0; c < dim; ++c) acc = add_mod(acc, mul_mod(Ai[(size_t)r * dim + c], u[c], p), p);
                out[r] = acc;
            }
            return;
        }
        // General alpha: run the projective computation on the lift (x : 1)
        // and require the image to be affine again.
        u64 h[kMaxDim + 1], img[kMaxDim + 1];
        for (int i = 0; i < dim; ++i) h[i] = in[i];
        h[dim] = 1;
        eval_homogeneous({h, (size_t)dim + 1}, {img, (size_t)dim + 1});
        if (img[dim] % p == 0)
            throw std::domain_error("conjugated map sends affine point to infinity");
        u64 s = inv_mod(img[dim], p);
        for (int i = 0; i < dim; ++i) out[i] = mul_mod(img[i], s, p);
        return;
    }
    for (const Block& b : blocks) {
        if (b.width == 1) {
            u64 z = in[b.offset];
            switch (b.kind) {
                case MapSpec::Kind::Power:
                    out[b.offset] = pow_mod(z, b.degree, p);
                    break;
                case MapSpec::Kind::Chebyshev:
                    out[b.offset] = eval_cheby(b.degree, z, p);
                    break;
                case MapSpec::Kind::Poly: {
                    u64 acc = 0;
                    for (size_t i = b.coeffs.size(); i-- > 0;) acc = add_mod(mul_mod(acc, z, p), b.coeffs[i], p);
                    out[b.offset] = acc;
                    break;
                }
                case MapSpec::Kind::Random:
                    out[b.offset] = b.table[z];
                    break;
                default:
                    throw std::logic_error("unexpected block kind");
            }
        } else {
            // k-dimensional random block: index by base-p digits
            u64 idx = 0;
            for (int i = b.width - 1; i >= 0; --i) idx = idx * p + in[b.offset + i];
            u64 img = b.table[idx];
            for (int i = 0; i < b.width; ++i) {
                out[b.offset + i] = img % p;
                img /= p;
            }
        }
    }
}

void Evaluator::Impl::eval_homogeneous(std::span<const u64> in, std::span<u64> out) const {
    const int n = dim + 1;
    if (conjugated) {
        u64 u[kMaxDim + 1], y[kMaxDim + 1];
        matrix_apply(alpha_mod, n, in, {u, (size_t)n}, p);
        inner->eval_homogeneous({u, (size_t)n}, {y, (size_t)n});
        matrix_apply(alpha_inv, n, {y, (size_t)n}, out, p);
        return;
    }
    u64 w = in[dim] % p;
    if (w != 0) {
        // scale into the affine chart, evaluate, re-embed
        u64 aff[kMaxDim], img[kMaxDim];
        u64 s = (w == 1) ? 1 : inv_mod(w, p);
        for (int i = 0; i < dim; ++i) aff[i] = (w == 1) ? in[i] % p : mul_mod(in[i] % p, s, p);
        eval_affine({aff, (size_t)dim}, {img, (size_t)dim});
        for (int i = 0; i < dim; ++i) out[i] = img[i];
        out[dim] = 1;
        return;
    }
    // Hyperplane at infinity: each coordinate maps by lead * z^d.
    for (const Block& b : blocks) {
        for (int i = 0; i < b.width; ++i) {
            u64 z = in[b.offset + i] % p;
            out[b.offset + i] = mul_mod(b.lead, pow_mod(z, b.degree, p), p);
        }
    }
    out[dim] = 0;
}

Evaluator::Evaluator(const MapSpec& spec, u64 p, u64 table_budget) : impl_(std::make_unique<Impl>()) {
    if (p < 2 || !arith::is_prime(p)) throw std::invalid_argument("Evaluator: p must be prime");
    impl_->p = p;
    impl_->table_budget = table_budget;
    impl_->build(spec);
}

Evaluator::~Evaluator() = default;
Evaluator::Evaluator(Evaluator&&) noexcept = default;
Evaluator& Evaluator::operator=(Evaluator&&) noexcept = default;

u64 Evaluator::p() const { return impl_->p; }
int Evaluator::dim() const { return impl_->dim; }

u64 Evaluator::affine_index(u64 index) const {
    const int dim = impl_->dim;
    const u64 p = impl_->p;
    u64 in[Impl::kMaxDim], out[Impl::kMaxDim];
    for (int i = 0; i < dim; ++i) {
        in[i] = index % p;
        index /= p;
    }
    impl_->eval_affine({in, (size_t)dim}, {out, (size_t)dim});
    u64 enc = 0;
    for (int i = dim - 1; i >= 0; --i) enc = enc * p + out[i];
    return enc;
}

u64 Evaluator::projective_index(u64 index) const {
    SpaceDesc s = SpaceDesc::projective(impl_->dim, impl_->p);
    const int n = impl_->dim + 1;
    u64 in[Impl::kMaxDim + 1], out[Impl::kMaxDim + 1];
    // chart of the normalized representative = position of its trailing 1
    u64 offset = 0, chart_size = 1;
    int chart = 0;
    while (index >= offset + chart_size) {
        offset += chart_size;
        chart_size *= impl_->p;
        if (++chart > impl_->dim) throw std::out_of_range("projective index outside space");
    }
    u64 rem = index - offset;
    for (int i = 0; i < n; ++i) in[i] = 0;
    for (int i = 0; i < chart; ++i) {
        in[i] = rem % impl_->p;
        rem /= impl_->p;
    }
    in[chart] = 1;
    impl_->eval_homogeneous({in, (size_t)n}, {out, (size_t)n});
    return encode_point(s, {out, (size_t)n});
}

void Evaluator::affine(std::span<const u64> in, std::span<u64> out) const {
    if ((int)in.size() != impl_->dim || (int)out.size() != impl_->dim)
        throw std::invalid_argument("Evaluator::affine: dimension mismatch");
    impl_->eval_affine(in, out);
}

PointIndex eval_affine(const MapSpec& spec, const PointIndex& pt, u64 p) {
    if (pt.space != Space::Affine || pt.dim != spec.dim)
        throw std::invalid_argument("eval_affine: point/space mismatch");
    Evaluator ev(spec, p);
    return {Space::Affine, spec.dim, ev.affine_index(pt.index)};
}

PointIndex eval_projective(const MapSpec& spec, const PointIndex& pt, u64 p) {
    if (pt.space != Space::Projective || pt.dim != spec.dim)
        throw std::invalid_argument("eval_projective: point/space mismatch");
    Evaluator ev(spec, p);
    return {Space::Projective, spec.dim, ev.projective_index(pt.index)};
}

}  // namespace fgraph::maps
