#include "diffspec/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <thread>
#include <utility>

#include "diffspec/errors.hpp"

namespace diffspec {

namespace {

// Digitwise base-p index arithmetic: indexes encode coefficient vectors, so
// elementwise modular ops can run directly on them without decoding into
// FieldElement (no allocations in the hot loops).
uint64_t index_sub(uint64_t p, uint32_t n, uint64_t ia, uint64_t ib) {
    uint64_t out = 0;
    uint64_t mult = 1;
    for (uint32_t i = 0; i < n; ++i) {
        const uint64_t da = ia % p;
        const uint64_t db = ib % p;
        ia /= p;
        ib /= p;
        uint64_t dc = da + p - db;
        if (dc >= p) dc -= p;
        out += dc * mult;
        mult *= p;
    }
    return out;
}

uint64_t index_neg(uint64_t p, uint32_t n, uint64_t ia) {
    return index_sub(p, n, 0, ia);
}

// Pollard's rho (Brent variant) for the rare cofactor whose prime factors all
// exceed the trial-division bound; m must be composite and odd.
uint64_t pollard_rho(uint64_t m) {
    for (uint64_t c = 1;; ++c) {
        uint64_t x = 2;
        uint64_t y = 2;
        uint64_t d = 1;
        while (d == 1) {
            x = (mul_mod(x, x, m) + c) % m;
            y = (mul_mod(y, y, m) + c) % m;
            y = (mul_mod(y, y, m) + c) % m;
            d = std::gcd(x > y ? x - y : y - x, m);
        }
        if (d != m) return d;  // proper factor found
    }
}

void push_factor(uint64_t f, std::vector<uint64_t>& out) {
    if (is_prime(f)) {
        out.push_back(f);
        return;
    }
    uint64_t d = pollard_rho(f);
    push_factor(d, out);
    uint64_t rest = f;
    while (rest % d == 0) rest /= d;
    if (rest > 1) push_factor(rest, out);
}

}  // namespace

std::vector<uint64_t> distinct_prime_factors(uint64_t m) {
    if (m < 2) {
        throw UnsupportedInputError("factorization requires m >= 2");
    }
    std::vector<uint64_t> out;
    for (uint64_t d : {uint64_t{2}, uint64_t{3}, uint64_t{5}}) {
        if (m % d == 0) {
            out.push_back(d);
            while (m % d == 0) m /= d;
        }
    }
    for (uint64_t d = 7; d <= 65535 && d * d <= m; d += 2) {
        if (m % d == 0) {
            out.push_back(d);
            while (m % d == 0) m /= d;
        }
    }
    if (m > 1) {
        push_factor(m, out);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

FieldElement find_generator(const FieldCtx& ctx) {
    const uint64_t q = ctx.order();
    const std::vector<uint64_t> factors = distinct_prime_factors(q - 1);
    const FieldElement one = ctx.one();
    for (uint64_t idx = 2; idx < q; ++idx) {
        FieldElement cand = ctx.element_at(idx);
        bool full_order = true;
        for (uint64_t f : factors) {
            if (ctx.pow(cand, cpp_int((q - 1) / f)) == one) {
                full_order = false;
                break;
            }
        }
        if (full_order) return cand;
    }
    throw InternalError("no multiplicative generator found");
}

// ---------------------------------------------------------------------------
// PowerTable
// ---------------------------------------------------------------------------

namespace {

constexpr uint32_t kUnfilled = UINT32_MAX;

void check_index_width(const FieldCtx& ctx) {
    if (ctx.order() > (uint64_t{1} << 32)) {
        throw CapExceededError("field order exceeds the 32-bit table limit");
    }
}

uint64_t reduce_exponent(const cpp_int& d, uint64_t group_order) {
    if (d < 0) {
        throw UnsupportedInputError("power table exponent must be nonnegative");
    }
    return static_cast<uint64_t>(d % group_order);
}

void check_filled(const std::vector<uint32_t>& pow_d) {
    for (size_t i = 1; i < pow_d.size(); ++i) {
        if (pow_d[i] == kUnfilled) {
            throw InternalError("power-table walk missed an element "
                                "(generator without full order?)");
        }
    }
}

}  // namespace

PowerTable PowerTable::build(const FieldCtx& ctx, const cpp_int& d) {
    check_index_width(ctx);
    const uint64_t q = ctx.order();
    const uint64_t dr = reduce_exponent(d, q - 1);

    PowerTable pt;
    pt.generator = find_generator(ctx);
    pt.pow_d.assign(q, kUnfilled);
    pt.pow_d[0] = (d == 0) ? ctx.index_of(ctx.one()) : 0;

    if (ctx.n() == 1) {
        const uint64_t p = ctx.p();
        const uint64_t g = pt.generator.coeffs[0];
        const uint64_t gd = pow_mod(g, dr, p);
        uint64_t cur = 1;
        uint64_t curd = 1;
        for (uint64_t k = 0; k + 1 < q; ++k) {
            pt.pow_d[cur] = static_cast<uint32_t>(curd);
            cur = mul_mod(cur, g, p);
            curd = mul_mod(curd, gd, p);
        }
    } else {
        const FieldElement gd = ctx.pow(pt.generator, cpp_int(dr));
        FieldElement cur = ctx.one();
        FieldElement curd = ctx.one();
        for (uint64_t k = 0; k + 1 < q; ++k) {
            pt.pow_d[ctx.index_of(cur)] = static_cast<uint32_t>(ctx.index_of(curd));
            cur = ctx.mul(cur, pt.generator);
            curd = ctx.mul(curd, gd);
        }
    }
    check_filled(pt.pow_d);
    return pt;
}

PowerTable PowerTable::build_by_powmod(const FieldCtx& ctx, const cpp_int& d) {
    check_index_width(ctx);
    if (d < 0) {
        throw UnsupportedInputError("power table exponent must be nonnegative");
    }
    const uint64_t q = ctx.order();
    PowerTable pt;
    pt.generator = find_generator(ctx);
    pt.pow_d.assign(q, kUnfilled);
    for (uint64_t idx = 0; idx < q; ++idx) {
        pt.pow_d[idx] =
            static_cast<uint32_t>(ctx.index_of(ctx.pow(ctx.element_at(idx), d)));
    }
    return pt;
}

// ---------------------------------------------------------------------------
// EtaTable
// ---------------------------------------------------------------------------

EtaTable EtaTable::build(const FieldCtx& ctx) {
    check_index_width(ctx);
    const uint64_t q = ctx.order();
    EtaTable t;
    t.eta.assign(q, -1);
    t.eta[0] = 0;
    if (ctx.n() == 1) {
        const uint64_t p = ctx.p();
        for (uint64_t z = 1; z < p; ++z) {
            t.eta[mul_mod(z, z, p)] = 1;
        }
    } else {
        for (uint64_t idx = 1; idx < q; ++idx) {
            const FieldElement z = ctx.element_at(idx);
            t.eta[ctx.index_of(ctx.mul(z, z))] = 1;
        }
    }
    const uint64_t squares =
        static_cast<uint64_t>(std::count(t.eta.begin(), t.eta.end(), int8_t{1}));
    if (squares != (q - 1) / 2) {
        throw InternalError("square census is not (q-1)/2");
    }
    return t;
}

// ---------------------------------------------------------------------------
// DiffHistogram
// ---------------------------------------------------------------------------

namespace {

// Histogram kernel over the index range [lo, hi).
void histogram_range(const FieldCtx& ctx, const std::vector<uint32_t>& pd,
                     uint64_t lo, uint64_t hi, std::vector<uint32_t>& counts) {
    if (ctx.n() == 1) {
        const uint64_t p = ctx.p();
        for (uint64_t x = lo; x < hi; ++x) {
            const uint64_t xp1 = (x + 1 == p) ? 0 : x + 1;
            uint64_t t = pd[xp1] + p - pd[x];
            if (t >= p) t -= p;
            ++counts[t];
        }
    } else {
        const uint64_t p = ctx.p();
        const uint32_t n = ctx.n();
        for (uint64_t x = lo; x < hi; ++x) {
            const uint64_t xp1 = ctx.index_add_one(x);
            ++counts[index_sub(p, n, pd[xp1], pd[x])];
        }
    }
}

}  // namespace

DiffHistogram DiffHistogram::build(const FieldCtx& ctx, const PowerTable& pt,
                                   unsigned workers) {
    const uint64_t q = ctx.order();
    if (pt.pow_d.size() != q) {
        throw InternalError("power table size does not match the field order");
    }
    DiffHistogram h;
    h.counts.assign(q, 0);

    workers = std::clamp(workers, 1u, 64u);
    if (workers == 1 || q < 4 * workers) {
        histogram_range(ctx, pt.pow_d, 0, q, h.counts);
    } else {
        std::vector<std::vector<uint32_t>> locals(workers);
        std::vector<std::thread> threads;
        threads.reserve(workers);
        const uint64_t chunk = (q + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const uint64_t lo = w * chunk;
            const uint64_t hi = std::min(q, lo + chunk);
            locals[w].assign(q, 0);
            threads.emplace_back([&ctx, &pt, lo, hi, &local = locals[w]] {
                histogram_range(ctx, pt.pow_d, lo, hi, local);
            });
        }
        for (auto& t : threads) t.join();
        for (const auto& local : locals) {
            for (uint64_t b = 0; b < q; ++b) h.counts[b] += local[b];
        }
    }

    uint64_t total = 0;
    for (uint32_t c : h.counts) total += c;
    if (total != q) {
        throw InternalError("histogram does not conserve the x count");
    }
    return h;
}

Spectrum DiffHistogram::to_spectrum() const {
    uint32_t max_mult = 0;
    for (uint32_t c : counts) max_mult = std::max(max_mult, c);
    std::vector<uint64_t> tally(static_cast<size_t>(max_mult) + 1, 0);
    for (uint32_t c : counts) ++tally[c];
    Spectrum s;
    s.omega.assign(tally.begin(), tally.end());
    return s;
}

// ---------------------------------------------------------------------------
// Counters
// ---------------------------------------------------------------------------

SpectrumReport brute_spectrum(const FieldCtx& ctx, const cpp_int& d,
                              unsigned workers) {
    if (d < 1) {
        throw UnsupportedInputError("spectrum exponent must be >= 1");
    }
    const uint64_t q = ctx.order();
    const PowerTable pt = PowerTable::build(ctx, d);
    const DiffHistogram h = DiffHistogram::build(ctx, pt, workers);

    const bool target_exponent = (d == cpp_int(q) - 3);
    if (target_exponent) {
        if (h.counts[0] != 1) {
            throw InternalError("derivative equation at b = 0 must have exactly "
                                "one solution for d = q - 3");
        }
        const uint64_t p = ctx.p();
        const uint32_t n = ctx.n();
        if (n == 1) {
            for (uint64_t b = 1; b < q; ++b) {
                if (h.counts[b] != h.counts[q - b]) {
                    throw InternalError("N(b) = N(-b) symmetry violated");
                }
            }
        } else {
            for (uint64_t b = 1; b < q; ++b) {
                if (h.counts[b] != h.counts[index_neg(p, n, b)]) {
                    throw InternalError("N(b) = N(-b) symmetry violated");
                }
            }
        }
    }

    SpectrumReport r;
    r.p = ctx.p();
    r.n = ctx.n();
    r.d = d;
    r.spectrum = h.to_spectrum();
    r.method = kMethodBruteForce;
    r.m = m_from_spectrum(r).value;
    if (target_exponent && r.spectrum.delta() > 5) {
        throw InternalError("differential uniformity exceeds 5 for d = q - 3");
    }
    return r;
}

uint64_t count_nb(const FieldCtx& ctx, const FieldElement& b, const cpp_int& d) {
    if (d < 1) {
        throw UnsupportedInputError("derivative exponent must be >= 1");
    }
    const FieldElement one = ctx.one();
    uint64_t count = 0;
    for (uint64_t idx = 0; idx < ctx.order(); ++idx) {
        const FieldElement x = ctx.element_at(idx);
        const FieldElement lhs =
            ctx.sub(ctx.pow(ctx.add(x, one), d), ctx.pow(x, d));
        if (lhs == b) ++count;
    }
    return count;
}

int count_gb_roots(const FieldCtx& ctx, const FieldElement& b) {
    if (ctx.is_zero(b)) {
        throw ZeroArgumentError("the quartic is undefined for b = 0");
    }
    int roots = 0;
    if (ctx.n() == 1) {
        const uint64_t p = ctx.p();
        const uint64_t binv = inv_mod(b.coeffs[0], p);
        for (uint64_t x = 0; x < p; ++x) {
            const uint64_t u = mul_mod(x, (x + 1) % p, p);  // x(x+1)
            const uint64_t quartic = mul_mod(u, u, p);      // x^2 (x+1)^2
            const uint64_t linear = mul_mod(binv, (2 * x + 1) % p, p);
            if ((quartic + linear) % p == 0) ++roots;
        }
    } else {
        const FieldElement binv = ctx.inv(b);
        const FieldElement one = ctx.one();
        for (uint64_t idx = 0; idx < ctx.order(); ++idx) {
            const FieldElement x = ctx.element_at(idx);
            const FieldElement u = ctx.mul(x, ctx.add(x, one));
            const FieldElement value = ctx.add(
                ctx.mul(u, u), ctx.mul(binv, ctx.add(ctx.add(x, x), one)));
            if (ctx.is_zero(value)) ++roots;
        }
    }
    return roots;
}

uint64_t count_set_A(const FieldCtx& ctx) {
    const FieldElement four = ctx.embed(4);
    const FieldElement three = ctx.embed(3);
    uint64_t count = 0;
    for (uint64_t idx = 1; idx < ctx.order(); ++idx) {
        const FieldElement a = ctx.element_at(idx);
        const FieldElement sq = ctx.mul(a, a);
        const FieldElement first = ctx.sub(sq, four);
        const FieldElement second = ctx.neg(ctx.add(ctx.mul(three, sq), four));
        if (ctx.eta(first) == 1 && ctx.eta(second) == -1) ++count;
    }
    return count;
}

uint64_t count_set_A(const FieldCtx& ctx, const EtaTable& eta) {
    if (eta.eta.size() != ctx.order()) {
        throw InternalError("character table size does not match the field");
    }
    uint64_t count = 0;
    if (ctx.n() == 1) {
        const uint64_t p = ctx.p();
        const uint64_t r3 = 3 % p;
        const uint64_t r4 = 4 % p;
        for (uint64_t a = 1; a < p; ++a) {
            const uint64_t sq = mul_mod(a, a, p);
            const uint64_t first = (sq + p - r4) % p;
            const uint64_t second = (2 * p - (mul_mod(r3, sq, p) + r4) % p) % p;
            if (eta.eta[first] == 1 && eta.eta[second] == -1) ++count;
        }
    } else {
        const FieldElement four = ctx.embed(4);
        const FieldElement three = ctx.embed(3);
        for (uint64_t idx = 1; idx < ctx.order(); ++idx) {
            const FieldElement a = ctx.element_at(idx);
            const FieldElement sq = ctx.mul(a, a);
            const uint64_t first = ctx.index_of(ctx.sub(sq, four));
            const uint64_t second =
                ctx.index_of(ctx.neg(ctx.add(ctx.mul(three, sq), four)));
            if (eta.eta[first] == 1 && eta.eta[second] == -1) ++count;
        }
    }
    return count;
}

QuadrupleCountM m_from_spectrum(const SpectrumReport& report) {
    const cpp_int q = boost::multiprecision::pow(cpp_int(report.p), report.n);
    return QuadrupleCountM{(q - 1) * report.spectrum.second_moment() + q * q};
}

}  // namespace diffspec
