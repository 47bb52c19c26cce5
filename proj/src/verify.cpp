#include "diffspec/verify.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <random>
#include <sstream>
#include <thread>

namespace diffspec {

namespace {

// Digitwise negation on enumeration indexes (indexes encode base-p
// coefficient vectors), mirroring the field's element-level negation without
// decoding into FieldElement.
uint64_t index_neg_digits(uint64_t p, uint32_t n, uint64_t ia) {
    uint64_t out = 0;
    uint64_t mult = 1;
    for (uint32_t i = 0; i < n; ++i) {
        const uint64_t da = ia % p;
        ia /= p;
        out += (da == 0 ? 0 : p - da) * mult;
        mult *= p;
    }
    return out;
}

std::string spectrum_str(const Spectrum& s) {
    std::ostringstream os;
    os << '[';
    for (size_t i = 0; i < s.omega.size(); ++i) {
        if (i) os << ", ";
        os << s.omega[i];
    }
    os << ']';
    return os.str();
}

void push_check(std::vector<CheckResult>& checks, std::string name, bool ok,
                std::string detail) {
    CheckResult c;
    c.name = std::move(name);
    c.ok = ok;
    if (!ok) c.detail = std::move(detail);
    checks.push_back(std::move(c));
}

// Histogram over b of the rational form of the derivative map,
//   b = -(2x+1) / (x(x+1))^2   for x outside {0, -1},
// with the inverse square taken from the x -> x^(q-3) lookup table.  For
// every nonzero b this counts exactly the roots of the quartic
// x^4 + 2x^3 + x^2 + b^{-1}(2x+1) (clearing denominators is invertible and
// the excluded x are never roots), and the x with 2x+1 = 0 lands on b = 0.
std::vector<uint32_t> quartic_histogram(const FieldCtx& ctx,
                                        const PowerTable& pt) {
    const uint64_t q = ctx.order();
    std::vector<uint32_t> th(q, 0);
    const uint32_t* pd = pt.pow_d.data();
    if (ctx.n() == 1) {
        const uint64_t p = q;
        for (uint64_t x = 1; x + 1 < p; ++x) {
            const uint64_t u = mul_mod(x, x + 1, p);  // x(x+1), never 0 here
            uint64_t t = 2 * x + 1;
            if (t >= p) t -= p;
            const uint64_t b = mul_mod(t, pd[u], p);
            ++th[b == 0 ? 0 : p - b];
        }
    } else {
        const FieldElement one = ctx.one();
        for (uint64_t ix = 1; ix < q; ++ix) {
            const uint64_t ixp1 = ctx.index_add_one(ix);
            if (ixp1 == 0) continue;  // x = -1
            const FieldElement x = ctx.element_at(ix);
            const FieldElement u = ctx.mul(x, ctx.element_at(ixp1));
            const FieldElement uinv2 = ctx.element_at(pd[ctx.index_of(u)]);
            const FieldElement t = ctx.add(ctx.add(x, x), one);
            ++th[ctx.index_of(ctx.neg(ctx.mul(t, uinv2)))];
        }
    }
    uint64_t total = 0;
    for (uint32_t c : th) total += c;
    if (total != q - 2) {
        throw InternalError("quartic histogram lost elements");
    }
    return th;
}

}  // namespace

cpp_int table_charsum(const FieldCtx& ctx, const EtaTable& eta,
                      CharSumKind which) {
    const uint64_t q = ctx.order();
    if (eta.eta.size() != q) {
        throw InternalError("character table size does not match the field");
    }
    const int8_t* et = eta.eta.data();
    int64_t sum = 0;
    if (ctx.n() == 1) {
        const uint64_t p = q;
        const uint64_t r3 = 3 % p;
        const uint64_t r4 = 4 % p;
        switch (which) {
            case CharSumKind::gamma:
                for (uint64_t x = 0; x < p; ++x) {
                    const uint64_t a = mul_mod(mul_mod(x, (x + p - 1) % p, p),
                                               (x + r3) % p, p);
                    sum += et[a];
                }
                break;
            case CharSumKind::lambda1:
                for (uint64_t x = 0; x < p; ++x) {
                    const uint64_t x2 = mul_mod(x, x, p);
                    const uint64_t first = (x2 + p - r4) % p;
                    const uint64_t second =
                        (2 * p - (mul_mod(r3, x2, p) + r4) % p) % p;
                    sum += et[mul_mod(first, second, p)];
                }
                break;
            case CharSumKind::lambda2:
                for (uint64_t x = 0; x < p; ++x) {
                    const uint64_t x2 = mul_mod(x, x, p);
                    const uint64_t first = (x2 + 1) % p;
                    const uint64_t second = (x2 + mul_mod(r4, x, p) + 1) % p;
                    sum += et[mul_mod(first, second, p)];
                }
                break;
        }
    } else {
        const FieldElement one = ctx.one();
        const FieldElement three = ctx.embed(3);
        const FieldElement four = ctx.embed(4);
        for (uint64_t i = 0; i < q; ++i) {
            const FieldElement x = ctx.element_at(i);
            FieldElement arg;
            switch (which) {
                case CharSumKind::gamma:
                    arg = ctx.mul(ctx.mul(x, ctx.sub(x, one)),
                                  ctx.add(x, three));
                    break;
                case CharSumKind::lambda1: {
                    const FieldElement x2 = ctx.mul(x, x);
                    arg = ctx.mul(ctx.sub(x2, four),
                                  ctx.neg(ctx.add(ctx.mul(three, x2), four)));
                    break;
                }
                case CharSumKind::lambda2: {
                    const FieldElement x2 = ctx.mul(x, x);
                    arg = ctx.mul(ctx.add(x2, one),
                                  ctx.add(x2, ctx.add(ctx.mul(four, x), one)));
                    break;
                }
            }
            sum += et[ctx.index_of(arg)];
        }
    }
    return cpp_int(sum);
}

bool FieldVerification::ok() const {
    for (const CheckResult& c : checks) {
        if (!c.ok) return false;
    }
    return true;
}

FieldVerification verify_field(uint64_t p, uint32_t n, uint64_t max_order,
                               const VerifyOptions& options) {
    const FieldCtx F = FieldCtx::make(p, n, max_order);
    const uint64_t q = F.order();

    FieldVerification out;
    out.p = p;
    out.n = n;
    out.order = q;
    std::vector<CheckResult>& checks = out.checks;

    const SpectrumReport closed = closed_spectrum(p, n);
    const cpp_int d = cpp_int(q) - 3;

    const PowerTable pt = PowerTable::build(F, d);
    const DiffHistogram hist = DiffHistogram::build(F, pt, options.workers);
    const Spectrum brute = hist.to_spectrum();
    const EtaTable etab = EtaTable::build(F);

    push_check(checks, "spectrum_equal", spectra_equal(brute, closed.spectrum),
               "brute " + spectrum_str(brute) + " vs closed " +
                   spectrum_str(closed.spectrum));

    push_check(checks, "center_single_solution", hist.counts[0] == 1,
               "N(0) = " + std::to_string(hist.counts[0]));

    {
        bool sym = true;
        uint64_t bad = 0;
        if (n == 1) {
            for (uint64_t b = 1; 2 * b <= q; ++b) {
                if (hist.counts[b] != hist.counts[q - b]) {
                    sym = false;
                    bad = b;
                    break;
                }
            }
        } else {
            for (uint64_t b = 1; b < q; ++b) {
                if (hist.counts[b] != hist.counts[index_neg_digits(p, n, b)]) {
                    sym = false;
                    bad = b;
                    break;
                }
            }
        }
        push_check(checks, "nb_symmetry", sym,
                   "N(b) != N(-b) at index " + std::to_string(bad));
    }

    push_check(checks, "delta_le_5", brute.delta() <= 5,
               "delta = " + std::to_string(brute.delta()));

    {
        const bool ok =
            brute.sum() == q && brute.first_moment() == q;
        std::ostringstream os;
        os << "sum = " << brute.sum() << ", first moment = "
           << brute.first_moment() << ", q = " << q;
        push_check(checks, "moment_identities", ok, os.str());
    }

    auto charsum_check = [&](const char* name, CharSumKind kind,
                             const std::optional<cpp_int>& expected) {
        const cpp_int table = table_charsum(F, etab, kind);
        std::ostringstream os;
        os << "table " << table << " vs closed ";
        if (expected) {
            os << *expected;
        } else {
            os << "(missing)";
        }
        push_check(checks, name, expected && table == *expected, os.str());
    };
    if (p >= 5) charsum_check("charsum_gamma", CharSumKind::gamma, closed.gamma);
    charsum_check("charsum_lambda1", CharSumKind::lambda1, closed.lambda1);
    charsum_check("charsum_lambda2", CharSumKind::lambda2, closed.lambda2);

    {
        const cpp_int enumerated = count_set_A(F, etab);
        const cpp_int formula = set_a_size(p, n);
        std::ostringstream os;
        os << "enumerated " << enumerated << " vs closed " << formula;
        push_check(checks, "set_a", enumerated == formula, os.str());
    }

    {
        SpectrumReport br;
        br.p = p;
        br.n = n;
        br.d = d;
        br.spectrum = brute;
        br.method = kMethodBruteForce;
        const cpp_int m_formula = big_m(p, n).value;
        const cpp_int m_brute = m_from_spectrum(br).value;
        const cpp_int m_closed = m_from_spectrum(closed).value;
        const bool ok = m_formula == m_brute && m_formula == m_closed &&
                        closed.m && *closed.m == m_formula;
        std::ostringstream os;
        os << "formula " << m_formula << ", brute moments " << m_brute
           << ", closed moments " << m_closed;
        push_check(checks, "m_three_ways", ok, os.str());
    }

    const std::vector<uint32_t> th = quartic_histogram(F, pt);
    const uint64_t idx_one = F.index_of(F.one());
    const uint64_t idx_minus_one = F.index_of(F.embed(-1));
    {
        bool ok = true;
        uint64_t bad = 0;
        for (uint64_t b = 0; b < q; ++b) {
            const uint32_t expected =
                th[b] + (b == idx_one ? 1 : 0) + (b == idx_minus_one ? 1 : 0);
            if (hist.counts[b] != expected) {
                ok = false;
                bad = b;
                break;
            }
        }
        push_check(checks, "quartic_correspondence", ok,
                   "N(b) != quartic count + boundary at index " +
                       std::to_string(bad));
    }

    {
        const bool ok = closed.t1_count &&
                        th[idx_one] == static_cast<uint32_t>(*closed.t1_count);
        std::ostringstream os;
        os << "quartic histogram at b = 1 gives " << th[idx_one]
           << " vs closed "
           << (closed.t1_count ? std::to_string(*closed.t1_count)
                               : std::string("(missing)"));
        push_check(checks, "t1_quartic", ok, os.str());
    }

    {
        const uint64_t budget = std::max<uint64_t>(options.sample_budget, 1);
        const uint64_t samples =
            std::clamp<uint64_t>(budget / (2 * q), 2, 200);
        std::mt19937_64 rng(options.rng_seed ^
                            (q * 0x9E3779B97F4A7C15ULL) ^ n);
        std::uniform_int_distribution<uint64_t> dist(1, q - 1);
        bool ok = true;
        std::string detail;
        for (uint64_t s = 0; s < samples && ok; ++s) {
            const uint64_t ib = dist(rng);
            const FieldElement b = F.element_at(ib);
            const int literal = count_gb_roots(F, b);
            const int literal_neg = count_gb_roots(F, F.neg(b));
            if (static_cast<uint64_t>(literal) != th[ib]) {
                ok = false;
                detail = "literal root count " + std::to_string(literal) +
                         " vs histogram " + std::to_string(th[ib]) +
                         " at index " + std::to_string(ib);
            } else if (literal_neg != literal) {
                ok = false;
                detail = "root counts differ between b and -b at index " +
                         std::to_string(ib) + ": " + std::to_string(literal) +
                         " vs " + std::to_string(literal_neg);
            }
        }
        push_check(checks, "quartic_sampled", ok, std::move(detail));
    }

    if (p >= 5) {
        const bool ok =
            closed.gamma && (*closed.gamma) * (*closed.gamma) <= 4 * cpp_int(q);
        std::ostringstream os;
        if (closed.gamma) {
            os << "gamma = " << *closed.gamma << ", q = " << q;
        } else {
            os << "gamma missing";
        }
        push_check(checks, "weil_bound", ok, os.str());
    }

    if (p == 3 || p == 5 || p == 7) {
        const SpectrumReport cor = corollary_spectrum(p, n);
        const bool ok = spectra_equal(cor.spectrum, closed.spectrum) &&
                        cor.m && closed.m && *cor.m == *closed.m;
        push_check(checks, "corollary_agreement", ok,
                   "corollary " + spectrum_str(cor.spectrum) + " vs closed " +
                       spectrum_str(closed.spectrum));
    }

    return out;
}

std::vector<std::pair<uint64_t, uint32_t>> sweep_fields(uint64_t max_order) {
    std::vector<std::pair<uint64_t, uint32_t>> fields;  // (order, n) per entry
    if (max_order <= 3) return {};
    const uint32_t limit =
        static_cast<uint32_t>(std::min<uint64_t>(max_order, 0xFFFFFFFFu));
    std::vector<std::pair<uint64_t, std::pair<uint64_t, uint32_t>>> keyed;
    for (uint32_t prime : primes_up_to(limit)) {
        if (prime == 2) continue;
        uint64_t q = prime;
        uint32_t n = 1;
        while (q <= max_order) {
            if (q > 3) keyed.push_back({q, {prime, n}});
            if (q > max_order / prime) break;
            q *= prime;
            ++n;
        }
    }
    std::sort(keyed.begin(), keyed.end());
    std::vector<std::pair<uint64_t, uint32_t>> out;
    out.reserve(keyed.size());
    for (const auto& k : keyed) out.push_back(k.second);
    return out;
}

SweepSummary sweep_verify(
    uint64_t max_order, const VerifyOptions& options,
    const std::function<void(const FieldVerification&)>& per_field) {
    const std::vector<std::pair<uint64_t, uint32_t>> fields =
        sweep_fields(max_order);

    std::vector<FieldVerification> results(fields.size());
    const unsigned workers = std::clamp(options.workers, 1u, 64u);

    if (workers == 1 || fields.size() < 2) {
        for (size_t i = 0; i < fields.size(); ++i) {
            results[i] =
                verify_field(fields[i].first, fields[i].second, max_order,
                             options);
        }
    } else {
        // Parallelize across fields; inside each field stay single-threaded
        // so the battery itself is not oversubscribed.
        VerifyOptions field_options = options;
        field_options.workers = 1;
        std::atomic<size_t> next{0};
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (size_t i = next.fetch_add(1); i < fields.size();
                         i = next.fetch_add(1)) {
                        results[i] = verify_field(fields[i].first,
                                                  fields[i].second, max_order,
                                                  field_options);
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (std::thread& t : pool) t.join();
        for (const std::exception_ptr& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    SweepSummary summary;
    summary.fields = results.size();
    for (const FieldVerification& v : results) {
        summary.checks += v.checks.size();
        uint64_t failed = 0;
        for (const CheckResult& c : v.checks) {
            if (!c.ok) ++failed;
        }
        summary.failed_checks += failed;
        if (failed > 0) summary.failures.push_back(v);
        if (per_field) per_field(v);
    }
    return summary;
}

}  // namespace diffspec
