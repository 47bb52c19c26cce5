#include "doctest.h"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "diffspec/charsum.hpp"
#include "diffspec/closedform.hpp"
#include "diffspec/field.hpp"
#include "diffspec/oracle.hpp"

using namespace diffspec;

namespace {

// Naive factorization oracle: full trial division.
std::vector<uint64_t> naive_distinct_factors(uint64_t m) {
    std::vector<uint64_t> out;
    for (uint64_t d = 2; d * d <= m; ++d) {
        if (m % d == 0) {
            out.push_back(d);
            while (m % d == 0) m /= d;
        }
    }
    if (m > 1) out.push_back(m);
    return out;
}

}  // namespace

TEST_CASE("distinct prime factors match naive trial division") {
    for (uint64_t m = 2; m <= 2000; ++m) {
        CAPTURE(m);
        CHECK(distinct_prime_factors(m) == naive_distinct_factors(m));
    }
    CHECK(distinct_prime_factors(uint64_t{4294967295}) ==
          std::vector<uint64_t>{3, 5, 17, 257, 65537});
    CHECK(distinct_prime_factors(uint64_t{2} * 3 * 5 * 7 * 11 * 13 * 999983) ==
          std::vector<uint64_t>{2, 3, 5, 7, 11, 13, 999983});
    // A cofactor whose prime factors both exceed the trial-division bound.
    CHECK(distinct_prime_factors(uint64_t{1000003} * 1000033) ==
          std::vector<uint64_t>{1000003, 1000033});
    CHECK(distinct_prime_factors(uint64_t{1000003} * 1000003) ==
          std::vector<uint64_t>{1000003});
    CHECK_THROWS_AS(distinct_prime_factors(1), UnsupportedInputError);
}

TEST_CASE("generators have full multiplicative order") {
    for (auto [p, n] : std::vector<std::pair<uint64_t, uint32_t>>{
             {3, 1}, {5, 1}, {7, 1}, {13, 1}, {1009, 1},
             {3, 2}, {3, 3}, {3, 4}, {5, 2}, {5, 3}, {7, 2}, {11, 2}}) {
        CAPTURE(p);
        CAPTURE(n);
        FieldCtx F = FieldCtx::make(p, n);
        FieldElement g = find_generator(F);
        // Walk the powers of g explicitly: 1 must first recur after exactly
        // q - 1 steps.
        FieldElement cur = g;
        uint64_t steps = 1;
        while (!(cur == F.one())) {
            cur = F.mul(cur, g);
            ++steps;
            REQUIRE(steps <= F.order());
        }
        CHECK(steps == F.order() - 1);
    }
}

TEST_CASE("power table: generator walk agrees with per-element exponentiation") {
    std::vector<std::pair<uint64_t, uint32_t>> fields{
        {5, 2}, {3, 3}, {7, 2}, {11, 2}, {3, 4}, {13, 1}, {101, 1}};
    for (auto [p, n] : fields) {
        FieldCtx F = FieldCtx::make(p, n);
        const uint64_t q = F.order();
        for (cpp_int d : {cpp_int(1), cpp_int(2), cpp_int(7), cpp_int(q - 3),
                          cpp_int(q - 2), cpp_int("1000000000000000000000007")}) {
            if (d < 1) continue;
            CAPTURE(p);
            CAPTURE(n);
            CAPTURE(d.str());
            PowerTable walk = PowerTable::build(F, d);
            PowerTable direct = PowerTable::build_by_powmod(F, d);
            CHECK(walk.pow_d == direct.pow_d);
        }
    }
}

TEST_CASE("power table invariants") {
    FieldCtx F = FieldCtx::make(5, 2);
    const uint64_t q = F.order();

    // x -> x^d fixes 0 (positive d) and is a bijection exactly when
    // gcd(d, q-1) = 1.
    PowerTable coprime = PowerTable::build(F, 7);  // gcd(7, 24) = 1
    CHECK(coprime.pow_d[0] == 0);
    std::vector<uint32_t> sorted = coprime.pow_d;
    std::sort(sorted.begin(), sorted.end());
    for (uint64_t i = 0; i < q; ++i) CHECK(sorted[i] == i);

    PowerTable squares = PowerTable::build(F, 2);  // gcd(2, 24) = 2
    std::vector<uint32_t> image = squares.pow_d;
    std::sort(image.begin(), image.end());
    image.erase(std::unique(image.begin(), image.end()), image.end());
    CHECK(image.size() == 1 + (q - 1) / 2);  // 0 plus the squares

    CHECK_THROWS_AS(brute_spectrum(F, 0), UnsupportedInputError);
    CHECK_THROWS_AS(brute_spectrum(F, -4), UnsupportedInputError);
}

TEST_CASE("character table matches the exponentiation character") {
    for (auto [p, n] : std::vector<std::pair<uint64_t, uint32_t>>{
             {5, 2}, {3, 3}, {7, 2}, {13, 1}, {3, 4}, {11, 2}, {997, 1}}) {
        CAPTURE(p);
        CAPTURE(n);
        FieldCtx F = FieldCtx::make(p, n);
        EtaTable t = EtaTable::build(F);
        REQUIRE(t.eta.size() == F.order());
        CHECK(t.eta[0] == 0);
        for (uint64_t idx = 1; idx < F.order(); ++idx) {
            CHECK(static_cast<int>(t.eta[idx]) == F.eta(F.element_at(idx)));
        }
    }
}

TEST_CASE("derivative histogram: conservation, center value, symmetry") {
    FieldCtx F = FieldCtx::make(5, 4);
    PowerTable pt = PowerTable::build(F, 622);
    DiffHistogram h = DiffHistogram::build(F, pt);
    uint64_t total = 0;
    for (uint32_t c : h.counts) total += c;
    CHECK(total == 625);
    // x = -1/2 is the unique solution for b = 0.
    CHECK(h.counts[0] == 1);
    for (uint64_t b = 1; b < 625; ++b) {
        uint64_t negb = F.index_of(F.neg(F.element_at(b)));
        CHECK(h.counts[b] == h.counts[negb]);
    }
}

TEST_CASE("brute spectrum: worked examples") {
    FieldCtx F27 = FieldCtx::make(3, 3);
    SpectrumReport r27 = brute_spectrum(F27, 24);
    CHECK(spectra_equal(r27.spectrum,
                        Spectrum{{cpp_int(12), 3, 12, 0, 0, 0}}));
    CHECK(r27.method == kMethodBruteForce);
    CHECK(r27.d == 24);
    CHECK_FALSE(r27.gamma.has_value());

    FieldCtx F25 = FieldCtx::make(5, 2);
    SpectrumReport r25 = brute_spectrum(F25, 22);
    CHECK(spectra_equal(r25.spectrum, closed_spectrum(5, 2).spectrum));
}

TEST_CASE("brute spectrum: degenerate exponents sanity-check the plumbing") {
    // d = 1: the derivative is constantly 1, so N(1) = q and omega_q = 1.
    for (auto [p, n] : std::vector<std::pair<uint64_t, uint32_t>>{
             {5, 2}, {3, 3}, {13, 1}}) {
        FieldCtx F = FieldCtx::make(p, n);
        const uint64_t q = F.order();
        SpectrumReport r = brute_spectrum(F, 1);
        REQUIRE(r.spectrum.omega.size() == q + 1);
        CHECK(r.spectrum.omega[0] == q - 1);
        CHECK(r.spectrum.omega[q] == 1);
        CHECK(r.spectrum.delta() == q);
        for (uint64_t i = 1; i < q; ++i) CHECK(r.spectrum.omega[i] == 0);
    }
    // d = 2: the derivative 2x + 1 is a bijection, so every b is hit once.
    FieldCtx F = FieldCtx::make(7, 2);
    SpectrumReport r = brute_spectrum(F, 2);
    CHECK(spectra_equal(r.spectrum, Spectrum{{cpp_int(0), 49}}));
    CHECK(m_from_spectrum(r).value == cpp_int(2) * 49 * 49 - 49);
}

TEST_CASE("brute and closed spectra agree on every field up to 3000") {
    size_t fields = 0;
    for (uint32_t p : primes_up_to(3000)) {
        if (p == 2) continue;
        uint64_t q = p;
        uint32_t n = 1;
        while (q <= 3000) {
            if (q > 3) {
                CAPTURE(p);
                CAPTURE(n);
                FieldCtx F = FieldCtx::make(p, n);
                SpectrumReport brute = brute_spectrum(F, cpp_int(q) - 3);
                SpectrumReport closed = closed_spectrum(p, n);
                CHECK(spectra_equal(brute.spectrum, closed.spectrum));
                CHECK(brute.m == closed.m);
                ++fields;
            }
            q *= p;
            ++n;
        }
    }
    CHECK(fields >= 440);
}

TEST_CASE("per-output counts match the histogram and the quartic bridge") {
    // count_nb is a second, table-free route to N(b); compare it for every b
    // on small fields, and bridge to the quartic root count:
    //   N(b) = T_b for b outside {0, +1, -1},  N(+-1) = 1 + T_{+-1}.
    for (auto [p, n] : std::vector<std::pair<uint64_t, uint32_t>>{
             {5, 2}, {3, 3}, {7, 2}}) {
        CAPTURE(p);
        CAPTURE(n);
        FieldCtx F = FieldCtx::make(p, n);
        const uint64_t q = F.order();
        const cpp_int d = cpp_int(q) - 3;
        PowerTable pt = PowerTable::build(F, d);
        DiffHistogram h = DiffHistogram::build(F, pt);
        const uint64_t idx_one = F.index_of(F.one());
        const uint64_t idx_neg_one = F.index_of(F.embed(-1));
        for (uint64_t b = 0; b < q; ++b) {
            FieldElement be = F.element_at(b);
            uint64_t nb = count_nb(F, be, d);
            CHECK(nb == h.counts[b]);
            if (b == 0) {
                CHECK(nb == 1);
            } else if (b == idx_one || b == idx_neg_one) {
                CHECK(nb == 1 + static_cast<uint64_t>(count_gb_roots(F, be)));
            } else {
                CHECK(nb == static_cast<uint64_t>(count_gb_roots(F, be)));
            }
        }
    }
}

TEST_CASE("per-output counts: random sampling on larger fields") {
    std::mt19937_64 rng(424242);
    for (auto [p, n] : std::vector<std::pair<uint64_t, uint32_t>>{
             {11, 2}, {5, 3}, {3, 5}, {449, 1}}) {
        CAPTURE(p);
        CAPTURE(n);
        FieldCtx F = FieldCtx::make(p, n);
        const uint64_t q = F.order();
        const cpp_int d = cpp_int(q) - 3;
        PowerTable pt = PowerTable::build(F, d);
        DiffHistogram h = DiffHistogram::build(F, pt);
        const uint64_t idx_one = F.index_of(F.one());
        const uint64_t idx_neg_one = F.index_of(F.embed(-1));
        std::uniform_int_distribution<uint64_t> pick(1, q - 1);
        for (int trial = 0; trial < 200; ++trial) {
            uint64_t b = pick(rng);
            if (b == idx_one || b == idx_neg_one) continue;
            FieldElement be = F.element_at(b);
            uint64_t tb = static_cast<uint64_t>(count_gb_roots(F, be));
            CHECK(h.counts[b] == tb);
            // T and N are both even in b.
            CHECK(count_gb_roots(F, F.neg(be)) == static_cast<int>(tb));
        }
        CHECK(h.counts[idx_one] ==
              1 + static_cast<uint64_t>(count_gb_roots(F, F.one())));
        CHECK(h.counts[idx_neg_one] ==
              1 + static_cast<uint64_t>(count_gb_roots(F, F.embed(-1))));
    }
}

TEST_CASE("quartic root counts: worked values") {
    FieldCtx F54 = FieldCtx::make(5, 4);
    CHECK(count_gb_roots(F54, F54.one()) == 4);
    CHECK_THROWS_AS(count_gb_roots(F54, F54.zero()), ZeroArgumentError);

    FieldCtx F49 = FieldCtx::make(7, 2);
    CHECK(count_gb_roots(F49, F49.one()) == 3);
    CHECK(count_nb(F49, F49.one(), 46) == 4);
    CHECK(count_nb(F54, F54.zero(), 622) == 1);
}

TEST_CASE("three-root outputs exist exactly at b = +-3*sqrt(-3)") {
    // Needs eta(-3) = eta(6) = +1 and p != 7; p = 67 qualifies with
    // sqrt(-3) = 8, so the two special outputs are +-24.
    REQUIRE(legendre(-3, 67) == 1);
    REQUIRE(legendre(6, 67) == 1);
    REQUIRE(sqrt_mod_p(64, 67) == 8);
    FieldCtx F = FieldCtx::make(67, 1);
    CHECK(count_gb_roots(F, F.embed(24)) == 3);
    CHECK(count_gb_roots(F, F.embed(-24)) == 3);
    int three_root_outputs = 0;
    for (uint64_t b = 1; b < 67; ++b) {
        if (count_gb_roots(F, F.element_at(b)) == 3) ++three_root_outputs;
    }
    CHECK(three_root_outputs == 2);
    CHECK(omega3(67, 1) == 2);
}

TEST_CASE("parameter-set enumeration settles the closed-form size") {
    // The (5,4) case: the closed form gives |A| = (625-5-13-1+2)/4 = 152 and
    // no boundary adjustment applies, so omega_2 = |A|; the enumeration must
    // land on the same 152.
    FieldCtx F54 = FieldCtx::make(5, 4);
    CHECK(count_set_A(F54) == 152);
    CHECK(set_a_size(5, 4) == 152);

    FieldCtx F27 = FieldCtx::make(3, 3);
    CHECK(count_set_A(F27) == 12);
    for (uint32_t n : {2u, 4u}) {
        FieldCtx F = FieldCtx::make(3, n);
        CHECK(count_set_A(F) == 0);
    }
}

TEST_CASE("parameter-set enumeration matches the closed form broadly") {
    for (uint32_t p : primes_up_to(200)) {
        if (p == 2) continue;
        uint64_t q = p;
        uint32_t n = 1;
        while (q <= 3000) {
            if (q > 3) {
                CAPTURE(p);
                CAPTURE(n);
                FieldCtx F = FieldCtx::make(p, n);
                EtaTable t = EtaTable::build(F);
                uint64_t plain = count_set_A(F);
                uint64_t table = count_set_A(F, t);
                CHECK(plain == table);
                CHECK(cpp_int(plain) == set_a_size(p, n));
            }
            q *= p;
            ++n;
        }
    }
}

TEST_CASE("quadruple count from moments matches the closed count") {
    FieldCtx F54 = FieldCtx::make(5, 4);
    CHECK(m_from_spectrum(brute_spectrum(F54, 622)).value == 1182481);
    CHECK(m_from_spectrum(closed_spectrum(5, 5)).value == 29524925);
    CHECK(m_from_spectrum(closed_spectrum(7, 4)).value == 17056801);

    // Hand-built degenerate report: omega_1 = q makes M = (q-1)q + q^2.
    SpectrumReport pn_like;
    pn_like.p = 11;
    pn_like.n = 1;
    pn_like.spectrum.omega = {0, 11};
    CHECK(m_from_spectrum(pn_like).value == cpp_int(2) * 121 - 11);
}

TEST_CASE("partitioned histogram equals the sequential one") {
    for (auto [p, n] : std::vector<std::pair<uint64_t, uint32_t>>{
             {3, 4}, {5, 3}, {11, 2}, {1013, 1}}) {
        CAPTURE(p);
        CAPTURE(n);
        FieldCtx F = FieldCtx::make(p, n);
        const cpp_int d = cpp_int(F.order()) - 3;
        PowerTable pt = PowerTable::build(F, d);
        DiffHistogram sequential = DiffHistogram::build(F, pt, 1);
        DiffHistogram partitioned = DiffHistogram::build(F, pt, 3);
        CHECK(sequential.counts == partitioned.counts);
        SpectrumReport r1 = brute_spectrum(F, d, 1);
        SpectrumReport r4 = brute_spectrum(F, d, 4);
        CHECK(spectra_equal(r1.spectrum, r4.spectrum));
    }
}
