#pragma once

// Brute-force ground truth over explicitly constructed fields F_{p^n}:
// power tables, quadratic-character tables, derivative-equation histograms,
// differential spectra for arbitrary exponents, and the enumeration
// counterparts of every closed-form quantity.  Everything here is exact and
// independent of the closed-form pipeline, so agreement between the two is a
// meaningful check rather than a tautology.

#include <cstdint>
#include <vector>

#include "diffspec/closedform.hpp"
#include "diffspec/field.hpp"

namespace diffspec {

// Distinct prime factors of m >= 2, ascending (trial division; any cofactor
// surviving division by everything <= 2^16 is itself prime for m < 2^32,
// and larger cofactors are split by the deterministic primality test).
std::vector<uint64_t> distinct_prime_factors(uint64_t m);

// A multiplicative generator of F_{p^n}^*, found by trying elements in
// enumeration-index order and testing orders via the factorization of q-1.
FieldElement find_generator(const FieldCtx& ctx);

// ---------------------------------------------------------------------------
// Tables
// ---------------------------------------------------------------------------

// Lookup table of the map x -> x^d on enumeration indexes.
struct PowerTable {
    std::vector<uint32_t> pow_d;  // pow_d[idx(x)] = idx(x^d)
    FieldElement generator;       // primitive element used for the fill

    // Fills the table by walking g^k and g^(k*d) in lockstep over the whole
    // multiplicative group (two field multiplications per element).  The walk
    // is checked to return to 1 after exactly q-1 steps.
    // Throws CapExceededError when the field order exceeds 2^32 (table
    // indexes are 32-bit).
    static PowerTable build(const FieldCtx& ctx, const cpp_int& d);

    // Same table via per-element exponentiation; slower, used to cross-check
    // the generator walk.
    static PowerTable build_by_powmod(const FieldCtx& ctx, const cpp_int& d);
};

// Lookup table of the quadratic character on enumeration indexes, built by a
// squaring pass (mark idx(z^2) for every nonzero z), independent of both the
// power table and the exponentiation-based FieldCtx::eta.
struct EtaTable {
    std::vector<int8_t> eta;  // eta[idx(x)] in {-1, 0, +1}

    static EtaTable build(const FieldCtx& ctx);
};

// Per-output solution counts of the derivative equation
// (x+1)^d - x^d = b: counts[idx(b)] = N(b).
struct DiffHistogram {
    std::vector<uint32_t> counts;

    // One pass over all x, b = pow[x+1] - pow[x]; with workers > 1 the x
    // range is partitioned and private histograms are merged (identical
    // result, order-independent).  Conservation sum_b N(b) = q is asserted.
    static DiffHistogram build(const FieldCtx& ctx, const PowerTable& pt,
                               unsigned workers = 1);

    // omega[i] = #{b : N(b) = i} up to the largest observed multiplicity.
    Spectrum to_spectrum() const;
};

// ---------------------------------------------------------------------------
// Enumeration counters
// ---------------------------------------------------------------------------

// Differential spectrum of x^d over the explicit field, by exhaustive count.
// For the target exponent d = q-3 the histogram is additionally checked for
// N(0) = 1, the N(b) = N(-b) symmetry, and delta <= 5.
// Pre: d >= 1 (UnsupportedInputError otherwise).
SpectrumReport brute_spectrum(const FieldCtx& ctx, const cpp_int& d,
                              unsigned workers = 1);

// N(b): number of x with (x+1)^d - x^d = b, by direct enumeration.
uint64_t count_nb(const FieldCtx& ctx, const FieldElement& b, const cpp_int& d);

// Number of distinct roots in F_{p^n} of the quartic
//   x^4 + 2x^3 + x^2 + b^{-1} * (2x + 1)
// (0..4), by direct enumeration.  Throws ZeroArgumentError for b = 0.
int count_gb_roots(const FieldCtx& ctx, const FieldElement& b);

// |A| = #{a in F^* : eta(a^2 - 4) = +1 and eta(-3a^2 - 4) = -1} by
// enumeration; the second overload reuses a prebuilt character table (same
// result, no exponentiations).
uint64_t count_set_A(const FieldCtx& ctx);
uint64_t count_set_A(const FieldCtx& ctx, const EtaTable& eta);

// Quadruple count M recovered from a spectrum's second moment:
//   M = (q - 1) * sum_i i^2 * omega_i + q^2.
// Works for any method's report; for d = q-3 it must equal big_m(p, n).
QuadrupleCountM m_from_spectrum(const SpectrumReport& report);

}  // namespace diffspec
