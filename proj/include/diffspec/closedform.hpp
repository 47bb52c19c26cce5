#pragma once

// Closed-form differential spectrum of the power map x^(q-3) over F_q, q = p^n
// (p an odd prime, q > 3).  Everything here is exact integer arithmetic driven
// by quadratic-character values and the point-count recurrence from charsum.hpp;
// no extension field is ever materialized, so these routines run for
// astronomically large q.
//
// The spectrum [omega_0, ..., omega_5] counts, for the derivative equation
// (x+1)^d - x^d = b with d = q-3, how many outputs b are hit with multiplicity
// exactly i.  The closed form determines omega_5, omega_3, omega_2 directly,
// the quadruple count M from character sums, and then solves the moment
// identities for omega_0, omega_1, omega_4.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "diffspec/charsum.hpp"
#include "diffspec/field.hpp"

namespace diffspec {

// ---------------------------------------------------------------------------
// Character profile
// ---------------------------------------------------------------------------

// Quadratic-character values (+1 square, -1 non-square, 0 at zero) of the
// small constants consumed by the spectrum formulas, all evaluated in F_{p^n}.
struct EtaProfile {
    uint64_t p = 0;
    uint32_t n = 0;
    int eta2 = 0;   // eta(2)
    int etam7 = 0;  // eta(-7), zero when p == 7
    int etam1 = 0;  // eta(-1)
    int etam3 = 0;  // eta(-3), zero when p == 3
    int eta3 = 0;   // eta(3),  zero when p == 3
    int eta6 = 0;   // eta(6),  zero when p == 3
    int etam2 = 0;  // eta(-2)
    int eta7 = 0;   // eta(7),  zero when p == 7
    // eta(-1 + 2*sqrt(2)); empty when sqrt(2) does not exist in F_{p^n}.
    std::optional<int> eta_sqrt2shift;

    // Computes all values via eta_base and eta_sqrt2_shift, then checks the
    // multiplicative relations between them (internal sanity).
    static EtaProfile compute(uint64_t p, uint32_t n);
};

// eta(-1 + 2*s) evaluated in F_{p^n}, for a caller-chosen square root s of
// 2 mod p (requires legendre(2, p) = +1).  Exposed so tests can check that the
// two root choices s and p-s give the same answer whenever eta(-7) = +1.
// Throws UnsupportedInputError if s*s != 2 (mod p).
int eta_sqrt2_shift_from_root(uint64_t p, uint32_t n, uint64_t s);

// eta(-1 + 2*sqrt(2)) in F_{p^n}; empty when eta(2) != +1 there (no sqrt(2),
// the quantity is undefined).  When legendre(2, p) = +1 the smaller square
// root of 2 mod p is used; when legendre(2, p) = -1 (n necessarily even for
// applicability) the value is derived from the norm of -1+2*sqrt(2) over
// F_{p^2}, which is (-1)^2 - 8 = -7.
std::optional<int> eta_sqrt2_shift(uint64_t p, uint32_t n);

// Second, independent route to the same value: x^2 = -1+2*sqrt(2) is solvable
// iff the even quartic x^4 + 2x^2 - 7 = (x^2+1)^2 - 8 has a root in F_{p^n},
// which is decided from its root counts over F_p and F_{p^2} plus n mod 4.
// Agrees with eta_sqrt2_shift whenever eta(-7) = +1 (there the value does not
// depend on which square root of 2 is named sqrt(2)); for eta(-7) <= 0 the two
// conventions may legitimately differ.  Empty exactly when eta(2) != +1.
std::optional<int> eta_sqrt2_shift_root_test(uint64_t p, uint32_t n);

// ---------------------------------------------------------------------------
// Spectrum building blocks
// ---------------------------------------------------------------------------

// Number of roots of x^4 + 2x^3 + x^2 + 2x + 1 in F_{p^n} (range 0..4).
// This is the root count of the b = 1 derivative quartic, hence controls the
// top multiplicity of the spectrum.  Evaluated by a five-way character case
// split; the cases are checked at runtime to be one-hot (BranchError if not).
int t1(uint64_t p, uint32_t n);

// omega_5: number of outputs hit with multiplicity five.  Always 0 or 2;
// equals 2 exactly when eta(2) = eta(-7) = eta(-1+2*sqrt(2)) = +1, which is
// also equivalent to t1 = 4 (asserted internally).
int omega5(uint64_t p, uint32_t n);

// omega_3: number of outputs hit with multiplicity three.  Always 0, 2 or 4:
// 2 for each of the two independent conditions that holds,
//   C1: eta(2) = +1 and eta(-7) = -1
//   C2: eta(-3) = eta(6) = +1 and p != 7.
// A closed product formula over the character values is evaluated as a
// cross-check and asserted equal (InternalError on disagreement).
int omega3(uint64_t p, uint32_t n);

// Size of the parameter set A = { a in F_{p^n}^* : eta(a^2 - 4) = +1 and
// eta(-3a^2 - 4) = -1 }, in closed form.  Each a in A labels one output b
// whose derivative quartic has exactly two simple roots, which is why |A|
// is the backbone of omega_2.  For p >= 5,
//   |A| = (p^n - 5 - lambda1 - eta(-3) + 2*eta(-1)) / 4,
// with the divisibility by 4 asserted (DivisibilityError otherwise).
cpp_int set_a_size(uint64_t p, uint32_t n);

// omega_2: number of outputs hit with multiplicity two.  For p = 3 this is 0
// (n even) or (3^n - 3)/2 (n odd); for p >= 5 it is |A| + 2 when p = 7 with n
// odd, |A| - 2 when eta(2) = +1 and eta(-7) = -1, and |A| otherwise (the two
// adjustments cannot both fire; BranchError if they do).
cpp_int omega2(uint64_t p, uint32_t n);

// Number of solutions (x1, x2, x3, x4) in F_q^4 of the simultaneous system
//   x1 - x2 + x3 - x4 = 0   and   x1^d - x2^d + x3^d - x4^d = 0,  d = q - 3.
// Always congruent to 1 mod q-1 (visible from the closed form and asserted).
struct QuadrupleCountM {
    cpp_int value;
};

// Closed form for the quadruple count:
//   M = 1 + (q-1) * (3q + lambda2 + 4*T1 - 4 - 2*eta(-1) - eta(-3)*(2+eta(-3)))
QuadrupleCountM big_m(uint64_t p, uint32_t n);

// ---------------------------------------------------------------------------
// Assembled spectra
// ---------------------------------------------------------------------------

// Multiset of derivative-equation multiplicities: omega[i] = number of outputs
// b hit with multiplicity exactly i.  Closed-form reports always carry six
// entries (indices 0..5); brute-force reports size the vector to the largest
// observed multiplicity.
struct Spectrum {
    std::vector<cpp_int> omega;

    // Largest i with omega[i] > 0 (0 for an all-zero or empty vector).
    uint32_t delta() const;

    cpp_int sum() const;            // sum_i omega[i]
    cpp_int first_moment() const;   // sum_i i * omega[i]
    cpp_int second_moment() const;  // sum_i i^2 * omega[i]
};

// One fully solved instance: the spectrum of x^d over F_{p^n}, d = p^n - 3,
// together with the intermediate quantities that produced it.  Fields that a
// particular method does not compute are left empty (for example the brute
// force path knows no character sums, and gamma is undefined for p = 3).
struct SpectrumReport {
    uint64_t p = 0;
    uint32_t n = 0;
    cpp_int d;  // exponent the spectrum refers to (p^n - 3 on closed paths)
    std::optional<cpp_int> gamma;
    std::optional<cpp_int> lambda1;
    std::optional<cpp_int> lambda2;
    std::optional<int> t1_count;
    std::optional<cpp_int> m;  // quadruple count
    Spectrum spectrum;
    std::string method;  // "closed_form", "corollary" or "brute_force"
};

// Method tags used in SpectrumReport::method.
inline constexpr const char* kMethodClosedForm = "closed_form";
inline constexpr const char* kMethodCorollary = "corollary";
inline constexpr const char* kMethodBruteForce = "brute_force";

// True when the two multiplicity vectors agree after zero-extension (brute
// force reports size their vector to the largest observed multiplicity while
// closed-form reports always carry six entries).
bool spectra_equal(const Spectrum& a, const Spectrum& b);

// Full closed-form pipeline for any odd prime p and n >= 1 with p^n > 3:
// omega_5, omega_3, omega_2 and M as above, then omega_0, omega_1, omega_4
// from the exactly-solved moment identities
//   sum omega_i = sum i*omega_i = q,   (q-1) * sum i^2*omega_i = M - q^2.
// Every division is checked exact (DivisibilityError on failure — that would
// indicate a transcription bug, no valid input triggers it).  The returned
// spectrum additionally has the two linear moment identities re-verified.
// Throws UnsupportedInputError for (p, n) = (3, 1) (d = 0 degenerates) and
// InvalidPrimeError for p even or composite.
SpectrumReport closed_spectrum(uint64_t p, uint32_t n);

// Independent second implementation for p in {3, 5, 7} only: the per-prime
// spectrum formulas (in terms of n, gamma(5, n), and (-7)^(n/2)), evaluated
// directly without going through T1/M.  Must equal closed_spectrum exactly;
// tests assert this.  Throws UnsupportedInputError for p outside {3, 5, 7}
// and for (p, n) = (3, 1).
SpectrumReport corollary_spectrum(uint64_t p, uint32_t n);

}  // namespace diffspec
