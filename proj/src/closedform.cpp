#include "diffspec/closedform.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "diffspec/errors.hpp"

namespace diffspec {

namespace {

// Shared validation for every closed-form entry point: p must be an odd prime,
// n >= 1, and (p, n) = (3, 1) is rejected because d = p^n - 3 = 0 there.
void check_closed_domain(uint64_t p, uint32_t n) {
    check_odd_prime(p);
    if (n == 0) {
        throw UnsupportedInputError("extension degree n must be >= 1");
    }
    if (p == 3 && n == 1) {
        throw UnsupportedInputError(
            "(p, n) = (3, 1) is excluded: the exponent p^n - 3 vanishes");
    }
}

cpp_int pow_q(uint64_t p, uint32_t n) {
    return boost::multiprecision::pow(cpp_int(p), n);
}

// Exact integer division with a loud failure: the closed-form assembly never
// produces a non-integer quotient unless a formula was transcribed wrong.
cpp_int exact_div(const cpp_int& num, const cpp_int& den, const char* what) {
    if (den == 0) {
        throw InternalError(std::string("zero divisor while computing ") + what);
    }
    if (num % den != 0) {
        throw DivisibilityError(std::string("inexact division while computing ") +
                                what + ": " + num.str() + " / " + den.str());
    }
    return num / den;
}

}  // namespace

// ---------------------------------------------------------------------------
// eta(-1 + 2*sqrt(2))
// ---------------------------------------------------------------------------

int eta_sqrt2_shift_from_root(uint64_t p, uint32_t n, uint64_t s) {
    check_odd_prime(p);
    if (n == 0) {
        throw UnsupportedInputError("extension degree n must be >= 1");
    }
    if (s == 0 || s >= p || mul_mod(s, s, p) != 2 % p) {
        throw UnsupportedInputError("s is not a square root of 2 mod p");
    }
    // -1 + 2s reduced mod p; can only vanish at p = 7 with s = 4.
    uint64_t t = (2 * s + p - 1) % p;
    return eta_base(static_cast<int64_t>(t), p, n);
}

std::optional<int> eta_sqrt2_shift(uint64_t p, uint32_t n) {
    check_odd_prime(p);
    if (n == 0) {
        throw UnsupportedInputError("extension degree n must be >= 1");
    }
    if (eta_base(2, p, n) != 1) {
        return std::nullopt;  // no sqrt(2) in F_{p^n}: value undefined
    }
    if (legendre(2, p) == 1) {
        return eta_sqrt2_shift_from_root(p, n, sqrt_mod_p(2, p));
    }
    // legendre(2, p) = -1 forces n even here.  sqrt(2) lives in F_{p^2} \ F_p,
    // and u = -1 + 2*sqrt(2) has norm u * u^p = (-1)^2 - 4*2 = -7 over F_p, so
    // u is a square in F_{p^2} iff legendre(-7, p) = +1.  Lifting from F_{p^2}
    // to F_{p^n} (n = 2m) turns a non-square into a square iff m is even.
    if (legendre(-7, p) == 1 || n % 4 == 0) {
        return 1;
    }
    return -1;
}

std::optional<int> eta_sqrt2_shift_root_test(uint64_t p, uint32_t n) {
    check_odd_prime(p);
    if (n == 0) {
        throw UnsupportedInputError("extension degree n must be >= 1");
    }
    if (eta_base(2, p, n) != 1) {
        return std::nullopt;
    }
    // Distinct-root counts of phi = x^4 + 2x^2 - 7 over F_p (r1) and F_{p^2}
    // (r2).  Roots satisfy x^2 = -1 +/- 2*sqrt(2).
    int r1 = 0;
    int r2 = 0;
    if (legendre(2, p) == 1) {
        uint64_t s = sqrt_mod_p(2, p);
        uint64_t cand[2] = {(2 * s + p - 1) % p,          // -1 + 2s
                            (3 * p - 1 - 2 * s) % p};     // -1 - 2s
        for (uint64_t u : cand) {
            if (u == 0) {
                r1 += 1;  // x = 0 is a (repeated) root; count it once
                r2 += 1;
            } else {
                r1 += 1 + legendre(static_cast<int64_t>(u), p);
                r2 += 2;  // every element of F_p^* is a square in F_{p^2}
            }
        }
    } else {
        // sqrt(2) is not in F_p, so phi has no roots there.  In F_{p^2} both
        // candidates -1 +/- 2*sqrt(2) are nonzero with norm -7, hence both are
        // squares of F_{p^2} or neither is.
        r1 = 0;
        r2 = 2 * (1 + legendre(-7, p));
    }
    // phi is an even quartic, so its irreducible factors over F_p have degree
    // 1, 2 or 4 (a linear factor forces its negative as well, ruling out a
    // cubic cofactor).  Hence phi always has a root in F_{p^4}, and for
    // smaller fields the r1/r2 counts decide.
    bool has_root = (n % 2 == 1) ? (r1 > 0) : (n % 4 == 2) ? (r2 > 0) : true;
    return has_root ? 1 : -1;
}

// ---------------------------------------------------------------------------
// Character profile
// ---------------------------------------------------------------------------

EtaProfile EtaProfile::compute(uint64_t p, uint32_t n) {
    check_odd_prime(p);
    if (n == 0) {
        throw UnsupportedInputError("extension degree n must be >= 1");
    }
    EtaProfile e;
    e.p = p;
    e.n = n;
    e.eta2 = eta_base(2, p, n);
    e.etam7 = eta_base(-7, p, n);
    e.etam1 = eta_base(-1, p, n);
    e.etam3 = eta_base(-3, p, n);
    e.eta3 = eta_base(3, p, n);
    e.eta6 = eta_base(6, p, n);
    e.etam2 = eta_base(-2, p, n);
    e.eta7 = eta_base(7, p, n);
    e.eta_sqrt2shift = eta_sqrt2_shift(p, n);

    // Multiplicativity sanity between the stored values (only meaningful when
    // every factor is nonzero).
    if (e.etam2 != e.etam1 * e.eta2) {
        throw InternalError("character profile: eta(-2) != eta(-1)*eta(2)");
    }
    if (p != 3 && (e.eta6 != e.etam2 * e.etam3 || e.eta6 != e.eta2 * e.eta3)) {
        throw InternalError("character profile: eta(6) inconsistent");
    }
    if (p != 7 && e.etam7 != e.etam1 * e.eta7) {
        throw InternalError("character profile: eta(-7) != eta(-1)*eta(7)");
    }
    if (e.eta_sqrt2shift.has_value() != (e.eta2 == 1)) {
        throw InternalError(
            "character profile: eta(-1+2*sqrt(2)) defined iff eta(2) = +1");
    }
    return e;
}

// ---------------------------------------------------------------------------
// T1 and the individual omegas
// ---------------------------------------------------------------------------

int t1(uint64_t p, uint32_t n) {
    check_closed_domain(p, n);
    const int e2 = eta_base(2, p, n);
    const int em7 = eta_base(-7, p, n);
    const std::optional<int> shift = eta_sqrt2_shift(p, n);
    if (e2 == 1 && em7 == 1 && !shift.has_value()) {
        throw BranchError("t1: eta(-1+2*sqrt(2)) unavailable with eta(2) = +1");
    }

    // Five-way case split; the guards must be one-hot.  The p = 7 parity
    // cases cannot collide with the character cases because eta(-7) = 0 there.
    const bool zero_a = (p != 7) && (e2 == -1);
    const bool zero_b = (p != 7) && (e2 == 1 && em7 == 1 && shift == -1);
    const bool one = (p == 7) && (n % 2 == 1);
    const bool two = (p != 7) && (e2 == 1 && em7 == -1);
    const bool three = (p == 7) && (n % 2 == 0);
    const bool four = (p != 7) && (e2 == 1 && em7 == 1 && shift == 1);

    const int fired = static_cast<int>(zero_a) + static_cast<int>(zero_b) +
                      static_cast<int>(one) + static_cast<int>(two) +
                      static_cast<int>(three) + static_cast<int>(four);
    if (fired != 1) {
        throw BranchError("t1: case split fired " + std::to_string(fired) +
                          " branches for p=" + std::to_string(p) +
                          ", n=" + std::to_string(n));
    }
    if (zero_a || zero_b) return 0;
    if (one) return 1;
    if (two) return 2;
    if (three) return 3;
    return 4;
}

int omega5(uint64_t p, uint32_t n) {
    check_closed_domain(p, n);
    const int e2 = eta_base(2, p, n);
    const int em7 = eta_base(-7, p, n);
    const std::optional<int> shift = eta_sqrt2_shift(p, n);
    const int value = (e2 == 1 && em7 == 1 && shift == 1) ? 2 : 0;
    if ((value == 2) != (t1(p, n) == 4)) {
        throw InternalError("omega5: disagrees with the t1 = 4 criterion");
    }
    return value;
}

int omega3(uint64_t p, uint32_t n) {
    check_closed_domain(p, n);
    const EtaProfile e = EtaProfile::compute(p, n);
    const bool c1 = (e.eta2 == 1 && e.etam7 == -1);
    const bool c2 = (e.etam3 == 1 && e.eta6 == 1 && p != 7);
    const int value = 2 * static_cast<int>(c1) + 2 * static_cast<int>(c2);

    // Cross-check against the equivalent product formula
    //   (eta(7)^2 * eta(3)^2 / 2) *
    //       ((1 + eta(2)) * (1 - eta(-7)) + (1 + eta(-2)) * (1 + eta(-3)));
    // the squared prefactor zeroes it for p in {3, 7}, where both conditions
    // above are vacuously false as well.
    const int prefactor = e.eta7 * e.eta7 * e.eta3 * e.eta3;
    const int bracket = (1 + e.eta2) * (1 - e.etam7) + (1 + e.etam2) * (1 + e.etam3);
    if (bracket % 2 != 0) {
        throw InternalError("omega3: product form produced an odd bracket");
    }
    const int product_form = prefactor * bracket / 2;
    if (value != product_form) {
        throw InternalError("omega3: case split and product formula disagree (" +
                            std::to_string(value) + " vs " +
                            std::to_string(product_form) + ")");
    }
    return value;
}

cpp_int set_a_size(uint64_t p, uint32_t n) {
    check_closed_domain(p, n);
    const cpp_int q = pow_q(p, n);
    if (p == 3) {
        // eta(-3a^2-4) = eta(-1) there, so A empties out for even n and
        // collects half of the a with eta(a^2-1) = +1 for odd n.
        return (n % 2 == 0) ? cpp_int(0) : exact_div(q - 3, 2, "|A| at p = 3");
    }
    const cpp_int l1 = lambda1(p, n);
    const int em3 = eta_base(-3, p, n);
    const int em1 = eta_base(-1, p, n);
    const cpp_int num = q - 5 - l1 - em3 + 2 * em1;
    return exact_div(num, 4, "|A|");
}

cpp_int omega2(uint64_t p, uint32_t n) {
    check_closed_domain(p, n);
    const cpp_int a = set_a_size(p, n);
    if (p == 3) {
        return a;  // no boundary adjustment exists at p = 3
    }
    const bool plus_two = (p == 7 && n % 2 == 1);
    const bool minus_two = (eta_base(2, p, n) == 1 && eta_base(-7, p, n) == -1);
    if (plus_two && minus_two) {
        // Impossible: eta(-7) = 0 at p = 7.
        throw BranchError("omega2: +2 and -2 adjustments both fired");
    }
    if (plus_two) return a + 2;
    if (minus_two) return a - 2;
    return a;
}

QuadrupleCountM big_m(uint64_t p, uint32_t n) {
    check_closed_domain(p, n);
    const cpp_int q = pow_q(p, n);
    const cpp_int l2 = lambda2(p, n);
    const int t = t1(p, n);
    const int em1 = eta_base(-1, p, n);
    const int em3 = eta_base(-3, p, n);
    const cpp_int bracket = 3 * q + l2 + 4 * t - 4 - 2 * em1 - em3 * (2 + em3);
    QuadrupleCountM m{1 + (q - 1) * bracket};
    if ((m.value - 1) % (q - 1) != 0) {
        throw InternalError("quadruple count not congruent to 1 mod q-1");
    }
    return m;
}

// ---------------------------------------------------------------------------
// Spectrum helpers
// ---------------------------------------------------------------------------

uint32_t Spectrum::delta() const {
    for (size_t i = omega.size(); i-- > 0;) {
        if (omega[i] > 0) {
            return static_cast<uint32_t>(i);
        }
    }
    return 0;
}

cpp_int Spectrum::sum() const {
    cpp_int s = 0;
    for (const cpp_int& w : omega) s += w;
    return s;
}

cpp_int Spectrum::first_moment() const {
    cpp_int s = 0;
    for (size_t i = 0; i < omega.size(); ++i) s += cpp_int(i) * omega[i];
    return s;
}

cpp_int Spectrum::second_moment() const {
    cpp_int s = 0;
    for (size_t i = 0; i < omega.size(); ++i) s += cpp_int(i) * cpp_int(i) * omega[i];
    return s;
}

bool spectra_equal(const Spectrum& a, const Spectrum& b) {
    const size_t len = std::max(a.omega.size(), b.omega.size());
    for (size_t i = 0; i < len; ++i) {
        const cpp_int wa = (i < a.omega.size()) ? a.omega[i] : cpp_int(0);
        const cpp_int wb = (i < b.omega.size()) ? b.omega[i] : cpp_int(0);
        if (wa != wb) return false;
    }
    return true;
}

namespace {

// Re-derives the three moment identities on a finished six-entry spectrum and
// throws if any fails; every closed-form report passes through here.
void check_report_invariants(const SpectrumReport& r) {
    const cpp_int q = pow_q(r.p, r.n);
    for (const cpp_int& w : r.spectrum.omega) {
        if (w < 0) {
            throw InternalError("spectrum entry negative");
        }
    }
    if (r.spectrum.sum() != q) {
        throw InternalError("spectrum zeroth moment != q");
    }
    if (r.spectrum.first_moment() != q) {
        throw InternalError("spectrum first moment != q");
    }
    if (r.m.has_value() &&
        (q - 1) * r.spectrum.second_moment() != *r.m - q * q) {
        throw InternalError("spectrum second moment inconsistent with M");
    }
}

}  // namespace

SpectrumReport closed_spectrum(uint64_t p, uint32_t n) {
    check_closed_domain(p, n);
    const cpp_int q = pow_q(p, n);
    const cpp_int qm1 = q - 1;

    const int w5 = omega5(p, n);
    const int w3 = omega3(p, n);
    const cpp_int w2 = omega2(p, n);
    const cpp_int m = big_m(p, n).value;

    // Solve the moment identities for omega_0, omega_1, omega_4 over the
    // common denominator 12(q-1); each division must be exact.
    const cpp_int k = m - 2 * q * q + q;
    const cpp_int den = 12 * qm1;
    const cpp_int w0 = exact_div(
        3 * k + 6 * qm1 * w2 + 6 * qm1 * w3 - 12 * qm1 * w5, den, "omega0");
    const cpp_int w1 = exact_div(
        4 * (-m + 5 * q * q - 4 * q) - 16 * qm1 * w2 - 12 * qm1 * w3 +
            20 * qm1 * w5,
        den, "omega1");
    const cpp_int w4 = exact_div(
        k - 2 * qm1 * w2 - 6 * qm1 * w3 - 20 * qm1 * w5, den, "omega4");

    SpectrumReport r;
    r.p = p;
    r.n = n;
    r.d = q - 3;
    if (p >= 5) {
        r.gamma = gamma(p, n);
    }
    r.lambda1 = lambda1(p, n);
    r.lambda2 = lambda2(p, n);
    r.t1_count = t1(p, n);
    r.m = m;
    r.spectrum.omega = {w0, w1, w2, cpp_int(w3), w4, cpp_int(w5)};
    r.method = kMethodClosedForm;
    check_report_invariants(r);
    return r;
}

SpectrumReport corollary_spectrum(uint64_t p, uint32_t n) {
    if (p != 3 && p != 5 && p != 7) {
        throw UnsupportedInputError(
            "per-prime spectrum formulas exist only for p in {3, 5, 7}");
    }
    check_closed_domain(p, n);
    const cpp_int q = pow_q(p, n);

    SpectrumReport r;
    r.p = p;
    r.n = n;
    r.d = q - 3;
    r.method = kMethodCorollary;

    cpp_int w0, w1, w2, w3 = 0, w4, w5 = 0;
    if (p == 3) {
        if (n % 2 == 1) {
            w0 = exact_div(q - 3, 2, "omega0 (p=3, n odd)");
            w1 = 3;
            w2 = w0;
            w4 = 0;
        } else {
            const cpp_int q3 = q / 3;  // 3^(n-1)
            w2 = 0;
            if (n % 4 == 2) {
                w0 = exact_div(q - 9, 4, "omega0 (p=3, n = 2 mod 4)");
                w1 = 2 * q3 + 3;
                w4 = exact_div(q3 - 3, 4, "omega4 (p=3, n = 2 mod 4)");
            } else {
                w0 = exact_div(q - 1, 4, "omega0 (p=3, n = 0 mod 4)");
                w1 = 2 * q3 + 1;
                w4 = exact_div(q3 - 11, 4, "omega4 (p=3, n = 0 mod 4)");
                w5 = 2;
            }
        }
    } else if (p == 5) {
        const cpp_int g = gamma(5, n);
        r.gamma = g;
        w2 = exact_div(q - g - 3, 4, "omega2 (p=5)");
        if (n % 2 == 1) {
            w0 = exact_div(3 * q + g - 17, 8, "omega0 (p=5, n odd)");
            w1 = exact_div(q + 10, 3, "omega1 (p=5, n odd)");
            w4 = exact_div(q + 3 * g - 11, 24, "omega4 (p=5, n odd)");
        } else if (n % 4 == 2) {
            w0 = exact_div(3 * q + g - 17, 8, "omega0 (p=5, n = 2 mod 4)");
            w1 = exact_div(q + 8, 3, "omega1 (p=5, n = 2 mod 4)");
            w3 = 2;
            w4 = exact_div(q + 3 * g - 43, 24, "omega4 (p=5, n = 2 mod 4)");
        } else {
            w0 = exact_div(3 * q + g - 1, 8, "omega0 (p=5, n = 0 mod 4)");
            w1 = exact_div(q + 2, 3, "omega1 (p=5, n = 0 mod 4)");
            w3 = 2;
            w4 = exact_div(q + 3 * g - 91, 24, "omega4 (p=5, n = 0 mod 4)");
            w5 = 2;
        }
    } else {  // p == 7
        w1 = exact_div(q + 2, 3, "omega1 (p=7)");
        if (n % 2 == 1) {
            r.gamma = 0;  // the underlying curve is supersingular at p = 7
            w0 = exact_div(3 * q - 5, 8, "omega0 (p=7, n odd)");
            w2 = exact_div(q + 1, 4, "omega2 (p=7, n odd)");
            w4 = exact_div(q - 7, 24, "omega4 (p=7, n odd)");
        } else {
            // h = (-7)^(n/2); gamma(7, n) = -2h for even n.
            cpp_int h = boost::multiprecision::pow(cpp_int(7), n / 2);
            if ((n / 2) % 2 == 1) h = -h;
            r.gamma = -2 * h;
            w0 = exact_div(3 * q - 2 * h - 1, 8, "omega0 (p=7, n even)");
            w2 = exact_div(q + 2 * h - 3, 4, "omega2 (p=7, n even)");
            w4 = exact_div(q - 6 * h + 5, 24, "omega4 (p=7, n even)");
        }
    }

    r.spectrum.omega = {w0, w1, w2, w3, w4, w5};
    // The per-prime formulas do not produce M directly; recover it from the
    // second moment so the report is self-consistent.
    r.m = (q - 1) * r.spectrum.second_moment() + q * q;
    check_report_invariants(r);
    return r;
}

}  // namespace diffspec
