#pragma once

#include <cstdint>

#include "diffspec/field.hpp"

namespace diffspec {

/// Trace data of the plane curve y^2 = x(x-1)(x+3) over F_p, the engine
/// behind every closed-form character-sum value for p >= 5.
struct GammaParams {
    uint64_t p = 0;
    /// Number of affine solutions (x, y) in F_p x F_p.
    uint64_t n_points = 0;
    /// a = n_points - p; satisfies a^2 < 4p.
    int64_t a = 0;

    static GammaParams compute(uint64_t p);
};

/// Number of affine points of y^2 = x(x-1)(x+3) over F_p for an odd prime
/// p >= 5 (the curve degenerates at p = 3).
uint64_t count_ec_points(uint64_t p);

/// The three character sums the closed-form spectrum consumes.
enum class CharSumKind {
    /// sum of eta(x(x-1)(x+3)) over F_{p^n}
    gamma,
    /// sum of eta((x^2-4)(-3x^2-4)) over F_{p^n}
    lambda1,
    /// sum of eta((x^2+1)(x^2+4x+1)) over F_{p^n}
    lambda2,
};

const char* char_sum_kind_name(CharSumKind which);

/// A fully evaluated character sum with its provenance tag.
struct CharSumValue {
    CharSumKind which;
    uint64_t p;
    uint32_t n;
    cpp_int value;
};

/// Gamma sum over F_{p^n} by the integer recurrence s_0 = 2, s_1 = -a,
/// s_k = -a s_{k-1} - p s_{k-2}, with the result -s_n. Exact at any n.
/// Requires p >= 5 (throws InvalidPrimeError otherwise).
cpp_int gamma(const GammaParams& gp, uint32_t n);
cpp_int gamma(uint64_t p, uint32_t n);

/// Lambda sums for any odd prime. At p = 3 both collapse to quadratic
/// character constants; for p >= 5 they are shifts of the gamma sum.
/// Overloads taking GammaParams (p >= 5 only) let callers reuse the point
/// count across many n.
cpp_int lambda1(const GammaParams& gp, uint32_t n);
cpp_int lambda1(uint64_t p, uint32_t n);
cpp_int lambda2(const GammaParams& gp, uint32_t n);
cpp_int lambda2(uint64_t p, uint32_t n);

/// Closed-form evaluation bundled with its tag; validates the Weil-type
/// magnitude bound |value| <= 2 p^{n/2} + 2.
CharSumValue char_sum(uint64_t p, uint32_t n, CharSumKind which);

/// Direct enumeration of the requested sum over the whole field, using the
/// context's exponentiation-based character. Independent of the recurrence.
cpp_int brute_charsum(const FieldCtx& ctx, CharSumKind which);

} // namespace diffspec
