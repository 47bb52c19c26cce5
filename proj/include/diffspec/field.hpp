#pragma once

#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "diffspec/errors.hpp"

namespace diffspec {

using boost::multiprecision::cpp_int;

/// Default upper bound on the order of explicitly materialized fields.
inline constexpr uint64_t kDefaultOrderCap = uint64_t{1} << 24;

// ---------------------------------------------------------------------------
// Integer utilities
// ---------------------------------------------------------------------------

/// Deterministic primality test (Miller-Rabin with a fixed base set that is
/// exact for every 64-bit input).
bool is_prime(uint64_t m);

/// Throws InvalidPrimeError unless p is an odd prime.
void check_odd_prime(uint64_t p);

/// All primes <= limit, ascending.
std::vector<uint32_t> primes_up_to(uint32_t limit);

/// (a * b) mod m without overflow for any 64-bit operands.
uint64_t mul_mod(uint64_t a, uint64_t b, uint64_t m);

/// (base ^ exp) mod m by binary exponentiation.
uint64_t pow_mod(uint64_t base, uint64_t exp, uint64_t m);

/// Multiplicative inverse of a modulo the odd prime p.
/// Throws DivisionByZeroError when a is divisible by p.
uint64_t inv_mod(uint64_t a, uint64_t p);

/// Legendre symbol (c | p) in {-1, 0, +1} for an odd prime p.
/// c may be negative or larger than p; it is reduced first.
int legendre(int64_t c, uint64_t p);

/// Square root of a modulo the odd prime p (Tonelli-Shanks).
/// Returns the smaller of the two roots. Throws NonResidueError when a is a
/// quadratic nonresidue mod p.
uint64_t sqrt_mod_p(uint64_t a, uint64_t p);

/// Quadratic character of the base-field constant c viewed inside F_{p^n}:
/// 0 when p | c; otherwise +1 exactly when c is a square in F_{p^n}, which
/// happens iff n is even or c is already a square mod p.
int eta_base(int64_t c, uint64_t p, uint32_t n);

// ---------------------------------------------------------------------------
// Explicit finite fields F_{p^n}
// ---------------------------------------------------------------------------

/// Dense polynomial over F_p, constant coefficient first.
using Poly = std::vector<uint32_t>;

/// First monic irreducible polynomial of degree n over F_p in the base-p
/// counting order of its lower coefficients: candidates are
/// x^n + c_{n-1} x^{n-1} + ... + c_0 with (c_0, ..., c_{n-1}) the base-p
/// digits of m for m = 0, 1, 2, ...; the first irreducible one wins.
/// For n = 1 this is the polynomial x.
Poly find_irreducible(uint64_t p, uint32_t n);

/// Element of F_{p^n}: residue polynomial with exactly n coefficients,
/// constant first, each in [0, p).
struct FieldElement {
    std::vector<uint32_t> coeffs;

    bool operator==(const FieldElement&) const = default;
};

/// Arithmetic context for F_{p^n} = F_p[x] / (f) with f the canonical
/// irreducible from find_irreducible. Elements are plain coefficient
/// vectors; all operations live on the context.
class FieldCtx {
public:
    /// Builds the context. Throws InvalidPrimeError unless p is an odd prime,
    /// and CapExceededError when p^n > max_order.
    static FieldCtx make(uint64_t p, uint32_t n, uint64_t max_order = kDefaultOrderCap);

    uint64_t p() const { return p_; }
    uint32_t n() const { return n_; }
    /// Field order q = p^n.
    uint64_t order() const { return q_; }
    /// Defining irreducible polynomial (degree n, monic, constant first).
    const Poly& modulus() const { return mod_; }

    FieldElement zero() const;
    FieldElement one() const;
    /// Constant c reduced into the prime subfield.
    FieldElement embed(int64_t c) const;

    /// Enumeration index: sum of coeffs[i] * p^i, a bijection onto [0, q).
    uint64_t index_of(const FieldElement& a) const;
    FieldElement element_at(uint64_t idx) const;
    /// Index of (element_at(idx) + 1), computed directly on the index.
    uint64_t index_add_one(uint64_t idx) const;

    bool is_zero(const FieldElement& a) const;

    FieldElement add(const FieldElement& a, const FieldElement& b) const;
    FieldElement sub(const FieldElement& a, const FieldElement& b) const;
    FieldElement neg(const FieldElement& a) const;
    FieldElement mul(const FieldElement& a, const FieldElement& b) const;
    /// Throws DivisionByZeroError for a = 0.
    FieldElement inv(const FieldElement& a) const;

    /// a^e for an arbitrary (possibly negative or huge) integer exponent.
    /// Nonzero bases reduce e modulo q-1; pow(0, 0) = 1, pow(0, e>0) = 0,
    /// and pow(0, e<0) throws DivisionByZeroError.
    FieldElement pow(const FieldElement& a, const cpp_int& e) const;

    /// Quadratic character of a in F_{p^n}: 0 for a = 0, else a^((q-1)/2)
    /// evaluated in the field, returned as +1 or -1.
    int eta(const FieldElement& a) const;

private:
    FieldCtx(uint64_t p, uint32_t n, uint64_t q, Poly mod);

    FieldElement pow_u64(const FieldElement& a, uint64_t e) const;

    uint64_t p_;
    uint32_t n_;
    uint64_t q_;
    Poly mod_;
};

} // namespace diffspec
