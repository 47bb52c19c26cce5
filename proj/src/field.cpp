#include "diffspec/field.hpp"

#include <algorithm>
#include <array>
#include <string>

namespace diffspec {

namespace {

std::string u64s(uint64_t v) { return std::to_string(v); }

} // namespace

// ---------------------------------------------------------------------------
// Integer utilities
// ---------------------------------------------------------------------------

uint64_t mul_mod(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

uint64_t pow_mod(uint64_t base, uint64_t exp, uint64_t m) {
    if (m == 1) return 0;
    uint64_t result = 1;
    uint64_t acc = base % m;
    while (exp != 0) {
        if (exp & 1) result = mul_mod(result, acc, m);
        acc = mul_mod(acc, acc, m);
        exp >>= 1;
    }
    return result;
}

bool is_prime(uint64_t m) {
    if (m < 2) return false;
    for (uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (m == q) return true;
        if (m % q == 0) return false;
    }
    // Miller-Rabin; this base set decides every 64-bit integer exactly.
    uint64_t d = m - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        uint64_t x = pow_mod(a, d, m);
        if (x == 1 || x == m - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mul_mod(x, x, m);
            if (x == m - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

void check_odd_prime(uint64_t p) {
    if (p < 3 || (p & 1) == 0 || !is_prime(p)) {
        throw InvalidPrimeError("p must be an odd prime, got " + u64s(p));
    }
}

std::vector<uint32_t> primes_up_to(uint32_t limit) {
    std::vector<uint32_t> out;
    if (limit < 2) return out;
    std::vector<bool> composite(static_cast<size_t>(limit) + 1, false);
    for (uint32_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (uint64_t j = static_cast<uint64_t>(i) * i; j <= limit; j += i) {
            composite[static_cast<size_t>(j)] = true;
        }
    }
    return out;
}

uint64_t inv_mod(uint64_t a, uint64_t p) {
    check_odd_prime(p);
    a %= p;
    if (a == 0) throw DivisionByZeroError("inverse of 0 mod " + u64s(p));
    return pow_mod(a, p - 2, p);
}

int legendre(int64_t c, uint64_t p) {
    check_odd_prime(p);
    int64_t sp = static_cast<int64_t>(p);
    uint64_t r = static_cast<uint64_t>(((c % sp) + sp) % sp);
    if (r == 0) return 0;
    uint64_t e = pow_mod(r, (p - 1) / 2, p);
    if (e == 1) return 1;
    if (e == p - 1) return -1;
    throw InternalError("Euler criterion escaped {1, p-1} mod " + u64s(p));
}

uint64_t sqrt_mod_p(uint64_t a, uint64_t p) {
    check_odd_prime(p);
    a %= p;
    if (a == 0) return 0;
    if (legendre(static_cast<int64_t>(a), p) != 1) {
        throw NonResidueError(u64s(a) + " is not a square mod " + u64s(p));
    }
    uint64_t r;
    if (p % 4 == 3) {
        r = pow_mod(a, (p + 1) / 4, p);
    } else {
        // Tonelli-Shanks. p - 1 = q * 2^s with q odd.
        uint64_t q = p - 1;
        int s = 0;
        while ((q & 1) == 0) {
            q >>= 1;
            ++s;
        }
        uint64_t z = 2;
        while (legendre(static_cast<int64_t>(z), p) != -1) ++z;
        uint64_t m = static_cast<uint64_t>(s);
        uint64_t c = pow_mod(z, q, p);
        uint64_t t = pow_mod(a, q, p);
        r = pow_mod(a, (q + 1) / 2, p);
        while (t != 1) {
            uint64_t i = 0;
            uint64_t t2 = t;
            while (t2 != 1) {
                t2 = mul_mod(t2, t2, p);
                ++i;
                if (i == m) throw InternalError("square root search failed mod " + u64s(p));
            }
            uint64_t b = pow_mod(c, uint64_t{1} << (m - i - 1), p);
            m = i;
            c = mul_mod(b, b, p);
            t = mul_mod(t, c, p);
            r = mul_mod(r, b, p);
        }
    }
    return std::min(r, p - r);
}

int eta_base(int64_t c, uint64_t p, uint32_t n) {
    int l = legendre(c, p);
    if (l == 0) return 0;
    if (l == 1) return 1;
    // Nonsquares of the prime subfield become squares in even-degree extensions.
    return (n % 2 == 0) ? 1 : -1;
}

// ---------------------------------------------------------------------------
// Polynomial arithmetic over F_p (internal, used for irreducibility search)
// ---------------------------------------------------------------------------

namespace {

int poly_deg(const Poly& a) {
    for (size_t i = a.size(); i > 0; --i) {
        if (a[i - 1] != 0) return static_cast<int>(i - 1);
    }
    return -1;
}

Poly poly_trim(Poly a) {
    a.resize(static_cast<size_t>(poly_deg(a) + 1));
    return a;
}

// (a * b) mod f for a monic f of degree n; a, b of degree < n.
Poly poly_mul_mod(const Poly& a, const Poly& b, const Poly& f, uint64_t p) {
    uint32_t n = static_cast<uint32_t>(f.size() - 1);
    std::vector<uint64_t> buf(2 * n - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) {
            buf[i + j] = (buf[i + j] + static_cast<uint64_t>(a[i]) * b[j]) % p;
        }
    }
    for (size_t i = buf.size(); i-- > n;) {
        uint64_t c = buf[i];
        if (c == 0) continue;
        for (uint32_t j = 0; j < n; ++j) {
            buf[i - n + j] = (buf[i - n + j] + c * (p - f[j])) % p;
        }
        buf[i] = 0;
    }
    Poly out(n, 0);
    for (uint32_t i = 0; i < n; ++i) out[i] = static_cast<uint32_t>(buf[i]);
    return out;
}

// a^e mod f.
Poly poly_pow_mod(Poly base, uint64_t e, const Poly& f, uint64_t p) {
    Poly result(f.size() - 1, 0);
    result[0] = 1;
    while (e != 0) {
        if (e & 1) result = poly_mul_mod(result, base, f, p);
        base = poly_mul_mod(base, base, f, p);
        e >>= 1;
    }
    return result;
}

Poly poly_sub(const Poly& a, const Poly& b, uint64_t p) {
    Poly out(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < out.size(); ++i) {
        uint64_t x = i < a.size() ? a[i] : 0;
        uint64_t y = i < b.size() ? b[i] : 0;
        out[i] = static_cast<uint32_t>((x + p - y) % p);
    }
    return poly_trim(std::move(out));
}

Poly poly_rem(Poly a, const Poly& b, uint64_t p) {
    int db = poly_deg(b);
    uint64_t lead_inv = pow_mod(b[static_cast<size_t>(db)], p - 2, p);
    for (int da = poly_deg(a); da >= db; da = poly_deg(a)) {
        uint64_t c = mul_mod(a[static_cast<size_t>(da)], lead_inv, p);
        for (int j = 0; j <= db; ++j) {
            size_t k = static_cast<size_t>(da - db + j);
            a[k] = static_cast<uint32_t>((a[k] + c * (p - b[static_cast<size_t>(j)])) % p);
        }
    }
    return poly_trim(std::move(a));
}

Poly poly_gcd(Poly a, Poly b, uint64_t p) {
    a = poly_trim(std::move(a));
    b = poly_trim(std::move(b));
    while (poly_deg(b) >= 0) {
        Poly r = poly_rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

// Degree-n candidate is irreducible iff it shares no factor with
// x^(p^k) - x for any k <= n/2 (the product of all irreducibles of
// degree dividing k).
bool poly_is_irreducible(const Poly& f, uint64_t p, uint32_t n) {
    if (n == 1) return true;
    if (f[0] == 0) return false; // divisible by x
    Poly x = {0, 1};
    Poly h = x;
    for (uint32_t k = 1; k <= n / 2; ++k) {
        h = poly_pow_mod(h, p, f, p); // now h = x^(p^k) mod f
        Poly g = poly_gcd(poly_sub(h, x, p), f, p);
        if (poly_deg(g) != 0) return false;
    }
    return true;
}

} // namespace

Poly find_irreducible(uint64_t p, uint32_t n) {
    check_odd_prime(p);
    if (n == 0) throw UnsupportedInputError("extension degree must be >= 1");
    if (n == 1) return Poly{0, 1};
    Poly f(n + 1, 0);
    f[n] = 1;
    // Walk candidates in base-p counting order of the lower coefficients.
    while (true) {
        if (poly_is_irreducible(f, p, n)) return f;
        uint32_t i = 0;
        while (i < n && f[i] == p - 1) {
            f[i] = 0;
            ++i;
        }
        if (i == n) throw InternalError("no irreducible of degree " + u64s(n) + " over F_" + u64s(p));
        ++f[i];
    }
}

// ---------------------------------------------------------------------------
// FieldCtx
// ---------------------------------------------------------------------------

FieldCtx::FieldCtx(uint64_t p, uint32_t n, uint64_t q, Poly mod)
    : p_(p), n_(n), q_(q), mod_(std::move(mod)) {}

FieldCtx FieldCtx::make(uint64_t p, uint32_t n, uint64_t max_order) {
    check_odd_prime(p);
    if (n == 0) throw UnsupportedInputError("extension degree must be >= 1");
    if (p >= (uint64_t{1} << 31)) {
        throw UnsupportedInputError("p = " + u64s(p) + " is too large for explicit field arithmetic");
    }
    uint64_t q = 1;
    for (uint32_t i = 0; i < n; ++i) {
        if (q > max_order / p) {
            throw CapExceededError("field order " + u64s(p) + "^" + u64s(n) +
                                   " exceeds the cap " + u64s(max_order));
        }
        q *= p;
    }
    if (q > max_order) {
        throw CapExceededError("field order " + u64s(q) + " exceeds the cap " + u64s(max_order));
    }
    return FieldCtx(p, n, q, find_irreducible(p, n));
}

FieldElement FieldCtx::zero() const { return FieldElement{std::vector<uint32_t>(n_, 0)}; }

FieldElement FieldCtx::one() const {
    FieldElement e{std::vector<uint32_t>(n_, 0)};
    e.coeffs[0] = 1;
    return e;
}

FieldElement FieldCtx::embed(int64_t c) const {
    int64_t sp = static_cast<int64_t>(p_);
    FieldElement e{std::vector<uint32_t>(n_, 0)};
    e.coeffs[0] = static_cast<uint32_t>(((c % sp) + sp) % sp);
    return e;
}

uint64_t FieldCtx::index_of(const FieldElement& a) const {
    uint64_t idx = 0;
    for (size_t i = n_; i-- > 0;) idx = idx * p_ + a.coeffs[i];
    return idx;
}

FieldElement FieldCtx::element_at(uint64_t idx) const {
    FieldElement e{std::vector<uint32_t>(n_, 0)};
    for (uint32_t i = 0; i < n_; ++i) {
        e.coeffs[i] = static_cast<uint32_t>(idx % p_);
        idx /= p_;
    }
    return e;
}

uint64_t FieldCtx::index_add_one(uint64_t idx) const {
    uint64_t c0 = idx % p_;
    return (c0 == p_ - 1) ? idx - (p_ - 1) : idx + 1;
}

bool FieldCtx::is_zero(const FieldElement& a) const {
    for (uint32_t c : a.coeffs) {
        if (c != 0) return false;
    }
    return true;
}

FieldElement FieldCtx::add(const FieldElement& a, const FieldElement& b) const {
    FieldElement out{std::vector<uint32_t>(n_)};
    for (uint32_t i = 0; i < n_; ++i) {
        uint64_t s = static_cast<uint64_t>(a.coeffs[i]) + b.coeffs[i];
        out.coeffs[i] = static_cast<uint32_t>(s >= p_ ? s - p_ : s);
    }
    return out;
}

FieldElement FieldCtx::sub(const FieldElement& a, const FieldElement& b) const {
    FieldElement out{std::vector<uint32_t>(n_)};
    for (uint32_t i = 0; i < n_; ++i) {
        uint64_t s = static_cast<uint64_t>(a.coeffs[i]) + p_ - b.coeffs[i];
        out.coeffs[i] = static_cast<uint32_t>(s >= p_ ? s - p_ : s);
    }
    return out;
}

FieldElement FieldCtx::neg(const FieldElement& a) const {
    FieldElement out{std::vector<uint32_t>(n_)};
    for (uint32_t i = 0; i < n_; ++i) {
        out.coeffs[i] = a.coeffs[i] == 0 ? 0 : static_cast<uint32_t>(p_ - a.coeffs[i]);
    }
    return out;
}

FieldElement FieldCtx::mul(const FieldElement& a, const FieldElement& b) const {
    if (n_ == 1) {
        FieldElement out{std::vector<uint32_t>(1)};
        out.coeffs[0] = static_cast<uint32_t>(
            static_cast<uint64_t>(a.coeffs[0]) * b.coeffs[0] % p_);
        return out;
    }
    std::vector<unsigned __int128> acc(2 * n_ - 1, 0);
    for (uint32_t i = 0; i < n_; ++i) {
        if (a.coeffs[i] == 0) continue;
        for (uint32_t j = 0; j < n_; ++j) {
            acc[i + j] += static_cast<uint64_t>(a.coeffs[i]) * b.coeffs[j];
        }
    }
    std::vector<uint64_t> buf(2 * n_ - 1);
    for (size_t i = 0; i < buf.size(); ++i) buf[i] = static_cast<uint64_t>(acc[i] % p_);
    for (size_t i = buf.size(); i-- > n_;) {
        uint64_t c = buf[i];
        if (c == 0) continue;
        for (uint32_t j = 0; j < n_; ++j) {
            buf[i - n_ + j] = (buf[i - n_ + j] + c * (p_ - mod_[j])) % p_;
        }
    }
    FieldElement out{std::vector<uint32_t>(n_)};
    for (uint32_t i = 0; i < n_; ++i) out.coeffs[i] = static_cast<uint32_t>(buf[i]);
    return out;
}

FieldElement FieldCtx::pow_u64(const FieldElement& a, uint64_t e) const {
    FieldElement result = one();
    FieldElement base = a;
    while (e != 0) {
        if (e & 1) result = mul(result, base);
        base = mul(base, base);
        e >>= 1;
    }
    return result;
}

FieldElement FieldCtx::inv(const FieldElement& a) const {
    if (is_zero(a)) throw DivisionByZeroError("inverse of 0 in F_" + u64s(q_));
    return pow_u64(a, q_ - 2);
}

FieldElement FieldCtx::pow(const FieldElement& a, const cpp_int& e) const {
    if (is_zero(a)) {
        if (e == 0) return one();
        if (e < 0) throw DivisionByZeroError("0 raised to a negative power in F_" + u64s(q_));
        return zero();
    }
    cpp_int m = q_ - 1;
    cpp_int r = e % m;
    if (r < 0) r += m;
    return pow_u64(a, r.convert_to<uint64_t>());
}

int FieldCtx::eta(const FieldElement& a) const {
    if (is_zero(a)) return 0;
    FieldElement r = pow_u64(a, (q_ - 1) / 2);
    if (r == one()) return 1;
    if (r == neg(one())) return -1;
    throw InternalError("character evaluation escaped {-1,0,1} in F_" + u64s(q_));
}

} // namespace diffspec
