#include "diffspec/charsum.hpp"

#include <string>
#include <vector>

namespace diffspec {

namespace {

void check_p_ge_5(uint64_t p) {
    check_odd_prime(p);
    if (p < 5) {
        throw InvalidPrimeError("operation needs p >= 5, got p = " + std::to_string(p) +
                                " (the p = 3 case has its own formulas)");
    }
}

} // namespace

uint64_t count_ec_points(uint64_t p) {
    check_p_ge_5(p);
    uint64_t count = 0;
    if (p <= (uint64_t{1} << 26)) {
        // Mark the nonzero squares once, then walk x with cheap arithmetic.
        std::vector<uint8_t> sq(p, 0);
        for (uint64_t y = 1; y <= p / 2; ++y) sq[y * y % p] = 1;
        for (uint64_t x = 0; x < p; ++x) {
            uint64_t t = x * ((x + p - 1) % p) % p * ((x + 3) % p) % p;
            if (t == 0) {
                count += 1;
            } else if (sq[t]) {
                count += 2;
            }
        }
    } else {
        for (uint64_t x = 0; x < p; ++x) {
            uint64_t t = mul_mod(mul_mod(x, (x + p - 1) % p, p), (x + 3) % p, p);
            count += static_cast<uint64_t>(1 + legendre(static_cast<int64_t>(t), p));
        }
    }
    return count;
}

GammaParams GammaParams::compute(uint64_t p) {
    GammaParams gp;
    gp.p = p;
    gp.n_points = count_ec_points(p);
    gp.a = static_cast<int64_t>(gp.n_points) - static_cast<int64_t>(p);
    if (static_cast<unsigned __int128>(gp.a) * gp.a >= 4 * static_cast<unsigned __int128>(p)) {
        throw InternalError("curve trace " + std::to_string(gp.a) + " violates a^2 < 4p at p = " +
                            std::to_string(p));
    }
    return gp;
}

const char* char_sum_kind_name(CharSumKind which) {
    switch (which) {
        case CharSumKind::gamma: return "gamma";
        case CharSumKind::lambda1: return "lambda1";
        case CharSumKind::lambda2: return "lambda2";
    }
    throw InternalError("unknown character-sum tag");
}

cpp_int gamma(const GammaParams& gp, uint32_t n) {
    if (n == 0) throw UnsupportedInputError("exponent n must be >= 1");
    // Power sums of the roots of T^2 + aT + p.
    cpp_int prev = 2;
    cpp_int cur = -cpp_int(gp.a);
    for (uint32_t k = 2; k <= n; ++k) {
        cpp_int next = -gp.a * cur - cpp_int(gp.p) * prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    cpp_int value = -cur;
    cpp_int qn = boost::multiprecision::pow(cpp_int(gp.p), n);
    if (value * value > 4 * qn) {
        throw InternalError("gamma recurrence escaped the Weil bound at p = " +
                            std::to_string(gp.p) + ", n = " + std::to_string(n));
    }
    return value;
}

cpp_int gamma(uint64_t p, uint32_t n) {
    check_p_ge_5(p);
    return gamma(GammaParams::compute(p), n);
}

cpp_int lambda1(const GammaParams& gp, uint32_t n) {
    return gamma(gp, n) - eta_base(-3, gp.p, n);
}

cpp_int lambda1(uint64_t p, uint32_t n) {
    check_odd_prime(p);
    if (p == 3) return cpp_int(-eta_base(-1, 3, n));
    return lambda1(GammaParams::compute(p), n);
}

cpp_int lambda2(const GammaParams& gp, uint32_t n) {
    return gamma(gp, n) - 1;
}

cpp_int lambda2(uint64_t p, uint32_t n) {
    check_odd_prime(p);
    if (p == 3) return cpp_int(-1 - eta_base(2, 3, n));
    return lambda2(GammaParams::compute(p), n);
}

CharSumValue char_sum(uint64_t p, uint32_t n, CharSumKind which) {
    CharSumValue out{which, p, n, 0};
    switch (which) {
        case CharSumKind::gamma: out.value = gamma(p, n); break;
        case CharSumKind::lambda1: out.value = lambda1(p, n); break;
        case CharSumKind::lambda2: out.value = lambda2(p, n); break;
    }
    cpp_int mag = abs(out.value);
    if (mag > 2) {
        cpp_int qn = boost::multiprecision::pow(cpp_int(p), n);
        if ((mag - 2) * (mag - 2) > 4 * qn) {
            throw InternalError(std::string(char_sum_kind_name(which)) +
                                " value exceeds its magnitude bound at p = " + std::to_string(p) +
                                ", n = " + std::to_string(n));
        }
    }
    return out;
}

cpp_int brute_charsum(const FieldCtx& ctx, CharSumKind which) {
    const FieldElement one = ctx.one();
    const FieldElement three = ctx.embed(3);
    const FieldElement four = ctx.embed(4);
    int64_t sum = 0;
    for (uint64_t i = 0; i < ctx.order(); ++i) {
        FieldElement x = ctx.element_at(i);
        FieldElement arg;
        switch (which) {
            case CharSumKind::gamma:
                arg = ctx.mul(ctx.mul(x, ctx.sub(x, one)), ctx.add(x, three));
                break;
            case CharSumKind::lambda1: {
                FieldElement x2 = ctx.mul(x, x);
                arg = ctx.mul(ctx.sub(x2, four), ctx.neg(ctx.add(ctx.mul(three, x2), four)));
                break;
            }
            case CharSumKind::lambda2: {
                FieldElement x2 = ctx.mul(x, x);
                arg = ctx.mul(ctx.add(x2, one), ctx.add(x2, ctx.add(ctx.mul(four, x), one)));
                break;
            }
        }
        sum += ctx.eta(arg);
    }
    return cpp_int(sum);
}

} // namespace diffspec
