#pragma once

// Cross-check battery: every closed-form quantity versus its brute-force
// counterpart over one explicit field, plus a sweep of that battery over all
// odd prime powers up to a bound.  A check failure is reported as data (for
// the CLI to turn into a mismatch exit code), not as an exception; exceptions
// out of here mean invalid input or an internal assertion, never a mismatch.

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "diffspec/charsum.hpp"
#include "diffspec/closedform.hpp"
#include "diffspec/field.hpp"
#include "diffspec/oracle.hpp"

namespace diffspec {

// One quadratic-character sum evaluated with table lookups over the explicit
// field: same value as brute_charsum, but O(1) character evaluations, which
// is what makes whole-sweep verification affordable.
cpp_int table_charsum(const FieldCtx& ctx, const EtaTable& eta,
                      CharSumKind which);

struct CheckResult {
    std::string name;
    bool ok = false;
    std::string detail;  // empty when ok, diagnostic otherwise
};

struct FieldVerification {
    uint64_t p = 0;
    uint32_t n = 0;
    uint64_t order = 0;
    std::vector<CheckResult> checks;

    bool ok() const;
};

struct VerifyOptions {
    // Partitioning for the histogram pass (single-field use; the sweep
    // parallelizes across fields instead and pins this to 1 per field).
    unsigned workers = 1;
    // Element-iteration budget per field for the literal quartic-root
    // sampling; between 2 and 200 outputs are sampled, each scanned twice
    // (once for b, once for -b).
    uint64_t sample_budget = 100000;
    // Seed mixed with (p, n) so sampling is deterministic per field.
    uint64_t rng_seed = 20260824;
};

// Runs the battery for one field of order p^n <= max_order:
//   spectrum_equal            brute spectrum = closed spectrum, entrywise
//   charsum_gamma/lambda1/2   table-lookup sums = recurrence values
//   set_a                     enumerated |A| = closed-form size
//   m_three_ways              closed M = moment-recovered M (brute and closed)
//   center_single_solution    N(0) = 1
//   nb_symmetry               N(b) = N(-b) for every b
//   delta_le_5                largest multiplicity at most 5
//   moment_identities         sum omega = sum i*omega = q on the brute side
//   quartic_correspondence    N(b) vs quartic root counts for every b (via
//                             the algebraic bridge b = -(2x+1)/(x(x+1))^2)
//   quartic_sampled           N(b) vs literal root scans on sampled b
//   weil_bound                gamma^2 <= 4q (p >= 5)
//   corollary_agreement       per-prime formulas = closed form (p = 3, 5, 7)
FieldVerification verify_field(uint64_t p, uint32_t n,
                               uint64_t max_order = kDefaultOrderCap,
                               const VerifyOptions& options = {});

struct SweepSummary {
    uint64_t fields = 0;
    uint64_t checks = 0;
    uint64_t failed_checks = 0;
    std::vector<FieldVerification> failures;  // fields with a failing check

    bool ok() const { return failed_checks == 0; }
};

// The exact field list a sweep visits: all (p, n) with p an odd prime,
// n >= 1 and 3 < p^n <= max_order, ascending by order (ties impossible).
std::vector<std::pair<uint64_t, uint32_t>> sweep_fields(uint64_t max_order);

// Battery over every swept field.  per_field (optional) observes each result
// in sweep_fields order; with workers > 1 the fields are verified in parallel
// and the observations are replayed in order afterwards, so output built from
// them is deterministic.
SweepSummary sweep_verify(
    uint64_t max_order, const VerifyOptions& options = {},
    const std::function<void(const FieldVerification&)>& per_field = {});

}  // namespace diffspec
