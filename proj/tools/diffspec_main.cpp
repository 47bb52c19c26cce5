// Command-line surface for the differential-spectrum library: compute closed
// and brute-force spectra of x^(q-3) over F_q (q = p^n, p an odd prime),
// evaluate the underlying character sums, and run the cross-check battery for
// one field or a whole sweep of them.
//
// Exit codes: 0 success, 2 invalid input, 3 cap exceeded, 4 cross-check or
// both-method mismatch, 5 internal consistency failure.
//
// Output is byte-stable: the same invocation always produces the same bytes.
// The JSON envelope gains a timing_ms field only when --timing is passed.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "diffspec/charsum.hpp"
#include "diffspec/closedform.hpp"
#include "diffspec/errors.hpp"
#include "diffspec/field.hpp"
#include "diffspec/oracle.hpp"
#include "diffspec/verify.hpp"

using json = nlohmann::ordered_json;
using namespace diffspec;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitCap = 3;
constexpr int kExitMismatch = 4;
constexpr int kExitInternal = 5;

struct GlobalOptions {
    std::string format;  // per-command default applied at dispatch
    bool timing = false;
    uint64_t cap = kDefaultOrderCap;
    unsigned workers = 1;
};

uint64_t parse_env_u64(const char* name, uint64_t fallback) {
    const char* raw = std::getenv(name);
    if (raw == nullptr || *raw == '\0') return fallback;
    char* end = nullptr;
    errno = 0;
    const unsigned long long value = std::strtoull(raw, &end, 10);
    if (errno != 0 || end == raw || *end != '\0') {
        throw UnsupportedInputError(std::string(name) +
                                    " must be a decimal integer, got \"" +
                                    raw + "\"");
    }
    return value;
}

unsigned default_workers() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// ---------------------------------------------------------------------------
// Formatting helpers
// ---------------------------------------------------------------------------

std::string bracket_list(const Spectrum& s) {
    std::ostringstream os;
    os << '[';
    for (size_t i = 0; i < s.omega.size(); ++i) {
        if (i) os << ", ";
        os << s.omega[i];
    }
    os << ']';
    return os.str();
}

json spectrum_json(const Spectrum& s) {
    json arr = json::array();
    for (const cpp_int& w : s.omega) arr.push_back(w.str());
    return arr;
}

json report_json(const SpectrumReport& r) {
    json out;
    out["p"] = r.p;
    out["n"] = r.n;
    out["d"] = r.d.str();
    out["method"] = r.method;
    out["omega"] = spectrum_json(r.spectrum);
    out["delta"] = r.spectrum.delta();
    if (r.gamma) out["gamma"] = r.gamma->str();
    if (r.lambda1) out["lambda1"] = r.lambda1->str();
    if (r.lambda2) out["lambda2"] = r.lambda2->str();
    if (r.t1_count) out["t1"] = *r.t1_count;
    if (r.m) out["m"] = r.m->str();
    return out;
}

void report_pretty(std::ostream& os, const SpectrumReport& r) {
    os << r.method << ": " << bracket_list(r.spectrum) << "\n";
    if (r.gamma) os << "  gamma = " << *r.gamma << "\n";
    if (r.lambda1) os << "  lambda1 = " << *r.lambda1 << "\n";
    if (r.lambda2) os << "  lambda2 = " << *r.lambda2 << "\n";
    if (r.t1_count) os << "  t1 = " << *r.t1_count << "\n";
    if (r.m) os << "  m = " << *r.m << "\n";
}

void report_csv_row(std::ostream& os, const SpectrumReport& r) {
    os << r.p << ',' << r.n << ',' << r.method;
    for (size_t i = 0; i < 6; ++i) {
        os << ',';
        os << (i < r.spectrum.omega.size() ? r.spectrum.omega[i] : cpp_int(0));
    }
    os << '\n';
}

json verification_json(const FieldVerification& v) {
    json out;
    out["p"] = v.p;
    out["n"] = v.n;
    out["order"] = v.order;
    out["ok"] = v.ok();
    json checks = json::array();
    for (const CheckResult& c : v.checks) {
        json jc;
        jc["name"] = c.name;
        jc["ok"] = c.ok;
        if (!c.ok) jc["detail"] = c.detail;
        checks.push_back(std::move(jc));
    }
    out["checks"] = std::move(checks);
    return out;
}

// Emits the JSON envelope (with optional timing) or raw text, then returns
// the exit code the command decided on.
class Emitter {
public:
    Emitter(std::string command, json params, const GlobalOptions& opts)
        : command_(std::move(command)),
          params_(std::move(params)),
          timing_(opts.timing),
          start_(std::chrono::steady_clock::now()) {}

    void emit_json(json result) const {
        json envelope;
        envelope["schema_version"] = "1";
        envelope["command"] = command_;
        envelope["params"] = params_;
        envelope["result"] = std::move(result);
        if (timing_) {
            envelope["timing_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                                        std::chrono::steady_clock::now() - start_)
                                        .count();
        }
        std::cout << envelope.dump(2) << "\n";
    }

private:
    std::string command_;
    json params_;
    bool timing_;
    std::chrono::steady_clock::time_point start_;
};

void check_format(const std::string& format,
                  const std::vector<std::string>& allowed) {
    for (const std::string& a : allowed) {
        if (format == a) return;
    }
    std::string list;
    for (size_t i = 0; i < allowed.size(); ++i) {
        if (i) list += ", ";
        list += allowed[i];
    }
    throw UnsupportedInputError("format \"" + format +
                                "\" is not supported here (expected one of: " +
                                list + ")");
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

int cmd_spectrum(uint64_t p, uint32_t n, const std::string& method,
                 const GlobalOptions& opts) {
    const std::string format = opts.format.empty() ? "json" : opts.format;
    check_format(format, {"json", "csv", "pretty"});

    json params;
    params["p"] = p;
    params["n"] = n;
    params["method"] = method;
    Emitter emitter("spectrum", params, opts);

    std::optional<SpectrumReport> closed;
    std::optional<SpectrumReport> brute;
    if (method == "closed" || method == "both") {
        closed = closed_spectrum(p, n);
    }
    if (method == "brute" || method == "both") {
        const FieldCtx F = FieldCtx::make(p, n, opts.cap);
        brute = brute_spectrum(F, cpp_int(F.order()) - 3, opts.workers);
    }
    const bool match =
        !closed || !brute || spectra_equal(closed->spectrum, brute->spectrum);

    if (format == "json") {
        json result;
        if (closed && brute) {
            result["closed"] = report_json(*closed);
            result["brute"] = report_json(*brute);
            result["match"] = match;
        } else {
            result = report_json(closed ? *closed : *brute);
        }
        emitter.emit_json(std::move(result));
    } else if (format == "csv") {
        std::ostringstream os;
        os << "p,n,method,omega_0,omega_1,omega_2,omega_3,omega_4,omega_5\n";
        if (closed) report_csv_row(os, *closed);
        if (brute) report_csv_row(os, *brute);
        std::cout << os.str();
    } else {
        const SpectrumReport& head = closed ? *closed : *brute;
        std::cout << "F_{" << p << "^" << n << "}, d = " << head.d << "\n";
        if (closed) report_pretty(std::cout, *closed);
        if (brute) report_pretty(std::cout, *brute);
        if (closed && brute) {
            std::cout << (match ? "match\n" : "MISMATCH\n");
        }
    }
    return match ? kExitOk : kExitMismatch;
}

int cmd_gamma(uint64_t p, uint32_t n, const GlobalOptions& opts) {
    const std::string format = opts.format.empty() ? "pretty" : opts.format;
    check_format(format, {"json", "pretty"});

    json params;
    params["p"] = p;
    params["n"] = n;
    Emitter emitter("gamma", params, opts);

    const cpp_int value = gamma(p, n);
    if (format == "json") {
        json result;
        result["gamma"] = value.str();
        emitter.emit_json(std::move(result));
    } else {
        std::cout << value << "\n";
    }
    return kExitOk;
}

int cmd_gamma_table(uint64_t max_p, const GlobalOptions& opts) {
    const std::string format = opts.format.empty() ? "csv" : opts.format;
    check_format(format, {"csv", "json"});

    json params;
    params["max_p"] = max_p;
    Emitter emitter("gamma-table", params, opts);

    if (max_p < 5) {
        throw UnsupportedInputError(
            "gamma-table needs --max-p >= 5 (the sum is defined for p >= 5)");
    }
    if (max_p > 0xFFFFFFFFull) {
        throw CapExceededError("gamma-table bound exceeds the sieve range");
    }

    std::ostringstream csv;
    csv << "p,gamma_p_1\n";
    json rows = json::array();
    for (uint32_t p : primes_up_to(static_cast<uint32_t>(max_p))) {
        if (p < 5) continue;
        const cpp_int value = gamma(p, 1);
        if (format == "csv") {
            csv << p << ',' << value << '\n';
        } else {
            json row;
            row["p"] = p;
            row["gamma"] = value.str();
            rows.push_back(std::move(row));
        }
    }
    if (format == "csv") {
        std::cout << csv.str();
    } else {
        json result;
        result["rows"] = std::move(rows);
        emitter.emit_json(std::move(result));
    }
    return kExitOk;
}

int cmd_charsum(uint64_t p, uint32_t n, const std::string& which,
                const std::string& method, const GlobalOptions& opts) {
    const std::string format = opts.format.empty() ? "pretty" : opts.format;
    check_format(format, {"json", "pretty"});

    json params;
    params["p"] = p;
    params["n"] = n;
    params["which"] = which;
    params["method"] = method;
    Emitter emitter("charsum", params, opts);

    CharSumKind kind;
    if (which == "gamma") {
        kind = CharSumKind::gamma;
    } else if (which == "lambda1") {
        kind = CharSumKind::lambda1;
    } else {
        kind = CharSumKind::lambda2;
    }

    cpp_int value;
    if (method == "closed") {
        value = char_sum(p, n, kind).value;
    } else {
        const FieldCtx F = FieldCtx::make(p, n, opts.cap);
        value = brute_charsum(F, kind);
    }

    if (format == "json") {
        json result;
        result["which"] = which;
        result["method"] = method;
        result["value"] = value.str();
        emitter.emit_json(std::move(result));
    } else {
        std::cout << value << "\n";
    }
    return kExitOk;
}

int cmd_verify(uint64_t p, uint32_t n, const GlobalOptions& opts) {
    const std::string format = opts.format.empty() ? "pretty" : opts.format;
    check_format(format, {"json", "pretty"});

    json params;
    params["p"] = p;
    params["n"] = n;
    Emitter emitter("verify", params, opts);

    VerifyOptions vopts;
    vopts.workers = opts.workers;
    const FieldVerification v = verify_field(p, n, opts.cap, vopts);

    if (format == "json") {
        emitter.emit_json(verification_json(v));
    } else {
        std::cout << "p=" << v.p << " n=" << v.n << " q=" << v.order << "\n";
        for (const CheckResult& c : v.checks) {
            std::cout << "  " << c.name << (c.ok ? " ok" : " FAIL") ;
            if (!c.ok) std::cout << " (" << c.detail << ")";
            std::cout << "\n";
        }
        std::cout << (v.ok() ? "all checks passed\n" : "FAILED\n");
    }
    return v.ok() ? kExitOk : kExitMismatch;
}

int cmd_sweep(uint64_t max_order, const GlobalOptions& opts) {
    const std::string format = opts.format.empty() ? "pretty" : opts.format;
    check_format(format, {"json", "pretty"});

    json params;
    params["max_order"] = max_order;
    Emitter emitter("sweep", params, opts);

    if (max_order > opts.cap) {
        throw CapExceededError("sweep bound " + std::to_string(max_order) +
                               " exceeds the order cap " +
                               std::to_string(opts.cap));
    }

    VerifyOptions vopts;
    vopts.workers = opts.workers;

    std::ostringstream lines;
    const SweepSummary summary = sweep_verify(
        max_order, vopts, [&](const FieldVerification& v) {
            if (format == "pretty") {
                lines << "p=" << v.p << " n=" << v.n << " q=" << v.order
                      << " checks=" << v.checks.size()
                      << (v.ok() ? " ok" : " FAIL") << "\n";
            }
        });

    if (format == "json") {
        json result;
        result["max_order"] = max_order;
        result["fields"] = summary.fields;
        result["checks"] = summary.checks;
        result["failed_checks"] = summary.failed_checks;
        result["ok"] = summary.ok();
        json failures = json::array();
        for (const FieldVerification& v : summary.failures) {
            failures.push_back(verification_json(v));
        }
        result["failures"] = std::move(failures);
        emitter.emit_json(std::move(result));
    } else {
        std::cout << lines.str();
        std::cout << "fields=" << summary.fields << " checks=" << summary.checks
                  << " failed_checks=" << summary.failed_checks
                  << (summary.ok() ? " ok" : " FAILED") << "\n";
    }
    return summary.ok() ? kExitOk : kExitMismatch;
}

}  // namespace

int main(int argc, char** argv) {
    GlobalOptions opts;
    uint64_t p = 0;
    uint32_t n = 1;
    uint64_t max_p = 1000;
    uint64_t max_order = 100000;
    std::string method_spectrum = "closed";
    std::string method_charsum = "closed";
    std::string which = "gamma";

    CLI::App app{
        "Exact differential spectrum of x^(q-3) over F_q, q = p^n with p an "
        "odd prime: closed-form evaluation, brute-force enumeration, and "
        "cross-check batteries."};
    app.require_subcommand(1);
    app.fallthrough();

    bool cap_set = false;
    bool workers_set = false;
    app.add_option("--format", opts.format,
                   "Output format: json, csv or pretty (default depends on "
                   "the subcommand)");
    app.add_flag("--timing", opts.timing,
                 "Include timing_ms in the JSON envelope (off by default so "
                 "identical runs emit identical bytes)");
    app.add_option("--cap", opts.cap,
                   "Upper bound on explicit field orders (overrides BRUTE_CAP; "
                   "default 2^24)")
        ->check(CLI::PositiveNumber)
        ->each([&](const std::string&) { cap_set = true; });
    app.add_option("--workers", opts.workers,
                   "Worker threads for enumeration passes (overrides WORKERS; "
                   "default: hardware concurrency)")
        ->check(CLI::PositiveNumber)
        ->each([&](const std::string&) { workers_set = true; });

    CLI::App* spectrum = app.add_subcommand(
        "spectrum", "Differential spectrum of x^(q-3) over F_{p^n}");
    spectrum->add_option("--p", p, "Odd prime p")->required();
    spectrum->add_option("--n", n, "Extension degree n >= 1")->required();
    spectrum->add_option("--method", method_spectrum,
                         "closed, brute, or both (both exits 4 on mismatch)")
        ->check(CLI::IsMember({"closed", "brute", "both"}));

    CLI::App* gamma_cmd = app.add_subcommand(
        "gamma", "Character sum gamma over F_{p^n} via the trace recurrence");
    gamma_cmd->add_option("--p", p, "Odd prime p >= 5")->required();
    gamma_cmd->add_option("--n", n, "Extension degree n >= 1 (default 1)");

    CLI::App* gamma_table = app.add_subcommand(
        "gamma-table", "CSV table of gamma over F_p for all primes 5..max-p");
    gamma_table->add_option("--max-p", max_p, "Largest prime to include")
        ->required();

    CLI::App* charsum_cmd = app.add_subcommand(
        "charsum", "One character sum (gamma, lambda1 or lambda2)");
    charsum_cmd->add_option("--p", p, "Odd prime p")->required();
    charsum_cmd->add_option("--n", n, "Extension degree n >= 1")->required();
    charsum_cmd
        ->add_option("--which", which, "gamma, lambda1 or lambda2")
        ->required()
        ->check(CLI::IsMember({"gamma", "lambda1", "lambda2"}));
    charsum_cmd
        ->add_option("--method", method_charsum,
                     "closed (recurrence) or brute (field enumeration)")
        ->check(CLI::IsMember({"closed", "brute"}));

    CLI::App* verify = app.add_subcommand(
        "verify", "Cross-check battery for one field F_{p^n}");
    verify->add_option("--p", p, "Odd prime p")->required();
    verify->add_option("--n", n, "Extension degree n >= 1")->required();

    CLI::App* sweep = app.add_subcommand(
        "sweep",
        "Cross-check battery for every odd prime power in (3, max-order]");
    sweep->add_option("--max-order", max_order, "Largest field order to visit")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e);  // --help and friends
        }
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    }

    try {
        if (!cap_set) opts.cap = parse_env_u64("BRUTE_CAP", kDefaultOrderCap);
        if (!workers_set) {
            opts.workers = static_cast<unsigned>(
                parse_env_u64("WORKERS", default_workers()));
        }
        if (opts.cap == 0) {
            throw UnsupportedInputError("the order cap must be positive");
        }
        if (opts.workers == 0) opts.workers = 1;

        if (spectrum->parsed()) {
            return cmd_spectrum(p, n, method_spectrum, opts);
        }
        if (gamma_cmd->parsed()) return cmd_gamma(p, n, opts);
        if (gamma_table->parsed()) return cmd_gamma_table(max_p, opts);
        if (charsum_cmd->parsed()) {
            return cmd_charsum(p, n, which, method_charsum, opts);
        }
        if (verify->parsed()) return cmd_verify(p, n, opts);
        if (sweep->parsed()) return cmd_sweep(max_order, opts);
        std::cerr << "error: no subcommand selected\n";
        return kExitInvalid;
    } catch (const CapExceededError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCap;
    } catch (const InternalError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
