#pragma once

// Machine-readable reports and the full verification battery behind the CLI.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "specfam/gallery.hpp"
#include "specfam/linalg.hpp"

namespace specfam {

inline constexpr const char* tool_version = "specfam 0.1.0";

struct VerifyConfig {
    double tol_scale = 1.0;  ///< multiplies every documented tolerance
    int k_max = 64;          ///< quadrature refinements k = 1, 2, 4, ..., k_max
    double beta = 1.5;       ///< splitting parameter
    std::uint64_t seed = 1;  ///< drives every randomized probe
    int trials = 20;         ///< random vectors per randomized check
};

/// One line of the battery. `anchor` names the statement being checked by its formula.
struct CheckRecord {
    std::string name;
    std::string anchor;
    bool passed = false;
    double residual = 0.0;
    double tolerance = 0.0;
    std::string note;
};

nlohmann::json to_json(const CheckRecord& r);
nlohmann::json to_json(const OperatorSpec& s);

/// Top-level object shared by every command: tool version, timestamp, input.
nlohmann::json report_envelope(const std::string& command, const OperatorSpec& spec);

/// Jump points, increment ranks and family-axiom residuals for both routes.
template <Field T>
nlohmann::json analyze_report(const HermitianMatrix<T>& a, const VerifyConfig& cfg);

/// beta, rank E, spectra extremes of A_- and A_+, invariant residuals.
template <Field T>
nlohmann::json split_report(const HermitianMatrix<T>& a, const VerifyConfig& cfg);

/// Per-k error table (k, err1, bound1, err2, bound2) for the nonnegative part
/// of A and a seeded random x, plus operator reconstruction residuals.
template <Field T>
nlohmann::json reconstruct_report(const HermitianMatrix<T>& a, const VerifyConfig& cfg);

/// Every check of the battery, failures first.
template <Field T>
std::vector<CheckRecord> run_checks(const HermitianMatrix<T>& a, const VerifyConfig& cfg);

/// Full report: checks, summaries, and "status": "pass" | "fail".
template <Field T>
nlohmann::json verify_report(const HermitianMatrix<T>& a, const OperatorSpec& spec,
                             const VerifyConfig& cfg);

}  // namespace specfam
