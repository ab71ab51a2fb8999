#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "walras/economy.hpp"
#include "walras/rng.hpp"

namespace walras::cli {

// Exit-code contract shared by run_command and the binary.
inline constexpr int kExitOk = 0;
inline constexpr int kExitAnalyticFail = 2;  // certificate rejected or probe failed
inline constexpr int kExitSchemaError = 3;
inline constexpr int kExitBudgetExhausted = 4;

/// Malformed document: carries the offending field path (JSON-pointer-ish)
/// or the line/column of a syntax error.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string message, std::string path);

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct ParsedDocument {
  Economy economy;
  std::vector<StructureViolation> violations;  // parse still succeeds
  std::uint64_t seed = kDefaultSeed;
  std::optional<double> epsilon;  // document-level tolerance, if given
  std::string canonical;          // round-trip form with defaults filled in
};

/// Parses an economy document. Schema violations throw SchemaError;
/// structural violations are returned as data for the audit command.
ParsedDocument parse_economy(const std::string& text);

/// Canonical document text for an economy; parse(serialize(e)) is identical
/// to e and serialize is a fixed point on parsed documents.
std::string serialize_economy(const Economy& econ, std::uint64_t seed = kDefaultSeed,
                              std::optional<double> epsilon = std::nullopt);

/// FNV-1a over the canonical document, as a hex string.
std::string economy_digest(const Economy& econ);

enum class ReportFormat { human, machine };

struct CommandRequest {
  std::string verb;  // solve | certify | audit | probe | trace
  std::string document_text;
  ReportFormat format = ReportFormat::human;

  std::optional<std::vector<double>> price;  // certify, probe
  bool pathology = false;                    // probe
  std::size_t agent_index = 0;               // probe
  std::optional<std::vector<double>> start;  // trace
  double step = 0.1;                         // trace
  std::size_t iterations = 200;              // trace

  std::optional<double> epsilon;
  std::optional<double> margin_override;
  std::optional<std::uint64_t> seed_override;
  std::size_t max_refinements = 12;
};

struct RunOutcome {
  int exit_code = kExitOk;
  std::string report;
};

/// Dispatches one command and renders its report. The machine format is
/// byte-for-byte reproducible for a fixed document, flags and seed; the
/// human format additionally reports wall time.
RunOutcome run_command(const CommandRequest& request);

}  // namespace walras::cli
