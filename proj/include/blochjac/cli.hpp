#ifndef BLOCHJAC_CLI_HPP
#define BLOCHJAC_CLI_HPP

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "blochjac/inverse.hpp"
#include "blochjac/operator.hpp"

namespace blochjac::cli {

inline constexpr const char* kSchema = "blochjac/1";
inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode { ok = 0, failure = 1, invalid_input = 2, consistency = 3, inconsistent_data = 4, verification = 5 };

/// Raised while reading a document; carries every violation found.
struct DocumentError : std::invalid_argument {
  explicit DocumentError(std::vector<std::string> v);
  std::vector<std::string> violations;
};

nlohmann::ordered_json operator_to_json(const PeriodicOperator& op);
/// Throws DocumentError listing every problem, including operator invariants.
PeriodicOperator operator_from_json(const nlohmann::json& doc);

nlohmann::ordered_json spectral_data_to_json(const SpectralData& sd);
SpectralData spectral_data_from_json(const nlohmann::json& doc);

/// FNV-1a 64-bit, as 16 lowercase hex digits.
std::string digest(std::string_view bytes);

/// Angles like "0", "pi", "pi/2", "2pi/3", "-0.25".
double parse_angle(const std::string& text);

/// Runs the command line (without the program name). Returns the exit code.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace blochjac::cli

#endif  // BLOCHJAC_CLI_HPP
