#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace deplens::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// Two-column plot series written as `<command>.<name>.csv`.
struct Curve {
    std::string name;
    std::string x_label;
    std::string y_label;
    std::vector<std::pair<double, double>> points;
};

struct Report {
    std::string command;
    nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
    nlohmann::ordered_json payload = nlohmann::ordered_json::object();
    std::vector<Curve> curves;
    std::string manifest_hash;
    std::optional<double> wall_time_s;  // only recorded on request; breaks byte-identity
};

/// Self-describing record: tool version, manifest hash, command, parameters, payload.
[[nodiscard]] nlohmann::ordered_json envelope(const Report& report);

/// Shortest decimal string that parses back to `x`.
[[nodiscard]] std::string format_number(double x);

/// Writes every curve of `report` into `out_dir` (created if missing) and
/// returns the paths in curve order. Throws std::runtime_error when the
/// directory cannot be written.
std::vector<std::filesystem::path> emit_curves(const Report& report, const std::filesystem::path& out_dir);

/// `key,value` rows of every scalar leaf, keys as dotted JSON paths.
[[nodiscard]] std::string flatten_csv(const nlohmann::ordered_json& doc);

/// Exit codes of `run`.
enum ExitCode : int { ok = 0, data_failure = 1, usage_error = 2, internal_error = 3 };

/// Full command-line entry point. argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace deplens::cli
