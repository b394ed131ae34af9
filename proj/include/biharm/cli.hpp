/**
 * @file cli.hpp
 * @brief Command-line front end: subcommands, JSON run reports and CSV
 *        profiles / tables.
 *
 * Exit codes: 0 when the run completed and every assertion held, 1 on an
 * assertion failure or a module error, 2 on a config or usage error.
 */
#ifndef BIHARM_CLI_HPP
#define BIHARM_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "biharm/config.hpp"

namespace biharm::cli {

inline constexpr const char* kArtifactVersion = "1.0.0";
inline constexpr int kReportFormatVersion = 1;
inline constexpr int kCsvFormatVersion = 1;

enum ExitCode : int { kOk = 0, kAssertionFailed = 1, kConfigError = 2 };

using Json = nlohmann::ordered_json;

struct Assertion {
    std::string name;
    bool passed = false;
    std::string detail;
};

/**
 * Run report. Everything except the footer is a deterministic function of
 * the config, the flags and the binary; timings and the thread count live in
 * the footer.
 */
class Report {
public:
    Report(std::string command, const ProblemConfig& cfg);

    Json& body() { return body_; }
    void check(const std::string& name, bool passed, const std::string& detail = "");
    void timing(const std::string& phase, double milliseconds);

    const std::vector<Assertion>& assertions() const { return assertions_; }
    bool passed() const;
    Json document() const;
    /// Document without the footer (the byte-stable part).
    Json stable_document() const;

private:
    std::string command_;
    Json config_;
    std::string digest_;
    Json body_ = Json::object();
    std::vector<Assertion> assertions_;
    Json timings_ = Json::object();
};

/// `# format_version=1` line, header `r,u,w,lambda`, one row per cell.
void write_profile_csv(std::ostream& out, const FieldVector& u, const FieldVector& w, double lambda);

/// Formats a double with round-trip precision (%.17g).
std::string format_real(double x);

/// Parses "a,b,c" into reals; throws ConfigError on malformed input.
std::vector<double> parse_real_list(const std::string& text, const std::string& flag);

/// Entry point shared by the binary and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace biharm::cli

#endif  // BIHARM_CLI_HPP
