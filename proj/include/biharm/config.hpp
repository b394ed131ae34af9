/**
 * @file config.hpp
 * @brief Flat typed key = value problem files: schema, validation and the
 *        mapping onto ProblemSpec / IterationControls.
 */
#ifndef BIHARM_CONFIG_HPP
#define BIHARM_CONFIG_HPP

#include <cstdint>
#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "biharm/monotone_solver.hpp"
#include "biharm/problem_model.hpp"

namespace biharm {

/// Schema or value error in a problem file. Maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kConfigFormatVersion = 1;

enum class ValueType { Int, Real, Text, RealList };

struct SchemaEntry {
    std::string key;
    ValueType type;
    std::string description;
};

/// Every key the parser knows about, in canonical order.
const std::vector<SchemaEntry>& config_schema();

struct ProblemConfig {
    /// Canonical (trimmed) values keyed by path, as read.
    std::map<std::string, std::string> entries;
    ProblemSpec spec;
    IterationControls controls;
    /// FNV-1a 64 of the canonical key = value listing, hex.
    std::string digest;
};

/// Parses and validates; `origin` is used in error messages.
ProblemConfig parse_config(std::istream& in, const std::string& origin = "<config>");
ProblemConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");
ProblemConfig load_config(const std::string& path);

std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a_hex(std::string_view bytes);

/// Canonical listing "key = value\n" in sorted key order.
std::string canonical_text(const std::map<std::string, std::string>& entries);

}  // namespace biharm

#endif  // BIHARM_CONFIG_HPP
