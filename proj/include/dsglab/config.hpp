#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "dsglab/scenario.hpp"

namespace dsglab {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parses the line-oriented `key = value` scenario format (dotted sections
/// grid.*, dsg.*, load.*, init.*, events[n].*; '#' starts a comment).
/// Omitted fields keep their defaults. Unknown keys and invariant
/// violations are hard errors with line diagnostics.
Scenario parse_config(const std::string& text);

/// Inverse of parse_config: emits every field with 17 significant digits
/// in a fixed order, so parse_config(serialize_config(s)) == s and the
/// output is byte-stable.
std::string serialize_config(const Scenario& scenario);

/// Applies a single `key=value` override using the config-file key space.
void apply_override(Scenario& scenario, const std::string& key, const std::string& value);

/// Built-in reproduction scenarios: fig4, fig5a, fig5b, fig6a, fig6b, fig8.
Scenario builtin_scenario(const std::string& name);

const std::vector<std::string>& builtin_names();

bool operator==(const Scenario& a, const Scenario& b);

}  // namespace dsglab
