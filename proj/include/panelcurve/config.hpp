#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "panelcurve/design.hpp"
#include "panelcurve/estimators.hpp"
#include "panelcurve/transforms.hpp"

namespace panelcurve {

enum class OutputFormat { text, csv, json };
enum class NairuSource { unemployment, inflation };

const char* to_string(OutputFormat format);
const char* to_string(NairuSource source);
OutputFormat output_format_from_string(const std::string& name);

/// Full pipeline configuration. Every key has a default so a bare
/// `panelcurve run data.csv` works; see config_key_help() for the key list.
struct AnalysisConfig {
    std::string input_path;

    RecessionRule recession_rule = RecessionRule::nonpositive;
    std::map<std::string, double> log_shift_overrides; // variable -> shift constant

    double hp_lambda = 0.0; // 0 = derive from the frequency rule below
    double hp_exponent = 2.0;
    int hp_periods_per_year = 4;
    NairuSource nairu_source = NairuSource::unemployment;

    std::vector<ExpectationMode> modes = {ExpectationMode::backward, ExpectationMode::forward};
    std::vector<Effects> effects_to_run = {Effects::pooled, Effects::entity_fixed,
                                           Effects::random};

    double level = 0.05;
    OutputFormat format = OutputFormat::text;
    bool unitroot_enabled = true;
    int max_lag = 13;
    WhiteFlavor white_flavor = WhiteFlavor::hc0;
    std::uint64_t seed = 0; // reserved for randomized diagnostics

    double effective_lambda() const;
    void validate() const; // throws ConfigError

    // Deterministic key=value echo of every setting, for provenance blocks.
    std::vector<std::pair<std::string, std::string>> echo() const;
};

// Flat key-value config files: `key = value`, '#' comments, dotted keys.
AnalysisConfig load_config_file(const std::string& path);
void apply_config_entry(AnalysisConfig& config, const std::string& key, const std::string& value);

std::string config_key_help();

} // namespace panelcurve
