#include "panelcurve/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "panelcurve/errors.hpp"
#include "panelcurve/hp_filter.hpp"

namespace panelcurve {

const char* to_string(OutputFormat format) {
    switch (format) {
        case OutputFormat::text: return "text";
        case OutputFormat::csv: return "csv";
        case OutputFormat::json: return "json";
    }
    return "?";
}

const char* to_string(NairuSource source) {
    return source == NairuSource::unemployment ? "unemployment" : "inflation";
}

OutputFormat output_format_from_string(const std::string& name) {
    if (name == "text") return OutputFormat::text;
    if (name == "csv") return OutputFormat::csv;
    if (name == "json") return OutputFormat::json;
    throw ConfigError("unknown output format '" + name + "' (text|csv|json)");
}

double AnalysisConfig::effective_lambda() const {
    return hp_lambda > 0.0 ? hp_lambda
                           : ravn_uhlig_lambda(hp_periods_per_year, hp_exponent);
}

void AnalysisConfig::validate() const {
    if (modes.empty()) throw ConfigError("config: at least one expectation mode is required");
    if (effects_to_run.empty()) throw ConfigError("config: at least one effects kind is required");
    if (!(level > 0.0 && level < 0.5))
        throw ConfigError("config: significance level must lie in (0, 0.5)");
    if (max_lag < 0) throw ConfigError("config: unitroot.max_lag must be >= 0");
    if (hp_lambda < 0.0) throw ConfigError("config: hp.lambda must be >= 0");
    if (hp_periods_per_year < 1) throw ConfigError("config: hp.periods_per_year must be >= 1");
    if (!(hp_exponent > 0.0)) throw ConfigError("config: hp.exponent must be positive");
    for (const auto& [name, c] : log_shift_overrides)
        if (!(c > 0.0)) throw ConfigError("config: log_shift." + name + " must be positive");
}

namespace {

double parse_double(const std::string& key, const std::string& value) {
    double out = 0.0;
    auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || p != value.data() + value.size())
        throw ConfigError("config: key '" + key + "': expected a number, got '" + value + "'");
    return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("config: key '" + key + "': expected a boolean, got '" + value + "'");
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : value) {
        if (c == ',') {
            if (!cur.empty()) parts.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) parts.push_back(cur);
    return parts;
}

Effects effects_from_string(const std::string& name) {
    if (name == "pooled") return Effects::pooled;
    if (name == "fixed") return Effects::entity_fixed;
    if (name == "random") return Effects::random;
    throw ConfigError("unknown effects kind '" + name + "' (pooled|fixed|random)");
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

} // namespace

void apply_config_entry(AnalysisConfig& config, const std::string& key,
                        const std::string& value) {
    if (key == "input") {
        config.input_path = value;
    } else if (key == "recession_rule") {
        config.recession_rule = recession_rule_from_string(value);
    } else if (key.rfind("log_shift.", 0) == 0) {
        config.log_shift_overrides[key.substr(10)] = parse_double(key, value);
    } else if (key == "hp.lambda") {
        config.hp_lambda = parse_double(key, value);
    } else if (key == "hp.exponent") {
        config.hp_exponent = parse_double(key, value);
    } else if (key == "hp.periods_per_year") {
        config.hp_periods_per_year = static_cast<int>(parse_double(key, value));
    } else if (key == "hp.nairu_source") {
        if (value == "unemployment")
            config.nairu_source = NairuSource::unemployment;
        else if (value == "inflation")
            config.nairu_source = NairuSource::inflation;
        else
            throw ConfigError("config: hp.nairu_source must be unemployment|inflation");
    } else if (key == "modes") {
        config.modes.clear();
        for (const auto& m : split_list(value)) {
            ExpectationMode mode = expectation_mode_from_string(m);
            if (std::find(config.modes.begin(), config.modes.end(), mode) == config.modes.end())
                config.modes.push_back(mode);
        }
    } else if (key == "effects") {
        config.effects_to_run.clear();
        for (const auto& e : split_list(value)) {
            Effects effects = effects_from_string(e);
            if (std::find(config.effects_to_run.begin(), config.effects_to_run.end(), effects) ==
                config.effects_to_run.end())
                config.effects_to_run.push_back(effects);
        }
    } else if (key == "level") {
        config.level = parse_double(key, value);
    } else if (key == "format") {
        config.format = output_format_from_string(value);
    } else if (key == "unitroot.enabled") {
        config.unitroot_enabled = parse_bool(key, value);
    } else if (key == "unitroot.max_lag") {
        config.max_lag = static_cast<int>(parse_double(key, value));
    } else if (key == "white") {
        if (value == "hc0")
            config.white_flavor = WhiteFlavor::hc0;
        else if (value == "hc1")
            config.white_flavor = WhiteFlavor::hc1;
        else
            throw ConfigError("config: white must be hc0|hc1");
    } else if (key == "seed") {
        config.seed = static_cast<std::uint64_t>(parse_double(key, value));
    } else {
        throw ConfigError("config: unknown key '" + key + "'");
    }
}

AnalysisConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    AnalysisConfig config;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(line_no) +
                              ": expected 'key = value'");
        apply_config_entry(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return config;
}

std::vector<std::pair<std::string, std::string>> AnalysisConfig::echo() const {
    auto fmt = [](double v) {
        std::ostringstream os;
        os << v;
        return os.str();
    };
    std::vector<std::pair<std::string, std::string>> out;
    out.emplace_back("input", input_path);
    out.emplace_back("recession_rule", to_string(recession_rule));
    for (const auto& [name, c] : log_shift_overrides)
        out.emplace_back("log_shift." + name, fmt(c));
    out.emplace_back("hp.lambda", fmt(effective_lambda()));
    out.emplace_back("hp.exponent", fmt(hp_exponent));
    out.emplace_back("hp.periods_per_year", std::to_string(hp_periods_per_year));
    out.emplace_back("hp.nairu_source", to_string(nairu_source));
    {
        std::string m;
        for (auto mode : modes) m += std::string(m.empty() ? "" : ",") + to_string(mode);
        out.emplace_back("modes", m);
        std::string e;
        for (auto eff : effects_to_run) e += std::string(e.empty() ? "" : ",") + to_string(eff);
        out.emplace_back("effects", e);
    }
    out.emplace_back("level", fmt(level));
    out.emplace_back("format", to_string(format));
    out.emplace_back("unitroot.enabled", unitroot_enabled ? "true" : "false");
    out.emplace_back("unitroot.max_lag", std::to_string(max_lag));
    out.emplace_back("white", white_flavor == WhiteFlavor::hc0 ? "hc0" : "hc1");
    out.emplace_back("seed", std::to_string(seed));
    return out;
}

std::string config_key_help() {
    return "config keys (key = value, '#' comments):\n"
           "  input                  input CSV path\n"
           "  recession_rule         nonpositive|negative   (growth <= 0 vs < 0)\n"
           "  log_shift.<variable>   positive log-shift constant override\n"
           "  hp.lambda              smoothing parameter; 0 derives it from the rule\n"
           "  hp.exponent            frequency-rule exponent x\n"
           "  hp.periods_per_year    observations per year (4 = quarterly)\n"
           "  hp.nairu_source        unemployment|inflation\n"
           "  modes                  comma list of backward,forward\n"
           "  effects                comma list of pooled,fixed,random\n"
           "  level                  significance level in (0, 0.5)\n"
           "  format                 text|csv|json\n"
           "  unitroot.enabled       true|false\n"
           "  unitroot.max_lag       ADF maximum lag (SIC selects below it)\n"
           "  white                  hc0|hc1 robust covariance flavor\n"
           "  seed                   seed for randomized diagnostics\n";
}

} // namespace panelcurve
