#include "copyro/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <map>

#include "copyro/errors.hpp"

namespace copyro {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw ConfigTypeError("key '" + key + "': expected a number, got '" + value + "'");
    return v;
}

int parse_int(const std::string& key, const std::string& value) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw ConfigTypeError("key '" + key + "': expected an integer, got '" + value + "'");
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigTypeError("key '" + key + "': expected true/false, got '" + value + "'");
}

}  // namespace

ToolConfig load_config(std::istream& in) {
    ToolConfig cfg;
    using Setter = std::function<void(const std::string&, const std::string&)>;
    const std::map<std::string, Setter> setters = {
        {"threads", [&](const std::string& k, const std::string& v) { cfg.threads = parse_int(k, v); }},
        {"pca.threshold",
         [&](const std::string& k, const std::string& v) {
             cfg.pipeline.variance_threshold = parse_double(k, v);
         }},
        {"pipeline.standardize",
         [&](const std::string& k, const std::string& v) {
             cfg.pipeline.standardize = parse_bool(k, v);
         }},
        {"cv.k", [&](const std::string& k, const std::string& v) { cfg.cv_k = parse_int(k, v); }},
        {"pso.swarm_size",
         [&](const std::string& k, const std::string& v) { cfg.pso.swarm_size = parse_int(k, v); }},
        {"pso.iterations",
         [&](const std::string& k, const std::string& v) { cfg.pso.iterations = parse_int(k, v); }},
        {"pso.inertia",
         [&](const std::string& k, const std::string& v) { cfg.pso.inertia = parse_double(k, v); }},
        {"pso.cognitive",
         [&](const std::string& k, const std::string& v) { cfg.pso.cognitive = parse_double(k, v); }},
        {"pso.social",
         [&](const std::string& k, const std::string& v) { cfg.pso.social = parse_double(k, v); }},
        {"pso.velocity_cap",
         [&](const std::string& k, const std::string& v) {
             cfg.pso.velocity_cap = parse_double(k, v);
         }},
        {"mopso.swarm_size",
         [&](const std::string& k, const std::string& v) { cfg.mopso.swarm_size = parse_int(k, v); }},
        {"mopso.iterations",
         [&](const std::string& k, const std::string& v) { cfg.mopso.iterations = parse_int(k, v); }},
        {"mopso.inertia",
         [&](const std::string& k, const std::string& v) { cfg.mopso.inertia = parse_double(k, v); }},
        {"mopso.cognitive",
         [&](const std::string& k, const std::string& v) {
             cfg.mopso.cognitive = parse_double(k, v);
         }},
        {"mopso.social",
         [&](const std::string& k, const std::string& v) { cfg.mopso.social = parse_double(k, v); }},
        {"mopso.velocity_cap",
         [&](const std::string& k, const std::string& v) {
             cfg.mopso.velocity_cap = parse_double(k, v);
         }},
        {"mopso.archive_capacity",
         [&](const std::string& k, const std::string& v) {
             cfg.mopso.archive_capacity = static_cast<std::size_t>(parse_int(k, v));
         }},
        {"mopso.turbulence_prob",
         [&](const std::string& k, const std::string& v) {
             cfg.mopso.turbulence_prob = parse_double(k, v);
         }},
        {"tune.swarm_size",
         [&](const std::string& k, const std::string& v) { cfg.tune_swarm = parse_int(k, v); }},
        {"tune.iterations",
         [&](const std::string& k, const std::string& v) { cfg.tune_iterations = parse_int(k, v); }},
        {"tune.k",
         [&](const std::string& k, const std::string& v) { cfg.tune_k = parse_int(k, v); }},
    };

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw ConfigTypeError("line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end())
            throw UnknownKey("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        it->second(key, value);
    }
    return cfg;
}

ToolConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file " + path);
    return load_config(in);
}

}  // namespace copyro
