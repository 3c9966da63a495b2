#include "swellkit/run_config.hpp"

#include "swellkit/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace swellkit {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& v) {
    if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') || (v.front() == '\'' && v.back() == '\''))) {
        return v.substr(1, v.size() - 2);
    }
    return v;
}

// Drops a trailing "# comment" that sits outside quotes.
std::string strip_comment(const std::string& line) {
    char quote = 0;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quote != 0) {
            if (c == quote) {
                quote = 0;
            }
        } else if (c == '"' || c == '\'') {
            quote = c;
        } else if (c == '#') {
            return line.substr(0, i);
        }
    }
    return line;
}

} // namespace

const char* to_string(ConfigSource source) {
    switch (source) {
    case ConfigSource::Default:
        return "default";
    case ConfigSource::File:
        return "config";
    case ConfigSource::Env:
        return "env";
    case ConfigSource::Flag:
        return "flag";
    }
    return "?";
}

RunConfig::RunConfig(std::string command, std::set<std::string> all_known_keys)
    : command_(std::move(command)), all_known_(std::move(all_known_keys)) {}

void RunConfig::declare(const std::string& key, const std::string& default_value) {
    settings_[key] = Setting{default_value, ConfigSource::Default, "default"};
    all_known_.insert(key);
}

void RunConfig::set(const std::string& key, const std::string& value, ConfigSource source,
                    const std::string& origin) {
    auto it = settings_.find(key);
    if (it == settings_.end()) {
        throw InvalidArgument("unknown setting '" + key + "' for command '" + command_ + "'");
    }
    if (source >= it->second.source) {
        it->second = Setting{value, source, origin};
    }
}

void RunConfig::load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file " + path.string());
    }
    std::string section;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string where = path.string() + ":" + std::to_string(line);
        const std::string text = trim(strip_comment(raw));
        if (text.empty()) {
            continue;
        }
        if (text.front() == '[') {
            if (text.back() != ']') {
                throw InvalidArgument(where + ": unterminated section header");
            }
            section = trim(text.substr(1, text.size() - 2));
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw InvalidArgument(where + ": expected 'key = value'");
        }
        const std::string key = trim(text.substr(0, eq));
        const std::string value = unquote(trim(text.substr(eq + 1)));
        if (key.empty()) {
            throw InvalidArgument(where + ": empty key");
        }
        if (section.empty()) {
            if (!all_known_.contains(key)) {
                throw InvalidArgument(where + ": unknown key '" + key + "'");
            }
            if (declared(key)) {
                set(key, value, ConfigSource::File, where);
            }
        } else if (section == command_) {
            if (!declared(key)) {
                throw InvalidArgument(where + ": unknown key '" + key + "' for command '" + command_ + "'");
            }
            set(key, value, ConfigSource::File, where);
        }
    }
}

void RunConfig::load_env(const std::map<std::string, std::string>& key_to_env) {
    for (const auto& [key, env] : key_to_env) {
        if (!declared(key)) {
            continue;
        }
        const char* value = std::getenv(env.c_str());
        if (value != nullptr && *value != '\0') {
            set(key, value, ConfigSource::Env, env);
        }
    }
}

const Setting& RunConfig::get(const std::string& key) const {
    auto it = settings_.find(key);
    if (it == settings_.end()) {
        throw InvalidArgument("unknown setting '" + key + "'");
    }
    return it->second;
}

double RunConfig::number(const std::string& key) const {
    const auto& s = get(key);
    double v = 0.0;
    const auto* end = s.value.data() + s.value.size();
    auto [ptr, ec] = std::from_chars(s.value.data(), end, v);
    if (s.value.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
        throw InvalidArgument(key + " (" + s.origin + "): expected a number, got '" + s.value + "'");
    }
    return v;
}

std::uint64_t RunConfig::unsigned_integer(const std::string& key) const {
    const auto& s = get(key);
    std::uint64_t v = 0;
    const auto* end = s.value.data() + s.value.size();
    auto [ptr, ec] = std::from_chars(s.value.data(), end, v);
    if (s.value.empty() || ec != std::errc() || ptr != end) {
        throw InvalidArgument(key + " (" + s.origin + "): expected a non-negative integer, got '" + s.value + "'");
    }
    return v;
}

std::int64_t RunConfig::integer(const std::string& key) const {
    const auto& s = get(key);
    std::int64_t v = 0;
    const auto* end = s.value.data() + s.value.size();
    auto [ptr, ec] = std::from_chars(s.value.data(), end, v);
    if (s.value.empty() || ec != std::errc() || ptr != end) {
        throw InvalidArgument(key + " (" + s.origin + "): expected an integer, got '" + s.value + "'");
    }
    return v;
}

std::vector<std::string> RunConfig::list(const std::string& key) const {
    std::vector<std::string> out;
    std::stringstream ss(str(key));
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

std::string RunConfig::describe() const {
    std::string out;
    for (const auto& [key, s] : settings_) {
        out += key + " = " + s.value + "  # " + to_string(s.source);
        if (s.source != ConfigSource::Default) {
            out += " " + s.origin;
        }
        out += '\n';
    }
    return out;
}

} // namespace swellkit
