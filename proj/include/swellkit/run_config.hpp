#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace swellkit {

/// Where an effective setting came from, lowest precedence first.
enum class ConfigSource { Default, File, Env, Flag };

const char* to_string(ConfigSource source);

struct Setting {
    std::string value;
    ConfigSource source = ConfigSource::Default;
    std::string origin; // e.g. "--ratio", "SWELLKIT_SAM_ENDPOINT", "run.cfg:4"
};

/// Settings of one command merged from flags > environment > config file > defaults.
///
/// The config file is key/value text in the TOML style:
///
///     # shared by every command that knows the key
///     seed = 7
///     [swell]
///     ratio = 0.332
///     images = "data/images"
///
/// Top-level keys apply to the running command when it declares them and must
/// be known to some command. A [section] names a command; keys in the running
/// command's section must be declared by it, other sections are skipped.
class RunConfig {
  public:
    RunConfig(std::string command, std::set<std::string> all_known_keys);

    void declare(const std::string& key, const std::string& default_value);
    bool declared(const std::string& key) const { return settings_.contains(key); }

    /// Records a value unless a higher-precedence source already set the key.
    void set(const std::string& key, const std::string& value, ConfigSource source, const std::string& origin);

    /// Throws InvalidArgument naming file and line on syntax errors or unknown keys.
    void load_file(const std::filesystem::path& path);

    /// Reads each mapped environment variable that is set and non-empty.
    void load_env(const std::map<std::string, std::string>& key_to_env);

    const Setting& get(const std::string& key) const;
    const std::string& str(const std::string& key) const { return get(key).value; }
    double number(const std::string& key) const;
    std::uint64_t unsigned_integer(const std::string& key) const;
    std::int64_t integer(const std::string& key) const;
    std::vector<std::string> list(const std::string& key) const; // comma separated

    /// "key = value  # origin" lines, sorted by key.
    std::string describe() const;

  private:
    std::string command_;
    std::set<std::string> all_known_;
    std::map<std::string, Setting> settings_;
};

} // namespace swellkit
