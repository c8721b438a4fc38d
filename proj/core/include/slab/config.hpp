#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace slab {

/** Flat key=value configuration / manifest. Ordered map so emitted files are
 *  deterministic and diffable. */
using KeyValueMap = std::map<std::string, std::string>;

/** Parse "key = value" lines; '#' starts a comment; blank lines ignored. */
KeyValueMap parse_config_text(const std::string& text);

KeyValueMap load_config_file(const std::string& path);
void save_config_file(const KeyValueMap& kv, const std::string& path);
std::string format_config_text(const KeyValueMap& kv);

/** Typed getters: fall back to the default when the key is absent, throw
 *  ConfigError on malformed values. */
double get_double(const KeyValueMap& kv, const std::string& key, double fallback);
std::int64_t get_int(const KeyValueMap& kv, const std::string& key, std::int64_t fallback);
bool get_bool(const KeyValueMap& kv, const std::string& key, bool fallback);
std::string get_string(const KeyValueMap& kv, const std::string& key,
                       const std::string& fallback);

/** Apply "key=value" override arguments onto a base map. All invalid keys are
 *  collected and reported together in one ConfigError before any is applied. */
void apply_overrides(KeyValueMap& base, const std::vector<std::string>& kv_args,
                     const std::set<std::string>& allowed_keys);

/** Render a double so that parsing it back is bit-exact (shortest such form). */
std::string format_double(double v);

} // namespace slab
