#ifndef GHF_TOOLS_CONFIG_HPP
#define GHF_TOOLS_CONFIG_HPP

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include <json.hpp>

namespace ghf::cli {

using json = nlohmann::json;

struct config_error : std::runtime_error {
    std::string key;
    int line = 0;
    config_error(const std::string& k, const std::string& what, int ln = 0)
        : std::runtime_error(what), key(k), line(ln) {}
};

/// FNV-1a, 64 bit.
inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

/// A flat JSON object of parameters. Every key must be consumed by the runner;
/// leftovers are reported by finish().
class Config {
  public:
    Config() : j_(json::object()) {}
    explicit Config(json j) : j_(std::move(j)) {
        if (!j_.is_object()) throw config_error("", "config root must be an object", 1);
    }

    static Config parse(const std::string& text) {
        try {
            return Config(json::parse(text));
        } catch (const json::parse_error& e) {
            int line = 1;
            for (std::size_t i = 0; i < e.byte && i < text.size(); ++i)
                if (text[i] == '\n') ++line;
            throw config_error("", std::string("malformed config: ") + e.what(), line);
        }
    }

    static Config load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw config_error("", "cannot open config file " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        return parse(ss.str());
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    template <class T>
    T get(const std::string& key, const T& fallback) {
        if (!j_.contains(key)) return fallback;
        return require<T>(key);
    }

    template <class T>
    T require(const std::string& key) {
        used_.insert(key);
        if (!j_.contains(key)) throw config_error(key, "missing required key '" + key + "'");
        const json& v = j_.at(key);
        if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
            if (!v.is_number_integer()) throw config_error(key, "key '" + key + "' must be an integer");
        }
        try {
            return v.get<T>();
        } catch (const json::exception&) {
            throw config_error(key, "key '" + key + "' has the wrong type");
        }
    }

    std::string choice(const std::string& key, const std::string& fallback, const std::vector<std::string>& allowed) {
        std::string v = get<std::string>(key, fallback);
        for (auto& a : allowed)
            if (a == v) return v;
        std::string list;
        for (auto& a : allowed) list += (list.empty() ? "" : "|") + a;
        throw config_error(key, "key '" + key + "' must be one of " + list);
    }

    void check(bool ok, const std::string& key, const std::string& what) const {
        if (!ok) throw config_error(key, "key '" + key + "': " + what);
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!used_.count(it.key())) throw config_error(it.key(), "unknown key '" + it.key() + "'");
    }

    std::string canonical() const { return j_.dump(); }
    std::string hash() const { return hex64(fnv1a(canonical())); }

  private:
    json j_;
    std::set<std::string> used_;
};

} // namespace ghf::cli

#endif // GHF_TOOLS_CONFIG_HPP
