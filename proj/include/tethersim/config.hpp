#pragma once

// Minimal dotted-key configuration text: one `key = value` per line, `#`
// comments, no quoting. Values are scalars, whitespace-separated triples, or
// semicolon-separated lists of triples. Every lookup marks its key as used;
// reject_unknown_keys() turns leftovers into errors with their line numbers.

#include <cctype>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "tethersim/core.hpp"
#include "tethersim/errors.hpp"

namespace tethersim::cfg {

struct Entry {
    std::string value;
    int line = 0;
    mutable bool used = false;
};

namespace detail {

inline std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline bool valid_key(const std::string& k) {
    if (k.empty()) return false;
    for (char c : k)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.')
            return false;
    return true;
}

inline double to_double(const std::string& text, const std::string& key, int line) {
    try {
        size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ValidationError("key '" + key + "' (line " + std::to_string(line) +
                              "): expected a number, got '" + text + "'");
    }
}

}  // namespace detail

class KeyValues {
public:
    static KeyValues parse(const std::string& text) {
        KeyValues kv;
        std::istringstream in(text);
        std::string raw;
        int line_no = 0;
        while (std::getline(in, raw)) {
            ++line_no;
            const size_t hash = raw.find('#');
            if (hash != std::string::npos) raw.erase(hash);
            const std::string line = detail::trim(raw);
            if (line.empty()) continue;
            const size_t eq = line.find('=');
            if (eq == std::string::npos)
                throw ParseError("line " + std::to_string(line_no) +
                                 ": expected 'key = value', got '" + line + "'");
            const std::string key = detail::trim(line.substr(0, eq));
            const std::string value = detail::trim(line.substr(eq + 1));
            if (!detail::valid_key(key))
                throw ParseError("line " + std::to_string(line_no) + ": invalid key '" +
                                 key + "'");
            if (kv.entries_.count(key))
                throw ParseError("line " + std::to_string(line_no) + ": duplicate key '" +
                                 key + "'");
            kv.entries_[key] = Entry{value, line_no, false};
        }
        return kv;
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        const Entry* e = find(key);
        return e ? e->value : fallback;
    }

    double get_double(const std::string& key, double fallback) const {
        const Entry* e = find(key);
        return e ? detail::to_double(e->value, key, e->line) : fallback;
    }

    int get_int(const std::string& key, int fallback) const {
        const Entry* e = find(key);
        if (!e) return fallback;
        const double v = detail::to_double(e->value, key, e->line);
        const int i = static_cast<int>(v);
        if (static_cast<double>(i) != v)
            throw ValidationError("key '" + key + "' (line " + std::to_string(e->line) +
                                  "): expected an integer");
        return i;
    }

    long get_long(const std::string& key, long fallback) const {
        const Entry* e = find(key);
        if (!e) return fallback;
        const double v = detail::to_double(e->value, key, e->line);
        const long i = static_cast<long>(v);
        if (static_cast<double>(i) != v)
            throw ValidationError("key '" + key + "' (line " + std::to_string(e->line) +
                                  "): expected an integer");
        return i;
    }

    bool get_bool(const std::string& key, bool fallback) const {
        const Entry* e = find(key);
        if (!e) return fallback;
        if (e->value == "true") return true;
        if (e->value == "false") return false;
        throw ValidationError("key '" + key + "' (line " + std::to_string(e->line) +
                              "): expected true or false");
    }

    Vec3 get_vec3(const std::string& key, const Vec3& fallback) const {
        const Entry* e = find(key);
        if (!e) return fallback;
        return parse_vec3(e->value, key, e->line);
    }

    std::array<double, 6> get_diag6(const std::string& key,
                                    const std::array<double, 6>& fallback) const {
        const Entry* e = find(key);
        if (!e) return fallback;
        std::istringstream in(e->value);
        std::array<double, 6> out{};
        std::string tok;
        for (int i = 0; i < 6; ++i) {
            if (!(in >> tok))
                throw ValidationError("key '" + key + "' (line " + std::to_string(e->line) +
                                      "): expected 6 numbers");
            out[i] = detail::to_double(tok, key, e->line);
        }
        if (in >> tok)
            throw ValidationError("key '" + key + "' (line " + std::to_string(e->line) +
                                  "): expected exactly 6 numbers");
        return out;
    }

    std::vector<Vec3> get_vec3_list(const std::string& key,
                                    const std::vector<Vec3>& fallback) const {
        const Entry* e = find(key);
        if (!e) return fallback;
        std::vector<Vec3> out;
        std::string item;
        std::istringstream in(e->value);
        while (std::getline(in, item, ';')) {
            item = detail::trim(item);
            if (item.empty()) continue;
            out.push_back(parse_vec3(item, key, e->line));
        }
        if (out.empty())
            throw ValidationError("key '" + key + "' (line " + std::to_string(e->line) +
                                  "): expected at least one 'x y z' triple");
        return out;
    }

    /// Throws on any key never touched by a getter: unknown keys are errors.
    void reject_unknown_keys() const {
        for (const auto& [key, entry] : entries_)
            if (!entry.used)
                throw ValidationError("unknown key '" + key + "' (line " +
                                      std::to_string(entry.line) + ")");
    }

private:
    const Entry* find(const std::string& key) const {
        auto it = entries_.find(key);
        if (it == entries_.end()) return nullptr;
        it->second.used = true;
        return &it->second;
    }

    static Vec3 parse_vec3(const std::string& text, const std::string& key, int line) {
        std::istringstream in(text);
        std::string a, b, c, rest;
        if (!(in >> a >> b >> c) || (in >> rest))
            throw ValidationError("key '" + key + "' (line " + std::to_string(line) +
                                  "): expected 'x y z'");
        return {detail::to_double(a, key, line), detail::to_double(b, key, line),
                detail::to_double(c, key, line)};
    }

    std::map<std::string, Entry> entries_;
};

}  // namespace tethersim::cfg
