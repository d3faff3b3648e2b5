// Copyright (c) 2026 The segres authors.
// Licensed under the Apache License, Version 2.0.

#ifndef SEGRES_CONFIG_HPP
#define SEGRES_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace segres {

/// One `[name arg]` block of flat key = value entries.
struct ConfigSection {
    std::string name;
    std::string arg;
    std::map<std::string, std::string> entries;

    bool has(const std::string& key) const { return entries.count(key) != 0; }
    std::string get(const std::string& key, const std::string& fallback = "") const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    uint64_t get_u64(const std::string& key, uint64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
};

/// Sectioned key-value text: '#' and ';' start comments, sections may
/// repeat and keep file order.  Keys before any section land in an unnamed
/// section "".
struct Config {
    std::vector<ConfigSection> sections;

    const ConfigSection* find(const std::string& name, const std::string& arg = "") const;
    std::vector<const ConfigSection*> all(const std::string& name) const;
};

Config parse_config(std::istream& is);
Config load_config(const std::string& path);

/// Canonical writer used by run manifests and degradation sidecars.
void write_config(std::ostream& os, const Config& config);

}  // namespace segres

#endif  // SEGRES_CONFIG_HPP
