// Copyright (c) 2026 The segres authors.
// Licensed under the Apache License, Version 2.0.

#include "segres/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace segres {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

std::string ConfigSection::get(const std::string& key, const std::string& fallback) const {
    auto it = entries.find(key);
    return it == entries.end() ? fallback : it->second;
}

double ConfigSection::get_double(const std::string& key, double fallback) const {
    auto it = entries.find(key);
    return it == entries.end() ? fallback : std::stod(it->second);
}

int ConfigSection::get_int(const std::string& key, int fallback) const {
    auto it = entries.find(key);
    return it == entries.end() ? fallback : std::stoi(it->second);
}

uint64_t ConfigSection::get_u64(const std::string& key, uint64_t fallback) const {
    auto it = entries.find(key);
    return it == entries.end() ? fallback : std::stoull(it->second);
}

bool ConfigSection::get_bool(const std::string& key, bool fallback) const {
    auto it = entries.find(key);
    if (it == entries.end()) return fallback;
    const std::string v = it->second;
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw std::runtime_error("config: bad boolean value '" + v + "' for key " + key);
}

const ConfigSection* Config::find(const std::string& name, const std::string& arg) const {
    for (const auto& s : sections)
        if (s.name == name && (arg.empty() || s.arg == arg)) return &s;
    return nullptr;
}

std::vector<const ConfigSection*> Config::all(const std::string& name) const {
    std::vector<const ConfigSection*> out;
    for (const auto& s : sections)
        if (s.name == name) out.push_back(&s);
    return out;
}

Config parse_config(std::istream& is) {
    Config config;
    ConfigSection* current = nullptr;
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error("config line " + std::to_string(line_no) +
                                         ": unterminated section header");
            const std::string header = trim(line.substr(1, line.size() - 2));
            ConfigSection section;
            const auto space = header.find_first_of(" \t");
            if (space == std::string::npos) {
                section.name = header;
            } else {
                section.name = header.substr(0, space);
                section.arg = trim(header.substr(space + 1));
            }
            config.sections.push_back(std::move(section));
            current = &config.sections.back();
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(line_no) +
                                     ": expected key = value");
        if (!current) {
            config.sections.push_back({});
            current = &config.sections.back();
        }
        current->entries[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return config;
}

Config load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config: " + path);
    return parse_config(is);
}

void write_config(std::ostream& os, const Config& config) {
    bool first = true;
    for (const auto& s : config.sections) {
        if (!first) os << "\n";
        first = false;
        if (!s.name.empty()) {
            os << "[" << s.name;
            if (!s.arg.empty()) os << " " << s.arg;
            os << "]\n";
        }
        for (const auto& [k, v] : s.entries) os << k << " = " << v << "\n";
    }
}

}  // namespace segres
