// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#include <charconv>
#include <cstdio>
#include <sstream>

#include "dcchi/error.hpp"
#include "dcchi/io.hpp"

namespace dcchi {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) return false;
  return true;
}

}  // namespace

Config Config::parse(std::string_view text, const std::string& origin) {
  Config cfg;
  std::string section;
  std::size_t lineno = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++lineno;
    const auto where = origin + ":" + std::to_string(lineno);
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": unterminated section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!valid_name(section)) throw ConfigError(where + ": bad section name '" + section + "'");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    // trailing comment, only when separated by whitespace
    for (auto pos = value.find_first_of("#;"); pos != std::string::npos; pos = value.find_first_of("#;", pos + 1)) {
      if (pos > 0 && (value[pos - 1] == ' ' || value[pos - 1] == '\t')) {
        value = trim(std::string_view(value).substr(0, pos));
        break;
      }
    }
    if (!valid_name(key)) throw ConfigError(where + ": bad key '" + key + "'");
    const auto full = section.empty() ? key : section + "." + key;
    if (cfg.values_.count(full)) throw ConfigError(where + ": duplicate key '" + full + "'");
    cfg.values_[full] = value;
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return parse(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()), path.string());
}

void Config::set(const std::string& key, const std::string& value) {
  if (!valid_name(key)) throw ConfigError("bad key '" + key + "'");
  values_[key] = value;
}

std::optional<std::string> Config::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  return get(key).value_or(fallback);
}

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  std::int64_t out = 0;
  auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || p != v->data() + v->size()) throw ConfigError(key + ": expected an integer, got '" + *v + "'");
  return out;
}

double Config::get_double(const std::string& key, double fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  double out = 0;
  auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || p != v->data() + v->size()) throw ConfigError(key + ": expected a number, got '" + *v + "'");
  return out;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "on" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "off" || *v == "no") return false;
  throw ConfigError(key + ": expected a boolean, got '" + *v + "'");
}

std::string Config::to_text() const {
  // std::map order groups each section together, top-level keys first.
  std::ostringstream out;
  std::string current = "\x01";
  for (const auto& [key, value] : values_) {
    const auto dot = key.rfind('.');
    const std::string section = dot == std::string::npos ? "" : key.substr(0, dot);
    const std::string name = dot == std::string::npos ? key : key.substr(dot + 1);
    if (section != current) {
      if (!section.empty()) out << (out.tellp() > 0 ? "\n" : "") << "[" << section << "]\n";
      current = section;
    }
    out << name << " = " << value << "\n";
  }
  return out.str();
}

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_diff(const Config& a, const Config& b) {
  std::ostringstream out;
  const auto& ea = a.entries();
  const auto& eb = b.entries();
  auto ia = ea.begin();
  auto ib = eb.begin();
  while (ia != ea.end() || ib != eb.end()) {
    if (ib == eb.end() || (ia != ea.end() && ia->first < ib->first)) {
      out << ia->first << ": " << ia->second << " -> (unset)\n";
      ++ia;
    } else if (ia == ea.end() || ib->first < ia->first) {
      out << ib->first << ": (unset) -> " << ib->second << "\n";
      ++ib;
    } else {
      if (ia->second != ib->second) out << ia->first << ": " << ia->second << " -> " << ib->second << "\n";
      ++ia;
      ++ib;
    }
  }
  return out.str();
}

}  // namespace dcchi
