// base/key-value.cc
//
// Copyright 2026  The TS-RNNT Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "base/key-value.h"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "base/error.h"

namespace tsrnnt {

namespace {

std::string Trim(const std::string &s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string ReadText(const std::string &path) {
  std::ifstream is(path);
  if (!is) TSRNNT_ERR_CODE(ErrorCode::kUsage) << "cannot open config " << path;
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

KeyValues KeyValues::ParseFile(const std::string &path) {
  KeyValues kv;
  kv.ParseInto(ReadText(path), std::filesystem::path(path).parent_path().string(), 0);
  return kv;
}

KeyValues KeyValues::ParseString(const std::string &text, const std::string &base_dir) {
  KeyValues kv;
  kv.ParseInto(text, base_dir, 0);
  return kv;
}

void KeyValues::ParseInto(const std::string &text, const std::string &base_dir,
                          int depth) {
  if (depth > 16) TSRNNT_ERR_CODE(ErrorCode::kUsage) << "config includes nest too deeply";
  std::istringstream is(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    std::string line = Trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    if (line.rfind("include", 0) == 0 && line.find('=') == std::string::npos) {
      std::string target = Trim(line.substr(7));
      if (target.empty()) {
        TSRNNT_ERR_CODE(ErrorCode::kUsage) << "config line " << lineno << ": include without a path";
      }
      std::filesystem::path p(target);
      if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
      ParseInto(ReadText(p.string()), p.parent_path().string(), depth + 1);
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos) {
      TSRNNT_ERR_CODE(ErrorCode::kUsage) << "config line " << lineno << ": expected key=value, got '"
                                         << line << "'";
    }
    std::string key = Trim(line.substr(0, eq));
    if (key.empty()) TSRNNT_ERR_CODE(ErrorCode::kUsage) << "config line " << lineno << ": empty key";
    values_[key] = Trim(line.substr(eq + 1));
  }
}

void KeyValues::Set(const std::string &key, const std::string &value) {
  values_[key] = value;
}

std::string KeyValues::Get(const std::string &key) const {
  auto it = values_.find(key);
  if (it == values_.end()) TSRNNT_ERR_CODE(ErrorCode::kUsage) << "missing config key " << key;
  used_.insert(key);
  return it->second;
}

std::string KeyValues::Get(const std::string &key, const std::string &def) const {
  return Has(key) ? Get(key) : def;
}

int32_t KeyValues::GetInt(const std::string &key) const {
  std::string v = Get(key);
  int32_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    TSRNNT_ERR_CODE(ErrorCode::kUsage) << "config key " << key << ": '" << v << "' is not an integer";
  }
  return out;
}

int32_t KeyValues::GetInt(const std::string &key, int32_t def) const {
  return Has(key) ? GetInt(key) : def;
}

double KeyValues::GetDouble(const std::string &key) const {
  std::string v = Get(key);
  try {
    size_t pos = 0;
    double out = std::stod(v, &pos);
    if (pos == v.size()) return out;
  } catch (const std::exception &) {
  }
  TSRNNT_ERR_CODE(ErrorCode::kUsage) << "config key " << key << ": '" << v << "' is not a number";
}

double KeyValues::GetDouble(const std::string &key, double def) const {
  return Has(key) ? GetDouble(key) : def;
}

bool KeyValues::GetBool(const std::string &key, bool def) const {
  if (!Has(key)) return def;
  std::string v = Get(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  TSRNNT_ERR_CODE(ErrorCode::kUsage) << "config key " << key << ": '" << v << "' is not a boolean";
}

void KeyValues::Merge(const KeyValues &other) {
  for (const auto &[k, v] : other.values_) values_[k] = v;
}

std::vector<std::string> KeyValues::UnusedKeys() const {
  std::vector<std::string> out;
  for (const auto &[k, v] : values_) {
    if (!used_.count(k)) out.push_back(k);
  }
  return out;
}

std::string KeyValues::ToString() const {
  std::string out;
  for (const auto &[k, v] : values_) out += k + "=" + v + "\n";
  return out;
}

}  // namespace tsrnnt
