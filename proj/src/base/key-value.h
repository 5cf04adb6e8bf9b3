// base/key-value.h
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

#ifndef TSRNNT_BASE_KEY_VALUE_H_
#define TSRNNT_BASE_KEY_VALUE_H_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace tsrnnt {

// Flat "key = value" configuration. '#' starts a comment; a line
// "include <path>" splices another file in place (relative paths resolve
// against the including file). Later assignments override earlier ones.
class KeyValues {
 public:
  static KeyValues ParseFile(const std::string &path);
  static KeyValues ParseString(const std::string &text,
                               const std::string &base_dir = "");

  void Set(const std::string &key, const std::string &value);
  bool Has(const std::string &key) const { return values_.count(key) > 0; }

  // Typed getters throw ErrorCode::kUsage on a missing key (no default) or
  // a malformed value.
  std::string Get(const std::string &key) const;
  std::string Get(const std::string &key, const std::string &def) const;
  int32_t GetInt(const std::string &key) const;
  int32_t GetInt(const std::string &key, int32_t def) const;
  double GetDouble(const std::string &key) const;
  double GetDouble(const std::string &key, double def) const;
  bool GetBool(const std::string &key, bool def) const;

  // Entries from `other` override ours.
  void Merge(const KeyValues &other);

  // Keys never read through a getter; used to reject typos.
  std::vector<std::string> UnusedKeys() const;

  // One "key=value" line per entry, sorted by key.
  std::string ToString() const;

  const std::map<std::string, std::string> &Items() const { return values_; }

 private:
  void ParseInto(const std::string &text, const std::string &base_dir, int depth);

  std::map<std::string, std::string> values_;
  mutable std::set<std::string> used_;
};

}  // namespace tsrnnt

#endif  // TSRNNT_BASE_KEY_VALUE_H_
