// Copyright 2026 The itoffoli Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "itof/hamiltonians.hpp"

namespace itof {

/// Raw `key = value` settings; later layers override earlier ones.
using KeyValues = std::map<std::string, std::string>;

/// Parses `key = value` lines; `#` starts a comment. Unknown keys and
/// malformed lines throw ConfigError naming the key.
KeyValues parse_key_values(std::istream& in);
KeyValues load_config_file(const std::string& path);

std::vector<std::string> preset_names();
/// Throws ConfigError (key "preset") for an unknown name.
KeyValues preset_values(const std::string& name);

/// Applies `overrides` on top of `base`.
KeyValues merged(KeyValues base, const KeyValues& overrides);

/// Every accepted key.
const std::vector<std::string>& known_keys();

struct SweepSpec {
  std::string key;
  std::vector<double> values;
};

struct RunSettings {
  GateSpec spec;
  bool convergence_check = true;
  std::optional<SweepSpec> sweep;
  std::optional<int> k2;
};

/// Converts settings to physical inputs. Missing required keys and
/// inconsistent pairs throw ConfigError naming the key.
RunSettings settings_from_values(const KeyValues& values);

/// FNV-1a over the sorted physical key = value pairs (sweep keys excluded),
/// printed as 16 hex digits.
std::string fingerprint(const KeyValues& values);

}  // namespace itof
