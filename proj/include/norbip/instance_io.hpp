// Copyright 2026 The norbip authors
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

#ifndef NORBIP_INSTANCE_IO_HPP_
#define NORBIP_INSTANCE_IO_HPP_

#include <stdexcept>
#include <string>
#include <vector>

#include "norbip/instance.hpp"

namespace norbip {

/// Raised on malformed instance files; carries one entry per offending
/// field/cell (e.g. "G[0][2]: zero denominator in '1/0'").
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

/// JSON schema: {"name", "n_u", "n_l", "m_u", "m_l", "c_x": [...],
/// "c_y": [...], "G": [[...]], "H": [[...]], "q": [...], "A": [[...]],
/// "B": [[...]], "b": [...], "d": [...]}; matrices row-major, rationals as
/// strings ("p/q", decimal, or integer; JSON integers also accepted).
/// Floating-point JSON numbers are rejected: exactness would be lost.
BilevelInstance instance_from_json_text(const std::string& text);
std::string instance_to_json_text(const BilevelInstance& inst);

/// File wrappers. load() throws ParseError (malformed content) or
/// std::runtime_error (I/O); dimension defects are reported via validate().
BilevelInstance load_instance(const std::string& path);
void save_instance(const BilevelInstance& inst, const std::string& path);

}  // namespace norbip

#endif  // NORBIP_INSTANCE_IO_HPP_
