// Copyright 2026 The cvsn Authors
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

#include <iosfwd>
#include <string>

#include "cvsn/scenario.hpp"

namespace cvsn::cli {

/// Header row then one line per row, LF endings. With `timestamp` a
/// "# generated <UTC time> ..." comment line goes first.
void write_csv(std::ostream& out, const Table& table, bool timestamp);

/// Reads what write_csv produces. Lines starting with '#' are skipped.
/// Throws std::runtime_error on ragged rows.
Table read_csv(std::istream& in);

/// Line plot of a result table as a standalone SVG document.
/// Sweep tables plot certified_sn against the first column, one series per
/// witness (and parameter); boundary tables plot the *_boundary column
/// against the first column, one series per witness and level.
std::string render_svg(const Table& table, const std::string& title);

}  // namespace cvsn::cli
