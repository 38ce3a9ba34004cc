// Copyright 2026 The spikestab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef SPIKESTAB_CSV_H_
#define SPIKESTAB_CSV_H_

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace spikestab {

// Floats are written with 17 significant digits so that every value
// round-trips exactly.
inline std::string FormatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string JoinCsv(const std::vector<std::string>& fields, char sep = ',') {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += sep;
    line += fields[i];
  }
  return line;
}

inline void WriteCsvLine(std::ostream& out, const std::vector<std::string>& fields) {
  out << JoinCsv(fields) << '\n';
}

}  // namespace spikestab

#endif  // SPIKESTAB_CSV_H_
