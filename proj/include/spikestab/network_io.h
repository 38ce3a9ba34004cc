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


#ifndef SPIKESTAB_NETWORK_IO_H_
#define SPIKESTAB_NETWORK_IO_H_

#include <cstdint>
#include <iosfwd>
#include <string>

#include "json.hpp"
#include "spikestab/network.h"

namespace spikestab {

// Binary network container, all integers and floats little-endian:
//
//   magic    4 bytes  "SSNT"
//   version  u32      kNetworkFormatVersion
//   L        u32      number of layers
//   widths   (L+1) x u64
//   beta     f64
//   theta    f64
//   latency  u64
//   alphabet u8       0 = signed, 1 = heaviside
//   weights  for l = 1..L: n_l * n_{l-1} f64, row-major
inline constexpr std::uint32_t kNetworkFormatVersion = 1;

void WriteNetwork(std::ostream& out, const NetworkConfig& net);
NetworkConfig ReadNetwork(std::istream& in);

// Provenance descriptor written next to the binary container.
nlohmann::json DescribeNetwork(const NetworkConfig& net, std::uint64_t seed,
                               const std::string& created_by);

// Writes `path` (binary) and `path + ".json"` (descriptor). Throws IoError.
void SaveNetwork(const std::string& path, const NetworkConfig& net, std::uint64_t seed,
                 const std::string& created_by);
NetworkConfig LoadNetwork(const std::string& path);

}  // namespace spikestab

#endif  // SPIKESTAB_NETWORK_IO_H_
