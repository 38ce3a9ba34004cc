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


#include "spikestab/network_io.h"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace spikestab {

namespace {

constexpr std::array<char, 4> kMagic = {'S', 'S', 'N', 'T'};
// Refuse absurd headers before allocating.
constexpr std::uint64_t kMaxWidth = std::uint64_t{1} << 24;

void PutU64(std::ostream& out, std::uint64_t v, int bytes = 8) {
  for (int b = 0; b < bytes; ++b) out.put(static_cast<char>((v >> (8 * b)) & 0xffU));
}

void PutF64(std::ostream& out, double v) { PutU64(out, std::bit_cast<std::uint64_t>(v)); }

std::uint64_t GetU64(std::istream& in, int bytes = 8) {
  std::uint64_t v = 0;
  for (int b = 0; b < bytes; ++b) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof()) throw IoError("truncated network container");
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * b);
  }
  return v;
}

double GetF64(std::istream& in) { return std::bit_cast<double>(GetU64(in)); }

}  // namespace

void WriteNetwork(std::ostream& out, const NetworkConfig& net) {
  net.Validate();
  out.write(kMagic.data(), kMagic.size());
  PutU64(out, kNetworkFormatVersion, 4);
  PutU64(out, net.depth(), 4);
  for (std::size_t w : net.widths) PutU64(out, w);
  PutF64(out, net.params.beta);
  PutF64(out, net.params.theta);
  PutU64(out, net.params.latency);
  PutU64(out, net.params.alphabet == Alphabet::kSigned ? 0 : 1, 1);
  for (const Matrix& w : net.weights) {
    for (std::size_t i = 0; i < w.rows(); ++i) {
      for (std::size_t j = 0; j < w.cols(); ++j) PutF64(out, w(i, j));
    }
  }
  if (!out) throw IoError("failed writing network container");
}

NetworkConfig ReadNetwork(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw IoError("not a spikestab network container (bad magic)");
  const std::uint64_t version = GetU64(in, 4);
  if (version != kNetworkFormatVersion) {
    throw IoError("unsupported network container version " + std::to_string(version));
  }
  const std::uint64_t depth = GetU64(in, 4);
  if (depth == 0 || depth > 1024) throw IoError("implausible layer count in container");
  NetworkConfig net;
  for (std::uint64_t l = 0; l <= depth; ++l) {
    const std::uint64_t w = GetU64(in);
    if (w == 0 || w > kMaxWidth) throw IoError("implausible layer width in container");
    net.widths.push_back(static_cast<std::size_t>(w));
  }
  net.params.beta = GetF64(in);
  net.params.theta = GetF64(in);
  net.params.latency = static_cast<std::size_t>(GetU64(in));
  const std::uint64_t alphabet = GetU64(in, 1);
  if (alphabet > 1) throw IoError("unknown alphabet code in container");
  net.params.alphabet = alphabet == 0 ? Alphabet::kSigned : Alphabet::kHeaviside;
  for (std::size_t l = 1; l < net.widths.size(); ++l) {
    Matrix w(net.widths[l], net.widths[l - 1]);
    for (std::size_t i = 0; i < w.rows(); ++i) {
      for (std::size_t j = 0; j < w.cols(); ++j) w(i, j) = GetF64(in);
    }
    net.weights.push_back(std::move(w));
  }
  try {
    net.Validate();
  } catch (const std::invalid_argument& e) {
    throw IoError(std::string("invalid network in container: ") + e.what());
  }
  return net;
}

nlohmann::json DescribeNetwork(const NetworkConfig& net, std::uint64_t seed,
                               const std::string& created_by) {
  return nlohmann::json{
      {"format", "spikestab-network"},
      {"version", kNetworkFormatVersion},
      {"widths", net.widths},
      {"beta", net.params.beta},
      {"theta", net.params.theta},
      {"latency", net.params.latency},
      {"alphabet", ToString(net.params.alphabet)},
      {"parameter_count", net.parameter_count()},
      {"seed", seed},
      {"created_by", created_by},
  };
}

void SaveNetwork(const std::string& path, const NetworkConfig& net, std::uint64_t seed,
                 const std::string& created_by) {
  std::ofstream bin(path, std::ios::binary | std::ios::trunc);
  if (!bin) throw IoError("cannot open '" + path + "' for writing");
  WriteNetwork(bin, net);
  bin.close();
  if (!bin) throw IoError("failed closing '" + path + "'");
  std::ofstream desc(path + ".json", std::ios::trunc);
  if (!desc) throw IoError("cannot open '" + path + ".json' for writing");
  desc << DescribeNetwork(net, seed, created_by).dump(2) << '\n';
  if (!desc) throw IoError("failed writing '" + path + ".json'");
}

NetworkConfig LoadNetwork(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return ReadNetwork(in);
}

}  // namespace spikestab
