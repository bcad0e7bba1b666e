#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "pandarl/nn/mlp.hpp"

namespace pandarl::nn {

// Versioned parameter stream: an 8-byte magic, a shape manifest (network
// names, heads, layer dims, Adam step counts), then every parameter and Adam
// moment as a flat little-endian 64-bit float stream. See the README for the
// exact layout.
inline constexpr char kNetMagic[8] = {'P', 'R', 'L', 'N', 'E', 'T', '0', '1'};

struct NamedNet {
  std::string name;
  const Mlp* net = nullptr;
};

void save_networks(std::ostream& out, const std::vector<NamedNet>& nets);
std::vector<std::pair<std::string, Mlp>> load_networks(std::istream& in);

void save_networks_file(const std::string& path, const std::vector<NamedNet>& nets);
std::vector<std::pair<std::string, Mlp>> load_networks_file(const std::string& path);

}  // namespace pandarl::nn
