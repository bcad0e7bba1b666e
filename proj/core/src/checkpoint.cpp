#include "pandarl/nn/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace pandarl::nn {

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");

namespace {

template <typename T>
void write_pod(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw std::runtime_error("checkpoint: truncated stream");
  return v;
}

void write_doubles(std::ostream& out, const double* p, std::size_t n) {
  out.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
}

void read_doubles(std::istream& in, double* p, std::size_t n) {
  in.read(reinterpret_cast<char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
  if (!in) throw std::runtime_error("checkpoint: truncated payload");
}

}  // namespace

void save_networks(std::ostream& out, const std::vector<NamedNet>& nets) {
  out.write(kNetMagic, sizeof(kNetMagic));
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(nets.size()));
  for (const NamedNet& named : nets) {
    const Mlp& net = *named.net;
    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(named.name.size()));
    out.write(named.name.data(), static_cast<std::streamsize>(named.name.size()));
    write_pod<std::uint32_t>(out, net.head() == Head::bounded ? 1u : 0u);
    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(net.layers().size()));
    for (const Mlp::Layer& l : net.layers()) {
      write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(l.w.rows()));
      write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(l.w.cols()));
    }
    write_pod<std::uint64_t>(out, net.adam_steps());
  }
  for (const NamedNet& named : nets) {
    for (const Mlp::Layer& l : named.net->layers()) {
      write_doubles(out, l.w.data(), l.w.size());
      write_doubles(out, l.b.data(), l.b.size());
      write_doubles(out, l.m_w.data(), l.m_w.size());
      write_doubles(out, l.m_b.data(), l.m_b.size());
      write_doubles(out, l.v_w.data(), l.v_w.size());
      write_doubles(out, l.v_b.data(), l.v_b.size());
    }
  }
  if (!out) throw std::runtime_error("checkpoint: write failed");
}

std::vector<std::pair<std::string, Mlp>> load_networks(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kNetMagic, sizeof(magic)) != 0) {
    throw std::runtime_error("checkpoint: bad magic");
  }
  const auto count = read_pod<std::uint32_t>(in);
  std::vector<std::pair<std::string, Mlp>> nets(count);
  for (auto& [name, net] : nets) {
    const auto name_len = read_pod<std::uint32_t>(in);
    name.resize(name_len);
    in.read(name.data(), name_len);
    const auto head = read_pod<std::uint32_t>(in);
    net.set_head(head == 1 ? Head::bounded : Head::linear);
    const auto n_layers = read_pod<std::uint32_t>(in);
    auto& layers = net.layers();
    layers.resize(n_layers);
    for (Mlp::Layer& l : layers) {
      const auto rows = read_pod<std::uint32_t>(in);
      const auto cols = read_pod<std::uint32_t>(in);
      l.w.resize(static_cast<int>(rows), static_cast<int>(cols));
      l.b.assign(cols, 0.0);
      l.m_w.resize(static_cast<int>(rows), static_cast<int>(cols));
      l.m_b.assign(cols, 0.0);
      l.v_w.resize(static_cast<int>(rows), static_cast<int>(cols));
      l.v_b.assign(cols, 0.0);
    }
    net.set_adam_steps(read_pod<std::uint64_t>(in));
  }
  for (auto& [name, net] : nets) {
    for (Mlp::Layer& l : net.layers()) {
      read_doubles(in, l.w.data(), l.w.size());
      read_doubles(in, l.b.data(), l.b.size());
      read_doubles(in, l.m_w.data(), l.m_w.size());
      read_doubles(in, l.m_b.data(), l.m_b.size());
      read_doubles(in, l.v_w.data(), l.v_w.size());
      read_doubles(in, l.v_b.data(), l.v_b.size());
    }
  }
  return nets;
}

void save_networks_file(const std::string& path, const std::vector<NamedNet>& nets) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("checkpoint: cannot open " + path + " for writing");
  save_networks(out, nets);
}

std::vector<std::pair<std::string, Mlp>> load_networks_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot open " + path);
  return load_networks(in);
}

}  // namespace pandarl::nn
