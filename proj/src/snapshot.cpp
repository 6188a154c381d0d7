#include "swe/snapshot.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "swe/fft.hpp"

namespace swe {

namespace {

constexpr std::array<char, 4> kMagic = {'S', 'W', 'V', '1'};

template <typename T>
void put_le(std::ostream& os, T value) {
  static_assert(sizeof(T) == 4 || sizeof(T) == 8);
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  const U bits = std::bit_cast<U>(value);
  std::array<char, sizeof(T)> bytes;
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xFF);
  os.write(bytes.data(), bytes.size());
}

template <typename T>
T get_le(std::istream& is) {
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  std::array<unsigned char, sizeof(T)> bytes;
  is.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!is) throw std::runtime_error("SWV1: truncated snapshot");
  U bits = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) bits |= static_cast<U>(bytes[i]) << (8 * i);
  return std::bit_cast<T>(bits);
}

}  // namespace

void write_snapshot(std::ostream& os, const SpectralState& state, double time) {
  os.write(kMagic.data(), kMagic.size());
  put_le(os, static_cast<std::uint32_t>(state.dim()));
  put_le(os, static_cast<std::uint32_t>(state.points_per_dim()));
  put_le(os, time);
  for (double x : inverse(state.u(), state.dim(), state.band())) put_le(os, x);
  for (double x : inverse(state.v(), state.dim(), state.band())) put_le(os, x);
  if (!os) throw std::runtime_error("SWV1: write failed");
}

void write_snapshot(const std::filesystem::path& path, const SpectralState& state, double time) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_snapshot(os, state, time);
}

Snapshot read_snapshot(std::istream& is) {
  std::array<char, 4> magic{};
  is.read(magic.data(), magic.size());
  if (!is || magic != kMagic) throw std::runtime_error("SWV1: bad magic");
  const auto dim = get_le<std::uint32_t>(is);
  const auto points = get_le<std::uint32_t>(is);
  const double time = get_le<double>(is);
  if (dim != 1 && dim != 2) throw std::runtime_error("SWV1: unsupported dimension");
  if (points == 0 || points % 2 != 0) throw std::runtime_error("SWV1: point count must be even");
  const std::size_t total = dim == 1 ? points : static_cast<std::size_t>(points) * points;
  std::vector<double> u(total), v(total);
  for (auto& x : u) x = get_le<double>(is);
  for (auto& x : v) x = get_le<double>(is);
  const int band = static_cast<int>(points / 2);
  return {time, state_from_samples(u, v, static_cast<int>(dim), band)};
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  return read_snapshot(is);
}

}  // namespace swe
