#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>

#include "heatlab/errors.hpp"
#include "heatlab/heat_kernel.hpp"
#include "heatlab/report.hpp"

namespace heatlab {

namespace {

constexpr std::array<char, 4> kMagic = {'H', 'K', 'T', '1'};

template <class T>
void put_le(std::ostream& out, T value) {
  static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);
  std::array<char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  out.write(bytes.data(), bytes.size());
}

template <class T>
T get_le(std::istream& in) {
  std::array<char, sizeof(T)> bytes;
  if (!in.read(bytes.data(), bytes.size())) {
    throw Error(ErrorCode::InputError, "truncated kernel dump");
  }
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

}  // namespace

void write_kernel_csv(std::ostream& out, const HeatKernelTable& table) {
  const std::size_t n = table.size();
  out << 'x';
  for (std::size_t y = 0; y < n; ++y) out << ',' << table.labels[y];
  out << '\n';
  for (std::size_t x = 0; x < n; ++x) {
    out << table.labels[x];
    for (std::size_t y = 0; y < n; ++y) out << ',' << format_double(table(x, y));
    out << '\n';
  }
}

void write_kernel_binary(std::ostream& out, const HeatKernelTable& table) {
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(table.size()));
  put_le<double>(out, table.t);
  for (double v : table.values.data()) put_le<double>(out, v);
}

std::pair<double, Matrix> read_kernel_binary(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw Error(ErrorCode::InputError, "kernel dump: bad magic");
  }
  const auto n = get_le<std::uint32_t>(in);
  const double t = get_le<double>(in);
  Matrix m(n, n);
  for (double& v : m.data()) v = get_le<double>(in);
  return {t, std::move(m)};
}

}  // namespace heatlab
