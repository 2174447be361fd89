#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "triwave/errors.hpp"
#include "triwave/io.hpp"

namespace triwave {
namespace {

constexpr char kMagic[4] = {'T', 'R', 'I', 'W'};
constexpr std::uint16_t kVersion = 1;

template <typename T>
void put(std::vector<unsigned char>& buf, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
  buf.insert(buf.end(), bytes, bytes + sizeof(T));
}

class Cursor {
 public:
  Cursor(const std::vector<unsigned char>& buf) : buf_(buf) {}

  template <typename T>
  T take() {
    if (pos_ + sizeof(T) > buf_.size()) throw IoError("corrupt snapshot header: file truncated");
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, buf_.data() + pos_, sizeof(T));
    if constexpr (std::endian::native == std::endian::big)
      for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
    pos_ += sizeof(T);
    T value;
    std::memcpy(&value, bytes, sizeof(T));
    return value;
  }

  std::size_t remaining() const { return buf_.size() - pos_; }

 private:
  const std::vector<unsigned char>& buf_;
  std::size_t pos_ = 0;
};

}  // namespace

void write_snapshot(const std::string& path, const TriField& field, const Params& params) {
  const Grid& g = field.grid();
  params.validate(g.dim());
  std::vector<unsigned char> buf(kMagic, kMagic + 4);
  put<std::uint16_t>(buf, kVersion);
  put<std::uint8_t>(buf, static_cast<std::uint8_t>(g.dim()));
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(g.n_per_dim()));
  put<double>(buf, g.half_width());
  put<double>(buf, params.gamma1);
  put<double>(buf, params.gamma2);
  put<double>(buf, params.gamma3);
  put<double>(buf, params.omega);
  const Eigen::VectorXd c = params.velocity(g.dim());
  for (int a = 0; a < g.dim(); ++a) put<double>(buf, c[a]);
  buf.reserve(buf.size() + 48 * static_cast<std::size_t>(g.size()));
  for (int j = 0; j < 3; ++j) {
    for (Index p = 0; p < g.size(); ++p) {
      put<double>(buf, field[j][p].real());
      put<double>(buf, field[j][p].imag());
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError("write to '" + path + "' failed");
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open snapshot '" + path + "'");
  const std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                       std::istreambuf_iterator<char>());
  Cursor cur(buf);
  char magic[4];
  for (char& ch : magic) ch = static_cast<char>(cur.take<std::uint8_t>());
  if (std::memcmp(magic, kMagic, 4) != 0) throw IoError("corrupt snapshot header: bad magic");
  const auto version = cur.take<std::uint16_t>();
  if (version != kVersion)
    throw IoError("unsupported snapshot version " + std::to_string(version));
  const int dim = cur.take<std::uint8_t>();
  const auto n = cur.take<std::uint32_t>();
  const double L = cur.take<double>();
  if (dim < 1 || dim > 4 || n < 8 || n % 2 != 0 || n > 4096 || !(L > 0.0))
    throw IoError("corrupt snapshot header: invalid grid");
  Params params;
  params.gamma1 = cur.take<double>();
  params.gamma2 = cur.take<double>();
  params.gamma3 = cur.take<double>();
  params.omega = cur.take<double>();
  params.c.resize(dim);
  for (int a = 0; a < dim; ++a) params.c[a] = cur.take<double>();

  std::size_t points = 1;
  for (int a = 0; a < dim; ++a) points *= n;
  if (cur.remaining() != 48 * points)
    throw IoError("corrupt snapshot: payload has " + std::to_string(cur.remaining()) +
                  " bytes, expected " + std::to_string(48 * points));
  Grid grid(dim, static_cast<int>(n), L);
  TriField field(grid);
  for (int j = 0; j < 3; ++j) {
    for (Index p = 0; p < grid.size(); ++p) {
      const double re = cur.take<double>();
      const double im = cur.take<double>();
      field[j][p] = Complex(re, im);
    }
  }
  try {
    params.validate(dim);
  } catch (const ValidationError& e) {
    throw IoError(std::string("corrupt snapshot parameters: ") + e.what());
  }
  return Snapshot{std::move(field), std::move(params)};
}

}  // namespace triwave
