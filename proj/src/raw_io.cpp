#include "roict/raw_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace roict {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

namespace {
constexpr char kMagic[4] = {'R', 'O', 'I', 'I'};
}

void write_raw(const std::string& path, const Eigen::Ref<const RowMajorArray>& values) {
  if (values.rows() > std::numeric_limits<std::uint32_t>::max() ||
      values.cols() > std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument("write_raw: array too large");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  const std::uint32_t header[3] = {static_cast<std::uint32_t>(values.rows()),
                                   static_cast<std::uint32_t>(values.cols()), 0u};
  out.write(kMagic, sizeof(kMagic));
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  for (Index r = 0; r < values.rows(); ++r) {
    const Eigen::RowVectorXd row = values.row(r);
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(row.size())));
  }
  if (!out) throw std::runtime_error("failed writing " + path);
}

RowMajorArray read_raw(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[4];
  std::uint32_t header[3];
  in.read(magic, sizeof(magic));
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  if (!in || std::memcmp(magic, kMagic, sizeof(magic)) != 0) {
    throw std::runtime_error(path + ": not a ROII raw array");
  }
  RowMajorArray values(static_cast<Index>(header[0]), static_cast<Index>(header[1]));
  in.read(reinterpret_cast<char*>(values.data()),
          static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(values.size())));
  if (!in) throw std::runtime_error(path + ": truncated payload");
  return values;
}

}  // namespace roict
