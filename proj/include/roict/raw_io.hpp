#pragma once

#include <string>

#include "roict/types.hpp"

namespace roict {

/// Raw array format: magic "ROII", u32 rows, u32 cols, u32 reserved (0),
/// then rows·cols little-endian f64 values in row-major order.
using RowMajorArray = Sinogram;

void write_raw(const std::string& path, const Eigen::Ref<const RowMajorArray>& values);
RowMajorArray read_raw(const std::string& path);

inline void write_raw_image(const std::string& path, const ImageArray& image) {
  write_raw(path, RowMajorArray(image));
}
inline ImageArray read_raw_image(const std::string& path) { return ImageArray(read_raw(path)); }

}  // namespace roict
