#include "roict/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>
#include <stdexcept>

#include <png.h>

namespace roict {

Gray8 render_range(const ImageArray& image, double lo, double hi) {
  if (!image.allFinite()) throw std::invalid_argument("render: non-finite input");
  if (!(hi > lo)) throw std::invalid_argument("render: empty display range");
  Gray8 out(image.rows(), image.cols());
  for (Index r = 0; r < image.rows(); ++r) {
    for (Index c = 0; c < image.cols(); ++c) {
      const double t = std::clamp((image(r, c) - lo) / (hi - lo), 0.0, 1.0);
      out(r, c) = static_cast<std::uint8_t>(std::lround(255.0 * t));
    }
  }
  return out;
}

void overlay_roi_circle(Gray8& canvas, const ImageGrid& grid, const RoiDisk& roi, int dashes) {
  if (canvas.rows() != grid.n || canvas.cols() != grid.n) {
    throw std::invalid_argument("overlay_roi_circle: canvas does not match grid");
  }
  const double half_px = 0.5 * grid.pixel_size_mm;
  const int arcs = 2 * std::max(dashes, 1);
  for (Index i = 0; i < grid.n; ++i) {
    for (Index j = 0; j < grid.n; ++j) {
      const double dx = grid.x_center(j) - roi.center_mm.x();
      const double dy = grid.y_center(i) - roi.center_mm.y();
      if (std::abs(std::hypot(dx, dy) - roi.radius_mm) > half_px) continue;
      const double phase = (std::atan2(dy, dx) + std::numbers::pi) / (2.0 * std::numbers::pi);
      const int arc = std::min(static_cast<int>(phase * arcs), arcs - 1);
      if (arc % 2 == 0) canvas(i, j) = 255;
    }
  }
}

void overlay_mask_boundary(Gray8& canvas, const ProjectionMask& mask, int dash_views) {
  if (canvas.rows() != mask.num_views || canvas.cols() != mask.num_cells) {
    throw std::invalid_argument("overlay_mask_boundary: canvas does not match mask");
  }
  dash_views = std::max(dash_views, 1);
  const Sinogram m = mask.as_sinogram();
  const Index P = mask.num_cells;
  for (Index k = 0; k < mask.num_views; ++k) {
    if (!mask_overlay_view_drawn(k, dash_views)) continue;
    for (Index p = 0; p < P; ++p) {
      if (m(k, p) == 0.0) continue;
      const bool enters = p == 0 || m(k, p - 1) == 0.0;
      const bool leaves = p == P - 1 || m(k, p + 1) == 0.0;
      if (enters || leaves) canvas(k, p) = 255;
    }
  }
}

void write_png(const std::string& path, const Gray8& pixels) {
  std::unique_ptr<FILE, int (*)(FILE*)> file(std::fopen(path.c_str(), "wb"), &std::fclose);
  if (!file) throw std::runtime_error("cannot write " + path);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("png: cannot create write struct");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw std::runtime_error("png: cannot create info struct");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("png: failed writing " + path);
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(pixels.cols()),
               static_cast<png_uint_32>(pixels.rows()), 8, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (Index r = 0; r < pixels.rows(); ++r) {
    png_write_row(png, const_cast<png_bytep>(pixels.data() + r * pixels.cols()));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace roict
