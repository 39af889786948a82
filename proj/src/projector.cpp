#include "roict/projector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace roict {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

namespace {

void require_increasing(std::span<const double> v, const char* what) {
  if (v.size() < 2) throw std::invalid_argument(std::string(what) + ": need at least two bounds");
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) {
      throw std::invalid_argument(std::string(what) + ": bounds must be strictly increasing");
    }
  }
}

struct Entry {
  std::int64_t col;
  double weight;
};

// Boundaries of all detector cells of one view mapped through the source
// onto the common axis, in increasing order.
struct MappedDetector {
  std::vector<double> bounds;
  std::vector<Index> cell;          // cell index of mapped interval q
  std::vector<double> path_factor;  // 1/|sin| of the central ray vs the common axis, per cell
};

MappedDetector map_detector(const FanBeamGeometry& g, Index k, const Eigen::Vector2d& src,
                            bool onto_x) {
  const Index P = g.num_cells;
  std::vector<double> mapped(static_cast<std::size_t>(P + 1));
  for (Index b = 0; b <= P; ++b) {
    const Eigen::Vector2d d =
        detector_position(g, k, detector_coordinate(g, static_cast<double>(b) - 0.5));
    mapped[static_cast<std::size_t>(b)] =
        onto_x ? src.x() + (d.x() - src.x()) * src.y() / (src.y() - d.y())
               : src.y() + (d.y() - src.y()) * src.x() / (src.x() - d.x());
  }
  std::vector<double> factor(static_cast<std::size_t>(P));
  for (Index p = 0; p < P; ++p) {
    const Eigen::Vector2d dir =
        detector_position(g, k, detector_coordinate(g, static_cast<double>(p))) - src;
    factor[static_cast<std::size_t>(p)] = dir.norm() / std::abs(onto_x ? dir.y() : dir.x());
  }

  MappedDetector out;
  out.cell.resize(static_cast<std::size_t>(P));
  const bool increasing = mapped.back() > mapped.front();
  if (!increasing) std::reverse(mapped.begin(), mapped.end());
  for (Index q = 0; q < P; ++q) out.cell[static_cast<std::size_t>(q)] = increasing ? q : P - 1 - q;
  require_increasing(mapped, "assemble: mapped detector");
  out.bounds = std::move(mapped);
  out.path_factor = std::move(factor);
  return out;
}

}  // namespace

std::vector<Overlap> overlap_intervals(std::span<const double> source_bounds,
                                       std::span<const double> dest_bounds) {
  std::vector<Overlap> out;
  if (source_bounds.size() < 2 || dest_bounds.size() < 2) return out;
  const std::size_t ms = source_bounds.size() - 1;
  const std::size_t nd = dest_bounds.size() - 1;
  std::size_t m = 0;
  std::size_t n = 0;
  // Skip intervals that end before the other sequence starts.
  while (m < ms && source_bounds[m + 1] <= dest_bounds[0]) ++m;
  while (n < nd && dest_bounds[n + 1] <= source_bounds[0]) ++n;
  while (m < ms && n < nd) {
    const double lo = std::max(source_bounds[m], dest_bounds[n]);
    const double hi = std::min(source_bounds[m + 1], dest_bounds[n + 1]);
    if (hi > lo) out.push_back({static_cast<Index>(m), static_cast<Index>(n), hi - lo});
    if (source_bounds[m + 1] < dest_bounds[n + 1]) {
      ++m;
    } else if (dest_bounds[n + 1] < source_bounds[m + 1]) {
      ++n;
    } else {
      ++m;
      ++n;
    }
  }
  return out;
}

Eigen::VectorXd dd_kernel(std::span<const double> source_bounds,
                          std::span<const double> source_values,
                          std::span<const double> dest_bounds) {
  require_increasing(source_bounds, "dd_kernel: source");
  require_increasing(dest_bounds, "dd_kernel: destination");
  if (source_values.size() + 1 != source_bounds.size()) {
    throw std::invalid_argument("dd_kernel: need one source value per source interval");
  }
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Index>(dest_bounds.size() - 1));
  for (const auto& o : overlap_intervals(source_bounds, dest_bounds)) {
    const auto n = static_cast<std::size_t>(o.dest);
    b[o.dest] += o.length * source_values[static_cast<std::size_t>(o.source)] /
                 (dest_bounds[n + 1] - dest_bounds[n]);
  }
  return b;
}

SystemMatrix::SystemMatrix(Storage weights, Index num_views, Index num_cells, ImageGrid grid)
    : weights_(std::move(weights)), num_views_(num_views), num_cells_(num_cells), grid_(grid) {
  if (weights_.rows() != num_views * num_cells || weights_.cols() != grid.n * grid.n) {
    throw std::invalid_argument("SystemMatrix: dimensions do not match geometry");
  }
}

Eigen::VectorXd SystemMatrix::apply(const Eigen::Ref<const Eigen::VectorXd>& f) const {
  if (f.size() != cols()) throw std::invalid_argument("forward: image size mismatch");
  return weights_ * f;
}

Eigen::VectorXd SystemMatrix::apply_adjoint(const Eigen::Ref<const Eigen::VectorXd>& y) const {
  if (y.size() != rows()) throw std::invalid_argument("adjoint: sinogram size mismatch");
  return weights_.transpose() * y;
}

SystemMatrix assemble(const FanBeamGeometry& g, Index n) {
  if (n < 2) throw std::invalid_argument("assemble: n must be at least 2");
  return assemble(g, ImageGrid{n, fov_pixel_size(g, n)});
}

SystemMatrix assemble(const FanBeamGeometry& g, const ImageGrid& grid) {
  g.validate();
  const Index n = grid.n;
  if (n < 2) throw std::invalid_argument("assemble: n must be at least 2");
  if (!(grid.pixel_size_mm > 0.0)) throw std::invalid_argument("assemble: bad pixel size");
  const Index K = g.num_views;
  const Index P = g.num_cells;
  const double h = grid.pixel_size_mm;
  const double half = 0.5 * grid.width_mm();

  std::vector<std::int64_t> outer(static_cast<std::size_t>(K * P + 1), 0);
  std::vector<std::int64_t> inner;
  std::vector<double> values;
  inner.reserve(static_cast<std::size_t>(K * P * n * 2));
  values.reserve(inner.capacity());

  std::vector<std::vector<Entry>> rows_of_view(static_cast<std::size_t>(P));
  std::vector<double> pixel_bounds(static_cast<std::size_t>(n + 1));

  for (Index k = 0; k < K; ++k) {
    const double theta = g.view_angles[static_cast<std::size_t>(k)];
    const bool onto_x = std::abs(std::sin(theta)) >= std::abs(std::cos(theta));
    const Eigen::Vector2d src = source_position(g, k);
    const double lever = onto_x ? src.y() : src.x();
    if (!(std::abs(lever) > half)) {
      throw std::invalid_argument("assemble: source lies within the image support");
    }
    const MappedDetector det = map_detector(g, k, src, onto_x);
    for (auto& r : rows_of_view) r.clear();

    // Each image row (x-axis case) or column (y-axis case) is one line of
    // pixels at fixed ordinate; its boundaries map affinely onto the axis.
    for (Index line = 0; line < n; ++line) {
      const double ordinate = onto_x ? grid.y_center(line) : grid.x_center(line);
      const double scale = lever / (lever - ordinate);
      const double origin = onto_x ? src.x() : src.y();
      for (Index b = 0; b <= n; ++b) {
        const double coord = (static_cast<double>(b) - 0.5 * static_cast<double>(n)) * h;
        pixel_bounds[static_cast<std::size_t>(b)] = origin + (coord - origin) * scale;
      }
      for (const auto& o : overlap_intervals(pixel_bounds, det.bounds)) {
        const auto q = static_cast<std::size_t>(o.dest);
        const Index cell = det.cell[q];
        const double width = det.bounds[q + 1] - det.bounds[q];
        const double w =
            o.length / width * h * det.path_factor[static_cast<std::size_t>(cell)];
        if (!(w > 0.0)) continue;
        // Pixel m along the line: column m of row `line`, or row n−1−m of
        // column `line` (y grows upward while row indices grow downward).
        const Index col = onto_x ? grid.linear(line, o.source) : grid.linear(n - 1 - o.source, line);
        rows_of_view[static_cast<std::size_t>(cell)].push_back({col, w});
      }
    }

    for (Index p = 0; p < P; ++p) {
      auto& entries = rows_of_view[static_cast<std::size_t>(p)];
      std::sort(entries.begin(), entries.end(),
                [](const Entry& a, const Entry& b) { return a.col < b.col; });
      for (const auto& e : entries) {
        inner.push_back(e.col);
        values.push_back(e.weight);
      }
      outer[static_cast<std::size_t>(k * P + p + 1)] = static_cast<std::int64_t>(inner.size());
    }
  }

  const Eigen::Map<const SystemMatrix::Storage> view(K * P, n * n,
                                                     static_cast<Index>(values.size()),
                                                     outer.data(), inner.data(), values.data());
  return SystemMatrix(SystemMatrix::Storage(view), K, P, grid);
}

Sinogram forward(const SystemMatrix& w, const ImageArray& f) {
  if (f.rows() != w.grid().n || f.cols() != w.grid().n) {
    throw std::invalid_argument("forward: image shape mismatch");
  }
  return as_sinogram(w.apply(flat(f)), w.num_views(), w.num_cells());
}

ImageArray adjoint(const SystemMatrix& w, const Sinogram& y) {
  if (y.rows() != w.num_views() || y.cols() != w.num_cells()) {
    throw std::invalid_argument("adjoint: sinogram shape mismatch");
  }
  return as_image(w.apply_adjoint(flat(y)), w.grid().n);
}

namespace {
constexpr char kMatrixMagic[8] = {'R', 'O', 'I', 'S', 'M', 'T', 'X', '\0'};

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw std::runtime_error("system matrix file truncated");
  return v;
}
}  // namespace

void write_system_matrix(const SystemMatrix& w, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(kMatrixMagic, sizeof(kMatrixMagic));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(w.nonzeros()));
  const auto& m = w.weights();
  for (Index r = 0; r < m.outerSize(); ++r) {
    for (SystemMatrix::Storage::InnerIterator it(m, r); it; ++it) {
      put<std::uint64_t>(out, static_cast<std::uint64_t>(it.row()));
      put<std::uint64_t>(out, static_cast<std::uint64_t>(it.col()));
      put<double>(out, it.value());
    }
  }
  if (!out) throw std::runtime_error("failed writing " + path);
}

SystemMatrix::Storage read_system_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMatrixMagic, sizeof(magic)) != 0) {
    throw std::runtime_error(path + ": not a ROISMTX file");
  }
  const auto nnz = get<std::uint64_t>(in);
  std::vector<Eigen::Triplet<double, std::int64_t>> triplets;
  triplets.reserve(nnz);
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  for (std::uint64_t e = 0; e < nnz; ++e) {
    const auto r = static_cast<std::int64_t>(get<std::uint64_t>(in));
    const auto c = static_cast<std::int64_t>(get<std::uint64_t>(in));
    const double v = get<double>(in);
    rows = std::max(rows, r + 1);
    cols = std::max(cols, c + 1);
    triplets.emplace_back(r, c, v);
  }
  SystemMatrix::Storage m(rows, cols);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

}  // namespace roict
