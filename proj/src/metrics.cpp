#include "roict/metrics.hpp"

namespace roict {

MeritReport evaluate_roi(const ImageArray& recon, const ImageArray& truth,
                         std::span<const Index> pixels, double mpv) {
  MeritReport r;
  r.mpv = mpv > 0.0 ? mpv : truth.maxCoeff();
  r.psnr_db = psnr_roi(recon, truth, pixels, r.mpv);
  r.rel_err = rel_err_roi(recon, truth, pixels);
  r.roi_pixel_count = static_cast<Index>(pixels.size());
  return r;
}

}  // namespace roict
