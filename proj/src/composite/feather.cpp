#include "reenact/composite.hpp"
#include "reenact/error.hpp"

namespace reenact::composite {

FloatImage feather_seam_float(const FloatImage& composited, const ImageBuffer& target,
                              const BinaryMask& mask, double sigma) {
  if (!composited.same_shape(target) || !target.same_shape(mask.width(), mask.height())) {
    throw Error(ErrorKind::DimensionMismatch, "feathering inputs differ in size");
  }
  const auto alpha = gaussian_alpha(mask, sigma);
  FloatImage out(target.width(), target.height(), target.channels());
  const int channels = target.channels();
  auto comp = composited.data();
  auto tgt = target.data();
  auto dst = out.data();
  for (std::size_t p = 0; p < alpha.size(); ++p) {
    const double a = alpha[p];
    for (int c = 0; c < channels; ++c) {
      const std::size_t i = p * static_cast<std::size_t>(channels) + static_cast<std::size_t>(c);
      dst[i] = a * comp[i] + (1.0 - a) * tgt[i];
    }
  }
  return out;
}

ImageBuffer feather_seam(const FloatImage& composited, const ImageBuffer& target,
                         const BinaryMask& mask, double sigma) {
  return quantize(feather_seam_float(composited, target, mask, sigma));
}

}  // namespace reenact::composite
