#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "reenact/composite.hpp"
#include "reenact/error.hpp"
#include "reenact/landmark_core.hpp"
#include "reenact/synth.hpp"
#include "support/oracles.hpp"

using namespace reenact;
using namespace reenact::composite;

namespace {

BinaryMask rect_mask(int w, int h, int x0, int y0, int x1, int y1) {
  BinaryMask m(w, h);
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) m.set(x, y, true);
  }
  return m;
}

bool subset(const BinaryMask& a, const BinaryMask& b) {
  return (a & b) == a;
}

FloatImage random_float(int w, int h, int channels, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  FloatImage img(w, h, channels);
  for (auto& v : img.data()) v = u(rng);
  return img;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Io;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

const LandmarkGroups kGroups = LandmarkGroups::defaults();

}  // namespace

TEST_CASE("convex hull fill") {
  const std::vector<Point2> pts{{2, 2}, {8, 2}, {8, 6}, {2, 6}, {5, 4}};
  const auto hull = convex_hull(pts);
  CHECK(hull.size() == 4);
  const auto mask = fill_convex_hull(pts, 12, 10);
  CHECK(mask.area() == 7 * 5);
  CHECK(mask.get(2, 2));
  CHECK(mask.get(8, 6));
  CHECK_FALSE(mask.get(9, 4));
}

TEST_CASE("gaussian erosion") {
  const auto square = rect_mask(120, 120, 30, 30, 89, 89);
  const auto eroded = gaussian_erode(square, 5.0, kErosionThreshold);
  CHECK(eroded.area() < square.area());
  CHECK(subset(eroded, square));
  CHECK(eroded.get(60, 60));
  CHECK_FALSE(eroded.get(30, 60));
  // A straight edge keeps pixels whose truncated Gaussian mass reaches 0.99.
  const auto alpha = gaussian_alpha(square, 5.0);
  for (int x = 30; x < 60; ++x) {
    CHECK(eroded.get(x, 60) == (alpha[static_cast<std::size_t>(60 * 120 + x)] >= kErosionThreshold));
  }

  const BinaryMask full(40, 30, true);
  CHECK(gaussian_erode(full, 5.0, kErosionThreshold) == full);

  const auto keep = rect_mask(120, 120, 30, 30, 33, 33);
  const auto kept = gaussian_erode(square, 5.0, kErosionThreshold, &keep);
  CHECK(subset(keep, kept));
}

TEST_CASE("source mask keeps every feature hull") {
  const auto shape = synth::face_shape({0.3, 0.2, 0, 1}, {160, 120, 60, 0});
  const auto mask = build_source_mask(shape, kGroups, 320, 240);
  const auto region = feature_region(shape, kGroups, 320, 240);
  CHECK(subset(mask, region));
  CHECK(mask.area() < region.area());
  for (const auto* g : {&kGroups.left_eye, &kGroups.right_eye, &kGroups.nose, &kGroups.mouth}) {
    const auto hull = fill_convex_hull(gather(shape, *g), 320, 240);
    CHECK(subset(hull, mask));
  }

  const auto outside = synth::face_shape({}, {-500, 30, 20, 0});
  CHECK(kind_of([&] { build_source_mask(outside, kGroups, 60, 60); }) == ErrorKind::ErosionTooAggressive);
}

TEST_CASE("mask transfer") {
  const auto shape = synth::face_shape({0.3, 0.2, 0, 1}, {160, 120, 40, 0});
  const auto mesh = landmarks::triangulate_reference(shape);
  const auto mask = build_source_mask(shape, kGroups, 320, 240);

  const auto same = transfer_mask(mask, shape.points, shape.points, mesh, 320, 240);
  CHECK(same == mask);

  auto big = shape;
  for (auto& p : big.points) p = Point2(160, 120) + 2.0 * (p - Point2(160, 120));
  const auto scaled = transfer_mask(mask, shape.points, big.points, mesh, 320, 240);
  const double ratio = static_cast<double>(scaled.area()) / static_cast<double>(mask.area());
  CHECK(ratio > 3.6);
  CHECK(ratio < 4.4);

  const BinaryMask empty(320, 240);
  CHECK(transfer_mask(empty, shape.points, big.points, mesh, 320, 240).empty_foreground());
}

TEST_CASE("clipping to the target face") {
  const auto target = synth::face_shape({0.1, 0.0, 0, 1}, {160, 120, 60, 0});
  const auto own = build_source_mask(target, kGroups, 320, 240);
  const auto inner = rect_mask(320, 240, 150, 110, 165, 125) & own;
  CHECK(clip_to_target(inner, target, kGroups) == inner);

  const auto far = rect_mask(320, 240, 0, 0, 10, 10);
  CHECK(kind_of([&] { clip_to_target(far, target, kGroups); }) == ErrorKind::DegenerateOverlap);

  std::mt19937_64 rng(6);
  std::bernoulli_distribution coin(0.5);
  BinaryMask noise(320, 240);
  for (int y = 0; y < 240; ++y) {
    for (int x = 0; x < 320; ++x) noise.set(x, y, coin(rng));
  }
  const auto clipped = clip_to_target(noise, target, kGroups);
  for (int y = 0; y < 240; ++y) {
    for (int x = 0; x < 320; ++x) CHECK(clipped.get(x, y) == (noise.get(x, y) && own.get(x, y)));
  }
  CHECK(clipped.area() <= noise.area());
}

TEST_CASE("perceptual colour round trip") {
  const auto transform = ColorTransform::defaults();
  std::mt19937_64 rng(10);
  std::uniform_int_distribution<int> u(0, 255);
  ImageBuffer img(64, 48, 3);
  for (auto& v : img.data()) v = static_cast<std::uint8_t>(u(rng));
  img.at(0, 0, 0) = img.at(0, 0, 1) = img.at(0, 0, 2) = 0;
  for (int g = 0; g < 48; ++g) {
    for (int c = 0; c < 3; ++c) img.at(1, g, c) = static_cast<std::uint8_t>(g * 5 + 10);
  }
  const auto p = rgb_to_perceptual(img, transform);
  for (double v : p.data()) CHECK(std::isfinite(v));
  const auto back = perceptual_to_rgb(p, transform);
  int worst = 0;
  for (std::size_t i = 0; i < img.data().size(); ++i) {
    worst = std::max(worst, std::abs(static_cast<int>(quantize(back.data()[i])) - img.data()[i]));
  }
  CHECK(worst <= 1);

  ImageBuffer gray(2, 2, 1);
  CHECK_THROWS_AS(rgb_to_perceptual(gray, transform), Error);
}

TEST_CASE("colour matrix file") {
  const auto shipped = ColorTransform::load(std::filesystem::path(REENACT_DATA_DIR) / "perceptual_color.txt");
  const auto defaults = ColorTransform::defaults();
  CHECK(shipped.to_cone == defaults.to_cone);
  CHECK(shipped.cone_to_perceptual == defaults.cone_to_perceptual);

  const auto dir = oracle::scratch_dir("color");
  {
    std::ofstream out(dir / "short.txt");
    out << "1 0 0 0 1 0 0 0 1\n1 0 0 0 1 0 0 0\n";
  }
  CHECK(kind_of([&] { ColorTransform::load(dir / "short.txt"); }) == ErrorKind::Format);
  {
    std::ofstream out(dir / "singular.txt");
    out << "1 0 0 0 1 0 0 0 1\n1 1 0 1 1 0 0 0 1\n";
  }
  CHECK_THROWS_AS(ColorTransform::load(dir / "singular.txt"), Error);
}

TEST_CASE("Poisson cloning matches a dense direct solve") {
  std::mt19937_64 rng(13);
  std::bernoulli_distribution coin(0.7);
  for (int trial = 0; trial < 10; ++trial) {
    const auto src = random_float(9, 9, 3, rng, -5.0, 5.0);
    const auto dst = random_float(9, 9, 3, rng, -5.0, 5.0);
    BinaryMask mask(9, 9);
    for (int y = 2; y < 7; ++y) {
      for (int x = 2; x < 7; ++x) mask.set(x, y, coin(rng));
    }
    mask.set(4, 4, true);
    const auto result = poisson_clone(src, dst, mask);
    const auto expected = oracle::dense_poisson(src, dst, mask);
    for (std::size_t i = 0; i < expected.data().size(); ++i) {
      CHECK(std::abs(result.image.data()[i] - expected.data()[i]) <= 1e-9);
    }
    CHECK(result.residual <= 1e-6);
  }
}

TEST_CASE("Poisson output satisfies the discrete equation") {
  std::mt19937_64 rng(14);
  const auto src = random_float(40, 30, 1, rng, 0.0, 100.0);
  const auto dst = random_float(40, 30, 1, rng, 0.0, 100.0);
  const auto mask = rect_mask(40, 30, 5, 4, 33, 24);
  const auto out = poisson_clone(src, dst, mask).image;
  double worst = 0;
  for (int y = 0; y < 30; ++y) {
    for (int x = 0; x < 40; ++x) {
      if (!mask.get(x, y)) {
        CHECK(out.at(x, y) == dst.at(x, y));
        continue;
      }
      const double lhs = 4 * out.at(x, y) - out.at(x + 1, y) - out.at(x - 1, y) - out.at(x, y + 1) - out.at(x, y - 1);
      const double rhs = 4 * src.at(x, y) - src.at(x + 1, y) - src.at(x - 1, y) - src.at(x, y + 1) - src.at(x, y - 1);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("Poisson membrane and identity") {
  std::mt19937_64 rng(15);
  const FloatImage flat(30, 30, 1, 3.0);
  auto boundary = random_float(30, 30, 1, rng, -2.0, 7.0);
  const auto mask = rect_mask(30, 30, 3, 3, 26, 26);
  const auto membrane = poisson_clone(flat, boundary, mask).image;
  double lo = 1e9, hi = -1e9;
  for (int y = 0; y < 30; ++y) {
    for (int x = 0; x < 30; ++x) {
      if (mask.get(x, y)) continue;
      lo = std::min(lo, boundary.at(x, y));
      hi = std::max(hi, boundary.at(x, y));
    }
  }
  for (int y = 3; y <= 26; ++y) {
    for (int x = 3; x <= 26; ++x) {
      CHECK(membrane.at(x, y) >= lo - 1e-9);
      CHECK(membrane.at(x, y) <= hi + 1e-9);
    }
  }

  const FloatImage constant(20, 20, 1, 42.0);
  const auto harmonic = poisson_clone(FloatImage(20, 20, 1, 3.0), constant, rect_mask(20, 20, 2, 2, 17, 17)).image;
  for (double v : harmonic.data()) CHECK(std::abs(v - 42.0) <= 1e-6);

  const auto same = random_float(25, 25, 3, rng, 0.0, 255.0);
  const auto identity = poisson_clone(same, same, rect_mask(25, 25, 4, 4, 20, 20)).image;
  for (std::size_t i = 0; i < same.data().size(); ++i) {
    CHECK(std::abs(identity.data()[i] - same.data()[i]) <= 1e-6);
  }
}

TEST_CASE("Poisson input errors") {
  const FloatImage img(10, 10, 1, 0.0);
  CHECK(kind_of([&] { poisson_clone(img, img, rect_mask(10, 10, 0, 3, 4, 6)); }) == ErrorKind::BorderContact);
  CHECK(kind_of([&] { poisson_clone(img, img, BinaryMask(10, 10)); }) == ErrorKind::DegenerateOverlap);
  PoissonOptions starved;
  starved.max_iterations = 1;
  std::mt19937_64 rng(3);
  const auto noisy = random_float(40, 40, 1, rng, 0.0, 100.0);
  const FloatImage zero(40, 40, 1, 0.0);
  CHECK(kind_of([&] { poisson_clone(noisy, zero, rect_mask(40, 40, 2, 2, 37, 37), starved); }) ==
        ErrorKind::SolverFailure);
}

TEST_CASE("feathering the seam") {
  const int w = 120, h = 40;
  const double sigma = 9.0;
  ImageBuffer target(w, h, 1, 200);
  const FloatImage composited(w, h, 1, 40.0);
  const auto half = rect_mask(w, h, 0, 0, 59, h - 1);
  const auto out = feather_seam_float(composited, target, half, sigma);
  const auto alpha = gaussian_alpha(half, sigma);

  CHECK(out.at(10, 20) == doctest::Approx(40.0).epsilon(1e-9));
  CHECK(out.at(110, 20) == doctest::Approx(200.0).epsilon(1e-9));
  // Pixel centres sit half a pixel either side of the mask edge.
  for (int x = 45; x < 75; ++x) {
    const double expected = normal_cdf((59.5 - x) / sigma);
    CHECK(std::abs(alpha[static_cast<std::size_t>(20 * w + x)] - expected) < 0.01);
  }
  CHECK(alpha[static_cast<std::size_t>(20 * w + 59)] + alpha[static_cast<std::size_t>(20 * w + 60)] ==
        doctest::Approx(1.0).epsilon(1e-12));
  const double a59 = alpha[static_cast<std::size_t>(20 * w + 59)];
  CHECK(out.at(59, 20) == doctest::Approx(a59 * 40 + (1 - a59) * 200).epsilon(1e-12));

  for (int x = 0; x < w; ++x) {
    CHECK(out.at(x, 20) >= 40.0 - 1e-9);
    CHECK(out.at(x, 20) <= 200.0 + 1e-9);
  }
  const auto quantized = feather_seam(composited, target, half, sigma);
  CHECK(quantized.at(0, 0) == 40);
  CHECK_THROWS_AS(feather_seam(composited, target, half, 0.0), Error);
}
