#include <algorithm>
#include <random>

#include "reenact/media_io.hpp"
#include "reenact/synth.hpp"

namespace reenact::synth {

namespace {

Expression perturb(const Expression& e, double amount, std::mt19937_64& rng) {
  if (amount <= 0.0) return e;
  std::uniform_real_distribution<double> d(-amount, amount);
  Expression out = e;
  out.mouth_open = std::max(0.0, out.mouth_open + d(rng));
  out.smile += d(rng);
  out.brow_raise += d(rng);
  out.eye_open = std::max(0.05, out.eye_open + d(rng));
  return out;
}

Pose perturb(const Pose& p, const Jitter& j, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Pose out = p;
  out.cx += j.translation * unit(rng);
  out.cy += j.translation * unit(rng);
  out.angle += j.angle * unit(rng);
  out.scale *= 1.0 + j.scale * unit(rng);
  return out;
}

void add_pixel_noise(ImageBuffer& image, double amount, std::mt19937_64& rng) {
  if (amount <= 0.0) return;
  std::uniform_real_distribution<double> d(-amount, amount);
  for (auto& v : image.data()) v = quantize(v + d(rng));
}

}  // namespace

Sequence block_sequence(std::span<const Block> blocks, const Pose& pose, const Jitter& jitter,
                        int width, int height, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Sequence seq;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (int k = 0; k < blocks[b].length; ++k) {
      const int index = static_cast<int>(seq.frames.size());
      const Expression e = perturb(blocks[b].expression, jitter.expression, rng);
      const Pose p = perturb(pose, jitter, rng);
      seq.shapes.push_back(face_shape(e, p, index));
      seq.frames.push_back(render_face(seq.shapes.back(), width, height));
      add_pixel_noise(seq.frames.back(), jitter.pixel, rng);
      seq.expressions.push_back(e);
      seq.block_of_frame.push_back(static_cast<int>(b));
    }
  }
  return seq;
}

PlantedFixture planted_fixture(int width, int height, const Jitter& target_jitter,
                               std::uint64_t seed) {
  const auto palette = expression_palette();
  PlantedFixture f;
  const std::vector<Block> target_blocks{{3, palette[1]}, {4, palette[2]}, {3, palette[3]}};
  const Pose target_pose{width * 0.5, height * 0.42, height * 0.22, 0.0};
  f.target = block_sequence(target_blocks, target_pose, target_jitter, width, height, seed);

  // Source frame 0 is the neutral rest pose; blocks land on frames 3, 1 and 4.
  const std::vector<Block> source_blocks{
      {1, palette[0]}, {1, palette[3]}, {1, palette[5]}, {1, palette[1]}, {1, palette[2]}};
  const Pose source_pose{width * 0.47, height * 0.44, height * 0.2, 0.04};
  f.source = block_sequence(source_blocks, source_pose, {}, width, height, seed + 1);
  f.planted = {3, 4, 1};
  return f;
}

void write_sequence(const Sequence& sequence, const std::filesystem::path& dir) {
  io::write_frame_sequence(sequence.frames, dir);
  io::write_landmark_track(dir / "landmarks.txt", sequence.shapes);
}

}  // namespace reenact::synth
