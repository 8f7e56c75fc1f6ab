#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "reenact/image.hpp"
#include "reenact/shape.hpp"

/// Parametric cartoon faces with exact landmark tracks, for tests and demos.
namespace reenact::synth {

struct Expression {
  double mouth_open = 0.0;  // 0 closed .. 1 wide open
  double smile = 0.0;       // -1 frown .. 1 broad smile
  double brow_raise = 0.0;  // -1 .. 1
  double eye_open = 1.0;    // 0 shut .. 1.3 wide
};

/// Face frame in the image: centre (between the jaw ends), half-width in pixels,
/// in-plane rotation in radians.
struct Pose {
  double cx = 160.0;
  double cy = 110.0;
  double scale = 50.0;
  double angle = 0.0;
};

/// 66 landmarks in the default group layout (outline 0-16, brows 17-26, nose 27-35,
/// eyes 36-41 / 42-47, outer lips 48-59, inner lips 60-65).
LandmarkShape face_shape(const Expression& expression, const Pose& pose, int frame_index = 0);

/// Renders the face described by `shape` over a fixed textured background
/// (2x2 supersampled, RGB). Every facial feature is placed from landmarks only,
/// so the picture deforms consistently with the track.
ImageBuffer render_face(const LandmarkShape& shape, int width, int height);

struct Block {
  int length = 1;
  Expression expression;
};

struct Jitter {
  double expression = 0.0;   // uniform +/- on every expression parameter
  double translation = 0.0;  // pixels
  double angle = 0.0;        // radians
  double scale = 0.0;        // relative
  double pixel = 0.0;        // uniform +/- intensity noise per sample
};

struct Sequence {
  std::vector<ImageBuffer> frames;
  std::vector<LandmarkShape> shapes;
  std::vector<Expression> expressions;
  /// Block index of every frame.
  std::vector<int> block_of_frame;
};

/// Renders consecutive constant-expression blocks around `pose`, each frame
/// perturbed by `jitter` drawn from a generator seeded with `seed`.
Sequence block_sequence(std::span<const Block> blocks, const Pose& pose, const Jitter& jitter,
                        int width, int height, std::uint64_t seed);

/// A small library of clearly distinct expressions.
std::vector<Expression> expression_palette();

/// Target of 10 frames in three expression blocks and a 5-frame source in a
/// different pose whose frame `planted[k]` shows block k's expression.
struct PlantedFixture {
  Sequence target;
  Sequence source;
  std::vector<int> planted;  // per target block
};

PlantedFixture planted_fixture(int width, int height, const Jitter& target_jitter,
                               std::uint64_t seed);

/// Writes `frame_*.png` and `landmarks.txt` into `dir`.
void write_sequence(const Sequence& sequence, const std::filesystem::path& dir);

}  // namespace reenact::synth
