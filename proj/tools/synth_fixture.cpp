// Writes synthetic face sequences with exact landmark tracks, plus a ready-to-run
// configuration, for demos and manual experiments.
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "reenact/synth.hpp"

int main(int argc, char** argv) {
  using namespace reenact::synth;
  CLI::App app{"Generate synthetic reenactment inputs"};
  std::filesystem::path out_dir;
  std::string kind = "self";
  int width = 320;
  int height = 240;
  int block_length = 6;
  int blocks = 10;
  double noise = 0.0;
  double pixel_noise = 1.0;
  std::uint64_t seed = 7;
  app.add_option("--out", out_dir, "output directory")->required();
  app.add_option("--kind", kind, "self: one block sequence; planted: target + source")
      ->check(CLI::IsMember({"self", "planted"}));
  app.add_option("--width", width)->check(CLI::PositiveNumber);
  app.add_option("--height", height)->check(CLI::PositiveNumber);
  app.add_option("--blocks", blocks, "expression blocks (self)")->check(CLI::PositiveNumber);
  app.add_option("--block-length", block_length, "frames per block (self)")
      ->check(CLI::PositiveNumber);
  app.add_option("--noise", noise, "expression jitter amplitude");
  app.add_option("--pixel-noise", pixel_noise, "uniform intensity noise amplitude");
  app.add_option("--seed", seed);
  CLI11_PARSE(app, argc, argv);

  const Jitter jitter{noise, 0.5, 0.01, 0.01, pixel_noise};
  std::ofstream config(out_dir.string() + ".cfg");
  if (kind == "self") {
    const auto palette = expression_palette();
    std::vector<Block> spec;
    for (int b = 0; b < blocks; ++b) {
      spec.push_back({block_length, palette[static_cast<std::size_t>(b) % palette.size()]});
    }
    const Pose pose{width * 0.5, height * 0.42, height * 0.22, 0.0};
    write_sequence(block_sequence(spec, pose, jitter, width, height, seed), out_dir / "sequence");
    config << "source_dir = " << (out_dir / "sequence").string() << '\n'
           << "target_dir = " << (out_dir / "sequence").string() << '\n';
  } else {
    const auto fixture = planted_fixture(width, height, jitter, seed);
    write_sequence(fixture.target, out_dir / "target");
    write_sequence(fixture.source, out_dir / "source");
    config << "source_dir = " << (out_dir / "source").string() << '\n'
           << "target_dir = " << (out_dir / "target").string() << '\n';
  }
  config << "output_dir = " << (out_dir / "output").string() << '\n';
  std::cout << "wrote " << out_dir.string() << " and " << out_dir.string() << ".cfg\n";
  return 0;
}
