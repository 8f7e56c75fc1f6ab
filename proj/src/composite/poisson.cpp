#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>

#include "reenact/composite.hpp"
#include "reenact/error.hpp"

namespace reenact::composite {

namespace {

constexpr int kOffsets[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
// Below this CG mostly stalls on rounding noise.
constexpr double kMinRelativeTolerance = 1e-15;

}  // namespace

PoissonResult poisson_clone(const FloatImage& src, const FloatImage& dst, const BinaryMask& mask,
                            const PoissonOptions& options) {
  if (!src.same_shape(dst) || !dst.same_shape(mask.width(), mask.height())) {
    throw Error(ErrorKind::DimensionMismatch, "Poisson inputs differ in size");
  }
  if (mask.empty_foreground()) throw Error(ErrorKind::DegenerateOverlap, "Poisson mask is empty");
  if (mask.touches_border()) {
    throw Error(ErrorKind::BorderContact, "Poisson mask touches the image border");
  }

  const int w = mask.width();
  const int h = mask.height();
  std::vector<int> unknown(static_cast<std::size_t>(w) * h, -1);
  std::vector<std::pair<int, int>> pixels;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask.get(x, y)) continue;
      unknown[static_cast<std::size_t>(y) * w + x] = static_cast<int>(pixels.size());
      pixels.emplace_back(x, y);
    }
  }
  const auto n = static_cast<Eigen::Index>(pixels.size());

  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(pixels.size() * 5);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto [x, y] = pixels[static_cast<std::size_t>(i)];
    entries.emplace_back(i, i, 4.0);
    for (const auto& o : kOffsets) {
      const int j = unknown[static_cast<std::size_t>(y + o[1]) * w + (x + o[0])];
      if (j >= 0) entries.emplace_back(i, j, -1.0);
    }
  }
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(entries.begin(), entries.end());

  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                           Eigen::DiagonalPreconditioner<double>>
      solver;
  solver.setMaxIterations(options.max_iterations);
  solver.compute(a);

  PoissonResult result{dst, 0.0, 0};
  for (int c = 0; c < src.channels(); ++c) {
    Eigen::VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto [x, y] = pixels[static_cast<std::size_t>(i)];
      double rhs = 0.0;
      for (const auto& o : kOffsets) {
        const int qx = x + o[0];
        const int qy = y + o[1];
        rhs += src.at(x, y, c) - src.at(qx, qy, c);
        if (!mask.get(qx, qy)) rhs += dst.at(qx, qy, c);
      }
      b[i] = rhs;
    }
    // CG stops on the relative 2-norm, which bounds the infinity norm from above.
    const double scale = std::max(b.norm(), 1.0);
    const double goal = std::min(options.target_residual, 0.5 * options.tolerance);
    solver.setTolerance(std::max(kMinRelativeTolerance, std::min(1e-3, goal / scale)));
    const Eigen::VectorXd sol = solver.solve(b);
    const double residual = (a * sol - b).lpNorm<Eigen::Infinity>();
    if (!std::isfinite(residual) || residual > options.tolerance) {
      throw Error(ErrorKind::SolverFailure,
                  "Poisson solve did not converge on channel " + std::to_string(c) +
                      ": residual " + std::to_string(residual) + " after " +
                      std::to_string(solver.iterations()) + " iterations");
    }
    result.residual = std::max(result.residual, residual);
    result.iterations = std::max(result.iterations, static_cast<int>(solver.iterations()));
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto [x, y] = pixels[static_cast<std::size_t>(i)];
      result.image.at(x, y, c) = sol[i];
    }
  }
  return result;
}

}  // namespace reenact::composite
