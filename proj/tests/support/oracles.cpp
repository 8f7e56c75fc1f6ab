#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/LU>

namespace oracle {

using namespace reenact;

double bilinear(const ImageBuffer& gray, double x, double y) {
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const double fx = x - x0;
  const double fy = y - y0;
  auto px = [&](int xx, int yy) {
    xx = std::clamp(xx, 0, gray.width() - 1);
    yy = std::clamp(yy, 0, gray.height() - 1);
    return static_cast<double>(gray.at(xx, yy));
  };
  return (1 - fx) * (1 - fy) * px(x0, y0) + fx * (1 - fy) * px(x0 + 1, y0) +
         (1 - fx) * fy * px(x0, y0 + 1) + fx * fy * px(x0 + 1, y0 + 1);
}

int lbp_code(const ImageBuffer& gray, int x, int y, int l) {
  const double centre = gray.at(x, y);
  int code = 0;
  for (int i = 0; i < l; ++i) {
    const double angle = 2.0 * std::numbers::pi * i / l;
    double sx = x + std::cos(angle);
    double sy = y - std::sin(angle);
    if (std::abs(sx - std::round(sx)) < 1e-9) sx = std::round(sx);
    if (std::abs(sy - std::round(sy)) < 1e-9) sy = std::round(sy);
    if (bilinear(gray, sx, sy) >= centre) code |= 1 << i;
  }
  return code;
}

namespace {

bool is_uniform(int code) {
  int transitions = 0;
  for (int i = 0; i < 8; ++i) {
    if (((code >> i) & 1) != ((code >> ((i + 1) % 8)) & 1)) ++transitions;
  }
  return transitions <= 2;
}

int uniform_label(int code) {
  if (!is_uniform(code)) return 58;
  int label = 0;
  for (int c = 0; c < code; ++c) label += is_uniform(c) ? 1 : 0;
  return label;
}

}  // namespace

std::vector<double> tile_histogram(const ImageBuffer& gray, int x0, int y0, int x1, int y1) {
  std::vector<double> h(75, 0.0);
  double n = 0;
  for (int y = y0 + 1; y <= y1 - 1; ++y) {
    for (int x = x0 + 1; x <= x1 - 1; ++x) {
      h[static_cast<std::size_t>(uniform_label(lbp_code(gray, x, y, 8)))] += 1;
      h[static_cast<std::size_t>(59 + lbp_code(gray, x, y, 4))] += 1;
      n += 1;
    }
  }
  for (std::size_t i = 0; i < 75; ++i) h[i] /= n;
  return h;
}

double chi_squared(const lbp::RegionDescriptor& a, const lbp::RegionDescriptor& b) {
  double region = 0.0;
  for (int t = 0; t < a.tiles; ++t) {
    double tile = 0.0;
    for (int k = 0; k < 75; ++k) {
      const double p = a.bins[static_cast<std::size_t>(t * 75 + k)];
      const double q = b.bins[static_cast<std::size_t>(t * 75 + k)];
      tile += 0.5 * (p - q) * (p - q) / (p + q + 1e-10);
    }
    // Each tile holds two unit-mass histograms.
    region += tile / 2.0;
  }
  return region / a.tiles;
}

double appearance(const lbp::FrameFeatures& a, const lbp::FrameFeatures& b,
                  const std::array<double, 4>& w) {
  double d = 0.0;
  for (int r = 0; r < 4; ++r) {
    d += w[static_cast<std::size_t>(r)] *
         chi_squared(a.regions[static_cast<std::size_t>(r)], b.regions[static_cast<std::size_t>(r)]);
  }
  return d;
}

double motion_distance(const matching::MotionField66& a, const matching::MotionField66& b) {
  double d1 = 0, d2 = 0, d3 = 0;
  for (int i = 0; i < 66; ++i) {
    const double ax = a[i].x(), ay = a[i].y(), bx = b[i].x(), by = b[i].y();
    const double na = std::sqrt(ax * ax + ay * ay);
    const double nb = std::sqrt(bx * bx + by * by);
    d1 += std::sqrt((ax - bx) * (ax - bx) + (ay - by) * (ay - by));
    if (na >= 1e-8 && nb >= 1e-8) d2 += 1.0 - (ax * bx + ay * by) / (na * nb);
    d3 += std::abs(na - nb);
  }
  d1 /= 66;
  d2 /= 66;
  d3 /= 66;
  return 1.0 - (std::exp(-d1) + std::exp(-d2) + std::exp(-d3)) / 3.0;
}

namespace {

double pair_variance(const Eigen::MatrixXd& d, const std::vector<int>& members) {
  std::vector<double> values;
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = i + 1; j < members.size(); ++j) values.push_back(d(members[i], members[j]));
  }
  if (values.size() < 2) return 0.0;
  if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); })) {
    return 0.0;
  }
  double mean = 0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0;
  for (double v : values) var += (v - mean) * (v - mean);
  return var / static_cast<double>(values.size());
}

}  // namespace

std::vector<std::array<int, 2>> temporal_clustering(const Eigen::MatrixXd& d) {
  std::vector<std::vector<int>> clusters;
  for (int t = 0; t < d.rows(); ++t) clusters.push_back({t});
  while (clusters.size() > 1) {
    std::size_t best = 0;
    double best_linkage = 0;
    for (std::size_t k = 0; k + 1 < clusters.size(); ++k) {
      double sum = 0;
      for (int i : clusters[k]) {
        for (int j : clusters[k + 1]) sum += d(i, j);
      }
      const double linkage = sum / static_cast<double>(clusters[k].size() * clusters[k + 1].size());
      if (k == 0 || linkage < best_linkage) {
        best = k;
        best_linkage = linkage;
      }
    }
    std::vector<int> merged = clusters[best];
    merged.insert(merged.end(), clusters[best + 1].begin(), clusters[best + 1].end());
    const bool singletons = clusters[best].size() == 1 && clusters[best + 1].size() == 1;
    const double v = pair_variance(d, merged);
    const double limit = std::max(pair_variance(d, clusters[best]), pair_variance(d, clusters[best + 1]));
    if (!(singletons || v < limit || v == 0.0)) break;
    clusters[best] = merged;
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(best) + 1);
  }
  std::vector<std::array<int, 2>> spans;
  for (const auto& c : clusters) spans.push_back({c.front(), c.back()});
  return spans;
}

FloatImage dense_poisson(const FloatImage& src, const FloatImage& dst, const BinaryMask& mask) {
  std::vector<std::array<int, 2>> unknowns;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (mask.get(x, y)) unknowns.push_back({x, y});
    }
  }
  const auto n = static_cast<Eigen::Index>(unknowns.size());
  auto index_of = [&](int x, int y) -> Eigen::Index {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (unknowns[static_cast<std::size_t>(i)][0] == x && unknowns[static_cast<std::size_t>(i)][1] == y) return i;
    }
    return -1;
  };
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, i) = 4;
    const auto [x, y] = unknowns[static_cast<std::size_t>(i)];
    for (const auto& [dx, dy] : {std::array{1, 0}, std::array{-1, 0}, std::array{0, 1}, std::array{0, -1}}) {
      const auto j = index_of(x + dx, y + dy);
      if (j >= 0) a(i, j) = -1;
    }
  }
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  FloatImage out = dst;
  for (int c = 0; c < src.channels(); ++c) {
    Eigen::VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto [x, y] = unknowns[static_cast<std::size_t>(i)];
      double rhs = 4 * src.at(x, y, c);
      for (const auto& [dx, dy] : {std::array{1, 0}, std::array{-1, 0}, std::array{0, 1}, std::array{0, -1}}) {
        rhs -= src.at(x + dx, y + dy, c);
        if (!mask.get(x + dx, y + dy)) rhs += dst.at(x + dx, y + dy, c);
      }
      b[i] = rhs;
    }
    const Eigen::VectorXd sol = lu.solve(b);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto [x, y] = unknowns[static_cast<std::size_t>(i)];
      out.at(x, y, c) = sol[i];
    }
  }
  return out;
}

double warping_energy(const Eigen::VectorXd& x, const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                      double w_nr, double w_r) {
  return w_nr * (x - a).squaredNorm() + w_r * (x - b).squaredNorm();
}

Eigen::VectorXd minimize_warping_energy(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                                        double w_nr, double w_r, Eigen::VectorXd x,
                                        double tolerance) {
  const double h = 1e-4;
  const double step = 0.25;
  for (int iter = 0; iter < 100000; ++iter) {
    Eigen::VectorXd grad(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      Eigen::VectorXd xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      grad[i] = (warping_energy(xp, a, b, w_nr, w_r) - warping_energy(xm, a, b, w_nr, w_r)) / (2 * h);
    }
    x -= step * grad;
    if ((step * grad).lpNorm<Eigen::Infinity>() < tolerance) break;
  }
  return x;
}

lbp::FrameFeatures random_features(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::bernoulli_distribution sparse(0.3);
  lbp::FrameFeatures f;
  const int tiles[4] = {15, 6, 6, 8};
  for (int r = 0; r < 4; ++r) {
    auto& d = f.regions[static_cast<std::size_t>(r)];
    d.tiles = tiles[r];
    d.bins.assign(static_cast<std::size_t>(tiles[r]) * 75, 0.0);
    for (int t = 0; t < tiles[r]; ++t) {
      for (const auto [first, count] : {std::array{0, 59}, std::array{59, 16}}) {
        double sum = 0;
        for (int k = 0; k < count; ++k) {
          const double v = sparse(rng) ? u(rng) : 0.0;
          d.bins[static_cast<std::size_t>(t * 75 + first + k)] = v;
          sum += v;
        }
        if (sum == 0) {
          d.bins[static_cast<std::size_t>(t * 75 + first)] = 1.0;
          sum = 1.0;
        }
        for (int k = 0; k < count; ++k) d.bins[static_cast<std::size_t>(t * 75 + first + k)] /= sum;
      }
    }
  }
  return f;
}

ImageBuffer random_gray(int width, int height, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(0, 255);
  ImageBuffer img(width, height, 1);
  for (auto& v : img.data()) v = static_cast<std::uint8_t>(d(rng));
  return img;
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("reenact_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace oracle
