#include "moo/hypervolume.hpp"

#include "core/errors.hpp"

#include <algorithm>
#include <array>
#include <vector>

namespace pf2es::moo {

namespace {

double sweep2d(std::vector<std::array<double, 2>> pts, double r1, double r2) {
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a[0] != b[0] ? a[0] > b[0] : a[1] > b[1];
  });
  double hv = 0.0;
  double top = r2;
  for (const auto& p : pts) {
    if (p[1] > top) {
      hv += (p[0] - r1) * (p[1] - top);
      top = p[1];
    }
  }
  return hv;
}

}  // namespace

double hypervolume(const Matrix& points, const Vector& ref) {
  const auto m = ref.size();
  if (m < 1) throw ContractError("hypervolume: empty reference point");
  if (m > 3) throw UnsupportedDimensionError("hypervolume: only 1 to 3 objectives are supported");
  if (points.rows() > 0 && points.cols() != m) throw ContractError("hypervolume: dimension mismatch");

  std::vector<Eigen::Index> useful;
  for (Eigen::Index i = 0; i < points.rows(); ++i)
    if ((points.row(i).transpose().array() > ref.array()).all()) useful.push_back(i);
  if (useful.empty()) return 0.0;

  if (m == 1) {
    double best = ref[0];
    for (auto i : useful) best = std::max(best, points(i, 0));
    return best - ref[0];
  }
  if (m == 2) {
    std::vector<std::array<double, 2>> pts;
    for (auto i : useful) pts.push_back({points(i, 0), points(i, 1)});
    return sweep2d(std::move(pts), ref[0], ref[1]);
  }
  // M = 3: slice along the third objective, from the top down.
  std::sort(useful.begin(), useful.end(), [&](auto a, auto b) { return points(a, 2) > points(b, 2); });
  double hv = 0.0;
  std::vector<std::array<double, 2>> active;
  for (std::size_t t = 0; t < useful.size(); ++t) {
    const auto i = useful[t];
    active.push_back({points(i, 0), points(i, 1)});
    const double z_hi = points(i, 2);
    const double z_lo = t + 1 < useful.size() ? points(useful[t + 1], 2) : ref[2];
    if (z_hi > z_lo) hv += sweep2d(active, ref[0], ref[1]) * (z_hi - z_lo);
  }
  return hv;
}

}  // namespace pf2es::moo
