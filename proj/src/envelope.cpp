#include "sigma/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace sigma {

namespace {

struct Point {
  double t, g, alpha;
};

// Orientation of the polyline A -> B -> P; negative = clockwise turn,
// which is the concave (upper hull) direction for ascending t.
double cross(const Point& a, const Point& b, const Point& p) {
  return (b.t - a.t) * (p.g - a.g) - (b.g - a.g) * (p.t - a.t);
}

}  // namespace

double TailTransform::at(double alpha) const {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("TailTransform: alpha outside [0,1]");
  const double* begin = breakpoints.data();
  const double* end = begin + breakpoints.size();
  const double* it = std::lower_bound(begin, end, alpha);
  Eigen::Index k = static_cast<Eigen::Index>(it - begin);
  if (k == 0) return g(0);
  // alpha in (c_{k-1}, c_k]: interpolate on the segment ending at c_k
  const double c_lo = breakpoints(k - 1), c_hi = breakpoints(k);
  const double w = (alpha - c_lo) / (c_hi - c_lo);
  return g(k - 1) + w * (g(k) - g(k - 1));
}

TailTransform build_tail_transform(const StepQuantile& q) {
  if ((q.values.array() < 0.0).any())
    throw std::invalid_argument(
        "build_tail_transform: magnitude quantile must be nonnegative");
  const Eigen::Index m = q.steps();
  TailTransform out;
  out.breakpoints = q.breakpoints;
  out.g.resize(m + 1);
  out.g(m) = 0.0;
  for (Eigen::Index k = m; k >= 1; --k)
    out.g(k - 1) = out.g(k) + q.values(k - 1) * (q.breakpoints(k) - q.breakpoints(k - 1));
  return out;
}

double HullPoints::value_at(double t_query) const {
  if (!(t_query >= 0.0 && t_query <= 1.0))
    throw std::invalid_argument("HullPoints: t outside [0,1]");
  const double* begin = t.data();
  const double* end = begin + t.size();
  const double* it = std::lower_bound(begin, end, t_query);
  Eigen::Index j = static_cast<Eigen::Index>(it - begin);
  if (j == 0) return g(0);
  return g(j - 1) + slopes(j - 1) * (t_query - t(j - 1));
}

HullPoints concave_majorant(const TailTransform& tail, const Distortion& sig) {
  const Eigen::Index m = tail.breakpoints.size() - 1;
  const double u0 = sig.u0();

  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(m + 1));
  for (Eigen::Index k = 0; k <= m; ++k)
    pts.push_back({sig.S_at(tail.breakpoints(k)), tail.g(k), tail.breakpoints(k)});

  // Ascending t; for equal t the binding constraint is the largest g.
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
    if (a.t != b.t) return a.t < b.t;
    return a.g > b.g;
  });
  std::vector<Point> uniq;
  for (const Point& p : pts)
    if (uniq.empty() || p.t != uniq.back().t) uniq.push_back(p);

  // The point at t = 1 stands for the whole flat stretch [0, u0] of S; its
  // constraint value is G(0) and its alpha coordinate is u0.
  uniq.back().g = tail.g(0);
  uniq.back().alpha = u0;

  // Monotone-chain upper hull; collinear vertices merged.
  std::vector<Point> hull;
  for (const Point& p : uniq) {
    while (hull.size() >= 2 &&
           cross(hull[hull.size() - 2], hull[hull.size() - 1], p) >= 0.0)
      hull.pop_back();
    hull.push_back(p);
  }

  const Eigen::Index nv = static_cast<Eigen::Index>(hull.size());
  HullPoints out;
  out.t.resize(nv);
  out.g.resize(nv);
  out.alpha.resize(nv);
  for (Eigen::Index j = 0; j < nv; ++j) {
    out.t(j) = hull[static_cast<std::size_t>(j)].t;
    out.g(j) = hull[static_cast<std::size_t>(j)].g;
    out.alpha(j) = hull[static_cast<std::size_t>(j)].alpha;
  }
  out.slopes.resize(nv - 1);
  for (Eigen::Index j = 1; j < nv; ++j)
    out.slopes(j - 1) = (out.g(j) - out.g(j - 1)) / (out.t(j) - out.t(j - 1));
  return out;
}

double DensityH::q_mean(double q) const {
  double acc = 0.0;
  for (Eigen::Index j = 0; j < segment_slopes.size(); ++j)
    acc += std::pow(segment_slopes(j), q) * segment_measure(j);
  return std::pow(acc, 1.0 / q);
}

DensityH extract_density(const HullPoints& hull) {
  const Eigen::Index nseg = hull.segments();
  DensityH out;
  out.segment_slopes = hull.slopes;
  out.segment_measure.resize(nseg);
  for (Eigen::Index j = 0; j < nseg; ++j)
    out.segment_measure(j) = hull.t(j + 1) - hull.t(j);

  // Hull segment j covers u in (alpha(j+1), alpha(j)]; slopes fall with t,
  // so reading segments right-to-left yields the nondecreasing step form.
  // The last hull segment extends constantly across [0, u0].
  out.steps.breakpoints.resize(nseg + 1);
  out.steps.values.resize(nseg);
  out.steps.breakpoints(0) = 0.0;
  for (Eigen::Index j = 0; j < nseg; ++j) {
    out.steps.values(j) = hull.slopes(nseg - 1 - j);
    out.steps.breakpoints(j + 1) = hull.alpha(nseg - 1 - j);
  }
  out.steps.breakpoints(nseg) = 1.0;
  return out;
}

}  // namespace sigma
