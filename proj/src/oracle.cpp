#include "sigma/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "sigma/envelope.hpp"
#include "sigma/risk.hpp"

namespace sigma::oracle {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// Pool-adjacent-violators: nearest nondecreasing vector in l2.
void isotonic(std::vector<double>& h) {
  const std::size_t n = h.size();
  std::vector<double> level(n), weight(n);
  std::vector<std::size_t> count(n);
  std::size_t blocks = 0;
  for (std::size_t i = 0; i < n; ++i) {
    level[blocks] = h[i];
    weight[blocks] = 1.0;
    count[blocks] = 1;
    ++blocks;
    while (blocks >= 2 && level[blocks - 2] >= level[blocks - 1]) {
      const double w = weight[blocks - 2] + weight[blocks - 1];
      level[blocks - 2] =
          (weight[blocks - 2] * level[blocks - 2] + weight[blocks - 1] * level[blocks - 1]) / w;
      weight[blocks - 2] = w;
      count[blocks - 2] += count[blocks - 1];
      --blocks;
    }
  }
  std::size_t i = 0;
  for (std::size_t b = 0; b < blocks; ++b)
    for (std::size_t k = 0; k < count[b]; ++k) h[i++] = level[b];
}

struct SegmentData {
  std::vector<double> a;  // int of F^{-1}_{|Z|} over the segment
  std::vector<double> b;  // sigma mass of the segment
};

double ratio(const SegmentData& seg, const std::vector<double>& h, double p) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < h.size(); ++k) {
    num += seg.a[k] * h[k];
    den += seg.b[k] * std::pow(h[k], p);
  }
  if (den <= 0.0 || num <= 0.0) return 0.0;
  return num / std::pow(den, 1.0 / p);
}

}  // namespace

double enumerate_rho(const RandomVector& z, const RandomVector& y) {
  require(z.atoms() <= 8, "enumerate_rho: capped at 8 atoms");
  require(z.atoms() == y.atoms() && z.dim() == y.dim(),
          "enumerate_rho: shape mismatch");
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(z.atoms()));
  std::iota(perm.begin(), perm.end(), 0);
  double best = -std::numeric_limits<double>::infinity();
  do {
    best = std::max(best, permuted_pairing(z, y, perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

double search_dual_pairing(const RandomVector& z, const Distortion& sig,
                           double p, int restarts, std::uint64_t seed) {
  require(z.atoms() <= 8, "search_dual_pairing: capped at 8 atoms");
  require(std::isfinite(p) && p >= 1.0, "search_dual_pairing: p in [1, inf)");
  const StepQuantile q = quantile(z.magnitudes(1.0), z.space());
  const std::size_t m = static_cast<std::size_t>(q.steps());

  SegmentData seg;
  seg.a.resize(m);
  seg.b.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    const auto ki = static_cast<Eigen::Index>(k);
    seg.a[k] = q.values(ki) * (q.breakpoints(ki + 1) - q.breakpoints(ki));
    seg.b[k] = sig.integral_sigma(q.breakpoints(ki), q.breakpoints(ki + 1));
  }

  double best = 0.0;
  std::vector<double> h(m);

  // Indicator step vectors: the extreme rays of the monotone cone.
  for (std::size_t j = 0; j < m; ++j) {
    std::fill(h.begin(), h.end(), 0.0);
    for (std::size_t k = j; k < m; ++k) h[k] = 1.0;
    best = std::max(best, ratio(seg, h, p));
  }

  // First-order stationary start: h_k proportional to (a_k/b_k)^{1/(p-1)}.
  if (p > 1.0) {
    bool ok = true;
    for (std::size_t k = 0; k < m; ++k) {
      if (seg.b[k] <= 0.0) {
        ok = false;
        break;
      }
      h[k] = std::pow(seg.a[k] / seg.b[k], 1.0 / (p - 1.0));
    }
    if (ok) {
      isotonic(h);
      best = std::max(best, ratio(seg, h, p));
    }
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> grad(m), trial(m);
  for (int rs = 0; rs < restarts; ++rs) {
    for (std::size_t k = 0; k < m; ++k) h[k] = unif(rng);
    std::sort(h.begin(), h.end());
    double cur = ratio(seg, h, p);
    double stepsize = 0.5;
    for (int it = 0; it < 200 && stepsize > 1e-10; ++it) {
      double num = 0.0, den = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        num += seg.a[k] * h[k];
        den += seg.b[k] * std::pow(h[k], p);
      }
      if (den <= 0.0) break;
      for (std::size_t k = 0; k < m; ++k)
        grad[k] = seg.a[k] -
                  (num / den) * seg.b[k] * std::pow(std::max(h[k], 0.0), p - 1.0);
      double gnorm = 0.0;
      for (double gk : grad) gnorm = std::max(gnorm, std::abs(gk));
      if (gnorm <= 1e-14) break;
      trial = h;
      for (std::size_t k = 0; k < m; ++k)
        trial[k] = std::max(0.0, h[k] + stepsize * grad[k] / gnorm);
      isotonic(trial);
      for (std::size_t k = 0; k < m; ++k) trial[k] = std::max(trial[k], 0.0);
      const double cand = ratio(seg, trial, p);
      if (cand > cur + 1e-15) {
        h = trial;
        cur = cand;
      } else {
        stepsize *= 0.5;
      }
    }
    best = std::max(best, cur);
  }
  return best;
}

Eigen::VectorXd grid_biconjugate(const RandomVector& z, const Distortion& sig,
                                 const Eigen::VectorXd& probe_alphas,
                                 int y_grid, int beta_grid) {
  require(z.atoms() <= 6, "grid_biconjugate: capped at 6 atoms");
  const StepQuantile q = quantile(z.magnitudes(1.0), z.space());
  const TailTransform tail = build_tail_transform(q);

  std::set<double> betas{0.0, 1.0};
  for (Eigen::Index k = 0; k < tail.breakpoints.size(); ++k)
    betas.insert(tail.breakpoints(k));
  if (sig.family() == Distortion::Family::Step) {
    const Eigen::VectorXd& b = sig.step_breakpoints();
    for (Eigen::Index k = 0; k < b.size(); ++k) betas.insert(b(k));
  }
  for (int i = 1; i < beta_grid; ++i)
    betas.insert(static_cast<double>(i) / beta_grid);

  struct TG {
    double t, g;
  };
  std::vector<TG> pts;
  pts.reserve(betas.size());
  for (double beta : betas) pts.push_back({sig.S_at(beta), tail.at(beta)});

  // Slope candidates between all constraint-point pairs; the outer infimum
  // in y is piecewise linear with kinks at exactly these slopes.
  std::set<double> ys{0.0};
  double max_slope = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double dt = pts[i].t - pts[j].t;
      if (std::abs(dt) < 1e-13) continue;
      const double slope = (pts[i].g - pts[j].g) / dt;
      if (slope >= 0.0 && std::isfinite(slope)) {
        ys.insert(slope);
        max_slope = std::max(max_slope, slope);
      }
    }
  for (int i = 0; i <= y_grid; ++i)
    ys.insert(4.0 * max_slope * static_cast<double>(i) / y_grid);

  std::vector<double> conj;  // G*(y) = inf_beta y S(beta) - G(beta)
  conj.reserve(ys.size());
  for (double yv : ys) {
    double inner = std::numeric_limits<double>::infinity();
    for (const TG& pt : pts) inner = std::min(inner, yv * pt.t - pt.g);
    conj.push_back(inner);
  }

  Eigen::VectorXd out(probe_alphas.size());
  for (Eigen::Index a = 0; a < probe_alphas.size(); ++a) {
    const double s = sig.S_at(probe_alphas(a));
    double outer = std::numeric_limits<double>::infinity();
    std::size_t idx = 0;
    for (double yv : ys) {
      outer = std::min(outer, yv * s - conj[idx]);
      ++idx;
    }
    out(a) = outer;
  }
  return out;
}

}  // namespace sigma::oracle
