#include "sigma/distortion.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace sigma {

namespace {

constexpr double kNormTol = 1e-12;

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void check_unit_interval(double x, const char* what) {
  require(std::isfinite(x) && x >= 0.0 && x <= 1.0,
          std::string(what) + " outside [0,1]");
}

double log_tail(double alpha) {
  // S(alpha) = (1-alpha)(1 - log(1-alpha)) for the Log family.
  if (alpha >= 1.0) return 0.0;
  const double x = 1.0 - alpha;
  return x * (1.0 - std::log(x));
}

std::string format_param(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

Distortion Distortion::constant() { return Distortion(); }

Distortion Distortion::avar(double beta) {
  require(std::isfinite(beta) && beta >= 0.0 && beta < 1.0,
          "avar: beta must lie in [0,1)");
  Distortion d;
  d.family_ = Family::Avar;
  d.param_ = beta;
  return d;
}

Distortion Distortion::power(double s) {
  require(std::isfinite(s) && s >= 1.0, "power: exponent must be >= 1");
  Distortion d;
  d.family_ = Family::Power;
  d.param_ = s;
  return d;
}

Distortion Distortion::log_spectrum() {
  Distortion d;
  d.family_ = Family::Log;
  return d;
}

Distortion Distortion::step(Eigen::VectorXd breakpoints, Eigen::VectorXd levels) {
  const Eigen::Index m = levels.size();
  require(m >= 1 && breakpoints.size() == m,
          "step: one level per breakpoint required");
  require(breakpoints.allFinite() && levels.allFinite(),
          "step: entries must be finite");
  require(std::abs(breakpoints(m - 1) - 1.0) <= kNormTol,
          "step: last breakpoint must be 1");
  Distortion d;
  d.family_ = Family::Step;
  d.breaks_.resize(m + 1);
  d.breaks_(0) = 0.0;
  d.breaks_.tail(m) = breakpoints;
  d.breaks_(m) = 1.0;
  for (Eigen::Index k = 1; k <= m; ++k)
    require(d.breaks_(k) > d.breaks_(k - 1),
            "step: breakpoints must be strictly increasing");
  require(levels(0) >= 0.0, "step: levels must be nonnegative");
  for (Eigen::Index k = 1; k < m; ++k)
    require(levels(k) >= levels(k - 1), "step: levels must be nondecreasing");
  double total = 0.0;
  for (Eigen::Index k = 0; k < m; ++k)
    total += levels(k) * (d.breaks_(k + 1) - d.breaks_(k));
  require(std::abs(total - 1.0) <= kNormTol,
          "step: levels must integrate to 1 within 1e-12");
  d.levels_ = levels / total;
  d.step_tail_.resize(m + 1);
  d.step_tail_(m) = 0.0;
  for (Eigen::Index k = m; k >= 1; --k)
    d.step_tail_(k - 1) =
        d.step_tail_(k) + d.levels_(k - 1) * (d.breaks_(k) - d.breaks_(k - 1));
  return d;
}

double Distortion::sigma_at(double u) const {
  require(std::isfinite(u) && u >= 0.0 && u < 1.0, "sigma_at: u outside [0,1)");
  switch (family_) {
    case Family::Constant:
      return 1.0;
    case Family::Avar:
      return u > param_ ? 1.0 / (1.0 - param_) : 0.0;
    case Family::Power:
      return param_ * std::pow(u, param_ - 1.0);
    case Family::Log:
      return -std::log1p(-u);
    case Family::Step: {
      if (u <= breaks_(1)) return levels_(0);
      const double* begin = breaks_.data() + 1;
      const double* end = breaks_.data() + breaks_.size();
      const double* it = std::lower_bound(begin, end, u);
      return levels_(static_cast<Eigen::Index>(it - begin));
    }
  }
  return 0.0;
}

double Distortion::S_at(double alpha) const {
  check_unit_interval(alpha, "S_at: alpha");
  switch (family_) {
    case Family::Constant:
      return 1.0 - alpha;
    case Family::Avar:
      return std::min(1.0, (1.0 - alpha) / (1.0 - param_));
    case Family::Power:
      return 1.0 - std::pow(alpha, param_);
    case Family::Log:
      return log_tail(alpha);
    case Family::Step: {
      const double* begin = breaks_.data() + 1;
      const double* end = breaks_.data() + breaks_.size();
      const double* it = std::lower_bound(begin, end, alpha);
      const Eigen::Index k = static_cast<Eigen::Index>(it - begin);
      if (k >= levels_.size()) return 0.0;
      return step_tail_(k + 1) + levels_(k) * (breaks_(k + 1) - alpha);
    }
  }
  return 0.0;
}

double Distortion::integral_sigma(double a, double b) const {
  check_unit_interval(a, "integral_sigma: a");
  check_unit_interval(b, "integral_sigma: b");
  require(a <= b, "integral_sigma: a must not exceed b");
  switch (family_) {
    case Family::Constant:
      return b - a;
    case Family::Avar:
      return std::max(0.0, std::min(b, 1.0) - std::max(a, param_)) /
             (1.0 - param_);
    case Family::Power:
      return std::pow(b, param_) - std::pow(a, param_);
    case Family::Log:
      return log_tail(a) - log_tail(b);
    case Family::Step:
      return S_at(a) - S_at(b);
  }
  return 0.0;
}

double Distortion::power_integral(double r) const {
  require(std::isfinite(r) && r >= 1.0, "power_integral: r must be >= 1");
  switch (family_) {
    case Family::Constant:
      return 1.0;
    case Family::Avar:
      return std::pow(1.0 - param_, 1.0 - r);
    case Family::Power:
      return std::pow(param_, r) / (r * (param_ - 1.0) + 1.0);
    case Family::Log:
      return std::tgamma(r + 1.0);
    case Family::Step: {
      double acc = 0.0;
      for (Eigen::Index k = 0; k < levels_.size(); ++k)
        acc += std::pow(levels_(k), r) * (breaks_(k + 1) - breaks_(k));
      return acc;
    }
  }
  return 0.0;
}

double Distortion::u0() const {
  switch (family_) {
    case Family::Avar:
      return param_;
    case Family::Step:
      for (Eigen::Index k = 0; k < levels_.size(); ++k)
        if (levels_(k) > 0.0) return breaks_(k);
      return 1.0;  // unreachable for a valid distortion
    default:
      return 0.0;
  }
}

bool Distortion::is_bounded() const { return family_ != Family::Log; }

double Distortion::sup_sigma() const {
  switch (family_) {
    case Family::Constant:
      return 1.0;
    case Family::Avar:
      return 1.0 / (1.0 - param_);
    case Family::Power:
      return param_;
    case Family::Log:
      return std::numeric_limits<double>::infinity();
    case Family::Step:
      return levels_(levels_.size() - 1);
  }
  return 0.0;
}

double Distortion::S_inverse(double t) const {
  check_unit_interval(t, "S_inverse: t");
  switch (family_) {
    case Family::Constant:
      return 1.0 - t;
    case Family::Avar:
      return 1.0 - t * (1.0 - param_);
    case Family::Power:
      return std::pow(1.0 - t, 1.0 / param_);
    case Family::Log: {
      // Solve x (1 - log x) = t for x = 1 - alpha, monotone increasing on [0,1].
      if (t <= 0.0) return 1.0;
      if (t >= 1.0) return 0.0;
      double lo = 0.0, hi = 1.0, x = t;
      for (int it = 0; it < 128; ++it) {
        const double f = x * (1.0 - std::log(x)) - t;
        if (f > 0.0)
          hi = x;
        else
          lo = x;
        const double deriv = -std::log(x);
        double next = x - f / deriv;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 1e-16 * (1.0 + std::abs(x))) {
          x = next;
          break;
        }
        x = next;
      }
      return 1.0 - x;
    }
    case Family::Step: {
      if (t >= 1.0) return u0();
      // locate segment with step_tail_(k+1) <= t <= step_tail_(k)
      for (Eigen::Index k = levels_.size() - 1; k >= 0; --k) {
        if (t <= step_tail_(k)) {
          if (levels_(k) <= 0.0) return breaks_(k + 1);
          return breaks_(k + 1) - (t - step_tail_(k + 1)) / levels_(k);
        }
      }
      return 1.0;
    }
  }
  return 0.0;
}

std::string Distortion::to_string() const {
  switch (family_) {
    case Family::Constant:
      return "constant";
    case Family::Avar:
      return "avar:" + format_param(param_);
    case Family::Power:
      return "power:" + format_param(param_);
    case Family::Log:
      return "log";
    case Family::Step: {
      std::string out = "step:";
      for (Eigen::Index k = 0; k < levels_.size(); ++k) {
        if (k > 0) out += ';';
        out += format_param(breaks_(k + 1)) + "," + format_param(levels_(k));
      }
      return out;
    }
  }
  return {};
}

Distortion Distortion::parse(const std::string& text) {
  if (text == "constant") return constant();
  if (text == "log") return log_spectrum();
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string rest =
      colon == std::string::npos ? std::string() : text.substr(colon + 1);
  auto to_double = [&](const std::string& s) {
    std::size_t pos = 0;
    double v;
    try {
      v = std::stod(s, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("distortion: bad number '" + s + "'");
    }
    if (pos != s.size())
      throw std::invalid_argument("distortion: bad number '" + s + "'");
    return v;
  };
  if (head == "avar") return avar(to_double(rest));
  if (head == "power") return power(to_double(rest));
  if (head == "step") {
    std::vector<double> bs, ls;
    std::istringstream in(rest);
    std::string pair;
    while (std::getline(in, pair, ';')) {
      const auto comma = pair.find(',');
      require(comma != std::string::npos,
              "distortion: step entries must be <breakpoint>,<level>");
      bs.push_back(to_double(pair.substr(0, comma)));
      ls.push_back(to_double(pair.substr(comma + 1)));
    }
    require(!bs.empty(), "distortion: step needs at least one entry");
    return step(Eigen::Map<Eigen::VectorXd>(bs.data(),
                                            static_cast<Eigen::Index>(bs.size())),
                Eigen::Map<Eigen::VectorXd>(ls.data(),
                                            static_cast<Eigen::Index>(ls.size())));
  }
  throw std::invalid_argument("distortion: unknown spec '" + text + "'");
}

SampleDistortion distortion_from_sample(const RandomVector& z, double vecnorm_r) {
  const Eigen::VectorXd m = z.magnitudes(vecnorm_r);
  const double mean = expectation(m, z.space());
  if (!(mean > 0.0))
    throw std::invalid_argument("distortion_from_sample: variable is zero");
  const StepQuantile q = quantile(m, z.space());
  const Eigen::Index n = q.steps();
  return {Distortion::step(q.breakpoints.tail(n), q.values / mean), mean};
}

}  // namespace sigma
