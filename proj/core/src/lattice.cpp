#include "dmkdv/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dmkdv/errors.hpp"

namespace dmkdv {

LatticeState::LatticeState(std::int64_t n_min, std::vector<double> values, double t)
    : n_min_(n_min), values_(std::move(values)), t_(t) {
  for (double q : values_) {
    if (!std::isfinite(q) || std::abs(q) >= 1.0) {
      std::ostringstream msg;
      msg << "lattice value " << q << " violates sup|q| < 1";
      throw InvalidStateError(msg.str());
    }
  }
  if (!std::isfinite(t_)) throw InvalidStateError("lattice time must be finite");
}

LatticeState LatticeState::zeros(std::int64_t half_width, double t) {
  if (half_width < 0) throw InvalidStateError("negative window half-width");
  return LatticeState(-half_width, std::vector<double>(2 * half_width + 1, 0.0), t);
}

double LatticeState::at(std::int64_t n) const {
  if (n < n_min_ || n > n_max()) return 0.0;
  return values_[static_cast<std::size_t>(n - n_min_)];
}

double LatticeState::sup_norm() const {
  double s = 0.0;
  for (double q : values_) s = std::max(s, std::abs(q));
  return s;
}

std::pair<std::int64_t, std::int64_t> LatticeState::support() const {
  auto first = std::find_if(values_.begin(), values_.end(), [](double q) { return q != 0.0; });
  if (first == values_.end()) return {0, -1};
  auto last = std::find_if(values_.rbegin(), values_.rend(), [](double q) { return q != 0.0; });
  return {n_min_ + (first - values_.begin()),
          n_min_ + static_cast<std::int64_t>(values_.size()) - 1 - (last - values_.rbegin())};
}

bool LatticeState::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double q) { return q == 0.0; });
}

std::string to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::zero: return "zero";
    case ProfileKind::single_site: return "single_site";
    case ProfileKind::gaussian: return "gaussian";
    case ProfileKind::custom_list: return "custom_list";
  }
  return "unknown";
}

ProfileKind profile_kind_from_string(const std::string& name) {
  if (name == "zero") return ProfileKind::zero;
  if (name == "single_site") return ProfileKind::single_site;
  if (name == "gaussian") return ProfileKind::gaussian;
  if (name == "custom_list") return ProfileKind::custom_list;
  throw ConfigError("unknown profile kind '" + name + "'");
}

std::int64_t InitialProfile::extent() const {
  const std::int64_t c = center < 0 ? -center : center;
  switch (kind) {
    case ProfileKind::zero:
      return 0;
    case ProfileKind::single_site:
      return c;
    case ProfileKind::gaussian:
      return c + static_cast<std::int64_t>(std::ceil(6.3 * width));
    case ProfileKind::custom_list:
      return std::max(c, std::abs(center + static_cast<std::int64_t>(values.size())));
  }
  return c;
}

LatticeState InitialProfile::realize(std::int64_t half_width) const {
  if (kind != ProfileKind::zero && !(std::abs(amplitude) < 1.0) && kind != ProfileKind::custom_list)
    throw InvalidStateError("profile amplitude must lie in (-1, 1)");
  std::vector<double> q(static_cast<std::size_t>(2 * half_width + 1), 0.0);
  auto put = [&](std::int64_t n, double v) {
    if (n < -half_width || n > half_width) {
      if (v != 0.0) throw InvalidStateError("profile does not fit in the window");
      return;
    }
    q[static_cast<std::size_t>(n + half_width)] = v;
  };
  switch (kind) {
    case ProfileKind::zero:
      break;
    case ProfileKind::single_site:
      put(center, amplitude);
      break;
    case ProfileKind::gaussian: {
      if (!(width > 0.0)) throw InvalidStateError("gaussian width must be positive");
      // exp(-x^2) < 1e-17 beyond x ~ 6.3
      const auto reach = static_cast<std::int64_t>(std::ceil(6.3 * width));
      for (std::int64_t k = -reach; k <= reach; ++k) {
        const double x = static_cast<double>(k) / width;
        put(center + k, amplitude * std::exp(-x * x));
      }
      break;
    }
    case ProfileKind::custom_list:
      for (std::size_t k = 0; k < values.size(); ++k)
        put(center + static_cast<std::int64_t>(k), values[k]);
      break;
  }
  return LatticeState(-half_width, std::move(q), 0.0);
}

void rhs(std::span<const double> q, std::span<double> out) {
  const std::size_t len = q.size();
  if (len == 0) return;
  if (len == 1) {
    out[0] = 0.0;
    return;
  }
  out[0] = (1.0 - q[0] * q[0]) * q[1];
  for (std::size_t i = 1; i + 1 < len; ++i) out[i] = (1.0 - q[i] * q[i]) * (q[i + 1] - q[i - 1]);
  out[len - 1] = -(1.0 - q[len - 1] * q[len - 1]) * q[len - 2];
}

std::vector<double> rhs(const LatticeState& state) {
  std::vector<double> out(state.size());
  rhs(state.values(), out);
  return out;
}

namespace {

class Rk4Stepper {
 public:
  Rk4Stepper(std::size_t len, const IntegrateOptions& options, double rho0)
      : k1_(len), k2_(len), k3_(len), k4_(len), tmp_(len), options_(options), rho0_(rho0) {
    const double half = static_cast<double>(len) / 2.0;
    edge_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(options.edge_fraction * half)));
    edge_ = std::min(edge_, len);
  }

  void step(std::vector<double>& q, double h, double t) {
    const std::size_t len = q.size();
    eval(q, k1_);
    for (std::size_t i = 0; i < len; ++i) tmp_[i] = q[i] + 0.5 * h * k1_[i];
    check_stage(tmp_, t);
    eval(tmp_, k2_);
    for (std::size_t i = 0; i < len; ++i) tmp_[i] = q[i] + 0.5 * h * k2_[i];
    check_stage(tmp_, t);
    eval(tmp_, k3_);
    for (std::size_t i = 0; i < len; ++i) tmp_[i] = q[i] + h * k3_[i];
    check_stage(tmp_, t);
    eval(tmp_, k4_);
    for (std::size_t i = 0; i < len; ++i)
      q[i] += h / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    check_step(q, t + h);
  }

 private:
  void eval(std::span<const double> q, std::span<double> out) {
    rhs(q, out);
    if (options_.reverse)
      for (double& v : out) v = -v;
  }

  static void check_stage(std::span<const double> q, double t) {
    for (double v : q) {
      if (!(std::abs(v) < 1.0)) {
        std::ostringstream msg;
        msg << "sup|q| reached " << std::abs(v) << " near t=" << t << "; reduce dt";
        throw BlowupError(msg.str());
      }
    }
  }

  void check_step(std::span<const double> q, double t) const {
    double sup = 0.0;
    for (double v : q) sup = std::max(sup, std::abs(v));
    if (!(sup <= rho0_ + options_.bound_slack)) {
      std::ostringstream msg;
      msg << "sup|q| = " << sup << " exceeds conserved bound rho0 = " << rho0_ << " at t=" << t;
      throw BlowupError(msg.str());
    }
    const std::size_t len = q.size();
    double edge = 0.0;
    for (std::size_t i = 0; i < edge_; ++i) {
      edge = std::max(edge, std::abs(q[i]));
      edge = std::max(edge, std::abs(q[len - 1 - i]));
    }
    if (edge > options_.spill_tolerance) {
      std::ostringstream msg;
      msg << "window too small: |q| = " << edge << " in the outer sites at t=" << t;
      throw SpillError(msg.str());
    }
  }

  std::vector<double> k1_, k2_, k3_, k4_, tmp_;
  IntegrateOptions options_;
  double rho0_;
  std::size_t edge_ = 1;
};

}  // namespace

std::vector<LatticeState> integrate_snapshots(const LatticeState& initial,
                                              std::span<const double> times, double dt,
                                              const IntegrateOptions& options) {
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  std::vector<LatticeState> out;
  out.reserve(times.size());
  std::vector<double> q(initial.values().begin(), initial.values().end());
  double t = initial.t();
  const double rho0 = conserved_rho0(initial);
  Rk4Stepper stepper(q.size(), options, rho0);
  const bool zero = initial.is_zero();
  for (double target : times) {
    if (!(target >= t)) throw DomainError("snapshot times must be increasing");
    const double span = target - t;
    if (span > 0.0 && !zero) {
      const auto steps = static_cast<std::int64_t>(std::ceil(span / dt - 1e-9));
      const double h = span / static_cast<double>(steps);
      const double t0 = t;
      for (std::int64_t k = 0; k < steps; ++k)
        stepper.step(q, h, t0 + static_cast<double>(k) * h);
    }
    t = target;
    out.emplace_back(initial.n_min(), q, t);
  }
  return out;
}

LatticeState integrate(const LatticeState& initial, double t_end, double dt,
                       const IntegrateOptions& options) {
  const double times[] = {t_end};
  return std::move(integrate_snapshots(initial, times, dt, options).front());
}

std::int64_t window_half_width(double t_end, double margin, double edge_fraction) {
  if (!(edge_fraction >= 0.0 && edge_fraction < 0.5)) throw DomainError("edge fraction must lie in [0, 0.5)");
  return static_cast<std::int64_t>(std::ceil((2.0 * t_end + margin) / (1.0 - edge_fraction)));
}

double conserved_c_inf(const LatticeState& state) {
  double c = 1.0;
  for (double q : state.values()) c *= (1.0 - q * q);
  return c;
}

double conserved_rho0(const LatticeState& state) {
  return std::sqrt(std::max(0.0, 1.0 - conserved_c_inf(state)));
}

double weighted_norm(const LatticeState& state, unsigned s) {
  double sum = 0.0;
  const auto values = state.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double n = static_cast<double>(state.n_min() + static_cast<std::int64_t>(i));
    sum += std::pow(1.0 + std::abs(n), static_cast<double>(s)) * std::abs(values[i]);
  }
  return sum;
}

}  // namespace dmkdv
