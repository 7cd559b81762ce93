#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dmkdv {

/// Real field q_n on the finite window n_min .. n_min + size() - 1 at time t.
/// Sites outside the window are zero. Construction rejects sup|q| >= 1.
class LatticeState {
 public:
  LatticeState() = default;
  LatticeState(std::int64_t n_min, std::vector<double> values, double t = 0.0);

  /// Window [-half_width, half_width] filled with zeros.
  static LatticeState zeros(std::int64_t half_width, double t = 0.0);

  std::int64_t n_min() const { return n_min_; }
  std::int64_t n_max() const { return n_min_ + static_cast<std::int64_t>(values_.size()) - 1; }
  std::size_t size() const { return values_.size(); }
  double t() const { return t_; }
  std::span<const double> values() const { return values_; }

  /// q_n, zero outside the window.
  double at(std::int64_t n) const;
  double sup_norm() const;

  /// Smallest and largest site with q_n != 0; {0, -1} when the state is zero.
  std::pair<std::int64_t, std::int64_t> support() const;
  bool is_zero() const;

 private:
  std::int64_t n_min_ = 0;
  std::vector<double> values_;
  double t_ = 0.0;
};

enum class ProfileKind { zero, single_site, gaussian, custom_list };

std::string to_string(ProfileKind kind);
ProfileKind profile_kind_from_string(const std::string& name);

/// Recipe for an initial datum.
struct InitialProfile {
  ProfileKind kind = ProfileKind::single_site;
  double amplitude = 0.3;
  double width = 1.0;
  std::int64_t center = 0;
  /// custom_list: values placed at center, center + 1, ...
  std::vector<double> values;

  /// Realises the profile on [-half_width, half_width]. Gaussian tails below
  /// 1e-17 are truncated so the support stays finite.
  LatticeState realize(std::int64_t half_width) const;

  /// Smallest half-width that holds the (truncated) support.
  std::int64_t extent() const;
};

/// dq_n/dt = (1 - q_n^2)(q_{n+1} - q_{n-1}) with zero padding at the window edges.
std::vector<double> rhs(const LatticeState& state);
void rhs(std::span<const double> q, std::span<double> out);

struct IntegrateOptions {
  double spill_tolerance = 1e-10;
  /// Each edge band is this fraction of its half of the window.
  double edge_fraction = 0.1;
  /// Slack on the conserved bound sup|q| <= rho0.
  double bound_slack = 1e-9;
  /// Integrate dq/dt = -rhs(q). Used for reversal checks.
  bool reverse = false;
};

/// Half-width W such that the sites inside the two edge bands still cover
/// |n| <= 2 t_end + margin: W = ceil((2 t_end + margin) / (1 - edge_fraction)).
std::int64_t window_half_width(double t_end, double margin, double edge_fraction = 0.1);

/// Classical RK4 from initial.t() to t_end with step close to dt (the step
/// count is rounded up so the final step lands exactly on t_end).
/// Throws SpillError if the outer sites pick up mass and BlowupError if
/// sup|q| reaches 1 at a stage or exceeds rho0 after a step.
LatticeState integrate(const LatticeState& initial, double t_end, double dt,
                       const IntegrateOptions& options = {});

/// Same as integrate(), recording copies of the state at each requested time.
/// Times must be increasing and not before initial.t().
std::vector<LatticeState> integrate_snapshots(const LatticeState& initial,
                                              std::span<const double> times, double dt,
                                              const IntegrateOptions& options = {});

/// c_{-inf} = prod_n (1 - q_n^2).
double conserved_c_inf(const LatticeState& state);
/// rho0 = (1 - c_{-inf})^{1/2}.
double conserved_rho0(const LatticeState& state);

/// sum_n (1 + |n|)^s |q_n|.
double weighted_norm(const LatticeState& state, unsigned s);

}  // namespace dmkdv
