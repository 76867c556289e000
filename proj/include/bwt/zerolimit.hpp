#pragma once

#include <span>
#include <variant>
#include <vector>

#include "bwt/potential.hpp"
#include "bwt/resonance.hpp"
#include "bwt/transfer.hpp"

namespace bwt {

/// Discontinuity factor cosh(sqrt(2 a s+ / (1 + 1/b))) / cos(sqrt(2 a s- / (1 + b)))
/// at a root a of f_prime, continued analytically for a < 0 (where it becomes
/// cos X / cosh Y). Throws PoleError if the denominator is within 1e-12 of 0.
double theta(double alpha_prime, double b, double sigma_plus, double sigma_minus);

/// Two-sided point boundary condition psi(+0) = theta psi(-0),
/// psi'(-0) = theta psi'(+0), i.e. the action of diag(theta, 1/theta).
class BoundaryMap {
 public:
  explicit BoundaryMap(double theta);

  double theta() const { return theta_; }
  TransferMatrix matrix() const;
  /// (psi(-0), psi'(-0)) -> (psi(+0), psi'(+0))
  BoundaryState forward(const BoundaryState& left) const;
  BoundaryState inverse(const BoundaryState& right) const;

 private:
  double theta_;
};

BoundaryMap boundary_map(double theta);

/// Limiting transmissivity 4 / (4 + (theta^2 - theta^-2)^2) of the
/// diag(theta^2, theta^-2) connection matrix, evaluated through amplitudes().
double partial_transmission_limit(double theta);

struct TotalTransmission {
  SetLabel set;
};
struct PartialTransmission {
  double theta;
  double t_limit;
};
struct Opaque {};

struct PointClassification {
  std::variant<TotalTransmission, PartialTransmission, Opaque> kind;
  double alpha = 0.0;
};

/// Zero-range behaviour of strength alpha. Plus is totally transmitting on
/// Sigma+, partially on Sigma'; Minus is totally transmitting on Sigma- and
/// Sigma'; alpha = 0 is always totally transmitting; everything else is
/// opaque. Throws std::invalid_argument if alpha is outside the sets' window,
/// the sets were built for another (b, sigma), or sigma = 0.
PointClassification classify(Model model, double alpha, double b, double sigma,
                             const ResonanceSets& sets, double match_tol = 1e-6);

struct ConvergenceRow {
  double eps = 0.0;
  double alpha_peak = 0.0;
  double t_peak = 0.0;
  double alpha_drift = 0.0;
};

/// One peak_refine per eps (strictly decreasing, c1 = b, c2 = 1) around
/// alpha_limit. Rows come back in eps_list order.
std::vector<ConvergenceRow> converge_study(Model model, double alpha_limit, double b,
                                           double sigma, double k,
                                           std::span<const double> eps_list,
                                           double radius = 0.5);

/// First-order Richardson extrapolation of t_peak to eps = 0 from the two
/// smallest eps rows.
double richardson_limit(std::span<const ConvergenceRow> rows);

}  // namespace bwt
