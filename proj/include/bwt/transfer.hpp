#pragma once

#include <complex>

#include "bwt/potential.hpp"

namespace bwt {

using Complex = std::complex<double>;

/// Entries above this magnitude mark a structure as effectively opaque.
inline constexpr double kNearOpaqueThreshold = 1e12;

/// Maps (psi, psi') at the left edge of a structure to the right edge.
struct TransferMatrix {
  Complex m11{1.0};
  Complex m12{0.0};
  Complex m21{0.0};
  Complex m22{1.0};

  static TransferMatrix identity() { return {}; }
  static TransferMatrix diagonal(Complex a, Complex d) { return {a, 0.0, 0.0, d}; }

  Complex det() const { return m11 * m22 - m12 * m21; }
  double max_abs() const;
  bool near_opaque() const { return max_abs() > kNearOpaqueThreshold; }

  friend TransferMatrix operator*(const TransferMatrix& a, const TransferMatrix& b);
  friend bool operator==(const TransferMatrix&, const TransferMatrix&) = default;
};

struct BoundaryState {
  Complex psi;
  Complex dpsi;
};

BoundaryState operator*(const TransferMatrix& m, const BoundaryState& s);

/// Largest per-entry relative difference |a - b| / max(|a|, |b|); entries
/// that are both exactly zero count as equal.
double max_relative_difference(const TransferMatrix& a, const TransferMatrix& b);

/// p = sqrt(E - alpha h), q = sqrt(E + alpha d) (principal branch), k = sqrt(E).
struct WaveNumbers {
  Complex p;
  Complex q;
  double k = 0.0;
};

WaveNumbers wave_numbers(double alpha, const BWGeometry& g, double E);

/// Slab propagator [[cos kw, sin(kw)/k], [-k sin kw, cos kw]] with
/// k = sqrt(E - value). Uses a three-term series when |k^2| w^2 < 1e-8.
TransferMatrix segment_matrix(double width, double value, double E);

/// Ordered product M_n ... M_1, leftmost slab applied first.
TransferMatrix chain_matrix(const SegmentChain& chain, double E);

// Closed-form matrix elements in terms of p l and q r. These are computed
// independently of the slab product and serve as its oracle.
TransferMatrix closed_form_plus(double alpha, const BWGeometry& g, double E);
TransferMatrix closed_form_minus(double alpha, const BWGeometry& g, double E);
TransferMatrix closed_form_plus(const BWParams& params, double E);
TransferMatrix closed_form_minus(const BWParams& params, double E);
TransferMatrix closed_form(const BWParams& params, double E);

/// lambda_21 as the product of its two factors. The second factor
/// p sin(pl) cos(qr) + q cos(pl) sin(qr) is shared by both models; the first
/// is (p/q + q/p) sin(pl) sin(qr) - 2 cos(pl) cos(qr) for Plus and
/// 2 [(p/q) sin(pl) sin(qr) - cos(pl) cos(qr)] for Minus.
Complex lambda21_factored(Model model, double alpha, const BWGeometry& g, double E);
Complex lambda21_factored(Model model, const BWParams& params, double E);

enum class LimitBranch { One, Two };

/// Zero-range connection matrices: -I on branch One for both models,
/// diag(theta^2, theta^-2) for (Plus, Two), I for (Minus, Two).
/// Throws std::invalid_argument for theta == 0 on (Plus, Two).
TransferMatrix limit_matrix(Model model, LimitBranch branch, double theta = 1.0);

}  // namespace bwt
