#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "bwt/potential.hpp"
#include "bwt/scattering.hpp"
#include "bwt/transfer.hpp"

namespace bwt {

enum class SetLabel { SigmaPlus, SigmaMinus, SigmaPrime };

std::string_view to_string(SetLabel label);

struct ResonanceRoot {
  double alpha = 0.0;
  SetLabel set = SetLabel::SigmaPlus;
  int index = 0;
  std::optional<double> theta;
  double residual = 0.0;
};

struct Window {
  double lo = -40.0;
  double hi = 40.0;
};

struct ResonanceSet {
  std::vector<ResonanceRoot> roots;
  Window window;
  double b = 3.0;
  double sigma = 1.0;
};

// Zero-range transmission conditions as residuals in alpha. Each is evaluated
// through principal complex square roots so that alpha < 0 is the analytic
// continuation of alpha > 0; the continued value is checked to be real.
// With x = sqrt(2 alpha s+ / (1 + 1/b)), y = sqrt(2 alpha s- / (1 + b)) and
// c = sqrt(b s- / s+):
//
//   f_plus  = (c - 1/c) tanh(x) tan(y) - 2
//   f_minus = tanh(x) tan(y) + c
//   f_prime = tanh(x) - c tan(y)       (times -i for alpha < 0, where it is
//                                       purely imaginary)
//
// They are the eps -> 0 limits of the finite-eps conditions, obtained with
// p l -> i x and q r -> y. When the well weight vanishes (sigma = 0) the
// residuals are replaced by their leading rescaled sigma -> 0 forms, which
// never change sign.
//
// All three throw PoleError when a tan/tanh argument lies within 1e-12 of a
// singularity.
double f_plus(double alpha, double b, double sigma);
double f_minus(double alpha, double b, double sigma);
double f_prime(double alpha, double b, double sigma);

/// Finite-eps cancellation residuals:
///   r8  = 2 cos(pl) cos(qr) - (p/q + q/p) sin(pl) sin(qr)
///   r9  = p sin(pl) cos(qr) + q cos(pl) sin(qr)
///   r10 = p sin(pl) sin(qr) - q cos(pl) cos(qr)
struct FiniteEpsResiduals {
  Complex r8;
  Complex r9;
  Complex r10;
};

FiniteEpsResiduals finite_eps_residuals(const BWParams& params, double E);

using Residual = std::function<double(double)>;

/// Sign-change scan on a uniform grid followed by bisection. Brackets that
/// touch a PoleError, whose 10-point refinement never gets below |f| = 1, or
/// whose |f| grows under bisection are treated as poles and dropped. Roots are
/// returned ascending and deduplicated. Throws WindowTooCoarseError when two
/// roots end up closer than one grid cell.
std::vector<double> find_roots(const Residual& f, Window window, int grid_steps = 20000,
                               double tol = 1e-10);

struct ResonanceSets {
  ResonanceSet model;  // Sigma+ or Sigma-, including the trivial alpha = 0
  ResonanceSet prime;  // Sigma', nonzero roots with theta attached
};

struct RootSearch {
  int grid_steps = 20000;
  double tol = 1e-10;
};

ResonanceSets resonance_sets(Model model, double b, double sigma, Window window = {},
                             RootSearch search = {});

/// Double-barrier resonance residual (p/k + k/p) tan(p l) - 2 cot(2 k r) with
/// p = sqrt(k^2 - alpha h), for the sigma = 0 Minus structure.
double db_resonance_residual(double k, double alpha, double eps, double c1, double c2);

struct Peak {
  double alpha = 0.0;
  double trans = 0.0;
};

/// Locates the transmission crest within [guess - radius, guess + radius]:
/// a dense scan of u^2 + v^2 picks the best cell, then golden-section search
/// polishes it far below the 1e-8 alpha resolution. Throws NoPeakError when
/// the best sample sits on the bracket edge.
Peak peak_refine(const Structure& s, double k, double alpha_guess, double radius,
                 int scan_points = 4001);

struct RidgePoint {
  double k = 0.0;
  double alpha = 0.0;
  double trans = 0.0;
};

/// Tracks one ridge of T(alpha, k) by repeated peak_refine from k_from to
/// k_to over `steps` uniformly spaced k values, each seeded with the previous
/// crest.
std::vector<RidgePoint> follow_ridge(const Structure& s, double alpha_start, double k_from,
                                     double k_to, int steps, double radius = 0.3);

}  // namespace bwt
