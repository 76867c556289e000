#include "bwt/zerolimit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bwt/errors.hpp"
#include "bwt/scattering.hpp"
#include "parallel.hpp"

namespace bwt {

double theta(double alpha_prime, double b, double sigma_plus, double sigma_minus) {
  if (!(b > 0.0)) throw std::invalid_argument("b must be > 0");
  const Complex x = std::sqrt(Complex(2.0 * alpha_prime * sigma_plus / (1.0 + 1.0 / b), 0.0));
  const Complex y = std::sqrt(Complex(2.0 * alpha_prime * sigma_minus / (1.0 + b), 0.0));
  const Complex den = std::cos(y);
  if (std::abs(den) < 1e-12) throw PoleError("theta: cos denominator vanishes");
  const Complex t = std::cosh(x) / den;
  if (std::abs(t.imag()) > 1e-9 * (1.0 + std::abs(t.real())))
    throw std::logic_error("theta: continued value is not real (branch error)");
  return t.real();
}

BoundaryMap::BoundaryMap(double theta) : theta_(theta) {
  if (theta == 0.0 || !std::isfinite(theta)) throw std::invalid_argument("theta must be nonzero and finite");
}

TransferMatrix BoundaryMap::matrix() const { return TransferMatrix::diagonal(theta_, 1.0 / theta_); }

BoundaryState BoundaryMap::forward(const BoundaryState& left) const {
  return {theta_ * left.psi, left.dpsi / theta_};
}

BoundaryState BoundaryMap::inverse(const BoundaryState& right) const {
  return {right.psi / theta_, theta_ * right.dpsi};
}

BoundaryMap boundary_map(double theta) { return BoundaryMap(theta); }

double partial_transmission_limit(double theta) {
  return amplitudes(limit_matrix(Model::Plus, LimitBranch::Two, theta), 1.0, 0.0, 0.0).trans;
}

namespace {

const ResonanceRoot* match(const ResonanceSet& set, double alpha, double tol) {
  const ResonanceRoot* best = nullptr;
  for (const auto& r : set.roots)
    if (std::abs(r.alpha - alpha) <= tol && (!best || std::abs(r.alpha - alpha) < std::abs(best->alpha - alpha)))
      best = &r;
  return best;
}

}  // namespace

PointClassification classify(Model model, double alpha, double b, double sigma,
                             const ResonanceSets& sets, double match_tol) {
  if (!(sigma > 0.0))
    throw std::invalid_argument("zero-range classification needs sigma > 0 (sigma = 0 has no point limit)");
  if (sets.model.b != b || sets.model.sigma != sigma || sets.prime.b != b || sets.prime.sigma != sigma)
    throw std::invalid_argument("resonance sets were computed for different (b, sigma)");
  const SetLabel own = model == Model::Plus ? SetLabel::SigmaPlus : SetLabel::SigmaMinus;
  if (std::any_of(sets.model.roots.begin(), sets.model.roots.end(),
                  [own](const ResonanceRoot& r) { return r.set != own; }))
    throw std::invalid_argument("resonance sets were computed for the other model");
  const Window w = sets.model.window;
  if (!(alpha >= w.lo && alpha <= w.hi))
    throw std::invalid_argument("alpha " + std::to_string(alpha) + " is outside the resonance window");

  if (alpha == 0.0) return {TotalTransmission{own}, alpha};
  if (match(sets.model, alpha, match_tol)) return {TotalTransmission{own}, alpha};
  if (const auto* r = match(sets.prime, alpha, match_tol)) {
    if (model == Model::Minus) return {TotalTransmission{SetLabel::SigmaPrime}, alpha};
    const double th = r->theta.value();
    return {PartialTransmission{th, partial_transmission_limit(th)}, alpha};
  }
  return {Opaque{}, alpha};
}

std::vector<ConvergenceRow> converge_study(Model model, double alpha_limit, double b, double sigma,
                                           double k, std::span<const double> eps_list, double radius) {
  if (eps_list.empty()) throw std::invalid_argument("eps list is empty");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0)) throw std::invalid_argument("eps values must be > 0");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
      throw std::invalid_argument("eps list must be strictly decreasing");
  }
  std::vector<ConvergenceRow> rows(eps_list.size());
  detail::parallel_for(rows.size(), [&](std::size_t i) {
    const BWParams params{model, alpha_limit, eps_list[i], b, 1.0, sigma};
    const Peak peak = peak_refine(Structure(params), k, alpha_limit, radius);
    rows[i] = {eps_list[i], peak.alpha, peak.trans, std::abs(peak.alpha - alpha_limit)};
  });
  return rows;
}

double richardson_limit(std::span<const ConvergenceRow> rows) {
  if (rows.empty()) throw std::invalid_argument("no convergence rows");
  if (rows.size() == 1) return rows.front().t_peak;
  const auto& coarse = rows[rows.size() - 2];
  const auto& fine = rows.back();
  return fine.t_peak + (fine.t_peak - coarse.t_peak) * fine.eps / (coarse.eps - fine.eps);
}

}  // namespace bwt
