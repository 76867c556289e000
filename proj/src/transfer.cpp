#include "bwt/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bwt {

double TransferMatrix::max_abs() const {
  return std::max({std::abs(m11), std::abs(m12), std::abs(m21), std::abs(m22)});
}

TransferMatrix operator*(const TransferMatrix& a, const TransferMatrix& b) {
  return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
          a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
}

BoundaryState operator*(const TransferMatrix& m, const BoundaryState& s) {
  return {m.m11 * s.psi + m.m12 * s.dpsi, m.m21 * s.psi + m.m22 * s.dpsi};
}

namespace {

double entry_rel_diff(Complex a, Complex b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace

double max_relative_difference(const TransferMatrix& a, const TransferMatrix& b) {
  return std::max({entry_rel_diff(a.m11, b.m11), entry_rel_diff(a.m12, b.m12),
                   entry_rel_diff(a.m21, b.m21), entry_rel_diff(a.m22, b.m22)});
}

WaveNumbers wave_numbers(double alpha, const BWGeometry& g, double E) {
  if (!(E > 0.0)) throw std::invalid_argument("energy must be > 0");
  return {std::sqrt(Complex(E - alpha * g.h, 0.0)), std::sqrt(Complex(E + alpha * g.d, 0.0)),
          std::sqrt(E)};
}

TransferMatrix segment_matrix(double width, double value, double E) {
  const double kappa2 = E - value;
  const double x = kappa2 * width * width;
  if (std::abs(x) < 1e-8) {
    // cos and sin(kw)/k as series in x = k^2 w^2; the next terms are O(x^3) < 1e-24.
    const double c = 1.0 - x / 2.0 + x * x / 24.0;
    const double s = 1.0 - x / 6.0 + x * x / 120.0;
    return {c, width * s, -kappa2 * width * s, c};
  }
  const Complex kappa = std::sqrt(Complex(kappa2, 0.0));
  const Complex c = std::cos(kappa * width);
  const Complex s = std::sin(kappa * width);
  return {c, s / kappa, -kappa * s, c};
}

TransferMatrix chain_matrix(const SegmentChain& chain, double E) {
  TransferMatrix m;
  for (const auto& seg : chain.segments()) m = segment_matrix(seg.width, seg.value, E) * m;
  return m;
}

TransferMatrix closed_form_plus(double alpha, const BWGeometry& g, double E) {
  const auto [p, q, k] = wave_numbers(alpha, g, E);
  const Complex P = p * g.l;
  const Complex Q = q * g.r;
  const Complex sP = std::sin(P), cP = std::cos(P), s2P = std::sin(2.0 * P), c2P = std::cos(2.0 * P);
  const Complex sQ = std::sin(Q), cQ = std::cos(Q), s2Q = std::sin(2.0 * Q);
  const Complex pq = p / q, qp = q / p;

  TransferMatrix m;
  m.m11 = c2P * cQ * cQ - 0.25 * (3.0 * pq + qp) * s2P * s2Q + (pq * pq * sP * sP - cP * cP) * sQ * sQ;
  m.m12 = s2P * cQ * cQ / p + cP * cP * s2Q / q - (pq + qp) * (sP * cQ / p + cP * sQ / q) * sP * sQ;
  m.m21 = -p * s2P * cQ * cQ - q * cP * cP * s2Q + (pq + qp) * (p * sP * cQ + q * cP * sQ) * sP * sQ;
  m.m22 = c2P * cQ * cQ - 0.25 * (pq + 3.0 * qp) * s2P * s2Q + (qp * qp * sP * sP - cP * cP) * sQ * sQ;
  return m;
}

TransferMatrix closed_form_minus(double alpha, const BWGeometry& g, double E) {
  const auto [p, q, k] = wave_numbers(alpha, g, E);
  const Complex P = p * g.l;
  const Complex Q = q * g.r;
  const Complex sP = std::sin(P), cP = std::cos(P), s2P = std::sin(2.0 * P), c2P = std::cos(2.0 * P);
  const Complex s2Q = std::sin(2.0 * Q), c2Q = std::cos(2.0 * Q);
  const Complex pq = p / q, qp = q / p;

  TransferMatrix m;
  m.m11 = c2P * c2Q - 0.5 * (pq + qp) * s2P * s2Q;
  m.m22 = m.m11;
  m.m12 = s2P * c2Q / p + (pq * cP * cP - qp * sP * sP) * s2Q / p;
  m.m21 = -p * s2P * c2Q + p * (pq * sP * sP - qp * cP * cP) * s2Q;
  return m;
}

TransferMatrix closed_form_plus(const BWParams& params, double E) {
  return closed_form_plus(params.alpha, geometry(params), E);
}

TransferMatrix closed_form_minus(const BWParams& params, double E) {
  return closed_form_minus(params.alpha, geometry(params), E);
}

TransferMatrix closed_form(const BWParams& params, double E) {
  return params.model == Model::Plus ? closed_form_plus(params, E) : closed_form_minus(params, E);
}

Complex lambda21_factored(Model model, double alpha, const BWGeometry& g, double E) {
  const auto [p, q, k] = wave_numbers(alpha, g, E);
  const Complex P = p * g.l;
  const Complex Q = q * g.r;
  const Complex sP = std::sin(P), cP = std::cos(P), sQ = std::sin(Q), cQ = std::cos(Q);
  const Complex shared = p * sP * cQ + q * cP * sQ;
  const Complex first = model == Model::Plus ? (p / q + q / p) * sP * sQ - 2.0 * cP * cQ
                                             : 2.0 * ((p / q) * sP * sQ - cP * cQ);
  return first * shared;
}

Complex lambda21_factored(Model model, const BWParams& params, double E) {
  return lambda21_factored(model, params.alpha, geometry(params), E);
}

TransferMatrix limit_matrix(Model model, LimitBranch branch, double theta) {
  if (branch == LimitBranch::One) return TransferMatrix::diagonal(-1.0, -1.0);
  if (model == Model::Minus) return TransferMatrix::identity();
  if (theta == 0.0 || !std::isfinite(theta)) throw std::invalid_argument("theta must be nonzero and finite");
  return TransferMatrix::diagonal(theta * theta, 1.0 / (theta * theta));
}

}  // namespace bwt
