#include "bwt/scattering.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "bwt/format.hpp"
#include "parallel.hpp"

namespace bwt {

namespace {

constexpr Complex kI{0.0, 1.0};

void check_unimodular(const TransferMatrix& m) {
  // Rounding in a stored 2x2 product perturbs det by about u (|l11 l22| + |l12 l21|).
  const double budget =
      1e-8 + 1e5 * std::numeric_limits<double>::epsilon() *
                 (std::abs(m.m11 * m.m22) + std::abs(m.m12 * m.m21));
  if (!(std::abs(m.det() - 1.0) <= budget))
    throw std::invalid_argument("transfer matrix is not unimodular");
}

}  // namespace

UV uv(const TransferMatrix& m, double k) {
  const Complex u = m.m11 - m.m22;
  const Complex v = k * m.m12 + m.m21 / k;
  return {u.real(), v.real()};
}

ScatteringResult amplitudes(const TransferMatrix& m, double k, double x1, double x2) {
  if (!(k > 0.0)) throw std::invalid_argument("wave number k must be > 0");
  ScatteringResult res;
  res.near_opaque = m.near_opaque();
  if (!res.near_opaque) check_unimodular(m);

  const Complex D = m.m11 + m.m22 - kI * (k * m.m12 - m.m21 / k);
  const Complex u = m.m11 - m.m22;
  const Complex v = k * m.m12 + m.m21 / k;
  res.Rl = (-u - kI * v) / D * std::exp(2.0 * kI * k * x1);
  res.Rr = (u - kI * v) / D * std::exp(-2.0 * kI * k * x2);
  res.Tl = 2.0 / D * std::exp(kI * k * (x1 - x2));
  res.Tr = res.Tl;

  if (res.near_opaque) {
    res.trans = 0.0;
    res.refl = 1.0;
    return res;
  }
  const double uv2 = std::norm(u) + std::norm(v);
  res.trans = 4.0 / (4.0 + uv2);
  res.refl = uv2 / (4.0 + uv2);
  return res;
}

Structure::Structure(const BWParams& params) : model_(params.model), params_(params) {
  params.validate();
}

Structure::Structure(Model model, const BWGeometry& raw) : model_(model), raw_(raw) {
  if (!(raw.l > 0.0) || !(raw.r > 0.0)) throw std::invalid_argument("raw widths l, r must be > 0");
  if (!std::isfinite(raw.h) || !std::isfinite(raw.d))
    throw std::invalid_argument("raw heights h, d must be finite");
}

BWGeometry Structure::geometry_at(double alpha) const {
  return params_ ? geometry(params_->with_alpha(alpha)) : raw_;
}

SegmentChain Structure::chain_at(double alpha) const {
  return realize(model_, alpha, geometry_at(alpha));
}

ScatteringResult scatter(const Structure& s, double alpha, double k) {
  if (!(k > 0.0)) throw std::invalid_argument("wave number k must be > 0");
  const SegmentChain chain = s.chain_at(alpha);
  return amplitudes(chain_matrix(chain, k * k), k, chain.x_left(), chain.x_right());
}

ScatteringResult scatter(const BWParams& params, double k) { return scatter(Structure(params), params.alpha, k); }

double transmissivity(const BWParams& params, double k) { return scatter(params, k).trans; }

double transmissivity(const Structure& s, double alpha, double k) { return scatter(s, alpha, k).trans; }

std::vector<double> Axis::points() const {
  if (steps < 2) throw std::invalid_argument("axis needs steps >= 2");
  if (!(min <= max)) throw std::invalid_argument("axis needs min <= max");
  std::vector<double> pts(static_cast<std::size_t>(steps));
  const double span = max - min;
  for (int i = 0; i < steps; ++i) pts[i] = min + span * i / (steps - 1);
  pts.back() = max;
  return pts;
}

std::vector<ScanRow> scan_alpha(const Structure& s, double k, double alpha_min, double alpha_max,
                                int steps) {
  if (!(k > 0.0)) throw std::invalid_argument("wave number k must be > 0");
  const auto alphas = Axis{alpha_min, alpha_max, steps}.points();
  std::vector<ScanRow> rows(alphas.size());
  detail::parallel_for(alphas.size(), [&](std::size_t i) {
    rows[i] = {alphas[i], transmissivity(s, alphas[i], k)};
  });
  return rows;
}

TransmissionGrid grid(const Structure& s, const Axis& alpha, const Axis& k) {
  TransmissionGrid g;
  g.alphas = alpha.points();
  g.ks = k.points();
  for (double kv : g.ks)
    if (!(kv > 0.0)) throw std::invalid_argument("all grid wave numbers must be > 0");
  g.values.resize(g.alphas.size() * g.ks.size());
  const std::size_t nk = g.ks.size();
  detail::parallel_for(g.values.size(), [&](std::size_t idx) {
    g.values[idx] = transmissivity(s, g.alphas[idx / nk], g.ks[idx % nk]);
  });
  return g;
}

double subbarrier_bound(double alpha, double c1, double c2, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be > 0");
  if (alpha > 0.0) return std::sqrt(2.0 * alpha / (c1 * (c1 + c2))) / eps;
  if (alpha < 0.0) return std::sqrt(2.0 * -alpha / (c2 * (c1 + c2))) / eps;
  return std::numeric_limits<double>::infinity();
}

void write_csv(std::ostream& os, const TransmissionGrid& g) {
  os << "alpha,k,T,log10T\n";
  for (std::size_t i = 0; i < g.alphas.size(); ++i) {
    for (std::size_t j = 0; j < g.ks.size(); ++j) {
      const double t = g.at(i, j);
      os << csv_number(g.alphas[i]) << ',' << csv_number(g.ks[j]) << ',' << csv_number(t) << ','
         << csv_number(std::log10(t)) << '\n';
    }
  }
}

namespace {

std::string json_array(const std::vector<double>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += json_number(xs[i]);
  }
  return out + "]";
}

}  // namespace

std::string to_json(const TransmissionGrid& g) {
  std::string values = "[";
  std::string logs = "[";
  const std::size_t nk = g.ks.size();
  for (std::size_t i = 0; i < g.alphas.size(); ++i) {
    std::vector<double> row(g.values.begin() + i * nk, g.values.begin() + (i + 1) * nk);
    std::vector<double> lrow(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) lrow[j] = std::log10(row[j]);
    if (i) {
      values += ", ";
      logs += ", ";
    }
    values += json_array(row);
    logs += json_array(lrow);
  }
  return "{\"alphas\": " + json_array(g.alphas) + ", \"ks\": " + json_array(g.ks) +
         ", \"values\": " + values + "], \"log10_values\": " + logs + "]}\n";
}

}  // namespace bwt
