#include "bwt/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include "bwt/errors.hpp"
#include "bwt/zerolimit.hpp"

namespace bwt {

std::string_view to_string(SetLabel label) {
  switch (label) {
    case SetLabel::SigmaPlus: return "SigmaPlus";
    case SetLabel::SigmaMinus: return "SigmaMinus";
    case SetLabel::SigmaPrime: return "SigmaPrime";
  }
  return "?";
}

namespace {

constexpr double kPoleTol = 1e-12;
constexpr Complex kI{0.0, 1.0};

// Distance from t to the nearest pi/2 + n pi.
double distance_to_half_pi_lattice(double t) {
  return std::abs(std::remainder(t - std::numbers::pi / 2.0, std::numbers::pi));
}

Complex checked_tan(Complex z) {
  if (z.imag() == 0.0 && distance_to_half_pi_lattice(z.real()) < kPoleTol)
    throw PoleError("tan argument " + std::to_string(z.real()) + " is at a pole");
  return std::tan(z);
}

// tanh(z) = -i tan(i z): poles sit on the imaginary axis.
Complex checked_tanh(Complex z) {
  if (z.real() == 0.0 && distance_to_half_pi_lattice(z.imag()) < kPoleTol)
    throw PoleError("tanh argument i*" + std::to_string(z.imag()) + " is at a pole");
  return std::tanh(z);
}

double real_part(Complex z, const char* what) {
  if (std::abs(z.imag()) > 1e-9 * (1.0 + std::abs(z.real())))
    throw std::logic_error(std::string(what) + ": continued residual is not real (branch error)");
  return z.real();
}

// Arguments of the limiting equations. sx, sy are the unit-sigma square roots,
// so x = sx sqrt(s+) and y = sy sqrt(s-).
struct LimitTerms {
  double sp;
  double sm;
  Complex sx;
  Complex sy;
  Complex th;  // tanh(x)
  Complex tn;  // tan(y)
};

LimitTerms limit_terms(double alpha, double b, double sigma) {
  if (!(b > 0.0)) throw std::invalid_argument("b must be > 0");
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be >= 0");
  const auto [sp, sm] = sigma_split(alpha, sigma);
  LimitTerms t{sp, sm, std::sqrt(Complex(2.0 * alpha / (1.0 + 1.0 / b), 0.0)),
               std::sqrt(Complex(2.0 * alpha / (1.0 + b), 0.0)), {}, {}};
  t.th = checked_tanh(t.sx * std::sqrt(sp));
  t.tn = checked_tan(t.sy * std::sqrt(sm));
  return t;
}

std::optional<double> try_eval(const Residual& f, double x) {
  try {
    const double v = f(x);
    if (std::isnan(v)) return std::nullopt;
    return v;
  } catch (const PoleError&) {
    return std::nullopt;
  }
}

}  // namespace

double f_plus(double alpha, double b, double sigma) {
  const auto t = limit_terms(alpha, b, sigma);
  Complex lhs;
  if (t.sm == 0.0) {
    // c -> 0 and tan(y)/c -> sqrt(s+/b) sy.
    lhs = -t.th * std::sqrt(t.sp / b) * t.sy;
  } else if (t.sp == 0.0) {
    // c -> inf and c tanh(x) -> sqrt(b s-) sx.
    lhs = std::sqrt(b * t.sm) * t.sx * t.tn;
  } else {
    const double c = std::sqrt(b * t.sm / t.sp);
    lhs = (c - 1.0 / c) * t.th * t.tn;
  }
  return real_part(lhs - 2.0, "f_plus");
}

double f_minus(double alpha, double b, double sigma) {
  const auto t = limit_terms(alpha, b, sigma);
  if (t.sm == 0.0) return real_part(t.th * t.sy + std::sqrt(b / t.sp), "f_minus");  // f / sqrt(s-)
  if (t.sp == 0.0) return std::sqrt(b * t.sm);                                       // f * sqrt(s+)
  return real_part(t.th * t.tn + std::sqrt(b * t.sm / t.sp), "f_minus");
}

double f_prime(double alpha, double b, double sigma) {
  const auto t = limit_terms(alpha, b, sigma);
  Complex z;
  if (t.sm == 0.0) {
    z = t.th;
  } else if (t.sp == 0.0) {
    z = -std::sqrt(b * t.sm) * t.tn;  // f * sqrt(s+)
  } else {
    z = t.th - std::sqrt(b * t.sm / t.sp) * t.tn;
  }
  // Odd in the square roots: purely imaginary for alpha < 0.
  if (alpha < 0.0) z *= -kI;
  return real_part(z, "f_prime");
}

FiniteEpsResiduals finite_eps_residuals(const BWParams& params, double E) {
  const BWGeometry g = geometry(params);
  const auto [p, q, k] = wave_numbers(params.alpha, g, E);
  const Complex P = p * g.l;
  const Complex Q = q * g.r;
  const Complex sP = std::sin(P), cP = std::cos(P), sQ = std::sin(Q), cQ = std::cos(Q);
  return {2.0 * cP * cQ - (p / q + q / p) * sP * sQ, p * sP * cQ + q * cP * sQ,
          p * sP * sQ - q * cP * cQ};
}

std::vector<double> find_roots(const Residual& f, Window window, int grid_steps, double tol) {
  if (!(window.lo < window.hi)) throw std::invalid_argument("root window needs lo < hi");
  if (grid_steps < 100) throw std::invalid_argument("root scan needs grid_steps >= 100");
  if (!(tol > 0.0)) throw std::invalid_argument("root tolerance must be > 0");

  const double cell = (window.hi - window.lo) / grid_steps;
  std::vector<double> xs(static_cast<std::size_t>(grid_steps) + 1);
  std::vector<std::optional<double>> fs(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i] = i + 1 == xs.size() ? window.hi : window.lo + cell * static_cast<double>(i);
    fs[i] = try_eval(f, xs[i]);
  }

  std::vector<double> roots;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (fs[i] && *fs[i] == 0.0) roots.push_back(xs[i]);

  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (!fs[i] || !fs[i + 1]) continue;
    const double fa = *fs[i];
    const double fb = *fs[i + 1];
    if (!(std::signbit(fa) != std::signbit(fb)) || fa == 0.0 || fb == 0.0) continue;
    if (!std::isfinite(fa) && !std::isfinite(fb)) continue;

    // A pole crossing keeps |f| large across the whole cell.
    double min_abs = std::min(std::abs(fa), std::abs(fb));
    bool pole = false;
    for (int j = 1; j <= 10 && !pole; ++j) {
      const auto v = try_eval(f, xs[i] + (xs[i + 1] - xs[i]) * j / 11.0);
      if (!v) pole = true;
      else min_abs = std::min(min_abs, std::abs(*v));
    }
    if (pole || min_abs > 1.0) continue;

    double lo = xs[i], hi = xs[i + 1], flo = fa, fhi = fb;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const auto fm = try_eval(f, mid);
      if (!fm) {
        pole = true;
        break;
      }
      if (*fm == 0.0) {
        lo = hi = mid;
        flo = fhi = 0.0;
        break;
      }
      if (std::signbit(*fm) == std::signbit(flo)) {
        lo = mid;
        flo = *fm;
      } else {
        hi = mid;
        fhi = *fm;
      }
    }
    if (pole || hi - lo >= tol) continue;
    const bool take_lo = std::abs(flo) <= std::abs(fhi);
    const double root = take_lo ? lo : hi;
    const double residual = take_lo ? std::abs(flo) : std::abs(fhi);
    // Tan poles give sign changes whose |f| grows under refinement.
    if (!(residual <= std::min(std::abs(fa), std::abs(fb)))) continue;
    roots.push_back(root);
  }

  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [tol](double a, double b) { return std::abs(a - b) <= 2.0 * tol; }),
              roots.end());
  for (std::size_t i = 1; i < roots.size(); ++i)
    if (roots[i] - roots[i - 1] < cell)
      throw WindowTooCoarseError("roots " + std::to_string(roots[i - 1]) + " and " +
                                 std::to_string(roots[i]) + " share a grid cell; increase grid_steps");
  return roots;
}

namespace {

// n = -1, -2, ... moving left from 0 and 1, 2, ... moving right.
void assign_indices(std::vector<ResonanceRoot>& roots) {
  std::sort(roots.begin(), roots.end(),
            [](const ResonanceRoot& a, const ResonanceRoot& b) { return a.alpha < b.alpha; });
  const auto first_nonneg = std::find_if(roots.begin(), roots.end(),
                                         [](const ResonanceRoot& r) { return r.alpha >= 0.0; });
  int n = -1;
  for (auto it = std::make_reverse_iterator(first_nonneg); it != roots.rend(); ++it) it->index = n--;
  n = 1;
  for (auto it = first_nonneg; it != roots.end(); ++it) it->index = it->alpha == 0.0 ? 0 : n++;
}

}  // namespace

ResonanceSets resonance_sets(Model model, double b, double sigma, Window window, RootSearch search) {
  if (!(b > 0.0)) throw std::invalid_argument("b must be > 0");
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be >= 0");

  const SetLabel label = model == Model::Plus ? SetLabel::SigmaPlus : SetLabel::SigmaMinus;
  const Residual fm = model == Model::Plus ? Residual([=](double a) { return f_plus(a, b, sigma); })
                                           : Residual([=](double a) { return f_minus(a, b, sigma); });
  const Residual fp = [=](double a) { return f_prime(a, b, sigma); };
  const double zero_tol = 10.0 * search.tol;

  ResonanceSets sets{{{}, window, b, sigma}, {{}, window, b, sigma}};
  for (double a : find_roots(fm, window, search.grid_steps, search.tol)) {
    if (std::abs(a) <= zero_tol) continue;
    sets.model.roots.push_back({a, label, 0, std::nullopt, std::abs(fm(a))});
  }
  // alpha = 0 removes the potential entirely: trivially transparent.
  if (window.lo <= 0.0 && 0.0 <= window.hi)
    sets.model.roots.push_back({0.0, label, 0, std::nullopt, 0.0});

  // f_prime vanishes identically at 0; that point degenerates to theta = 1.
  for (double a : find_roots(fp, window, search.grid_steps, search.tol)) {
    if (std::abs(a) <= zero_tol) continue;
    const auto [sp, sm] = sigma_split(a, sigma);
    sets.prime.roots.push_back({a, SetLabel::SigmaPrime, 0, theta(a, b, sp, sm), std::abs(fp(a))});
  }
  assign_indices(sets.model.roots);
  assign_indices(sets.prime.roots);
  return sets;
}

double db_resonance_residual(double k, double alpha, double eps, double c1, double c2) {
  if (!(k > 0.0)) throw std::invalid_argument("wave number k must be > 0");
  if (!(eps > 0.0) || !(c1 > 0.0) || !(c2 > 0.0))
    throw std::invalid_argument("eps, c1, c2 must be > 0");
  const double sp = sigma_split(alpha, 0.0).plus;
  const double h = 2.0 * sp / (c1 * (c1 + c2)) / (eps * eps);
  const double l = c1 * eps;
  const double r = c2 * eps;
  const Complex p = std::sqrt(Complex(k * k - alpha * h, 0.0));

  const double gap = 2.0 * k * r;
  if (std::abs(std::remainder(gap, std::numbers::pi)) < kPoleTol)
    throw PoleError("cot(2kr) is at a pole");
  const double cot = std::cos(gap) / std::sin(gap);

  // (p/k + k/p) tan(pl) -> k l as p -> 0.
  const Complex barrier = std::abs(p) == 0.0 ? Complex(k * l) : (p / k + k / p) * checked_tan(p * l);
  return real_part(barrier - 2.0 * cot, "db_resonance_residual");
}

namespace {

double uv_norm(const Structure& s, double alpha, double k) {
  const TransferMatrix m = chain_matrix(s.chain_at(alpha), k * k);
  if (m.near_opaque()) return std::numeric_limits<double>::infinity();
  const auto [u, v] = uv(m, k);
  return u * u + v * v;
}

}  // namespace

Peak peak_refine(const Structure& s, double k, double alpha_guess, double radius, int scan_points) {
  if (!(radius > 0.0)) throw std::invalid_argument("peak radius must be > 0");
  if (!(k > 0.0)) throw std::invalid_argument("wave number k must be > 0");
  if (scan_points < 3) throw std::invalid_argument("peak scan needs >= 3 points");

  // Minimizing u^2 + v^2 rather than maximizing T keeps contrast where T
  // saturates at 1.
  const auto xs = Axis{alpha_guess - radius, alpha_guess + radius, scan_points}.points();
  std::size_t best = 0;
  double best_g = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double g = uv_norm(s, xs[i], k);
    if (g < best_g) {
      best_g = g;
      best = i;
    }
  }
  if (best == 0 || best + 1 == xs.size())
    throw NoPeakError("transmission is monotone across [" + std::to_string(xs.front()) + ", " +
                      std::to_string(xs.back()) + "]");

  constexpr double inv_phi = 0.6180339887498949;
  double a = xs[best - 1], b = xs[best + 1];
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double gc = uv_norm(s, c, k), gd = uv_norm(s, d, k);
  for (int it = 0; it < 300 && (b - a) > 1e-15 * (1.0 + std::abs(a)); ++it) {
    if (gc <= gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - inv_phi * (b - a);
      gc = uv_norm(s, c, k);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + inv_phi * (b - a);
      gd = uv_norm(s, d, k);
    }
  }
  double alpha = gc <= gd ? c : d;
  if (std::min(gc, gd) > best_g) alpha = xs[best];
  return {alpha, transmissivity(s, alpha, k)};
}

std::vector<RidgePoint> follow_ridge(const Structure& s, double alpha_start, double k_from,
                                     double k_to, int steps, double radius) {
  std::vector<RidgePoint> ridge;
  double alpha = alpha_start;
  for (double k : Axis{std::min(k_from, k_to), std::max(k_from, k_to), steps}.points()) {
    if (k_from > k_to) k = k_from + k_to - k;
    const Peak peak = peak_refine(s, k, alpha, radius, 601);
    alpha = peak.alpha;
    ridge.push_back({k, peak.alpha, peak.trans});
  }
  return ridge;
}

}  // namespace bwt
