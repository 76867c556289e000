#include "bwt/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "bwt/format.hpp"

namespace bwt {

std::string_view to_string(Model model) { return model == Model::Plus ? "plus" : "minus"; }

Model parse_model(std::string_view name) {
  if (name == "plus") return Model::Plus;
  if (name == "minus") return Model::Minus;
  throw std::invalid_argument("unknown model '" + std::string(name) + "' (expected plus|minus)");
}

SegmentChain::SegmentChain(std::vector<Segment> segments, double x_left)
    : segments_(std::move(segments)), x_left_(x_left) {
  if (segments_.empty()) throw std::invalid_argument("segment chain is empty");
  if (!std::isfinite(x_left_)) throw std::invalid_argument("chain x_left must be finite");
  for (const auto& s : segments_) {
    if (!(s.width > 0.0) || !std::isfinite(s.width))
      throw std::invalid_argument("segment width must be positive and finite");
    if (!std::isfinite(s.value)) throw std::invalid_argument("segment value must be finite");
  }
}

double SegmentChain::total_width() const {
  return std::accumulate(segments_.begin(), segments_.end(), 0.0,
                         [](double acc, const Segment& s) { return acc + s.width; });
}

SegmentChain SegmentChain::reversed() const {
  std::vector<Segment> rev(segments_.rbegin(), segments_.rend());
  return SegmentChain(std::move(rev), x_left_);
}

SegmentChain SegmentChain::translated(double dx) const { return SegmentChain(segments_, x_left_ + dx); }

SegmentChain concat(const SegmentChain& a, const SegmentChain& b) {
  std::vector<Segment> all(a.segments().begin(), a.segments().end());
  all.insert(all.end(), b.segments().begin(), b.segments().end());
  return SegmentChain(std::move(all), a.x_left());
}

std::string to_json(const SegmentChain& chain) {
  std::string out = "{\"x_left\": " + json_number(chain.x_left()) + ", \"segments\": [";
  bool first = true;
  for (const auto& s : chain.segments()) {
    if (!first) out += ", ";
    first = false;
    out += "{\"width\": " + json_number(s.width) + ", \"value\": " + json_number(s.value) + "}";
  }
  out += "]}";
  return out;
}

SegmentChain chain_from_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  std::vector<Segment> segs;
  for (const auto& s : j.at("segments")) segs.push_back({s.at("width").get<double>(), s.at("value").get<double>()});
  return SegmentChain(std::move(segs), j.at("x_left").get<double>());
}

SigmaSplit sigma_split(double alpha, double sigma) {
  if (alpha > 0.0) return {1.0, sigma};
  if (alpha < 0.0) return {sigma, 1.0};
  return {1.0, 1.0};
}

BWParams BWParams::with_alpha(double a) const {
  BWParams p = *this;
  p.alpha = a;
  return p;
}

BWParams BWParams::with_eps(double e) const {
  BWParams p = *this;
  p.eps = e;
  return p;
}

void BWParams::validate() const {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be > 0");
  if (!(c1 > 0.0)) throw std::invalid_argument("c1 must be > 0");
  if (!(c2 > 0.0)) throw std::invalid_argument("c2 must be > 0");
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be >= 0");
  if (!std::isfinite(alpha)) throw std::invalid_argument("alpha must be finite");
}

BWGeometry geometry(const BWParams& params) {
  params.validate();
  const auto [sp, sm] = sigma_split(params.alpha, params.sigma);
  const double c1 = params.c1;
  const double c2 = params.c2;
  const double inv_eps2 = 1.0 / (params.eps * params.eps);
  return {2.0 * sp / (c1 * (c1 + c2)) * inv_eps2, c1 * params.eps,
          2.0 * sm / (c2 * (c1 + c2)) * inv_eps2, c2 * params.eps};
}

SegmentChain realize(Model model, double alpha, const BWGeometry& g) {
  // +0.0 folds -0.0 into 0.0 so alpha = 0 and sigma = 0 give clean zeros.
  const Segment barrier{g.l, alpha * g.h + 0.0};
  const Segment well{g.r, -alpha * g.d + 0.0};
  std::vector<Segment> segs = model == Model::Plus
                                  ? std::vector<Segment>{barrier, well, barrier, well}
                                  : std::vector<Segment>{barrier, well, well, barrier};
  return SegmentChain(std::move(segs), -(g.l + g.r));
}

SegmentChain realize(const BWParams& params) {
  return realize(params.model, params.alpha, geometry(params));
}

}  // namespace bwt
