#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bwt {

/// Which barrier-well arrangement: Plus puts the two barrier-well units in
/// series (barrier, well, barrier, well); Minus mirrors the second unit so the
/// potential is symmetric (barrier, well, well, barrier).
enum class Model { Plus, Minus };

std::string_view to_string(Model model);
Model parse_model(std::string_view name);

/// One constant-potential slab.
struct Segment {
  double width = 0.0;
  double value = 0.0;

  friend bool operator==(const Segment&, const Segment&) = default;
};

/// Contiguous run of slabs starting at x_left. Zero-valued slabs are kept.
class SegmentChain {
 public:
  SegmentChain(std::vector<Segment> segments, double x_left);

  std::span<const Segment> segments() const { return segments_; }
  double x_left() const { return x_left_; }
  double x_right() const { return x_left_ + total_width(); }
  double total_width() const;

  /// Mirror image about the chain centre (same interval, reversed order).
  SegmentChain reversed() const;
  SegmentChain translated(double dx) const;

  friend bool operator==(const SegmentChain&, const SegmentChain&) = default;

 private:
  std::vector<Segment> segments_;
  double x_left_;
};

/// b placed immediately to the right of a.
SegmentChain concat(const SegmentChain& a, const SegmentChain& b);

std::string to_json(const SegmentChain& chain);
SegmentChain chain_from_json(std::string_view text);

struct SigmaSplit {
  double plus = 1.0;   // multiplies the barrier height h
  double minus = 1.0;  // multiplies the well depth d
};

/// The well parameter only ever scales the wells: (1, sigma) for alpha > 0,
/// (sigma, 1) for alpha < 0 and (1, 1) at alpha = 0.
SigmaSplit sigma_split(double alpha, double sigma);

/// Model-family parameters. Defaults: b = 3, sigma = 1, eps = 0.1.
struct BWParams {
  Model model = Model::Plus;
  double alpha = 0.0;
  double eps = 0.1;
  double c1 = 3.0;
  double c2 = 1.0;
  double sigma = 1.0;

  double b() const { return c1 / c2; }
  BWParams with_alpha(double a) const;
  BWParams with_eps(double e) const;
  /// Throws std::invalid_argument unless eps, c1, c2 > 0 and sigma >= 0.
  void validate() const;
};

/// Unit-strength geometry: barrier height h and width l, well depth d and
/// width r. The realized slab values are alpha*h and -alpha*d.
struct BWGeometry {
  double h = 0.0;
  double l = 0.0;
  double d = 0.0;
  double r = 0.0;
};

/// h = 2 s+ / (c1 (c1 + c2)) / eps^2, l = c1 eps,
/// d = 2 s- / (c2 (c1 + c2)) / eps^2, r = c2 eps, with (s+, s-) from
/// sigma_split(alpha, sigma).
BWGeometry geometry(const BWParams& params);

SegmentChain realize(Model model, double alpha, const BWGeometry& g);
SegmentChain realize(const BWParams& params);

}  // namespace bwt
