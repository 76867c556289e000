#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bwt/potential.hpp"
#include "bwt/transfer.hpp"

namespace bwt {

/// Amplitudes for incidence from the left (Rl, Tl) and right (Rr, Tr), with
/// probabilities refl + trans = 1.
struct ScatteringResult {
  Complex Rl;
  Complex Rr;
  Complex Tl;
  Complex Tr;
  double refl = 0.0;
  double trans = 1.0;
  /// Entries exceeded kNearOpaqueThreshold; trans is reported as 0.
  bool near_opaque = false;
};

/// Throws std::invalid_argument for k <= 0 or a matrix whose determinant is
/// not 1 within its rounding budget.
ScatteringResult amplitudes(const TransferMatrix& m, double k, double x1, double x2);

/// u = l11 - l22 and v = k l12 + l21 / k; transmissivity is 4 / (4 + u^2 + v^2).
struct UV {
  double u = 0.0;
  double v = 0.0;
};
UV uv(const TransferMatrix& m, double k);

/// A barrier-well structure whose geometry either follows the eps
/// parametrization (and so depends on the sign of alpha through sigma) or is
/// a fixed raw (h, l, d, r) geometry.
class Structure {
 public:
  Structure(const BWParams& params);  // NOLINT: implicit by intent
  Structure(Model model, const BWGeometry& raw);

  Model model() const { return model_; }
  BWGeometry geometry_at(double alpha) const;
  SegmentChain chain_at(double alpha) const;
  const std::optional<BWParams>& params() const { return params_; }

 private:
  Model model_;
  std::optional<BWParams> params_;
  BWGeometry raw_{};
};

ScatteringResult scatter(const Structure& s, double alpha, double k);
ScatteringResult scatter(const BWParams& params, double k);
double transmissivity(const BWParams& params, double k);
double transmissivity(const Structure& s, double alpha, double k);

/// Inclusive uniform axis with `steps` points.
struct Axis {
  double min = 0.0;
  double max = 0.0;
  int steps = 2;

  std::vector<double> points() const;
};

struct ScanRow {
  double alpha = 0.0;
  double trans = 0.0;
};

std::vector<ScanRow> scan_alpha(const Structure& s, double k, double alpha_min, double alpha_max,
                                int steps);

/// values[i * ks.size() + j] = T(alphas[i], ks[j]).
struct TransmissionGrid {
  std::vector<double> alphas;
  std::vector<double> ks;
  std::vector<double> values;

  double at(std::size_t ia, std::size_t ik) const { return values[ia * ks.size() + ik]; }
};

TransmissionGrid grid(const Structure& s, const Axis& alpha, const Axis& k);

/// Upper wave number of the tunnelling region for strength alpha:
/// sqrt(2 alpha / (c1 (c1 + c2))) / eps for alpha > 0, with c2 in place of
/// c1 for alpha < 0. Returns +infinity at alpha = 0.
double subbarrier_bound(double alpha, double c1, double c2, double eps);

/// Header `alpha,k,T,log10T`, alpha-major rows, 12 significant digits.
void write_csv(std::ostream& os, const TransmissionGrid& g);
std::string to_json(const TransmissionGrid& g);

}  // namespace bwt
