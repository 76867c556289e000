#include <doctest.h>

#include <json.hpp>
#include <sstream>
#include <stdexcept>

#include "bwt/resonance.hpp"
#include "bwt/scattering.hpp"
#include "support.hpp"

using namespace bwt;

namespace {

const BWParams kBase{Model::Plus, 0.0, 0.1, 3.0, 1.0, 1.0};

std::vector<double> local_maxima(const std::vector<ScanRow>& rows) {
  std::vector<double> out;
  for (std::size_t i = 1; i + 1 < rows.size(); ++i)
    if (rows[i].trans > rows[i - 1].trans && rows[i].trans >= rows[i + 1].trans) out.push_back(rows[i].alpha);
  return out;
}

double nearest(const std::vector<double>& xs, double x) {
  double best = std::numeric_limits<double>::infinity();
  for (const double v : xs) best = std::min(best, std::abs(v - x));
  return best;
}

}  // namespace

TEST_CASE("amplitudes of the limiting matrices") {
  const auto id = amplitudes(TransferMatrix::identity(), 1.3, -0.2, 0.2);
  CHECK(id.trans == 1.0);
  CHECK(id.refl == 0.0);
  CHECK(std::abs(id.Rl) < 1e-15);
  CHECK(std::abs(id.Rr) < 1e-15);

  const auto flip = amplitudes(TransferMatrix::diagonal(-1.0, -1.0), 0.7, 0.0, 0.0);
  CHECK(flip.trans == 1.0);

  const double theta = 1.7;
  const double u = theta * theta - 1.0 / (theta * theta);
  const auto part = amplitudes(TransferMatrix::diagonal(theta * theta, 1.0 / (theta * theta)), 2.0, 0.0, 0.0);
  CHECK(part.trans == doctest::Approx(4.0 / (4.0 + u * u)).epsilon(1e-15));
  CHECK(part.trans < 1.0);
  CHECK(part.refl + part.trans == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("amplitudes validate their input") {
  CHECK_THROWS_AS(amplitudes(TransferMatrix::identity(), 0.0, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(amplitudes(TransferMatrix::diagonal(2.0, 2.0), 1.0, 0.0, 0.0), std::invalid_argument);
  const auto opaque = amplitudes(TransferMatrix{1.0, 0.0, 1e13, 1.0}, 1.0, 0.0, 0.0);
  CHECK(opaque.near_opaque);
  CHECK(opaque.trans == 0.0);
  CHECK(opaque.refl == 1.0);
}

TEST_CASE("transmissivity spot values") {
  CHECK(transmissivity(kBase.with_alpha(0.0), 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(peak_refine(Structure(kBase), 1.0, 2.28, 0.5).trans >= 0.99);
  CHECK(transmissivity(kBase.with_alpha(10.0).with_eps(0.02), 1.0) < 1e-4);
}

TEST_CASE("scattering properties over random samples") {
  const auto samples = test::bounded_samples(99, 1000, 1e8);
  for (const auto& s : samples) {
    CAPTURE(s.params.alpha);
    CAPTURE(s.params.eps);
    CAPTURE(s.k);
    const auto r = scatter(s.params, s.k);
    CHECK(std::abs(r.refl + r.trans - 1.0) < 1e-12);
    const double tl = std::norm(r.Tl), tr = std::norm(r.Tr);
    CHECK(std::abs(tl - tr) <= 1e-12 * std::max(1.0, tl));
    if (s.params.model == Model::Minus) CHECK(std::abs(std::abs(r.Rl) - std::abs(r.Rr)) < 1e-9);

    const auto chain = realize(s.params);
    const auto m = chain_matrix(chain.translated(0.37), s.k * s.k);
    const auto moved = amplitudes(m, s.k, chain.x_left() + 0.37, chain.x_right() + 0.37);
    CHECK(moved.trans == doctest::Approx(r.trans).epsilon(1e-12));
    CHECK(std::abs(moved.Tl) == doctest::Approx(std::abs(r.Tl)).epsilon(1e-9));
  }
}

TEST_CASE("above the subbarrier bound the barrier wave number is real") {
  test::Sampler sampler(3);
  for (int i = 0; i < 300; ++i) {
    auto p = sampler.next().params;
    p.alpha = std::abs(p.alpha) + 0.01;
    const double k = 1.001 * subbarrier_bound(p.alpha, p.c1, p.c2, p.eps);
    const auto g = geometry(p);
    CHECK(k * k - p.alpha * g.h > 0.0);
    CHECK(wave_numbers(p.alpha, g, k * k).p.imag() == 0.0);
  }
}

TEST_CASE("subbarrier bound") {
  CHECK(subbarrier_bound(2.0, 1.0, 1.0, 1.0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(subbarrier_bound(-2.0, 1.0, 1.0, 0.5) == doctest::Approx(2.0 * std::sqrt(2.0)));
  CHECK(subbarrier_bound(35.09, 3.0, 1.0, 0.2) == doctest::Approx(12.09).epsilon(1e-3));
  CHECK(std::isinf(subbarrier_bound(0.0, 3.0, 1.0, 0.2)));
}

TEST_CASE("alpha scan at k = 1 shows five total and three partial peaks") {
  const Structure s(kBase);
  const auto maxima = local_maxima(scan_alpha(s, 1.0, -40.0, 40.0, 16001));
  CHECK(maxima.size() == 8);
  const auto sets = resonance_sets(Model::Plus, 3.0, 1.0);
  int total = 0;
  for (const double a : maxima) {
    const bool high = peak_refine(s, 1.0, a, 0.01).trans > 0.1;
    total += high;
    const auto& near_set = high ? sets.model : sets.prime;
    std::vector<double> roots;
    for (const auto& r : near_set.roots) roots.push_back(r.alpha);
    CAPTURE(a);
    CHECK(nearest(roots, a) < 0.5);
  }
  CHECK(total == 5);
}

TEST_CASE("Minus scan has a maximum near every resonance") {
  const auto sets = resonance_sets(Model::Minus, 3.0, 1.0);
  const Structure minus(BWParams{Model::Minus, 0.0, 0.1, 3.0, 1.0, 1.0});
  const auto minus_maxima = local_maxima(scan_alpha(minus, 1.0, -40.0, 40.0, 16001));
  for (const auto* set : {&sets.model, &sets.prime})
    for (const auto& r : set->roots) {
      CAPTURE(r.alpha);
      CHECK(nearest(minus_maxima, r.alpha) < 0.5);
    }
}

TEST_CASE("degenerate alpha range") {
  const auto rows = scan_alpha(Structure(kBase), 1.0, 0.0, 0.0, 2);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].alpha == rows[1].alpha);
  CHECK(rows[0].trans == rows[1].trans);
  CHECK_THROWS_AS(scan_alpha(Structure(kBase), 1.0, 0.0, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(scan_alpha(Structure(kBase), 0.0, 0.0, 1.0, 3), std::invalid_argument);
}

TEST_CASE("low-k ridges sit on the resonance positions") {
  const BWParams coarse{Model::Plus, 0.0, 0.2, 3.0, 1.0, 1.0};
  const auto g = grid(Structure(coarse), {-40.0, 40.0, 8001}, {0.01, 10.0, 50});
  std::vector<ScanRow> row;
  for (std::size_t i = 0; i < g.alphas.size(); ++i) row.push_back({g.alphas[i], g.at(i, 0)});
  const auto sets = resonance_sets(Model::Plus, 3.0, 1.0);
  std::vector<double> crests;
  for (const double a : local_maxima(row)) {
    const auto peak = peak_refine(Structure(coarse), 0.01, a, 0.02);
    CHECK(std::abs(peak.alpha - a) <= 0.01);
    if (peak.trans > 0.5) crests.push_back(peak.alpha);
  }
  REQUIRE(crests.size() == 5);
  for (std::size_t i = 0; i < crests.size(); ++i) CHECK(crests[i] == doctest::Approx(sets.model.roots[i].alpha).epsilon(0.2));
}

TEST_CASE("grid is the pointwise transmissivity in alpha-major order") {
  const Structure s(BWParams{Model::Minus, 0.0, 0.15, 2.0, 1.0, 0.5});
  const auto g = grid(s, {-5.0, 5.0, 7}, {0.5, 3.0, 4});
  REQUIRE(g.values.size() == 28);
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(g.at(i, j) == transmissivity(s, g.alphas[i], g.ks[j]));
  CHECK(grid(s, {-5.0, 5.0, 7}, {0.5, 3.0, 4}).values == g.values);
}

TEST_CASE("raw geometry structures ignore the sign-dependent split") {
  const BWGeometry raw{10.0, 0.2, 5.0, 0.1};
  const Structure s(Model::Plus, raw);
  CHECK(s.geometry_at(-3.0).h == 10.0);
  CHECK(s.geometry_at(3.0).d == 5.0);
  CHECK_THROWS_AS(Structure(Model::Plus, BWGeometry{1.0, 0.0, 1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("CSV and JSON grid output") {
  TransmissionGrid g{{1.0, 2.0}, {0.5}, {0.25, 0.0}};
  std::ostringstream csv;
  write_csv(csv, g);
  CHECK(csv.str() == "alpha,k,T,log10T\n1,0.5,0.25,-0.602059991328\n2,0.5,0,-inf\n");

  const auto j = nlohmann::json::parse(to_json(g));
  CHECK(j.at("alphas").get<std::vector<double>>() == g.alphas);
  CHECK(j.at("values")[0][0].get<double>() == 0.25);
  CHECK(j.at("log10_values")[1][0].get<std::string>() == "-inf");
}
