#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "bwt/cli.hpp"
#include "bwt/transfer.hpp"

using namespace bwt;
using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "bwtunnel");
  std::ostringstream out, err;
  const int code = cli::main_entry(args, out, err);
  return {code, out.str(), err.str()};
}

cli::RunConfig parse(std::vector<std::string> args) {
  args.insert(args.begin(), "bwtunnel");
  std::ostringstream help;
  auto cfg = cli::parse_args(args, help);
  REQUIRE(cfg.has_value());
  return *cfg;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << body;
  return path;
}

}  // namespace

TEST_CASE("defaults and flag parsing") {
  const auto cfg = parse({"scan-alpha", "--model", "plus", "--k", "1", "--eps", "0.1", "--b", "3", "--sigma", "1",
                          "--alpha-min", "-40", "--alpha-max", "40", "--steps", "4000"});
  CHECK(cfg.subcommand == cli::Subcommand::ScanAlpha);
  CHECK(cfg.model == Model::Plus);
  CHECK(cfg.steps == 4000);
  CHECK(cfg.c1 == 3.0);
  CHECK(cfg.c2 == 1.0);
  CHECK(cfg.format == cli::OutputFormat::CSV);

  const auto dry = parse({"grid", "--model", "minus", "--sigma", "0"});
  CHECK(dry.sigma == 0.0);
  CHECK(dry.model == Model::Minus);

  const auto pair = parse({"matrix", "--c1", "2", "--c2", "0.5"});
  CHECK(pair.c1 == 2.0);
  CHECK(pair.c2 == 0.5);
  CHECK(pair.format == cli::OutputFormat::JSON);

  const auto raw = parse({"matrix", "--raw", "10,0.2,5,0.1"});
  REQUIRE(raw.raw.has_value());
  CHECK(raw.raw->d == 5.0);

  const auto conv = parse({"converge", "--eps-list", "0.3,0.1"});
  CHECK(conv.eps_list == std::vector<double>{0.3, 0.1});
}

TEST_CASE("usage errors exit with status 2 and name the flag") {
  const std::vector<std::pair<std::vector<std::string>, std::string>> cases{
      {{"scan-alpha", "--steps", "1"}, "--steps"},
      {{"grid", "--k-steps", "1"}, "--k-steps"},
      {{"grid", "--k-min", "0"}, "--k-min"},
      {{"scan-alpha", "--b", "3", "--c1", "3", "--c2", "1"}, "--b"},
      {{"scan-alpha", "--c1", "3"}, "--c1"},
      {{"scan-alpha", "--eps", "0"}, "--eps"},
      {{"scan-alpha", "--sigma", "-1"}, "--sigma"},
      {{"scan-alpha", "--model", "delta"}, "--model"},
      {{"resonances", "--format", "csv"}, "--format"},
      {{"classify", "--alpha", "50"}, "--alpha"},
      {{"classify", "--sigma", "0"}, "--sigma"},
      {{"converge", "--eps-list", "0.1,0.2"}, "--eps-list"},
      {{"converge", "--eps-list", "0.1,x"}, "--eps-list"},
      {{"matrix", "--raw", "1,2,3"}, "--raw"},
      {{"matrix", "--k", "-1"}, "--k"},
      {{"resonances", "--alpha-min", "5", "--alpha-max", "-5"}, "--alpha-min"},
      {{"resonances", "--tol", "0"}, "--tol"},
  };
  for (const auto& [args, flag] : cases) {
    CAPTURE(args.front());
    CAPTURE(flag);
    const auto r = run_cli(args);
    CHECK(r.code == 2);
    CHECK(r.out.empty());
    CHECK(r.err.find(flag) != std::string::npos);
  }
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"frobnicate"}).code == 2);
}

TEST_CASE("help for every subcommand lists defaults and units") {
  for (const std::string sub : {"scan-alpha", "grid", "resonances", "converge", "classify", "matrix"}) {
    CAPTURE(sub);
    const auto r = run_cli({sub, "--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("--model") != std::string::npos);
    CHECK(r.out.find("[plus]") != std::string::npos);
    CHECK(r.out.find("dimensionless") != std::string::npos);
  }
  CHECK(run_cli({"scan-alpha", "--help"}).out.find("E = k^2") != std::string::npos);
  CHECK(run_cli({"grid", "--help"}).out.find("length") != std::string::npos);
}

TEST_CASE("resonances JSON lists both sets") {
  const auto r = run_cli({"resonances", "--model", "plus", "--b", "3", "--sigma", "1", "--alpha-min", "-40",
                          "--alpha-max", "40"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  REQUIRE(j.is_array());
  std::vector<double> plus, prime;
  for (const auto& e : j) {
    (e.at("set") == "SigmaPlus" ? plus : prime).push_back(e.at("alpha").get<double>());
    CHECK(e.at("theta").is_null() == (e.at("set") == "SigmaPlus"));
    CHECK(e.contains("n"));
    CHECK(std::abs(e.at("residual").get<double>()) <= 1e-9);
  }
  CHECK(plus.size() == 5);
  CHECK(prime.size() == 3);
  CHECK(prime[2] == doctest::Approx(26.87).epsilon(1e-3));
}

TEST_CASE("matrix at alpha = 0 is free propagation") {
  const auto r = run_cli({"matrix", "--model", "minus", "--alpha", "0", "--k", "1", "--eps", "0.1", "--b", "3",
                          "--sigma", "1"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j.at("det_diff").get<double>() < 1e-12);
  CHECK(j.at("closed_vs_product_max_rel_diff").get<double>() < 1e-12);
  CHECK(j.at("T").get<double>() == doctest::Approx(1.0));
  const double width = 0.8;
  CHECK(j.at("product").at("m11").at("re").get<double>() == doctest::Approx(std::cos(width)));
  CHECK(j.at("product").at("m12").at("re").get<double>() == doctest::Approx(std::sin(width)));
  CHECK(j.at("near_opaque") == false);
}

TEST_CASE("converge CSV") {
  const auto r = run_cli({"converge", "--model", "plus", "--alpha", "2.28", "--k", "1", "--b", "3", "--sigma", "1",
                          "--eps-list", "0.2,0.1,0.05,0.02"});
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 5);
  CHECK(ls[0] == "eps,alpha_peak,T_peak,alpha_drift");
  double last = 1e300;
  for (std::size_t i = 1; i < ls.size(); ++i) {
    const double drift = std::stod(ls[i].substr(ls[i].rfind(',') + 1));
    CHECK(drift < last);
    last = drift;
  }
}

TEST_CASE("classify JSON") {
  const auto r = run_cli({"classify", "--model", "plus", "--alpha", "26.8672175539", "--b", "3", "--sigma", "1"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j.at("class") == "PartialTransmission");
  CHECK(j.at("set") == "SigmaPrime");
  CHECK(j.at("T_limit").get<double>() < 1.0);

  const auto opaque = json::parse(run_cli({"classify", "--alpha", "10"}).out);
  CHECK(opaque.at("class") == "Opaque");
  CHECK(opaque.at("theta").is_null());

  const auto loose = json::parse(run_cli({"classify", "--model", "minus", "--alpha", "26.87", "--match-tol", "0.01"}).out);
  CHECK(loose.at("class") == "TotalTransmission");
}

TEST_CASE("scan-alpha and grid outputs") {
  const auto scan = run_cli({"scan-alpha", "--steps", "11", "--alpha-min", "-1", "--alpha-max", "1"});
  REQUIRE(scan.code == 0);
  const auto ls = lines(scan.out);
  CHECK(ls.size() == 12);
  CHECK(ls[0] == "alpha,k,T,log10T");
  CHECK(ls[6].rfind("0,1,1,", 0) == 0);

  const auto g = run_cli({"grid", "--model", "minus", "--sigma", "0", "--steps", "5", "--k-steps", "3", "--format",
                          "json"});
  REQUIRE(g.code == 0);
  const auto j = json::parse(g.out);
  CHECK(j.at("alphas").size() == 5);
  CHECK(j.at("ks").size() == 3);
  CHECK(j.at("values").size() == 5);
  CHECK(j.at("values")[0].size() == 3);
}

TEST_CASE("outputs are byte-identical across runs") {
  for (const std::vector<std::string> args :
       {std::vector<std::string>{"grid", "--steps", "40", "--k-steps", "30"}, {"resonances", "--model", "minus"},
        {"converge", "--alpha", "26.87"}, {"matrix", "--alpha", "-3"}}) {
    CHECK(run_cli(args).out == run_cli(args).out);
  }
}

TEST_CASE("config file supplies defaults that flags override") {
  const auto path = temp_file("bwtunnel_cfg.json", R"({"model": "minus", "steps": 21, "eps": 0.05, "sigma": 0.5})");
  const auto cfg = parse({"scan-alpha", "--config", path.string(), "--steps", "31"});
  CHECK(cfg.model == Model::Minus);
  CHECK(cfg.steps == 31);
  CHECK(cfg.eps == 0.05);
  CHECK(cfg.sigma == 0.5);

  const auto list = temp_file("bwtunnel_cfg2.json", R"({"eps-list": [0.2, 0.1]})");
  CHECK(parse({"converge", "--config", list.string()}).eps_list == std::vector<double>{0.2, 0.1});

  const auto broken = temp_file("bwtunnel_cfg3.json", "{");
  CHECK(run_cli({"scan-alpha", "--config", broken.string()}).code == 2);
  CHECK(run_cli({"scan-alpha", "--config", "/nonexistent/x.json"}).code == 2);
}

TEST_CASE("output file") {
  const auto path = std::filesystem::temp_directory_path() / "bwtunnel_out.json";
  std::filesystem::remove(path);
  const auto r = run_cli({"matrix", "--out", path.string()});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  CHECK(json::parse(in).at("T").get<double>() <= 1.0);
}

TEST_CASE("JSON output round-trips through the emitting types") {
  const auto j = json::parse(run_cli({"matrix", "--alpha", "2.28", "--eps", "0.05"}).out);
  const auto cfg = parse({"matrix", "--alpha", "2.28", "--eps", "0.05"});
  const auto m = chain_matrix(realize(cfg.params().with_alpha(2.28)), 1.0);
  CHECK(j.at("product").at("m21").at("re").get<double>() == m.m21.real());
  CHECK(j.at("alpha").get<double>() == 2.28);
}
