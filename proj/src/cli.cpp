#include "bwt/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bwt/errors.hpp"
#include "bwt/format.hpp"
#include "bwt/resonance.hpp"
#include "bwt/scattering.hpp"
#include "bwt/zerolimit.hpp"

namespace bwt::cli {

BWParams RunConfig::params() const { return {model, alpha, eps, c1, c2, sigma}; }

namespace {

struct SubcommandInfo {
  Subcommand id;
  const char* name;
  const char* description;
};

constexpr SubcommandInfo kSubcommands[] = {
    {Subcommand::ScanAlpha, "scan-alpha", "Transmissivity T(alpha) at fixed k on a uniform alpha grid"},
    {Subcommand::Grid, "grid", "Transmissivity T(alpha, k) on a uniform 2D grid"},
    {Subcommand::Resonances, "resonances", "Zero-range resonance sets (model set and Sigma') as JSON"},
    {Subcommand::Converge, "converge", "Finite-eps peak position/height versus eps"},
    {Subcommand::Classify, "classify", "Zero-range classification of one strength alpha"},
    {Subcommand::Matrix, "matrix", "Transfer matrix by slab product and closed form, with diagnostics"},
};

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(flag + ": '" + item + "' is not a number");
    }
  }
  return out;
}

std::string config_value(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return format_g(v.get<double>(), 17);
  if (v.is_array()) {
    std::string out;
    for (const auto& e : v) {
      if (!out.empty()) out += ',';
      out += config_value(e);
    }
    return out;
  }
  throw UsageError("--config: unsupported value " + v.dump());
}

bool user_gave(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

// Prepends "--key value" for every config-file key the user did not pass.
std::vector<std::string> merge_config(const std::vector<std::string>& argv) {
  std::string path;
  for (std::size_t i = 1; i < argv.size(); ++i) {
    if (argv[i] == "--config" && i + 1 < argv.size()) path = argv[i + 1];
    else if (argv[i].rfind("--config=", 0) == 0) path = argv[i].substr(9);
  }
  if (path.empty() || argv.size() < 2) return argv;

  std::ifstream in(path);
  if (!in) throw UsageError("--config: cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("--config: invalid JSON in '" + path + "': " + e.what());
  }
  if (!j.is_object()) throw UsageError("--config: top level must be an object");

  std::vector<std::string> merged{argv[0], argv[1]};
  for (const auto& [key, value] : j.items()) {
    const std::string flag = "--" + key;
    if (key == "config" || user_gave(argv, flag)) continue;
    merged.push_back(flag);
    merged.push_back(config_value(value));
  }
  merged.insert(merged.end(), argv.begin() + 2, argv.end());
  return merged;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw UsageError(message);
}

}  // namespace

std::optional<RunConfig> parse_args(const std::vector<std::string>& raw_argv, std::ostream& help) {
  const std::vector<std::string> argv = merge_config(raw_argv);

  RunConfig cfg;
  std::string model = "plus";
  std::string format;
  std::string eps_list;
  std::string raw;
  std::string config_path;
  std::optional<double> b;
  std::optional<double> c1;
  std::optional<double> c2;
  std::string out_path;

  CLI::App app{"Transmission through squeezed barrier-well potentials (units hbar^2/2m = 1)", "bwtunnel"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  std::map<Subcommand, CLI::App*> subs;
  for (const auto& info : kSubcommands) subs[info.id] = app.add_subcommand(info.name, info.description);

  using S = Subcommand;
  auto on = [&](std::initializer_list<S> which, auto&& add) {
    for (S s : which) add(subs[s]);
  };
  const auto all = {S::ScanAlpha, S::Grid, S::Resonances, S::Converge, S::Classify, S::Matrix};

  on(all, [&](CLI::App* a) {
    a->add_option("--model", model, "Structure: plus (barrier,well,barrier,well) or minus (barrier,well,well,barrier)")
        ->check(CLI::IsMember({"plus", "minus"}))
        ->capture_default_str();
    a->add_option("--sigma", cfg.sigma, "Well-control parameter sigma >= 0 (dimensionless)")->capture_default_str();
    a->add_option("--b", b, "Shape ratio b = c1/c2 > 0; sets c1 = b, c2 = 1 (default 3)");
    a->add_option("--format", format, "Output format: csv | json (default csv for tables, json otherwise)")
        ->check(CLI::IsMember({"csv", "json"}));
    a->add_option("--out", out_path, "Write output to this file instead of standard output");
    a->add_option("--config", config_path, "JSON file whose keys mirror flag names; flags override it");
  });
  on({S::ScanAlpha, S::Grid, S::Converge, S::Matrix}, [&](CLI::App* a) {
    a->add_option("--c1", c1, "Barrier width constant c1 > 0 (use with --c2 instead of --b)");
    a->add_option("--c2", c2, "Well width constant c2 > 0 (use with --c1 instead of --b)");
  });
  on({S::ScanAlpha, S::Grid, S::Matrix}, [&](CLI::App* a) {
    a->add_option("--eps", cfg.eps, "Squeezing parameter eps > 0 (length)")->capture_default_str();
    a->add_option("--raw", raw,
                  "Raw geometry h,l,d,r (unit-strength barrier height, barrier width, well depth, well "
                  "width) replacing the eps parametrization");
  });
  on({S::Matrix, S::Classify, S::Converge}, [&](CLI::App* a) {
    a->add_option("--alpha", cfg.alpha, "Strength alpha (dimensionless)")->capture_default_str();
  });
  on({S::ScanAlpha, S::Grid, S::Resonances, S::Classify}, [&](CLI::App* a) {
    a->add_option("--alpha-min", cfg.alpha_min, "Lower strength bound (dimensionless)")->capture_default_str();
    a->add_option("--alpha-max", cfg.alpha_max, "Upper strength bound (dimensionless)")->capture_default_str();
  });
  on({S::ScanAlpha, S::Grid}, [&](CLI::App* a) {
    a->add_option("--steps", cfg.steps, "Number of alpha grid points (>= 2)")->capture_default_str();
  });
  on({S::ScanAlpha, S::Matrix, S::Converge}, [&](CLI::App* a) {
    a->add_option("--k", cfg.k, "Wave number k > 0 (1/length, E = k^2)")->capture_default_str();
  });
  on({S::Grid}, [&](CLI::App* a) {
    a->add_option("--k-min", cfg.k_min, "Lowest wave number k > 0 (1/length)")->capture_default_str();
    a->add_option("--k-max", cfg.k_max, "Highest wave number (1/length)")->capture_default_str();
    a->add_option("--k-steps", cfg.k_steps, "Number of k grid points (>= 2)")->capture_default_str();
  });
  on({S::Resonances, S::Classify}, [&](CLI::App* a) {
    a->add_option("--grid-steps", cfg.grid_steps, "Root-scan grid cells (>= 100)")->capture_default_str();
    a->add_option("--tol", cfg.tol, "Root bisection tolerance in alpha (> 0)")->capture_default_str();
  });
  on({S::Classify}, [&](CLI::App* a) {
    a->add_option("--match-tol", cfg.match_tol, "Set-membership tolerance in alpha")->capture_default_str();
  });
  on({S::Converge}, [&](CLI::App* a) {
    a->add_option("--eps-list", eps_list, "Comma-separated, strictly decreasing eps values")
        ->default_str("0.2,0.1,0.05,0.02");
    a->add_option("--radius", cfg.radius, "Peak search half-width in alpha (dimensionless)")->capture_default_str();
  });

  std::vector<std::string> args(argv.rbegin(), argv.rend() - 1);  // CLI11 wants reversed, no argv[0]
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    const CLI::App* target = &app;
    for (auto* s : app.get_subcommands()) target = s;
    help << target->help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    help << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  const auto* chosen = app.get_subcommands().front();
  const auto info = std::find_if(std::begin(kSubcommands), std::end(kSubcommands),
                                 [&](const SubcommandInfo& i) { return chosen->get_name() == i.name; });
  cfg.subcommand = info->id;
  const S sub = cfg.subcommand;
  cfg.model = parse_model(model);
  if (!out_path.empty()) cfg.out_path = out_path;

  // Shape constants: exactly one of --b or the pair --c1/--c2.
  require(!(b && (c1 || c2)), "--b: give either --b or --c1/--c2, not both");
  require(c1.has_value() == c2.has_value(), "--c1/--c2: both must be given together");
  if (c1) {
    require(*c1 > 0.0, "--c1: must be > 0");
    require(*c2 > 0.0, "--c2: must be > 0");
    cfg.c1 = *c1;
    cfg.c2 = *c2;
  } else {
    const double bv = b.value_or(3.0);
    require(bv > 0.0, "--b: must be > 0");
    cfg.c1 = bv;
    cfg.c2 = 1.0;
  }
  require(cfg.sigma >= 0.0, "--sigma: must be >= 0");
  require(cfg.eps > 0.0, "--eps: must be > 0");

  const bool tabular = sub == S::ScanAlpha || sub == S::Grid || sub == S::Converge;
  if (format.empty()) cfg.format = tabular ? OutputFormat::CSV : OutputFormat::JSON;
  else cfg.format = format == "csv" ? OutputFormat::CSV : OutputFormat::JSON;
  require(tabular || cfg.format == OutputFormat::JSON, "--format: this subcommand only emits json");

  if (!raw.empty()) {
    const auto v = parse_list(raw, "--raw");
    require(v.size() == 4, "--raw: expected four values h,l,d,r");
    require(v[1] > 0.0 && v[3] > 0.0, "--raw: widths l and r must be > 0");
    cfg.raw = BWGeometry{v[0], v[1], v[2], v[3]};
  }

  if (sub == S::ScanAlpha || sub == S::Grid) {
    require(cfg.steps >= 2, "--steps: must be >= 2");
    require(cfg.alpha_min <= cfg.alpha_max, "--alpha-min: must not exceed --alpha-max");
  }
  if (sub == S::Resonances || sub == S::Classify) {
    require(cfg.alpha_min < cfg.alpha_max, "--alpha-min: must be below --alpha-max");
    require(cfg.grid_steps >= 100, "--grid-steps: must be >= 100");
    require(cfg.tol > 0.0, "--tol: must be > 0");
  }
  if (sub == S::ScanAlpha || sub == S::Matrix || sub == S::Converge) require(cfg.k > 0.0, "--k: must be > 0");
  if (sub == S::Grid) {
    require(cfg.k_min > 0.0, "--k-min: must be > 0");
    require(cfg.k_min <= cfg.k_max, "--k-max: must not be below --k-min");
    require(cfg.k_steps >= 2, "--k-steps: must be >= 2");
  }
  if (sub == S::Classify) {
    require(cfg.sigma > 0.0, "--sigma: classification needs sigma > 0");
    require(cfg.match_tol > 0.0, "--match-tol: must be > 0");
    require(cfg.alpha >= cfg.alpha_min && cfg.alpha <= cfg.alpha_max,
            "--alpha: must lie inside [--alpha-min, --alpha-max]");
  }
  if (sub == S::Converge) {
    if (!eps_list.empty()) cfg.eps_list = parse_list(eps_list, "--eps-list");
    require(!cfg.eps_list.empty(), "--eps-list: must not be empty");
    for (std::size_t i = 0; i < cfg.eps_list.size(); ++i) {
      require(cfg.eps_list[i] > 0.0, "--eps-list: values must be > 0");
      require(i == 0 || cfg.eps_list[i] < cfg.eps_list[i - 1], "--eps-list: must be strictly decreasing");
    }
    require(cfg.radius > 0.0, "--radius: must be > 0");
  }
  return cfg;
}

namespace {

Structure structure_of(const RunConfig& cfg) {
  return cfg.raw ? Structure(cfg.model, *cfg.raw) : Structure(cfg.params());
}

std::string json_optional(const std::optional<double>& v) { return v ? json_number(*v) : "null"; }

void emit_roots(std::ostream& os, const ResonanceSets& sets) {
  std::vector<const ResonanceRoot*> all;
  for (const auto& r : sets.model.roots) all.push_back(&r);
  for (const auto& r : sets.prime.roots) all.push_back(&r);
  os << "[";
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto& r = *all[i];
    os << (i ? ",\n  " : "\n  ") << "{\"alpha\": " << json_number(r.alpha)
       << ", \"set\": " << json_string(to_string(r.set)) << ", \"n\": " << r.index
       << ", \"theta\": " << json_optional(r.theta) << ", \"residual\": " << json_number(r.residual) << "}";
  }
  os << (all.empty() ? "]\n" : "\n]\n");
}

std::string matrix_json(const TransferMatrix& m) {
  return "{\"m11\": " + json_complex(m.m11) + ", \"m12\": " + json_complex(m.m12) +
         ", \"m21\": " + json_complex(m.m21) + ", \"m22\": " + json_complex(m.m22) + "}";
}

void run_matrix(const RunConfig& cfg, std::ostream& os) {
  const double E = cfg.k * cfg.k;
  const BWGeometry g = cfg.raw ? *cfg.raw : geometry(cfg.params());
  const SegmentChain chain = realize(cfg.model, cfg.alpha, g);
  const TransferMatrix product = chain_matrix(chain, E);
  const TransferMatrix closed = cfg.model == Model::Plus ? closed_form_plus(cfg.alpha, g, E)
                                                         : closed_form_minus(cfg.alpha, g, E);
  const auto sc = amplitudes(product, cfg.k, chain.x_left(), chain.x_right());
  os << "{\"model\": " << json_string(to_string(cfg.model)) << ", \"alpha\": " << json_number(cfg.alpha)
     << ", \"k\": " << json_number(cfg.k) << ", \"E\": " << json_number(E)
     << ",\n \"x1\": " << json_number(chain.x_left()) << ", \"x2\": " << json_number(chain.x_right())
     << ",\n \"product\": " << matrix_json(product) << ",\n \"closed_form\": " << matrix_json(closed)
     << ",\n \"det\": " << json_complex(product.det())
     << ", \"det_diff\": " << json_number(std::abs(product.det() - 1.0))
     << ",\n \"closed_vs_product_max_rel_diff\": " << json_number(max_relative_difference(closed, product))
     << ", \"near_opaque\": " << (product.near_opaque() ? "true" : "false")
     << ",\n \"T\": " << json_number(sc.trans) << ", \"R\": " << json_number(sc.refl) << "}\n";
}

void run_classify(const RunConfig& cfg, std::ostream& os) {
  const auto sets = resonance_sets(cfg.model, cfg.c1 / cfg.c2, cfg.sigma, {cfg.alpha_min, cfg.alpha_max},
                                   {cfg.grid_steps, cfg.tol});
  const auto pc = classify(cfg.model, cfg.alpha, cfg.c1 / cfg.c2, cfg.sigma, sets, cfg.match_tol);
  std::string cls = "Opaque", set = "null", th = "null", tl = "null";
  if (const auto* t = std::get_if<TotalTransmission>(&pc.kind)) {
    cls = "TotalTransmission";
    set = json_string(to_string(t->set));
  } else if (const auto* p = std::get_if<PartialTransmission>(&pc.kind)) {
    cls = "PartialTransmission";
    set = json_string(to_string(SetLabel::SigmaPrime));
    th = json_number(p->theta);
    tl = json_number(p->t_limit);
  }
  os << "{\"alpha\": " << json_number(pc.alpha) << ", \"model\": " << json_string(to_string(cfg.model))
     << ", \"class\": " << json_string(cls) << ", \"set\": " << set << ", \"theta\": " << th
     << ", \"T_limit\": " << tl << "}\n";
}

void run_converge(const RunConfig& cfg, std::ostream& os) {
  const auto rows = converge_study(cfg.model, cfg.alpha, cfg.c1 / cfg.c2, cfg.sigma, cfg.k, cfg.eps_list,
                                   cfg.radius);
  if (cfg.format == OutputFormat::CSV) {
    os << "eps,alpha_peak,T_peak,alpha_drift\n";
    for (const auto& r : rows)
      os << csv_number(r.eps) << ',' << csv_number(r.alpha_peak) << ',' << csv_number(r.t_peak) << ','
         << csv_number(r.alpha_drift) << '\n';
    return;
  }
  os << "[";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    os << (i ? ",\n  " : "\n  ") << "{\"eps\": " << json_number(r.eps) << ", \"alpha_peak\": "
       << json_number(r.alpha_peak) << ", \"T_peak\": " << json_number(r.t_peak)
       << ", \"alpha_drift\": " << json_number(r.alpha_drift) << "}";
  }
  os << "\n]\n";
}

void emit_grid(const RunConfig& cfg, std::ostream& os, const TransmissionGrid& g) {
  if (cfg.format == OutputFormat::CSV) write_csv(os, g);
  else os << to_json(g);
}

void dispatch(const RunConfig& cfg, std::ostream& os) {
  switch (cfg.subcommand) {
    case Subcommand::ScanAlpha: {
      const auto rows = scan_alpha(structure_of(cfg), cfg.k, cfg.alpha_min, cfg.alpha_max, cfg.steps);
      TransmissionGrid g;
      g.ks = {cfg.k};
      for (const auto& r : rows) {
        g.alphas.push_back(r.alpha);
        g.values.push_back(r.trans);
      }
      emit_grid(cfg, os, g);
      break;
    }
    case Subcommand::Grid:
      emit_grid(cfg, os,
                grid(structure_of(cfg), {cfg.alpha_min, cfg.alpha_max, cfg.steps},
                     {cfg.k_min, cfg.k_max, cfg.k_steps}));
      break;
    case Subcommand::Resonances:
      emit_roots(os, resonance_sets(cfg.model, cfg.c1 / cfg.c2, cfg.sigma, {cfg.alpha_min, cfg.alpha_max},
                                    {cfg.grid_steps, cfg.tol}));
      break;
    case Subcommand::Converge: run_converge(cfg, os); break;
    case Subcommand::Classify: run_classify(cfg, os); break;
    case Subcommand::Matrix: run_matrix(cfg, os); break;
  }
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    // Assemble in memory so a failing run leaves no partial output.
    std::ostringstream buffer;
    dispatch(config, buffer);
    if (config.out_path) {
      std::ofstream file(*config.out_path, std::ios::binary);
      if (!file) throw std::runtime_error("cannot write '" + *config.out_path + "'");
      file << buffer.str();
    } else {
      out << buffer.str();
    }
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int main_entry(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  try {
    const auto cfg = parse_args(argv, out);
    if (!cfg) return 0;
    return run(*cfg, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\nRun with --help for usage.\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace bwt::cli
