#include "fracheat/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"

#include "fracheat/gp.hpp"
#include "fracheat/props.hpp"
#include "fracheat/report.hpp"

namespace fracheat {

namespace {

double parse_number(const std::string& text, const std::string& field) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError(field, "'" + text + "' is not a number");
  }
  if (used != text.size() || !std::isfinite(v)) {
    throw ConfigError(field, "'" + text + "' is not a finite number");
  }
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

const char* command_name(Command c) {
  switch (c) {
    case Command::cov: return "cov";
    case Command::verify: return "verify";
    case Command::sample: return "sample";
    case Command::spde_mc: return "spde-mc";
    case Command::scan: return "scan";
  }
  return "?";
}

Command parse_command(const std::string& s) {
  if (s == "cov") return Command::cov;
  if (s == "verify") return Command::verify;
  if (s == "sample") return Command::sample;
  if (s == "spde-mc") return Command::spde_mc;
  if (s == "scan") return Command::scan;
  throw ConfigError("command", "unknown command '" + s + "'");
}

Format parse_format(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw ConfigError("format", "must be csv or json");
}

IntegralForm parse_form(const std::string& s) {
  if (s == "primary") return IntegralForm::primary;
  if (s == "ibp") return IntegralForm::ibp;
  throw ConfigError("form", "must be primary or ibp");
}

}  // namespace

std::vector<double> parse_list(const std::string& text, const std::string& field) {
  std::vector<double> out;
  for (const std::string& item : split(text, ',')) out.push_back(parse_number(item, field));
  return out;
}

GridSpec parse_grid(const std::string& spec) {
  GridSpec g;
  if (spec.empty()) return g;
  if (spec.rfind("single:", 0) == 0) {
    const auto v = parse_list(spec.substr(7), "grid");
    if (v.size() != 2) throw ConfigError("grid", "single: needs exactly two times");
    if (v[0] < 0.0 || v[1] < 0.0) throw ConfigError("grid", "times must be non-negative");
    g.single = std::make_pair(v[0], v[1]);
    return g;
  }
  if (spec.find(':') != std::string::npos) {
    const auto parts = split(spec, ':');
    if (parts.size() != 3) throw ConfigError("grid", "expected start:end:count");
    const double a = parse_number(parts[0], "grid");
    const double b = parse_number(parts[1], "grid");
    const double n = parse_number(parts[2], "grid");
    if (n < 0 || n != std::floor(n)) throw ConfigError("grid", "count must be a non-negative integer");
    if (!(b > a) || a < 0.0) throw ConfigError("grid", "need 0 <= start < end");
    const int count = static_cast<int>(n);
    for (int k = 1; k <= count; ++k) g.times.push_back(a + (b - a) * k / count);
    return g;
  }
  g.times = parse_list(spec, "grid");
  for (std::size_t i = 0; i < g.times.size(); ++i) {
    if (g.times[i] < 0.0) throw ConfigError("grid", "times must be non-negative");
    if (i > 0 && !(g.times[i] > g.times[i - 1])) {
      throw ConfigError("grid", "times must be strictly increasing");
    }
  }
  return g;
}

void apply_json(const nlohmann::json& j, RunConfig& cfg) {
  if (!j.is_object()) throw ConfigError("config", "must be a flat JSON object");
  using Setter = std::function<void(const nlohmann::json&)>;
  const std::map<std::string, Setter> setters = {
      {"command", [&](const auto& v) { cfg.command = parse_command(v.template get<std::string>()); }},
      {"kernel", [&](const auto& v) { cfg.kernel = v.template get<std::string>(); }},
      {"H", [&](const auto& v) { cfg.hurst = v.template get<double>(); }},
      {"K", [&](const auto& v) { cfg.k = v.template get<double>(); }},
      {"d", [&](const auto& v) { cfg.dim = v.template get<int>(); }},
      {"form", [&](const auto& v) { cfg.form = v.template get<std::string>(); }},
      {"grid", [&](const auto& v) { cfg.grid = v.template get<std::string>(); }},
      {"output", [&](const auto& v) { cfg.output = v.template get<std::string>(); }},
      {"format", [&](const auto& v) { cfg.format = parse_format(v.template get<std::string>()); }},
      {"seed", [&](const auto& v) { cfg.seed = v.template get<std::uint64_t>(); }},
      {"n_paths", [&](const auto& v) { cfg.n_paths = v.template get<std::size_t>(); }},
      {"check", [&](const auto& v) { cfg.check = v.template get<std::string>(); }},
      {"tol", [&](const auto& v) { cfg.tol = v.template get<double>(); }},
      {"T", [&](const auto& v) { cfg.horizon = v.template get<double>(); }},
      {"nt", [&](const auto& v) { cfg.nt = v.template get<int>(); }},
      {"L", [&](const auto& v) { cfg.half_width = v.template get<double>(); }},
      {"nx", [&](const auto& v) { cfg.nx = v.template get<int>(); }},
      {"c", [&](const auto& v) { cfg.diffusivity = v.template get<double>(); }},
      {"times", [&](const auto& v) { cfg.times = v.template get<std::string>(); }},
      {"x", [&](const auto& v) { cfg.x = v.template get<double>(); }},
      {"kernels", [&](const auto& v) { cfg.kernels = v.template get<std::string>(); }},
      {"hursts", [&](const auto& v) { cfg.hursts = v.template get<std::string>(); }},
      {"sizes", [&](const auto& v) { cfg.sizes = v.template get<std::string>(); }},
  };
  for (const auto& item : j.items()) {
    auto it = setters.find(item.key());
    if (it == setters.end()) throw ConfigError(item.key(), "unknown field");
    try {
      it->second(item.value());
    } catch (const nlohmann::json::exception&) {
      throw ConfigError(item.key(), "has the wrong type");
    }
  }
}

KernelSpec make_kernel(const std::string& name, const RunConfig& cfg) {
  const IntegralForm form = parse_form(cfg.form);
  auto params = [&] {
    try {
      return ModelParams(cfg.hurst, cfg.dim);
    } catch (const std::domain_error& e) {
      throw ConfigError("H", e.what());
    }
  };
  KernelSpec k;
  if (name == "swanson") {
    k = kernel::Swanson{};
  } else if (name == "bifbm") {
    k = kernel::BifBm{cfg.hurst, cfg.k};
  } else if (name == "noise") {
    k = kernel::Noise{cfg.hurst};
  } else if (name == "oracle") {
    k = kernel::SolutionOracle{params(), cfg.tol.value_or(1e-11)};
  } else if (name == "solution") {
    k = kernel::SolutionDecomposed{params()};
  } else if (name == "lead") {
    k = kernel::LeadTerm{params()};
  } else if (name == "r1") {
    k = kernel::R1{params()};
  } else if (name == "rx") {
    k = kernel::RX{cfg.hurst, form};
  } else if (name == "ry") {
    k = kernel::RY{cfg.hurst, form};
  } else if (name == "rz") {
    k = kernel::RZ{cfg.hurst};
  } else {
    throw ConfigError("kernel", "unknown kernel '" + name + "'");
  }
  try {
    validate(k);
  } catch (const std::domain_error& e) {
    throw ConfigError("kernel", e.what());
  }
  return k;
}

KernelSpec make_kernel(const RunConfig& cfg) { return make_kernel(cfg.kernel, cfg); }

SpdeConfig make_spde_config(const RunConfig& cfg) {
  SpdeConfig s;
  s.hurst = cfg.hurst;
  s.horizon = cfg.horizon;
  s.nt = cfg.nt;
  s.half_width = cfg.half_width;
  s.nx = cfg.nx;
  s.diffusivity = cfg.diffusivity;
  s.n_paths = cfg.n_paths.value_or(4000);
  s.seed = cfg.seed;
  return s;
}

namespace {

const std::set<std::string> kChecks = {"decomposition", "forms",    "law",  "scaling",
                                       "limits",        "increments", "holder", "psd",
                                       "sampling"};

std::vector<std::string> selected_checks(const std::string& check) {
  if (check == "all") {
    return {"decomposition", "forms", "law", "scaling", "limits", "increments", "holder", "psd"};
  }
  std::vector<std::string> out = split(check, ',');
  for (const auto& c : out) {
    if (!kChecks.count(c)) throw ConfigError("check", "unknown check '" + c + "'");
  }
  return out;
}

std::vector<double> positive_grid(const RunConfig& cfg) {
  const GridSpec g = parse_grid(cfg.grid);
  if (g.single) throw ConfigError("grid", "this command needs a list of times, not single:");
  for (double t : g.times) {
    if (!(t > 0.0)) throw ConfigError("grid", "times must be positive for this command");
  }
  return g.times;
}

}  // namespace

void validate(const RunConfig& cfg) {
  parse_form(cfg.form);
  if (cfg.tol && !(*cfg.tol > 0.0)) throw ConfigError("tol", "must be positive");
  switch (cfg.command) {
    case Command::cov:
      make_kernel(cfg);
      parse_grid(cfg.grid);
      break;
    case Command::verify: {
      const auto checks = selected_checks(cfg.check);
      if (!ModelParams::admissible(cfg.hurst, cfg.dim)) {
        throw ConfigError("H", "(H, d) must satisfy H in (1/2, 1), d in {1, 3}, d < 4H");
      }
      positive_grid(cfg);
      for (const auto& c : checks) {
        if (cfg.dim == 3 && (c == "forms" || c == "increments" || c == "holder")) {
          throw ConfigError("d", "check '" + c + "' is defined for d = 1 only");
        }
        if (c == "sampling") make_kernel(cfg);
      }
      if (cfg.dim == 3 && cfg.hurst <= 0.75) {
        throw ConfigError("H", "d = 3 checks need H > 3/4");
      }
      break;
    }
    case Command::sample: {
      make_kernel(cfg);
      TimeGrid(positive_grid(cfg), 1e300);
      if (cfg.n_paths && *cfg.n_paths < 2) throw ConfigError("n_paths", "must be at least 2");
      break;
    }
    case Command::spde_mc: {
      const SpdeConfig s = make_spde_config(cfg);
      s.validate();
      SpdeSimulator probe_free = SpdeSimulator(s);  // grid-time checks need the step
      for (double t : parse_list(cfg.times, "times")) probe_free.time_index(t);
      if (!(std::abs(cfg.x) <= cfg.half_width / 2)) throw ConfigError("x", "must satisfy |x| <= L/2");
      break;
    }
    case Command::scan: {
      for (const auto& name : split(cfg.kernels, ',')) {
        RunConfig probe = cfg;
        probe.hurst = 0.9;
        probe.dim = name == "rz" ? 3 : 1;
        make_kernel(name, probe);
      }
      for (double h : parse_list(cfg.hursts, "hursts")) {
        if (!(h > 0.5 && h < 1.0)) throw ConfigError("hursts", "values must lie in (1/2, 1)");
      }
      for (double n : parse_list(cfg.sizes, "sizes")) {
        if (!(n >= 1) || n != std::floor(n)) throw ConfigError("sizes", "must be positive integers");
      }
      break;
    }
  }
}

namespace {

std::filesystem::path output_path(const RunConfig& cfg) {
  if (!cfg.output.empty()) return cfg.output;
  const char* dir = std::getenv("FRACHEAT_OUTPUT_DIR");
  const std::string name =
      std::string(command_name(cfg.command)) + (cfg.format == Format::csv ? ".csv" : ".json");
  return dir && *dir ? std::filesystem::path(dir) / name : std::filesystem::path(name);
}

void emit(const RunConfig& cfg, const std::string& content, std::ostream& log) {
  if (cfg.output == "-") {
    std::cout << content;
    return;
  }
  const auto path = output_path(cfg);
  write_atomic(path, content);
  log << "wrote " << path.string() << '\n';
}

int run_cov(const RunConfig& cfg, std::ostream& log) {
  const KernelSpec k = make_kernel(cfg);
  const GridSpec g = parse_grid(cfg.grid);
  std::vector<MatrixEntry> entries;
  if (g.single) {
    entries.push_back({g.single->first, g.single->second,
                       evaluate(k, g.single->first, g.single->second)});
  } else {
    for (double t : g.times) {
      for (double s : g.times) entries.push_back({t, s, evaluate(k, t, s)});
    }
  }
  emit(cfg, cfg.format == Format::csv ? entries_csv(entries) : dump_json(entries_json(entries)), log);
  return exit_code::ok;
}

std::vector<double> dyadic_deltas(int from, int to) {
  std::vector<double> out;
  for (int e = from; e <= to; ++e) out.push_back(std::ldexp(1.0, -e));
  return out;
}

std::vector<VerificationReport> run_checks(const RunConfig& cfg) {
  const ModelParams p(cfg.hurst, cfg.dim);
  const double h = p.hurst();
  const bool d1 = p.dim() == 1;
  const auto times = positive_grid(cfg);
  const auto pairs = grid_pairs(times);
  std::vector<VerificationReport> out;
  auto add = [&](std::vector<VerificationReport> rs) {
    for (auto& r : rs) out.push_back(std::move(r));
  };
  for (const std::string& c : selected_checks(cfg.check)) {
    if (c == "decomposition") {
      out.push_back(check_decomposition(p, times, cfg.tol.value_or(d1 ? 1e-6 : 1e-5)));
    } else if (c == "forms") {
      out.push_back(check_form_equivalence(IncrementKernel::rx, h, times, cfg.tol.value_or(1e-8)));
      out.push_back(check_form_equivalence(IncrementKernel::ry, h, times, cfg.tol.value_or(1e-8)));
    } else if (c == "law") {
      out.push_back(check_law_identity(p, times, cfg.tol.value_or(d1 ? 1e-6 : 1e-5)));
    } else if (c == "scaling") {
      for (double scale : {0.5, 2.0, 10.0}) {
        if (d1) {
          out.push_back(check_scaling(ScalingKernel::rx, h, scale, pairs, cfg.tol.value_or(1e-6)));
          out.push_back(check_scaling(ScalingKernel::ry, h, scale, pairs, cfg.tol.value_or(1e-6)));
        } else {
          out.push_back(check_scaling(ScalingKernel::rz, h, scale, pairs, cfg.tol.value_or(1e-6)));
        }
      }
    } else if (c == "limits") {
      add(check_limit_half(LimitHalfConfig{}, times));
    } else if (c == "increments") {
      add(check_increment_bounds({h}, pairs));
    } else if (c == "holder") {
      const auto deltas = dyadic_deltas(6, 14);
      const double tol = cfg.tol.value_or(0.05);
      out.push_back(check_holder_slope(kernel::RX{h}, 1.0, deltas, 0.5, tol));
      out.push_back(check_holder_slope(kernel::RY{h}, 1.0, deltas, 0.5, tol));
      out.push_back(check_holder_slope(kernel::BifBm{0.5, 0.5}, 1.0, deltas, 0.5, tol));
    } else if (c == "psd") {
      std::vector<KernelSpec> ks = {kernel::Swanson{}, kernel::BifBm{0.5, 0.5},
                                    kernel::SolutionDecomposed{p}};
      if (d1) {
        ks.push_back(kernel::RX{h});
        ks.push_back(kernel::RY{h});
      } else {
        ks.push_back(kernel::RZ{h});
      }
      add(psd_scan(ks, {static_cast<int>(times.size())}, times.back(), cfg.tol.value_or(1e-10)));
    } else if (c == "sampling") {
      out.push_back(check_sampling(make_kernel(cfg), TimeGrid(times, times.back()),
                                   cfg.n_paths.value_or(20000), cfg.seed, cfg.tol.value_or(4.0)));
    }
  }
  return out;
}

int finish_reports(const RunConfig& cfg, const std::vector<VerificationReport>& reports,
                   std::ostream& log) {
  emit(cfg, cfg.format == Format::csv ? reports_csv(reports) : dump_json(reports_json(reports)),
       log);
  log << reports_table(reports);
  for (const auto& r : reports) {
    if (!r.pass) {
      log << "check failed; report: " << (cfg.output == "-" ? "stdout" : output_path(cfg).string())
          << '\n';
      return exit_code::check_failed;
    }
  }
  return exit_code::ok;
}

int run_sample(const RunConfig& cfg, std::ostream& log) {
  const auto times = positive_grid(cfg);
  const GramMatrix g = build_gram(make_kernel(cfg), TimeGrid(times, times.empty() ? 1.0 : times.back()));
  const PathEnsemble e = sample_paths(g, cfg.n_paths.value_or(20000), cfg.seed);
  emit(cfg, cfg.format == Format::csv ? ensemble_csv(e) : dump_json(ensemble_json(e)), log);
  return exit_code::ok;
}

int run_spde(const RunConfig& cfg, std::ostream& log) {
  const MCReport r = mild_mc(make_spde_config(cfg), parse_list(cfg.times, "times"), cfg.x);
  emit(cfg, cfg.format == Format::csv ? mc_csv(r) : dump_json(mc_json(r)), log);
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    log << "t = " << r.times[i] << ": skewness " << r.skewness[i] << " (se " << r.skewness_se
        << "), excess kurtosis " << r.excess_kurtosis[i] << " (se " << r.kurtosis_se << ")\n";
  }
  return exit_code::ok;
}

int run_scan(const RunConfig& cfg, std::ostream& log) {
  std::vector<KernelSpec> ks;
  std::set<std::string> seen;
  for (const auto& name : split(cfg.kernels, ',')) {
    for (double h : parse_list(cfg.hursts, "hursts")) {
      RunConfig c = cfg;
      c.hurst = h;
      c.dim = name == "rz" ? 3 : 1;
      if (name == "rz" && h <= 0.75) continue;
      if (name == "bifbm") c.k = cfg.k;
      KernelSpec k = make_kernel(name, c);
      if (seen.insert(kernel_id(k)).second) ks.push_back(k);
    }
  }
  std::vector<int> sizes;
  for (double n : parse_list(cfg.sizes, "sizes")) sizes.push_back(static_cast<int>(n));
  return finish_reports(cfg, psd_scan(ks, sizes, 1.0, cfg.tol.value_or(1e-10)), log);
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& log) {
  try {
    validate(cfg);
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return exit_code::config_error;
  }
  try {
    switch (cfg.command) {
      case Command::cov: return run_cov(cfg, log);
      case Command::verify: return finish_reports(cfg, run_checks(cfg), log);
      case Command::sample: return run_sample(cfg, log);
      case Command::spde_mc: return run_spde(cfg, log);
      case Command::scan: return run_scan(cfg, log);
    }
  } catch (const IoError& e) {
    log << "i/o error: " << e.what() << '\n';
    return exit_code::io_error;
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return exit_code::config_error;
  }
  return exit_code::config_error;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Covariance kernels, checks and simulators for the fractional heat equation"};
  RunConfig flags;
  std::string command, format, config_file;
  double tol = 0.0;
  std::size_t n_paths = 0;

  app.add_option("command", command, "cov | verify | sample | spde-mc | scan")->required();
  app.add_option("--config", config_file, "flat JSON file with the same keys as the flags");
  // Each entry copies one flag from `flags` into the effective config.
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> given;
  auto opt = [&](const std::string& name, auto member, const std::string& help) {
    CLI::Option* o = app.add_option(name, flags.*member, help);
    given.emplace_back(o, [&flags, member](RunConfig& c) { c.*member = flags.*member; });
  };
  opt("--kernel", &RunConfig::kernel, "swanson|bifbm|noise|oracle|solution|lead|r1|rx|ry|rz");
  opt("--H", &RunConfig::hurst, "Hurst index");
  opt("--K", &RunConfig::k, "bifractional K");
  opt("--d", &RunConfig::dim, "space dimension (1 or 3)");
  opt("--form", &RunConfig::form, "primary|ibp");
  opt("--grid", &RunConfig::grid, "start:end:count | t1,t2,... | single:t,s");
  opt("-o,--output", &RunConfig::output, "output file ('-' for stdout)");
  opt("--seed", &RunConfig::seed, "random seed");
  opt("--check", &RunConfig::check, "comma list of checks, or all");
  opt("--T", &RunConfig::horizon, "time horizon (spde-mc)");
  opt("--nt", &RunConfig::nt, "time steps (spde-mc)");
  opt("--L", &RunConfig::half_width, "spatial half width (spde-mc)");
  opt("--nx", &RunConfig::nx, "spatial cells (spde-mc)");
  opt("--c", &RunConfig::diffusivity, "diffusivity (spde-mc)");
  opt("--times", &RunConfig::times, "evaluation times (spde-mc)");
  opt("--x", &RunConfig::x, "evaluation point (spde-mc)");
  opt("--kernels", &RunConfig::kernels, "kernels to scan");
  opt("--hursts", &RunConfig::hursts, "Hurst indices to scan");
  opt("--sizes", &RunConfig::sizes, "grid sizes to scan");
  CLI::Option* format_opt = app.add_option("--format", format, "csv|json");
  CLI::Option* tol_opt = app.add_option("--tol", tol, "tolerance override");
  CLI::Option* paths_opt = app.add_option("--n-paths", n_paths, "Monte Carlo paths");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return exit_code::ok;
  } catch (const CLI::ParseError& e) {
    err << "config error: " << e.what() << '\n';
    return exit_code::config_error;
  }

  RunConfig cfg;
  try {
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      if (!in) throw ConfigError("config", "cannot read " + config_file);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config", e.what());
      }
      apply_json(j, cfg);
    }
    cfg.command = parse_command(command);
    for (auto& [o, copy] : given) {
      if (o->count() > 0) copy(cfg);
    }
    if (format_opt->count() > 0) cfg.format = parse_format(format);
    if (tol_opt->count() > 0) cfg.tol = tol;
    if (paths_opt->count() > 0) cfg.n_paths = n_paths;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return exit_code::config_error;
  }
  return run(cfg, err);
}

}  // namespace fracheat
