// Command-line front end: deterministic CSV/JSON emission of LDOS curves,
// survival traces, pole/return decompositions, and Zeno reports.

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tbdecay/lattice_green.hpp"
#include "tbdecay/spectral_decomposition.hpp"
#include "tbdecay/time_evolution.hpp"
#include "tbdecay/zeno.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace tbdecay;

// Shortest decimal representation that round-trips to the same double.
std::string fmt(double v) {
  char buf[40];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, p);
}

json json_number(double v) {
  if (std::isnan(v)) return nullptr;
  return v;  // nlohmann serializes +-inf as null as well
}

struct GridSpec {
  double min = 0.0;
  double max = 50.0;
  std::size_t count = 1001;
  std::string scale = "linear";

  std::vector<double> build() const {
    if (count < 2) throw std::invalid_argument("grid count must be >= 2");
    if (!(min < max)) throw std::invalid_argument("grid min must be < max");
    std::vector<double> g(count);
    if (scale == "log") {
      if (!(min > 0.0)) throw std::invalid_argument("log grid requires min > 0");
      const double r = std::log(max / min);
      for (std::size_t i = 0; i < count; ++i)
        g[i] = min * std::exp(r * static_cast<double>(i) / static_cast<double>(count - 1));
    } else {
      for (std::size_t i = 0; i < count; ++i)
        g[i] = min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    return g;
  }
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (path != "-") {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw std::invalid_argument("cannot open output path: " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void write_unit_header(std::ostream& os, const std::string& what, const ChainModel& m) {
  os << "# tbdecay " << what << "; units: hbar = 1, V = 1, band [0, 4]; delta = " << fmt(m.delta)
     << ", eps0 = " << fmt(m.eps0) << "\n";
}

json model_json(const ChainModel& m) { return json{{"delta", m.delta}, {"eps0", m.eps0}}; }

// ---- subcommand payloads (shared between direct emission and scan) ----

json ldos_json(const ChainModel& model, std::size_t points) {
  const SpectralData data = sample_spectral_data(model, points);
  json bs = json::array();
  for (const auto& b : data.bound_states) bs.push_back({{"energy", b.energy}, {"weight", b.weight}});
  return json{{"model", model_json(model)},
              {"energies", data.energies},
              {"ldos", data.ldos},
              {"bound_states", bs}};
}

void ldos_csv(std::ostream& os, const ChainModel& model, std::size_t points) {
  const SpectralData data = sample_spectral_data(model, points);
  write_unit_header(os, "ldos", model);
  os << "eps,ldos\n";
  for (std::size_t i = 0; i < data.energies.size(); ++i)
    os << fmt(data.energies[i]) << ',' << fmt(data.ldos[i]) << '\n';
  for (const auto& b : data.bound_states)
    os << "# bound_state," << fmt(b.energy) << ',' << fmt(b.weight) << '\n';
}

SurvivalTrace run_survival(const ChainModel& model, const std::vector<double>& times,
                           const std::string& method, int n_sites, const QuadratureBudget& budget) {
  if (method == "spectral") return evolve_spectral(model, times, budget);
  if (method == "diagonalization") {
    const int required = static_cast<int>(std::ceil(2.0 * times.back())) + 100;
    return evolve_diagonalization(model, times, n_sites > 0 ? n_sites : required);
  }
  if (method == "bessel") {
    if (model.delta != 1.0 || model.eps0 != kBandCenter)
      throw std::invalid_argument("--method bessel applies only to delta = 1, eps0 = 2");
    return evolve_bessel(times);
  }
  throw std::invalid_argument("unknown method: " + method);
}

json survival_json(const ChainModel& model, const SurvivalTrace& trace, const std::string& method) {
  json re = json::array(), im = json::array();
  for (const Complex& c : trace.amplitude) {
    re.push_back(c.real());
    im.push_back(c.imag());
  }
  return json{{"model", model_json(model)}, {"method", method},     {"times", trace.times},
              {"re_c", re},                 {"im_c", im},           {"probability", trace.probability}};
}

void survival_csv(std::ostream& os, const ChainModel& model, const SurvivalTrace& trace) {
  write_unit_header(os, "survival", model);
  os << "t,re_c,im_c,P\n";
  for (std::size_t i = 0; i < trace.times.size(); ++i)
    os << fmt(trace.times[i]) << ',' << fmt(trace.amplitude[i].real()) << ','
       << fmt(trace.amplitude[i].imag()) << ',' << fmt(trace.probability[i]) << '\n';
}

json decompose_json(const ChainModel& model, const Decomposition& d) {
  json pa = json::array(), ra = json::array(), pd = json::array(), pr = json::array();
  for (std::size_t i = 0; i < d.times.size(); ++i) {
    pa.push_back(std::abs(d.pole_term[i]));
    ra.push_back(std::abs(d.return_term[i]));
    pd.push_back(d.phase_diff[i]);
    pr.push_back(std::norm(d.pole_term[i] + d.return_term[i]));
  }
  return json{{"model", model_json(model)}, {"times", d.times}, {"pole_abs", pa},
              {"return_abs", ra},           {"phase_diff", pd}, {"probability", pr}};
}

void decompose_csv(std::ostream& os, const ChainModel& model, const Decomposition& d) {
  write_unit_header(os, "decompose", model);
  os << "t,pole_abs,return_abs,phase_diff,P\n";
  for (std::size_t i = 0; i < d.times.size(); ++i)
    os << fmt(d.times[i]) << ',' << fmt(std::abs(d.pole_term[i])) << ','
       << fmt(std::abs(d.return_term[i])) << ',' << fmt(d.phase_diff[i]) << ','
       << fmt(std::norm(d.pole_term[i] + d.return_term[i])) << '\n';
}

json zeno_summary_json(const ZenoReport& rep) {
  json s;
  s["gamma0"] = json_number(rep.gamma0);
  s["Gamma0"] = json_number(rep.Gamma0);
  s["eps_r"] = json_number(rep.eps_r);
  s["Z"] = json_number(rep.Z);
  s["tau_star"] = rep.tau_star ? json_number(*rep.tau_star) : json(nullptr);
  s["tau_star_star"] = rep.tau_star_star ? json_number(*rep.tau_star_star) : json(nullptr);
  s["tau_star_star_ratio"] =
      rep.tau_star_star_ratio ? json_number(*rep.tau_star_star_ratio) : json(nullptr);
  s["t_R_formula"] = json_number(rep.times.t_R_formula);
  s["t_R_numeric"] = json_number(rep.times.t_R_numeric);
  s["t_R_out_of_regime"] = rep.times.t_R_out_of_regime;
  s["t_S_site"] = json_number(rep.times.t_S_site);
  s["t_S_bath"] = json_number(rep.times.t_S_bath);
  s["t_S_numeric"] = json_number(rep.times.t_S_numeric);
  return s;
}

json zeno_json(const ChainModel& model, const ZenoReport& rep) {
  json cls = json::array(), ge = json::array();
  for (std::size_t i = 0; i < rep.tau_grid.size(); ++i) {
    ge.push_back(json_number(rep.gamma_eff[i]));
    cls.push_back(to_string(rep.classification[i]));
  }
  return json{{"model", model_json(model)},
              {"summary", zeno_summary_json(rep)},
              {"tau", rep.tau_grid},
              {"gamma_eff", ge},
              {"classification", cls}};
}

void zeno_csv(std::ostream& os, const ChainModel& model, const ZenoReport& rep) {
  write_unit_header(os, "zeno", model);
  os << "tau,gamma_eff,classification\n";
  for (std::size_t i = 0; i < rep.tau_grid.size(); ++i)
    os << fmt(rep.tau_grid[i]) << ',' << fmt(rep.gamma_eff[i]) << ','
       << to_string(rep.classification[i]) << '\n';
}

std::vector<double> parse_values(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  if (out.empty()) throw std::invalid_argument("--values: no values parsed");
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Plain `key = value` config support: keys become --key flags appended to
// the argument list unless the flag is already present, so command-line
// flags always win. Handled before CLI11 sees the arguments.
void apply_config_file(std::vector<std::string>& args) {
  std::string path;
  for (auto it = args.begin(); it != args.end();) {
    if (*it == "--config") {
      if (std::next(it) == args.end())
        throw std::invalid_argument("--config requires a file path");
      path = *std::next(it);
      it = args.erase(it, std::next(it, 2));
    } else if (it->rfind("--config=", 0) == 0) {
      path = it->substr(9);
      it = args.erase(it);
    } else {
      ++it;
    }
  }
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::string line;
  while (std::getline(in, line)) {
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line is not key = value: " + stripped);
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) throw std::invalid_argument("config line has an empty key: " + stripped);
    const std::string flag = "--" + key;
    bool present = false;
    for (const std::string& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) present = true;
    if (!present) {
      args.push_back(flag);
      args.push_back(value);
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decay of an unstable state coupled to a semi-infinite tight-binding chain"};
  app.require_subcommand(1);

  struct Common {
    double delta = 0.2;
    double eps0 = 2.0;
    double quad_tol = 1e-8;
    std::string output = "-";
    std::string format = "csv";
  };

  std::string config_help;  // handled before parsing; listed here for --help
  auto add_common = [&config_help](CLI::App* cmd, Common& c, bool need_delta = true) {
    auto* d = cmd->add_option("--delta", c.delta, "first hopping / bulk hopping");
    if (need_delta) d->required();
    cmd->add_option("--eps0", c.eps0, "site energy of the first site (band is [0, 4])");
    cmd->add_option("--quad-tol", c.quad_tol, "per-panel quadrature tolerance")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--output", c.output, "output path ('-' = stdout)");
    cmd->add_option("--format", c.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--config", config_help, "plain key = value config file (flags override it)");
  };

  // ldos
  Common c_ldos;
  std::size_t ldos_points = 2001;
  auto* cmd_ldos = app.add_subcommand("ldos", "local density of states plus bound states");
  add_common(cmd_ldos, c_ldos);
  cmd_ldos->add_option("--points", ldos_points, "grid points across the band");

  // survival
  Common c_surv;
  GridSpec surv_grid{0.0, 50.0, 1001, "linear"};
  std::string surv_method = "spectral";
  int surv_nsites = 0;
  auto* cmd_surv = app.add_subcommand("survival", "survival amplitude c(t) and P(t)");
  add_common(cmd_surv, c_surv);
  cmd_surv->add_option("--tmin", surv_grid.min, "first time");
  cmd_surv->add_option("--tmax", surv_grid.max, "last time");
  cmd_surv->add_option("--tcount", surv_grid.count, "number of grid points");
  cmd_surv->add_option("--tscale", surv_grid.scale, "linear or log")
      ->check(CLI::IsMember({"linear", "log"}));
  cmd_surv->add_option("--method", surv_method, "spectral, diagonalization, or bessel")
      ->check(CLI::IsMember({"spectral", "diagonalization", "bessel"}));
  cmd_surv->add_option("--nsites", surv_nsites, "chain length for diagonalization (0 = auto)");

  // decompose
  Common c_dec;
  GridSpec dec_grid{0.0, 500.0, 2001, "linear"};
  auto* cmd_dec = app.add_subcommand("decompose", "pole term / return term split of c(t)");
  add_common(cmd_dec, c_dec);
  cmd_dec->add_option("--tmin", dec_grid.min, "first time");
  cmd_dec->add_option("--tmax", dec_grid.max, "last time");
  cmd_dec->add_option("--tcount", dec_grid.count, "number of grid points");
  cmd_dec->add_option("--tscale", dec_grid.scale, "linear or log")
      ->check(CLI::IsMember({"linear", "log"}));

  // zeno
  Common c_zeno;
  GridSpec zeno_grid{0.05, 25.0, 100, "linear"};
  auto* cmd_zeno = app.add_subcommand("zeno", "effective decay rate under repeated measurements");
  add_common(cmd_zeno, c_zeno);
  cmd_zeno->add_option("--taumin", zeno_grid.min, "first measurement period");
  cmd_zeno->add_option("--taumax", zeno_grid.max, "last measurement period");
  cmd_zeno->add_option("--taucount", zeno_grid.count, "number of grid points");
  cmd_zeno->add_option("--tauscale", zeno_grid.scale, "linear or log")
      ->check(CLI::IsMember({"linear", "log"}));
  std::string zeno_summary_out = "-";
  cmd_zeno->add_option("--summary-output", zeno_summary_out,
                       "where the JSON summary goes in csv mode ('-' = stdout)");

  // scan
  Common c_scan;
  c_scan.format = "json";
  std::string scan_param = "delta";
  std::string scan_values;
  std::string scan_task = "zeno";
  GridSpec scan_grid{0.05, 25.0, 100, "linear"};
  std::size_t scan_points = 2001;
  auto* cmd_scan = app.add_subcommand("scan", "repeat a task over a list of delta or eps0 values");
  add_common(cmd_scan, c_scan, false);
  cmd_scan->add_option("--param", scan_param, "delta or eps0")
      ->check(CLI::IsMember({"delta", "eps0"}));
  cmd_scan->add_option("--values", scan_values, "comma-separated parameter values")->required();
  cmd_scan->add_option("--task", scan_task, "ldos, survival, decompose, or zeno")
      ->check(CLI::IsMember({"ldos", "survival", "decompose", "zeno"}));
  cmd_scan->add_option("--gridmin", scan_grid.min, "task grid start");
  cmd_scan->add_option("--gridmax", scan_grid.max, "task grid end");
  cmd_scan->add_option("--gridcount", scan_grid.count, "task grid points");
  cmd_scan->add_option("--gridscale", scan_grid.scale, "linear or log")
      ->check(CLI::IsMember({"linear", "log"}));
  cmd_scan->add_option("--points", scan_points, "ldos grid points");

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    apply_config_file(args);
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (*cmd_ldos) {
      ChainModel model{c_ldos.eps0, c_ldos.delta};
      model.validate();
      Output out(c_ldos.output);
      if (c_ldos.format == "json")
        out.stream() << ldos_json(model, ldos_points).dump(2) << '\n';
      else
        ldos_csv(out.stream(), model, ldos_points);
    } else if (*cmd_surv) {
      ChainModel model{c_surv.eps0, c_surv.delta};
      model.validate();
      const QuadratureBudget budget{c_surv.quad_tol, 40};
      const SurvivalTrace trace =
          run_survival(model, surv_grid.build(), surv_method, surv_nsites, budget);
      Output out(c_surv.output);
      if (c_surv.format == "json")
        out.stream() << survival_json(model, trace, surv_method).dump(2) << '\n';
      else
        survival_csv(out.stream(), model, trace);
    } else if (*cmd_dec) {
      ChainModel model{c_dec.eps0, c_dec.delta};
      model.validate();
      const QuadratureBudget budget{c_dec.quad_tol, 40};
      const Decomposition d = decompose(model, dec_grid.build(), budget);
      Output out(c_dec.output);
      if (c_dec.format == "json")
        out.stream() << decompose_json(model, d).dump(2) << '\n';
      else
        decompose_csv(out.stream(), model, d);
    } else if (*cmd_zeno) {
      ChainModel model{c_zeno.eps0, c_zeno.delta};
      model.validate();
      const QuadratureBudget budget{c_zeno.quad_tol, 40};
      const ZenoReport rep = zeno_report(model, zeno_grid.build(), budget);
      Output out(c_zeno.output);
      if (c_zeno.format == "json") {
        out.stream() << zeno_json(model, rep).dump(2) << '\n';
      } else {
        zeno_csv(out.stream(), model, rep);
        Output sum(zeno_summary_out);
        sum.stream() << zeno_summary_json(rep).dump(2) << '\n';
      }
    } else if (*cmd_scan) {
      const std::vector<double> values = parse_values(scan_values);
      json points = json::array();
      for (double v : values) {
        ChainModel model{c_scan.eps0, c_scan.delta};
        if (scan_param == "delta")
          model.delta = v;
        else
          model.eps0 = v;
        json entry;
        entry[scan_param] = v;
        try {
          model.validate();
          const QuadratureBudget budget{c_scan.quad_tol, 40};
          if (scan_task == "ldos") {
            entry["result"] = ldos_json(model, scan_points);
          } else if (scan_task == "survival") {
            const SurvivalTrace trace =
                run_survival(model, scan_grid.build(), "spectral", 0, budget);
            entry["result"] = survival_json(model, trace, "spectral");
          } else if (scan_task == "decompose") {
            entry["result"] = decompose_json(model, decompose(model, scan_grid.build(), budget));
          } else {
            entry["result"] = zeno_json(model, zeno_report(model, scan_grid.build(), budget));
          }
        } catch (const std::exception& e) {
          // Regime errors at one scan point must not abort the scan.
          entry["error"] = std::string(e.what());
        }
        points.push_back(entry);
      }
      json doc{{"param", scan_param}, {"task", scan_task}, {"points", points}};
      Output out(c_scan.output);
      out.stream() << doc.dump(2) << '\n';
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const RegimeError& e) {
    std::cerr << "regime error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
