// qindep command-line tool: identified sets over delta sweeps, independence
// checks on propensity files, oracle verification and the figure data.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qindep/qindep.h"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

// Raised for bad user input; main maps it to exit status 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  const std::string t = trim(s);
  if (t == "inf" || t == "+inf") return INFINITY;
  if (t == "-inf") return -INFINITY;
  try {
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument(t);
    return v;
  } catch (const std::exception&) {
    throw UsageError("cannot parse " + what + " '" + s + "'");
  }
}

std::vector<double> parse_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  for (const auto& item : split(s, ',')) {
    if (!item.empty()) out.push_back(parse_double(item, what));
  }
  if (out.empty()) throw UsageError("empty " + what);
  return out;
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::abs(v) < 5e-13) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void check_status(qi_status s) {
  if (s == QI_OK) return;
  throw UsageError(qi_last_error());
}

struct ObservedDeleter {
  void operator()(qi_observed* o) const { qi_observed_free(o); }
};
struct PropensityDeleter {
  void operator()(qi_propensity* p) const { qi_propensity_free(p); }
};
struct StringDeleter {
  void operator()(char* s) const { qi_string_free(s); }
};
using ObservedPtr = std::unique_ptr<qi_observed, ObservedDeleter>;
using PropensityPtr = std::unique_ptr<qi_propensity, PropensityDeleter>;
using OwnedString = std::unique_ptr<char, StringDeleter>;

struct DgpParams {
  double gamma = 0.1;
  double pi = 1.0;
  double p1 = 0.5;
};

DgpParams parse_dgp(const std::string& text) {
  DgpParams d;
  if (trim(text) == "baseline") return d;
  for (const auto& kv : split(text, ',')) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw UsageError("bad dgp entry '" + kv + "'");
    const std::string key = trim(kv.substr(0, eq));
    const double v = parse_double(kv.substr(eq + 1), "dgp " + key);
    if (key == "gamma") {
      d.gamma = v;
    } else if (key == "pi") {
      d.pi = v;
    } else if (key == "p1") {
      d.p1 = v;
    } else {
      throw UsageError("unknown dgp parameter '" + key + "'");
    }
  }
  return d;
}

// "a,b,c" or "start:stop:count".
std::vector<double> parse_delta_grid(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw UsageError("delta grid must be start:stop:count");
    const double start = parse_double(parts[0], "delta start");
    const double stop = parse_double(parts[1], "delta stop");
    const double count = parse_double(parts[2], "delta count");
    if (!(count >= 1.0) || count != std::floor(count)) {
      throw UsageError("delta count must be a positive integer");
    }
    const int n = static_cast<int>(count);
    for (int i = 0; i < n; ++i) {
      out.push_back(n == 1 ? start : start + (stop - start) * i / (n - 1));
    }
  } else {
    out = parse_list(text, "delta grid");
  }
  for (double d : out) {
    if (!(d >= 0.0 && d <= 0.5)) throw UsageError("delta values must lie in [0, 0.5]");
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct SweepRow {
  double delta;
  std::string param;
  std::string spec;
  double lo;
  double hi;
};

// T = U = [delta, 1 - delta]; delta = 0 is full independence.
qi_spec sweep_spec(const std::string& family, double delta) {
  qi_spec s{};
  if (delta == 0.0) {
    s.kind = QI_SPEC_FULL;
  } else {
    s.kind = family == "T" ? QI_SPEC_T_INTERVAL : QI_SPEC_U_INTERVAL;
    s.a = delta;
    s.b = 1.0 - delta;
  }
  return s;
}

std::vector<SweepRow> sweep(const qi_observed* obs,
                            const std::vector<double>& deltas,
                            const std::vector<std::string>& params,
                            const std::vector<std::string>& specs, double q,
                            std::set<std::string>& warnings) {
  std::vector<SweepRow> rows;
  for (double delta : deltas) {
    for (const auto& param : params) {
      for (const auto& family : specs) {
        const qi_spec s = sweep_spec(family, delta);
        qi_interval iv{};
        char* warning = nullptr;
        check_status(qi_identified_set(
            obs, param == "ATT" ? QI_PARAM_ATT : QI_PARAM_QTT, q, &s, &iv,
            &warning));
        if (warning) {
          warnings.insert(warning);
          qi_string_free(warning);
        }
        rows.push_back({delta, param, family, iv.lo, iv.hi});
      }
    }
  }
  return rows;
}

void write_rows(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "delta,param,spec,lo,hi\n";
  for (const auto& r : rows) {
    out << format_number(r.delta) << ',' << r.param << ',' << r.spec << ','
        << format_number(r.lo) << ',' << format_number(r.hi) << '\n';
  }
}

ObservedPtr load_dgp(const DgpParams& d, std::size_t n_knots) {
  qi_observed* raw = nullptr;
  check_status(qi_observed_from_dgp(d.gamma, d.pi, d.p1, n_knots, &raw));
  return ObservedPtr(raw);
}

// ---------------------------------------------------------------- bounds

struct BoundsOptions {
  std::string config;
  std::string dgp = "baseline";
  std::string csv;
  std::string delta_grid = "0:0.5:101";
  std::string params = "ATT,QTT";
  std::string specs = "T,U";
  double q = 0.5;
  std::size_t n_knots = 4096;
  std::size_t n_cells = 1000;
  std::string out = "-";
  std::string y0_support;
};

void apply_config_file(const std::string& path, BoundsOptions& o,
                       const std::set<std::string>& overridden) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(line_no) +
                       ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    std::replace(key.begin(), key.end(), '-', '_');
    const std::string value = trim(line.substr(eq + 1));
    if (overridden.count(key)) continue;
    if (key == "dgp") {
      o.dgp = value;
    } else if (key == "csv") {
      o.csv = value;
    } else if (key == "delta_grid") {
      o.delta_grid = value;
    } else if (key == "param") {
      o.params = value;
    } else if (key == "spec") {
      o.specs = value;
    } else if (key == "q") {
      o.q = parse_double(value, "q");
    } else if (key == "n_knots") {
      o.n_knots = static_cast<std::size_t>(parse_double(value, "n_knots"));
    } else if (key == "n_cells") {
      o.n_cells = static_cast<std::size_t>(parse_double(value, "n_cells"));
    } else if (key == "out") {
      o.out = value;
    } else if (key == "y0_support") {
      o.y0_support = value;
    } else {
      throw UsageError(path + ":" + std::to_string(line_no) +
                       ": unknown key '" + key + "'");
    }
  }
}

std::vector<std::string> parse_names(const std::string& text,
                                     const std::set<std::string>& allowed,
                                     const std::string& what) {
  std::vector<std::string> out;
  for (auto item : split(text, ',')) {
    if (item.empty()) continue;
    std::transform(item.begin(), item.end(), item.begin(), ::toupper);
    if (item == "BOTH") return {allowed.begin(), allowed.end()};
    if (!allowed.count(item)) throw UsageError("unknown " + what + " '" + item + "'");
    if (std::find(out.begin(), out.end(), item) == out.end()) out.push_back(item);
  }
  if (out.empty()) throw UsageError("no " + what + " selected");
  return out;
}

int run_bounds(const BoundsOptions& o) {
  if (!(o.q > 0.0 && o.q < 1.0)) throw UsageError("q must lie in (0, 1)");
  if (o.n_cells == 0) throw UsageError("n_cells must be positive");
  const auto deltas = parse_delta_grid(o.delta_grid);
  const auto params = parse_names(o.params, {"ATT", "QTT"}, "param");
  const auto specs = parse_names(o.specs, {"T", "U"}, "spec");

  ObservedPtr obs;
  if (!o.csv.empty()) {
    qi_observed* raw = nullptr;
    check_status(qi_observed_from_csv(o.csv.c_str(), &raw));
    obs.reset(raw);
  } else {
    obs = load_dgp(parse_dgp(o.dgp), o.n_knots);
  }
  if (!o.y0_support.empty()) {
    const auto sup = parse_list(o.y0_support, "y0 support");
    if (sup.size() != 2) throw UsageError("y0 support must be lo,hi");
    check_status(qi_observed_set_support0(obs.get(), sup[0], sup[1]));
  }

  std::set<std::string> warnings;
  const auto rows = sweep(obs.get(), deltas, params, specs, o.q, warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';

  if (o.out == "-") {
    write_rows(std::cout, rows);
  } else {
    std::ofstream f(o.out);
    if (!f) throw UsageError("cannot write " + o.out);
    write_rows(f, rows);
  }
  return kExitPass;
}

// ------------------------------------------------------ check / verify

struct SpecOptions {
  std::string kind;
  std::string tau;
  std::string interval;
  double tolerance = 0.0;
};

struct SpecHolder {
  qi_spec spec{};
  std::vector<double> points;
};

SpecHolder build_spec(const SpecOptions& o) {
  SpecHolder h;
  std::string kind = o.kind;
  std::transform(kind.begin(), kind.end(), kind.begin(), ::tolower);
  std::optional<std::pair<double, double>> interval;
  if (!o.interval.empty()) {
    const auto ab = parse_list(o.interval, "interval");
    if (ab.size() != 2) throw UsageError("interval must be a,b");
    interval = std::make_pair(ab[0], ab[1]);
  }
  h.spec.tolerance = o.tolerance;
  if (kind == "t") {
    if (interval && !o.tau.empty()) {
      throw UsageError("give either --tau or --interval for T, not both");
    }
    if (interval) {
      h.spec.kind = QI_SPEC_T_INTERVAL;
      h.spec.a = interval->first;
      h.spec.b = interval->second;
    } else if (!o.tau.empty()) {
      h.points = parse_list(o.tau, "tau");
      h.spec.kind = QI_SPEC_T_POINTS;
    } else {
      throw UsageError("T needs --tau or --interval");
    }
  } else if (kind == "u") {
    if (!interval) throw UsageError("U needs --interval");
    h.spec.kind = QI_SPEC_U_INTERVAL;
    h.spec.a = interval->first;
    h.spec.b = interval->second;
  } else if (kind == "mean") {
    h.spec.kind = QI_SPEC_MEAN;
  } else if (kind == "full") {
    h.spec.kind = QI_SPEC_FULL;
  } else {
    throw UsageError("unknown spec '" + o.kind + "'");
  }
  h.spec.points = h.points.data();
  h.spec.n_points = h.points.size();
  return h;
}

int run_check(const std::string& file, const SpecOptions& so) {
  std::ifstream in(file);
  if (!in) throw UsageError("cannot open " + file);
  std::stringstream buf;
  buf << in.rdbuf();
  qi_propensity* raw = nullptr;
  check_status(qi_propensity_from_json(buf.str().c_str(), &raw));
  PropensityPtr p(raw);
  const SpecHolder h = build_spec(so);
  int pass = 0;
  char* report = nullptr;
  check_status(qi_check(p.get(), &h.spec, &pass, &report));
  OwnedString owned(report);
  std::cout << owned.get() << '\n';
  return pass ? kExitPass : kExitFail;
}

int run_verify(const SpecOptions& so, double p_x, std::size_t n_cells) {
  const SpecHolder h = build_spec(so);
  int pass = 0;
  char* report = nullptr;
  check_status(qi_verify(&h.spec, p_x, n_cells, &pass, &report));
  OwnedString owned(report);
  std::cout << owned.get() << '\n';
  return pass ? kExitPass : kExitFail;
}

// ------------------------------------------------------ figure data

int run_figure4(const std::string& dir, std::size_t n_knots) {
  std::filesystem::create_directories(dir);
  const ObservedPtr obs = load_dgp(DgpParams{}, n_knots);
  std::vector<double> deltas;
  for (int i = 0; i <= 100; ++i) deltas.push_back(0.005 * i);
  std::set<std::string> warnings;
  const auto qtt = sweep(obs.get(), deltas, {"QTT"}, {"T", "U"}, 0.5, warnings);
  const auto att = sweep(obs.get(), deltas, {"ATT"}, {"T", "U"}, 0.5, warnings);
  for (const auto& [name, rows] :
       {std::pair{"figure4_qtt.csv", &qtt}, std::pair{"figure4_att.csv", &att}}) {
    const auto path = std::filesystem::path(dir) / name;
    std::ofstream f(path);
    if (!f) throw UsageError("cannot write " + path.string());
    write_rows(f, *rows);
  }

  std::vector<std::string> failures;
  auto expect = [&](const SweepRow& r, double lo, double hi) {
    if (std::abs(r.lo - lo) > 0.01 || std::abs(r.hi - hi) > 0.01) {
      failures.push_back(r.param + " " + r.spec + " delta=" +
                         format_number(r.delta) + ": got [" +
                         format_number(r.lo) + ", " + format_number(r.hi) +
                         "], expected [" + format_number(lo) + ", " +
                         format_number(hi) + "]");
    }
  };
  for (const auto& r : att) {
    if (r.delta != 0.5) continue;
    if (r.spec == "T") expect(r, -1.0, 3.0);
    if (r.spec == "U") expect(r, -3.0, 5.0);
  }
  for (const auto& r : qtt) {
    if (r.spec == "U" && r.delta >= 0.25) expect(r, -3.0, 5.0);
    if (r.spec == "T") expect(r, 1.0, 1.0);
  }
  if (!failures.empty()) {
    for (const auto& f : failures) std::cerr << "anchor mismatch: " << f << '\n';
    return kExitFail;
  }
  std::cout << "wrote " << (std::filesystem::path(dir) / "figure4_qtt.csv").string()
            << " and " << (std::filesystem::path(dir) / "figure4_att.csv").string()
            << "; all anchors hold\n";
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Identified sets for treatment effects under quantile "
               "independence relaxations"};
  app.require_subcommand(1);

  BoundsOptions bo;
  auto* bounds = app.add_subcommand("bounds", "Identified sets over a delta sweep");
  bounds->add_option("--config", bo.config, "key=value configuration file");
  bounds->add_option("--dgp", bo.dgp,
                     "'baseline' or gamma=..,pi=..,p1=.. for the truncated-normal model");
  bounds->add_option("--csv", bo.csv, "sample file with header y,x");
  bounds->add_option("--delta-grid", bo.delta_grid,
                     "comma list or start:stop:count of delta in [0, 0.5]");
  bounds->add_option("--param", bo.params, "ATT, QTT or both");
  bounds->add_option("--spec", bo.specs, "T, U or both");
  bounds->add_option("--q", bo.q, "quantile level for QTT");
  bounds->add_option("--n-knots", bo.n_knots, "tabulation knots for the model");
  bounds->add_option("--n-cells", bo.n_cells, "grid resolution");
  bounds->add_option("--out", bo.out, "output CSV ('-' for stdout)");
  bounds->add_option("--y0-support", bo.y0_support,
                     "declared support lo,hi of Y given X=0 (may be inf)");

  std::string prop_file;
  SpecOptions check_spec;
  auto* check = app.add_subcommand("check", "Check a propensity file against a spec");
  check->add_option("--propensity", prop_file, "JSON {\"n\": N, \"values\": [...]}")
      ->required();
  check->add_option("--spec", check_spec.kind, "T, U, mean or full")->required();
  check->add_option("--tau", check_spec.tau, "comma list of T points");
  check->add_option("--interval", check_spec.interval, "a,b");
  check->add_option("--tolerance", check_spec.tolerance, "override the default tolerance");

  SpecOptions verify_spec;
  double p_x = 0.5;
  std::size_t verify_cells = 1000;
  auto* verify = app.add_subcommand("verify", "Certify closed-form cdf bounds with the oracle");
  verify->add_option("--spec", verify_spec.kind, "T, U or full")->required();
  verify->add_option("--tau", verify_spec.tau, "a single T point");
  verify->add_option("--interval", verify_spec.interval, "a,b");
  verify->add_option("--px", p_x, "P(X = x)");
  verify->add_option("--n-cells", verify_cells, "grid resolution (>= 100)");

  std::string fig_dir = ".";
  std::size_t fig_knots = 4096;
  auto* fig = app.add_subcommand("reproduce-figure4",
                                 "Write QTT(0.5) and ATT sweeps and check the anchors");
  fig->add_option("--out-dir", fig_dir, "output directory");
  fig->add_option("--n-knots", fig_knots, "tabulation knots for the model");

  std::string sim_dgp = "baseline";
  std::size_t sim_n = 10000;
  std::uint64_t sim_seed = 1;
  std::string sim_out;
  auto* sim = app.add_subcommand("simulate", "Draw a y,x sample from the model");
  sim->add_option("--dgp", sim_dgp, "'baseline' or gamma=..,pi=..,p1=..");
  sim->add_option("--n", sim_n, "number of draws");
  sim->add_option("--seed", sim_seed, "generator seed");
  sim->add_option("--out", sim_out, "output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*bounds) {
      if (!bo.config.empty()) {
        std::set<std::string> overridden;
        for (const auto* opt : bounds->get_options()) {
          if (opt->count() == 0) continue;
          std::string name = opt->get_name();
          name.erase(0, name.find_first_not_of('-'));
          std::replace(name.begin(), name.end(), '-', '_');
          overridden.insert(name);
        }
        apply_config_file(bo.config, bo, overridden);
      }
      if (!bo.csv.empty() && bounds->get_option("--dgp")->count() > 0) {
        throw UsageError("give either --dgp or --csv, not both");
      }
      return run_bounds(bo);
    }
    if (*check) return run_check(prop_file, check_spec);
    if (*verify) return run_verify(verify_spec, p_x, verify_cells);
    if (*fig) return run_figure4(fig_dir, fig_knots);
    if (*sim) {
      const DgpParams d = parse_dgp(sim_dgp);
      check_status(qi_simulate_dgp(d.gamma, d.pi, d.p1, sim_n, sim_seed,
                                   sim_out.c_str()));
      return kExitPass;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
