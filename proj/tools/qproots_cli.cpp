// qproots command-line front end: machine-readable spectra, certification reports,
// asymptotic comparison tables, trajectory export, and stability-window checks.
//
// Exit codes: 0 success, 1 usage error, 2 certification failure / nonempty window,
// 3 numeric error.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qproots/qproots.hpp"

namespace {

using nlohmann::json;
using namespace qproots;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Settings {
  int boundary_samples = 512;
  int rouche_samples = 2048;
  double newton_tol = 1e-12;
};

std::vector<std::string> split(const std::string& s, char delim) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, delim)) parts.push_back(item);
  return parts;
}

double parse_double(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string("cannot parse ") + what + " from '" + s + "'");
  }
}

// "a:b" is an inclusive linear range; "a:b:log" is decade-spaced (a, 10a, 100a, ... <= b).
std::vector<int> parse_n_range(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 2 && parts.size() != 3) {
    throw UsageError("--n-range must be a:b or a:b:log");
  }
  long a = 0, b = 0;
  try {
    a = std::stol(parts[0]);
    b = std::stol(parts[1]);
  } catch (const std::exception&) {
    throw UsageError("--n-range endpoints must be integers");
  }
  if (a < 1 || b < a) throw UsageError("--n-range requires 1 <= a <= b");
  std::vector<int> ns;
  if (parts.size() == 3) {
    if (parts[2] != "log") throw UsageError("--n-range third field must be 'log'");
    for (long n = a; n <= b; n *= 10) ns.push_back(static_cast<int>(n));
  } else {
    if (b - a > 1000000) throw UsageError("--n-range too large");
    for (long n = a; n <= b; ++n) ns.push_back(static_cast<int>(n));
  }
  return ns;
}

Rectangle parse_box(const std::string& spec) {
  const auto parts = split(spec, ',');
  if (parts.size() != 4) throw UsageError("--box must be x_min,x_max,y_min,y_max");
  Rectangle r{parse_double(parts[0], "box"), parse_double(parts[1], "box"),
              parse_double(parts[2], "box"), parse_double(parts[3], "box")};
  if (!(r.x_min < r.x_max && r.y_min < r.y_max)) throw UsageError("--box must have positive area");
  return r;
}

HistoryFunction parse_history_function(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "constant") {
    return HistoryFunction::constant(parse_double(args, "history constant"));
  }
  if (kind == "sin") {
    const auto parts = split(args, ',');
    if (parts.size() != 3) throw UsageError("sin history needs amplitude,frequency,phase");
    return HistoryFunction::sinusoid(parse_double(parts[0], "amplitude"),
                                     parse_double(parts[1], "frequency"),
                                     parse_double(parts[2], "phase"));
  }
  if (kind == "poly") {
    std::vector<double> cs;
    for (const auto& p : split(args, ',')) cs.push_back(parse_double(p, "poly coefficient"));
    if (cs.empty()) throw UsageError("poly history needs at least one coefficient");
    return HistoryFunction::polynomial(std::move(cs));
  }
  throw UsageError("history must be constant:V, sin:A,F,P or poly:c0,c1,...");
}

Family require_family(const std::string& token) {
  const auto fam = parse_family(token);
  if (!fam) throw UsageError("unknown family token '" + token + "'");
  return *fam;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!key.empty()) kv[key] = value;
  }
  return kv;
}

void apply_config(const std::map<std::string, std::string>& kv, Settings& settings,
                  bool samples_from_flag, bool rouche_from_flag, bool tol_from_flag) {
  if (auto it = kv.find("boundary_samples"); it != kv.end() && !samples_from_flag) {
    settings.boundary_samples = static_cast<int>(parse_double(it->second, "boundary_samples"));
  }
  if (auto it = kv.find("rouche_samples"); it != kv.end() && !rouche_from_flag) {
    settings.rouche_samples = static_cast<int>(parse_double(it->second, "rouche_samples"));
  }
  if (auto it = kv.find("newton_tol"); it != kv.end() && !tol_from_flag) {
    settings.newton_tol = parse_double(it->second, "newton_tol");
  }
}

std::map<std::string, std::string> settings_echo(const Settings& s) {
  return {
      {"boundary_samples", std::to_string(s.boundary_samples)},
      {"rouche_samples", std::to_string(s.rouche_samples)},
      {"newton_tol", format_double(s.newton_tol)},
  };
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << contents;
}

// Generic row-based CSV/JSON report used by certify, asymptote and stablecheck.
struct TableReport {
  std::string title;
  std::map<std::string, std::string> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv_text() const {
    std::ostringstream out;
    out << "# qproots " << title << " report\n";
    out << "# tool_version=" << kVersion << "\n";
    for (const auto& [k, v] : meta) out << "# " << k << "=" << v << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) {
      out << columns[i] << (i + 1 < columns.size() ? "," : "");
    }
    out << "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        out << row[i] << (i + 1 < row.size() ? "," : "");
      }
      out << "\n";
    }
    return out.str();
  }

  json to_json_value() const {
    json meta_json{{"tool_version", kVersion}};
    for (const auto& [k, v] : meta) meta_json[k] = v;
    json rows_json = json::array();
    for (const auto& row : rows) {
      json r;
      for (std::size_t i = 0; i < row.size() && i < columns.size(); ++i) r[columns[i]] = row[i];
      rows_json.push_back(std::move(r));
    }
    return json{{"meta", meta_json}, {"rows", rows_json}};
  }
};

void emit_table(const TableReport& table, const std::string& out_prefix,
                const std::string& format) {
  if (format == "csv" || format == "both") write_file(out_prefix + ".csv", table.to_csv_text());
  if (format == "json" || format == "both") {
    write_file(out_prefix + ".json", table.to_json_value().dump(2) + "\n");
  }
}

// ---------------------------------------------------------------------------
// spectrum
// ---------------------------------------------------------------------------

struct SpectrumArgs {
  std::string family_token;
  int n = 0;
  std::string n_range;
  std::string box_spec;
  double h = 1.0;
  double theta = 2.0;
  std::string format = "both";
  std::string out_prefix = "spectrum";
};

std::vector<int> resolve_ns(int n, const std::string& n_range) {
  if (n > 0 && !n_range.empty()) throw UsageError("give either --n or --n-range, not both");
  if (n > 0) return {n};
  if (!n_range.empty()) return parse_n_range(n_range);
  throw UsageError("one of --n or --n-range is required");
}

int run_spectrum(const SpectrumArgs& args, const Settings& settings) {
  const Family kind = require_family(args.family_token);
  const SymbolFamily family(kind, args.h, args.theta);
  const std::vector<int> ns = resolve_ns(args.n, args.n_range);

  std::optional<Rectangle> box;
  if (!args.box_spec.empty()) box = parse_box(args.box_spec);
  if (kind != Family::MaxwellCattaneo && !box) {
    throw UsageError("--box is required for delay families");
  }

  SpectrumReport report;
  report.family = family;
  report.meta.settings = settings_echo(settings);
  if (box) report.meta.settings["box"] = args.box_spec;

  for (int n : ns) {
    const Mode mode(n, args.theta);
    if (kind == Family::MaxwellCattaneo) {
      const auto [plus, minus] = mc_roots(n);
      for (Complex lambda : {minus, plus}) {
        if (box && !(lambda.real() >= box->x_min && lambda.real() <= box->x_max &&
                     lambda.imag() >= box->y_min && lambda.imag() <= box->y_max)) {
          continue;
        }
        report.roots.push_back(Root{family, n, std::nullopt, lambda,
                                    relative_residual(family, mode, lambda),
                                    RootMethod::closed_form, false, std::nullopt});
      }
    } else {
      auto roots = find_roots(family, mode, *box, settings.newton_tol, settings.boundary_samples);
      report.roots.insert(report.roots.end(), roots.begin(), roots.end());
    }

    if (kind == Family::ParabolicDelay && n >= 2) {
      report.predictions.push_back(predict_parabolic(n));
    } else if (kind == Family::HyperbolicDelay && n >= 6) {
      report.predictions.push_back(predict_hyperbolic(n));
    } else if (kind == Family::PerturbedHyperbolic && n >= 3) {
      const auto adm = admissible_indices(n);
      if (!adm.empty() && adm.back().n == n) {
        const double x = std::log(static_cast<double>(n)) - std::log(std::log(static_cast<double>(n)));
        report.predictions.push_back(AsymptoticPrediction{
            Family::PerturbedHyperbolic, n, std::nullopt, x, n + 0.5,
            "leading order x = ln n - ln ln n; y placed at the (n; n+1) bracket midpoint"});
      }
    }
  }

  report.sort_rows();
  if (args.format == "csv" || args.format == "both") {
    write_file(args.out_prefix + ".csv", to_csv(report));
  }
  if (args.format == "json" || args.format == "both") {
    write_file(args.out_prefix + ".json", to_json(report).dump(2) + "\n");
  }
  std::cout << "spectrum: " << report.roots.size() << " root(s), " << report.predictions.size()
            << " prediction(s) -> " << args.out_prefix << ".{csv,json}\n";
  return 0;
}

// ---------------------------------------------------------------------------
// certify
// ---------------------------------------------------------------------------

struct CertifyArgs {
  int b = 0;
  int n = 0;
  std::string n_range;
  std::string format = "both";
  std::string out_prefix = "certify";
};

int run_certify(const CertifyArgs& args, const Settings& settings) {
  if (args.b != 1 && args.b != 2) throw UsageError("--b must be 1 or 2");
  const std::vector<int> ns = resolve_ns(args.n, args.n_range);

  TableReport table;
  table.title = "certify";
  table.meta = settings_echo(settings);
  table.meta["b"] = std::to_string(args.b);
  table.columns = {"b", "n", "x", "y", "margin", "residual", "status"};

  bool any_failed = false;
  for (int n : ns) {
    const Mode mode(n, 2.0);
    std::vector<std::string> row{std::to_string(args.b), std::to_string(n), "", "", "", "", ""};
    try {
      const Root root = certify_unstable(args.b, mode, settings.rouche_samples,
                                         settings.boundary_samples);
      row[2] = format_double(root.lambda.real());
      row[3] = format_double(root.lambda.imag());
      row[4] = format_double(*root.rouche_margin);
      row[5] = format_double(root.residual);
      row[6] = "certified";
    } catch (const MarginNonPositiveError& e) {
      row[4] = format_double(e.margin);
      row[6] = "margin-non-positive";
      any_failed = true;
    } catch (const WindingMismatchError& e) {
      row[6] = "winding-mismatch(" + std::to_string(e.count) + ")";
      any_failed = true;
    }
    table.rows.push_back(std::move(row));
  }

  emit_table(table, args.out_prefix, args.format);
  for (const auto& row : table.rows) {
    std::cout << "b=" << row[0] << " n=" << row[1] << " status=" << row[6];
    if (!row[2].empty()) std::cout << " x=" << row[2] << " y=" << row[3];
    if (!row[4].empty()) std::cout << " margin=" << row[4];
    std::cout << "\n";
  }
  return any_failed ? 2 : 0;
}

// ---------------------------------------------------------------------------
// asymptote
// ---------------------------------------------------------------------------

struct AsymptoteArgs {
  std::string family_token;
  int n = 0;
  std::string n_range;
  std::string format = "both";
  std::string out_prefix = "asymptote";
};

int run_asymptote(const AsymptoteArgs& args, const Settings& settings) {
  const Family kind = require_family(args.family_token);
  const std::vector<int> ns = resolve_ns(args.n, args.n_range);

  TableReport table;
  table.title = "asymptote";
  table.meta = settings_echo(settings);
  table.meta["family"] = args.family_token;
  table.columns = {"family", "n",       "x_pred", "x_found", "ratio",
                   "abs_gap", "y_found", "in_interval", "source"};

  std::size_t produced = 0;
  auto add_row = [&](int n, double x_pred, std::optional<Complex> found,
                     const std::string& in_interval, const std::string& source) {
    std::vector<std::string> row{args.family_token, std::to_string(n), format_double(x_pred),
                                 "", "", "", "", in_interval, source};
    if (found) {
      row[3] = format_double(found->real());
      row[4] = format_double(found->real() / x_pred);
      row[5] = format_double(std::abs(found->real() - x_pred));
      row[6] = format_double(found->imag());
      ++produced;
    }
    table.rows.push_back(std::move(row));
  };

  if (kind == Family::ParabolicDelay || kind == Family::HyperbolicDelay) {
    const int b = kind == Family::ParabolicDelay ? 1 : 2;
    const SymbolFamily family(kind, 1.0, 2.0);
    for (int n : ns) {
      AsymptoticPrediction pred;
      try {
        pred = b == 1 ? predict_parabolic(n) : predict_hyperbolic(n);
      } catch (const DomainError&) {
        add_row(n, 0.0, std::nullopt, "", "below-prediction-domain");
        continue;
      }
      const Mode mode(n, 2.0);
      try {
        const Root root = certify_unstable(b, mode, settings.rouche_samples,
                                           settings.boundary_samples);
        add_row(n, pred.x_pred, root.lambda, "", "certified");
        continue;
      } catch (const Error&) {
        // below the empirical certification threshold; fall back to the prediction seed
      }
      const NewtonResult nr =
          newton_refine(family, mode, Complex(pred.x_pred, pred.y_pred), settings.newton_tol);
      if (nr.converged && nr.residual <= 1e-9 && nr.lambda.imag() > 0.0) {
        add_row(n, pred.x_pred, nr.lambda, "", "seeded-newton");
      } else {
        add_row(n, pred.x_pred, std::nullopt, "", "failed");
      }
    }
  } else if (kind == Family::PerturbedHyperbolic) {
    if (ns.empty()) throw UsageError("empty n set");
    const auto admissible = admissible_indices(ns.back());
    for (const AdmissibleIndex& idx : admissible) {
      if (idx.n < ns.front() || idx.n < 3) continue;
      if (args.n > 0 && idx.n != args.n) continue;
      const double x_pred =
          std::log(static_cast<double>(idx.n)) - std::log(std::log(static_cast<double>(idx.n)));
      try {
        const Root root = find_perturbed_root(idx);
        const bool inside = root.lambda.imag() > idx.n && root.lambda.imag() < idx.n + 1;
        add_row(idx.n, x_pred, root.lambda, inside ? "true" : "false", "bisection-newton");
      } catch (const Error&) {
        add_row(idx.n, x_pred, std::nullopt, "false", "failed");
      }
    }
  } else {
    throw UsageError("asymptote supports parabolic-delay, hyperbolic-delay, perturbed-hyperbolic");
  }

  emit_table(table, args.out_prefix, args.format);
  std::cout << "asymptote: " << produced << "/" << table.rows.size() << " rows with roots -> "
            << args.out_prefix << ".{csv,json}\n";
  return table.rows.empty() || produced > 0 ? 0 : 3;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string family_token;
  int n = 0;
  double h = 1.0;
  double theta = 2.0;
  double t_end = 0.0;  // 0 means "60 h"
  double dt = 0.0;     // 0 means "h / 100"
  std::string history = "constant:1";
  std::string derivative_history = "constant:0";
  double window_fraction = 1.0;
  std::string out_path = "trajectory.txt";
};

int run_simulate(const SimulateArgs& args) {
  const Family kind = require_family(args.family_token);
  if (args.n < 1) throw UsageError("--n is required and must be >= 1");
  const SymbolFamily family(kind, args.h, args.theta);
  const Mode mode(args.n, args.theta);

  HistorySpec history;
  history.value = parse_history_function(args.history);
  history.derivative = parse_history_function(args.derivative_history);

  const double t_end = args.t_end > 0.0 ? args.t_end : 60.0 * family.h;
  const double dt = args.dt > 0.0 ? args.dt : family.h / 100.0;

  const Trajectory traj = simulate_mode(family, mode, history, t_end, dt);
  std::ofstream out(args.out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + args.out_path + "'");
  write_trajectory(out, traj);

  const GrowthEstimate est = estimate_growth(traj, args.window_fraction);
  std::cout << "sigma_hat=" << format_double(est.sigma_hat)
            << " r_squared=" << format_double(est.r_squared) << " peaks_used=" << est.peaks_used
            << " window=[" << format_double(est.fit_window.first) << ","
            << format_double(est.fit_window.second) << "]"
            << " reliable=" << (est.reliable ? "true" : "false") << "\n";
  if (traj.blow_up_index) {
    std::cout << "blow_up_index=" << *traj.blow_up_index << "\n";
  }
  std::cout << "trajectory: " << traj.times.size() << " samples -> " << args.out_path << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// stablecheck
// ---------------------------------------------------------------------------

struct StablecheckArgs {
  std::string family_token = "stable-parabolic-delay";
  int n = 0;
  std::string n_range;
  std::string box_spec = "0.5,40,-200,200";
  double h = 1.0;
  double theta = 2.0;
  std::string format = "both";
  std::string out_prefix = "stablecheck";
};

int run_stablecheck(const StablecheckArgs& args, const Settings& settings) {
  const Family kind = require_family(args.family_token);
  const SymbolFamily family(kind, args.h, args.theta);
  const std::vector<int> ns = resolve_ns(args.n, args.n_range);
  const Rectangle box = parse_box(args.box_spec);

  TableReport table;
  table.title = "stablecheck";
  table.meta = settings_echo(settings);
  table.meta["family"] = args.family_token;
  table.meta["box"] = args.box_spec;
  table.columns = {"family", "n", "winding"};

  int total = 0;
  for (int n : ns) {
    const Mode mode(n, args.theta);
    const int w = winding_number(family, mode, Contour(box, settings.boundary_samples));
    total += w;
    table.rows.push_back({args.family_token, std::to_string(n), std::to_string(w)});
  }
  const bool empty = total == 0;
  table.meta["verdict"] = empty ? "EMPTY" : "NONEMPTY";

  emit_table(table, args.out_prefix, args.format);
  std::cout << "verdict: " << (empty ? "EMPTY" : "NONEMPTY") << " (" << total
            << " root(s) in the window over " << ns.size() << " mode(s))\n";
  return empty ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qproots: characteristic roots of delay quasipolynomials"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  std::string config_path;
  Settings settings;

  SpectrumArgs spectrum;
  auto* sp = app.add_subcommand("spectrum", "locate roots per mode and write a spectrum report");
  sp->add_option("--family", spectrum.family_token, "family token")->required();
  sp->add_option("--n", spectrum.n, "single mode index");
  sp->add_option("--n-range", spectrum.n_range, "a:b or a:b:log");
  sp->add_option("--box", spectrum.box_spec, "x_min,x_max,y_min,y_max search window");
  sp->add_option("--h", spectrum.h, "delay");
  sp->add_option("--theta", spectrum.theta, "coefficient exponent");
  sp->add_option("--format", spectrum.format, "csv|json|both")->check(CLI::IsMember({"csv", "json", "both"}));
  sp->add_option("--out", spectrum.out_prefix, "output path prefix");

  CertifyArgs certify;
  auto* ce = app.add_subcommand("certify", "Rouche-certify the unstable root per mode");
  ce->add_option("--b", certify.b, "1 (parabolic) or 2 (hyperbolic)")->required();
  ce->add_option("--n", certify.n, "single mode index");
  ce->add_option("--n-range", certify.n_range, "a:b or a:b:log");
  ce->add_option("--format", certify.format, "csv|json|both")->check(CLI::IsMember({"csv", "json", "both"}));
  ce->add_option("--out", certify.out_prefix, "output path prefix");

  AsymptoteArgs asymptote;
  auto* as = app.add_subcommand("asymptote", "compare found roots against leading-order predictions");
  as->add_option("--family", asymptote.family_token, "family token")->required();
  as->add_option("--n", asymptote.n, "single mode index");
  as->add_option("--n-range", asymptote.n_range, "a:b or a:b:log");
  as->add_option("--format", asymptote.format, "csv|json|both")->check(CLI::IsMember({"csv", "json", "both"}));
  as->add_option("--out", asymptote.out_prefix, "output path prefix");

  SimulateArgs simulate;
  auto* si = app.add_subcommand("simulate", "integrate a modal delay ODE and fit its growth rate");
  si->add_option("--family", simulate.family_token, "family token")->required();
  si->add_option("--n", simulate.n, "mode index")->required();
  si->add_option("--h", simulate.h, "delay");
  si->add_option("--theta", simulate.theta, "coefficient exponent");
  si->add_option("--t-end", simulate.t_end, "end time (default 60 h)");
  si->add_option("--dt", simulate.dt, "step size (default h/100)");
  si->add_option("--history", simulate.history, "constant:V | sin:A,F,P | poly:c0,c1,...");
  si->add_option("--derivative-history", simulate.derivative_history, "derivative history (second-order families)");
  si->add_option("--window-fraction", simulate.window_fraction, "trailing fit-window fraction");
  si->add_option("--out", simulate.out_path, "trajectory output path");

  StablecheckArgs stablecheck;
  auto* st = app.add_subcommand("stablecheck", "verify a window of the plane is root-free");
  st->add_option("--family", stablecheck.family_token, "family token");
  st->add_option("--n", stablecheck.n, "single mode index");
  st->add_option("--n-range", stablecheck.n_range, "a:b or a:b:log");
  st->add_option("--box", stablecheck.box_spec, "x_min,x_max,y_min,y_max window");
  st->add_option("--h", stablecheck.h, "delay");
  st->add_option("--theta", stablecheck.theta, "coefficient exponent");
  st->add_option("--format", stablecheck.format, "csv|json|both")->check(CLI::IsMember({"csv", "json", "both"}));
  st->add_option("--out", stablecheck.out_prefix, "output path prefix");

  struct SettingsOptions {
    CLI::Option* samples = nullptr;
    CLI::Option* rouche = nullptr;
    CLI::Option* tol = nullptr;
  };
  std::map<CLI::App*, SettingsOptions> settings_options;
  for (CLI::App* sub : {sp, ce, as, st}) {
    SettingsOptions so;
    so.samples = sub->add_option("--boundary-samples", settings.boundary_samples,
                                 "initial contour samples (>= 64)");
    so.rouche = sub->add_option("--rouche-samples", settings.rouche_samples,
                                "Rouche circle samples (>= 256)");
    so.tol = sub->add_option("--tol", settings.newton_tol, "Newton residual tolerance");
    sub->add_option("--config", config_path, "key=value settings file (flags override)");
    settings_options[sub] = so;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (!config_path.empty()) {
      CLI::App* active = nullptr;
      for (CLI::App* sub : {sp, ce, as, st}) {
        if (sub->parsed()) active = sub;
      }
      const SettingsOptions so = active ? settings_options[active] : SettingsOptions{};
      apply_config(parse_config_file(config_path), settings, so.samples && so.samples->count() > 0,
                   so.rouche && so.rouche->count() > 0, so.tol && so.tol->count() > 0);
    }
    if (sp->parsed()) return run_spectrum(spectrum, settings);
    if (ce->parsed()) return run_certify(certify, settings);
    if (as->parsed()) return run_asymptote(asymptote, settings);
    if (si->parsed()) return run_simulate(simulate);
    if (st->parsed()) return run_stablecheck(stablecheck, settings);
    return 1;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
