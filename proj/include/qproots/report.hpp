#pragma once

#include <algorithm>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qproots/asymptotics.hpp"
#include "qproots/integrator.hpp"
#include "qproots/rootfinder.hpp"
#include "qproots/symbols.hpp"
#include "qproots/version.hpp"

// Machine-readable reports. CSV output is byte-deterministic: every float is written in
// fixed 17-significant-digit scientific notation and rows are fully sorted before writing.

namespace qproots {

/// 17 significant digits, scientific; enough to round-trip any double identically.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

struct ReportMeta {
  std::string tool_version = kVersion;
  std::map<std::string, std::string> settings;  // effective settings, echoed for reproducibility
};

struct SpectrumReport {
  SymbolFamily family;
  std::vector<Root> roots;
  std::vector<AsymptoticPrediction> predictions;
  ReportMeta meta;

  /// Roots sorted by (n, Re, Im); predictions by (n, k).
  void sort_rows() {
    std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) {
      if (a.n != b.n) return a.n < b.n;
      if (a.lambda.real() != b.lambda.real()) return a.lambda.real() < b.lambda.real();
      return a.lambda.imag() < b.lambda.imag();
    });
    std::sort(predictions.begin(), predictions.end(),
              [](const AsymptoticPrediction& a, const AsymptoticPrediction& b) {
                if (a.n != b.n) return a.n < b.n;
                return a.k.value_or(0) < b.k.value_or(0);
              });
  }
};

namespace detail {

inline std::string optional_int_field(const std::optional<int>& v) {
  return v ? std::to_string(*v) : std::string();
}

}  // namespace detail

inline std::string to_csv(const SpectrumReport& report) {
  std::ostringstream out;
  out << "# qproots spectrum report\n";
  out << "# tool_version=" << report.meta.tool_version << "\n";
  out << "# family=" << family_token(report.family.kind) << "\n";
  out << "# h=" << format_double(report.family.h) << "\n";
  out << "# theta=" << format_double(report.family.theta) << "\n";
  for (const auto& [key, value] : report.meta.settings) {
    out << "# " << key << "=" << value << "\n";
  }
  out << "family,n,k,re,im,residual,method,certified\n";
  for (const Root& r : report.roots) {
    out << family_token(r.family.kind) << ',' << r.n << ',' << detail::optional_int_field(r.k)
        << ',' << format_double(r.lambda.real()) << ',' << format_double(r.lambda.imag()) << ','
        << format_double(r.residual) << ',' << method_token(r.method) << ','
        << (r.certified ? "true" : "false") << "\n";
  }
  out << "# predictions\n";
  out << "family,n,k,x_pred,y_pred,order_note\n";
  for (const AsymptoticPrediction& p : report.predictions) {
    out << family_token(p.family) << ',' << p.n << ',' << detail::optional_int_field(p.k) << ','
        << format_double(p.x_pred) << ',' << format_double(p.y_pred) << ',' << p.order_note
        << "\n";
  }
  return out.str();
}

inline nlohmann::json to_json(const SpectrumReport& report) {
  nlohmann::json meta{
      {"tool_version", report.meta.tool_version},
      {"family", std::string(family_token(report.family.kind))},
      {"h", report.family.h},
      {"theta", report.family.theta},
  };
  for (const auto& [key, value] : report.meta.settings) meta["settings"][key] = value;

  nlohmann::json roots = nlohmann::json::array();
  for (const Root& r : report.roots) {
    nlohmann::json row{
        {"family", std::string(family_token(r.family.kind))},
        {"n", r.n},
        {"re", r.lambda.real()},
        {"im", r.lambda.imag()},
        {"residual", r.residual},
        {"method", std::string(method_token(r.method))},
        {"certified", r.certified},
    };
    row["k"] = r.k ? nlohmann::json(*r.k) : nlohmann::json();
    roots.push_back(std::move(row));
  }

  nlohmann::json predictions = nlohmann::json::array();
  for (const AsymptoticPrediction& p : report.predictions) {
    nlohmann::json row{
        {"family", std::string(family_token(p.family))},
        {"n", p.n},
        {"x_pred", p.x_pred},
        {"y_pred", p.y_pred},
        {"order_note", p.order_note},
    };
    row["k"] = p.k ? nlohmann::json(*p.k) : nlohmann::json();
    predictions.push_back(std::move(row));
  }

  return nlohmann::json{{"meta", meta}, {"roots", roots}, {"predictions", predictions}};
}

/// Two/three-column whitespace-delimited trajectory: t value [derivative].
inline void write_trajectory(std::ostream& out, const Trajectory& traj) {
  const bool second = traj.second_order();
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    out << format_double(traj.times[i]) << ' ' << format_double(traj.values[i]);
    if (second) out << ' ' << format_double(traj.derivative_values[i]);
    out << '\n';
  }
}

}  // namespace qproots
