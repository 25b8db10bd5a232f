#include "bussgang/serialize.hpp"

#include <cmath>
#include <cstdio>

namespace bussgang {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_csv(std::ostream& out, const DataTable& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out << ',';
    out << table.columns[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << format_number(row[i]);
    }
    out << '\n';
  }
}

const char* to_string(Convention c) {
  return c == Convention::XReferenced ? "x_referenced" : "s_referenced";
}

const char* to_string(Theorem t) {
  switch (t) {
    case Theorem::T1: return "T1";
    case Theorem::T2: return "T2";
    default: return "T3";
  }
}

namespace {

// JSON has no inf/nan literals; emit them as strings so reports stay parsable
ordered_json json_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace

ordered_json to_json(const BussgangCoefficients& c) {
  return {{"alpha", json_number(c.alpha)},
          {"gamma", json_number(c.gamma)},
          {"convention", to_string(c.convention)},
          {"reference_power", json_number(c.reference_power)}};
}

ordered_json to_json(const SdnrReport& r) {
  return {{"sdnr_linear", json_number(r.sdnr_linear)},
          {"sdnr_db", json_number(r.sdnr_db)},
          {"infinite", r.infinite},
          {"coefficients", to_json(r.coefficients)},
          {"theorem_used", to_string(r.theorem_used)},
          {"distortion_power", json_number(r.distortion_power)}};
}

ordered_json to_json(const McEstimate& e) {
  return {{"value", json_number(e.value)},
          {"standard_error", json_number(e.standard_error)},
          {"n_samples", e.n_samples},
          {"seed", e.seed}};
}

ordered_json to_json(const McReport& r) {
  return {{"alpha_s_hat", to_json(r.alpha_s_hat)},
          {"gamma_s_hat", to_json(r.gamma_s_hat)},
          {"sdnr_hat", to_json(r.sdnr_hat)},
          {"distortion_ratio_hat", to_json(r.distortion_ratio_hat)},
          {"distortion_signal_correlation", to_json(r.distortion_signal_correlation)},
          {"sdnr_infinite", r.sdnr_infinite}};
}

ordered_json to_json(const BerResult& r) {
  return {{"error_count", r.error_count},
          {"n_samples", r.n_samples},
          {"ber", json_number(r.ber)},
          {"seed", r.seed},
          {"quantizer_enabled", r.quantizer_enabled}};
}

ordered_json to_json(const SweepResult& r) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"delta", json_number(row.delta)},
                    {"alpha_s", json_number(row.alpha_s)},
                    {"gamma_s", json_number(row.gamma_s)},
                    {"sdnr_linear", json_number(row.sdnr_linear)},
                    {"sdnr_db", json_number(row.sdnr_db)},
                    {"ok", row.ok}});
  return {{"config", {{"levels", r.levels}, {"signal", r.signal}, {"sigma_n", json_number(r.sigma_n)}}},
          {"rows", std::move(rows)},
          {"optimum",
           {{"delta_star", json_number(r.optimum.delta_star)},
            {"sdnr_star", json_number(r.optimum.sdnr_star)},
            {"at_boundary", r.optimum.at_boundary}}}};
}

ordered_json to_json(const DataTable& t) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : t.rows) {
    ordered_json r = ordered_json::array();
    for (double v : row) r.push_back(json_number(v));
    rows.push_back(std::move(r));
  }
  return {{"columns", t.columns}, {"rows", std::move(rows)}};
}

namespace {

void flatten(const ordered_json& node, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>& out) {
  if (node.is_object()) {
    for (const auto& [key, value] : node.items())
      flatten(value, prefix.empty() ? key : prefix + "." + key, out);
    return;
  }
  if (node.is_array()) return;  // row data has its own CSV form
  std::string text;
  if (node.is_number_float())
    text = format_number(node.get<double>());
  else if (node.is_boolean())
    text = node.get<bool>() ? "true" : "false";
  else if (node.is_string())
    text = node.get<std::string>();
  else
    text = node.dump();
  out.emplace_back(prefix, text);
}

}  // namespace

void write_csv(std::ostream& out, const ordered_json& report) {
  std::vector<std::pair<std::string, std::string>> cells;
  flatten(report, "", cells);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << cells[i].first;
  }
  out << '\n';
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << cells[i].second;
  }
  out << '\n';
}

}  // namespace bussgang
