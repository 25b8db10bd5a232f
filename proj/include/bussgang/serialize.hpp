#pragma once

#include <ostream>
#include <string>

#include "json.hpp"

#include "bussgang/decomposition.hpp"
#include "bussgang/monte_carlo.hpp"
#include "bussgang/sweep.hpp"

namespace bussgang {

using ordered_json = nlohmann::ordered_json;

// Numeric formatting for CSV: '.' decimal separator, 12 significant digits,
// "inf"/"nan" for non-finite values. Output is byte-identical across runs for
// identical inputs.
std::string format_number(double v);

// Header row then one line per data row, LF line endings. An empty table
// yields just the header.
void write_csv(std::ostream& out, const DataTable& table);

ordered_json to_json(const BussgangCoefficients& c);
ordered_json to_json(const SdnrReport& r);
ordered_json to_json(const McEstimate& e);
ordered_json to_json(const McReport& r);
ordered_json to_json(const BerResult& r);
ordered_json to_json(const SweepResult& r);
ordered_json to_json(const DataTable& t);

// Flattened single-row CSV view of a report-like JSON object (nested keys
// joined with '.'), so every subcommand can emit either format.
void write_csv(std::ostream& out, const ordered_json& report);

const char* to_string(Convention c);
const char* to_string(Theorem t);

}  // namespace bussgang
