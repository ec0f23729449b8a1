#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "smalm/outer_alm.hpp"

namespace smalm::cli {

enum class OutputFormat { table, csv, json_lines };

// 4 significant digits, scientific below 1e-3.
std::string format_table_number(double v);
// Shortest text that parses back to the same double.
std::string format_csv_number(double v);

void write_table(std::ostream& os, const SolveResult& result);
void write_csv(std::ostream& os, const SolveResult& result);
void write_json_lines(std::ostream& os, const std::string& problem, const SolveResult& result);

nlohmann::json record_to_json(const IterationRecord& rec);
IterationRecord record_from_json(const nlohmann::json& j);

struct ParsedLog {
  std::vector<IterationRecord> history;
  nlohmann::json summary;
};
ParsedLog parse_json_lines(std::istream& is);

// Exit status: 0 solver terminus / all checks pass, 1 limits or failed
// checks, 2 usage errors and unknown problems.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace smalm::cli
