#pragma once

#include <string>

#include "solvfill/filling.hpp"

namespace solvfill {

// Structured-text formats, schema versioned. Floats are printed with 17
// significant digits so emitted files and reports are diff-stable and
// round-trip exactly.

ManifoldSpec parse_spec(const std::string& text, const std::string& origin = "<spec>");
ManifoldSpec read_spec_file(const std::string& path);
std::string write_spec(const ManifoldSpec& spec);

Chain parse_cycle(const std::string& text, const ManifoldSpec& spec,
                  const std::string& origin = "<cycle>");
Chain read_cycle_file(const std::string& path, const ManifoldSpec& spec);
std::string write_cycle(const Chain& chain, const std::string& name = "cycle");

std::string validation_report_text(const ManifoldSpec& spec, const ValidationReport& rep);
std::string decomposition_report_text(const ManifoldSpec& spec, const Decomposition& dec,
                                      std::uint64_t seed);
std::string filling_report_text(const ManifoldSpec& spec, const FillingReport& rep,
                                const FillConfig& config);
std::string sweep_csv(const SweepResult& res);
std::string sweep_summary_text(const SweepResult& res);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace solvfill
