#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "bhsim/engine.hpp"

namespace bh::report {

/// Number formatting shared by every CSV: 12 significant digits.
std::string fmt(double value);

void write_summary_csv(std::ostream& out, const engine::RunResult& result);
void write_slots_csv(std::ostream& out, const engine::RunResult& result);
void write_comparison_csv(std::ostream& out, std::span<const engine::RunResult> results);

/// Fixed-width table for terminals.
void print_comparison_table(std::ostream& out, std::span<const engine::RunResult> results);

}  // namespace bh::report
