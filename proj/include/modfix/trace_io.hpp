#pragma once

#include <string>
#include <vector>

#include "modfix/analysis.hpp"
#include "modfix/iterate.hpp"
#include "modfix/mapping.hpp"
#include "modfix/modular.hpp"

namespace modfix {

enum class OutputFormat { table, csv };

OutputFormat output_format_from_string(std::string_view name);

/// Shortest decimal string that round-trips to the same double.
std::string format_shortest(double v);

/// Fixed 6-decimal formatting; the binary-to-decimal conversion rounds
/// half to even.
std::string format_fixed6(double v);

/// Render a trace. Scalar grids get exactly the columns
/// n, f_n, Tf_n, g_n, f_next (g_n only for schemes that have it); larger
/// grids get one column per point with _i suffixes. Table mode prints 6
/// decimals; CSV prints full precision, comma-separated, LF line endings.
/// Scalars-only traces render their scalar columns instead.
std::string render_trace(const IterationTrace& trace, OutputFormat format, bool color = false);

std::string render_compare(const std::vector<CompareRow>& rows, OutputFormat format,
                           bool color = false);

std::string render_class_report(const ClassReport& report, OutputFormat format,
                                bool color = false);

std::string render_modular_report(const ModularReport& report, OutputFormat format,
                                  bool color = false);

}  // namespace modfix
