#include "modfix/trace_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <string>
#include <vector>

namespace modfix {

OutputFormat output_format_from_string(std::string_view name) {
    if (name == "table") return OutputFormat::table;
    if (name == "csv") return OutputFormat::csv;
    throw ParameterError("unknown output format '" + std::string(name) +
                         "' (expected table or csv)");
}

std::string format_shortest(double v) {
    char buf[40];
    const auto result = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, result.ptr);
}

std::string format_fixed6(double v) {
    char buf[48];
    const int len = std::snprintf(buf, sizeof(buf), "%.6f", v);
    return std::string(buf, buf + len);
}

namespace {

constexpr const char* kBold = "\033[1m";
constexpr const char* kReset = "\033[0m";

// Rows of already-formatted cells -> aligned text or CSV.
std::string render_cells(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows, OutputFormat format,
                         bool color) {
    std::string out;
    if (format == OutputFormat::csv) {
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (c) out += ',';
            out += header[c];
        }
        out += '\n';
        for (const auto& row : rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (c) out += ',';
                out += row[c];
            }
            out += '\n';
        }
        return out;
    }

    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) {
        width[c] = header[c].size();
    }
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            width[c] = std::max(width[c], row[c].size());
        }
    }
    const auto emit_row = [&](const std::vector<std::string>& row) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += "  ";
            out.append(width[c] - row[c].size(), ' ');
            out += row[c];
        }
        out += '\n';
    };
    if (color) out += kBold;
    emit_row(header);
    if (color) {
        // the reset lands after the trailing newline; reinsert before it
        out.insert(out.size() - 1, kReset);
    }
    for (const auto& row : rows) {
        emit_row(row);
    }
    return out;
}

void append_vector_columns(std::vector<std::string>& header, const char* base,
                           std::size_t points) {
    if (points == 1) {
        header.emplace_back(base);
        return;
    }
    for (std::size_t i = 0; i < points; ++i) {
        header.push_back(std::string(base) + "_" + std::to_string(i));
    }
}

}  // namespace

std::string render_trace(const IterationTrace& trace, OutputFormat format, bool color) {
    const auto value = [&](double v) {
        return format == OutputFormat::csv ? format_shortest(v) : format_fixed6(v);
    };

    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    header.emplace_back("n");

    if (!trace.stores_vectors) {
        const bool has_alpha = !trace.steps.empty() && trace.steps.front().alpha_n.has_value();
        const bool has_w = !trace.steps.empty() && trace.steps.front().rho_to_w.has_value();
        if (has_alpha) header.emplace_back("alpha_n");
        header.emplace_back("rho_self_residual");
        if (has_w) header.emplace_back("rho_to_w");
        for (const StepRecord& step : trace.steps) {
            std::vector<std::string> row;
            row.push_back(std::to_string(step.n));
            if (has_alpha) row.push_back(value(*step.alpha_n));
            row.push_back(value(step.rho_self_residual));
            if (has_w) row.push_back(value(*step.rho_to_w));
            rows.push_back(std::move(row));
        }
        return render_cells(header, rows, format, color);
    }

    const std::size_t points = trace.steps.empty() ? 1 : trace.steps.front().f_n.size();
    const bool has_g = !trace.steps.empty() && trace.steps.front().g_n.has_value();
    append_vector_columns(header, "f_n", points);
    append_vector_columns(header, "Tf_n", points);
    if (has_g) append_vector_columns(header, "g_n", points);
    append_vector_columns(header, "f_next", points);

    for (const StepRecord& step : trace.steps) {
        std::vector<std::string> row;
        row.push_back(std::to_string(step.n));
        for (double v : step.f_n.values()) row.push_back(value(v));
        for (double v : step.Tf_n.values()) row.push_back(value(v));
        if (has_g) {
            for (double v : step.g_n->values()) row.push_back(value(v));
        }
        for (double v : step.f_next.values()) row.push_back(value(v));
        rows.push_back(std::move(row));
    }
    return render_cells(header, rows, format, color);
}

std::string render_compare(const std::vector<CompareRow>& rows, OutputFormat format, bool color) {
    const std::vector<std::string> header = {"scheme",      "iterations",
                                             "stop",        "contraction_factor",
                                             "final_residual", "error"};
    std::vector<std::vector<std::string>> cells;
    const char* missing = format == OutputFormat::csv ? "" : "-";
    for (const CompareRow& row : rows) {
        std::vector<std::string> line;
        line.push_back(row.name);
        line.push_back(std::to_string(row.iterations));
        line.push_back(std::string(to_string(row.stop_reason)));
        line.push_back(row.contraction ? format_shortest(*row.contraction) : missing);
        line.push_back(format_shortest(row.final_self_residual));
        line.push_back(row.error ? *row.error : missing);
        cells.push_back(std::move(line));
    }
    return render_cells(header, cells, format, color);
}

namespace {

std::string render_report_lines(const std::vector<std::pair<std::string, std::string>>& fields,
                                bool passed, OutputFormat format, bool color) {
    if (format == OutputFormat::csv) {
        std::string out;
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out += ',';
            out += fields[i].first;
        }
        out += "\n";
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out += ',';
            out += fields[i].second;
        }
        out += '\n';
        return out;
    }
    std::size_t width = 0;
    for (const auto& [key, _] : fields) {
        width = std::max(width, key.size());
    }
    width = std::max(width, std::string("result").size());
    std::string out;
    for (const auto& [key, val] : fields) {
        out += key;
        out.append(width - key.size() + 2, ' ');
        out += val;
        out += '\n';
    }
    out += "result";
    out.append(width - 6 + 2, ' ');
    if (color) {
        out += passed ? "\033[32mPASS\033[0m" : "\033[31mFAIL\033[0m";
    } else {
        out += passed ? "PASS" : "FAIL";
    }
    out += '\n';
    return out;
}

}  // namespace

std::string render_class_report(const ClassReport& report, OutputFormat format, bool color) {
    std::vector<std::pair<std::string, std::string>> fields;
    fields.emplace_back("class", std::string(to_string(report.class_name)));
    fields.emplace_back("lambda", report.lambda ? format_shortest(*report.lambda)
                                                : (format == OutputFormat::csv ? "" : "-"));
    fields.emplace_back("pairs_tested", std::to_string(report.pairs_tested));
    fields.emplace_back("violations", std::to_string(report.violations));
    fields.emplace_back("worst_margin", format_shortest(report.worst_margin));
    return render_report_lines(fields, report.passed(), format, color);
}

std::string render_modular_report(const ModularReport& report, OutputFormat format, bool color) {
    std::vector<std::pair<std::string, std::string>> fields;
    fields.emplace_back("property", report.property_name);
    fields.emplace_back("samples_tested", std::to_string(report.samples_tested));
    fields.emplace_back("violations", std::to_string(report.violations));
    fields.emplace_back("worst_margin", format_shortest(report.worst_margin));
    return render_report_lines(fields, report.passed(), format, color);
}

}  // namespace modfix
