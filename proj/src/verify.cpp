#include "saegt/verify.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "saegt/textio.hpp"

namespace saegt {

CsvTable load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open csv: " + path);

    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty csv");
    for (const auto col : split(trim(line), ','))
        table.columns.emplace_back(col);

    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        std::vector<std::string> row;
        for (const auto field : split(trim(line), ','))
            row.emplace_back(field);
        if (row.size() != table.columns.size()) {
            std::ostringstream msg;
            msg << path << ":" << lineno << ": expected " << table.columns.size()
                << " fields, got " << row.size();
            throw std::runtime_error(msg.str());
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

namespace {

enum class ColumnType { Integer, Float, Text };

ColumnType classify(const CsvTable& golden, std::size_t col) {
    bool all_int = true;
    bool all_float = true;
    for (const auto& row : golden.rows) {
        const std::string& v = row[col];
        if (all_int && !parse_int(v)) all_int = false;
        if (all_float && !parse_double(v)) all_float = false;
        if (!all_int && !all_float) break;
    }
    if (golden.rows.empty()) return ColumnType::Text;
    if (all_int) return ColumnType::Integer;
    if (all_float) return ColumnType::Float;
    return ColumnType::Text;
}

bool float_match(const std::string& a, const std::string& b, double tol) {
    const auto va = parse_double(a);
    const auto vb = parse_double(b);
    if (!va || !vb) return false;
    if (std::isnan(*va) && std::isnan(*vb)) return true;
    return std::abs(*va - *vb) <= tol;
}

}  // namespace

VerifyResult verify_csv(const CsvTable& candidate, const CsvTable& golden,
                        double float_tolerance, std::size_t max_diffs) {
    VerifyResult result;
    const auto note = [&](const std::string& diff) {
        result.ok = false;
        if (result.diffs.size() < max_diffs) result.diffs.push_back(diff);
    };

    if (candidate.columns != golden.columns) {
        std::ostringstream msg;
        msg << "schema mismatch: candidate columns [";
        for (std::size_t i = 0; i < candidate.columns.size(); ++i)
            msg << (i ? "," : "") << candidate.columns[i];
        msg << "] vs golden [";
        for (std::size_t i = 0; i < golden.columns.size(); ++i)
            msg << (i ? "," : "") << golden.columns[i];
        msg << "]";
        note(msg.str());
        return result;
    }
    if (candidate.rows.size() != golden.rows.size()) {
        std::ostringstream msg;
        msg << "row count mismatch: " << candidate.rows.size() << " vs "
            << golden.rows.size();
        note(msg.str());
        return result;
    }

    std::vector<ColumnType> types(golden.columns.size());
    for (std::size_t c = 0; c < golden.columns.size(); ++c)
        types[c] = classify(golden, c);

    for (std::size_t r = 0; r < golden.rows.size(); ++r) {
        for (std::size_t c = 0; c < golden.columns.size(); ++c) {
            const std::string& got = candidate.rows[r][c];
            const std::string& want = golden.rows[r][c];
            bool match = false;
            switch (types[c]) {
                case ColumnType::Integer:
                case ColumnType::Text:
                    match = got == want;
                    break;
                case ColumnType::Float:
                    match = float_match(got, want, float_tolerance);
                    break;
            }
            if (!match) {
                std::ostringstream msg;
                msg << "row " << (r + 1) << ", column '" << golden.columns[c]
                    << "': got '" << got << "', want '" << want << "'";
                note(msg.str());
            }
        }
    }
    return result;
}

VerifyResult verify_csv_files(const std::string& candidate_path,
                              const std::string& golden_path,
                              double float_tolerance) {
    return verify_csv(load_csv(candidate_path), load_csv(golden_path),
                      float_tolerance);
}

}  // namespace saegt
