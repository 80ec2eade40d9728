#ifndef SAEGT_VERIFY_HPP_
#define SAEGT_VERIFY_HPP_

#include <string>
#include <vector>

namespace saegt {

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

CsvTable load_csv(const std::string& path);

struct VerifyResult {
    bool ok = true;
    std::vector<std::string> diffs;  // human-readable, row/column named
};

// Columns are typed from the golden file: all-integer columns compare
// exactly, numeric columns within float_tolerance (two NaNs match),
// anything else as strings. A header mismatch fails with the column names.
VerifyResult verify_csv(const CsvTable& candidate, const CsvTable& golden,
                        double float_tolerance = 1e-9, std::size_t max_diffs = 20);

VerifyResult verify_csv_files(const std::string& candidate_path,
                              const std::string& golden_path,
                              double float_tolerance = 1e-9);

}  // namespace saegt

#endif  // SAEGT_VERIFY_HPP_
