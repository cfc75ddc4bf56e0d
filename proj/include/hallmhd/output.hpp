#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "hallmhd/diagnostics.hpp"

namespace hallmhd {

/// Streaming CSV sink: one versioned comment line, one header row, then one row
/// per record, flushed as written so a blow-up keeps the partial trajectory.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::string& meta);
    void write(const DiagnosticsRecord& r);

    const std::vector<std::string>& columns() const { return columns_; }

private:
    std::ofstream os_;
    std::string path_;
    std::vector<std::string> columns_; // frozen by the first record
};

struct CsvData {
    std::string meta;
    std::vector<DiagnosticsRecord> records;
};

CsvData read_csv(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

} // namespace hallmhd
