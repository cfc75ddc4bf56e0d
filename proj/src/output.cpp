#include "hallmhd/output.hpp"

#include <cstdio>
#include <sstream>

#include "hallmhd/errors.hpp"

namespace hallmhd {

namespace {
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}
} // namespace

CsvWriter::CsvWriter(const std::string& path, const std::string& meta)
    : os_(path, std::ios::trunc), path_(path) {
    if (!os_) throw IoError("cannot open CSV for writing: " + path);
    os_ << "# hallmhd-csv v1 " << meta << "\n";
}

void CsvWriter::write(const DiagnosticsRecord& r) {
    if (columns_.empty()) {
        for (const auto& [k, v] : r.cols) columns_.push_back(k);
        for (std::size_t i = 0; i < columns_.size(); ++i)
            os_ << (i ? "," : "") << columns_[i];
        os_ << "\n";
    }
    if (r.cols.size() != columns_.size())
        throw IoError("record column set changed mid-trajectory in " + path_);
    for (std::size_t i = 0; i < r.cols.size(); ++i) {
        if (r.cols[i].first != columns_[i])
            throw IoError("record column order changed mid-trajectory in " + path_);
        os_ << (i ? "," : "") << fmt(r.cols[i].second);
    }
    os_ << "\n";
    os_.flush();
    if (!os_) throw IoError("CSV write failed: " + path_);
}

CsvData read_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open CSV: " + path);
    CsvData data;
    std::string line;
    std::vector<std::string> cols;
    bool have_header = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            data.meta += line.substr(1);
            continue;
        }
        std::istringstream row(line);
        std::string cell;
        if (!have_header) {
            while (std::getline(row, cell, ',')) cols.push_back(cell);
            have_header = true;
            continue;
        }
        DiagnosticsRecord r;
        std::size_t i = 0;
        while (std::getline(row, cell, ',')) {
            if (i >= cols.size()) throw IoError("row wider than header in " + path);
            r.set(cols[i], std::stod(cell));
            ++i;
        }
        if (i != cols.size()) throw IoError("row narrower than header in " + path);
        data.records.push_back(std::move(r));
    }
    return data;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw IoError("cannot open for writing: " + path);
    os << content;
    if (!os) throw IoError("write failed: " + path);
}

} // namespace hallmhd
