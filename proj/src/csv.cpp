#include "cardmul/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cardmul/csmm.hpp"

namespace cardmul {

DenseMatrix read_csv_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path);

    std::vector<double> data;
    std::size_t rows = 0, cols = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::size_t line_cols = 0;
        std::size_t start = 0;
        while (start <= line.size()) {
            std::size_t end = line.find(',', start);
            if (end == std::string::npos) end = line.size();
            const char* first = line.data() + start;
            const char* last = line.data() + end;
            while (first < last && (*first == ' ' || *first == '\t')) ++first;
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(first, last, v);
            if (ec != std::errc() || ptr != last)
                throw FormatError("CSV: malformed number at row " + std::to_string(rows + 1));
            data.push_back(v);
            ++line_cols;
            start = end + 1;
            if (end == line.size()) break;
        }
        if (rows == 0)
            cols = line_cols;
        else if (line_cols != cols)
            throw FormatError("CSV: ragged row " + std::to_string(rows + 1));
        ++rows;
    }
    if (rows == 0) throw FormatError("CSV: empty file " + path);
    return DenseMatrix(rows, cols, std::move(data));
}

std::string format_csv(const DenseMatrix& m) {
    std::string out;
    char buf[32];
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const int n = std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
            out.append(buf, static_cast<std::size_t>(n));
            out.push_back(j + 1 == m.cols() ? '\n' : ',');
        }
    }
    return out;
}

void write_csv_matrix(const std::string& path, const DenseMatrix& m) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << format_csv(m);
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace cardmul
