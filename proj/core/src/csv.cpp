#include "qtraj/csv.hpp"

#include <cmath>
#include <cstdio>

#include "qtraj/errors.hpp"

namespace qtraj {

std::string format_double17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::string& schema_comment,
                     const std::vector<std::string>& columns)
    : out_(path), path_(path), n_columns_(columns.size()) {
    if (!out_) throw StageError("cannot open output file: " + path);
    out_ << "# " << schema_comment << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out_ << ",";
        out_ << columns[i];
    }
    out_ << "\n";
}

void CsvWriter::write_row(const std::vector<CsvCell>& cells) {
    if (cells.size() != n_columns_)
        throw StageError("row width mismatch in " + path_);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ",";
        if (const double* d = std::get_if<double>(&cells[i])) {
            if (!std::isfinite(*d))
                throw StageError("non-finite value in output cell of " + path_);
            out_ << format_double17(*d);
        } else if (const std::uint64_t* u = std::get_if<std::uint64_t>(&cells[i])) {
            out_ << *u;
        } else {
            out_ << std::get<std::string>(cells[i]);
        }
    }
    out_ << "\n";
}

void CsvWriter::close() {
    out_.close();
    if (out_.fail()) throw StageError("failed writing " + path_);
}

}  // namespace qtraj
