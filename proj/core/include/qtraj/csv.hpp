#ifndef QTRAJ_CSV_HPP
#define QTRAJ_CSV_HPP

#include <cstdint>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

namespace qtraj {

/// CSV cell: doubles serialize with 17 significant digits (lossless for
/// binary64), counts as plain integers, flags/status as strings.
using CsvCell = std::variant<double, std::uint64_t, std::string>;

/// Writer enforcing the output contract: a `#` schema/units comment first,
/// then a column-name row, then data rows. Any non-finite numeric cell
/// aborts the stage (StageError) instead of writing NaN/Inf.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::string& schema_comment,
              const std::vector<std::string>& columns);

    void write_row(const std::vector<CsvCell>& cells);
    void close();

private:
    std::ofstream out_;
    std::string path_;
    std::size_t n_columns_;
};

std::string format_double17(double v);

}  // namespace qtraj

#endif
