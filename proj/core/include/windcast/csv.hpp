#ifndef WINDCAST_CSV_HPP
#define WINDCAST_CSV_HPP

#include <string>
#include <vector>

namespace windcast {

/**
 * Minimal CSV table: comma-delimited, header row, UTF-8, LF line endings.
 * All windcast output files go through this writer so byte-level
 * reproducibility holds across reruns.
 */
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Format a double with full round-trip precision (shortest %.17g form).
std::string format_double(double value);

/// Format with fixed decimals (metric tables).
std::string format_fixed(double value, int decimals);

/// Write a table to disk. Throws std::runtime_error on I/O failure.
void write_csv(const std::string& path, const CsvTable& table);

/// Read a whole CSV file; empty cells are kept. Throws on missing file.
CsvTable read_csv(const std::string& path);

/// Split one CSV line on commas (no quoting; windcast files never quote).
std::vector<std::string> split_csv_line(const std::string& line);

} // namespace windcast

#endif
