#pragma once

#include <filesystem>
#include <optional>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "semimax/grid.hpp"
#include "semimax/wigner.hpp"

namespace semimax {

/// RFC-4180 CSV writer: one header row, quoting applied to any field that
/// needs it, "\r\n" free (plain "\n" line ends, noted in the docs).
class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path);

  void write_row(std::span<const std::string> fields);
  void write_row(std::initializer_list<std::string> fields);

  static std::string quote(const std::string& field);
  static std::string number(double v);  // shortest round-trip form

 private:
  std::ofstream out_;
};

/// Binary field snapshot ("SMXF"): header with magic, version, grid and
/// scale metadata; payload little-endian f64 interleaved re/im, row-major
/// nodes, components fastest.
void write_field(const std::filesystem::path& path, const FieldSnapshot& field);
FieldSnapshot read_field(const std::filesystem::path& path);

/// Binary Wigner grid ("SMXW"): header with magic, version, scale, window
/// spec, k-lattice metadata and probes; payload little-endian f64
/// interleaved re/im, row-major over (probe, knode, 6x6 entries).
void write_wigner(const std::filesystem::path& path, const WignerGrid& w);
WignerGrid read_wigner(const std::filesystem::path& path);

inline constexpr std::uint32_t kGridFormatVersion = 1;

/// Calculus report rows (columns: epsilon, lhs, rhs, abs_diff,
/// fitted_order); inapplicable fields stay empty.
struct CalculusRow {
  std::optional<double> epsilon;
  std::optional<double> lhs;
  std::optional<double> rhs;
  std::optional<double> abs_diff;
  std::optional<double> fitted_order;
};

void write_calculus_csv(const std::filesystem::path& path,
                        std::span<const CalculusRow> rows);

}  // namespace semimax
