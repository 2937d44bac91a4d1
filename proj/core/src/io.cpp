#include "semimax/io.hpp"

#include <bit>
#include <cstring>
#include <stdexcept>

namespace semimax {

static_assert(std::endian::native == std::endian::little,
              "grid formats are defined little-endian");

CsvWriter::CsvWriter(const std::filesystem::path& path) : out_(path) {
  if (!out_) throw std::runtime_error("CsvWriter: cannot open " + path.string());
}

std::string CsvWriter::quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::string CsvWriter::number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void CsvWriter::write_row(std::span<const std::string> fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    out_ << quote(fields[i]);
  }
  out_ << '\n';
}

void CsvWriter::write_row(std::initializer_list<std::string> fields) {
  write_row(std::span<const std::string>(fields.begin(), fields.size()));
}

namespace {

template <typename T>
void put(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw std::runtime_error("grid file: truncated");
  return v;
}

void put_magic(std::ofstream& out, const char* magic) { out.write(magic, 4); }

void check_magic(std::ifstream& in, const char* magic) {
  char buf[4];
  in.read(buf, 4);
  if (!in || std::memcmp(buf, magic, 4) != 0)
    throw std::runtime_error("grid file: bad magic");
  const auto version = get<std::uint32_t>(in);
  if (version != kGridFormatVersion)
    throw std::runtime_error("grid file: unsupported version");
}

void put_grid(std::ofstream& out, const Grid& g) {
  for (int a = 0; a < 3; ++a) put(out, static_cast<std::uint32_t>(g.shape[static_cast<size_t>(a)]));
  for (int a = 0; a < 3; ++a) put(out, g.spacing[static_cast<size_t>(a)]);
  for (int a = 0; a < 3; ++a) put(out, g.origin[a]);
  for (int a = 0; a < 3; ++a) put(out, static_cast<std::uint8_t>(g.periodic[static_cast<size_t>(a)]));
}

Grid get_grid(std::ifstream& in) {
  Grid g;
  for (int a = 0; a < 3; ++a) g.shape[static_cast<size_t>(a)] = static_cast<int>(get<std::uint32_t>(in));
  for (int a = 0; a < 3; ++a) g.spacing[static_cast<size_t>(a)] = get<double>(in);
  for (int a = 0; a < 3; ++a) g.origin[a] = get<double>(in);
  for (int a = 0; a < 3; ++a) g.periodic[static_cast<size_t>(a)] = get<std::uint8_t>(in) != 0;
  return g;
}

}  // namespace

void write_field(const std::filesystem::path& path, const FieldSnapshot& field) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_field: cannot open " + path.string());
  put_magic(out, "SMXF");
  put(out, kGridFormatVersion);
  put_grid(out, field.grid);
  put(out, field.epsilon_scale);
  for (Eigen::Index i = 0; i < field.values.cols(); ++i)
    for (int c = 0; c < 6; ++c) {
      put(out, field.values(c, i).real());
      put(out, field.values(c, i).imag());
    }
  if (!out) throw std::runtime_error("write_field: short write");
}

FieldSnapshot read_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_field: cannot open " + path.string());
  check_magic(in, "SMXF");
  const Grid g = get_grid(in);
  const double eps = get<double>(in);
  auto field = FieldSnapshot::zero(g, eps);
  for (Eigen::Index i = 0; i < field.values.cols(); ++i)
    for (int c = 0; c < 6; ++c) {
      const double re = get<double>(in);
      const double im = get<double>(in);
      field.values(c, i) = Complex(re, im);
    }
  return field;
}

void write_wigner(const std::filesystem::path& path, const WignerGrid& w) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_wigner: cannot open " + path.string());
  put_magic(out, "SMXW");
  put(out, kGridFormatVersion);
  put(out, w.epsilon_scale);
  put(out, static_cast<std::uint32_t>(w.window.half_width));
  put(out, w.window.taper);
  for (int a = 0; a < 3; ++a) put(out, static_cast<std::uint8_t>(w.axis_active[static_cast<size_t>(a)]));
  for (int a = 0; a < 3; ++a) put(out, static_cast<std::uint32_t>(w.kshape[static_cast<size_t>(a)]));
  for (int a = 0; a < 3; ++a) put(out, w.dk[static_cast<size_t>(a)]);
  for (int a = 0; a < 3; ++a) put(out, w.pinned_k[a]);
  put(out, static_cast<std::uint64_t>(w.probes.size()));
  for (std::size_t p = 0; p < w.probes.size(); ++p) {
    for (int a = 0; a < 3; ++a)
      put(out, static_cast<std::uint32_t>(w.probe_node[p][static_cast<size_t>(a)]));
    for (int a = 0; a < 3; ++a) put(out, w.probes[p][a]);
  }
  for (const auto& matrix : w.values)
    for (int r = 0; r < 6; ++r)
      for (int c = 0; c < 6; ++c) {
        put(out, matrix(r, c).real());
        put(out, matrix(r, c).imag());
      }
  if (!out) throw std::runtime_error("write_wigner: short write");
}

WignerGrid read_wigner(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_wigner: cannot open " + path.string());
  check_magic(in, "SMXW");
  WignerGrid w;
  w.epsilon_scale = get<double>(in);
  w.window.half_width = static_cast<int>(get<std::uint32_t>(in));
  w.window.taper = get<double>(in);
  for (int a = 0; a < 3; ++a) w.axis_active[static_cast<size_t>(a)] = get<std::uint8_t>(in) != 0;
  for (int a = 0; a < 3; ++a) w.kshape[static_cast<size_t>(a)] = static_cast<int>(get<std::uint32_t>(in));
  for (int a = 0; a < 3; ++a) w.dk[static_cast<size_t>(a)] = get<double>(in);
  for (int a = 0; a < 3; ++a) w.pinned_k[a] = get<double>(in);
  const auto probe_count = get<std::uint64_t>(in);
  w.probes.resize(probe_count);
  w.probe_node.resize(probe_count);
  for (std::size_t p = 0; p < probe_count; ++p) {
    for (int a = 0; a < 3; ++a)
      w.probe_node[p][static_cast<size_t>(a)] = static_cast<int>(get<std::uint32_t>(in));
    for (int a = 0; a < 3; ++a) w.probes[p][a] = get<double>(in);
  }
  w.values.assign(probe_count * w.kcount(), CMat6::Zero());
  for (auto& matrix : w.values)
    for (int r = 0; r < 6; ++r)
      for (int c = 0; c < 6; ++c) {
        const double re = get<double>(in);
        const double im = get<double>(in);
        matrix(r, c) = Complex(re, im);
      }
  return w;
}

void write_calculus_csv(const std::filesystem::path& path,
                        std::span<const CalculusRow> rows) {
  CsvWriter csv(path);
  csv.write_row({"epsilon", "lhs", "rhs", "abs_diff", "fitted_order"});
  auto cell = [](const std::optional<double>& v) {
    return v ? CsvWriter::number(*v) : std::string();
  };
  for (const auto& r : rows)
    csv.write_row({cell(r.epsilon), cell(r.lhs), cell(r.rhs), cell(r.abs_diff),
                   cell(r.fitted_order)});
}

}  // namespace semimax
