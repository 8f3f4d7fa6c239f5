#include "deepselect/matrix_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <fstream>
#include <iterator>
#include <string_view>
#include <system_error>

#include "deepselect/error.hpp"

namespace deepselect::io {
namespace {

constexpr std::string_view kMagic = "DSM1";
constexpr std::size_t kHeaderBytes = 4 + 8 + 8;


std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find('\n', start);
    const std::string_view line = text.substr(start, end == std::string_view::npos ? text.npos : end - start);
    lines.push_back(line);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

double parse_double(std::string_view field, std::size_t line_no) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ValueError("line " + std::to_string(line_no) + ": cannot parse number '" + std::string(field) + "'");
  }
  return value;
}

std::int64_t parse_int(std::string_view field, std::size_t line_no) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ValueError("line " + std::to_string(line_no) + ": cannot parse integer '" + std::string(field) + "'");
  }
  return value;
}

std::size_t parse_id(std::string_view field, std::size_t line_no) {
  const std::int64_t value = parse_int(field, line_no);
  if (value < 0) throw IndexError("line " + std::to_string(line_no) + ": negative input id");
  return static_cast<std::size_t>(value);
}

bool is_header(std::string_view line) {
  line = trim(line);
  if (line.empty()) return false;
  if (line.front() == '#') return true;
  const char c = line.front();
  // A named header such as "id,value".
  return (c >= 'a' && c <= 'z' && line.substr(0, 3) != "nan" && line.substr(0, 3) != "inf") ||
         (c >= 'A' && c <= 'Z' && line.substr(0, 3) != "NaN" && line.substr(0, 3) != "Inf");
}

std::uint64_t load_u64_le(const char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(p[i]);
  return v;
}

void store_u64_le(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  (void)ec;
  return std::string(buf.data(), ptr);
}

Matrix parse_matrix_csv(const std::string& text) {
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = trim(lines[i]);
    if (line.empty()) continue;
    if (rows == 0 && values.empty() && line.front() == '#') continue;
    const auto fields = split_fields(line);
    if (rows == 0) {
      cols = fields.size();
    } else if (fields.size() != cols) {
      throw ShapeError("line " + std::to_string(i + 1) + " has " + std::to_string(fields.size()) +
                       " columns, expected " + std::to_string(cols));
    }
    for (const auto field : fields) values.push_back(parse_double(field, i + 1));
    ++rows;
  }
  if (rows == 0 || cols == 0) throw ShapeError("matrix file contains no data rows");
  return Matrix(rows, cols, std::move(values));
}

Matrix parse_matrix_dsm1(const std::string& bytes) {
  if (bytes.size() < kHeaderBytes || std::string_view(bytes).substr(0, 4) != kMagic) {
    throw ShapeError("not a DSM1 matrix file");
  }
  const std::uint64_t rows = load_u64_le(bytes.data() + 4);
  const std::uint64_t cols = load_u64_le(bytes.data() + 12);
  if (rows == 0 || cols == 0) throw ShapeError("DSM1 matrix has an empty dimension");
  if (cols != 0 && rows > (bytes.size() / 8) / cols) throw ShapeError("DSM1 payload truncated");
  const std::size_t count = static_cast<std::size_t>(rows * cols);
  if (bytes.size() != kHeaderBytes + count * 8) {
    throw ShapeError("DSM1 payload holds " + std::to_string(bytes.size() - kHeaderBytes) + " bytes, expected " +
                     std::to_string(count * 8));
  }
  std::vector<double> values(count);
  const char* p = bytes.data() + kHeaderBytes;
  for (std::size_t i = 0; i < count; ++i, p += 8) values[i] = std::bit_cast<double>(load_u64_le(p));
  return Matrix(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols), std::move(values));
}

Matrix read_matrix(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  if (bytes.size() >= 4 && std::string_view(bytes).substr(0, 4) == kMagic) return parse_matrix_dsm1(bytes);
  return parse_matrix_csv(bytes);
}

std::string format_matrix_csv(const Matrix& m) {
  std::string out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto row = m.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out.push_back(',');
      out += format_double(row[j]);
    }
    out.push_back('\n');
  }
  return out;
}

std::string format_matrix_dsm1(const Matrix& m) {
  std::string out;
  out.reserve(kHeaderBytes + m.values().size() * 8);
  out.append(kMagic);
  store_u64_le(out, m.rows());
  store_u64_le(out, m.cols());
  for (const double v : m.values()) store_u64_le(out, std::bit_cast<std::uint64_t>(v));
  return out;
}

void write_matrix(const std::filesystem::path& path, const Matrix& m, MatrixFormat format) {
  write_file(path, format == MatrixFormat::dsm1 ? format_matrix_dsm1(m) : format_matrix_csv(m));
}

std::vector<std::pair<std::size_t, std::int64_t>> parse_id_values(const std::string& text) {
  std::vector<std::pair<std::size_t, std::int64_t>> rows;
  const auto lines = split_lines(text);
  bool first = true;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = trim(lines[i]);
    if (line.empty()) continue;
    if (first && is_header(line)) {
      first = false;
      continue;
    }
    first = false;
    const auto fields = split_fields(line);
    if (fields.size() != 2) {
      throw ShapeError("line " + std::to_string(i + 1) + ": expected 2 columns (id,value)");
    }
    rows.emplace_back(parse_id(fields[0], i + 1), parse_int(fields[1], i + 1));
  }
  return rows;
}

std::vector<std::pair<std::size_t, std::int64_t>> read_id_values(const std::filesystem::path& path) {
  return parse_id_values(read_file(path));
}

void write_id_values(const std::filesystem::path& path,
                     const std::vector<std::pair<std::size_t, std::int64_t>>& rows) {
  std::string out = "id,value\n";
  for (const auto& [id, value] : rows) out += std::to_string(id) + "," + std::to_string(value) + "\n";
  write_file(path, out);
}

std::vector<std::size_t> parse_id_list(const std::string& text) {
  std::vector<std::size_t> ids;
  const auto lines = split_lines(text);
  bool first = true;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = trim(lines[i]);
    if (line.empty()) continue;
    if (first && is_header(line)) {
      first = false;
      continue;
    }
    first = false;
    ids.push_back(parse_id(split_fields(line).front(), i + 1));
  }
  return ids;
}

std::vector<std::size_t> read_id_list(const std::filesystem::path& path) { return parse_id_list(read_file(path)); }

void write_id_list(const std::filesystem::path& path, const std::vector<std::size_t>& ids) {
  std::string out = "id\n";
  for (const std::size_t id : ids) out += std::to_string(id) + "\n";
  write_file(path, out);
}

}  // namespace deepselect::io
