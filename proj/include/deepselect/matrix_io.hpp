#pragma once

// Readers and writers for the numeric file formats.
//
// CSV: comma-separated, row-major, optional single header line starting
// with '#'. Values are written in shortest round-trip form.
//
// DSM1: "DSM1" magic, u64 LE rows, u64 LE cols, rows*cols float64 LE values.

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "deepselect/matrix.hpp"

namespace deepselect::io {

enum class MatrixFormat { csv, dsm1 };

// Chooses DSM1 when the file starts with the magic bytes, CSV otherwise.
Matrix read_matrix(const std::filesystem::path& path);
Matrix parse_matrix_csv(const std::string& text);
Matrix parse_matrix_dsm1(const std::string& bytes);

std::string format_matrix_csv(const Matrix& m);
std::string format_matrix_dsm1(const Matrix& m);
void write_matrix(const std::filesystem::path& path, const Matrix& m, MatrixFormat format);

// `id,value` files (labels, clusters). Header line optional.
std::vector<std::pair<std::size_t, std::int64_t>> read_id_values(const std::filesystem::path& path);
std::vector<std::pair<std::size_t, std::int64_t>> parse_id_values(const std::string& text);
void write_id_values(const std::filesystem::path& path,
                     const std::vector<std::pair<std::size_t, std::int64_t>>& rows);

// Selection files: single `id` column, header optional. Extra columns are
// ignored so `id,value` files are accepted too.
std::vector<std::size_t> read_id_list(const std::filesystem::path& path);
std::vector<std::size_t> parse_id_list(const std::string& text);
void write_id_list(const std::filesystem::path& path, const std::vector<std::size_t>& ids);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

// Shortest representation that parses back to the same double.
std::string format_double(double value);

}  // namespace deepselect::io
