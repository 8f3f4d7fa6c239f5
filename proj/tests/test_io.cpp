#include <doctest.h>

#include <bit>
#include <cmath>
#include <limits>

#include "deepselect/error.hpp"
#include "deepselect/matrix_io.hpp"
#include "support.hpp"

using namespace deepselect;
using namespace deepselect::testing;

namespace {

bool bit_equal(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    if (std::bit_cast<std::uint64_t>(a.values()[i]) != std::bit_cast<std::uint64_t>(b.values()[i])) return false;
  }
  return true;
}

Matrix awkward_matrix() {
  Rng rng(2);
  Matrix m(7, 5);
  for (double& v : m.values()) v = rng.normal() * std::pow(10.0, static_cast<double>(rng.uniform_index(40)) - 20.0);
  m(0, 0) = 0.1;
  m(0, 1) = -0.0;
  m(0, 2) = std::numeric_limits<double>::denorm_min();
  m(0, 3) = std::numeric_limits<double>::max();
  m(0, 4) = 1.0 / 3.0;
  return m;
}

}  // namespace

TEST_CASE("DSM1 round trip is bit-exact") {
  const Matrix m = awkward_matrix();
  const std::string bytes = io::format_matrix_dsm1(m);
  CHECK(bytes.substr(0, 4) == "DSM1");
  CHECK(bytes.size() == 4 + 16 + 8 * m.values().size());
  CHECK(bit_equal(io::parse_matrix_dsm1(bytes), m));
}

TEST_CASE("DSM1 header stores little-endian dimensions") {
  const Matrix m(3, 2, {1, 2, 3, 4, 5, 6});
  const std::string bytes = io::format_matrix_dsm1(m);
  CHECK(static_cast<unsigned char>(bytes[4]) == 3);
  for (int i = 5; i < 12; ++i) CHECK(bytes[i] == 0);
  CHECK(static_cast<unsigned char>(bytes[12]) == 2);
}

TEST_CASE("CSV round trip preserves every double") {
  const Matrix m = awkward_matrix();
  CHECK(bit_equal(io::parse_matrix_csv(io::format_matrix_csv(m)), m));
}

TEST_CASE("files round trip with format auto-detection") {
  const auto dir = scratch_dir("io");
  const Matrix m = awkward_matrix();
  io::write_matrix(dir / "m.dsm1", m, io::MatrixFormat::dsm1);
  io::write_matrix(dir / "m.csv", m, io::MatrixFormat::csv);
  CHECK(bit_equal(io::read_matrix(dir / "m.dsm1"), m));
  CHECK(bit_equal(io::read_matrix(dir / "m.csv"), m));
}

TEST_CASE("CSV parsing") {
  SUBCASE("comment header is skipped") {
    const Matrix m = io::parse_matrix_csv("# p0,p1\n1,0\n0.5,0.5\n");
    CHECK(m.rows() == 2);
    CHECK(m.cols() == 2);
    CHECK(m(1, 1) == 0.5);
  }
  SUBCASE("empty input is a shape error") { CHECK_THROWS_AS(io::parse_matrix_csv(""), ShapeError); }
  SUBCASE("ragged rows are a shape error") { CHECK_THROWS_AS(io::parse_matrix_csv("1,2\n3\n"), ShapeError); }
  SUBCASE("garbage is a value error") { CHECK_THROWS_AS(io::parse_matrix_csv("1,abc\n"), ValueError); }
  SUBCASE("whitespace and CRLF are tolerated") {
    const Matrix m = io::parse_matrix_csv(" 1 , 2 \r\n3,4\r\n");
    CHECK(m == Matrix(2, 2, {1, 2, 3, 4}));
  }
}

TEST_CASE("DSM1 corruption is detected") {
  const std::string bytes = io::format_matrix_dsm1(Matrix(2, 2, {1, 2, 3, 4}));
  CHECK_THROWS_AS(io::parse_matrix_dsm1(bytes.substr(0, bytes.size() - 1)), ShapeError);
  CHECK_THROWS_AS(io::parse_matrix_dsm1("DSM2" + bytes.substr(4)), ShapeError);
}

TEST_CASE("id,value files") {
  const auto rows = io::parse_id_values("id,value\n0,3\n4,-1\n");
  REQUIRE(rows.size() == 2);
  CHECK(rows[1] == std::pair<std::size_t, std::int64_t>{4, -1});
  CHECK(io::parse_id_values("0,1\n1,0\n").size() == 2);
  CHECK_THROWS_AS(io::parse_id_values("id,value\n0\n"), ShapeError);
  CHECK_THROWS_AS(io::parse_id_values("id,value\n-3,1\n"), IndexError);

  const auto dir = scratch_dir("idvalues");
  io::write_id_values(dir / "l.csv", rows);
  CHECK(io::read_file(dir / "l.csv") == "id,value\n0,3\n4,-1\n");
  CHECK(io::read_id_values(dir / "l.csv") == rows);
}

TEST_CASE("id lists") {
  CHECK(io::parse_id_list("id\n5\n2\n") == std::vector<std::size_t>{5, 2});
  const auto dir = scratch_dir("idlist");
  io::write_id_list(dir / "s.csv", {3, 1, 2});
  CHECK(io::read_file(dir / "s.csv") == "id\n3\n1\n2\n");
  CHECK(io::read_id_list(dir / "s.csv") == std::vector<std::size_t>{3, 1, 2});
}

TEST_CASE("missing files raise IoError") {
  CHECK_THROWS_AS(io::read_matrix("/nonexistent/deepselect/matrix.csv"), IoError);
}

TEST_CASE("format_double is the shortest round-trip form") {
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(1.0) == "1");
  CHECK(io::format_double(-2.5e-300) == "-2.5e-300");
}
