#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "ubva/errors.hpp"
#include "ubva/matrix_io.hpp"
#include "ubva/report_io.hpp"
#include "ubva/severity.hpp"

using namespace ubva;

namespace {

void write_raw(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace

TEST_CASE("format_double round-trips every finite value exactly") {
  const double cases[] = {0.0,
                          1.0,
                          -1.0,
                          0.5,
                          0.1,
                          1.0 / 3.0,
                          3.141592653589793,
                          1e308,
                          5e-324,  // smallest subnormal
                          -2.5e-10,
                          123456789.123456789,
                          std::numeric_limits<double>::max(),
                          std::numeric_limits<double>::min()};
  for (double v : cases) {
    const std::string s = format_double(v);
    char* end = nullptr;
    const double back = std::strtod(s.c_str(), &end);
    CHECK(*end == '\0');
    CHECK(back == v);
  }
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("JsonWriter emits ordered flat objects with escaped strings") {
  JsonWriter w;
  w.field("a", 1.5)
      .field("b", std::int64_t{-7})
      .field("c", std::string_view{"x\"y\\z"})
      .field_bool("d", true)
      .field_null("e")
      .field("f", std::numeric_limits<double>::infinity());
  CHECK(w.str() ==
        "{\n"
        "  \"a\": 1.5,\n"
        "  \"b\": -7,\n"
        "  \"c\": \"x\\\"y\\\\z\",\n"
        "  \"d\": true,\n"
        "  \"e\": null,\n"
        "  \"f\": \"inf\"\n"
        "}\n");
}

TEST_CASE("summary json round-trips through the parser, including inf") {
  SummaryMeasures s;
  s.srs = 0.25;
  s.bsrs = 0.3;
  s.lsrs = 1.0 / 3.0;
  s.w1 = 0.125;
  s.w2 = 0.75;
  s.red = std::sqrt(0.3);
  s.condition_number = std::numeric_limits<double>::infinity();
  s.n = 100;
  s.p = 12;

  testutil::TempDir tmp("io_summary");
  const auto path = tmp.path() / "summary.json";
  write_file_atomic(path, summary_json(s));

  const SummaryMeasures back = parse_summary_json(path);
  CHECK(back.srs == s.srs);
  CHECK(back.bsrs == s.bsrs);
  CHECK(back.lsrs == s.lsrs);  // bit-exact through %.17g
  CHECK(back.w1 == s.w1);
  CHECK(back.w2 == s.w2);
  CHECK(back.red == s.red);
  CHECK(std::isinf(back.condition_number));
  CHECK(back.n == 100);
  CHECK(back.p == 12);

  CHECK_THROWS_AS(parse_summary_json(tmp.path() / "absent.json"), IoError);
  write_raw(tmp.path() / "broken.json", "{\"sRs\": ");
  CHECK_THROWS_AS(parse_summary_json(tmp.path() / "broken.json"), ParseError);
}

TEST_CASE("severity tsv layout and extra columns") {
  SeverityReport r;
  r.n = 5;
  r.p = 2;
  r.sr = Eigen::Vector2d(1.25, 1.75);
  r.lower = Eigen::Vector2d(1.0, 1.0);
  r.upper = 3.0;
  r.threshold = 1.5;
  r.flagged = {0, 1};

  const std::string tsv =
      severity_tsv(r, {"snpA", "snpB"},
                   {ExtraColumn{"vif", Eigen::Vector2d(1.5, 2.5)}});
  CHECK(tsv ==
        "index\tname\tsR\tlower\tupper\tflagged\tvif\n"
        "1\tsnpA\t1.25\t1\t3\t0\t1.5\n"
        "2\tsnpB\t1.75\t1\t3\t1\t2.5\n");

  CHECK_THROWS_AS(severity_tsv(r, {"only_one"}), InvalidParameterError);
  CHECK_THROWS_AS(
      severity_tsv(r, {"a", "b"}, {ExtraColumn{"bad", Eigen::Vector3d()}}),
      InvalidParameterError);
}

TEST_CASE("matrix TSV round-trip preserves values and names") {
  const Eigen::MatrixXd x = testutil::gaussian_matrix(7, 3, 2024);
  const std::vector<std::string> names = {"alpha", "beta", "gamma"};

  testutil::TempDir tmp("io_tsv");
  const auto path = tmp.path() / "m.tsv";
  write_matrix_tsv(path, x, names);
  const NamedMatrix back = read_matrix_tsv(path);

  CHECK(back.names == names);
  REQUIRE(back.values.rows() == 7);
  REQUIRE(back.values.cols() == 3);
  CHECK((back.values - x).cwiseAbs().maxCoeff() == 0.0);  // 17 digits suffice
}

TEST_CASE("matrix TSV parser rejects malformed input") {
  testutil::TempDir tmp("io_tsv_bad");

  write_raw(tmp.path() / "ragged.tsv", "a\tb\n1\t2\n3\n");
  CHECK_THROWS_AS(read_matrix_tsv(tmp.path() / "ragged.tsv"), ParseError);

  write_raw(tmp.path() / "word.tsv", "a\tb\n1\tbanana\n");
  CHECK_THROWS_AS(read_matrix_tsv(tmp.path() / "word.tsv"), ParseError);

  write_raw(tmp.path() / "inf.tsv", "a\tb\n1\tinf\n");
  CHECK_THROWS_AS(read_matrix_tsv(tmp.path() / "inf.tsv"), ParseError);

  write_raw(tmp.path() / "empty.tsv", "");
  CHECK_THROWS_AS(read_matrix_tsv(tmp.path() / "empty.tsv"), ParseError);

  write_raw(tmp.path() / "norows.tsv", "a\tb\n");
  CHECK_THROWS_AS(read_matrix_tsv(tmp.path() / "norows.tsv"), ParseError);

  CHECK_THROWS_AS(read_matrix_tsv(tmp.path() / "missing.tsv"), IoError);

  // CRLF line endings are tolerated.
  write_raw(tmp.path() / "crlf.tsv", "a\tb\r\n1\t2\r\n");
  const NamedMatrix m = read_matrix_tsv(tmp.path() / "crlf.tsv");
  CHECK(m.values(0, 0) == 1.0);
  CHECK(m.values(0, 1) == 2.0);
}

TEST_CASE("binary matrix round-trip is bit-exact and validates framing") {
  Eigen::MatrixXd x = testutil::gaussian_matrix(6, 4, 77);
  x(2, 1) = std::numeric_limits<double>::quiet_NaN();  // binary permits NaN

  testutil::TempDir tmp("io_bin");
  const auto path = tmp.path() / "m.bin";
  write_matrix_binary(path, x);
  const NamedMatrix back = read_matrix_binary(path);

  REQUIRE(back.values.rows() == 6);
  REQUIRE(back.values.cols() == 4);
  for (Eigen::Index i = 0; i < 6; ++i) {
    for (Eigen::Index j = 0; j < 4; ++j) {
      if (i == 2 && j == 1) {
        CHECK(std::isnan(back.values(i, j)));
      } else {
        CHECK(back.values(i, j) == x(i, j));
      }
    }
  }
  CHECK(back.names == default_names(4));
  CHECK(back.names[0] == "V1");
  CHECK(back.names[3] == "V4");

  write_raw(tmp.path() / "magic.bin", std::string("XXXX") + std::string(12, '\0'));
  CHECK_THROWS_AS(read_matrix_binary(tmp.path() / "magic.bin"), ParseError);

  // Truncated payload: header promises more doubles than present.
  std::string full = testutil::read_file(path);
  write_raw(tmp.path() / "short.bin", full.substr(0, full.size() - 8));
  CHECK_THROWS_AS(read_matrix_binary(tmp.path() / "short.bin"), ParseError);

  write_raw(tmp.path() / "long.bin", full + std::string(8, '\0'));
  CHECK_THROWS_AS(read_matrix_binary(tmp.path() / "long.bin"), ParseError);

  // Dispatcher agrees with the direct readers.
  const NamedMatrix via = read_matrix(path, MatrixFormat::kBinary);
  CHECK(via.values(0, 0) == x(0, 0));
}

TEST_CASE("atomic writes land complete and leave no temporaries") {
  testutil::TempDir tmp("io_atomic");
  const auto path = tmp.path() / "out.txt";
  write_file_atomic(path, "first");
  CHECK(testutil::read_file(path) == "first");
  write_file_atomic(path, "second version");
  CHECK(testutil::read_file(path) == "second version");

  std::size_t entries = 0;
  for (const auto& entry : std::filesystem::directory_iterator(tmp.path())) {
    (void)entry;
    ++entries;
  }
  CHECK(entries == 1);  // no .tmp files left behind
}

TEST_CASE("write_bundle creates the directory and all files") {
  testutil::TempDir tmp("io_bundle");
  OutputBundle bundle;
  bundle.files.emplace_back("a.txt", "alpha");
  bundle.files.emplace_back("b.json", "{}\n");
  const auto dir = tmp.path() / "nested" / "out";
  write_bundle(dir, bundle);
  CHECK(testutil::read_file(dir / "a.txt") == "alpha");
  CHECK(testutil::read_file(dir / "b.json") == "{}\n");
}
