#include <sstream>

#include "doctest.h"
#include "qx/io.hpp"
#include "qx/stabilizer_codes.hpp"

using namespace qx;

TEST_CASE("matrix round trip") {
  Matrix m(2, 3);
  m << cplx(1, 0.5), cplx(-2e-17, 3), cplx(0.1, 0), cplx(1.0 / 3, -1.0 / 7), cplx(0, 0), cplx(1e300, -1e-300);
  std::stringstream s;
  write_matrix(s, m);
  Matrix back = read_matrix(s);
  REQUIRE(back.rows() == 2);
  REQUIRE(back.cols() == 3);
  CHECK((back - m).norm() == 0.0);

  std::istringstream loose("2 1\n 1 0   0 1\n");
  Matrix v = read_matrix(loose);
  CHECK(v(1, 0) == cplx(0, 1));
}

TEST_CASE("malformed matrices") {
  for(const char *text : {"", "2", "x 2", "-1 2", "2 2 1 0 1 0 1 0", "1 1 1 0 9", "1 1 1 zz"}) {
    std::istringstream in(text);
    CAPTURE(text);
    CHECK_THROWS_AS(read_matrix(in), Error);
  }
  try {
    read_matrix_file("/nonexistent/matrix.txt");
    FAIL("expected an error");
  } catch(const Error &e) {
    CHECK(e.code() == ErrorCode::io_error);
  }
}

TEST_CASE("kl report json") {
  auto code = five_qubit_code();
  auto report = kl_decompose(code, depolarizing_errors(5, 0.1));
  auto j = kl_report_json(report);
  std::vector<std::string> keys;
  for(auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  const std::vector<std::string> expect{"error_count", "logical_dim", "environment_size", "max_residual",
                                        "max_beta",    "dt_first_order", "dt_exact",     "diamond_bracket",
                                        "epsilon",     "fidelity",    "bures",           "eigenvalues",
                                        "a",           "beta"};
  CHECK(keys == expect);
  CHECK(j["error_count"] == 16);
  CHECK(j["logical_dim"] == 2);
  CHECK(j["a"].size() == 16);
  CHECK(j["a"][0][0].size() == 2);
  CHECK(j.dump() == kl_report_json(report).dump());
}
