#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "swl/config.hpp"

using namespace swl;

TEST_CASE("parse and emit round-trip") {
  const std::string text =
      "# experiment setup\n"
      "dimension = 1\n"
      "kernel.family = triangle-1d   # compact support\n"
      "kernel.lambda = 1.0\n"
      "r_list = 8, 16, 32\n"
      "\n"
      "base_seed = 42\n";
  const Config a = Config::parse_text(text);
  const Config b = Config::parse_text(a.emit());
  CHECK(a == b);
  // canonical emission is idempotent
  CHECK(a.emit() == b.emit());
  CHECK(a.get_int("dimension") == 1);
  CHECK(a.get_string("kernel.family") == "triangle-1d");
  CHECK(a.get_double("kernel.lambda") == 1.0);
  CHECK(a.get_u64("base_seed", 0) == 42);
  const auto list = a.get_double_list("r_list");
  REQUIRE(list.size() == 3);
  CHECK(list[1] == 16.0);
}

TEST_CASE("typed getter validation") {
  const Config c = Config::parse_text("x = abc\ny = 1.5\nz = 1,2,bad\n");
  CHECK_THROWS_AS(c.get_double("x"), Error);
  CHECK_THROWS_AS(c.get_int("y"), Error);
  CHECK_THROWS_AS(c.get_double_list("z"), Error);
  CHECK_THROWS_AS(c.get_string("missing"), Error);
  CHECK(c.get_double("missing", 7.0) == 7.0);
  CHECK_THROWS_AS(Config::parse_text("no equals sign here\n"), Error);
}

TEST_CASE("hash is stable and content-sensitive") {
  const Config a = Config::parse_text("a = 1\nb = 2\n");
  const Config b = Config::parse_text("b = 2\na = 1\n");   // order-free
  const Config c = Config::parse_text("a = 1\nb = 3\n");
  CHECK(a.hash() == b.hash());
  CHECK(a.hash() != c.hash());
  CHECK(a.hash().size() == 16);
}
