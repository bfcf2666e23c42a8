// SPDX-License-Identifier: Apache-2.0
#include "hypo/report.hpp"
#include "hypo/specfile.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

using namespace hypo;

TEST_CASE("spec parsing") {
  auto s = parse_spec(R"(
[system]
m = 2
mu = "3/2"

[operator]
kind = "harmonic_oscillator"
n = 2

[[equation]]
a = "1/3"
b = [[1, 0, 1], [2, 0.5, 0]]

[[equation]]
a = { const = 1, terms = [[1, 1, 0]] }
)");
  CHECK(s.m() == 2);
  CHECK(s.mu() == 1.5);
  CHECK(s.op().meta().n == 2);
  REQUIRE(s.equation(0).a.exact_average());
  CHECK(*s.equation(0).a.exact_average() == Rational(1, 3));
  CHECK(std::abs(s.equation(0).b(0.3) - (std::sin(0.3) + 0.5 * std::cos(0.6))) < 1e-15);
  CHECK(std::abs(s.equation(1).a(0.0) - 2.0) < 1e-15);
  CHECK(s.equation(1).b.is_constant());
  CHECK(average(s.equation(1).b) == 0.0);
}

TEST_CASE("operator kinds") {
  auto t = parse_spec("[system]\nm = 1\n[operator]\nkind = \"table\"\nvalues = [1, 2.5, 4]\n[[equation]]\na = 1\n");
  CHECK(t.op().enumerate(3) == std::vector<double>{1, 2.5, 4});
  auto p = parse_spec(
      "[system]\nm = 1\n[operator]\nkind = \"formula\"\nname = \"power\"\ncoef = 2\npower = 1\n[[equation]]\na = 1\n");
  CHECK(p.op().enumerate(3) == std::vector<double>{2, 4, 6});
  auto d = parse_spec(
      "[system]\nm = 1\n[operator]\nkind = \"formula\"\nname = \"double_exponential\"\nlength = 3\n[[equation]]\n");
  CHECK(d.op().enumerate(3) == std::vector<double>{4, 16, 256});
}

TEST_CASE("spec errors carry positions") {
  auto message = [](const std::string& text) {
    try {
      parse_spec(text, "in.toml");
    } catch (const InputError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("[system]\nm = \n").rfind("in.toml:2:", 0) == 0);
  CHECK(message("[system]\nm = 1\nextra = 2\n[operator]\nkind = \"harmonic_oscillator\"\n[[equation]]\n")
            .rfind("in.toml:3:1: unknown key 'extra'", 0) == 0);
  CHECK(message("[system]\nm = 2\n[operator]\nkind = \"harmonic_oscillator\"\n[[equation]]\n").find("m = 2 but 1") !=
        std::string::npos);
  CHECK(message("[system]\nm = 1\n[operator]\nkind = \"sphere\"\n[[equation]]\n").find("unknown operator kind") !=
        std::string::npos);
  CHECK(message("[system]\nm = 1\nmu = 0.25\n[operator]\nkind = \"harmonic_oscillator\"\n[[equation]]\n")
            .rfind("in.toml:", 0) == 0);
  CHECK(message("[system]\nm = 1\n[operator]\nkind = \"harmonic_oscillator\"\n[[equation]]\na = \"1/0\"\n")
            .rfind("in.toml:6:", 0) == 0);
  CHECK_THROWS_AS(load_spec("/nonexistent/spec.toml"), InputError);
}

TEST_CASE("content hash") {
  CHECK(content_hash("") == "cbf29ce484222325");
  CHECK(content_hash("a") == "af63dc4c8601ec8c");
}

TEST_CASE("float formatting") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(2.0) == "2.0");
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_double(std::nan("")) == "nan");
  for (double x : {1.0 / 3.0, 1e-300, 6.02214076e23, -2.5e-7}) CHECK(std::stod(format_double(x)) == x);
}

TEST_CASE("deterministic JSON") {
  Json j;
  j["b"] = 1.5;
  j["a"] = std::numeric_limits<double>::infinity();
  j["big"] = "123456789012345678901234567890";
  j["list"] = Json::array({1, 2, 3});
  CHECK(dump_json(j) == "{\n  \"b\": 1.5,\n  \"a\": \"inf\",\n  \"big\": \"123456789012345678901234567890\",\n  \"list\": [1, 2, 3]\n}\n");
  DiophantineReport r;
  DiophantineWitness w;
  w.tau = {BigInt(1) << 80};
  w.ell = 3;
  r.witnesses.push_back(w);
  auto rj = to_json(r);
  CHECK(rj["witnesses"][0]["tau"][0] == "1208925819614629174706176");
}

TEST_CASE("resonance CSV") {
  auto s = parse_spec("[system]\nm = 1\nmu = 1\n[operator]\nkind = \"harmonic_oscillator\"\n[[equation]]\na = \"1/2\"\n");
  CHECK(resonance_csv(resonance_table(s, 2), 1) == "j,lambda,gap_1\n1,1.0,0.5\n2,3.0,0.5\n");
  CHECK(resonance_csv({}, 2) == "j,lambda,gap_1,gap_2\n");
}
