#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "robust_cluster/error.hpp"
#include "robust_cluster/reference.hpp"

using namespace robust_cluster;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& text) {
  const fs::path p = fs::temp_directory_path() / ("rc_ref_" + name);
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("published reference cells") {
  const auto t = ReferenceTables::load_default();
  const auto a = t.lookup("nu", "k=2 nu=10", "COD+IOD");
  CHECK(a.mean == 0.014);
  CHECK(a.stderr_ == 0.000);
  const auto b = t.lookup("sigma", "k=3 sigma=10", "COD+IOD");
  CHECK(b.mean == 0.509);
  CHECK(b.stderr_ == 0.003);
  const auto c = t.lookup("dim", "k=3 d=30", "COD+IOD");
  CHECK(c.mean == 0.467);
  CHECK(c.stderr_ == 0.002);
  CHECK(t.lookup("nu", "k=3 nu=1.5", "COD+IOD").mean == 0.364);
  CHECK(t.lookup("sigma", "k=2 sigma=1", "COD+IOD").mean == 0.014);
  CHECK(t.lookup("dim", "k=2 d=30", "COD+IOD").mean == 0.309);
  CHECK(t.lookup("letters", "classes=WV outliers=without", "COD+IOD").mean == 0.276);
  CHECK(t.lookup("letters", "classes=WV outliers=without", "Lloyd+kmeans++").mean == 0.355);
  CHECK_THROWS_AS(t.lookup("nu", "k=9 nu=1", "COD+IOD"), std::out_of_range);

  for (const std::string table : {"nu", "sigma", "dim"}) {
    CHECK(t.scenarios(table).size() == 6);
    CHECK(t.methods(table).size() == 4);
  }
  CHECK(t.scenarios("letters").size() == 4);
  CHECK(t.methods("letters").size() == 5);
  CHECK(t.size() == 92);
}

TEST_CASE("reference loading validates values and completeness") {
  const std::string header = "table,scenario,method,mean,stderr\n";
  CHECK_THROWS_AS(ReferenceTables::load(write_temp("a.csv", header + "nu,s,m,1.2,0.0\n")),
                  ParseError);
  CHECK_THROWS_AS(ReferenceTables::load(write_temp("b.csv", header + "nu,s,m,0.2,-1\n")),
                  ParseError);
  CHECK_THROWS_AS(
      ReferenceTables::load(write_temp("c.csv", header + "nu,s,m,0.2,0\nnu,s,m,0.3,0\n")),
      ParseError);
  CHECK_THROWS_AS(ReferenceTables::load(write_temp(
                      "d.csv", header + "nu,s1,m1,0.2,0\nnu,s1,m2,0.2,0\nnu,s2,m1,0.2,0\n")),
                  ParseError);
  CHECK_THROWS_AS(ReferenceTables::load(write_temp("e.csv", header + "nu,s,m,x,0\n")), ParseError);
  CHECK(ReferenceTables::load(write_temp("f.csv", header + "nu,s,m,0.2,0\n")).size() == 1);
}
