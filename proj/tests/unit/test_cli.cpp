#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "minlen/cli.hpp"
#include "minlen/errors.hpp"

using namespace minlen;
using namespace minlen::cli;
using std::numbers::pi;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "minlen");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const auto pos = line.find(',', start);
      cells.push_back(line.substr(start, pos - start));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    rows.push_back(cells);
  }
  return rows;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("minlen_test_" + name);
  std::ofstream(path) << content;
  return path;
}

const std::string kUndeformedDelta = "interaction.U0=" + format_double(1.0 / (2.0 * pi));

} // namespace

TEST_CASE("format_double uses 17 significant digits") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(-0.25) == "-0.25");
  CHECK(format_double(1e-300) == "1e-300");
  CHECK(format_double(2.0 / 3.0) == "0.66666666666666663");
  CHECK(format_double(kInfinity) == "inf");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("key-value parsing") {
  const auto kv = parse_key_values("# comment\n system.m1 = 2.5  # trailing\n\ninteraction.kind=coulomb\n");
  CHECK(kv.size() == 2);
  CHECK(kv.at("system.m1") == "2.5");
  CHECK(kv.at("interaction.kind") == "coulomb");
  CHECK_THROWS_AS(parse_key_values("system.m1 2.5"), ConfigError);
  CHECK_THROWS_AS(parse_key_values(" = 2"), ConfigError);

  KeyValues o;
  apply_override(o, "solve.p0=0.5");
  CHECK(o.at("solve.p0") == "0.5");
  CHECK_THROWS_AS(apply_override(o, "nonsense"), ConfigError);
}

TEST_CASE("typed configuration and validation") {
  auto kv = parse_key_values("system.m1=3\nsystem.particle1.kind=kempf\nsystem.particle1.eta=2\n"
                             "system.particle2.b=4\nsolve.p0_grid=-1:1:5\nseries.sweep=100,1000\n");
  const auto c = to_run_config(kv);
  CHECK(c.particle1.mass == 3.0);
  CHECK(c.particle1.kind == DeformationKind::Kempf);
  CHECK(c.particle1.eta == 2.0);
  CHECK(c.p0_grid == std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0});
  CHECK(c.series_sweep == std::vector<double>{100.0, 1000.0});
  const auto sys = build_system(c);
  CHECK(sys.b1() == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(sys.b2() == 4.0);

  CHECK_THROWS_AS(to_run_config(parse_key_values("unknown.key=1")), ConfigError);
  CHECK_THROWS_AS(to_run_config(parse_key_values("solve.tol=0.5")), ConfigError);
  CHECK_THROWS_AS(to_run_config(parse_key_values("solve.tol=0")), ConfigError);
  CHECK_THROWS_AS(to_run_config(parse_key_values("system.m1=abc")), ConfigError);
  CHECK_THROWS_AS(to_run_config(parse_key_values("system.particle1.kind=kempf")), ConfigError);
  CHECK_THROWS_AS(to_run_config(parse_key_values("system.particle1.b=1\nsystem.particle1.eta=1")), ConfigError);
  CHECK_THROWS_AS(to_run_config(parse_key_values("interaction.delta=1")), ConfigError);
  CHECK_THROWS_AS(to_run_config(parse_key_values("interaction.kind=yukawa")), ConfigError);
}

TEST_CASE("custom family from a table file") {
  const auto table = temp_file("table.csv", "p,g\n0,0\n1,1.5\n2,3.5\n3,6\n");
  auto kv = parse_key_values("system.particle1.kind=custom\nsystem.particle1.table=" + table.string() +
                             "\nsystem.particle2.b=2");
  const auto sys = build_system(to_run_config(kv));
  CHECK(sys.b1() == 3.0);
  CHECK(sys.particle1().deformation.g(2.0) == doctest::Approx(3.5).epsilon(1e-14));
  std::filesystem::remove(table);
}

TEST_CASE("dump-config round trip") {
  const auto first = invoke({"--set", "system.m1=3", "--set", "system.particle1.kind=inversesqrt", "--set",
                             "system.particle1.beta=0.01", "--set", "system.particle2.eta=0.1", "--set",
                             "interaction.kind=coulomb", "--set", "interaction.delta=0.3", "--set", "solve.n=2",
                             "--set", "solve.p0_grid=0.1,0.2,0.30000000000000004", "--set", "series.sweep=1e-6,1e-8",
                             "--set", "series.transcription=printed", "--format", "json", "--dump-config"});
  REQUIRE(first.code == 0);
  const auto original = to_run_config(parse_key_values(first.out));
  const auto path = temp_file("dump.cfg", first.out);
  const auto second = invoke({"--config", path.string(), "--dump-config"});
  REQUIRE(second.code == 0);
  CHECK(second.out == first.out);
  CHECK(to_run_config(parse_key_values(second.out)) == original);
  CHECK(original.format == OutputFormat::Json);
  CHECK(original.transcription == Transcription::AsPrinted);
  CHECK(original.p0_grid.back() == 0.30000000000000004);
  std::filesystem::remove(path);
}

TEST_CASE("solve: undeformed delta reports E = -0.25") {
  const auto r = invoke({"solve", "--set", kUndeformedDelta});
  REQUIRE(r.code == 0);
  const auto rows = csv(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<std::string>{"p0", "n", "E", "s", "residual", "c1", "c2", "domain"});
  CHECK(std::stod(rows[1][2]) == doctest::Approx(-0.25).epsilon(1e-12));
  CHECK(rows[1][7] == "Merged");
}

TEST_CASE("solve: exit codes") {
  const auto degenerate = invoke({"solve", "--set", "system.particle1.b=1", "--set", "system.particle2.b=1", "--set",
                                  "solve.p0=2"});
  CHECK(degenerate.code == 2);
  CHECK(degenerate.err.find("no bound state") != std::string::npos);

  const auto empty = invoke({"solve", "--set", "system.particle1.b=1", "--set", "system.particle2.b=1", "--set",
                             "solve.p0=3"});
  CHECK(empty.code == 2);

  const auto path = temp_file("bad.cfg", "system.m1 = 1\nthis line is malformed\n");
  const auto malformed = invoke({"solve", "--config", path.string()});
  CHECK(malformed.code == 1);
  CHECK_FALSE(malformed.err.empty());
  std::filesystem::remove(path);

  CHECK(invoke({"solve", "--config", "/nonexistent/minlen.cfg"}).code == 1);
  CHECK(invoke({"solve", "--set", "interaction.kind=coulomb"}).code == 1);
  CHECK(invoke({"solve", "--bogus-flag"}).code != 0);
  CHECK(invoke({}).code == 1);
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("solve: Coulomb tower as JSON") {
  const auto r = invoke({"solve", "--set", "interaction.kind=coulomb", "--set", "solve.n_max=3", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  REQUIRE(doc.size() == 4);
  for (int n = 0; n < 4; ++n) {
    CHECK(doc[n]["n"] == n);
    CHECK(doc[n]["E"].get<double>() == doctest::Approx(-0.5 / (2 * (n + 0.5) * (n + 0.5))).epsilon(1e-10));
  }
}

TEST_CASE("scan: header, parity, empty rows") {
  const auto r = invoke({"scan", "--set", "system.particle1.b=2", "--set", "system.particle2.b=2", "--set",
                         "interaction.U0=0.3", "--set", "solve.p0_grid=-1.5,-0.5,0.5,1.5,4,5"});
  REQUIRE(r.code == 0);
  const auto rows = csv(r.out);
  REQUIRE(rows.size() == 7);
  CHECK(r.out.substr(0, r.out.find('\n')) == "p0,E,residual,domain");
  CHECK(std::stod(rows[1][1]) == doctest::Approx(std::stod(rows[4][1])).epsilon(1e-12));
  CHECK(std::stod(rows[2][1]) == doctest::Approx(std::stod(rows[3][1])).epsilon(1e-12));
  CHECK(rows[5][1].empty());
  CHECK(rows[5][3] == "Merged");
  CHECK(rows[6][1].empty());
  CHECK(rows[6][3] == "Empty");
}

TEST_CASE("scan: identical cutoff shows a |p0| kink at order 1/b^2") {
  const auto r = invoke({"scan", "--set", "system.particle1.b=100", "--set", "system.particle2.b=100", "--set",
                         "interaction.U0=0.5", "--set", "solve.p0_grid=-2,-1,0,1,2"});
  REQUIRE(r.code == 0);
  const auto rows = csv(r.out);
  auto D = [&](int row) {
    const double p0 = std::stod(rows[row][0]);
    return std::stod(rows[row][1]) - p0 * p0 / 4.0 - std::stod(rows[3][1]);
  };
  CHECK(D(4) > 0.0);
  CHECK(D(2) == doctest::Approx(D(4)).epsilon(1e-9));
  CHECK(D(5) / D(4) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("wavefunction: CSV schema, norm, real delta state") {
  const auto r = invoke({"wavefunction", "--set", "system.particle1.b=5", "--set", "system.particle2.b=5", "--set",
                         "interaction.U0=0.3", "--set", "solve.p0=0.4"});
  REQUIRE(r.code == 0);
  const auto rows = csv(r.out);
  REQUIRE(rows.size() == 2049);
  CHECK(rows[0] == std::vector<std::string>{"p", "re", "im", "abs2"});
  double norm = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(std::stod(rows[i][2]) == 0.0);
    if (i > 1) {
      const double h = std::stod(rows[i][0]) - std::stod(rows[i - 1][0]);
      norm += 0.5 * h * (std::stod(rows[i][3]) + std::stod(rows[i - 1][3]));
    }
  }
  // Trapezoid rule on the exported nodes.
  CHECK(std::abs(norm - 1.0) < 1e-5);
}

TEST_CASE("wavefunction: Coulomb phase winding") {
  const auto r = invoke({"wavefunction", "--set", "system.particle1.b=20", "--set", "system.particle2.b=20", "--set",
                         "interaction.kind=coulomb", "--set", "interaction.delta=0.25", "--set", "solve.n=2", "--format",
                         "json"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["total_phase"].get<double>() == doctest::Approx(2 * pi * 2.25).epsilon(1e-9));
  const auto& re = doc["re"];
  const auto& im = doc["im"];
  double unwrapped = 0.0;
  double prev = std::atan2(im[0].get<double>(), re[0].get<double>());
  for (std::size_t k = 1; k < re.size(); ++k) {
    const double a = std::atan2(im[k].get<double>(), re[k].get<double>());
    double d = a - prev;
    d -= 2 * pi * std::round(d / (2 * pi));
    unwrapped += d;
    prev = a;
  }
  CHECK(-unwrapped == doctest::Approx(2 * pi * 2.25).epsilon(1e-3));
}

TEST_CASE("series-compare: empty sweep and cutoff slope") {
  const auto empty = invoke({"series-compare"});
  REQUIRE(empty.code == 0);
  CHECK(empty.out == "param,E_numeric,E_series,abs_diff,fitted_order\n");

  const auto r = invoke({"series-compare", "--set", "system.m1=3", "--set", "interaction.U0=1", "--set",
                         "series.sweep=100,1000,10000"});
  REQUIRE(r.code == 0);
  const auto rows = csv(r.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[1][4].empty());
  CHECK(std::stod(rows[2][4]) == doctest::Approx(3.0).epsilon(0.1));
  CHECK(std::stod(rows[3][4]) == doctest::Approx(3.0).epsilon(0.1));

  const auto first = invoke({"series-compare", "--set", "system.m1=3", "--set", "interaction.U0=1", "--set",
                             "series.sweep=100,1000,10000", "--set", "series.terms=1"});
  const auto rows1 = csv(first.out);
  CHECK(std::stod(rows1[3][4]) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("series-compare: inverse-sqrt family") {
  const auto r = invoke({"series-compare", "--set", "series.family=inversesqrt", "--set", "interaction.U0=1", "--set",
                         "series.sweep=1e-5,1e-6,1e-7"});
  REQUIRE(r.code == 0);
  const auto rows = csv(r.out);
  REQUIRE(rows.size() == 4);
  CHECK(std::stod(rows[3][4]) == doctest::Approx(3.0).epsilon(0.2));
}

TEST_CASE("--out writes the file") {
  const auto path = std::filesystem::temp_directory_path() / "minlen_test_out.csv";
  const auto r = invoke({"solve", "--set", kUndeformedDelta, "--out", path.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "p0,n,E,s,residual,c1,c2,domain");
  std::filesystem::remove(path);
}
