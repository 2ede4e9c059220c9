#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "gaborfio/error.hpp"
#include "gaborfio/io.hpp"
#include "support.hpp"

using namespace gaborfio;
using gaborfio::test::v1;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "gaborfio_test_io";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Io, TableRoundTripIsBitExact) {
  CsvTable t;
  t.header = {{"kind", "demo"}, {"n", 3}};
  t.columns = {"a", "b"};
  t.rows = {{0.1, 1.0 / 3.0}, {-1e-300, 6.02214076e23}, {kPi, std::nextafter(1.0, 2.0)}};
  write_table(scratch("t.csv"), t);
  const auto back = read_table(scratch("t.csv"));
  EXPECT_EQ(back.header, t.header);
  EXPECT_EQ(back.columns, t.columns);
  EXPECT_EQ(back.rows, t.rows);
  EXPECT_THROW(read_table(scratch("missing.csv")), Error);
}

TEST(Io, FunctionRoundTrip) {
  const Grid grid(1, 8.0, 64);
  auto f = modulate(gaussian(grid, v1(0.5), 1.0), v1(0.25));
  write_function(scratch("f.csv"), f);
  const auto g = read_function(scratch("f.csv"));
  EXPECT_EQ(g.grid, grid);
  EXPECT_EQ(g.side, Side::time);
  EXPECT_EQ(g.values, f.values);
  const auto fh = fourier_transform(f);
  write_function(scratch("fh.csv"), fh);
  const auto gh = read_function(scratch("fh.csv"));
  EXPECT_EQ(gh.side, Side::frequency);
  EXPECT_EQ(gh.values, fh.values);
}

TEST(Io, CoefficientAndMatrixRoundTrip) {
  const Grid grid(1, 8.0, 64);
  const auto gs = GaborSystem::build(gaussian(grid, v1(0.0), 1.0), Lattice(grid, 0.5, 0.5));
  const auto c = analyze(gs.tight(), gs.lattice(), gaussian(grid, v1(1.0), 1.0));
  write_coefficients(scratch("c.csv"), c);
  const auto c2 = read_coefficients(scratch("c.csv"));
  EXPECT_TRUE(c2.lattice == c.lattice);
  EXPECT_EQ(c2.values, c.values);

  const auto m = gabor_matrix_direct(catalog_phase("chirp", 1), Symbol(), gs, 1e-4);
  write_matrix(scratch("m.csv"), m);
  const auto m2 = read_matrix(scratch("m.csv"));
  EXPECT_EQ(m2.nnz(), m.nnz());
  EXPECT_EQ(m2.epsilon(), m.epsilon());
  EXPECT_EQ(m2.route(), m.route());
  EXPECT_EQ(m2.phase_name(), "chirp");
  EXPECT_EQ(compare_matrices(m, m2).max_abs_difference, 0.0);
}

TEST(Io, JsonConversions) {
  const Grid grid(2, 4.0, 16);
  EXPECT_EQ(grid_from_json(grid_to_json(grid)), grid);
  const Grid g1(1, 8.0, 64);
  const Lattice lat(g1, 0.5, 0.25);
  EXPECT_TRUE(lattice_from_json(lattice_to_json(lat)) == lat);

  auto qp = QuadraticPhase::identity(1);
  qp.A(0, 0) = 0.5;
  qp.C(0, 0) = -2.0;
  qp.x0[0] = 1.0;
  const auto back = quadratic_phase_from_json(to_json(qp));
  EXPECT_EQ(back.A, qp.A);
  EXPECT_EQ(back.B, qp.B);
  EXPECT_EQ(back.C, qp.C);
  EXPECT_EQ(back.x0, qp.x0);
  EXPECT_EQ(back.eta0, qp.eta0);

  const auto h = HamiltonianQuadratic::harmonic_oscillator(1);
  EXPECT_EQ(hamiltonian_from_json(to_json(h)).H, h.H);

  const MixedNormSpec spec{kInf, 1.0, 2.0};
  const auto j = to_json(spec);
  EXPECT_EQ(j["p"], "inf");
  const auto s2 = norm_spec_from_json(Json::parse(j.dump()));
  EXPECT_TRUE(std::isinf(s2.p));
  EXPECT_EQ(s2.q, 1.0);
  EXPECT_EQ(s2.s, 2.0);
  EXPECT_THROW(norm_spec_from_json(Json{{"p", 0.5}}), ConfigError);
}

TEST(Io, ConfigHashIgnoresKeyOrder) {
  const auto a = Json::parse(R"({"b": 1, "a": {"y": [1, 2], "x": "s"}})");
  const auto b = Json::parse(R"({"a": {"x": "s", "y": [1, 2]}, "b": 1})");
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
  EXPECT_NE(config_hash(a), config_hash(Json::parse(R"({"b": 2})")));
}

TEST(Io, EnvelopeAndReproducibleTimestamp) {
  ::setenv("SOURCE_DATE_EPOCH", "86400", 1);
  EXPECT_EQ(report_timestamp(), "1970-01-02T00:00:00Z");
  const Json cfg = {{"x", 1}};
  const auto env = report_envelope("demo", cfg, Json{{"value", 2.5}});
  for (const char* key : {"kind", "version", "revision", "config_hash", "generated", "config", "result"})
    EXPECT_TRUE(env.contains(key)) << key;
  EXPECT_EQ(env["config_hash"], config_hash(cfg));
  write_json(scratch("r.json"), env);
  EXPECT_EQ(read_json(scratch("r.json")), env);
  ::unsetenv("SOURCE_DATE_EPOCH");
}
