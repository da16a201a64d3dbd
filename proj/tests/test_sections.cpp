#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "sheaflab/sections.hpp"
#include "support/generators.hpp"
#include "support/rational.hpp"

using namespace sheaflab;

namespace {

auto code_is(Errc want) {
  return Catch::Matchers::Predicate<Error>(
      [want](const Error& e) { return e.code() == want; });
}

Eigen::VectorXd vec(std::initializer_list<double> entries) {
  Eigen::VectorXd v(Eigen::Index(entries.size()));
  Eigen::Index i = 0;
  for (double e : entries) v(i++) = e;
  return v;
}

Eigen::MatrixXd scalar(double v) {
  Eigen::MatrixXd m(1, 1);
  m << v;
  return m;
}

// one edge, identity maps, all stalks one-dimensional
Sheaf identity_edge() {
  Complex cx = from_graph({"v1", "v2"}, {{"e", "v1", "v2"}});
  return build_sheaf(std::move(cx), {{"e", 1}, {"v1", 1}, {"v2", 1}},
                     {{{"v1", "e", "0"}, scalar(1)},
                      {{"v2", "e", "1"}, scalar(1)}});
}

// one edge, x2 from v1 and x3 from v2
Sheaf scaled_edge() {
  Complex cx = from_graph({"v1", "v2"}, {{"e", "v1", "v2"}});
  return build_sheaf(std::move(cx), {{"e", 1}, {"v1", 1}, {"v2", 1}},
                     {{{"v1", "e", "0"}, scalar(2)},
                      {{"v2", "e", "1"}, scalar(3)}});
}

Sheaf mixed_dims() {
  Complex cx = from_graph({"v1", "v2"}, {{"e12", "v1", "v2"}});
  Eigen::MatrixXd a(2, 2);
  a << 1, -1, 0, -2;
  Eigen::MatrixXd b(2, 3);
  b << 1, 0, 0, 0, 1, 0;
  return build_sheaf(std::move(cx), {{"e12", 2}, {"v1", 2}, {"v2", 3}},
                     {{{"v1", "e12", "0"}, a}, {{"v2", "e12", "1"}, b}});
}

Section zero_section(const Sheaf& s) {
  Section z;
  for (const Cell& c : s.complex().cells()) {
    z.values[c.id] = Eigen::VectorXd::Zero(s.stalk_dim(c.id));
  }
  return z;
}

}  // namespace

TEST_CASE("section consistency flags the failing arm only", "[sections]") {
  Sheaf s = mixed_dims();
  Section mismatch;
  mismatch.values["e12"] = vec({1, -1});
  mismatch.values["v1"] = vec({2, 1});
  mismatch.values["v2"] = vec({1, -1, 0});

  ConsistencyReport r = is_section_consistent(s, mismatch, 1e-9);
  REQUIRE_FALSE(r.consistent);
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0].relation == CoveringRelation{"v1", "e12", "0"});
  CHECK(r.violations[0].residual(0) == 0.0);
  CHECK(r.violations[0].residual(1) == -1.0);
  CHECK(r.violations[0].norm == 1.0);

  SECTION("fixing the edge value restores consistency") {
    mismatch.values["e12"] = vec({1, -2});
    mismatch.values["v2"] = vec({1, -2, 5});
    CHECK(is_section_consistent(s, mismatch, 1e-9).consistent);
  }
}

TEST_CASE("consistency threshold uses the max norm, reports Euclidean",
          "[sections]") {
  Complex cx = from_graph({"v1", "v2"}, {{"e", "v1", "v2"}});
  Eigen::MatrixXd id2 = Eigen::MatrixXd::Identity(2, 2);
  Sheaf s = build_sheaf(std::move(cx), {{"e", 2}, {"v1", 2}, {"v2", 2}},
                        {{{"v1", "e", "0"}, id2}, {{"v2", "e", "1"}, id2}});
  Section sec;
  sec.values["e"] = vec({0, 0});
  sec.values["v1"] = vec({0, 0});
  sec.values["v2"] = vec({0.3, 0.4});

  // residual on the v2 arm is (0.3, 0.4): max entry 0.4, length 0.5
  CHECK(is_section_consistent(s, sec, 0.4).consistent);
  ConsistencyReport r = is_section_consistent(s, sec, 0.39);
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0].norm == Catch::Approx(0.5));
}

TEST_CASE("the zero section is consistent at zero tolerance", "[sections]") {
  std::mt19937 rng(123);
  for (int trial = 0; trial < 100; ++trial) {
    Sheaf s = gen::random_graph_sheaf(rng);
    REQUIRE(is_section_consistent(s, zero_section(s), 0.0).consistent);
  }
}

TEST_CASE("section consistency validates its input", "[sections]") {
  Sheaf s = identity_edge();
  Section sec = zero_section(s);

  SECTION("missing cell") {
    sec.values.erase("e");
    CHECK_THROWS_MATCHES(is_section_consistent(s, sec, 0.0), Error,
                         code_is(Errc::MissingCellValue));
  }
  SECTION("unknown cell") {
    sec.values["zzz"] = vec({0});
    CHECK_THROWS_MATCHES(is_section_consistent(s, sec, 0.0), Error,
                         code_is(Errc::UnknownCell));
  }
  SECTION("wrong length") {
    sec.values["v1"] = vec({0, 0});
    CHECK_THROWS_MATCHES(is_section_consistent(s, sec, 0.0), Error,
                         code_is(Errc::DimensionMismatch));
  }
}

TEST_CASE("coboundary of one identity edge is a difference row",
          "[sections]") {
  CoboundaryOperator delta = assemble_coboundary(identity_edge());
  Eigen::MatrixXd expected(1, 2);
  expected << 1, -1;
  CHECK(delta.matrix() == expected);
  CHECK(delta.column_cells() == std::vector<std::string>{"v1", "v2"});
  CHECK(delta.row_cells() == std::vector<std::string>{"e"});
  CHECK(delta.column_offset("v1") == 0);
  CHECK(delta.column_offset("v2") == 1);
  CHECK(delta.row_offset("e") == 0);
  CHECK_THROWS_MATCHES(delta.column_offset("e"), Error,
                       code_is(Errc::UnknownCell));
  CHECK_THROWS_MATCHES(delta.arms("v1"), Error, code_is(Errc::UnknownCell));

  const auto& arms = delta.arms("e");
  REQUIRE(arms.size() == 2);
  CHECK(arms[0].upper == "v1");
  CHECK(arms[0].slot == "0");
  CHECK(arms[1].upper == "v2");
  CHECK(arms[1].slot == "1");
}

TEST_CASE("an isolated node has an empty coboundary", "[sections]") {
  Complex cx = from_graph({"n0"}, {});
  Sheaf s = build_sheaf(std::move(cx), {{"n0", 3}}, {});
  CoboundaryOperator delta = assemble_coboundary(s);
  CHECK(delta.matrix().rows() == 0);
  CHECK(delta.matrix().cols() == 3);
  CHECK(delta.row_cells().empty());

  GlobalSectionBasis g = global_sections(s);
  CHECK(g.dimension() == 3);
  CHECK(g.basis.columns == Eigen::MatrixXd::Identity(3, 3));
}

TEST_CASE("coboundary blocks are +first arm, -second arm", "[sections]") {
  CoboundaryOperator delta = assemble_coboundary(mixed_dims());
  Eigen::MatrixXd expected(2, 5);
  expected << 1, -1, -1, 0, 0,
              0, -2,  0, -1, 0;
  CHECK(delta.matrix() == expected);
  CHECK(delta.column_offset("v2") == 2);
}

TEST_CASE("a dangling constraint keeps its single arm positive",
          "[sections]") {
  Complex cx = build_complex({{"e", 0}, {"v", 1}}, {{"v", "e", "0"}});
  Sheaf s = build_sheaf(std::move(cx), {{"e", 1}, {"v", 1}},
                        {{{"v", "e", "0"}, scalar(2)}});
  CoboundaryOperator delta = assemble_coboundary(s);
  Eigen::MatrixXd expected(1, 1);
  expected << 2;
  CHECK(delta.matrix() == expected);
  CHECK(global_sections(s).dimension() == 0);
}

TEST_CASE("self-loops subtract the two slot maps", "[sections]") {
  Complex cx = from_graph({"n"}, {{"loop", "n", "n"}});

  SECTION("different slot maps constrain the node") {
    Sheaf s = build_sheaf(cx, {{"loop", 1}, {"n", 1}},
                          {{{"n", "loop", "0"}, scalar(2)},
                           {{"n", "loop", "1"}, scalar(3)}});
    CoboundaryOperator delta = assemble_coboundary(s);
    CHECK(delta.matrix()(0, 0) == -1.0);
    CHECK(global_sections(s).dimension() == 0);
  }
  SECTION("equal slot maps cancel") {
    Sheaf s = build_sheaf(cx, {{"loop", 1}, {"n", 1}},
                          {{{"n", "loop", "0"}, scalar(2)},
                           {{"n", "loop", "1"}, scalar(2)}});
    CHECK(global_sections(s).dimension() == 1);
  }
}

TEST_CASE("three arms into one constraint cell are rejected", "[sections]") {
  Complex cx = build_complex(
      {{"x", 0}, {"a", 1}, {"b", 1}, {"c", 1}},
      {{"a", "x", "0"}, {"b", "x", "0"}, {"c", "x", "0"}});
  Sheaf s = build_sheaf(std::move(cx),
                        {{"x", 1}, {"a", 1}, {"b", 1}, {"c", 1}},
                        {{{"a", "x", "0"}, scalar(1)},
                         {{"b", "x", "0"}, scalar(1)},
                         {{"c", "x", "0"}, scalar(1)}});
  CHECK_THROWS_MATCHES(assemble_coboundary(s), Error,
                       code_is(Errc::UnsupportedShape));
}

TEST_CASE("stack and unstack are inverse block copies", "[sections]") {
  CoboundaryOperator delta = assemble_coboundary(mixed_dims());
  NodeAssignment a;
  a.values["v1"] = vec({2, 1});
  a.values["v2"] = vec({1, -1, 0});

  Eigen::VectorXd x = delta.stack(a);
  CHECK(x == vec({2, 1, 1, -1, 0}));
  NodeAssignment back = delta.unstack(x);
  CHECK(back.values.at("v1") == a.values.at("v1"));
  CHECK(back.values.at("v2") == a.values.at("v2"));

  SECTION("stack validates the assignment") {
    NodeAssignment missing;
    missing.values["v1"] = vec({2, 1});
    CHECK_THROWS_MATCHES(delta.stack(missing), Error,
                         code_is(Errc::MissingCellValue));

    NodeAssignment extra = a;
    extra.values["e12"] = vec({0, 0});
    CHECK_THROWS_MATCHES(delta.stack(extra), Error,
                         code_is(Errc::UnexpectedCellValue));

    NodeAssignment wrong = a;
    wrong.values["v1"] = vec({2});
    CHECK_THROWS_MATCHES(delta.stack(wrong), Error,
                         code_is(Errc::DimensionMismatch));
  }
  SECTION("unstack checks the stacked length") {
    CHECK_THROWS_MATCHES(delta.unstack(vec({1, 2})), Error,
                         code_is(Errc::DimensionMismatch));
  }
}

TEST_CASE("global sections of the scaled edge", "[sections]") {
  Sheaf s = scaled_edge();
  GlobalSectionBasis g = global_sections(s);
  REQUIRE(g.dimension() == 1);
  CHECK(g.cell_order == std::vector<std::string>{"v1", "v2"});

  const double n = std::sqrt(13.0);
  CHECK(g.basis.columns(0, 0) == Catch::Approx(3.0 / n).epsilon(1e-12));
  CHECK(g.basis.columns(1, 0) == Catch::Approx(2.0 / n).epsilon(1e-12));

  REQUIRE(g.assignments.size() == 1);
  CHECK(g.assignments[0].values.at("v1")(0) ==
        Catch::Approx(3.0 / n).epsilon(1e-12));

  // the unstacked kernel vector extends to a full consistent section
  REQUIRE(g.sections.size() == 1);
  CHECK(g.sections[0].values.at("e")(0) ==
        Catch::Approx(6.0 / n).epsilon(1e-12));
  CHECK(is_section_consistent(s, g.sections[0], 1e-9).consistent);
}

TEST_CASE("constant sheaves have one global section per component and copy",
          "[sections]") {
  std::mt19937 rng(42);
  for (int components = 1; components <= 3; ++components) {
    for (int k = 1; k <= 3; ++k) {
      Sheaf s = gen::constant_sheaf(rng, components, k);
      INFO(components << " components, stalk dim " << k);
      CHECK(global_sections(s).dimension() == components * k);
    }
  }
}

TEST_CASE("a zero-dimensional edge stalk imposes no constraint",
          "[sections]") {
  Complex cx = from_graph({"v1", "v2"}, {{"e", "v1", "v2"}});
  Sheaf s = build_sheaf(std::move(cx), {{"e", 0}, {"v1", 2}, {"v2", 2}},
                        {{{"v1", "e", "0"}, Eigen::MatrixXd(0, 2)},
                         {{"v2", "e", "1"}, Eigen::MatrixXd(0, 2)}});
  CHECK(global_sections(s).dimension() == 4);
}

TEST_CASE("global section dimension matches exact elimination on random "
          "sheaves",
          "[sections][oracle]") {
  std::mt19937 rng(9001);
  for (int trial = 0; trial < 60; ++trial) {
    Sheaf s = gen::random_graph_sheaf(rng);
    CoboundaryOperator delta = assemble_coboundary(s);
    INFO("trial " << trial);
    REQUIRE(global_sections(s).dimension() ==
            oracle::rational_nullity(delta.matrix()));
  }
}

TEST_CASE("extend_to_section fills non-maximal cells by restriction",
          "[sections]") {
  Sheaf s = scaled_edge();
  NodeAssignment a;
  a.values["v1"] = vec({3});
  a.values["v2"] = vec({2});
  Section sec = extend_to_section(s, a, 1e-9);
  CHECK(sec.values.at("e")(0) == 6.0);
  CHECK(is_section_consistent(s, sec, 0.0).consistent);
}

TEST_CASE("extend_to_section reports the first conflicting cell",
          "[sections]") {
  Sheaf s = mixed_dims();
  NodeAssignment a;
  a.values["v1"] = vec({2, 1});
  a.values["v2"] = vec({1, -1, 0});

  // the two arms land on (1, -2) and (1, -1): one unit apart
  CHECK_THROWS_MATCHES(
      extend_to_section(s, a, 0.5), InconsistentAssignmentError,
      Catch::Matchers::Predicate<InconsistentAssignmentError>(
          [](const InconsistentAssignmentError& e) {
            return e.cell() == "e12" && e.residual() == 1.0;
          }));

  // the threshold is strict, so tol == residual passes
  Section sec = extend_to_section(s, a, 1.0);
  CHECK(sec.values.at("e12") == vec({1, -2}));  // first arm wins
}

TEST_CASE("extend_to_section validates the assignment", "[sections]") {
  Sheaf s = scaled_edge();
  NodeAssignment a;
  a.values["v1"] = vec({3});

  CHECK_THROWS_MATCHES(extend_to_section(s, a, 0.0), Error,
                       code_is(Errc::MissingCellValue));
  a.values["v2"] = vec({2});
  a.values["e"] = vec({6});
  CHECK_THROWS_MATCHES(extend_to_section(s, a, 0.0), Error,
                       code_is(Errc::UnexpectedCellValue));
  a.values.erase("e");
  a.values["zzz"] = vec({0});
  CHECK_THROWS_MATCHES(extend_to_section(s, a, 0.0), Error,
                       code_is(Errc::UnknownCell));
  a.values.erase("zzz");
  a.values["v1"] = vec({3, 3});
  CHECK_THROWS_MATCHES(extend_to_section(s, a, 0.0), Error,
                       code_is(Errc::DimensionMismatch));
}

TEST_CASE("extension walks composite restrictions down a chain",
          "[sections]") {
  Complex cx = build_complex({{"a", 0}, {"b", 1}, {"c", 2}},
                             {{"c", "b", "0"}, {"b", "a", "0"}});
  Eigen::MatrixXd cb(2, 2);
  cb << 1, 2, 3, 4;
  Eigen::MatrixXd ba(1, 2);
  ba << 1, 1;
  Sheaf s = build_sheaf(std::move(cx), {{"a", 1}, {"b", 2}, {"c", 2}},
                        {{{"c", "b", "0"}, cb}, {{"b", "a", "0"}, ba}});

  NodeAssignment top;
  top.values["c"] = vec({1, 1});
  Section sec = extend_to_section(s, top, 0.0);
  CHECK(sec.values.at("b") == vec({3, 7}));
  CHECK(sec.values.at("a") == vec({10}));
  CHECK(is_section_consistent(s, sec, 0.0).consistent);

  // the chain complex has a one-dimensional constraint row [4, 6]
  CoboundaryOperator delta = assemble_coboundary(s);
  Eigen::MatrixXd expected(1, 2);
  expected << 4, 6;
  CHECK(delta.matrix() == expected);
}

TEST_CASE("consistency radius of one unit mismatch", "[sections]") {
  Sheaf s = scaled_edge();
  NodeAssignment ones;
  ones.values["v1"] = vec({1});
  ones.values["v2"] = vec({1});
  CHECK(consistency_radius(s, ones) == 1.0);  // |2*1 - 3*1|

  NodeAssignment matched;
  matched.values["v1"] = vec({3});
  matched.values["v2"] = vec({2});
  CHECK(consistency_radius(s, matched) == 0.0);
}

TEST_CASE("radius, per-edge residuals, and extension thresholds agree",
          "[sections]") {
  std::mt19937 rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    Sheaf s = gen::random_graph_sheaf(rng);
    NodeAssignment a = gen::random_assignment(rng, s);
    CoboundaryOperator delta = assemble_coboundary(s);

    double radius = consistency_radius(s, a);
    double direct = (delta.matrix() * delta.stack(a)).norm();
    REQUIRE(radius == direct);

    double sum_sq = 0.0;
    double max_res = 0.0;
    for (const std::string& row : delta.row_cells()) {
      const auto& arms = delta.arms(row);
      Eigen::VectorXd res = arms[0].map * a.values.at(arms[0].upper);
      if (arms.size() > 1) res -= arms[1].map * a.values.at(arms[1].upper);
      sum_sq += res.squaredNorm();
      max_res = std::max(max_res, res.norm());
    }
    REQUIRE(radius * radius == Catch::Approx(sum_sq).margin(1e-9));

    // extension succeeds at the worst per-edge residual and fails just below
    CHECK_NOTHROW(extend_to_section(s, a, max_res));
    if (max_res > 1e-9) {
      CHECK_THROWS_AS(extend_to_section(s, a, max_res * 0.999999),
                      InconsistentAssignmentError);
    }
  }
}

TEST_CASE("nearest global section projects onto the kernel", "[sections]") {
  Sheaf s = scaled_edge();
  NodeAssignment probe;
  probe.values["v1"] = vec({1});
  probe.values["v2"] = vec({0});

  NodeAssignment p = nearest_global_section(s, probe);
  CHECK(p.values.at("v1")(0) == Catch::Approx(9.0 / 13.0).epsilon(1e-12));
  CHECK(p.values.at("v2")(0) == Catch::Approx(6.0 / 13.0).epsilon(1e-12));
  CHECK(consistency_radius(s, p) < 1e-12);
}

TEST_CASE("projection is idempotent and never increases the radius",
          "[sections]") {
  std::mt19937 rng(31337);
  for (int trial = 0; trial < 30; ++trial) {
    Sheaf s = gen::random_graph_sheaf(rng);
    NodeAssignment a = gen::random_assignment(rng, s);
    NodeAssignment p = nearest_global_section(s, a);
    NodeAssignment pp = nearest_global_section(s, p);

    CoboundaryOperator delta = assemble_coboundary(s);
    Eigen::VectorXd xp = delta.stack(p);
    Eigen::VectorXd xpp = delta.stack(pp);
    if (xp.size() == 0) continue;
    REQUIRE((xp - xpp).cwiseAbs().maxCoeff() < 1e-10);
    REQUIRE(consistency_radius(s, p) <= consistency_radius(s, a) + 1e-12);
  }
}

TEST_CASE("no kernel member is closer than the projection", "[sections]") {
  std::mt19937 rng(4242);
  Sheaf s = scaled_edge();
  CoboundaryOperator delta = assemble_coboundary(s);
  GlobalSectionBasis g = global_sections(s);
  REQUIRE(g.dimension() == 1);

  NodeAssignment a = gen::random_assignment(rng, s);
  Eigen::VectorXd x = delta.stack(a);
  Eigen::VectorXd p = delta.stack(nearest_global_section(s, a));
  std::uniform_real_distribution<double> coef(-5.0, 5.0);
  for (int i = 0; i < 50; ++i) {
    Eigen::VectorXd z = g.basis.columns * Eigen::VectorXd::Constant(1, coef(rng));
    REQUIRE((x - p).norm() <= (x - z).norm() + 1e-9);
  }
}

TEST_CASE("laplacian of the identity edge is the graph laplacian",
          "[sections]") {
  Eigen::MatrixXd l = sheaf_laplacian(identity_edge());
  Eigen::MatrixXd expected(2, 2);
  expected << 1, -1, -1, 1;
  CHECK(l == expected);
}

TEST_CASE("laplacian of the scaled edge", "[sections]") {
  Sheaf s = scaled_edge();
  Eigen::MatrixXd l = sheaf_laplacian(s);
  Eigen::MatrixXd expected(2, 2);
  expected << 4, -6, -6, 9;
  CHECK(l == expected);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(l);
  CHECK(solver.eigenvalues()(0) == Catch::Approx(0.0).margin(1e-12));
  CHECK(solver.eigenvalues()(1) == Catch::Approx(13.0).epsilon(1e-12));
}

TEST_CASE("laplacian is symmetric positive semidefinite with the kernel of "
          "the coboundary",
          "[sections]") {
  std::mt19937 rng(555);
  for (int trial = 0; trial < 30; ++trial) {
    Sheaf s = gen::random_graph_sheaf(rng);
    Eigen::MatrixXd l = sheaf_laplacian(s);
    CoboundaryOperator delta = assemble_coboundary(s);
    REQUIRE(l.rows() == delta.matrix().cols());
    if (l.rows() == 0) continue;

    REQUIRE((l - l.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(l);
    double scale = std::max(1.0, l.cwiseAbs().maxCoeff());
    REQUIRE(solver.eigenvalues()(0) >= -1e-9 * scale);

    // same kernel as delta, via the exact rank of delta
    Eigen::Index null_l = nullspace_basis(l, 1e-9).dimension();
    REQUIRE(null_l == oracle::rational_nullity(delta.matrix()));
  }
}

TEST_CASE("laplacian quadratic form is the squared radius", "[sections]") {
  std::mt19937 rng(808);
  for (int trial = 0; trial < 20; ++trial) {
    Sheaf s = gen::random_graph_sheaf(rng);
    NodeAssignment a = gen::random_assignment(rng, s);
    CoboundaryOperator delta = assemble_coboundary(s);
    Eigen::VectorXd x = delta.stack(a);
    double r = consistency_radius(s, a);
    double quad = x.transpose() * sheaf_laplacian(s) * x;
    REQUIRE(quad == Catch::Approx(r * r).margin(1e-8));
  }
}
