#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <numbers>

#include "fishcoh/fisher.hpp"
#include "fishcoh/repro.hpp"
#include "oracles.hpp"

using namespace fishcoh;

namespace {

ComplexVector row(Complex a, Complex b, Complex c) {
  ComplexVector v(3);
  v << a, b, c;
  return v / std::sqrt(3.0);
}

Complex phase(double angle) { return std::polar(1.0, angle); }

}  // namespace

TEST_CASE("counterexample coefficients match the reference table") {
  const double s4 = std::sqrt(0.4), s6 = std::sqrt(0.6);
  const double w = 2.0 * std::numbers::pi / 3.0;
  const std::vector<ComplexVector> table = {
      row(0, s4, s6),
      row(0, s4 * phase(-w), s6 * phase(w)),
      row(0, s4 * phase(-2 * w), s6 * phase(2 * w)),
      row(s4, s6, 0),
      row(s4, s6 * phase(w), 0),
      row(s4, s6 * phase(2 * w), 0),
      row(s6, 0, s4),
      row(s6, 0, s4 * phase(w)),
      row(s6, 0, s4 * phase(2 * w)),
  };
  const auto io = build_counterexample_io();
  REQUIRE(io.size() == 9);
  CHECK(io.dim() == 3);
  CHECK(io.theta0() == 0.0);
  for (std::size_t x = 0; x < 9; ++x) {
    const auto& k = io.kraus()[x];
    CHECK((k.c - table[x]).cwiseAbs().maxCoeff() < 1e-15);
    const bool first_three = x < 3;
    CHECK(k.r(0) == (first_three ? 0.0 : 1.0));
    CHECK(k.r(1) == (first_three ? 1.0 : 0.0));
    CHECK(k.r(2) == 0.0);
    // single output row per operator
    CHECK(std::all_of(k.g.begin(), k.g.end(), [&](int g) { return g == k.g.front(); }));
  }
  CHECK(validate_io(io).residual_theta0 <= 1e-12);
  CHECK(is_rank1(io));
}

TEST_CASE("counterexample state") {
  const auto rho = counterexample_state();
  CHECK(rho.dim() == 3);
  CHECK(max_abs_diff(rho.matrix(), ComplexMatrix::Constant(3, 3, 1.0 / 3.0)) < 1e-15);
}

TEST_CASE("F1 and F2 from independent evaluations") {
  const auto io = build_counterexample_io();
  const auto rho = counterexample_state();
  const double f1 = classical_fi(postselect_distribution(io, rho));
  CHECK(std::abs(f1 - 0.9410) < 5e-4);
  CHECK(std::abs(f1 - oracle::fd_fisher(io, rho.matrix())) < 1e-6);
  const double f2 = max_unitary_qfi_pure(rho).value;
  CHECK(std::abs(f2 - 0.8889) < 1e-4);
  CHECK(std::abs(f2 - 8.0 / 9.0) < 1e-12);
  CHECK(f1 - f2 >= 0.05);
}

TEST_CASE("golden suite") {
  const auto start = std::chrono::steady_clock::now();
  const auto report = run_golden_suite();
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(report.all_passed);
  CHECK(seconds < 60.0);
  REQUIRE(report.cases.size() == 2);
  CHECK(report.cases[0].expected == 0.9410);
  CHECK(report.cases[0].tolerance == 5e-4);
  CHECK(report.cases[1].expected == 0.8889);
  CHECK(report.cases[1].tolerance == 1e-4);
  for (const auto& c : report.cases) {
    CHECK(c.passed);
    CHECK_FALSE(c.provenance.empty());
  }
  REQUIRE(report.checks.size() == 2);
  for (const auto& c : report.checks) CHECK(c.passed);
  CHECK(report.checks[0].value >= 0.05);

  const auto again = run_golden_suite();
  for (std::size_t i = 0; i < report.cases.size(); ++i) CHECK(report.cases[i].computed == again.cases[i].computed);
  for (std::size_t i = 0; i < report.checks.size(); ++i) CHECK(report.checks[i].value == again.checks[i].value);
  MESSAGE("F1 = " << report.cases[0].computed << ", F2 = " << report.cases[1].computed);
}
