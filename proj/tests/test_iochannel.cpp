#include <doctest.h>

#include <numeric>

#include "fishcoh/axioms.hpp"
#include "fishcoh/fisher.hpp"
#include "fishcoh/iochannel.hpp"
#include "fishcoh/repro.hpp"
#include "oracles.hpp"

using namespace fishcoh;

namespace {

IncoherentKraus kraus(std::vector<int> g, std::vector<Complex> c, std::vector<double> r) {
  ComplexVector cv(static_cast<Eigen::Index>(c.size()));
  RealVector rv(static_cast<Eigen::Index>(r.size()));
  for (std::size_t i = 0; i < c.size(); ++i) cv(static_cast<Eigen::Index>(i)) = c[i];
  for (std::size_t i = 0; i < r.size(); ++i) rv(static_cast<Eigen::Index>(i)) = r[i];
  return IncoherentKraus::make(std::move(g), cv, rv);
}

ParametrizedIO identity_io(int d, double theta0 = 0.0) {
  std::vector<int> g(static_cast<std::size_t>(d));
  for (int n = 0; n < d; ++n) g[static_cast<std::size_t>(n)] = n;
  return ParametrizedIO(d, theta0, {IncoherentKraus::make(g, ComplexVector::Ones(d), RealVector::Zero(d))});
}

ParametrizedIO dephasing_io(int d) {
  std::vector<IncoherentKraus> ops;
  for (int n = 0; n < d; ++n) {
    ComplexVector c = ComplexVector::Zero(d);
    c(n) = 1.0;
    ops.push_back(IncoherentKraus::make(std::vector<int>(static_cast<std::size_t>(d), n), c, RealVector::Zero(d)));
  }
  return ParametrizedIO(d, 0.0, std::move(ops));
}

DensityMatrix plus_state() {
  ComplexVector psi(2);
  psi << 1.0, 1.0;
  return DensityMatrix::from_pure(psi / std::sqrt(2.0));
}

DensityMatrix phi3() {
  return DensityMatrix::from_pure(ComplexVector::Ones(3) / std::sqrt(3.0));
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::ParseError;
}

}  // namespace

TEST_CASE("IncoherentKraus::make checks shapes and rates") {
  CHECK(code_of([] { kraus({0, 1}, {1.0, 1.0}, {0.0, 1.5}); }) == ErrorCode::InvalidKraus);
  CHECK(code_of([] { kraus({0, -1}, {1.0, 1.0}, {0.0, 0.0}); }) == ErrorCode::InvalidKraus);
  CHECK(code_of([] { kraus({0}, {1.0, 1.0}, {0.0, 0.0}); }) == ErrorCode::InvalidKraus);
  CHECK(code_of([] { ParametrizedIO(3, 0.0, {kraus({0, 1}, {1.0, 1.0}, {0.0, 0.0})}); }) ==
        ErrorCode::DimensionMismatch);
}

TEST_CASE("Kraus matrices agree with an entrywise rebuild") {
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    const auto io = oracle::random_g_io(3, rng, 0.4);
    for (std::size_t x = 0; x < io.size(); ++x) {
      for (double th : {0.4, 1.3, -2.0}) {
        CHECK(max_abs_diff(io.kraus_matrix(x, th),
                           oracle::kraus_at(io.kraus()[x], th, io.theta0(), io.out_dim())) < 1e-14);
      }
    }
  }
}

TEST_CASE("validate_io: witness IO on a qubit has a single-group certificate") {
  const auto io = witness_io(plus_state());
  const auto rep = validate_io(io);
  CHECK(rep.valid);
  CHECK(rep.certificate == ValidityCertificate::GroupDiagonal);
  CHECK(rep.groups.size() == 1);
  CHECK(rep.residual_theta0 < 1e-12);
}

TEST_CASE("validate_io: counterexample IO splits into three diagonal blocks") {
  const auto io = build_counterexample_io();
  const auto rep = validate_io(io);
  CHECK(rep.valid);
  CHECK(rep.certificate == ValidityCertificate::GroupDiagonal);
  CHECK(rep.residual_theta0 <= 1e-12);
  std::vector<RealVector> diagonals;
  for (const auto& g : rep.groups) {
    for (const auto& b : g.blocks) diagonals.push_back(b.diagonal);
  }
  REQUIRE(diagonals.size() == 3);
  const double expected[3][3] = {{0, 0.4, 0.6}, {0.4, 0.6, 0}, {0.6, 0, 0.4}};
  for (int b = 0; b < 3; ++b) {
    for (int n = 0; n < 3; ++n) CHECK(std::abs(diagonals[static_cast<std::size_t>(b)](n) - expected[b][n]) < 1e-12);
  }
  for (bool r1 : rank1_certificate(io)) CHECK(r1);
}

TEST_CASE("validate_io: identity channel is valid") {
  const auto rep = validate_io(identity_io(3));
  CHECK(rep.valid);
  CHECK(rep.certificate == ValidityCertificate::GroupDiagonal);
}

TEST_CASE("validate_io: completeness broken at theta0") {
  const ParametrizedIO io(2, 0.0, {kraus({0, 0}, {0.5, 1.0}, {0.0, 1.0})});
  const auto rep = validate_io(io);
  CHECK_FALSE(rep.valid);
  REQUIRE(rep.failure.has_value());
  CHECK(*rep.failure == ErrorCode::IncompleteAtTheta0);
  CHECK(code_of([&] { require_valid(io); }) == ErrorCode::IncompleteAtTheta0);
}

TEST_CASE("validate_io: complete at theta0 only") {
  const double s = 1.0 / std::sqrt(2.0);
  const ParametrizedIO io(2, 0.0, {kraus({0, 0}, {s, s}, {0.0, 0.0}), kraus({1, 1}, {s, -s}, {0.0, 1.0})});
  const auto rep = validate_io(io);
  CHECK(rep.residual_theta0 < 1e-12);
  CHECK_FALSE(rep.valid);
  REQUIRE(rep.failure.has_value());
  CHECK(*rep.failure == ErrorCode::IncompleteAtTheta);
  REQUIRE(rep.failing_theta.has_value());
  CHECK(code_of([&] { require_valid(io); }) == ErrorCode::IncompleteAtTheta);
}

TEST_CASE("validate_io: grid fallback certifies a uniform-phase group") {
  const double s = 1.0 / std::sqrt(2.0);
  const ParametrizedIO io(2, 0.0, {kraus({0, 0}, {s, s}, {0.0, 0.0}), kraus({1, 1}, {s, -s}, {0.5, 0.5})});
  const auto rep = validate_io(io);
  CHECK(rep.valid);
  CHECK(rep.certificate == ValidityCertificate::ThetaGrid);
  CHECK(rep.grid_thetas.size() == 11);
  CHECK(rep.grid_max_residual < 1e-8);
}

TEST_CASE("apply_io examples") {
  Rng rng(1);
  const auto rho = random_mixed_state(3, 8);
  for (double th : {0.0, 0.3, 2.0}) CHECK(max_abs_diff(apply_io(identity_io(3), rho, th).matrix(), rho.matrix()) < 1e-12);
  CHECK(max_abs_diff(apply_io(dephasing_io(3), rho, 0.7).matrix(), dephased(rho).matrix()) < 1e-12);
  for (int t = 0; t < 30; ++t) {
    const auto inc = oracle::random_incoherent_state(3, rng);
    const auto io = t % 2 ? oracle::random_g_io(3, rng, 0.2) : oracle::random_structured_io(3, rng, 0.2);
    CHECK(max_abs_diff(apply_io(io, inc, 0.2).matrix(), apply_io(io, inc, 0.5).matrix()) <= 1e-10);
  }
}

TEST_CASE("postselect_distribution examples") {
  const auto fd = postselect_distribution(identity_io(2), plus_state());
  REQUIRE(fd.size() == 1);
  CHECK(std::abs(fd.p[0] - 1.0) < 1e-12);
  CHECK(std::abs(fd.d[0]) < 1e-12);
}

TEST_CASE("postselect_distribution: counterexample against the closed-form expressions") {
  const auto io = build_counterexample_io();
  const auto rho = phi3();
  const auto fd = postselect_distribution(io, rho);
  REQUIRE(fd.size() == 9);
  const auto& r = rho.matrix();
  for (std::size_t x = 0; x < 9; ++x) {
    const auto& a = io.kraus()[x].c;
    const auto& h = io.kraus()[x].r;
    const double p = (r(0, 0) * std::norm(a(0)) + r(1, 1) * std::norm(a(1)) + r(2, 2) * std::norm(a(2))).real() +
                     2.0 * (r(0, 1) * a(0) * std::conj(a(1)) + r(1, 2) * a(1) * std::conj(a(2)) +
                            r(2, 0) * a(2) * std::conj(a(0)))
                               .real();
    // Differentiating tr(E rho E^dagger) directly gives the opposite sign of
    // the imaginary-part expression; FI only sees its square.
    const double d = -2.0 * (r(0, 1) * a(0) * std::conj(a(1)) * (h(0) - h(1)) +
                             r(1, 2) * a(1) * std::conj(a(2)) * (h(1) - h(2)) +
                             r(2, 0) * a(2) * std::conj(a(0)) * (h(2) - h(0)))
                                .imag();
    CHECK(std::abs(fd.p[x] - p) < 1e-12);
    CHECK(std::abs(fd.d[x] - d) < 1e-12);
  }
}

TEST_CASE("postselect_distribution: derivative matches finite differences") {
  Rng rng(17);
  for (int t = 0; t < 100; ++t) {
    const int d = 2 + t % 3;
    const auto io = t % 2 ? oracle::random_g_io(d, rng, 0.3) : oracle::random_structured_io(d, rng, 0.3);
    const auto rho = random_mixed_state(d, static_cast<std::uint64_t>(t));
    const auto fd = postselect_distribution(io, rho);
    const double h = 1e-5;
    const auto plus = oracle::distribution(io, rho.matrix(), 0.3 + h);
    const auto minus = oracle::distribution(io, rho.matrix(), 0.3 - h);
    const auto p0 = oracle::distribution(io, rho.matrix(), 0.3);
    for (std::size_t x = 0; x < fd.size(); ++x) {
      CHECK(std::abs(fd.p[x] - p0[x]) < 1e-12);
      CHECK(std::abs(fd.d[x] - (plus[x] - minus[x]) / (2 * h)) < 1e-8);
    }
  }
}

TEST_CASE("postselect_distribution: normalisation and incoherent nullity") {
  Rng rng(23);
  for (int t = 0; t < 200; ++t) {
    const int d = 2 + t % 3;
    const auto io = t % 2 ? oracle::random_g_io(d, rng) : oracle::random_structured_io(d, rng);
    const auto rho = random_mixed_state(d, static_cast<std::uint64_t>(1000 + t));
    const auto fd = postselect_distribution(io, rho);
    CHECK(std::abs(std::accumulate(fd.p.begin(), fd.p.end(), 0.0) - 1.0) < 1e-10);
    CHECK(std::abs(std::accumulate(fd.d.begin(), fd.d.end(), 0.0)) < 1e-10);
    const auto inc = postselect_distribution(io, oracle::random_incoherent_state(d, rng));
    for (double v : inc.d) CHECK(std::abs(v) < 1e-10);
  }
}

TEST_CASE("postmeasurement_ensemble examples") {
  const auto dep = dephasing_io(2);
  const auto ens = postmeasurement_ensemble(dep.kraus(), plus_state());
  REQUIRE(ens.weights.size() == 2);
  CHECK(std::abs(ens.weights[0] - 0.5) < 1e-12);
  CHECK(std::abs(ens.weights[1] - 0.5) < 1e-12);
  CHECK(std::abs(ens.states[0](0, 0) - 1.0) < 1e-12);
  CHECK(std::abs(ens.states[1](1, 1) - 1.0) < 1e-12);

  const auto id = identity_io(2);
  const auto single = postmeasurement_ensemble(id.kraus(), plus_state());
  REQUIRE(single.weights.size() == 1);
  CHECK(std::abs(single.weights[0] - 1.0) < 1e-12);
  CHECK(max_abs_diff(single.states[0].matrix(), plus_state().matrix()) < 1e-12);

  Rng rng(31);
  for (int t = 0; t < 100; ++t) {
    const auto ks = random_incoherent_kraus(2, rng);
    const auto rho = random_mixed_state(2, static_cast<std::uint64_t>(t));
    const auto e = postmeasurement_ensemble(ks, rho);
    double total = 0.0;
    ComplexMatrix mix = ComplexMatrix::Zero(2, 2);
    for (std::size_t l = 0; l < e.weights.size(); ++l) {
      total += e.weights[l];
      mix += e.weights[l] * e.states[l].matrix();
      CHECK(eig_hermitian(e.states[l].matrix()).values.minCoeff() > -1e-10);
    }
    CHECK(std::abs(total - 1.0) < 1e-10);
    CHECK(max_abs_diff(mix, apply_kraus(ks, rho).matrix()) < 1e-10);
  }
  const std::vector<IncoherentKraus> partial{kraus({0, 1}, {0.5, 0.5}, {0, 0})};
  CHECK(code_of([&] { postmeasurement_ensemble(partial, plus_state()); }) == ErrorCode::Incomplete);
}

TEST_CASE("refine_to_rank1 examples") {
  const auto refined = refine_to_rank1(identity_io(3));
  CHECK(refined.size() == 3);
  CHECK(is_rank1(refined));
  for (std::size_t x = 0; x < 3; ++x) {
    const ComplexMatrix e = refined.kraus_matrix(x, 0.0);
    const ComplexMatrix proj = e.adjoint() * e;
    CHECK(std::abs(proj.trace().real() - 1.0) < 1e-12);
    CHECK(max_abs_diff(proj * proj, proj) < 1e-12);
    CHECK(is_incoherent(DensityMatrix::from_matrix(proj), 1e-9));
  }

  Rng rng(41);
  for (int t = 0; t < 20; ++t) {
    const auto io = oracle::random_structured_io(3, rng);
    REQUIRE(is_rank1(io));
    const auto ref = refine_to_rank1(io);
    const auto rho = random_mixed_state(3, static_cast<std::uint64_t>(t));
    CHECK(std::abs(classical_fi(postselect_distribution(ref, rho)) -
                   classical_fi(postselect_distribution(io, rho))) < 1e-10);
  }
}

TEST_CASE("refine_to_rank1 is valid, rank-1 and never loses information") {
  Rng rng(43);
  int non_rank1 = 0;
  for (int t = 0; t < 100; ++t) {
    const auto io = oracle::random_g_io(3, rng);
    if (!is_rank1(io)) ++non_rank1;
    const auto ref = refine_to_rank1(io);
    CHECK(validate_io(ref).valid);
    CHECK(is_rank1(ref));
    const auto rho = random_pure_state(3, static_cast<std::uint64_t>(t));
    const double before = oracle::fd_fisher(io, rho.matrix());
    const double after = classical_fi(postselect_distribution(ref, rho));
    CHECK(std::abs(classical_fi(postselect_distribution(io, rho)) - before) < 1e-6);
    CHECK(after >= classical_fi(postselect_distribution(io, rho)) - 1e-12);
  }
  CHECK(non_rank1 > 50);
}

TEST_CASE("compose_after stays inside the valid class") {
  Rng rng(47);
  for (int t = 0; t < 100; ++t) {
    const int d = 2 + t % 3;
    const auto io = t % 2 ? oracle::random_g_io(d, rng) : oracle::random_structured_io(d, rng);
    const auto first = random_incoherent_kraus(d, rng);
    const auto composed = compose_after(io, first);
    CHECK(validate_io(composed).valid);
    const auto rho = random_mixed_state(d, static_cast<std::uint64_t>(t));
    const auto direct = apply_io(io, apply_kraus(first, rho), io.theta0() + 0.4);
    CHECK(max_abs_diff(apply_io(composed, rho, io.theta0() + 0.4).matrix(), direct.matrix()) < 1e-10);
  }
}

TEST_CASE("witness_io") {
  const auto io = witness_io(plus_state());
  const double fi = classical_fi(postselect_distribution(io, plus_state()));
  CHECK(fi > 0.4);
  CHECK(std::abs(fi - oracle::fd_fisher(io, plus_state().matrix())) < 1e-6);

  const double q[2] = {0.3, 0.7};
  CHECK(code_of([&] { witness_io(DensityMatrix::diagonal(q)); }) == ErrorCode::StateIncoherent);

  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto rho = random_mixed_state(3, s);
    for (double th : {0.0, 1.1}) {
      const auto w = witness_io(rho, th);
      CHECK(validate_io(w).valid);
      CHECK(classical_fi(postselect_distribution(w, rho)) > 1e-6);
    }
  }
}
