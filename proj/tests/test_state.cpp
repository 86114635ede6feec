#include <catch2/catch_amalgamated.hpp>

#include "qcorr/state.hpp"

using namespace qcorr;

namespace {

DensityMatrix bell_state() {
  cvec amps(4);
  amps << 1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0);
  PureState psi{{2, 2}, {"A", "B"}, amps};
  return psi.to_density();
}

cmat random_hermitian(int d, Rng& rng) {
  cmat g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = rng.cgaussian();
  return hermitize(g);
}

}  // namespace

TEST_CASE("herm_eig basic spectra") {
  Rng rng(42);

  SECTION("identity") {
    EigResult e = herm_eig(cmat::Identity(2, 2));
    CHECK(e.values[0] == Catch::Approx(1.0));
    CHECK(e.values[1] == Catch::Approx(1.0));
  }

  SECTION("pauli z") {
    cmat z = cmat::Zero(2, 2);
    z(0, 0) = 1.0;
    z(1, 1) = -1.0;
    EigResult e = herm_eig(z);
    CHECK(e.values[0] == Catch::Approx(-1.0));
    CHECK(e.values[1] == Catch::Approx(1.0));
  }

  SECTION("random 4x4 reconstructs") {
    cmat m = random_hermitian(4, rng);
    EigResult e = herm_eig(m);
    cmat rec = e.vectors * e.values.asDiagonal().toDenseMatrix().cast<cplx>() *
               e.vectors.adjoint();
    CHECK((rec - m).norm() <= 1e-10 * std::max(1.0, m.norm()));
    for (int i = 1; i < e.values.size(); ++i) CHECK(e.values[i] >= e.values[i - 1]);
  }

  SECTION("rejects non-Hermitian") {
    cmat m(2, 2);
    m << 0.0, 1.0, 0.0, 0.0;
    CHECK_THROWS_AS(herm_eig(m), validation_error);
  }
}

TEST_CASE("partial trace") {
  Rng rng(1);

  SECTION("bell marginal is maximally mixed") {
    DensityMatrix rho = bell_state();
    DensityMatrix a = partial_trace(rho, {"A"});
    CHECK((a.m - 0.5 * cmat::Identity(2, 2)).norm() < 1e-12);
  }

  SECTION("product state splits") {
    DensityMatrix r1 = random_density(2, "A", 2, rng);
    DensityMatrix r2 = random_density(3, "B", 2, rng);
    DensityMatrix prod = tensor(r1, r2);
    CHECK((partial_trace(prod, {"A"}).m - r1.m).norm() < 1e-12);
    CHECK((partial_trace(prod, {"B"}).m - r2.m).norm() < 1e-12);
  }

  SECTION("composition: Tr_C then Tr_B equals Tr_BC") {
    DensityMatrix rho = random_density({2, 2, 2}, {"A", "B", "C"}, 4, rng);
    DensityMatrix one_step = partial_trace(rho, {"A"});
    DensityMatrix two_step = partial_trace(partial_trace(rho, {"A", "B"}), {"A"});
    CHECK((one_step.m - two_step.m).norm() < 1e-12);
  }

  SECTION("unknown label raises") {
    DensityMatrix rho = bell_state();
    CHECK_THROWS_AS(partial_trace(rho, {"Z"}), validation_error);
  }

  SECTION("uncorrelated factor drops out") {
    DensityMatrix ab = random_density({2, 2}, {"A", "B"}, 3, rng);
    DensityMatrix c = random_density(3, "C", 2, rng);
    DensityMatrix joint = tensor(ab, c);
    CHECK((partial_trace(joint, {"A", "B"}).m - ab.m).norm() < 1e-12);
  }
}

TEST_CASE("purify") {
  Rng rng(7);

  SECTION("pure input gives one-dimensional ancilla") {
    DensityMatrix rho = bell_state();
    PureState p = purify(rho);
    CHECK(p.dims.back() == 1);
  }

  SECTION("maximally mixed qubit purifies to bell-type state") {
    DensityMatrix rho = single_density(0.5 * cmat::Identity(2, 2), "A");
    PureState p = purify(rho);
    CHECK(p.dims.back() == 2);
    DensityMatrix back = partial_trace(p.to_density(), {"A"});
    CHECK((back.m - rho.m).norm() < 1e-10);
  }

  SECTION("round trip reproduces rank-3 qutrit state") {
    DensityMatrix rho = random_density(3, "A", 3, rng);
    PureState p = purify(rho);
    CHECK(p.dims.back() == 3);
    DensityMatrix back = partial_trace(p.to_density(), {"A"});
    CHECK((back.m - rho.m).norm() < 1e-10);
  }
}

TEST_CASE("norms, fidelity, bures") {
  Rng rng(3);

  SECTION("self fidelity") {
    DensityMatrix rho = random_density(3, "A", 2, rng);
    CHECK(fidelity(rho.m, rho.m) == Catch::Approx(1.0).margin(1e-9));
    CHECK(bures_distance(rho.m, rho.m) < 1e-4);
  }

  SECTION("orthogonal pure states") {
    cmat p0 = cmat::Zero(2, 2), p1 = cmat::Zero(2, 2);
    p0(0, 0) = 1.0;
    p1(1, 1) = 1.0;
    CHECK(fidelity(p0, p1) == Catch::Approx(0.0).margin(1e-12));
    CHECK(trace_distance(p0, p1) == Catch::Approx(1.0));
  }

  SECTION("inequality chain sqrt(1-F) <= beta <= sqrt(trace norm) on random pairs") {
    for (int it = 0; it < 1000; ++it) {
      DensityMatrix a = random_density(2, "A", 1 + int(rng.index(2)), rng);
      DensityMatrix b = random_density(2, "A", 1 + int(rng.index(2)), rng);
      double f = fidelity(a.m, b.m);
      double beta = bures_distance(a.m, b.m);
      double tn = trace_norm(a.m - b.m);
      CHECK(std::sqrt(std::max(0.0, 1.0 - f)) <= beta + 1e-8);
      CHECK(beta <= std::sqrt(tn) + 1e-8);
    }
  }
}

TEST_CASE("random generators satisfy invariants") {
  Rng rng(99);

  SECTION("rank-1 random density is pure") {
    DensityMatrix rho = random_density(2, "A", 1, rng);
    rvec lam = herm_eigenvalues(rho.m);
    CHECK(lam.maxCoeff() == Catch::Approx(1.0).margin(1e-10));
  }

  SECTION("every generated density validates") {
    for (int it = 0; it < 20; ++it) {
      DensityMatrix rho =
          random_density({2, 3}, {"A", "B"}, 1 + int(rng.index(6)), rng);
      CHECK_NOTHROW(rho.validate());
    }
  }

  SECTION("haar unitary is unitary") {
    cmat u = random_unitary(4, rng);
    CHECK((u.adjoint() * u - cmat::Identity(4, 4)).norm() < 1e-12);
  }

  SECTION("seeded reproducibility") {
    Rng r1(123), r2(123);
    for (int i = 0; i < 100; ++i) CHECK(r1.bits() == r2.bits());
    Rng g1(5), g2(5);
    cmat u1 = random_unitary(3, g1);
    cmat u2 = random_unitary(3, g2);
    CHECK((u1 - u2).norm() == 0.0);
  }
}

TEST_CASE("permute factors round trip") {
  Rng rng(11);
  DensityMatrix rho = random_density({2, 3, 2}, {"A", "B", "C"}, 5, rng);
  DensityMatrix perm = permute_factors(rho, {"C", "A", "B"});
  DensityMatrix back = permute_factors(perm, {"A", "B", "C"});
  CHECK((back.m - rho.m).norm() < 1e-14);
  CHECK((partial_trace(perm, {"B"}).m - partial_trace(rho, {"B"}).m).norm() < 1e-13);
}

TEST_CASE("conj_on_factor matches kron sandwich") {
  Rng rng(13);
  DensityMatrix rho = random_density({2, 3}, {"A", "B"}, 4, rng);
  cmat x(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) x(i, j) = rng.cgaussian();
  DensityMatrix got = conj_on_factor(rho, x, "B");
  cmat l = kron(cmat::Identity(2, 2), x);
  cmat want = l * rho.m * l.adjoint();
  CHECK((got.m - want).norm() < 1e-12);
}
