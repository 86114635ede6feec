#include <catch2/catch_amalgamated.hpp>

#include "qcorr/channel.hpp"

using namespace qcorr;

namespace {
rvec sorted_spectrum(const cmat& m) { return herm_eigenvalues(hermitize(m)); }
}  // namespace

TEST_CASE("channel application basics") {
  Rng rng(2);

  SECTION("identity leaves input unchanged") {
    Channel id = identity_channel(3);
    DensityMatrix rho = random_density(3, "A", 2, rng);
    CHECK((id.apply(rho.m) - rho.m).norm() < 1e-14);
  }

  SECTION("full erasure pins to the flag state") {
    Channel e1 = erasure_channel(2, 1.0);
    DensityMatrix rho = random_density(2, "A", 2, rng);
    cmat out = e1.apply(rho.m);
    cmat want = cmat::Zero(3, 3);
    want(2, 2) = 1.0;
    CHECK((out - want).norm() < 1e-12);
  }

  SECTION("random channels preserve trace and positivity") {
    for (int it = 0; it < 20; ++it) {
      Channel ch = random_channel(3, 2, 3, rng);
      ch.validate();
      DensityMatrix rho = random_density(3, "A", 2, rng);
      cmat out = ch.apply(rho.m);
      CHECK(std::abs(out.trace().real() - 1.0) < 1e-12);
      CHECK(sorted_spectrum(out).minCoeff() > -1e-10);
    }
  }

  SECTION("apply_local with identity is identity") {
    DensityMatrix rho = random_density({2, 3}, {"A", "B"}, 3, rng);
    DensityMatrix out = apply_on_factor(identity_channel(3), rho, "B");
    CHECK((out.m - rho.m).norm() < 1e-13);
  }

  SECTION("dimension mismatch raises") {
    Channel ch = identity_channel(2);
    DensityMatrix rho = random_density(3, "A", 1, rng);
    CHECK_THROWS_AS(ch.apply(rho.m), validation_error);
  }
}

TEST_CASE("stinespring and complementary channels") {
  Rng rng(17);

  SECTION("dilation reproduces the channel and its complement") {
    Channel ch = random_channel(2, 3, 2, rng);
    StinespringIsometry v = stinespring(ch);
    v.validate();
    CHECK(v.d_env == static_cast<int>(ch.kraus.size()));
    Channel comp = complementary(ch);
    comp.validate();

    DensityMatrix rho = random_density(2, "A", 2, rng);
    cmat big = v.v * rho.m * v.v.adjoint();  // on out (x) env
    DensityMatrix joint = {{ch.d_out, v.d_env}, {"B", "E"}, hermitize(big)};
    CHECK((partial_trace(joint, {"B"}).m - ch.apply(rho.m)).norm() < 1e-10);
    CHECK((partial_trace(joint, {"E"}).m - comp.apply(rho.m)).norm() < 1e-10);
  }

  SECTION("erasure complement matches the flipped erasure in spectrum") {
    Rng r(3);
    for (double p : {0.2, 0.5, 0.8}) {
      Channel er = erasure_channel(2, p);
      Channel comp = complementary(er);
      Channel flipped = erasure_channel(2, 1.0 - p);
      for (int it = 0; it < 50; ++it) {
        DensityMatrix rho = random_density(2, "A", 2, r);
        rvec s1 = sorted_spectrum(comp.apply(rho.m));
        rvec s2 = sorted_spectrum(flipped.apply(rho.m));
        // complement has env dim = d+1 = flipped output dim
        REQUIRE(s1.size() == s2.size());
        CHECK((s1 - s2).cwiseAbs().maxCoeff() < 1e-10);
      }
    }
  }

  SECTION("dephasing channel is self-complementary up to isometry") {
    Rng r(4);
    cmat basis = random_unitary(3, r);
    Channel deph = dephasing_channel(basis);
    Channel comp = complementary(deph);
    for (int it = 0; it < 20; ++it) {
      DensityMatrix rho = random_density(3, "A", 3, r);
      rvec s1 = sorted_spectrum(comp.apply(rho.m));
      rvec s2 = sorted_spectrum(deph.apply(rho.m));
      CHECK((s1 - s2).cwiseAbs().maxCoeff() < 1e-10);
    }
  }

  SECTION("double complement preserves output entropy") {
    for (int it = 0; it < 10; ++it) {
      Channel ch = random_channel(2, 2, 2, rng);
      Channel cc = complementary(complementary(ch));
      DensityMatrix rho = random_density(2, "A", 2, rng);
      CHECK(von_neumann_entropy(cc.apply(rho.m)) ==
            Catch::Approx(von_neumann_entropy(ch.apply(rho.m))).margin(1e-8));
    }
  }
}

TEST_CASE("channel mutual information") {
  Rng rng(23);

  SECTION("identity channel gives 2 S(rho)") {
    DensityMatrix rho = random_density(2, "A", 2, rng);
    CHECK(channel_mutual_information(identity_channel(2), rho.m) ==
          Catch::Approx(2.0 * von_neumann_entropy(rho)).margin(1e-9));
  }

  SECTION("full depolarizing gives zero") {
    Channel dep = depolarizing_channel(2, 1.0);
    DensityMatrix rho = random_density(2, "A", 2, rng);
    CHECK(channel_mutual_information(dep, rho.m) == Catch::Approx(0.0).margin(1e-8));
  }

  SECTION("two formulas agree") {
    for (int it = 0; it < 10; ++it) {
      Channel ch = random_channel(2, 3, 2, rng);
      DensityMatrix rho = random_density(2, "A", 2, rng);
      CHECK(channel_mutual_information(ch, rho.m) ==
            Catch::Approx(channel_mutual_information_via_purification(ch, rho.m))
                .margin(1e-8));
    }
  }

  SECTION("data processing under concatenation") {
    for (int it = 0; it < 15; ++it) {
      Channel phi = random_channel(2, 2, 2, rng);
      Channel psi = random_channel(2, 2, 2, rng);
      DensityMatrix rho = random_density(2, "A", 2, rng);
      double lhs = channel_mutual_information(compose(psi, phi), rho.m);
      double rhs = channel_mutual_information(psi, phi.apply(rho.m));
      CHECK(lhs <= rhs + 1e-8);
    }
  }
}

TEST_CASE("entropy exchange") {
  Rng rng(29);

  SECTION("unitary channel has zero exchange") {
    cmat u = random_unitary(3, rng);
    DensityMatrix rho = random_density(3, "A", 3, rng);
    CHECK(entropy_exchange(unitary_channel(u), rho.m) == Catch::Approx(0.0).margin(1e-9));
  }

  SECTION("matches output entropy of the joint state on a purification") {
    for (int it = 0; it < 10; ++it) {
      Channel ch = random_channel(2, 2, 2, rng);
      DensityMatrix rho = random_density(2, "A", 2, rng);
      PureState pure = purify(rho, "R");
      DensityMatrix joint = apply_on_factor(ch, pure.to_density(), "A");
      CHECK(entropy_exchange(ch, rho.m) ==
            Catch::Approx(von_neumann_entropy(
                              partial_trace(joint, {"A", "R"}).m) -
                          0.0)
                .margin(1e-8));
    }
  }

  SECTION("pure input: exchange equals output entropy") {
    for (int it = 0; it < 10; ++it) {
      Channel ch = random_channel(3, 2, 3, rng);
      DensityMatrix rho = random_density(3, "A", 1, rng);
      CHECK(entropy_exchange(ch, rho.m) ==
            Catch::Approx(von_neumann_entropy(ch.apply(rho.m))).margin(1e-8));
    }
  }

  SECTION("qubit depolarizing at maximally mixed input") {
    Channel dep = depolarizing_channel(2, 0.5);
    cmat half = 0.5 * cmat::Identity(2, 2);
    double direct = entropy_exchange(dep, half);
    // four-outcome Kraus construction evaluated directly
    Channel comp = complementary(dep);
    CHECK(direct == Catch::Approx(von_neumann_entropy(comp.apply(half))).margin(1e-12));
    CHECK(comp.d_out == 4);
  }
}

TEST_CASE("named constructors") {
  Rng rng(37);

  SECTION("erasure p=0 keeps input entropy") {
    Channel e0 = erasure_channel(3, 0.0);
    DensityMatrix rho = random_density(3, "A", 2, rng);
    CHECK(von_neumann_entropy(e0.apply(rho.m)) ==
          Catch::Approx(von_neumann_entropy(rho)).margin(1e-10));
  }

  SECTION("measurement channel output is diagonal") {
    Povm m = random_povm(2, 3, rng);
    Channel meas = measurement_channel(m);
    DensityMatrix rho = random_density(2, "A", 2, rng);
    cmat out = meas.apply(rho.m);
    for (int i = 0; i < out.rows(); ++i)
      for (int j = 0; j < out.cols(); ++j)
        if (i != j) CHECK(std::abs(out(i, j)) < 1e-12);
    // and the diagonal carries the outcome probabilities
    for (int i = 0; i < m.outcomes(); ++i)
      CHECK(out(i, i).real() ==
            Catch::Approx((m.elements[i] * rho.m).trace().real()).margin(1e-12));
  }

  SECTION("depolarizing constructor matches its formula") {
    DensityMatrix rho = random_density(2, "A", 2, rng);
    for (double q : {0.0, 0.3, 1.0}) {
      Channel dep = depolarizing_channel(2, q);
      cmat want = (1.0 - q) * rho.m + q * 0.5 * cmat::Identity(2, 2);
      CHECK((dep.apply(rho.m) - want).norm() < 1e-12);
    }
  }

  SECTION("semigroup composition law") {
    DensityMatrix rho = random_density(2, "A", 2, rng);
    Channel a = depolarizing_semigroup(2, 0.7);
    Channel b = depolarizing_semigroup(2, 0.4);
    Channel ab = compose(a, b);
    Channel direct = depolarizing_semigroup(2, 1.1);
    CHECK((ab.apply(rho.m) - direct.apply(rho.m)).norm() < 1e-10);
  }

  SECTION("partial trace channel agrees with partial_trace") {
    DensityMatrix rho = random_density({2, 3}, {"A", "B"}, 3, rng);
    Channel tr_b = partial_trace_channel({2, 3}, {0});
    CHECK((tr_b.apply(rho.m) - partial_trace(rho, {"A"}).m).norm() < 1e-12);
  }

  SECTION("povm completeness") {
    Povm m = random_povm(3, 5, rng);
    CHECK_NOTHROW(m.validate());
    cmat sum = cmat::Zero(3, 3);
    for (const auto& e : m.elements) sum += e;
    CHECK((sum - cmat::Identity(3, 3)).norm() < 1e-10);
  }

  SECTION("parameter range errors") {
    CHECK_THROWS_AS(erasure_channel(2, 1.5), validation_error);
    CHECK_THROWS_AS(depolarizing_channel(2, -0.1), validation_error);
    CHECK_THROWS_AS(random_channel(4, 1, 2, rng), validation_error);
  }
}
