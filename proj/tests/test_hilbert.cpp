#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "tribeam/hilbert.hpp"

using namespace tribeam;
using namespace tribeam::hilbert;

namespace {

const double kTol = 1e-12;
const double kPi = std::numbers::pi;
const Complex kI(0.0, 1.0);

StateVector output_state(const ModeBasis& basis) {
  // (1/2, 1/2, 1/sqrt 2) on (a, b, h).
  Vector v(3);
  v << Complex(0.5), Complex(0.5), Complex(1.0 / std::sqrt(2.0));
  return {basis, v};
}

// alpha|a> + beta|b> with unit-modulus coefficients and relative phase phi.
StateVector interference_ray(const ModeBasis& basis, double phi) {
  Vector v = Vector::Zero(basis.dimension());
  v(basis.index_of("a")) = std::polar(1.0, phi);
  v(basis.index_of("b")) = Complex(1.0);
  return {basis, v};
}

StateVector random_state(const ModeBasis& basis, oracle::TestRng& rng) {
  Vector v(basis.dimension());
  for (int i = 0; i < basis.dimension(); ++i) {
    v(i) = Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
  }
  return {basis, v};
}

}  // namespace

TEST_CASE("mode basis") {
  const auto basis = ModeBasis::beams();
  CHECK(basis.dimension() == 3);
  CHECK(basis.index_of("a") == 0);
  CHECK(basis.index_of("h") == 2);
  CHECK(basis.find("k") == -1);
  CHECK_THROWS_AS((void)basis.index_of("k"), BasisMismatchError);
  CHECK(ModeBasis::beams() == ModeBasis::beams());
  CHECK(ModeBasis::beams() != ModeBasis::beams_with_vacuum());
  CHECK_THROWS_AS(ModeBasis({"a", "a"}), ConfigurationError);
  CHECK_THROWS_AS(ModeBasis({}), ConfigurationError);
}

TEST_CASE("inner product on the orthonormal beam basis") {
  const auto basis = ModeBasis::beams();
  const auto a = StateVector::basis_state(basis, "a");
  const auto b = StateVector::basis_state(basis, "b");
  const auto h = StateVector::basis_state(basis, "h");
  const auto psi = output_state(basis);

  CHECK(std::abs(inner_product(a, b)) <= kTol);
  CHECK(std::abs(inner_product(psi, psi) - Complex(1.0)) <= kTol);
  CHECK(std::abs(inner_product(h, psi) - Complex(1.0 / std::sqrt(2.0))) <= kTol);

  SUBCASE("conjugate symmetry for random vectors") {
    oracle::TestRng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
      const auto u = random_state(basis, rng);
      const auto v = random_state(basis, rng);
      const Complex lhs = inner_product(u, v);
      const Complex rhs = std::conj(inner_product(v, u));
      CHECK(std::abs(lhs - rhs) <= kTol);
    }
  }

  SUBCASE("mismatched bases are rejected") {
    const auto other = StateVector::basis_state(ModeBasis::beams_with_vacuum(), "a");
    CHECK_THROWS_AS((void)inner_product(a, other), BasisMismatchError);
  }
}

TEST_CASE("ray projector") {
  const auto basis = ModeBasis::beams();

  SUBCASE("|a><a| has unit trace and is idempotent") {
    const auto p = ray_projector(StateVector::basis_state(basis, "a"));
    CHECK(std::abs(p.trace() - Complex(1.0)) <= kTol);
    CHECK(p.is_hermitian());
    CHECK(p.is_idempotent());
  }

  SUBCASE("unit-modulus superposition ray: trace 2 and P^2 = 2P") {
    // Oracle: direct matrix multiplication on raw arrays.
    const double phi = 0.7;
    oracle::Vec<3> raw{std::polar(1.0, phi), oracle::C(1.0), oracle::C(0.0)};
    const auto p_raw = oracle::outer<3>(raw);
    const auto p2_raw = oracle::mul<3>(p_raw, p_raw);
    CHECK(std::abs(oracle::trace<3>(p_raw) - oracle::C(2.0)) <= kTol);
    CHECK(oracle::frobenius<3>(oracle::sub<3>(p2_raw, oracle::scale<3>(oracle::C(2.0), p_raw))) <= kTol);

    const auto p = ray_projector(interference_ray(basis, phi));
    CHECK(std::abs(p.trace() - Complex(2.0)) <= kTol);
    CHECK(((p * p) - (Complex(2.0) * p)).frobenius_norm() <= kTol);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        CHECK(std::abs(p.matrix()(i, j) - p_raw[i][j]) <= kTol);
      }
    }
  }

  SUBCASE("normalize flag is a no-op on unit vectors") {
    const auto h = StateVector::basis_state(basis, "h");
    const auto p0 = ray_projector(h, false);
    const auto p1 = ray_projector(h, true);
    CHECK((p0 - p1).frobenius_norm() <= kTol);
  }

  SUBCASE("zero vector is degenerate") {
    CHECK_THROWS_AS((void)ray_projector(StateVector::zero(basis)), DegenerateInputError);
  }

  SUBCASE("normalized projector of a random ray is idempotent with trace 1") {
    oracle::TestRng rng(23);
    for (int trial = 0; trial < 50; ++trial) {
      const auto v = random_state(basis, rng).normalized();
      const auto p = ray_projector(v, true);
      CHECK(p.is_idempotent(kTol));
      CHECK(std::abs(p.trace() - Complex(1.0)) <= kTol);
    }
  }
}

TEST_CASE("expectation values") {
  const auto basis = ModeBasis::beams();
  const auto psi = output_state(basis);
  const auto p_l = ray_projector(StateVector::basis_state(basis, "a"));

  CHECK(std::abs(expectation(p_l, psi) - 0.25) <= kTol);

  SUBCASE("in-phase and out-of-phase interference rays") {
    const auto p_k0 = ray_projector(interference_ray(basis, 0.0));
    const auto p_kpi = ray_projector(interference_ray(basis, kPi));
    CHECK(std::abs(expectation(p_k0, psi) - 1.0) <= kTol);
    // |1/2 - 1/2|^2 by direct evaluation.
    const double direct = std::norm(Complex(0.5) - Complex(0.5));
    CHECK(std::abs(expectation(p_kpi, psi) - direct) <= kTol);
  }

  SUBCASE("non-Hermitian operator is a contract violation") {
    Matrix m = Matrix::Zero(3, 3);
    m(0, 1) = Complex(1.0);
    CHECK_THROWS_AS((void)expectation(LinearOperator(basis, m), psi), ContractViolationError);
  }

  SUBCASE("linear in the operator, invariant under global phase") {
    oracle::TestRng rng(37);
    for (int trial = 0; trial < 30; ++trial) {
      const auto s = random_state(basis, rng).normalized();
      const auto p = ray_projector(random_state(basis, rng));
      const auto q = ray_projector(random_state(basis, rng));
      const double x = rng.uniform(-2.0, 2.0);
      const double y = rng.uniform(-2.0, 2.0);
      const auto combo = Complex(x) * p + Complex(y) * q;
      CHECK(std::abs(expectation(combo, s) - (x * expectation(p, s) + y * expectation(q, s))) <=
            kTol);
      const auto rotated = std::polar(1.0, rng.uniform(0.0, 2.0 * kPi)) * s;
      CHECK(std::abs(expectation(p, rotated) - expectation(p, s)) <= kTol);
    }
  }
}

TEST_CASE("completeness deviation") {
  const auto basis = ModeBasis::beams();
  const auto p_l = ray_projector(StateVector::basis_state(basis, "a"));
  const auto p_m = ray_projector(StateVector::basis_state(basis, "b"));
  const auto p_p = ray_projector(StateVector::basis_state(basis, "h"));

  SUBCASE("the movable-detector basis resolves the identity") {
    const std::vector<LinearOperator> projs{p_l, p_m, p_p};
    CHECK(completeness_deviation(projs) <= kTol);
  }

  SUBCASE("sum projector plus p also resolves the identity") {
    const std::vector<LinearOperator> projs{p_l + p_m, p_p};
    CHECK(completeness_deviation(projs) <= kTol);
  }

  SUBCASE("interference ray plus p falls short of the identity") {
    const std::vector<LinearOperator> projs{ray_projector(interference_ray(basis, 0.0)), p_p};
    CHECK(completeness_deviation(projs) > 0.4);
  }

  SUBCASE("deviation is sqrt(2) for every relative phase, eigenvalue oracle") {
    // Oracle route: eigenvalues of (P_k + P_p - I) on raw matrices. The sum
    // spans at most two dimensions of a three-dimensional space, so the
    // deviation stays far above the 0.4 threshold on the whole grid.
    for (int i = 0; i < 64; ++i) {
      const double phi = 2.0 * kPi * i / 64.0;
      oracle::Vec<3> ray{std::polar(1.0, phi), oracle::C(1.0), oracle::C(0.0)};
      oracle::Vec<3> h{oracle::C(0.0), oracle::C(0.0), oracle::C(1.0)};
      const auto gap =
          oracle::sub<3>(oracle::add<3>(oracle::outer<3>(ray), oracle::outer<3>(h)),
                         oracle::identity<3>());
      const double oracle_dev = oracle::frobenius_via_eigenvalues<3>(gap);
      CHECK(oracle_dev > 0.4);
      CHECK(std::abs(oracle_dev - std::sqrt(2.0)) <= 1e-9);

      const std::vector<LinearOperator> projs{ray_projector(interference_ray(basis, phi)), p_p};
      const double dev = completeness_deviation(projs);
      CHECK(dev > 0.4);
      CHECK(std::abs(dev - oracle_dev) <= 1e-9);
    }
  }

  SUBCASE("vacuum slot is excluded from the identity comparison") {
    const auto big = ModeBasis::beams_with_vacuum();
    const std::vector<LinearOperator> projs{
        ray_projector(StateVector::basis_state(big, "a")),
        ray_projector(StateVector::basis_state(big, "b")),
        ray_projector(StateVector::basis_state(big, "h"))};
    CHECK(completeness_deviation(projs) <= kTol);
  }

  SUBCASE("mixed bases are rejected") {
    const auto other = ray_projector(StateVector::basis_state(ModeBasis::beams_with_vacuum(), "a"));
    const std::vector<LinearOperator> projs{p_l, other};
    CHECK_THROWS_AS((void)completeness_deviation(projs), BasisMismatchError);
  }
}

TEST_CASE("global-phase comparison helper") {
  const auto basis = ModeBasis::beams();
  const auto u = interference_ray(basis, 0.3);
  CHECK(equal_up_to_global_phase(u, std::polar(1.0, 1.2) * u));
  CHECK_FALSE(equal_up_to_global_phase(u, interference_ray(basis, 0.4)));
  CHECK_FALSE(equal_up_to_global_phase(u, Complex(2.0) * u));
  CHECK(equal_up_to_global_phase(StateVector::zero(basis), StateVector::zero(basis)));
}

TEST_CASE("state vector plumbing") {
  const auto basis = ModeBasis::beams();
  const auto psi = output_state(basis);
  CHECK(psi.is_normalized());
  CHECK(std::abs(psi.amplitude("h") - Complex(1.0 / std::sqrt(2.0))) <= kTol);
  CHECK_THROWS_AS((void)StateVector::zero(basis).normalized(), DegenerateInputError);
  CHECK_THROWS_AS(StateVector(basis, Vector::Zero(2)), BasisMismatchError);

  const auto op = LinearOperator::identity(basis);
  const auto applied = op.apply(psi);
  CHECK((applied - psi).norm() <= kTol);
}
