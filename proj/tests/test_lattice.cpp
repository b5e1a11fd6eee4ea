#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qwalk/errors.hpp"
#include "qwalk/lattice.hpp"
#include "qwalk/pair.hpp"
#include "qwalk/walk.hpp"

using namespace qwalk;

namespace {

const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

CoinDensityMatrix diag(std::initializer_list<double> values) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<int>(values.size()),
                                              static_cast<int>(values.size()));
  int i = 0;
  for (double v : values) {
    m(i, i) = v;
    ++i;
  }
  return CoinDensityMatrix(m);
}

}  // namespace

TEST_CASE("window geometry") {
  const LatticeWindow w(3);
  CHECK(w.sites() == 7);
  CHECK(w.min_x() == -3);
  CHECK(w.site_index(-3) == 0);
  CHECK(w.position(6) == 3);
  CHECK(w.contains(3));
  CHECK_FALSE(w.contains(4));
  CHECK(LatticeWindow::for_steps(100).half_width() == 101);
  CHECK_THROWS_AS(LatticeWindow(0), std::invalid_argument);
}

TEST_CASE("make_single_state") {
  const LatticeWindow w(100);
  const auto basis = make_single_state(w, 0, {1.0, 0.0});
  CHECK(basis(0, 0) == Complex(1.0));
  CHECK(basis(0, 1) == Complex(0.0));
  CHECK(basis.norm_squared() == doctest::Approx(1.0));

  const auto mixed = make_single_state(w, 0, {kInvSqrt2, Complex(0.0, kInvSqrt2)});
  CHECK(std::abs(mixed.norm_squared() - 1.0) < 1e-12);

  CHECK_THROWS_AS(make_single_state(w, 0, {1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_single_state(w, 100, {1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_single_state(w, -101, {1.0, 0.0}), std::invalid_argument);
}

TEST_CASE("tensor_pair") {
  const LatticeWindow w(4);
  const auto a = make_single_state(w, 0, {1.0, 0.0});
  const auto b = make_single_state(w, 0, {0.0, 1.0});
  const TwoParticleState ab = tensor_pair(a, b);
  CHECK(ab(0, 0, 0, 1) == Complex(1.0));
  CHECK(std::abs(ab.norm_squared() - 1.0) < 1e-14);

  // Two-site states: every product entry by hand.
  SingleParticleState u(w), v(w);
  u(-1, 0) = 0.6;
  u(2, 1) = Complex(0.0, 0.8);
  v(0, 1) = kInvSqrt2;
  v(1, 0) = -kInvSqrt2;
  const TwoParticleState uv = tensor_pair(u, v);
  CHECK(std::abs(uv(-1, 0, 0, 1) - 0.6 * kInvSqrt2) < 1e-15);
  CHECK(std::abs(uv(-1, 0, 1, 0) + 0.6 * kInvSqrt2) < 1e-15);
  CHECK(std::abs(uv(2, 1, 0, 1) - Complex(0.0, 0.8 * kInvSqrt2)) < 1e-15);
  CHECK(std::abs(uv(2, 1, 1, 0) - Complex(0.0, -0.8 * kInvSqrt2)) < 1e-15);
  CHECK(std::abs(uv.norm_squared() - 1.0) < 1e-14);

  CHECK_THROWS_AS(tensor_pair(a, make_single_state(LatticeWindow(5), 0, {1.0, 0.0})),
                  std::invalid_argument);
}

TEST_CASE("position_distribution") {
  const LatticeWindow w(5);
  auto s = make_single_state(w, 0, {1.0, 0.0});
  auto p = position_distribution(s);
  CHECK(p[w.site_index(0)] == 1.0);

  hadamard_step(s);
  p = position_distribution(s);
  CHECK(p[w.site_index(1)] == doctest::Approx(0.5));
  CHECK(p[w.site_index(-1)] == doctest::Approx(0.5));
  CHECK(p[w.site_index(0)] == 0.0);
}

TEST_CASE("hadamard walk peak") {
  // Brute-force reference: 100 steps from coin |0> peak at x = 68 (value frozen).
  const LatticeWindow w = LatticeWindow::for_steps(100);
  const auto s = evolve(make_single_state(w, 0, {1.0, 0.0}), hadamard_stepper(), 100);
  const auto p = position_distribution(s);
  std::size_t peak = 0;
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    total += p[i];
    if (p[i] > p[peak]) peak = i;
  }
  CHECK(std::abs(total - 1.0) < 1e-10);
  CHECK(w.position(peak) == 68);
  double left = 0.0, right = 0.0;
  for (int x = 1; x <= 100; ++x) {
    left += p[w.site_index(-x)];
    right += p[w.site_index(x)];
  }
  CHECK(right > left + 0.3);  // asymmetric toward +x
}

TEST_CASE("reduce_to_coin single") {
  const LatticeWindow w(3);
  const auto rho = reduce_to_coin(make_single_state(w, 0, {1.0, 0.0}));
  CHECK(rho.dim() == 2);
  CHECK(rho(0, 0) == Complex(1.0));
  CHECK(rho(1, 1) == Complex(0.0));
  CHECK(rho(0, 1) == Complex(0.0));

  SingleParticleState s(w);
  s(1, 0) = kInvSqrt2;
  s(-1, 1) = kInvSqrt2;
  const auto mixed = reduce_to_coin(s);
  CHECK(std::abs(mixed(0, 0) - 0.5) < 1e-15);
  CHECK(std::abs(mixed(1, 1) - 0.5) < 1e-15);
  CHECK(std::abs(mixed(0, 1)) < 1e-15);
  CHECK(von_neumann_entropy(mixed) == doctest::Approx(1.0));

  // Same site: coherences survive.
  const auto coherent = reduce_to_coin(make_single_state(w, 2, {kInvSqrt2, Complex(0, kInvSqrt2)}));
  CHECK(std::abs(coherent(0, 1) - Complex(0.0, -0.5)) < 1e-15);
  CHECK(std::abs(von_neumann_entropy(coherent)) < 1e-10);
}

TEST_CASE("reduce_to_coin pair") {
  const LatticeWindow w(3);
  const auto rho = reduce_to_coin(make_pair_state({PairStateKind::psi_plus}, w));
  CHECK(rho.dim() == 4);
  // Index 2 c_A + c_B: |01> -> 1, |10> -> 2.
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      const double expected = (r == 1 || r == 2) && (c == 1 || c == 2) ? 0.5 : 0.0;
      CHECK(std::abs(rho(r, c) - expected) < 1e-15);
    }
  }
  CHECK(std::abs(von_neumann_entropy(rho)) < 1e-10);

  const auto minus = reduce_to_coin(make_pair_state({PairStateKind::psi_minus}, w));
  CHECK(std::abs(minus(1, 2) + 0.5) < 1e-15);
}

TEST_CASE("product state reduces to a tensor product") {
  const LatticeWindow w(6);
  auto a = make_single_state(w, 0, {0.6, Complex(0.0, 0.8)});
  auto b = make_single_state(w, 1, {kInvSqrt2, -kInvSqrt2});
  const AngleField fa = AngleField::constant(w, 4, kWindingOneAngles);
  const AngleField fb = AngleField::constant(w, 4, {0.3, -1.1});
  for (int t = 0; t < 4; ++t) {
    split_step(a, fa, t);
    split_step(b, fb, t);
  }
  const auto ra = reduce_to_coin(a).matrix();
  const auto rb = reduce_to_coin(b).matrix();
  const auto rab = reduce_to_coin(tensor_pair(a, b)).matrix();
  for (int ca = 0; ca < 2; ++ca)
    for (int cb = 0; cb < 2; ++cb)
      for (int da = 0; da < 2; ++da)
        for (int db = 0; db < 2; ++db)
          CHECK(std::abs(rab(2 * ca + cb, 2 * da + db) - ra(ca, da) * rb(cb, db)) < 1e-12);
}

TEST_CASE("von_neumann_entropy") {
  CHECK(von_neumann_entropy(diag({1.0, 0.0})) == 0.0);
  CHECK(von_neumann_entropy(diag({0.5, 0.5})) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(von_neumann_entropy(diag({0.25, 0.25, 0.25, 0.25})) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(von_neumann_entropy(diag({0.5, 0.25, 0.25, 0.0})) == doctest::Approx(1.5).epsilon(1e-14));
  // Tiny negative eigenvalue is clipped.
  CHECK(von_neumann_entropy(diag({1.0 + 5e-11, -5e-11})) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK_THROWS_AS(von_neumann_entropy(diag({1.0 + 1e-6, -1e-6})), NumericalError);
}

TEST_CASE("density matrix validation") {
  Eigen::MatrixXcd m(2, 2);
  m << 0.5, Complex(0.1, 0.2), Complex(0.1, 0.2), 0.5;  // not Hermitian
  CHECK_THROWS_AS(CoinDensityMatrix{m}, NumericalError);
  m << 0.6, 0.0, 0.0, 0.6;  // trace 1.2
  CHECK_THROWS_AS(CoinDensityMatrix{m}, NumericalError);
  m << 0.6, Complex(0.1, 0.2), Complex(0.1, -0.2), 0.4;
  CHECK_NOTHROW(CoinDensityMatrix{m});
}

TEST_CASE("partial trace and entropy bounds over evolved states") {
  const int steps = 30;
  const LatticeWindow w = LatticeWindow::for_steps(steps);
  auto s = make_single_state(w, 0, {kInvSqrt2, Complex(0.0, kInvSqrt2)});
  const AngleField f = sample_angle_field({0.4, 1.3}, DisorderSpec::weak(11), steps, w);
  for (int t = 0; t < steps; ++t) {
    split_step(s, f, t);
    const auto rho = reduce_to_coin(s);
    CHECK(std::abs(rho.matrix().trace() - 1.0) < 1e-10);
    const double S = von_neumann_entropy(rho);
    CHECK(S >= 0.0);
    CHECK(S <= 1.0);
  }
}
