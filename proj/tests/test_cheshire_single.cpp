#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <complex>

#include "cheshire/cheshire_single.hpp"

namespace cheshire {
namespace {

using C = std::complex<double>;
using Vec4 = std::array<C, 4>;
using Mat4 = std::array<std::array<C, 4>, 4>;

const C kI{0.0, 1.0};
const double kR = 1.0 / std::sqrt(2.0);

// Written out by hand in (path, pol) order LH, LV, RH, RV.
const Vec4 kPre{kI * kR, 0.0, kR, 0.0};
const Vec4 kPost{kR, 0.0, 0.0, kR};

Mat4 zero4() {
  Mat4 m{};
  for (auto& row : m) row.fill(0.0);
  return m;
}

Mat4 pi_l() {
  Mat4 m = zero4();
  m[0][0] = m[1][1] = 1.0;
  return m;
}

Mat4 pi_r() {
  Mat4 m = zero4();
  m[2][2] = m[3][3] = 1.0;
  return m;
}

// Pi_arm (x) [[0,-i],[i,0]]
Mat4 sz_in(int block) {
  Mat4 m = zero4();
  m[block][block + 1] = -kI;
  m[block + 1][block] = kI;
  return m;
}

C brute_weak_value(const Mat4& c) {
  C num = 0.0, den = 0.0;
  for (int j = 0; j < 4; ++j) {
    den += std::conj(kPost[j]) * kPre[j];
    for (int k = 0; k < 4; ++k) num += std::conj(kPost[j]) * c[j][k] * kPre[k];
  }
  return num / den;
}

TEST(QccScenarioTest, SelectedStates) {
  const QccScenario sc = build_qcc_scenario();
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(std::abs(sc.pair.pre().amplitudes()(i) - kPre[i]), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(sc.pair.post().amplitudes()(i) - kPost[i]), 0.0, 1e-15);
  }
  EXPECT_NEAR(std::abs(sc.pair.overlap() - 0.5 * kI), 0.0, 1e-12);
}

TEST(QccScenarioTest, CircularPolarizationIsPauliY) {
  const Eigen::MatrixXcd& m = circular_polarization().matrix();
  EXPECT_NEAR(std::abs(m(0, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(m(0, 1) + kI), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(m(1, 0) - kI), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(m(1, 1)), 0.0, 1e-15);
}

TEST(QccScenarioTest, ObservableOrderAndNames) {
  const QccScenario sc = build_qcc_scenario();
  ASSERT_EQ(sc.observables.size(), 4u);
  EXPECT_EQ(sc.observables[0].name, "Pi_L");
  EXPECT_EQ(sc.observables[1].name, "Pi_R");
  EXPECT_EQ(sc.observables[2].name, "sigma_z^L");
  EXPECT_EQ(sc.observables[3].name, "sigma_z^R");
  for (const auto& o : sc.observables) EXPECT_TRUE(o.op.is_hermitian());
}

TEST(QccWeakValuesTest, KroneckerDeltaPattern) {
  const auto reports = qcc_weak_values();
  ASSERT_EQ(reports.size(), 4u);
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_NEAR(reports[k].value.real(), kQccExpected[k], 1e-12) << reports[k].observable_name;
    EXPECT_LE(std::abs(reports[k].value.imag()), 1e-12);
  }
  EXPECT_NEAR(std::abs(reports[0].value + reports[1].value - C(1.0)), 0.0, 1e-12);
  EXPECT_TRUE(matches_qcc_pattern(reports, 1e-12));
}

TEST(QccWeakValuesTest, AgreesWithBruteForce) {
  const auto reports = qcc_weak_values();
  const std::array<C, 4> brute{brute_weak_value(pi_l()), brute_weak_value(pi_r()),
                               brute_weak_value(sz_in(0)), brute_weak_value(sz_in(2))};
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_NEAR(std::abs(reports[k].value - brute[k]), 0.0, 1e-12) << reports[k].observable_name;
  }
}

TEST(QccWeakValuesTest, FlippedCircularPolarizationFailsPattern) {
  QccScenario sc = build_qcc_scenario();
  sc.observables[3].op = Complex(-1.0) * sc.observables[3].op;
  const auto reports = weak_value_table(sc.pair, sc.observables);
  EXPECT_NEAR(reports[3].value.real(), -1.0, 1e-12);
  EXPECT_FALSE(matches_qcc_pattern(reports, 1e-10));
}

TEST(QccWeakValuesTest, PatternCheckRejectsImaginaryPartsAndShortLists) {
  auto reports = qcc_weak_values();
  reports[1].value += Complex(0.0, 1e-6);
  EXPECT_FALSE(matches_qcc_pattern(reports, 1e-10));
  reports.pop_back();
  EXPECT_FALSE(matches_qcc_pattern(reports, 1e-10));
}

}  // namespace
}  // namespace cheshire
