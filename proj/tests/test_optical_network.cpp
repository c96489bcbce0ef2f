#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "cheshire/errors.hpp"
#include "cheshire/optical_network.hpp"
#include "cheshire/wp_states.hpp"
#include "test_support.hpp"

namespace cheshire {
namespace {

using std::numbers::pi;
using testing::max_abs;
using testing::Rng;

const double kR = 1.0 / std::sqrt(2.0);

StateVector mode(const std::string& label) { return make_basis_state({modes1_space()}, {label}); }

void expect_detectors(const DetectionResult& r, double d5, double d6, double tol) {
  EXPECT_NEAR(r.detector_probs.at("D1"), 0.0, tol);
  EXPECT_NEAR(r.detector_probs.at("D2"), 0.0, tol);
  EXPECT_NEAR(r.detector_probs.at("D3"), 0.0, tol);
  EXPECT_NEAR(r.detector_probs.at("D4"), 0.0, tol);
  EXPECT_NEAR(r.detector_probs.at("D5"), d5, tol);
  EXPECT_NEAR(r.detector_probs.at("D6"), d6, tol);
}

TEST(Sigma1234Test, ExplicitPermutation) {
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(4, 4);
  expected(1, 0) = expected(0, 1) = expected(3, 2) = expected(2, 3) = 1.0;
  const Operator s = sigma1234();
  EXPECT_EQ(s.matrix(), expected);
  EXPECT_TRUE(s.is_unitary());
  EXPECT_EQ(apply(s, mode("1")).amplitudes(), mode("2").amplitudes());
  EXPECT_THROW(sigma1234(SpaceLabel("m", {"a", "b"})), ShapeError);
}

TEST(Sigma1234Test, Involution) {
  Rng rng(41);
  const Operator s = sigma1234();
  for (int n = 0; n < 20; ++n) {
    const StateVector v = rng.unit_state({modes1_space()});
    EXPECT_LT((apply(s, apply(s, v)).amplitudes() - v.amplitudes()).norm(), 1e-15);
  }
}

TEST(BeamSplitterTest, ModesTwoAndFour) {
  const Operator bs = bs_24();
  EXPECT_TRUE(bs.is_unitary());
  EXPECT_LT((apply(bs, mode("2")).amplitudes() - (Complex(kR) * (mode("2") + mode("4"))).amplitudes()).norm(),
            1e-15);
  EXPECT_LT((apply(bs, mode("4")).amplitudes() - (Complex(kR) * (mode("2") - mode("4"))).amplitudes()).norm(),
            1e-15);
  EXPECT_EQ(apply(bs, mode("1")).amplitudes(), mode("1").amplitudes());
  EXPECT_THROW(beam_splitter(modes1_space(), "2", "2"), ShapeError);
  EXPECT_THROW(beam_splitter(modes1_space(), "2", "9"), LabelError);
}

TEST(BeamSplitterTest, ParticleBecomesWave) {
  Rng rng(42);
  const Operator convert = sigma1234() * bs_24();
  for (int n = 0; n < 50; ++n) {
    const double phi = rng.uniform(-2 * pi, 2 * pi);
    const StateVector out = apply(convert, make_particle(phi));
    const Complex ov = inner(make_wave(phi), out);
    EXPECT_NEAR(std::norm(ov), 1.0, 1e-12);
    // The e^{i phi/2} prefactor of |W(phi)> is produced exactly.
    EXPECT_NEAR(std::abs(ov - Complex(1.0)), 0.0, 1e-12);
  }
}

TEST(WaveFilterTest, Ports) {
  const double phi = 0.9;
  const WaveFilterPorts f = wave_filter(phi);
  EXPECT_TRUE(f.transmit.is_projector());
  EXPECT_TRUE(f.reflect.is_projector());
  EXPECT_LT(max_abs(f.transmit.matrix() + f.reflect.matrix() - Eigen::MatrixXcd::Identity(4, 4)), 1e-15);
  const StateVector w = make_wave(phi), p = make_particle(phi);
  EXPECT_LT((apply(f.transmit, w).amplitudes() - w.amplitudes()).norm(), 1e-15);
  EXPECT_LT(apply(f.transmit, p).norm(), 1e-15);
  EXPECT_LT((apply(f.reflect, p).amplitudes() - p.amplitudes()).norm(), 1e-15);
}

TEST(MergeTest, IsometryAndLeaks) {
  const PathMerge m = merge_paths();
  ASSERT_EQ(m.isometry.rows(), 2);
  ASSERT_EQ(m.isometry.cols(), 4);
  // Columns over (path1, path2): L1L2, L1R2, R1L2, R1R2; rows R, L.
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(2, 4);
  expected(0, 2) = 1.0;
  expected(1, 1) = 1.0;
  EXPECT_EQ(m.isometry, expected);
  ASSERT_EQ(m.leaks.size(), 2u);
  EXPECT_EQ(m.leaks[0], (std::pair<std::size_t, std::string>{3, "D1"}));
  EXPECT_EQ(m.leaks[1], (std::pair<std::size_t, std::string>{0, "D2"}));
}

TEST(MergeTest, RoutesWaveBranchToR) {
  const Space in{path1_space(), path2_space(), attr1_space(), attr2_space()};
  const StateVector s = make_basis_state(in, {"R1", "L2", "W", "W'"});
  const PathMerge m = merge_paths();
  const StateVector out = remap_factors(s, m.from, m.into, m.isometry);
  EXPECT_EQ(out.amplitudes(),
            make_basis_state({merged_path_space(), attr1_space(), attr2_space()}, {"R", "W", "W'"}).amplitudes());
}

TEST(Bs5Test, Examples) {
  const Space s{merged_path_space()};
  const StateVector r = make_basis_state(s, {"R"}), l = make_basis_state(s, {"L"});
  EXPECT_TRUE(bs5().is_unitary());
  EXPECT_LT((apply(bs5(), Complex(kR) * (r + l)).amplitudes() - r.amplitudes()).norm(), 1e-15);
  EXPECT_LT((apply(bs5(), Complex(kR) * (r - l)).amplitudes() - l.amplitudes()).norm(), 1e-15);
}

TEST(PipelineTest, QuarterAngleFiresD5) {
  const WpParams p{pi / 4, 0.0, 0.0};
  const DetectionResult r = run_postselection_pipeline(make_preselected(p, Representation::Mode), p);
  expect_detectors(r, 1.0, 0.0, 1e-10);
  EXPECT_NEAR(r.total_probability(), 1.0, 1e-12);
  EXPECT_LT(r.surviving_state.norm(), 1e-12);
}

TEST(PipelineTest, GenericAlphaClosedForm) {
  Rng rng(43);
  for (int n = 0; n < 30; ++n) {
    const WpParams p{rng.uniform(0, pi / 2), rng.uniform(-pi, pi), rng.uniform(-pi, pi)};
    const double c = std::cos(p.alpha), s = std::sin(p.alpha);
    const DetectionResult r = run_postselection_pipeline(make_preselected(p, Representation::Mode), p);
    expect_detectors(r, (c + s) * (c + s) / 2, (c - s) * (c - s) / 2, 1e-10);
  }
}

TEST(PipelineTest, TraceLayout) {
  const WpParams p{0.3, 0.0, 0.0};
  const DetectionResult r = run_postselection_pipeline(make_preselected(p, Representation::Mode), p);
  std::vector<std::string> names;
  for (const auto& t : r.trace) names.push_back(t.element);
  const std::vector<std::string> expected{"BS1", "BS2", "sigma1234[photon1]", "sigma1234[photon2]", "BS3/BS4",
                                          "X3",  "X4",  "merge",              "BS5",                "D5",
                                          "D6"};
  EXPECT_EQ(names, expected);
}

TEST(PipelineTest, WaveInParticleArmsReachesFilters) {
  // sigma1234 * BS1 maps W (support on modes 1,3) onto modes 2,4, which the
  // wave filter reflects completely, so X3 takes everything.
  for (double phi : {0.0, 0.7, -2.1}) {
    const WpParams p{0.0, phi, phi};
    const StateVector w1 = make_wave(phi, modes1_space()), w2 = make_wave(phi, modes2_space());
    const StateVector in = tensor(make_basis_state({path1_space(), path2_space()}, {"L1", "R2"}), tensor(w1, w2));
    const DetectionResult r = run_postselection_pipeline(in, p);
    EXPECT_NEAR(r.detector_probs.at("D3"), 1.0, 1e-12);
    EXPECT_NEAR(r.detector_probs.at("D3") + r.detector_probs.at("D4"), 1.0, 1e-12);
    EXPECT_NEAR(r.detector_probs.at("D5"), 0.0, 1e-12);
  }
}

TEST(PipelineTest, UnroutedPathsReachD1D2) {
  const StateVector w1 = make_wave(0.0, modes1_space()), w2 = make_wave(0.0, modes2_space());
  const StateVector paths = Complex(std::sqrt(0.3)) * make_basis_state({path1_space(), path2_space()}, {"R1", "R2"}) +
                            Complex(std::sqrt(0.7)) * make_basis_state({path1_space(), path2_space()}, {"L1", "L2"});
  const DetectionResult r = run_postselection_pipeline(tensor(paths, tensor(w1, w2)), {});
  EXPECT_NEAR(r.detector_probs.at("D1"), 0.3, 1e-12);
  EXPECT_NEAR(r.detector_probs.at("D2"), 0.7, 1e-12);
}

TEST(PipelineTest, RejectsWrongSpace) {
  EXPECT_THROW(run_postselection_pipeline(make_preselected({}, Representation::Attribute), {}), ShapeError);
}

TEST(PipelineTest, ConservationAndMonotoneNorm) {
  Rng rng(44);
  for (int n = 0; n < 100; ++n) {
    const WpParams p{0.0, rng.uniform(-pi, pi), rng.uniform(-pi, pi)};
    const DetectionResult r = run_postselection_pipeline(rng.unit_state(mode_space()), p);
    EXPECT_NEAR(r.detector_total(), 1.0, 1e-10);
    double prev = 1.0;
    for (const auto& t : r.trace) {
      EXPECT_LE(t.norm_after, prev + 1e-12) << t.element;
      prev = t.norm_after;
    }
  }
}

TEST(PipelineTest, D5EqualsPostselectionProbability) {
  for (int k = 0; k <= 100; ++k) {
    const WpParams p{(pi / 2) * k / 100.0, 0.0, 0.0};
    const PrePostPair pair = make_selection_pair(p, Representation::Mode);
    const DetectionResult r = run_postselection_pipeline(pair.pre(), p);
    EXPECT_NEAR(r.detector_probs.at("D5"), std::norm(pair.overlap()), 1e-10);
    if (std::abs(p.alpha - pi / 4) > 1e-3) EXPECT_LT(r.detector_probs.at("D5"), 1.0 - 1e-6);
  }
}

TEST(CircuitTest, Fig1MatchesPipeline) {
  Rng rng(45);
  for (int n = 0; n < 20; ++n) {
    const WpParams p{rng.uniform(0, pi / 2), rng.uniform(-pi, pi), rng.uniform(-pi, pi)};
    const StateVector in = n % 2 ? make_preselected(p, Representation::Mode) : rng.unit_state(mode_space());
    const DetectionResult a = run_postselection_pipeline(in, p);
    const DetectionResult b = simulate(build_fig1_circuit(p), in);
    ASSERT_EQ(a.detector_probs.size(), b.detector_probs.size());
    for (const auto& [d, prob] : a.detector_probs) EXPECT_NEAR(b.detector_probs.at(d), prob, 1e-12) << d;
  }
}

TEST(CircuitTest, DetectorNamesInOrder) {
  const std::vector<std::string> expected{"D1", "D2", "D3", "D4", "D5", "D6"};
  EXPECT_EQ(build_fig1_circuit().detector_names(), expected);
}

TEST(CircuitTest, ValidationErrors) {
  const Space spaces{modes1_space()};
  EXPECT_THROW(Circuit(spaces, {make_mode_switch(modes2_space())}), ShapeError);
  EXPECT_THROW(Circuit(spaces, {make_detector("D", modes1_space(), "1"), make_detector("D", modes1_space(), "2")}),
               ShapeError);
  EXPECT_THROW(Circuit({modes1_space(), modes1_space()}, {}), ShapeError);
  EXPECT_THROW(Circuit(spaces, {make_mode_switch(modes1_space(), Condition{"path1", "L1"})}), ShapeError);
  EXPECT_THROW(make_wave_filter(modes1_space(), 0.0, std::nullopt, std::nullopt), ShapeError);
  EXPECT_THROW(make_wave_filter(modes1_space(), 0.0, "A", "B"), ShapeError);
}

TEST(CircuitTest, SimulateNeedsFactors) {
  const Circuit c({modes1_space(), path1_space()}, {make_mode_switch(modes1_space())});
  EXPECT_THROW(simulate(c, make_basis_state({path1_space()}, {"L1"})), ShapeError);
}

}  // namespace
}  // namespace cheshire
