#include <benchmark/benchmark.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cheshire/cheshire_single.hpp"
#include "cheshire/circuit_parser.hpp"
#include "cheshire/optical_network.hpp"
#include "cheshire/wp_states.hpp"

namespace {

using namespace cheshire;

std::string fig1_text() {
  std::ifstream in(std::filesystem::path(CHESHIRE_CIRCUITS_DIR) / "fig1.circuit");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void BM_QccWeakValues(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(qcc_weak_values());
}
BENCHMARK(BM_QccWeakValues);

void BM_SeparationWeakValues(benchmark::State& state) {
  const auto rep = static_cast<Representation>(state.range(0));
  const WpParams p{0.4, 0.3, -0.7};
  for (auto _ : state) benchmark::DoNotOptimize(separation_weak_values(p, rep));
  state.SetLabel(rep == Representation::Attribute ? "attribute (16)" : "mode (64)");
}
BENCHMARK(BM_SeparationWeakValues)->Arg(0)->Arg(1);

void BM_PostselectionPipeline(benchmark::State& state) {
  const WpParams p{0.4, 0.0, 0.0};
  const StateVector in = make_preselected(p, Representation::Mode);
  for (auto _ : state) benchmark::DoNotOptimize(run_postselection_pipeline(in, p));
}
BENCHMARK(BM_PostselectionPipeline);

void BM_SimulateFig1Circuit(benchmark::State& state) {
  const WpParams p{0.4, 0.0, 0.0};
  const Circuit c = build_fig1_circuit(p);
  const StateVector in = make_preselected(p, Representation::Mode);
  for (auto _ : state) benchmark::DoNotOptimize(simulate(c, in));
}
BENCHMARK(BM_SimulateFig1Circuit);

void BM_ParseFig1(benchmark::State& state) {
  const std::string text = fig1_text();
  for (auto _ : state) benchmark::DoNotOptimize(parse_circuit(text));
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ParseFig1);

void BM_RenderFig1(benchmark::State& state) {
  const CircuitDoc doc = parse_circuit(fig1_text());
  for (auto _ : state) benchmark::DoNotOptimize(render_circuit(doc));
}
BENCHMARK(BM_RenderFig1);

}  // namespace
BENCHMARK_MAIN();
