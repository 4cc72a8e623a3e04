#include <benchmark/benchmark.h>

#include <vector>

#include "emkf/bandit.hpp"
#include "emkf/kalman_filter.hpp"
#include "emkf/lin_env.hpp"
#include "emkf/pipeline.hpp"
#include "emkf/sysid_em.hpp"

namespace {

using namespace emkf;

void BM_FilterRound(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto gt = generate_ground_truth(d, d / 2, 15, 0.5, 1.0, 1);
  Environment env(gt, 1);
  KalmanFilter kf(gt.A, gt.Sigma, gt.D, gt.Q);
  std::vector<VectorXd> ys;
  for (int i = 0; i < 256; ++i) ys.push_back(env.step());
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kf.filter_round(ys[i++ % ys.size()]).data());
  }
}
BENCHMARK(BM_FilterRound)->Arg(4)->Arg(20)->Arg(50);

void BM_ThompsonSelect(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  const int d = 20;
  Rng rng(3);
  std::vector<ArmStats> arms(static_cast<std::size_t>(K), ArmStats(d));
  for (auto& a : arms) {
    for (int i = 0; i < 10; ++i) a.update(rng.gaussian_vector(d), rng.gaussian());
  }
  const VectorXd x = rng.gaussian_vector(d);
  TsConfig cfg;
  cfg.d = d;
  int t = 1;
  for (auto _ : state) benchmark::DoNotOptimize(ts_select(arms, x, t++, cfg, rng));
}
BENCHMARK(BM_ThompsonSelect)->Arg(15);

void BM_ArmUpdate(benchmark::State& state) {
  Rng rng(4);
  ArmStats arm(20);
  const VectorXd x = rng.gaussian_vector(20);
  for (auto _ : state) arm.update(x, 1.0);
}
BENCHMARK(BM_ArmUpdate);

void BM_SysIdPush(benchmark::State& state) {
  Rng rng(5);
  SysIdAccumulator acc(20);
  const VectorXd x = rng.gaussian_vector(20);
  for (auto _ : state) acc.push(x);
}
BENCHMARK(BM_SysIdPush);

void BM_SysIdSolve(benchmark::State& state) {
  Rng rng(6);
  SysIdAccumulator acc(20);
  for (int i = 0; i < 50; ++i) acc.push(rng.gaussian_vector(20));
  for (auto _ : state) benchmark::DoNotOptimize(acc.solve().D_hat.data());
}
BENCHMARK(BM_SysIdSolve);

void BM_Episode(benchmark::State& state) {
  RunConfig cfg;
  cfg.horizon = 500;
  const auto agent = static_cast<AgentKind>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_episode(cfg, agent, 0).back().cum_regret);
  state.SetLabel(std::string(agent_name(agent)));
}
BENCHMARK(BM_Episode)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
