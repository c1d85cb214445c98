#include <benchmark/benchmark.h>

#include "fixtures.hpp"
#include "metallic/connections.hpp"
#include "metallic/expr.hpp"
#include "metallic/foliation.hpp"
#include "metallic/forms.hpp"

using namespace metallic;

namespace {

const char* kF6Entry = "(1 - sqrt(5))/2 + sqrt(5)*x1*x1/(x1^2 + x2^2 + x3^2 + x4^2)";

void BM_Parse(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(parse(kF6Entry, 4));
}
BENCHMARK(BM_Parse);

void BM_Eval(benchmark::State& state) {
  const Expr e = parse(kF6Entry, 4);
  const Point pt{0.4, 0.7, 0.9, 1.1};
  for (auto _ : state) benchmark::DoNotOptimize(eval(e, pt));
}
BENCHMARK(BM_Eval);

void BM_Diff(benchmark::State& state) {
  const Expr e = parse(kF6Entry, 4);
  for (auto _ : state) benchmark::DoNotOptimize(diff(diff(e, 0), 1));
}
BENCHMARK(BM_Diff);

// build + evaluate N_J on all coordinate pairs at `samples` points
void BM_NijenhuisF6(benchmark::State& state) {
  const fixtures::Fixture f = fixtures::f6();
  const auto pts = f.samples(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    double m = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        const VectorField n =
            nijenhuis(f.s.J, VectorField::coordinate(4, i), VectorField::coordinate(4, j));
        for (const Point& p : pts) m = std::max(m, n.at(p).cwiseAbs().maxCoeff());
      }
    benchmark::DoNotOptimize(m);
  }
}
BENCHMARK(BM_NijenhuisF6)->Arg(1)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_VidalTorsionF6(benchmark::State& state) {
  const fixtures::Fixture f = fixtures::f6();
  const auto pts = f.samples(10);
  for (auto _ : state) {
    const Connection v = vidal(f.s);
    double m = 0;
    for (int i = 0; i < 4; ++i) {
      const VectorField t = torsion(v, VectorField::coordinate(4, i), VectorField::coordinate(4, 3));
      for (const Point& p : pts) m = std::max(m, t.at(p).cwiseAbs().maxCoeff());
    }
    benchmark::DoNotOptimize(m);
  }
}
BENCHMARK(BM_VidalTorsionF6)->Unit(benchmark::kMillisecond);

void BM_ChenUnitSphere(benchmark::State& state) {
  const fixtures::Fixture f = fixtures::f6();
  const Point pt = fixtures::f6_point(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(chen_report(f.s, 1, 0, 0, pt));
}
BENCHMARK(BM_ChenUnitSphere)->Unit(benchmark::kMillisecond);

void BM_FormsConformanceF5(benchmark::State& state) {
  const fixtures::Fixture f = fixtures::f5();
  const FormContext ctx(f.s, f.lo);
  const std::vector<FormField> forms = {
      FormField::monomial(2, parse("sin(x1)*cos(2*x2)", 2), {}),
      FormField::monomial(2, parse("cos(x1)*sin(x2)", 2), {0}),
      FormField::monomial(2, parse("cos(x1 + 2*x2)", 2), {0, 1})};
  const auto pts = f.samples(10);
  const Torus torus{f.lo, f.hi, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(identity_conformance(ctx, forms, pts, torus, 1e-9));
}
BENCHMARK(BM_FormsConformanceF5)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
