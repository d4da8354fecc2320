#include <chrono>
#include <cstdio>
#include <functional>

#include <biphoton/model.hpp>
#include <biphoton/oracle.hpp>
#include <biphoton/sweep.hpp>

// Wall-clock comparison of the threaded grid kernels against their serial
// reference path, checking that both produce bit-identical results.

namespace {

double time_ms(const std::function<void()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  body();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void row(const char* name, double serial_ms, double parallel_ms,
         bool identical) {
  std::printf("%-28s %10.1f ms %10.1f ms   x%-5.2f %s\n", name, serial_ms,
              parallel_ms, serial_ms / parallel_ms,
              identical ? "bitwise-identical" : "RESULTS DIFFER");
}

}  // namespace

int main() {
  using namespace biphoton;
  ResolvedConfig rc = resolve(SourceConfig{});
  QuadraticForm q = assemble_quadratic_form(rc, FilterMask::Both);

  std::printf("%-28s %13s %13s   %-6s %s\n", "kernel", "serial", "threaded",
              "speedup", "check");

  {
    QuadratureSpec spec;
    spec.points = 61;
    spec.refine_check = false;
    double ms, mp = 0.0;
    spec.parallel = false;
    double ts = time_ms([&] { ms = oracle_mass(q, spec); });
    spec.parallel = true;
    double tp = time_ms([&] { mp = oracle_mass(q, spec); });
    row("mass grid (4D, 61^4)", ts, tp, ms == mp);
  }

  {
    QuadratureSpec spec;
    spec.points = 41;
    spec.refine_check = false;
    double ps, pp = 0.0;
    spec.parallel = false;
    double ts = time_ms([&] { ps = oracle_purity(q, {0, 1}, spec); });
    spec.parallel = true;
    double tp = time_ms([&] { pp = oracle_purity(q, {0, 1}, spec); });
    row("purity grid (2D, 41^2)", ts, tp, ps == pp);
  }

  {
    QuadratureSpec spec;
    spec.points = 13;
    double ps, pp = 0.0;
    spec.parallel = false;
    double ts = time_ms([&] { ps = oracle_purity_deep(q, 4, spec); });
    spec.parallel = true;
    double tp = time_ms([&] { pp = oracle_purity_deep(q, 4, spec); });
    row("deep purity (5D inner)", ts, tp, ps == pp);
  }

  {
    SweepSpec spec;
    spec.base = nlohmann::json::object();
    AxisSpec ax;
    ax.path = "/filters/w_s_um";
    ax.also = {"/filters/w_i_um"};
    ax.start = 5.0;
    ax.stop = 100.0;
    ax.count = 40;
    spec.axes.push_back(ax);
    SweepResult rs, rp;
    double ts = time_ms([&] { rs = run_sweep(spec, false); });
    double tp = time_ms([&] { rp = run_sweep(spec, true); });
    bool same = rs.rows.size() == rp.rows.size();
    for (size_t i = 0; same && i < rs.rows.size(); ++i)
      same = rs.rows[i].values == rp.rows[i].values &&
             rs.rows[i].error == rp.rows[i].error;
    row("sweep (40 rows, 8 obs)", ts, tp, same);
  }

  return 0;
}
