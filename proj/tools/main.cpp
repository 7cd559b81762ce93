// dmkdv: simulate, scatter, asymptote, compare, selftest.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dmkdv/errors.hpp"
#include "dmkdv/harness.hpp"
#include "dmkdv/lattice.hpp"
#include "dmkdv/model.hpp"
#include "dmkdv/scattering.hpp"

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kConfig = 2, kIo = 3 };

struct Globals {
  std::string config_path;
  std::vector<std::string> overrides;
  unsigned threads = 0;
};

dmkdv::RunConfig resolve(const Globals& g) {
  dmkdv::RunConfig c = g.config_path.empty() ? dmkdv::parse_config("{}", g.overrides)
                                             : dmkdv::load_config(g.config_path, g.overrides);
  if (g.threads > 0) c.threads = g.threads;
  return c;
}

void write_text(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw dmkdv::IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw dmkdv::IoError("failed writing " + path);
}

int cmd_simulate(const Globals& g) {
  const auto cfg = resolve(g);
  const auto half = dmkdv::window_half_width(cfg.times.back(), cfg.window_margin) + cfg.profile.extent();
  dmkdv::IntegrateOptions opt;
  opt.spill_tolerance = cfg.tolerances.spill;
  const auto snaps = dmkdv::integrate_snapshots(cfg.profile.realize(half), cfg.times, cfg.dt, opt);
  std::ostringstream out;
  out << "t,n,q\n";
  for (const auto& s : snaps)
    for (std::int64_t n = s.n_min(); n <= s.n_max(); ++n)
      out << dmkdv::format_double(s.t()) << ',' << n << ',' << dmkdv::format_double(s.at(n)) << '\n';
  write_text(out.str(), cfg.output.path);
  return kOk;
}

int cmd_scatter(const Globals& g) {
  const auto cfg = resolve(g);
  const auto q = cfg.profile.realize(cfg.profile.extent());
  const auto grid = dmkdv::reflection_grid(q, cfg.grid_size);
  std::ostringstream out;
  out << "theta,re_a,im_a,re_b,im_b,re_r,im_r\n";
  for (std::size_t k = 0; k < grid.points.size(); ++k) {
    const auto s = dmkdv::scattering_coefficients(q, grid.points[k]);
    const double f[] = {grid.points[k].theta, s.a.real(), s.a.imag(), s.b.real(),
                        s.b.imag(),          s.r.real(), s.r.imag()};
    for (std::size_t i = 0; i < 7; ++i) out << dmkdv::format_double(f[i]) << (i < 6 ? ',' : '\n');
  }
  write_text(out.str(), cfg.output.path);
  return kOk;
}

int cmd_asymptote(const Globals& g) {
  const auto cfg = resolve(g);
  dmkdv::AsymptoticOptions opt;
  opt.convention = cfg.sign_convention;
  opt.quadrature.abs_tol = cfg.tolerances.quadrature;
  opt.realness_calibration = cfg.tolerances.realness_calibration;
  const dmkdv::AsymptoticEvaluator eval(cfg.profile.realize(cfg.profile.extent()), opt);
  std::ostringstream out;
  out << "n,t,v,q_asym,imag_residual\n";
  for (double v : cfg.rays) {
    for (double t : cfg.times) {
      const auto n = std::llround(v * t);
      const auto res = eval.evaluate(n, t);
      out << n << ',' << dmkdv::format_double(t) << ',' << dmkdv::format_double(v) << ','
          << dmkdv::format_double(res.q_asym) << ',' << dmkdv::format_double(res.imag_residual) << '\n';
    }
  }
  write_text(out.str(), cfg.output.path);
  return kOk;
}

int cmd_compare(const Globals& g, const std::string& plot_dir) {
  const auto cfg = resolve(g);
  const auto rows = dmkdv::run_compare(cfg);
  if (cfg.output.path.empty())
    std::cout << dmkdv::format_records(rows, cfg.output.format);
  else
    dmkdv::emit(rows, cfg.output.format, cfg.output.path);

  if (!plot_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(plot_dir, ec);
    if (ec) throw dmkdv::IoError("cannot create " + plot_dir);
    for (double v : cfg.rays) {
      std::ostringstream dat;
      dat << "# t abs_err (v = " << dmkdv::format_double(v) << ")\n";
      for (const auto& r : rows)
        if (r.v == v) dat << dmkdv::format_double(r.t) << ' ' << dmkdv::format_double(r.abs_err) << '\n';
      write_text(dat.str(), (std::filesystem::path(plot_dir) / ("ray_v" + dmkdv::format_double(v) + ".dat")).string());
    }
  }
  int failed = 0;
  for (const auto& r : rows) {
    if (!r.failed) continue;
    ++failed;
    std::cerr << "row n=" << r.n << " t=" << r.t << " failed: " << r.error << '\n';
  }
  return failed == 0 ? kOk : kCheckFailed;
}

int cmd_selftest(const Globals& g) {
  const auto report = dmkdv::selftest(resolve(g));
  std::cout << dmkdv::report_to_json(report) << '\n';
  return report.all_pass() ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete defocusing mKdV: lattice simulation and long-time asymptotics"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("-c,--config", g.config_path, "JSON configuration file")->check(CLI::ExistingFile);
  app.add_option("--set", g.overrides, "Override a configuration key, e.g. --set profile.amplitude=0.2")
      ->allow_extra_args(false);
  app.add_option("--threads", g.threads, "Cap on worker threads")->check(CLI::PositiveNumber);

  auto* simulate = app.add_subcommand("simulate", "Integrate the lattice and dump snapshots");
  auto* scatter = app.add_subcommand("scatter", "Scattering data on the circle grid");
  auto* asymptote = app.add_subcommand("asymptote", "Leading-order asymptotic values");
  auto* compare = app.add_subcommand("compare", "Direct simulation vs. asymptotics");
  std::string plot_dir;
  compare->add_option("--plot-dir", plot_dir, "Write one gnuplot two-column file per ray");
  auto* self = app.add_subcommand("selftest", "Invariant checks and sign-convention audit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (*simulate) return cmd_simulate(g);
    if (*scatter) return cmd_scatter(g);
    if (*asymptote) return cmd_asymptote(g);
    if (*compare) return cmd_compare(g, plot_dir);
    if (*self) return cmd_selftest(g);
  } catch (const dmkdv::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const dmkdv::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const dmkdv::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
  return kOk;
}
