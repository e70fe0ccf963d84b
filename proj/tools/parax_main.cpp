#include <chrono>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "parax/config.hpp"
#include "parax/errors.hpp"
#include "parax/outputs.hpp"
#include "parax/pipeline.hpp"
#include "parax/scheme.hpp"
#include "parax/stability.hpp"
#include "parax/verify.hpp"
#include "parax/version.hpp"

namespace {

using json = nlohmann::ordered_json;
using parax::SimulationConfig;

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct RunOptions {
  std::string config_path;
  std::string out_dir = "out";
  bool strict = false;
  int snapshot_stride = -1;  // -1 keeps the config value
  bool binary = false;
};

SimulationConfig load_config(const RunOptions& opt) {
  SimulationConfig cfg = parax::parse_config(opt.config_path);
  if (opt.snapshot_stride >= 0) cfg.snapshot_stride = opt.snapshot_stride;
  if (opt.binary) cfg.binary_snapshots = true;
  return cfg;
}

int cmd_run(const RunOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  const SimulationConfig cfg = load_config(opt);
  const parax::SimulationSetup setup = parax::make_setup(cfg, opt.strict);

  const auto t_run = std::chrono::steady_clock::now();
  const parax::SimulationResult res = parax::run_simulation(setup);
  const double propagate_seconds = seconds_since(t_run);

  const std::filesystem::path out(opt.out_dir);
  std::filesystem::create_directories(out);

  const std::string echo = parax::echo_config(cfg);
  parax::atomic_write_bytes(out / "resolved.ini", echo);
  parax::atomic_write_bytes(out / "trace.csv", parax::format_trace_csv(res.axis_trace));

  const double h = setup.geometry.aperture / setup.m_intervals;
  std::vector<std::string> snapshot_names;
  snapshot_names.reserve(res.snapshots.size());
  for (const parax::Snapshot& snap : res.snapshots) {
    const std::string name = parax::snapshot_file_name(snap.level, cfg.binary_snapshots);
    parax::atomic_write_bytes(out / name,
                              cfg.binary_snapshots
                                  ? parax::format_snapshot_binary(snap.field)
                                  : parax::format_snapshot_text(snap.field, h));
    snapshot_names.push_back(name);
  }

  const double h_limit = parax::step_bound_limit(setup.geometry, setup.optics.kappa_lens);
  const long long max_m = parax::max_intervals(setup.geometry, setup.optics.kappa_lens);
  const double entry_intensity = parax::intensity(res.axis_trace.front().axis);

  json manifest;
  manifest["tool"] = {{"name", "parax"}, {"version", parax::version_string}};
  manifest["config_echo"] = echo;
  json artifacts;
  artifacts["resolved_config"] = "resolved.ini";
  artifacts["trace"] = "trace.csv";
  artifacts["snapshots"] = snapshot_names;
  manifest["artifacts"] = artifacts;
  manifest["grid"] = {{"h", h},
                      {"lens_tau", setup.geometry.axial_extent / setup.lens_steps},
                      {"post_tau", setup.post_length / setup.post_steps},
                      {"levels", setup.lens_steps + setup.post_steps + 1}};
  manifest["stability"] = {{"h", h},
                           {"h_limit", h_limit},
                           {"max_M", max_m},
                           {"step_bound_run", res.step_bound},
                           {"ok", res.step_bound_ok}};
  manifest["dropped_term_bound"] = res.dropped_term_bound;
  json focus;
  focus["z"] = res.focus.z;
  focus["intensity"] = res.focus.intensity;
  focus["interior"] = res.focus.interior;
  focus["entry_intensity"] = entry_intensity;
  focus["ratio"] = entry_intensity > 0.0 ? res.focus.intensity / entry_intensity : 0.0;
  if (res.geometric_focus)
    focus["geometric_estimate"] = *res.geometric_focus;
  else
    focus["geometric_estimate"] = nullptr;
  manifest["focus"] = focus;
  manifest["timings"] = {{"propagate_seconds", propagate_seconds},
                         {"total_seconds", seconds_since(t0)}};
  parax::atomic_write_bytes(out / "manifest.json", manifest.dump(2) + "\n");

  std::cout << "wrote " << out.string() << " (trace rows " << res.axis_trace.size()
            << ", snapshots " << snapshot_names.size() << ")\n";
  std::cout << "focus z = " << g17(res.focus.z) << " intensity = " << g17(res.focus.intensity)
            << " ratio = "
            << g17(entry_intensity > 0.0 ? res.focus.intensity / entry_intensity : 0.0)
            << (res.focus.interior ? "" : " (endpoint)") << "\n";
  if (!res.step_bound_ok)
    std::cout << "warning: transverse spacing at or below the lens step bound\n";
  return 0;
}

struct StabilityOptions {
  std::string config_path;
  bool homogeneous = false;
  bool dense = false;
  int sampling = 512;
};

int cmd_stability(const StabilityOptions& opt) {
  const SimulationConfig cfg = parax::parse_config(opt.config_path);
  const parax::SimulationSetup setup = parax::make_setup(cfg, false);
  const parax::GridSpec grid =
      parax::make_grid(setup.m_intervals, setup.lens_steps, setup.geometry.aperture,
                       setup.geometry.axial_extent);
  std::vector<parax::PdeCoefficients> coeffs(setup.m_intervals + 1);
  bool stable = true;

  std::cout << "mode\t" << (opt.homogeneous ? "homogeneous" : "lens") << "\n";
  std::cout << "h\t" << g17(grid.h()) << "\n";
  if (opt.homogeneous) {
    for (int i = 0; i <= setup.m_intervals; ++i)
      coeffs[i] = parax::homogeneous_coefficients(i * grid.h(), setup.optics.kappa_outside);
  } else {
    const double h_limit =
        parax::step_bound_limit(setup.geometry, setup.optics.kappa_lens, opt.sampling);
    const long long max_m =
        parax::max_intervals(setup.geometry, setup.optics.kappa_lens, opt.sampling);
    std::cout << "h_limit\t" << g17(h_limit) << "\n";
    std::cout << "max_M\t" << max_m << "\n";
    stable = grid.h() > h_limit;
    const double zeta_half = 0.5 * grid.tau();  // first lens step
    for (int i = 0; i <= setup.m_intervals; ++i)
      coeffs[i] = parax::lens_coefficients(i * grid.h(), zeta_half, setup.geometry,
                                           setup.optics.kappa_lens);
  }
  const parax::TridiagonalOperatorPair pair = parax::assemble_pair(coeffs, grid);
  const parax::SpectralRadiusEstimate rho =
      (opt.dense && setup.m_intervals + 1 <= 512)
          ? parax::spectral_radius_dense(pair)
          : parax::spectral_radius_power(pair);
  std::cout << "rho\t" << g17(rho.value) << "\n";
  std::cout << "rho_converged\t" << (rho.converged ? 1 : 0) << "\n";
  if (setup.m_intervals + 1 <= 512) {
    const parax::SemistabilityReport semi =
        parax::semistability_check(parax::a_matrix(coeffs, grid));
    std::cout << "max_abs_re_A\t"
              << g17(std::max(std::abs(semi.min_real), std::abs(semi.max_real))) << "\n";
  } else {
    std::cout << "max_abs_re_A\tn/a\n";
  }
  std::cout << "verdict\t" << (stable ? "stable" : "unstable") << "\n";
  return stable ? 0 : 3;
}

struct MaxGridOptions {
  std::string config_path;
  int sampling = 512;
};

int cmd_maxgrid(const MaxGridOptions& opt) {
  const SimulationConfig cfg = parax::parse_config(opt.config_path);
  const parax::SimulationSetup setup = parax::make_setup(cfg, false);
  const double h_limit =
      parax::step_bound_limit(setup.geometry, setup.optics.kappa_lens, opt.sampling);
  const long long max_m =
      parax::max_intervals(setup.geometry, setup.optics.kappa_lens, opt.sampling);
  std::cout << "h_limit\t" << g17(h_limit) << "\n";
  std::cout << "max_M\t" << max_m << "\n";
  return 0;
}

struct TableOptions {
  double sphere_radius = 1.0;
  std::vector<double> extents;
  std::vector<double> kappas;
  int sampling = 512;
};

int cmd_table31(const TableOptions& opt) {
  std::vector<double> extents =
      opt.extents.empty() ? std::vector<double>{0.1, 0.3, 0.5, 0.7, 0.9} : opt.extents;
  std::vector<double> kappas =
      opt.kappas.empty() ? std::vector<double>{8000.0, 10000.0, 12000.0} : opt.kappas;
  const std::vector<parax::TaperTableRow> rows =
      parax::taper_table(opt.sphere_radius, extents, kappas, opt.sampling);
  auto label = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return std::string(buf);
  };
  std::cout << "Z";
  for (double k : kappas) std::cout << "\tk=" << label(k);
  std::cout << "\n";
  std::size_t idx = 0;
  for (double z : extents) {
    std::cout << label(z);
    for (std::size_t j = 0; j < kappas.size(); ++j, ++idx) {
      const parax::TaperTableRow& cell = rows[idx];
      if (cell.valid)
        std::cout << "\t" << cell.max_m;
      else
        std::cout << "\t-";
    }
    std::cout << "\n";
  }
  std::cout << "# aperture per cell: R1 = sqrt(Z(2R - Z)) (full taper), R = "
            << g17(opt.sphere_radius) << "\n";
  return 0;
}

struct ConvergenceOptions {
  std::string study = "free";
  int levels = 3;
  int base_m = 128;
  int base_n = 256;
  double waist = 1.0;
  double emitter_z = -4.0;
  double wave_number = 40.0;
  double radial_extent = 6.0;
  double axial_length = 1.0;
};

void print_rows(const std::vector<parax::verify::ConvergenceRow>& rows) {
  std::cout << "h\ttau\terror\torder\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%.10e\t%.10e\t%.10e\t", rows[i].h, rows[i].tau,
                  rows[i].error);
    std::cout << buf;
    if (i == 0)
      std::cout << "-\n";
    else {
      std::snprintf(buf, sizeof buf, "%.4f\n", rows[i].order);
      std::cout << buf;
    }
  }
}

int cmd_convergence(const ConvergenceOptions& opt) {
  if (opt.study == "free") {
    const parax::GaussianSource src{opt.waist, opt.emitter_z};
    const std::vector<parax::verify::ConvergenceRow> rows = parax::verify::free_space_convergence(
        src, opt.wave_number, opt.radial_extent, opt.axial_length, opt.base_m, opt.base_n,
        opt.levels);
    std::cout << "free-space envelope error, relative L2 at z = " << g17(opt.axial_length)
              << "\n";
    print_rows(rows);
    return 0;
  }
  if (opt.study != "stencil")
    throw parax::ConfigError("unknown study '" + opt.study + "' (use free or stencil)");
  parax::verify::ManufacturedField w;
  w.value = [](double r, double z) { return std::sin(2.0 * r) * std::cos(3.0 * z); };
  w.dr = [](double r, double z) { return 2.0 * std::cos(2.0 * r) * std::cos(3.0 * z); };
  w.drr = [](double r, double z) { return -4.0 * std::sin(2.0 * r) * std::cos(3.0 * z); };
  w.dz = [](double r, double z) { return -3.0 * std::sin(2.0 * r) * std::sin(3.0 * z); };
  w.drz = [](double r, double z) { return -6.0 * std::cos(2.0 * r) * std::sin(3.0 * z); };
  auto coeffs = [](double r, double) {
    parax::PdeCoefficients c;
    c.c5 = 0.8;
    c.c4 = 1.0;
    c.c3 = 1.0 / r;
    c.c2 = std::complex<double>(0.0, -10.0);
    c.c1 = 0.3;
    return c;
  };
  const std::vector<parax::verify::ConvergenceRow> rows = parax::verify::truncation_order_study(
      w, coeffs, 0.6, 1.4, 0.1, 0.9, 9, 9, 0.05, 0.5, opt.levels < 2 ? 4 : opt.levels);
  std::cout << "stencil residual versus the differential operator, max norm\n";
  print_rows(rows);
  return 0;
}

struct MapsCheckOptions {
  double sphere_radius = 1.969;
  double axial_extent = 0.7643;
  double aperture = 1.5574;
  int samples = 32;
};

int cmd_maps_check(const MapsCheckOptions& opt) {
  const parax::LensGeometry g =
      parax::make_lens_geometry(opt.sphere_radius, opt.axial_extent, opt.aperture);
  const std::vector<std::array<double, 2>> pts =
      parax::verify::interior_map_lattice(g, opt.samples, opt.samples);
  const parax::verify::MapCheckReport rep = parax::verify::map_derivative_check(g, pts);
  std::cout << "points\t" << rep.points << "\n";
  std::cout << "phi_max_rel\t" << g17(rep.max_phi_rel) << "\n";
  std::cout << "psi_max_rel\t" << g17(rep.max_psi_rel) << "\n";
  std::cout << "theta_max_rel\t" << g17(rep.max_theta_rel) << "\n";
  std::cout << "variant_psi_max_rel\t" << g17(rep.max_variant_psi_rel) << "\n";
  std::cout << "# the standalone closed-form psi variant disagrees with the finite-difference"
               " second derivative; the chain-rule form above is the one assembled\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cylindrical paraxial beam propagation through a plano-convex lens"};
  app.require_subcommand(1);

  RunOptions run_opt;
  CLI::App* run = app.add_subcommand("run", "propagate a beam and write trace/snapshots");
  run->add_option("--config", run_opt.config_path, "config file")->required();
  run->add_option("--out", run_opt.out_dir, "output directory");
  run->add_flag("--strict", run_opt.strict, "fail instead of warning when h is at or below the lens bound");
  run->add_option("--snapshot-stride", run_opt.snapshot_stride,
                  "write a field snapshot every N axial levels (overrides config)");
  run->add_flag("--binary", run_opt.binary, "binary snapshots");

  StabilityOptions stab_opt;
  CLI::App* stab = app.add_subcommand("stability", "stability report for a config");
  stab->add_option("--config", stab_opt.config_path, "config file")->required();
  stab->add_flag("--homogeneous", stab_opt.homogeneous,
                 "analyze the constant-medium operator instead of the lens");
  stab->add_flag("--dense", stab_opt.dense, "dense eigenvalue route when the grid allows");
  stab->add_option("--sampling", stab_opt.sampling, "step bound search density")
      ->check(CLI::Range(256, 100000));

  MaxGridOptions max_opt;
  CLI::App* maxg = app.add_subcommand("maxgrid", "largest admissible transverse grid");
  maxg->add_option("--config", max_opt.config_path, "config file")->required();
  maxg->add_option("--sampling", max_opt.sampling, "step bound search density")
      ->check(CLI::Range(256, 100000));

  TableOptions tab_opt;
  CLI::App* table = app.add_subcommand("table31", "max grid table over extents and wave numbers");
  table->add_option("--sphere-radius", tab_opt.sphere_radius, "sphere radius");
  table->add_option("--extents", tab_opt.extents, "axial extents")->expected(-1);
  table->add_option("--kappas", tab_opt.kappas, "wave numbers")->expected(-1);
  table->add_option("--sampling", tab_opt.sampling, "step bound search density")
      ->check(CLI::Range(256, 100000));

  ConvergenceOptions conv_opt;
  CLI::App* conv = app.add_subcommand("convergence", "grid refinement studies");
  conv->add_option("--study", conv_opt.study, "free or stencil");
  conv->add_option("--levels", conv_opt.levels, "refinement levels")->check(CLI::Range(1, 8));
  conv->add_option("--base-m", conv_opt.base_m, "coarsest radial intervals");
  conv->add_option("--base-n", conv_opt.base_n, "coarsest axial steps");
  conv->add_option("--beta0", conv_opt.waist, "source waist");
  conv->add_option("--z0", conv_opt.emitter_z, "emitter position");
  conv->add_option("--wave-number", conv_opt.wave_number, "wave number");
  conv->add_option("--radial-extent", conv_opt.radial_extent, "domain radius");
  conv->add_option("--axial-length", conv_opt.axial_length, "propagation length");

  MapsCheckOptions maps_opt;
  CLI::App* maps = app.add_subcommand("maps-check", "finite-difference probe of the stretch maps");
  maps->add_option("--sphere-radius", maps_opt.sphere_radius, "sphere radius");
  maps->add_option("--extent", maps_opt.axial_extent, "axial extent");
  maps->add_option("--aperture", maps_opt.aperture, "aperture radius");
  maps->add_option("--samples", maps_opt.samples, "lattice samples per axis")
      ->check(CLI::Range(4, 512));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return cmd_run(run_opt);
    if (stab->parsed()) return cmd_stability(stab_opt);
    if (maxg->parsed()) return cmd_maxgrid(max_opt);
    if (table->parsed()) return cmd_table31(tab_opt);
    if (conv->parsed()) return cmd_convergence(conv_opt);
    if (maps->parsed()) return cmd_maps_check(maps_opt);
  } catch (const parax::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const parax::StepBoundError& e) {
    std::cerr << "stability violation: " << e.what() << "\n";
    return 3;
  } catch (const parax::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 4;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
