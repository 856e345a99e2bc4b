#include "qwalk/commands.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "qwalk/config.hpp"
#include "qwalk/dynamics.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/kernels.hpp"
#include "qwalk/profiles.hpp"
#include "qwalk/stability.hpp"
#include "qwalk/writers.hpp"

#ifndef QWALK_VERSION
#define QWALK_VERSION "unknown"
#endif

namespace qwalk::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

json manifest_header(std::string_view command) {
  return json{{"tool", "qwalk"},
              {"version", QWALK_VERSION},
              {"command", command},
              {"kernel_isa", kernels::active().name},
              {"started_utc", utc_timestamp()}};
}

// JSON cannot hold NaN; absent quantities are written as null.
json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

void write_json(const fs::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  return out;
}

/// Runs `body`, mapping library exceptions onto exit codes with a one-line
/// diagnostic on `log`.
int guarded(std::ostream& log, const std::function<int()>& body) {
  try {
    return body();
  } catch (const config::ConfigError& e) {
    log << "config error: " << e.what();
    if (e.line()) log << " [line " << *e.line() << "]";
    log << '\n';
    return kConfigError;
  } catch (const NumericalFailure& e) {
    log << "numerical failure at step " << e.step() << ": " << e.what() << '\n';
    return kNumericalError;
  } catch (const ConstructionError& e) {
    log << "construction failed (residual " << io::format_double(e.residual()) << "): " << e.what()
        << '\n';
    return kConstructionError;
  } catch (const Error& e) {
    // Validation, dimension and domain errors all stem from the inputs.
    log << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const fs::filesystem_error& e) {
    log << "config error: " << e.what() << '\n';
    return kConfigError;
  }
}

json wall_json(const AngleProfile& angles, std::optional<std::size_t> site) {
  if (!site) return nullptr;
  return json{{"site", *site}, {"x", angles.position(*site)}};
}

json record_json(const ObservableRecord& rec) {
  return json{{"t", rec.t},
              {"norm", rec.norm},
              {"sx_expect", rec.sx_expect},
              {"overlap_plus", number_or_null(rec.overlap_plus)},
              {"overlap_minus", number_or_null(rec.overlap_minus)},
              {"com", rec.center_of_mass},
              {"peak_site", rec.peak_site},
              {"max_imag", rec.max_imag}};
}

struct RunOutcome {
  ObservableRecord last;
  json manifest;
};

/// One evolve run into `dir`. Throws on failure.
RunOutcome run_bundle(const config::Document& doc, const fs::path& dir) {
  const auto start = std::chrono::steady_clock::now();
  fs::create_directories(dir);
  json manifest = manifest_header("evolve");
  manifest["config"] = doc.resolved;
  manifest["warnings"] = doc.warnings;

  const AngleProfile angles = build_profile(doc.run.profile);
  manifest["walls"] = {{"plus", wall_json(angles, angles.wall_plus())},
                       {"minus", wall_json(angles, angles.wall_minus())}};

  std::optional<std::ofstream> csv_file;
  std::optional<io::ObservableCsvWriter> csv;
  if (doc.output.csv) {
    csv_file.emplace(open_out(dir / "observables.csv"));
    csv.emplace(*csv_file);
  }
  std::optional<std::ofstream> snap_file;
  std::optional<io::SnapshotNdjsonWriter> snaps;
  const bool per_site = doc.run.observables.density || doc.run.observables.m_z;
  if (doc.output.ndjson && per_site) {
    snap_file.emplace(open_out(dir / "snapshots.ndjson"));
    snaps.emplace(*snap_file);
  }

  ObservableRecord last;
  const EvolveResult result = evolve(doc.run, [&](const ObservableRecord& rec) {
    if (csv) csv->write(rec);
    if (snaps) snaps->write(rec);
    last = rec;
    last.density.reset();
    last.m_z.reset();
  });

  json files = json::array();
  if (csv) files.push_back("observables.csv");
  if (snaps) files.push_back("snapshots.ndjson");
  if (doc.run.observables.final_state) {
    io::write_state_csv(dir / "final_state.csv", result.final_state);
    files.push_back("final_state.csv");
  }
  write_json(dir / "config.json", doc.resolved);
  files.push_back("config.json");

  if (result.modes) {
    manifest["zero_mode_residuals"] = {{"plus", result.modes->plus.residual},
                                       {"minus", result.modes->minus.residual}};
  } else {
    manifest["zero_mode_residuals"] = nullptr;
  }
  manifest["records"] = result.records;
  manifest["final"] = record_json(last);
  manifest["files"] = files;
  manifest["wall_clock_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_json(dir / "manifest.json", manifest);
  return {last, manifest};
}

}  // namespace

int cmd_evolve(const EvolveOptions& opts, std::ostream& log) {
  return guarded(log, [&] {
    const config::Document doc = config::load(opts.config);
    if (!doc.sweep.empty()) {
      throw config::ConfigError("only valid for the sweep command", "sweep");
    }
    for (const auto& w : doc.warnings) log << "warning: " << w << '\n';
    const fs::path dir = config::resolve_output_dir(opts.output_dir, doc.output, "qwalk_out");
    const RunOutcome outcome = run_bundle(doc, dir);
    log << "wrote " << dir.string() << " (" << outcome.manifest["records"].get<std::size_t>()
        << " records)\n";
    return kOk;
  });
}

namespace {

std::size_t pick_wall(const AngleProfile& angles, const std::string& wall) {
  if (wall == "plus" || wall == "minus") {
    std::optional<std::size_t> site = wall == "plus" ? angles.wall_plus() : angles.wall_minus();
    if (!site) {
      const int want = wall == "plus" ? 1 : -1;
      for (const auto& w : angles.find_walls()) {
        if (w.slope_sign == want) {
          site = w.site;
          break;
        }
      }
    }
    if (!site) throw ConstructionError("profile has no '" + wall + "' wall", std::nan(""));
    return *site;
  }
  long x = 0;
  std::istringstream in(wall);
  if (!(in >> x) || !in.eof()) {
    throw ValidationError("--wall must be plus, minus or an integer lattice coordinate");
  }
  const long half = static_cast<long>(angles.size() / 2);
  if (x < -half || x >= half) throw ValidationError("--wall coordinate outside [-L/2, L/2)");
  return angles.site_of(x);
}

}  // namespace

int cmd_zero_mode(const ZeroModeOptions& opts, std::ostream& log) {
  return guarded(log, [&] {
    const json raw = config::read_file(opts.config);
    std::vector<std::string> warnings;
    const AngleProfile angles = build_profile(config::parse_lattice(raw, warnings));
    for (const auto& w : warnings) log << "warning: " << w << '\n';
    config::OutputSpec out_spec;
    if (raw.contains("output") && raw["output"].is_object() && raw["output"].contains("directory") &&
        raw["output"]["directory"].is_string()) {
      out_spec.directory = raw["output"]["directory"].get<std::string>();
    }

    if (opts.chirality && *opts.chirality != 1 && *opts.chirality != -1) {
      throw ValidationError("--chirality must be +1 or -1");
    }
    const std::size_t wall = pick_wall(angles, opts.wall);
    int chirality = 1;
    if (opts.chirality) {
      chirality = *opts.chirality;
    } else if (opts.wall == "minus") {
      chirality = -1;
    } else if (opts.wall != "plus") {
      chirality = angles.slope_sign(wall) < 0 ? -1 : 1;
    }

    const ZeroMode mode = lattice_zero_mode(angles, wall, chirality);
    const SpinorField continuum = continuum_zero_mode(angles, wall, chirality);
    const double overlap = std::abs(mode.state.inner(continuum));

    const fs::path dir = config::resolve_output_dir(opts.output_dir, out_spec, "qwalk_zero_mode");
    fs::create_directories(dir);
    {
      std::ofstream csv = open_out(dir / "zero_mode.csv");
      csv << "x,theta,u_lattice,v_lattice,u_continuum,v_continuum\n";
      for (std::size_t i = 0; i < angles.size(); ++i) {
        csv << angles.position(i) << ',' << io::format_double(angles[i]) << ','
            << io::format_double(mode.state.u(i).real()) << ','
            << io::format_double(mode.state.v(i).real()) << ','
            << io::format_double(continuum.u(i).real()) << ','
            << io::format_double(continuum.v(i).real()) << '\n';
      }
    }
    json manifest = manifest_header("zero-mode");
    manifest["lattice"] = raw.at("lattice");
    manifest["wall"] = wall_json(angles, wall);
    manifest["chirality"] = chirality;
    manifest["residual"] = mode.residual;
    manifest["overlap_continuum"] = overlap;
    manifest["wall_intensity"] = wall_intensity(mode);
    manifest["warnings"] = warnings;
    manifest["files"] = {"zero_mode.csv"};
    write_json(dir / "manifest.json", manifest);
    log << "zero-mode at x=" << angles.position(wall) << " chirality " << chirality << ": residual "
        << io::format_double(mode.residual) << ", continuum overlap " << io::format_double(overlap)
        << '\n';
    return kOk;
  });
}

void parse_k_range(const std::string& text, StabilityOptions& opts) {
  const auto a = text.find(':');
  const auto b = a == std::string::npos ? std::string::npos : text.find(':', a + 1);
  if (b == std::string::npos) throw ValidationError("--k-range must be min:max:count");
  try {
    std::size_t used = 0;
    const std::string s0 = text.substr(0, a);
    const std::string s1 = text.substr(a + 1, b - a - 1);
    const std::string s2 = text.substr(b + 1);
    const double k_min = std::stod(s0, &used);
    if (used != s0.size()) throw std::invalid_argument(s0);
    const double k_max = std::stod(s1, &used);
    if (used != s1.size()) throw std::invalid_argument(s1);
    const long n = std::stol(s2, &used);
    if (used != s2.size()) throw std::invalid_argument(s2);
    if (n < 1) throw ValidationError("--k-range count must be >= 1");
    if (!std::isfinite(k_min) || !std::isfinite(k_max)) throw std::invalid_argument(text);
    opts.k_min = k_min;
    opts.k_max = k_max;
    opts.k_count = static_cast<std::size_t>(n);
  } catch (const std::logic_error&) {
    throw ValidationError("--k-range must be min:max:count, got '" + text + "'");
  }
}

namespace {

constexpr double kVerifyTolerance = 1e-11;

void write_cplx(std::ostream& out, stability::cplx z) {
  out << ',' << io::format_double(z.real()) << ',' << io::format_double(z.imag());
}

}  // namespace

int cmd_stability(const StabilityOptions& opts, std::ostream& out, std::ostream& log) {
  return guarded(log, [&]() -> int {
    if (opts.kappa.has_value() == opts.kappa_tilde.has_value()) {
      throw ValidationError("give exactly one of --kappa and --kappa-tilde");
    }
    if (opts.k_count == 0) throw ValidationError("--k-range count must be >= 1");
    const double kappa =
        opts.kappa ? *opts.kappa : stability::effective_kappa(*opts.kappa_tilde, opts.n_hat, opts.m_hat);
    stability::StabilityInput base{opts.k_min, opts.theta, kappa, opts.u_sq, opts.chirality};
    base.validate();
    if (opts.k_count > 1) {
      base.k = opts.k_max;
      base.validate();
    }

    std::optional<std::ofstream> file;
    if (opts.output) file.emplace(open_out(*opts.output));
    std::ostream& csv = file ? static_cast<std::ostream&>(*file) : out;

    csv << "k,mu1_re,mu1_im,mu2_re,mu2_im,mu3_re,mu3_im,mu4_re,mu4_im,delta_re,delta_im,"
           "classification";
    if (opts.verify) csv << ",eig_deviation";
    csv << '\n';
    double worst = 0.0;
    for (std::size_t i = 0; i < opts.k_count; ++i) {
      stability::StabilityInput input = base;
      input.k = opts.k_count == 1
                    ? opts.k_min
                    : opts.k_min + (opts.k_max - opts.k_min) * static_cast<double>(i) /
                                       static_cast<double>(opts.k_count - 1);
      const stability::StabilityReport r = stability::analyze(input);
      csv << io::format_double(input.k);
      write_cplx(csv, r.mu1);
      write_cplx(csv, r.mu2);
      write_cplx(csv, r.mu3);
      write_cplx(csv, r.mu4);
      write_cplx(csv, r.delta);
      csv << ',' << stability::to_string(r.classification);
      if (opts.verify) {
        const double dev = stability::closed_form_deviation(input);
        worst = std::max(worst, dev);
        csv << ',' << io::format_double(dev);
      }
      csv << '\n';
    }
    if (opts.verify) {
      log << "max closed-form vs eigensolver deviation: " << io::format_double(worst) << '\n';
      if (!(worst < kVerifyTolerance)) {
        log << "verification failed: deviation exceeds " << kVerifyTolerance << '\n';
        return kNumericalError;
      }
    }
    return kOk;
  });
}

int cmd_uniform_map(const UniformMapOptions& opts, std::ostream& out, std::ostream& log) {
  return guarded(log, [&] {
    if (!std::isfinite(opts.theta) || !std::isfinite(opts.kappa)) {
      throw ValidationError("--theta and --kappa must be finite");
    }
    const UniformMapAnalysis analysis = uniform_fixed_points(opts.theta, opts.kappa);
    out << "alpha,multiplier,kind,invertible\n";
    for (const auto& p : analysis.points) {
      out << io::format_double(p.alpha) << ',' << io::format_double(p.multiplier) << ','
          << (p.kind == FixedPointKind::Attractive ? "attractive" : "repulsive") << ','
          << (analysis.invertible ? "true" : "false") << '\n';
    }
    if (analysis.points.empty()) log << "no fixed points: |theta/kappa| > 1\n";
    if (!analysis.invertible) log << "warning: |kappa| > 1/2, the map is not invertible\n";

    if (opts.seeds > 0) {
      std::mt19937_64 rng(opts.rng_seed);
      std::uniform_real_distribution<double> dist(0.0, std::numbers::pi);
      std::size_t converged = 0;
      double worst = 0.0;
      for (std::size_t s = 0; s < opts.seeds; ++s) {
        double alpha = dist(rng);
        for (std::size_t it = 0; it < opts.iterations; ++it) {
          alpha = std::remainder(uniform_map(alpha, opts.theta, opts.kappa), std::numbers::pi);
        }
        double best = std::numeric_limits<double>::infinity();
        for (const auto& p : analysis.points) {
          if (p.kind == FixedPointKind::Attractive) best = std::min(best, angle_distance_mod_pi(alpha, p.alpha));
        }
        if (best <= opts.tolerance) ++converged;
        worst = std::max(worst, best);
      }
      log << converged << " of " << opts.seeds << " seeds converged to an attractive fixed point within "
          << opts.tolerance << " (largest distance " << io::format_double(worst) << ")\n";
    }
    return kOk;
  });
}

namespace {

struct SweepResult {
  int exit_code = kOk;
  std::string message;
  std::optional<ObservableRecord> last;
};

std::string csv_cell(const json& value) {
  std::string s = value.is_string() ? value.get<std::string>() : value.dump();
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string quoted = "\"";
    for (char c : s) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    return quoted + '"';
  }
  return s;
}

}  // namespace

int cmd_sweep(const SweepOptions& opts, std::ostream& log) {
  return guarded(log, [&]() -> int {
    if (opts.jobs == 0) throw ValidationError("--jobs must be >= 1");
    const json raw = config::read_file(opts.config);
    const fs::path base_dir = opts.config.parent_path();
    const config::Document base = config::parse_json(raw, base_dir);
    if (base.sweep.empty()) throw config::ConfigError("missing section", "sweep");

    const std::vector<json> grid = config::expand_sweep(raw, base.sweep);
    const fs::path root = config::resolve_output_dir(opts.output_dir, base.output, "qwalk_sweep");
    fs::create_directories(root);

    auto run_name = [](std::size_t i) {
      std::ostringstream name;
      name << "run_" << std::setw(3) << std::setfill('0') << i;
      return name.str();
    };

    std::vector<SweepResult> results(grid.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < grid.size(); i = next++) {
        std::ostringstream run_log;
        json point = grid[i];
        // Every run writes into its own subdirectory, whatever the base said.
        if (point.contains("output")) point["output"].erase("directory");
        results[i].exit_code = guarded(run_log, [&] {
          const config::Document doc = config::parse_json(point, base_dir);
          results[i].last = run_bundle(doc, root / run_name(i)).last;
          return int{kOk};
        });
        results[i].message = run_log.str();
        if (!results[i].message.empty() && results[i].message.back() == '\n') results[i].message.pop_back();
      }
    };
    const std::size_t threads = std::min(opts.jobs, grid.size());
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    std::ofstream summary = open_out(root / "summary.csv");
    summary << "run";
    for (const auto& axis : base.sweep) summary << ',' << axis.path;
    summary << ",status,exit_code,overlap_plus,overlap_minus,peak_site,norm,message\n";
    std::size_t failed = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const SweepResult& r = results[i];
      summary << run_name(i);
      for (const auto& axis : base.sweep) {
        std::string pointer = "/" + axis.path;
        std::replace(pointer.begin(), pointer.end(), '.', '/');
        summary << ',' << csv_cell(grid[i].at(json::json_pointer(pointer)));
      }
      summary << ',' << (r.exit_code == kOk ? "ok" : "failed") << ',' << r.exit_code;
      if (r.last) {
        summary << ',' << io::format_double(r.last->overlap_plus) << ','
                << io::format_double(r.last->overlap_minus) << ',' << r.last->peak_site << ','
                << io::format_double(r.last->norm);
      } else {
        summary << ",,,,";
      }
      summary << ',' << csv_cell(r.message) << '\n';
      if (r.exit_code != kOk) {
        ++failed;
        log << run_name(i) << ": " << r.message << '\n';
      }
    }
    log << grid.size() - failed << " of " << grid.size() << " runs succeeded; summary in "
        << (root / "summary.csv").string() << '\n';
    if (failed == 0) return int{kOk};
    // Report the first failure's code so callers can tell config from numerical trouble.
    for (const auto& r : results) {
      if (r.exit_code != kOk) return r.exit_code;
    }
    return int{kOk};
  });
}

}  // namespace qwalk::cli
