#include "affgrass/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "affgrass/errors.hpp"
#include "affgrass/serialize.hpp"

namespace affgrass::cli {

namespace {

using io::json;

// Usage problems detected after parsing (unreadable files, bad precision).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_text(const std::string& path) {
  if (path == "-") {
    std::ostringstream s;
    s << std::cin.rdbuf();
    return s.str();
  }
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(what + ": " + e.what());
  }
}

/// Inline JSON, or @path to read it from a file.
json json_arg(const std::string& arg, const std::string& what) {
  if (!arg.empty() && arg[0] == '@') return parse_json(read_text(arg.substr(1)), what);
  return parse_json(arg, what);
}

class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
      return;
    }
    file_.open(path);
    if (!file_) throw UsageError("cannot write '" + path + "'");
    stream_ = &file_;
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_ = nullptr;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw UsageError("cannot write '" + path + "'");
  f << text;
}

int resolve_precision(std::optional<int> flag) {
  int p = kDefaultPrecision;
  if (flag) {
    p = *flag;
  } else if (const char* env = std::getenv(kPrecisionEnv)) {
    try {
      std::size_t used = 0;
      p = std::stoi(env, &used);
      if (env[used] != '\0') throw std::invalid_argument(env);
    } catch (const std::exception&) {
      throw UsageError(std::string(kPrecisionEnv) + " is not an integer: '" + env + "'");
    }
  }
  if (p < 1) throw UsageError("precision must be >= 1");
  return p;
}

grass::GrassPoint grass_arg(const json& j) {
  return j.is_array() ? io::grass_point_from_json(json{{"proj", j}}) : io::grass_point_from_json(j);
}

affine::AffinePlane hyperplane_arg(const json& j) {
  if (j.is_object() && j.contains("a") && j.contains("b")) {
    return affine::hyperplane_to_affine(io::hyperplane_params_from_json(j));
  }
  return io::plane_from_json(j);
}

nets::Space space_arg(const std::string& kind, std::size_t n, std::size_t k) {
  if (kind != "G" && kind != "A") throw UsageError("--space must be G or A");
  return nets::Space{kind == "G" ? nets::SpaceKind::grassmann : nets::SpaceKind::affine, n, k};
}

Exec exec_arg(bool serial) { return serial ? Exec::serial : Exec::parallel; }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact Grassmannian and affine-Grassmannian tools"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "affgrass 1.0");

  std::optional<int> precision_flag;
  std::string output;
  bool serial = false;

  // metric
  auto* metric = app.add_subcommand("metric", "Certified distance between two planes");
  std::string space = "G";
  std::string a_arg;
  std::string b_arg;
  std::string method = "spectral";
  metric->add_option("--space", space, "G (linear) or A (affine)")->check(CLI::IsMember({"G", "A"}));
  metric->add_option("--a", a_arg, "first element: JSON or @file")->required();
  metric->add_option("--b", b_arg, "second element: JSON or @file")->required();
  metric->add_option("-p,--precision", precision_flag, "enclosure width 2^-p");
  metric->add_option("--method", method, "spectral or grid")->check(CLI::IsMember({"spectral", "grid"}));

  // fit-plane
  auto* fit = app.add_subcommand("fit-plane", "Plane through points, or through boxes at scale r");
  std::string input = "-";
  std::optional<int> fit_r;
  fit->add_option("-i,--input", input, "JSON array of points ('-' for stdin)");
  fit->add_option("-o,--output", output, "output path (default stdout)");
  fit->add_option("-r", fit_r, "round points to boxes of side 2^-r and report the certified error");

  // intersect
  auto* inter = app.add_subcommand("intersect", "Intersection of two hyperplanes in R^n, n >= 3");
  std::optional<int> inter_r;
  std::uint64_t seed = 1;
  int trials = 8;
  inter->add_option("--a", a_arg, "first hyperplane: {a, b} params or plane JSON, or @file")->required();
  inter->add_option("--b", b_arg, "second hyperplane")->required();
  inter->add_option("-r", inter_r, "also report precision loss with parameters rounded at 2^-r");
  inter->add_option("--seed", seed, "noise seed for the precision report");
  inter->add_option("--trials", trials, "noise trials for the precision report")->check(CLI::PositiveNumber);
  inter->add_option("-o,--output", output, "output path (default stdout)");

  // net
  auto* net = app.add_subcommand("net", "Separated covering net D(X, r)");
  std::size_t n = 2;
  std::size_t k = 1;
  int r = 2;
  std::size_t budget = std::size_t{1} << 22;
  std::size_t probes = nets::kAuditProbes;
  std::uint64_t audit_seed = nets::kAuditSeed;
  net->add_option("--space", space, "G or A")->check(CLI::IsMember({"G", "A"}));
  net->add_option("-n", n, "ambient dimension")->check(CLI::Range(2, 4));
  net->add_option("-k", k, "plane dimension")->check(CLI::PositiveNumber);
  net->add_option("-r", r, "scale exponent")->check(CLI::PositiveNumber);
  net->add_option("--budget", budget, "candidate budget");
  net->add_option("--probes", probes, "covering audit probes");
  net->add_option("--seed", audit_seed, "audit probe seed");
  net->add_flag("--serial", serial, "use the serial reference kernels");
  net->add_option("-o,--output", output, "output path (default stdout)");

  // dim
  auto* dimc = app.add_subcommand("dim", "Box-counting dimension over an explicit scale window");
  std::vector<int> window;
  std::string csv;
  bool planes = false;
  dimc->add_option("-i,--input", input, "JSON array of points (or planes with --planes)");
  dimc->add_option("--window", window, "r_min r_max")->expected(2)->required();
  dimc->add_option("--csv", csv, "also write the count profile as CSV");
  dimc->add_flag("--planes", planes, "input is planes in A(n,k); counts canonical net representatives");
  dimc->add_flag("--serial", serial, "use the serial reference kernels");
  dimc->add_option("-o,--output", output, "output path (default stdout)");

  // experiment
  auto* expc = app.add_subcommand("experiment", "Run an experiment suite");
  std::string config;
  bool standard = false;
  std::optional<std::uint64_t> seed_override;
  std::optional<double> tol_override;
  std::string csv_dir;
  expc->add_option("-c,--config", config, "suite config JSON (schema 1)");
  expc->add_flag("--standard", standard, "run the built-in standard suite");
  expc->add_option("--seed", seed_override, "override every experiment seed");
  expc->add_option("--tolerance", tol_override, "override every tolerance")->check(CLI::NonNegativeNumber);
  expc->add_option("--csv-dir", csv_dir, "write one <id>.csv count profile per experiment");
  bool dump_config = false;
  expc->add_flag("--dump-config", dump_config, "print the resolved suite config instead of running it");
  expc->add_flag("--serial", serial, "use the serial reference kernels");
  expc->add_option("-o,--output", output, "JSON-lines output path (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (metric->parsed()) {
      const int p = resolve_precision(precision_flag);
      const json ja = json_arg(a_arg, "--a");
      const json jb = json_arg(b_arg, "--b");
      grass::MetricSample s;
      if (space == "G") {
        s = grass::rho(grass_arg(ja), grass_arg(jb), p, grass::parse_metric_method(method));
      } else {
        if (method != "spectral") throw UsageError("--method grid applies to G only");
        s = affine::rho_affine(io::plane_from_json(ja), io::plane_from_json(jb), p);
      }
      out << io::to_json(s).dump() << '\n';
    } else if (fit->parsed()) {
      const auto points = io::points_from_json(parse_json(read_text(input), "points"));
      Sink sink(output, out);
      if (fit_r) {
        std::vector<std::vector<exact::DyadicInterval>> boxes;
        for (const auto& x : points) boxes.push_back(affine::round_to_box(x, *fit_r));
        *sink << io::to_json(affine::plane_from_boxes(boxes)).dump() << '\n';
      } else {
        *sink << io::to_json(affine::plane_from_points(points)).dump() << '\n';
      }
    } else if (inter->parsed()) {
      const json ja = json_arg(a_arg, "--a");
      const json jb = json_arg(b_arg, "--b");
      const auto p1 = hyperplane_arg(ja);
      const auto p2 = hyperplane_arg(jb);
      const auto cut = affine::hyperplane_intersection(p1, p2);
      json result{{"intersection", io::to_json(cut)}};
      if (inter_r) {
        const auto x = affine::point_on_plane(cut, exact::RatVector(cut.k()));
        result["report"] = io::to_json(affine::intersection_precision_report(
            affine::affine_to_hyperplane(p1), affine::affine_to_hyperplane(p2), x, *inter_r, seed, trials));
      }
      Sink sink(output, out);
      *sink << result.dump() << '\n';
    } else if (net->parsed()) {
      const auto s = space_arg(space, n, k);
      const auto built = nets::build_net(s, r, budget, audit_seed, probes, exec_arg(serial));
      if (!nets::certify_separation(built, exec_arg(serial))) throw NotCovered("separation certificate failed");
      Sink sink(output, out);
      *sink << io::to_json(built).dump() << '\n';
    } else if (dimc->parsed()) {
      const dim::Window w{window[0], window[1]};
      const json data = parse_json(read_text(input), "input");
      dim::CountProfile profile;
      if (planes) {
        std::vector<nets::Element> family;
        for (const auto& j : data) family.emplace_back(io::plane_from_json(j));
        if (family.empty()) throw PreconditionViolation("no planes given");
        const auto& first = std::get<affine::AffinePlane>(family.front());
        const nets::Space s{nets::SpaceKind::affine, first.n(), first.k()};
        for (int scale = w.r_min; scale <= w.r_max; ++scale) {
          if (scale < 1) continue;
          const auto grid = nets::build_net(s, scale, budget, audit_seed, probes, exec_arg(serial));
          profile.scales.push_back(scale);
          profile.counts.push_back(dim::box_count_planes(family, grid, exec_arg(serial)));
        }
      } else {
        profile = dim::count_profile(io::points_from_json(data), w, exec_arg(serial));
      }
      const auto estimate = dim::estimate_dim(profile, w);
      if (!csv.empty()) write_file(csv, profile.to_csv());
      Sink sink(output, out);
      *sink << io::to_json(estimate).dump() << '\n';
    } else if (expc->parsed()) {
      if (config.empty() == !standard) throw UsageError("give exactly one of --config and --standard");
      std::vector<exp::ExperimentSpec> specs =
          standard ? exp::standard_suite() : io::suite_from_json(parse_json(read_text(config), "config")).experiments;
      for (auto& s : specs) {
        if (seed_override) s.seed = *seed_override;
        if (tol_override) s.tolerance = *tol_override;
      }
      if (dump_config) {
        Sink sink(output, out);
        *sink << io::to_json(io::SuiteConfig{1, specs}).dump(2) << '\n';
        return kOk;
      }
      if (!csv_dir.empty() && !std::filesystem::is_directory(csv_dir)) {
        throw UsageError("--csv-dir '" + csv_dir + "' is not a directory");
      }
      const auto reports = exp::run_suite(specs, exec_arg(serial));
      Sink sink(output, out);
      bool all = true;
      for (const auto& rep : reports) {
        *sink << io::to_json(rep).dump() << '\n';
        all = all && rep.satisfied;
        if (!csv_dir.empty()) write_file(csv_dir + "/" + rep.id + ".csv", rep.profile.to_csv());
      }
      if (!all) {
        for (const auto& rep : reports) {
          if (!rep.satisfied) err << "unsatisfied: " << rep.id << " (margin " << rep.margin << ")\n";
        }
        return kUnsatisfiedBound;
      }
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << e.kind() << ": " << e.what() << '\n';
    return kDomainError;
  }
  return kOk;
}

int run(int argc, char** argv) {
  return run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}

}  // namespace affgrass::cli
