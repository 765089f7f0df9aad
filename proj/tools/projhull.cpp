// projhull: command-line front end for the hull library.
//
// Exit codes: 0 success, 1 check failure, 2 usage or validation error,
// 3 resource cap (degree cap) violation.

#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "projhull/projhull.hpp"

namespace {

using projhull::cplx;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCap = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Accepts "2", "-0.5", "0.5i", "i", "1+2i", "1-2.5e-3i".
cplx parse_complex(std::string s) {
  std::erase(s, ' ');
  static const std::regex full(R"(^([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)([+-](?:\d+\.?\d*|\.\d+)?(?:[eE][+-]?\d+)?)i$)");
  static const std::regex real_only(R"(^[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?$)");
  static const std::regex imag_only(R"(^([+-]?(?:\d+\.?\d*|\.\d+)?(?:[eE][+-]?\d+)?)i$)");
  const auto coef = [](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return std::stod(t);
  };
  std::smatch m;
  if (std::regex_match(s, m, full)) return {std::stod(m[1]), coef(m[2])};
  if (std::regex_match(s, real_only)) return {std::stod(s), 0.0};
  if (std::regex_match(s, m, imag_only)) return {0.0, coef(m[1])};
  throw UsageError("cannot parse complex number '" + s + "'");
}

std::vector<cplx> parse_complex_list(const std::string& s) {
  std::vector<cplx> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(parse_complex(item));
  return out;
}

std::size_t coordinate_index(const std::string& name, std::size_t n) {
  if (n == 2 && name == "z") return 0;
  if (n == 2 && name == "w") return 1;
  try {
    std::size_t pos = 0;
    const auto i = std::stoul(name, &pos);
    if (pos == name.size() && i < n) return i;
  } catch (const std::exception&) {
  }
  throw UsageError("unknown coordinate '" + name + "'");
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

projhull::SeriesVariant variant_or_throw(const std::string& s) {
  const auto v = projhull::parse_variant(s);
  if (!v) throw UsageError("unknown variant '" + s + "' (expected example1-standard, example1-rapid or example2)");
  return *v;
}

json envelope(const std::string& command, const json& config, std::uint64_t seed) {
  return {{"tool", "projhull"}, {"version", projhull::kVersion}, {"command", command}, {"config", config},
          {"seed", seed}};
}

struct CurveArgs {
  std::string variant = "example1-standard";
  std::size_t m = 2048;
  std::string out;
};

int cmd_curve(const CurveArgs& a) {
  const projhull::PoleSeriesParams params(variant_or_throw(a.variant));
  const auto curve = projhull::build_curve(params, a.m);
  json doc = projhull::curve_to_json(curve);
  doc["meta"]["generator"] = envelope("curve", {{"variant", a.variant}, {"m", a.m}}, 0);
  write_text(a.out, projhull::dump_fixed(doc));
  std::cerr << "kappa = " << projhull::format_double(params.kappa(), 10) << '\n'
            << "sample tail bound = " << projhull::format_double(curve.meta()["sample_tail_bound"].get<double>(), 6)
            << '\n';
  if (params.variant() == projhull::SeriesVariant::Example2)
    std::cerr << "sum k c_k / eps_k <= " << projhull::format_double(params.weighted_sum_bound(), 10) << '\n';
  return kExitOk;
}

struct ScanArgs {
  std::string curve;
  std::vector<std::string> fix;
  std::string vary = "w";
  std::vector<double> rect{-1.0, -1.0, 1.0, 1.0};
  std::size_t res = 64;
  std::size_t res_im = 0;
  unsigned dmax = 16;
  std::size_t threads = 0;
  std::uint64_t seed = 0;
  std::string out = "scan.json";
  std::string csv;
  std::string pgm;
  projhull::ClassifyOptions cls;
};

int cmd_scan(const ScanArgs& a) {
  const auto curve = projhull::curve_from_json(read_json(a.curve));
  const std::size_t n = curve.n();
  projhull::GridSlice slice;
  slice.fixed.assign(n, 0.0);
  for (const auto& f : a.fix) {
    const auto eq = f.find('=');
    if (eq == std::string::npos) throw UsageError("--fix expects name=value, got '" + f + "'");
    slice.fixed[coordinate_index(f.substr(0, eq), n)] = parse_complex(f.substr(eq + 1));
  }
  slice.vary = coordinate_index(a.vary, n);
  if (a.rect.size() != 4) throw UsageError("--rect expects re_min,im_min,re_max,im_max");
  slice.re_min = a.rect[0];
  slice.im_min = a.rect[1];
  slice.re_max = a.rect[2];
  slice.im_max = a.rect[3];
  slice.res_re = a.res;
  slice.res_im = a.res_im ? a.res_im : a.res;

  const projhull::HullScanner scanner(curve, a.dmax, a.cls);
  const auto rep = projhull::classify_grid(slice, scanner, a.threads);
  json doc = projhull::scan_report_json(rep, scanner);
  json cfg = {{"curve", a.curve}, {"fix", a.fix},       {"vary", a.vary}, {"rect", a.rect},
              {"res", a.res},     {"res_im", slice.res_im}, {"dmax", a.dmax}};
  doc["run"] = envelope("scan", cfg, a.seed);
  write_text(a.out, projhull::dump_fixed(doc));
  if (!a.csv.empty()) write_text(a.csv, projhull::heatmap_csv(rep));
  if (!a.pgm.empty()) {
    std::string img = projhull::heatmap_pgm(rep);
    // PGM allows comment lines after the magic number.
    img.insert(3, "# projhull " + std::string(projhull::kVersion) + " seed " + std::to_string(a.seed) + " config " +
                      cfg.dump() + "\n");
    write_text(a.pgm, img);
  }
  std::size_t counts[3] = {0, 0, 0};
  for (const auto& p : rep.profiles) ++counts[static_cast<int>(p.classification)];
  std::cerr << rep.profiles.size() << " points: " << counts[0] << " IN, " << counts[1] << " OUT, " << counts[2]
            << " MARGINAL\n";
  return kExitOk;
}

struct Thm3Args {
  std::string variant = "example1-standard";
  std::size_t nmax = 40;
  std::size_t m = 2048;
  std::size_t root_n = 60;
  std::string out = "thm3.json";
};

int cmd_thm3(const Thm3Args& a) {
  const projhull::PoleSeriesParams params(variant_or_throw(a.variant));
  projhull::TheoremThreeOptions o;
  o.N_max = a.nmax;
  o.m = a.m;
  o.root_N = a.root_n;
  o.chart_N_max = std::min<std::size_t>(o.chart_N_max, a.nmax);
  o.fiber_N_max = std::min<std::size_t>(o.fiber_N_max, a.nmax);
  o.tail_N_max = std::min<std::size_t>(o.tail_N_max, a.nmax);
  const auto rep = projhull::verify_theorem3(params, o);
  json doc = projhull::to_json(rep);
  doc["run"] = envelope("thm3", {{"variant", a.variant}, {"nmax", a.nmax}, {"m", a.m}, {"root_n", a.root_n}}, 0);
  write_text(a.out, projhull::dump_fixed(doc));
  if (!rep.all_pass()) {
    for (const auto& f : rep.failures()) std::cerr << "FAILED: " << f << '\n';
    return kExitCheckFailed;
  }
  std::cerr << "all checks pass\n";
  return kExitOk;
}

struct DiskArgs {
  std::string map;
  std::string curve;
  double r = 0.1;
  std::string z0 = "0,0";
  double M = 1.25;
  std::size_t m_bdy = 1024;
  bool certified = false;
  std::string out = "-";
  // optimize
  std::size_t poles = 4;
  std::size_t restarts = 5;
  std::size_t max_evals = 400;
  std::uint64_t seed = 0;
  // family
  std::size_t family_n = 3;
  std::string variant = "example1-standard";
};

json conditions_json(const projhull::DiskConditionsReport& r) {
  json offending = json::array();
  for (cplx p : r.cond_iv.offending_poles) offending.push_back({{"re", p.real()}, {"im", p.imag()}});
  return {{"cond_i", {{"holds", r.cond_i.holds}, {"max_boundary_distance", r.cond_i.max_boundary_distance},
                      {"threshold", r.cond_i.threshold}}},
          {"cond_ii", {{"holds", r.cond_ii.holds}, {"deviation", r.cond_ii.deviation}}},
          {"cond_iii", {{"holds", r.cond_iii.holds}, {"pole_log_sum", r.cond_iii.pole_log_sum}, {"M", r.cond_iii.M}}},
          {"cond_iv", {{"holds", r.cond_iv.holds}, {"offending_poles", offending}}},
          {"all_hold", r.all_hold()}};
}

int cmd_disk_check(const DiskArgs& a) {
  const auto f = projhull::disk_map_from_json(read_json(a.map));
  const auto curve = projhull::curve_from_json(read_json(a.curve));
  const auto z0 = parse_complex_list(a.z0);
  const auto rep = projhull::check_conditions(f, curve, a.r, z0, a.M, a.m_bdy, a.certified);
  json doc = conditions_json(rep);
  doc["run"] = envelope("disk check",
                        {{"map", a.map}, {"curve", a.curve}, {"r", a.r}, {"z0", a.z0}, {"M", a.M},
                         {"m_bdy", a.m_bdy}, {"certified", a.certified}},
                        0);
  write_text(a.out, projhull::dump_fixed(doc));
  return rep.all_hold() ? kExitOk : kExitCheckFailed;
}

int cmd_disk_optimize(const DiskArgs& a) {
  const auto curve = projhull::curve_from_json(read_json(a.curve));
  const auto z0 = parse_complex_list(a.z0);
  projhull::DiskSearchOptions o;
  o.max_poles = a.poles;
  o.restarts = a.restarts;
  o.max_evals = a.max_evals;
  o.m_bdy = a.m_bdy;
  o.seed = a.seed;
  const json cfg = {{"curve", a.curve}, {"r", a.r},   {"z0", a.z0},     {"poles", a.poles},
                    {"restarts", a.restarts}, {"max_evals", a.max_evals}, {"m_bdy", a.m_bdy}};
  try {
    const auto res = projhull::disk_lower_bound(z0, curve, a.r, o);
    json doc = projhull::to_json(res);
    doc["run"] = envelope("disk optimize", cfg, a.seed);
    write_text(a.out, projhull::dump_fixed(doc));
    return kExitOk;
  } catch (const projhull::InfeasibleError& e) {
    json doc = {{"feasible", false}, {"message", e.what()}, {"best_penalty", e.best_penalty()}};
    doc["run"] = envelope("disk optimize", cfg, a.seed);
    write_text(a.out, projhull::dump_fixed(doc));
    std::cerr << e.what() << " (best boundary excess " << e.best_penalty() << ")\n";
    return kExitCheckFailed;
  }
}

int cmd_disk_family(const DiskArgs& a) {
  const projhull::PoleSeriesParams params(variant_or_throw(a.variant));
  if (params.variant() == projhull::SeriesVariant::Example2) throw UsageError("family maps exist for example1 variants");
  const auto f = projhull::example1_map(params, a.family_n);
  write_text(a.out, projhull::dump_fixed(projhull::disk_map_to_json(f)));
  return kExitOk;
}

struct BlaschkeArgs {
  std::string zeros;
  std::string zeros_file;
  std::size_t m_bdy = 1024;
};

int cmd_blaschke(const BlaschkeArgs& a) {
  std::vector<cplx> zeros = parse_complex_list(a.zeros);
  if (!a.zeros_file.empty()) {
    std::ifstream in(a.zeros_file);
    if (!in) throw UsageError("cannot open " + a.zeros_file);
    std::string line;
    while (std::getline(in, line))
      for (cplx z : parse_complex_list(line)) zeros.push_back(z);
  }
  const projhull::BlaschkeProduct b(zeros);
  const cplx b0 = b(0.0);
  double dev = 0.0;
  for (std::size_t k = 0; k < a.m_bdy; ++k) dev = std::max(dev, std::abs(std::abs(b(projhull::unit_root(k, a.m_bdy))) - 1.0));
  const auto fmt = [](double x) { return projhull::format_double(x, 10); };
  std::cout << "B(0) = " << fmt(b0.real());
  if (b0.imag() != 0.0) std::cout << (b0.imag() < 0 ? " - " : " + ") << fmt(std::abs(b0.imag())) << "i";
  std::cout << '\n'
            << "sum log|zeta_j| = " << fmt(projhull::blaschke_log_center(b)) << '\n'
            << "max ||B| - 1| on boundary = " << projhull::format_double(dev, 3) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Projective hull laboratory for sampled curves"};
  app.set_config("--config", "", "TOML file mirroring the flags (flags win)");
  app.set_version_flag("--version", projhull::kVersion);
  app.require_subcommand(1);

  CurveArgs curve_args;
  auto* curve = app.add_subcommand("curve", "Sample an example curve");
  curve->add_option("--variant", curve_args.variant, "example1-standard | example1-rapid | example2");
  curve->add_option("--m", curve_args.m, "sample count (>= 64)")->check(CLI::Range(64, 1 << 20));
  curve->add_option("-o,--out", curve_args.out, "output curve JSON")->required();

  ScanArgs scan_args;
  auto* scan = app.add_subcommand("scan", "Classify a grid slice against a curve");
  scan->add_option("--curve", scan_args.curve, "curve JSON")->required()->check(CLI::ExistingFile);
  scan->add_option("--fix", scan_args.fix, "fixed coordinate, e.g. z=0+0i")->delimiter(';');
  scan->add_option("--vary", scan_args.vary, "varying coordinate name or index");
  scan->add_option("--rect", scan_args.rect, "re_min,im_min,re_max,im_max")->delimiter(',')->expected(4);
  scan->add_option("--res", scan_args.res, "grid points per side")->check(CLI::Range(1, 512));
  scan->add_option("--res-im", scan_args.res_im, "grid points along the imaginary axis (default: --res)")
      ->check(CLI::Range(0, 512));
  scan->add_option("--dmax", scan_args.dmax, "largest degree")->check(CLI::Range(2, 200));
  scan->add_option("--threads", scan_args.threads, "worker threads (0: PROJHULL_THREADS or hardware)");
  scan->add_option("--seed", scan_args.seed, "recorded seed");
  scan->add_option("--slope-out", scan_args.cls.slope_out);
  scan->add_option("--slope-in", scan_args.cls.slope_in);
  scan->add_option("--residual-out", scan_args.cls.residual_out);
  scan->add_option("--residual-in", scan_args.cls.residual_in);
  scan->add_option("--eigen-cutoff", scan_args.cls.eigen_cutoff);
  scan->add_option("-o,--out", scan_args.out, "report JSON");
  scan->add_option("--csv", scan_args.csv, "heatmap CSV");
  scan->add_option("--pgm", scan_args.pgm, "class-label PGM");

  Thm3Args thm3_args;
  auto* thm3 = app.add_subcommand("thm3", "Verify the separating polynomial family");
  thm3->add_option("--variant", thm3_args.variant, "example1-standard | example1-rapid");
  thm3->add_option("--nmax", thm3_args.nmax, "largest N")->check(CLI::Range(2, 120));
  thm3->add_option("--m", thm3_args.m, "curve samples")->check(CLI::Range(1024, 1 << 20));
  thm3->add_option("--root-n", thm3_args.root_n, "N for the root-limit check")->check(CLI::Range(1, 120));
  thm3->add_option("-o,--out", thm3_args.out, "report JSON");

  DiskArgs disk_args;
  auto* disk = app.add_subcommand("disk", "Analytic disk utilities");
  disk->require_subcommand(1);
  auto* check = disk->add_subcommand("check", "Check conditions (i)-(iv) for a disk map");
  check->add_option("--map", disk_args.map, "disk map JSON")->required()->check(CLI::ExistingFile);
  check->add_option("--curve", disk_args.curve, "curve JSON")->required()->check(CLI::ExistingFile);
  check->add_option("--r", disk_args.r, "tube radius")->check(CLI::PositiveNumber);
  check->add_option("--z0", disk_args.z0, "center point, comma separated");
  check->add_option("--M", disk_args.M, "pole log-sum bound");
  check->add_option("--mbdy", disk_args.m_bdy, "boundary samples")->check(CLI::Range(256, 1 << 20));
  check->add_flag("--certified", disk_args.certified, "use r/2 for condition (i)");
  check->add_option("-o,--out", disk_args.out, "report JSON (default stdout)");
  auto* optimize = disk->add_subcommand("optimize", "Search pole disks for the best pole log-sum");
  optimize->add_option("--curve", disk_args.curve, "curve JSON")->required()->check(CLI::ExistingFile);
  optimize->add_option("--r", disk_args.r, "tube radius")->check(CLI::PositiveNumber);
  optimize->add_option("--z0", disk_args.z0, "center point, comma separated");
  optimize->add_option("--poles", disk_args.poles, "largest pole count");
  optimize->add_option("--restarts", disk_args.restarts, "restarts per pole count")->check(CLI::Range(1, 1000));
  optimize->add_option("--max-evals", disk_args.max_evals, "evaluations per restart");
  optimize->add_option("--mbdy", disk_args.m_bdy, "boundary samples")->check(CLI::Range(256, 1 << 20));
  optimize->add_option("--seed", disk_args.seed, "restart seed");
  optimize->add_option("-o,--out", disk_args.out, "result JSON (default stdout)");
  auto* family = disk->add_subcommand("family", "Write the example disk f_n(zeta) = (zeta, omega_n(zeta))");
  family->add_option("--n", disk_args.family_n, "pole count")->check(CLI::Range(0, 190));
  family->add_option("--variant", disk_args.variant, "example1-standard | example1-rapid");
  family->add_option("-o,--out", disk_args.out, "disk map JSON (default stdout)");

  BlaschkeArgs bl_args;
  auto* blaschke = app.add_subcommand("blaschke", "Blaschke product utilities");
  blaschke->add_option("--zeros", bl_args.zeros, "comma separated zeros, e.g. 0.5,0.3i");
  blaschke->add_option("--zeros-file", bl_args.zeros_file, "file of zeros");
  blaschke->add_option("--mbdy", bl_args.m_bdy, "boundary samples")->check(CLI::Range(1, 1 << 22));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*curve) return cmd_curve(curve_args);
    if (*scan) return cmd_scan(scan_args);
    if (*thm3) return cmd_thm3(thm3_args);
    if (*check) return cmd_disk_check(disk_args);
    if (*optimize) return cmd_disk_optimize(disk_args);
    if (*family) return cmd_disk_family(disk_args);
    if (*blaschke) return cmd_blaschke(bl_args);
  } catch (const projhull::DegreeCapError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCap;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const projhull::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
