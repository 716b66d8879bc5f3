// riesz: command-line driver for the energy library.
//
//   riesz energy       --shape S (--z Z | --z-grid lo:hi:n) [--method M]
//   riesz residues     --shape S [--cross-check]
//   riesz psi          --shape S --x U [--y V] [--t-grid lo:hi:n]
//   riesz beta_sweep   --shape S --z-grid lo:hi:n
//   riesz moebius_check --shape S --z Z --map STEPS
//   riesz validate     [--only 1,4,7]
//
// Output is CSV with a '#' header block. Exit codes: 0 success, 1 failed
// validation, 2 invalid configuration, 3 numerical failure.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "riesz/acceptance.hpp"
#include "riesz/closed_energy.hpp"
#include "riesz/domain_energy.hpp"
#include "riesz/errors.hpp"
#include "riesz/extrinsic.hpp"
#include "riesz/moebius.hpp"

#ifndef RIESZ_VERSION
#define RIESZ_VERSION "0.0.0"
#endif

using namespace riesz;

namespace {

struct Config {
  std::string command;
  std::string shape;
  std::string z;
  std::string z_grid;
  std::string t_grid;
  std::string eps_schedule;
  std::string method = "auto";
  std::string map;
  std::string out;
  std::string format = "csv";
  std::string only;
  double tol = 1e-6;
  double x = 0.0, y = 0.0;
  int level = 1;
  int threads = 0;
  bool cross_check = false;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string quoted(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string o = "\"";
  for (char c : s) o += c == '"' ? std::string("\"\"") : std::string(1, c);
  return o + "\"";
}

// Canonical text of everything that affects the numbers.
std::string canonical(const Config& c) {
  std::ostringstream os;
  os << "command=" << c.command << ";shape=" << c.shape << ";z=" << c.z << ";z_grid=" << c.z_grid
     << ";t_grid=" << c.t_grid << ";eps=" << c.eps_schedule << ";method=" << c.method << ";map=" << c.map
     << ";tol=" << num(c.tol) << ";x=" << num(c.x) << ";y=" << num(c.y) << ";level=" << c.level
     << ";cross_check=" << c.cross_check << ";only=" << c.only;
  return os.str();
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : s) h = (h ^ ch) * 1099511628211ull;
  return h;
}

class Csv {
 public:
  Csv(const Config& c, std::ostream& os, const std::vector<std::string>& columns) : os_(os) {
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016" PRIx64, fnv1a(canonical(c)));
    os_ << "# riesz " << RIESZ_VERSION << "\n# config_hash " << hash << "\n# config " << canonical(c) << "\n";
    header_ = columns;
  }
  void comment(const std::string& line) { os_ << "# " << line << "\n"; }
  void row(const std::vector<std::string>& cells) {
    if (!header_.empty()) {
      emit(header_);
      header_.clear();
    }
    emit(cells);
  }

 private:
  void emit(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << quoted(cells[i]);
    os_ << "\n";
  }
  std::ostream& os_;
  std::vector<std::string> header_;
};

std::vector<double> parse_grid(const std::string& text, const char* flag) {
  double lo, hi;
  int n;
  char tail;
  if (std::sscanf(text.c_str(), "%lf:%lf:%d%c", &lo, &hi, &n, &tail) != 3 || n < 1 || (n == 1 && lo != hi))
    throw Error(ErrorKind::InvalidParams, std::string(flag) + " expects lo:hi:n with n >= 1");
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
  return g;
}

std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidParams, std::string(flag) + ": cannot read '" + item + "'");
    }
  }
  if (out.empty()) throw Error(ErrorKind::InvalidParams, std::string(flag) + " is empty");
  return out;
}

std::vector<double> z_values(const Config& c) {
  if (!c.z.empty() && !c.z_grid.empty()) throw Error(ErrorKind::InvalidParams, "give --z or --z-grid, not both");
  if (!c.z_grid.empty()) return parse_grid(c.z_grid, "--z-grid");
  if (!c.z.empty()) return parse_list(c.z, "--z");
  throw Error(ErrorKind::InvalidParams, "missing --z or --z-grid");
}

EnergyOptions energy_options(const Config& c) {
  if (!(c.tol > 0.0)) throw Error(ErrorKind::InvalidParams, "--tol must be positive");
  if (c.level < 0) throw Error(ErrorKind::InvalidParams, "--level must be nonnegative");
  EnergyOptions o;
  o.tol = c.tol;
  o.level = c.level;
  o.threads = c.threads;
  if (!c.eps_schedule.empty()) {
    // eps0:ratio:count or an explicit list, as fractions of the near radius
    double e0, r;
    int n;
    char tail;
    if (std::sscanf(c.eps_schedule.c_str(), "%lf:%lf:%d%c", &e0, &r, &n, &tail) == 3) {
      if (!(e0 > 0.0) || !(r > 0.0 && r < 1.0) || n < 4)
        throw Error(ErrorKind::InvalidParams, "--eps-schedule needs eps0 > 0, 0 < ratio < 1, count >= 4");
      o.eps = eps_schedule(e0, r, n);
    } else {
      o.eps = parse_list(c.eps_schedule, "--eps-schedule");
      for (double e : o.eps)
        if (!(e > 0.0)) throw Error(ErrorKind::InvalidParams, "--eps-schedule entries must be positive");
    }
  }
  return o;
}

Shape require_shape(const Config& c) {
  if (c.shape.empty()) throw Error(ErrorKind::InvalidParams, "missing --shape");
  return parse_shape(c.shape);
}

struct Row {
  double z;
  cplx value, residue;
  std::string method;
  double error;
};

Row closed_row(const Shape& s, double z, const std::string& method, const EnergyOptions& o) {
  EnergyReport r;
  if (method == "auto") r = energy(s, z, o);
  else if (method == "direct") r = energy_direct(s, z, o);
  else if (method == "continuation") r = energy_continuation(s, z, o);
  else if (method == "counterterm") r = energy_counterterm(s, z, o);
  else if (method == "hadamard") r = energy_hadamard(s, z, o);
  else if (method == "closed-form") r = closed_energies(s, std::vector<cplx>{cplx(z)}, Method::closed_form, o).front();
  else throw Error(ErrorKind::InvalidParams, "method '" + method + "' does not apply to closed manifolds");
  return {z, r.value, r.residue_at_z, to_string(r.method), r.error_estimate};
}

Row domain_row(const Domain& d, double z, const std::string& method, const EnergyOptions& o) {
  DomainEnergyReport r;
  if (method == "auto") r = domain_energy(d, z, o);
  else if (method == "direct") r = domain_energy_direct(d, z, o);
  else if (method == "boundary") r = domain_energy_boundary(d, z, o);
  else if (method == "closed-form") r = domain_energy_closed_form(d, z);
  else throw Error(ErrorKind::InvalidParams, "method '" + method + "' does not apply to domains");
  return {z, r.value, r.residue_at_z, to_string(r.method), r.error_estimate};
}

Row energy_row(const Shape& s, double z, const std::string& method, const EnergyOptions& o) {
  if (const auto* d = std::get_if<Domain>(&s)) return domain_row(*d, z, method, o);
  return closed_row(s, z, method, o);
}

const std::vector<std::string> kEnergyColumns = {"shape", "z", "value", "value_imag", "method", "residue",
                                                 "error_estimate"};

std::vector<std::string> energy_cells(const std::string& shape, const Row& r) {
  return {shape, num(r.z), num(r.value.real()), num(r.value.imag()), r.method, num(r.residue.real()), num(r.error)};
}

int cmd_energy(const Config& c, std::ostream& os) {
  const Shape s = require_shape(c);
  const EnergyOptions o = energy_options(c);
  Csv csv(c, os, kEnergyColumns);
  for (double z : z_values(c)) csv.row(energy_cells(shape_id(s), energy_row(s, z, c.method, o)));
  return 0;
}

int cmd_residues(const Config& c, std::ostream& os) {
  const Shape s = require_shape(c);
  const EnergyOptions o = energy_options(c);
  Csv csv(c, os, {"shape", "k", "residue", "method", "error_estimate"});
  const Domain* d = std::get_if<Domain>(&s);
  const std::vector<ResidueEntry> rs = d ? domain_residues(*d) : residues(s);
  for (const ResidueEntry& r : rs) {
    csv.row({shape_id(s), std::to_string(r.k), num(r.value), "curvature_integral", num(r.error_estimate)});
    if (c.cross_check) {
      const ResidueEntry f = d ? domain_residue_from_cutoff(*d, r.k, o) : residue_from_cutoff(s, r.k, o);
      csv.row({shape_id(s), std::to_string(r.k), num(f.value), "cutoff_fit", num(f.error_estimate)});
    }
  }
  return 0;
}

int cmd_psi(const Config& c, std::ostream& os) {
  const Shape s = require_shape(c);
  if (std::holds_alternative<Domain>(s))
    throw Error(ErrorKind::InvalidParams, "psi takes a curve or surface; domains have no point profile here");
  const double diam = shape_diameter(s);
  const std::vector<double> ts = c.t_grid.empty() ? parse_grid("0:" + num(1.1 * diam) + ":45", "--t-grid")
                                                  : parse_grid(c.t_grid, "--t-grid");
  Csv csv(c, os, {"shape", "x", "y", "t", "psi", "method", "error_estimate"});
  for (double t : ts) {
    if (t < 0.0) throw Error(ErrorKind::InvalidParams, "--t-grid must be nonnegative");
    const double a = psi_numeric(s, c.x, c.y, t, PairWeight::none, 64);
    const double b = psi_numeric(s, c.x, c.y, t, PairWeight::none, 128);
    csv.row({shape_id(s), num(c.x), num(c.y), num(t), num(b), "ray_bracketing", num(std::abs(a - b))});
  }
  return 0;
}

int cmd_beta_sweep(const Config& c, std::ostream& os) {
  const Shape s = require_shape(c);
  const EnergyOptions o = energy_options(c);
  if (c.z_grid.empty()) throw Error(ErrorKind::InvalidParams, "beta_sweep needs --z-grid");
  const std::vector<double> zs = parse_grid(c.z_grid, "--z-grid");
  const auto [lo, hi] = std::minmax_element(zs.begin(), zs.end());
  Csv csv(c, os, {"shape", "z", "value", "value_imag", "method", "residue", "error_estimate", "pole"});
  const Domain* d = std::get_if<Domain>(&s);
  const std::vector<ResidueEntry> rs = d ? domain_residues(*d) : residues(s);
  double scale = 0.0;
  for (const ResidueEntry& r : rs) scale = std::max(scale, std::abs(r.value));
  // a vanishing residue (the umbilic sphere at -4, say) is no pole
  for (const ResidueEntry& r : rs)
    if (-r.k >= *lo && -r.k <= *hi && std::abs(r.value) > 1e-10 * scale)
      csv.comment("pole z=" + std::to_string(-r.k) + " residue=" + num(r.value));
  for (double z : zs) {
    const Row r = energy_row(s, z, "auto", o);
    std::vector<std::string> cells = energy_cells(shape_id(s), r);
    cells.push_back(std::abs(r.residue) > 0.0 ? "yes" : "no");
    csv.row(cells);
  }
  return 0;
}

// STEPS: semicolon-separated translate:x,y,z | scale:c | invert:x,y,z[,r], applied left to right.
MoebiusMap parse_map(const std::string& text) {
  if (text.empty()) throw Error(ErrorKind::InvalidParams, "missing --map");
  MoebiusMap T = MoebiusMap::identity();
  std::stringstream ss(text);
  std::string step;
  while (std::getline(ss, step, ';')) {
    const std::size_t colon = step.find(':');
    if (colon == std::string::npos) throw Error(ErrorKind::InvalidParams, "map step '" + step + "' lacks ':'");
    const std::string kind = step.substr(0, colon);
    const std::vector<double> a = parse_list(step.substr(colon + 1), "--map");
    if (kind == "translate" && a.size() == 3) T = MoebiusMap::translation({a[0], a[1], a[2]}) * T;
    else if (kind == "scale" && a.size() == 1) T = MoebiusMap::homothety(a[0]) * T;
    else if (kind == "invert" && (a.size() == 3 || a.size() == 4))
      T = MoebiusMap::inversion({a[0], a[1], a[2]}, a.size() == 4 ? a[3] : 1.0) * T;
    else throw Error(ErrorKind::InvalidParams, "cannot read map step '" + step + "'");
  }
  return T;
}

int cmd_moebius_check(const Config& c, std::ostream& os) {
  const Shape s = require_shape(c);
  const EnergyOptions o = energy_options(c);
  const MoebiusMap T = parse_map(c.map);
  Csv csv(c, os, {"shape", "map", "z", "original", "image", "defect", "predicted_defect", "tolerance",
                  "error_estimate", "pass"});
  for (double z : z_values(c)) {
    const InvarianceReport r = invariance_check(s, z, T, o);
    csv.row({shape_id(s), T.describe(), num(z), num(r.original.real()), num(r.image.real()), num(r.defect),
             r.has_prediction ? num(r.predicted_defect.real()) : "", num(r.tolerance), num(r.error_estimate),
             r.pass ? "pass" : "fail"});
  }
  return 0;
}

int cmd_validate(const Config& c, std::ostream& os) {
  AcceptanceOptions a;
  a.threads = c.threads;
  if (!c.only.empty())
    for (double v : parse_list(c.only, "--only")) a.only.push_back(static_cast<int>(v));
  Csv csv(c, os, {"criterion", "title", "result", "detail"});
  bool all = true;
  for (const CriterionResult& r : run_acceptance(a)) {
    std::fprintf(stderr, "%2d %-48s %s %6.1fs\n", r.id, r.title.c_str(), r.pass ? "PASS" : "FAIL", r.seconds);
    csv.row({std::to_string(r.id), r.title, r.pass ? "pass" : "fail", r.detail});
    all = all && r.pass;
  }
  return all ? 0 : 1;
}

int run(const Config& c, std::ostream& os) {
  if (c.command == "energy") return cmd_energy(c, os);
  if (c.command == "residues") return cmd_residues(c, os);
  if (c.command == "psi") return cmd_psi(c, os);
  if (c.command == "beta_sweep") return cmd_beta_sweep(c, os);
  if (c.command == "moebius_check") return cmd_moebius_check(c, os);
  return cmd_validate(c, os);
}

// Output is buffered so a failed command leaves no partial file behind.
int dispatch(const Config& c) {
  if (c.format != "csv") throw Error(ErrorKind::InvalidParams, "only --format csv is supported");
  std::ostringstream buf;
  const int code = run(c, buf);
  if (c.out.empty()) {
    std::cout << buf.str();
  } else {
    std::ofstream file(c.out);
    if (!(file << buf.str())) throw Error(ErrorKind::InvalidParams, "cannot write " + c.out);
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularized Riesz energies of curves, surfaces and domains"};
  app.set_version_flag("--version", RIESZ_VERSION);
  app.require_subcommand(1);
  Config c;

  auto common = [&c](CLI::App* sub, bool shape) {
    if (shape) sub->add_option("--shape", c.shape, "shape spec, e.g. \"ellipse(a=2,b=1)\"");
    sub->add_option("--eps-schedule", c.eps_schedule, "eps0:ratio:count or a list, fractions of the near radius");
    sub->add_option("--tol", c.tol, "relative tolerance for method agreement");
    sub->add_option("--level", c.level, "resolution level");
    sub->add_option("--out", c.out, "output file (default stdout)");
    sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"csv"}));
    sub->add_option("--threads", c.threads, "worker threads (default RIESZ_THREADS or hardware)");
  };
  auto z_opts = [&c](CLI::App* sub) {
    sub->add_option("--z", c.z, "exponent or comma-separated exponents");
    sub->add_option("--z-grid", c.z_grid, "lo:hi:n");
  };

  CLI::App* energy = app.add_subcommand("energy", "regularized energy at one or more exponents");
  common(energy, true);
  z_opts(energy);
  energy->add_option("--method", c.method, "auto, direct, continuation, counterterm, hadamard, closed-form, boundary")
      ->check(CLI::IsMember({"auto", "direct", "continuation", "counterterm", "hadamard", "closed-form", "boundary"}));

  CLI::App* residues = app.add_subcommand("residues", "residues at the first poles");
  common(residues, true);
  residues->add_flag("--cross-check", c.cross_check, "add residues fitted from cutoff integrals");

  CLI::App* psi = app.add_subcommand("psi", "extrinsic ball volume psi_x(t)");
  common(psi, true);
  psi->add_option("--x", c.x, "curve parameter or first surface chart parameter");
  psi->add_option("--y", c.y, "second surface chart parameter");
  psi->add_option("--t-grid", c.t_grid, "lo:hi:n (default 0 to 1.1 diameters)");

  CLI::App* sweep = app.add_subcommand("beta_sweep", "energy along a real grid with pole annotations");
  common(sweep, true);
  sweep->add_option("--z-grid", c.z_grid, "lo:hi:n");

  CLI::App* moebius = app.add_subcommand("moebius_check", "energy before and after a Moebius map");
  common(moebius, true);
  z_opts(moebius);
  moebius->add_option("--map", c.map, "steps like \"invert:0,3,0,2;scale:2\", applied left to right");

  CLI::App* validate = app.add_subcommand("validate", "run the acceptance suite");
  common(validate, false);
  validate->add_option("--only", c.only, "comma-separated criterion numbers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  c.command = app.get_subcommands().front()->get_name();
  if (c.threads == 0)
    if (const char* env = std::getenv("RIESZ_THREADS")) c.threads = std::atoi(env);
  if (c.threads < 0) {
    std::cerr << "error: --threads must be nonnegative\n";
    return 2;
  }
  set_default_thread_count(c.threads);

  try {
    return dispatch(c);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_config_error(e.kind()) ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
