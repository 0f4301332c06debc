// prlab: command-line surface over the race / kernel / density modules.
//
// Exit codes: 0 success, 2 usage error, 3 missing or unreadable data,
// 4 numeric budget exhausted (density refinement did not converge).
//
// All floating-point output goes through format_double (17 significant
// digits) and every code path is deterministic for a fixed (config, dataset)
// pair, including across --threads values, so repeated runs are
// byte-identical.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "prlab/density.hpp"
#include "prlab/kernels.hpp"
#include "prlab/race.hpp"
#include "prlab/residue.hpp"
#include "prlab/sieve.hpp"
#include "prlab/zeros.hpp"

namespace {

using namespace prlab;

std::vector<std::uint64_t> parse_u64_list(const std::string& s,
                                          const char* what) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw std::invalid_argument(std::string(what) + ": empty entry in '" + s + "'");
    std::size_t pos = 0;
    unsigned long long v = std::stoull(item, &pos);
    if (pos != item.size())
      throw std::invalid_argument(std::string(what) + ": bad integer '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument(std::string(what) + ": empty list");
  return out;
}

// "lo:hi:step" inclusive grid, or a single value.
std::vector<double> parse_grid(const std::string& s, const char* what) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  auto num = [&](const std::string& t) {
    std::size_t pos = 0;
    double v = std::stod(t, &pos);
    if (pos != t.size())
      throw std::invalid_argument(std::string(what) + ": bad number '" + t + "'");
    return v;
  };
  if (parts.size() == 1) return {num(parts[0])};
  if (parts.size() != 3)
    throw std::invalid_argument(std::string(what) +
                                ": expected VALUE or LO:HI:STEP, got '" + s + "'");
  const double lo = num(parts[0]), hi = num(parts[1]), step = num(parts[2]);
  if (!(step > 0.0) || hi < lo)
    throw std::invalid_argument(std::string(what) + ": bad grid '" + s + "'");
  std::vector<double> out;
  for (int i = 0;; ++i) {
    const double v = lo + step * i;
    if (v > hi + 1e-9 * step) break;
    out.push_back(v);
  }
  return out;
}

std::string json_u64_list(const std::vector<std::uint64_t>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s + "]";
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (c == '\n') {
      out += "\\n";
    } else {
      out += c;
    }
  }
  return out;
}

// ------------------------------------------------------------------ race ---

struct RaceArgs {
  std::uint64_t k = 0;
  std::string f = "pi";
  std::string pair;
  std::string A, B;
  std::uint64_t T = 0;
  double sample_ratio = 1e-3;
  int threads = 0;
  std::string checkpoint;
  std::uint64_t save_interval = 0;
  bool resume = false;
  std::string out = "json";
  std::string csv_path;
  std::string counts_csv_path;
};

double class_count(const CountVector& counts, const ResidueSystem& sys,
                   CountFn f, const std::vector<std::uint32_t>& classes) {
  double total = 0.0;
  for (std::uint32_t l : classes) {
    const ClassCounts& c = counts.classes[sys.index_of(l)];
    switch (f) {
      case CountFn::pi: total += (double)c.pi; break;
      case CountFn::theta: total += c.theta.value(); break;
      case CountFn::psi: total += c.psi.value(); break;
      case CountFn::Pi: total += c.Pi.value(); break;
      case CountFn::pi2: total += (double)c.pi2; break;
    }
  }
  return total;
}

int run_race(const RaceArgs& a) {
  const auto fn = count_fn_from_string(a.f);
  if (!fn) throw std::invalid_argument("unknown counting function '" + a.f + "'");
  RaceSpec spec;
  spec.f = *fn;
  if (!a.pair.empty()) {
    const auto p = parse_u64_list(a.pair, "--pair");
    if (p.size() != 2) throw std::invalid_argument("--pair needs exactly two classes");
    spec.A = {(std::uint32_t)(p[0] % a.k)};
    spec.B = {(std::uint32_t)(p[1] % a.k)};
  } else if (!a.A.empty() && !a.B.empty()) {
    for (auto v : parse_u64_list(a.A, "--A")) spec.A.push_back((std::uint32_t)(v % a.k));
    for (auto v : parse_u64_list(a.B, "--B")) spec.B.push_back((std::uint32_t)(v % a.k));
  } else {
    throw std::invalid_argument("race needs --pair A,B (or --A and --B lists)");
  }

  const ResidueSystem sys = build_residue_system(a.k);
  SweepOptions opt;
  opt.sample_ratio = a.sample_ratio;
  opt.sieve.threads = a.threads;
  opt.checkpoint_path = a.checkpoint;
  opt.save_interval = a.save_interval;
  opt.resume = a.resume;
  const SweepResult res = sweep(sys, a.T, {spec}, opt);
  const RaceSeries& s = res.races[0];

  if (!a.csv_path.empty()) {
    std::ofstream f(a.csv_path);
    if (!f) throw std::runtime_error("cannot write " + a.csv_path);
    emit_race_csv(f, s);
  }
  if (!a.counts_csv_path.empty()) {
    std::ofstream f(a.counts_csv_path);
    if (!f) throw std::runtime_error("cannot write " + a.counts_csv_path);
    emit_counts_csv(f, sys, res.counts);
  }

  if (a.out == "csv") {
    emit_race_csv(std::cout, s);
    return 0;
  }

  const LeadDensity ld = lead_density(s);
  const LogDensity lg = log_density(s);
  std::ostream& os = std::cout;
  os << "{\n";
  os << "  \"k\": " << s.k << ",\n";
  os << "  \"f\": \"" << to_string(s.spec.f) << "\",\n";
  os << "  \"A\": [";
  for (std::size_t i = 0; i < s.spec.A.size(); ++i) os << (i ? "," : "") << s.spec.A[i];
  os << "],\n  \"B\": [";
  for (std::size_t i = 0; i < s.spec.B.size(); ++i) os << (i ? "," : "") << s.spec.B[i];
  os << "],\n";
  os << "  \"T\": " << s.T << ",\n";
  os << "  \"count_A\": " << format_double(class_count(res.counts, sys, s.spec.f, s.spec.A)) << ",\n";
  os << "  \"count_B\": " << format_double(class_count(res.counts, sys, s.spec.f, s.spec.B)) << ",\n";
  os << "  \"final_delta\": " << format_double(s.final_delta) << ",\n";
  os << "  \"sign_changes\": " << s.sign_changes << ",\n";
  os << "  \"first_negative\": ";
  if (s.first_negative) os << *s.first_negative; else os << "null";
  os << ",\n  \"first_positive\": ";
  if (s.first_positive) os << *s.first_positive; else os << "null";
  os << ",\n";
  os << "  \"lead_count\": " << s.lead_count << ",\n";
  os << "  \"lead_density\": " << format_double(ld.value()) << ",\n";
  os << "  \"log_density_literal\": " << format_double(lg.literal) << ",\n";
  os << "  \"log_density_standard\": " << format_double(lg.standard) << ",\n";
  os << "  \"samples\": " << s.samples.size() << "\n";
  os << "}\n";
  return 0;
}

// ---------------------------------------------------------------- kernel ---

struct KernelArgs {
  std::string kind;
  std::uint64_t k = 4;
  std::string pair;
  std::string F = "pi";
  std::string r = "";
  std::string x = "";
  double alpha = 0.5;
  bool quarter_x = false;
  double cutoff = 1e8;
};

KernelWeight weight_from_name(const std::string& F) {
  if (F == "pi") return KernelWeight::unit;
  if (F == "theta") return KernelWeight::log_p;
  if (F == "psi") return KernelWeight::lambda;
  if (F == "Pi") return KernelWeight::lambda_over_log;
  throw std::invalid_argument("unknown weight '" + F + "' (pi|theta|psi|Pi)");
}

int run_kernel(const KernelArgs& a) {
  std::vector<double> grid;
  std::vector<KernelResult> results;
  std::vector<double> params;

  if (a.kind == "abel") {
    if (a.pair.empty()) throw std::invalid_argument("abel kernel needs --pair l1,l2");
    const auto p = parse_u64_list(a.pair, "--pair");
    if (p.size() != 2) throw std::invalid_argument("--pair needs exactly two classes");
    const ResidueSystem sys = build_residue_system(a.k);
    grid = parse_grid(a.r.empty() ? "5" : a.r, "--r");
    const KernelWeight w = weight_from_name(a.F);
    for (double r : grid) {
      results.push_back(abel_delta(sys, w, r, p[0], p[1]));
      params.push_back(r);
    }
  } else if (a.kind == "kt") {
    if (a.pair.empty()) throw std::invalid_argument("kt kernel needs --pair l1,l2");
    const auto p = parse_u64_list(a.pair, "--pair");
    if (p.size() != 2) throw std::invalid_argument("--pair needs exactly two classes");
    const ResidueSystem sys = build_residue_system(a.k);
    KTGaussSpec spec;
    spec.k = a.k;
    spec.l1 = p[0];
    spec.l2 = p[1];
    spec.weight = weight_from_name(a.F);
    spec.cutoff = a.cutoff;
    if (!a.r.empty()) {
      const auto rg = parse_grid(a.r, "--r");
      if (rg.size() != 1) throw std::invalid_argument("kt varies --x; --r must be a single value");
      spec.r = rg[0];
    }
    grid = parse_grid(a.x.empty() ? "10000" : a.x, "--x");
    for (double x : grid) {
      spec.x = x;
      results.push_back(kt_gauss_sum(sys, spec));
      params.push_back(x);
    }
  } else if (a.kind == "bentz") {
    BentzSpec spec;
    if (a.k == 4) {
      spec.variant = BentzVariant::mod4;
    } else if (a.k == 3) {
      spec.variant = BentzVariant::chi3;
    } else {
      throw std::invalid_argument("bentz kernel is defined for --k 4 (mod-4 sign) or --k 3 (chi_3 sign)");
    }
    spec.alpha = a.alpha;
    spec.quarter_x = a.quarter_x;
    spec.cutoff = a.cutoff;
    grid = parse_grid(a.x.empty() ? "50" : a.x, "--x");
    for (double x : grid) {
      spec.x = x;
      results.push_back(bentz_sum(spec));
      params.push_back(x);
    }
  } else {
    throw std::invalid_argument("unknown kernel kind '" + a.kind + "' (abel|kt|bentz)");
  }

  std::cout << "parameter,value,tail_bound\n";
  std::string last_warning;
  for (std::size_t i = 0; i < results.size(); ++i) {
    std::cout << format_double(params[i]) << "," << format_double(results[i].value)
              << "," << format_double(results[i].tail_bound) << "\n";
    if (!results[i].warning.empty() && results[i].warning != last_warning) {
      std::cerr << "warning: " << results[i].warning << "\n";
      last_warning = results[i].warning;
    }
  }
  return 0;
}

// --------------------------------------------------------------- density ---

struct DensityArgs {
  std::uint64_t k = 0;
  std::string tuple;
  std::string zeros;
  int threads = 0;
  double target = 1e-6;
  double epsilon = 1e-4;
  double eta_cutoff = 0.0;
  int panels = 24;
  int refinements = 2;
  bool symmetry = false;
};

void print_density_json(std::ostream& os, const DensityResult& d,
                        const UnbiasedCheck& ub, const SymmetryReport* sym) {
  os << "{\n";
  os << "  \"k\": " << d.k << ",\n";
  os << "  \"tuple\": " << json_u64_list(d.tuple) << ",\n";
  os << "  \"delta\": " << format_double(d.delta) << ",\n";
  os << "  \"error_estimate\": " << format_double(d.error_estimate) << ",\n";
  os << "  \"zeros_height\": " << format_double(d.zero_height) << ",\n";
  os << "  \"quadrature\": {\n";
  os << "    \"eta_cutoff\": " << format_double(d.eta_cutoff) << ",\n";
  os << "    \"panels\": " << d.panels << ",\n";
  os << "    \"converged\": " << (d.converged ? "true" : "false") << ",\n";
  os << "    \"imag_residue\": " << format_double(d.imag_residue) << "\n";
  os << "  },\n";
  os << "  \"unbiased\": " << (ub.unbiased ? "true" : "false") << ",\n";
  os << "  \"unbiased_reason\": \"" << json_escape(ub.reason) << "\",\n";
  if (sym) {
    os << "  \"symmetry\": {\n";
    os << "    \"max_deviation\": " << format_double(sym->max_deviation) << ",\n";
    os << "    \"items\": [\n";
    for (std::size_t i = 0; i < sym->items.size(); ++i) {
      const SymmetryItem& it = sym->items[i];
      os << "      {\"item\": " << it.item << ", \"applied\": "
         << (it.applied ? "true" : "false") << ", \"reason\": \""
         << json_escape(it.reason) << "\"";
      if (it.applied) {
        os << ", \"transformed\": " << json_u64_list(it.transformed)
           << ", \"delta\": " << format_double(it.delta)
           << ", \"deviation\": " << format_double(it.deviation);
      }
      os << "}" << (i + 1 < sym->items.size() ? "," : "") << "\n";
    }
    os << "    ]\n";
    os << "  },\n";
  }
  os << "  \"warning\": \"" << json_escape(d.warning) << "\"\n";
  os << "}\n";
}

int run_density(const DensityArgs& a) {
  std::string dir = a.zeros;
  if (dir.empty()) {
    const char* env = std::getenv("PRLB_ZERO_DIR");
    if (env != nullptr) dir = env;
  }
  if (dir.empty())
    throw MissingZeroData("no zero archive: pass --zeros DIR or set PRLB_ZERO_DIR");

  const auto tuple = parse_u64_list(a.tuple, "--tuple");
  const CharacterTable table = build_character_table(a.k);
  const ZeroArchive archive = load_zero_archive(dir);

  QuadratureOptions opt;
  opt.target = a.target;
  opt.epsilon = a.epsilon;
  opt.eta_cutoff = a.eta_cutoff;
  opt.initial_panels = a.panels;
  opt.max_refinements = a.refinements;
  opt.threads = a.threads;

  const UnbiasedCheck ub = unbiased_check(table.system(), tuple);
  if (a.symmetry) {
    const SymmetryReport rep = fm_symmetry_suite(table, tuple, archive, opt);
    print_density_json(std::cout, rep.base, ub, &rep);
    if (!rep.base.converged) return 4;
  } else {
    const DensityResult d = density(table, tuple, archive, opt);
    print_density_json(std::cout, d, ub, nullptr);
    if (!d.converged) return 4;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"prlab: a computational laboratory for prime number races"};
  app.require_subcommand(1);

  RaceArgs ra;
  CLI::App* race = app.add_subcommand("race", "Sweep counting functions and race statistics to T");
  race->add_option("--k", ra.k, "modulus")->required();
  race->add_option("--f", ra.f, "counting function: pi|theta|psi|Pi|pi2");
  race->add_option("--pair", ra.pair, "two residue classes A,B");
  race->add_option("--A", ra.A, "leading class set (comma list)");
  race->add_option("--B", ra.B, "trailing class set (comma list)");
  race->add_option("--T", ra.T, "sweep bound")->required();
  race->add_option("--sample-ratio", ra.sample_ratio, "geometric sample spacing");
  race->add_option("--threads", ra.threads, "sieve threads (0 = auto)");
  race->add_option("--checkpoint", ra.checkpoint, "checkpoint file path");
  race->add_option("--save-interval", ra.save_interval, "checkpoint every N integers");
  race->add_flag("--resume", ra.resume, "resume from --checkpoint");
  race->add_option("--out", ra.out, "stdout format: json|csv");
  race->add_option("--csv", ra.csv_path, "also write sample CSV to this path");
  race->add_option("--counts-csv", ra.counts_csv_path, "also write final counts CSV");

  KernelArgs ka;
  CLI::App* kernel = app.add_subcommand("kernel", "Evaluate weighted kernel sums over a parameter grid");
  kernel->add_option("--kind", ka.kind, "abel|kt|bentz")->required();
  kernel->add_option("--k", ka.k, "modulus");
  kernel->add_option("--pair", ka.pair, "classes l1,l2 (abel, kt)");
  kernel->add_option("--F", ka.F, "weight: pi|theta|psi|Pi");
  kernel->add_option("--r", ka.r, "abel rate / kt width (value or LO:HI:STEP)");
  kernel->add_option("--x", ka.x, "kernel scale (value or LO:HI:STEP)");
  kernel->add_option("--alpha", ka.alpha, "bentz exponent in [0, 1/2]");
  kernel->add_flag("--quarter-x", ka.quarter_x, "bentz exp(-log^2 p / (4x)) variant");
  kernel->add_option("--cutoff", ka.cutoff, "prime budget for gaussian kernels");

  DensityArgs da;
  CLI::App* density = app.add_subcommand("density", "Limiting logarithmic density of a race ordering");
  density->add_option("--k", da.k, "modulus")->required();
  density->add_option("--tuple", da.tuple, "ordered residue classes a1,a2,...")->required();
  density->add_option("--zeros", da.zeros, "zero archive directory (default $PRLB_ZERO_DIR)");
  density->add_option("--threads", da.threads, "quadrature threads (0 = auto)");
  density->add_option("--target", da.target, "refinement target for delta");
  density->add_option("--epsilon", da.epsilon, "PV excision radius");
  density->add_option("--eta-cutoff", da.eta_cutoff, "force integration cutoff (0 = probe)");
  density->add_option("--panels", da.panels, "initial outer panels per axis");
  density->add_option("--refinements", da.refinements, "panel-doubling budget");
  density->add_flag("--symmetry", da.symmetry, "also run the symmetry-relation suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (race->parsed()) return run_race(ra);
    if (kernel->parsed()) return run_kernel(ka);
    if (density->parsed()) return run_density(da);
    std::cerr << "error: no subcommand\n";
    return 2;
  } catch (const MissingZeroData& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ZeroFormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const CheckpointFormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
