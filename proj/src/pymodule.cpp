// Python bindings: a thin functional surface over the core library.
// Structs come back as dicts; heavyweight objects (character tables, zero
// archives) are opaque handles so repeated calls don't rebuild them.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <stdexcept>

#include "prlab/density.hpp"
#include "prlab/kernels.hpp"
#include "prlab/quadrature.hpp"
#include "prlab/race.hpp"
#include "prlab/residue.hpp"
#include "prlab/sieve.hpp"
#include "prlab/zeros.hpp"

namespace py = pybind11;
using namespace prlab;

namespace {

py::object opt_u64(const std::optional<std::uint64_t>& v) {
  if (v) return py::cast(*v);
  return py::none();
}

py::dict kernel_dict(const KernelResult& r) {
  py::dict d;
  d["value"] = r.value;
  d["raw_sum"] = r.raw_sum;
  d["compensation"] = r.compensation;
  d["tail_bound"] = r.tail_bound;
  d["cutoff"] = r.cutoff;
  d["warning"] = r.warning;
  return d;
}

py::dict density_dict(const DensityResult& r) {
  py::dict d;
  d["k"] = r.k;
  d["tuple"] = r.tuple;
  d["delta"] = r.delta;
  d["error_estimate"] = r.error_estimate;
  d["zeros_height"] = r.zero_height;
  d["eta_cutoff"] = r.eta_cutoff;
  d["panels"] = r.panels;
  d["converged"] = r.converged;
  d["imag_residue"] = r.imag_residue;
  d["warning"] = r.warning;
  return d;
}

QuadratureOptions quad_opts(double target, double epsilon, double eta_cutoff,
                            int panels, int refinements, int threads) {
  QuadratureOptions opt;
  opt.target = target;
  opt.epsilon = epsilon;
  opt.eta_cutoff = eta_cutoff;
  opt.initial_panels = panels;
  opt.max_refinements = refinements;
  opt.threads = threads;
  return opt;
}

}  // namespace

PYBIND11_MODULE(_prlab, m) {
  m.doc() = "Computational laboratory for comparative prime counting";

  // ----- numerics ----------------------------------------------------------
  m.def("bessel_j0", &bessel_j0, py::arg("z"), "Bessel J0 on the real line");
  m.def("li", &li, py::arg("x"), "Logarithmic integral (principal value)");

  // ----- residue algebra ---------------------------------------------------
  m.def(
      "euler_phi",
      [](std::uint64_t k) { return build_residue_system(k).euler_phi; },
      py::arg("k"));
  m.def(
      "reduced_residues",
      [](std::uint64_t k) { return build_residue_system(k).reduced; },
      py::arg("k"));
  m.def(
      "bias_constant",
      [](std::uint64_t k, std::uint64_t a) {
        const ResidueSystem sys = build_residue_system(k);
        return bias_constant(sys, a).value;
      },
      py::arg("k"), py::arg("a"), "c(k, a) = N_k(a) - 1");
  m.def(
      "epsilon_sign",
      [](std::uint64_t k, std::uint64_t n, std::uint64_t l1, std::uint64_t l2) {
        const ResidueSystem sys = build_residue_system(k);
        return epsilon(sys, n, l1, l2);
      },
      py::arg("k"), py::arg("n"), py::arg("l1"), py::arg("l2"));

  py::class_<CharacterTable>(m, "CharacterTable")
      .def(py::init([](std::uint64_t k) { return build_character_table(k); }),
           py::arg("k"))
      .def("value", &CharacterTable::value, py::arg("chi"), py::arg("n"))
      .def("conductor", &CharacterTable::conductor, py::arg("chi"))
      .def("order", &CharacterTable::order, py::arg("chi"))
      .def("is_real", &CharacterTable::is_real, py::arg("chi"))
      .def("is_principal", &CharacterTable::is_principal, py::arg("chi"))
      .def("parity", &CharacterTable::parity, py::arg("chi"))
      .def_property_readonly("size", &CharacterTable::size)
      .def_property_readonly("modulus", &CharacterTable::modulus);

  // ----- sweeps and races --------------------------------------------------
  m.def(
      "race",
      [](std::uint64_t k, std::uint64_t T, const std::string& f,
         std::vector<std::uint32_t> A, std::vector<std::uint32_t> B,
         double sample_ratio, int threads) {
        const auto fn = count_fn_from_string(f);
        if (!fn)
          throw std::invalid_argument("unknown counting function '" + f + "'");
        RaceSpec spec;
        spec.f = *fn;
        spec.A = std::move(A);
        spec.B = std::move(B);
        const ResidueSystem sys = build_residue_system(k);
        SweepOptions opt;
        opt.sample_ratio = sample_ratio;
        opt.sieve.threads = threads;
        const SweepResult res = sweep(sys, T, {spec}, opt);
        const RaceSeries& s = res.races[0];
        py::dict d;
        d["k"] = k;
        d["T"] = T;
        d["f"] = f;
        d["final_delta"] = s.final_delta;
        d["sign_changes"] = s.sign_changes;
        d["first_negative"] = opt_u64(s.first_negative);
        d["first_positive"] = opt_u64(s.first_positive);
        d["lead_count"] = s.lead_count;
        d["lead_density"] = lead_density(s).value();
        const LogDensity lg = log_density(s);
        d["log_density_literal"] = lg.literal;
        d["log_density_standard"] = lg.standard;
        d["samples"] = s.samples;
        return d;
      },
      py::arg("k"), py::arg("T"), py::arg("f") = "pi",
      py::arg("A") = std::vector<std::uint32_t>{},
      py::arg("B") = std::vector<std::uint32_t>{},
      py::arg("sample_ratio") = 1e-3, py::arg("threads") = 0,
      "Sweep [2, T] once and return the race statistics for (A, B)");

  m.def(
      "count_functions",
      [](std::uint64_t k, std::uint64_t T, bool with_pi2) {
        const ResidueSystem sys = build_residue_system(k);
        SweepOptions opt;
        opt.with_pi2 = with_pi2;
        const SweepResult res = sweep(sys, T, {}, opt);
        py::dict d;
        for (std::size_t i = 0; i < sys.reduced.size(); ++i) {
          const ClassCounts& c = res.counts.classes[i];
          py::dict e;
          e["pi"] = c.pi;
          e["theta"] = c.theta.value();
          e["psi"] = c.psi.value();
          e["Pi"] = c.Pi.value();
          if (with_pi2) e["pi2"] = c.pi2;
          d[py::cast(sys.reduced[i])] = e;
        }
        py::dict out;
        out["classes"] = d;
        out["pi_total"] = res.counts.pi_total;
        out["pi2_total"] = res.counts.pi2_total;
        return out;
      },
      py::arg("k"), py::arg("T"), py::arg("with_pi2") = false,
      "Counting functions per residue class at x = T");

  m.def(
      "find_ordering",
      [](std::uint64_t k, const std::vector<std::uint32_t>& perm,
         std::uint64_t x_start, std::uint64_t x_end) {
        const ResidueSystem sys = build_residue_system(k);
        return opt_u64(find_ordering(sys, perm, x_start, x_end));
      },
      py::arg("k"), py::arg("perm"), py::arg("x_start"), py::arg("x_end"),
      "Smallest m with pi(m;k,a1) > ... > pi(m;k,ar), or None");

  // ----- kernels -----------------------------------------------------------
  m.def(
      "abel_delta",
      [](std::uint64_t k, const std::string& F, double r, std::uint64_t l1,
         std::uint64_t l2) {
        KernelWeight w;
        if (F == "pi") w = KernelWeight::unit;
        else if (F == "theta") w = KernelWeight::log_p;
        else if (F == "psi") w = KernelWeight::lambda;
        else if (F == "Pi") w = KernelWeight::lambda_over_log;
        else throw std::invalid_argument("weight must be pi|theta|psi|Pi");
        const ResidueSystem sys = build_residue_system(k);
        return kernel_dict(abel_delta(sys, w, r, l1, l2));
      },
      py::arg("k"), py::arg("F"), py::arg("r"), py::arg("l1"), py::arg("l2"));

  m.def(
      "bentz_sum",
      [](double x, double alpha, std::uint64_t k, bool quarter_x,
         double cutoff) {
        BentzSpec spec;
        if (k == 4) spec.variant = BentzVariant::mod4;
        else if (k == 3) spec.variant = BentzVariant::chi3;
        else throw std::invalid_argument("bentz sum is defined for k = 3 or 4");
        spec.x = x;
        spec.alpha = alpha;
        spec.quarter_x = quarter_x;
        spec.cutoff = cutoff;
        return kernel_dict(bentz_sum(spec));
      },
      py::arg("x"), py::arg("alpha") = 0.5, py::arg("k") = 4,
      py::arg("quarter_x") = false, py::arg("cutoff") = 1e8);

  m.def(
      "kt_gauss_sum",
      [](std::uint64_t k, std::uint64_t l1, std::uint64_t l2, double x,
         double r, double cutoff) {
        const ResidueSystem sys = build_residue_system(k);
        KTGaussSpec spec;
        spec.k = k;
        spec.l1 = l1;
        spec.l2 = l2;
        spec.x = x;
        spec.r = r;
        spec.cutoff = cutoff;
        return kernel_dict(kt_gauss_sum(sys, spec));
      },
      py::arg("k"), py::arg("l1"), py::arg("l2"), py::arg("x"),
      py::arg("r") = 1.0, py::arg("cutoff") = 1e8);

  // ----- zeros and densities -----------------------------------------------
  py::class_<ZeroArchive>(m, "ZeroArchive")
      .def(py::init([](const std::string& dir) { return load_zero_archive(dir); }),
           py::arg("directory"))
      .def(
          "count",
          [](const ZeroArchive& a, std::uint64_t k, std::uint32_t chi) {
            const ZeroSet* z = a.find(k, chi);
            return z ? z->gammas.size() : 0;
          },
          py::arg("k"), py::arg("chi"))
      .def(
          "gammas",
          [](const ZeroArchive& a, std::uint64_t k, std::uint32_t chi) {
            const ZeroSet* z = a.find(k, chi);
            if (!z) throw std::out_of_range("no zeros for that character");
            return z->gammas;
          },
          py::arg("k"), py::arg("chi"));

  m.def(
      "density",
      [](std::uint64_t k, const std::vector<std::uint64_t>& tuple,
         const ZeroArchive& zeros, double target, double epsilon,
         double eta_cutoff, int panels, int refinements, int threads) {
        const CharacterTable table = build_character_table(k);
        return density_dict(density(
            table, tuple, zeros,
            quad_opts(target, epsilon, eta_cutoff, panels, refinements,
                      threads)));
      },
      py::arg("k"), py::arg("tuple"), py::arg("zeros"),
      py::arg("target") = 1e-6, py::arg("epsilon") = 1e-4,
      py::arg("eta_cutoff") = 0.0, py::arg("panels") = 24,
      py::arg("refinements") = 2, py::arg("threads") = 0,
      "Limiting logarithmic density of the ordering given by `tuple`");

  m.def(
      "unbiased_check",
      [](std::uint64_t k, const std::vector<std::uint64_t>& tuple) {
        const ResidueSystem sys = build_residue_system(k);
        const UnbiasedCheck u = unbiased_check(sys, tuple);
        return py::make_tuple(u.unbiased, u.reason);
      },
      py::arg("k"), py::arg("tuple"));

  py::register_exception<MissingZeroData>(m, "MissingZeroDataError");
  py::register_exception<ZeroFormatError>(m, "ZeroFormatError");
}
