#include <map>
#include <memory>
#include <mutex>

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "octaflow/basin.hpp"
#include "octaflow/errors.hpp"
#include "octaflow/resgen.hpp"
#include "octaflow/s8geom.hpp"
#include "octaflow/solver.hpp"

namespace py = pybind11;
using namespace octaflow;

namespace {

struct Loaded {
  resgen::ResolventTables raw;
  std::unique_ptr<solver::NumericTables> numeric;
  std::unique_ptr<solver::ExtendedTables> extended;
};

Loaded& tables_at(const std::string& path) {
  static std::mutex m;
  static std::map<std::string, std::unique_ptr<Loaded>> cache;
  std::lock_guard<std::mutex> lock(m);
  auto& slot = cache[path];
  if (!slot) {
    auto l = std::make_unique<Loaded>();
    l->raw = resgen::load_tables(path);
    l->numeric = std::make_unique<solver::NumericTables>(l->raw);
    slot = std::move(l);
  }
  return *slot;
}

CVec to_cvec(const std::vector<cplx>& v) { return Eigen::Map<const CVec>(v.data(), static_cast<Eigen::Index>(v.size())); }
std::vector<cplx> from_cvec(const CVec& v) { return {v.data(), v.data() + v.size()}; }

py::dict report_dict(const solver::RootReport& r) {
  py::list roots;
  for (const auto& x : r.roots) {
    py::dict d;
    d["root"] = x.root;
    d["residual"] = x.residual;
    d["rel_residual"] = x.rel_residual;
    d["dynamical"] = x.dynamical;
    d["restart"] = x.restart;
    d["iterations"] = x.iterations;
    roots.append(d);
  }
  py::dict d;
  d["status"] = r.status;
  d["precision"] = r.precision;
  d["roots"] = roots;
  d["dynamical"] = r.dynamical_count();
  d["attempts"] = r.attempts;
  d["restarts_used"] = r.restarts_used;
  d["converged_runs"] = r.converged_runs;
  d["stalled_runs"] = r.stalled_runs;
  d["shifts"] = r.shifts;
  d["diagnostics"] = r.diagnostics;
  return d;
}

}  // namespace

PYBIND11_MODULE(_octaflow, m) {
  m.doc() = "octic roots by S8-equivariant iteration";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<TablesError>(m, "TablesError", PyExc_OSError);

  m.def("compiled_tables_path", [] { return resgen::tables_path(); },
        "OCTAFLOW_TABLES, else the build-time path");

  m.def(
      "solve",
      [](const std::vector<cplx>& coeffs, const std::string& tables, const std::string& precision,
         std::uint64_t seed, double tol, int max_iter, int restarts) {
        if (coeffs.size() != 8) throw DimensionError("solve: need a1..a8 (8 coefficients)");
        if (precision != "double" && precision != "extended") throw DomainError("precision: double or extended");
        solver::Octic p;
        std::copy(coeffs.begin(), coeffs.end(), p.a.begin());
        solver::IterationConfig cfg;
        cfg.seed = seed;
        cfg.tol = tol;
        cfg.max_iter = max_iter;
        cfg.restarts = restarts;
        auto& t = tables_at(tables);
        solver::RootReport r;
        {
          py::gil_scoped_release release;
          if (precision == "extended") {
            static std::mutex mu;
            {
              std::lock_guard<std::mutex> lock(mu);
              if (!t.extended) t.extended = std::make_unique<solver::ExtendedTables>(t.raw);
            }
            r = solver::solve(p, *t.extended, cfg);
          } else {
            r = solver::solve(p, *t.numeric, cfg);
          }
        }
        return report_dict(r);
      },
      py::arg("coeffs"), py::arg("tables"), py::arg("precision") = "double", py::arg("seed") = 1,
      py::arg("tol") = 1e-12, py::arg("max_iter") = 200, py::arg("restarts") = 16);

  m.def(
      "verify_tables",
      [](const std::string& tables, int trials, int exact_trials, std::uint64_t seed) {
        resgen::VerifyOptions vo;
        vo.trials = trials;
        vo.exact_trials = exact_trials;
        vo.seed = seed;
        const auto r = resgen::verify_tables(tables_at(tables).raw, vo);
        py::dict d;
        d["ok"] = r.ok();
        d["persymmetric"] = r.persymmetric;
        d["det_matches"] = r.det_matches;
        d["conjugacy"] = r.conjugacy;
        d["phi2_rel"] = r.phi2_rel;
        d["phi3_rel"] = r.phi3_rel;
        d["gamma_rel"] = r.gamma_rel;
        d["tk_rel"] = r.tk_rel;
        d["failures"] = r.failures;
        return d;
      },
      py::arg("tables"), py::arg("trials") = 10, py::arg("exact_trials") = 2, py::arg("seed") = 99);

  m.def(
      "generate_tables",
      [](const std::string& out, std::uint64_t seed, int trials) {
        resgen::GenOptions opt;
        opt.seed = seed;
        opt.trials = trials;
        resgen::ResolventTables t;
        {
          py::gil_scoped_release release;
          t = resgen::generate_tables(opt);
        }
        resgen::save_tables(t, out);
      },
      py::arg("out"), py::arg("seed") = resgen::kDefaultSeed, py::arg("trials") = 10);

  m.def("g4", [](const std::vector<cplx>& u) { return from_cvec(s8::g4_u(to_cvec(u))); }, py::arg("u"),
        "the octic map in u coordinates (7 entries), normalized");
  m.def("k_invariants", [](const std::vector<cplx>& u) { return s8::k_invariants(to_cvec(u)).K; }, py::arg("u"));
  m.def("restricted_map", [](const std::string& tag, cplx z) { return s8::restricted_map(s8::tag_from_name(tag), z); },
        py::arg("tag"), py::arg("z"));

  m.def(
      "render_basin",
      [](const std::string& tag, int width, int height, std::array<double, 4> window, int max_iter,
         const std::vector<std::vector<cplx>>& attractors, int threads) {
        basin::RenderConfig c;
        c.tag = s8::tag_from_name(tag);
        c.width = width;
        c.height = height;
        c.window = {window[0], window[1], window[2], window[3]};
        c.max_iter = max_iter;
        c.threads = threads;
        for (const auto& a : attractors) c.attractors.push_back(to_cvec(a));
        basin::Image img;
        {
          py::gil_scoped_release release;
          img = basin::render(c);
        }
        py::list at;
        for (const auto& a : img.attractors) {
          py::dict d;
          std::vector<std::vector<cplx>> orbit;
          for (const auto& p : a.orbit) orbit.push_back(from_cvec(p));
          d["orbit"] = orbit;
          d["color"] = a.color;
          at.append(d);
        }
        py::dict d;
        d["width"] = img.width;
        d["height"] = img.height;
        d["labels"] = img.label;
        d["attractors"] = at;
        d["unclassified"] = img.unclassified;
        d["ppm"] = py::bytes(basin::to_ppm(img));
        return d;
      },
      py::arg("tag"), py::arg("width") = 400, py::arg("height") = 400,
      py::arg("window") = std::array<double, 4>{-2, 2, -2, 2}, py::arg("max_iter") = 60,
      py::arg("attractors") = std::vector<std::vector<cplx>>{}, py::arg("threads") = 0);
}
