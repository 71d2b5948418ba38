#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "octaflow/basin.hpp"
#include "octaflow/errors.hpp"
#include "octaflow/resgen.hpp"
#include "octaflow/solver.hpp"

using namespace octaflow;
using json = nlohmann::ordered_json;

namespace {

// bad user input; exit 2
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void note(const std::string& s) { std::cerr << "octaflow: " << s << "\n"; }

std::vector<double> parse_numbers(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::string field;
  std::istringstream is(text);
  while (std::getline(is, field, ',')) {
    std::istringstream fs(field);
    std::string tok;
    bool any = false;
    while (fs >> tok) {
      any = true;
      const char* first = tok.data() + (tok[0] == '+' ? 1 : 0);
      double v = 0;
      auto [p, ec] = std::from_chars(first, tok.data() + tok.size(), v);
      if (ec != std::errc() || p != tok.data() + tok.size() || !std::isfinite(v))
        throw InputError(what + ": not a finite number: '" + tok + "'");
      out.push_back(v);
    }
    if (!any) throw InputError(what + ": empty entry");
  }
  return out;
}

// n reals, or n (re, im) pairs
std::vector<cplx> parse_complex(const std::string& text, size_t n, const std::string& what) {
  const auto v = parse_numbers(text, what);
  std::vector<cplx> out(n);
  if (v.size() == n) {
    for (size_t i = 0; i < n; ++i) out[i] = v[i];
  } else if (v.size() == 2 * n) {
    for (size_t i = 0; i < n; ++i) out[i] = {v[2 * i], v[2 * i + 1]};
  } else {
    throw InputError(what + ": expected " + std::to_string(n) + " reals or " + std::to_string(2 * n) +
                     " re,im values, got " + std::to_string(v.size()));
  }
  return out;
}

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

json vjson(const CVec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(cjson(v[i]));
  return a;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

resgen::ResolventTables load(const std::string& cli_path) {
  const std::string p = resgen::tables_path(cli_path);
  note("tables: " + p);
  return resgen::load_tables(p);
}

json report_json(const solver::RootReport& r) {
  json roots = json::array();
  for (const auto& x : r.roots)
    roots.push_back({{"root", cjson(x.root)},
                     {"residual", x.residual},
                     {"rel_residual", x.rel_residual},
                     {"dynamical", x.dynamical},
                     {"restart", x.restart},
                     {"iterations", x.iterations}});
  json shifts = json::array();
  for (auto t : r.shifts) shifts.push_back(cjson(t));
  return {{"status", r.status},
          {"precision", r.precision},
          {"roots", roots},
          {"dynamical", r.dynamical_count()},
          {"attempts", r.attempts},
          {"restarts_used", r.restarts_used},
          {"converged_runs", r.converged_runs},
          {"stalled_runs", r.stalled_runs},
          {"shifts", shifts},
          {"diagnostics", r.diagnostics}};
}

json verify_json(const resgen::VerifyReport& r) {
  return {{"ok", r.ok()},
          {"trials", r.trials},
          {"exact_trials", r.exact_trials},
          {"exact_failures",
           {{"phi2", r.phi2_exact_fail},
            {"phi3", r.phi3_exact_fail},
            {"gamma", r.gamma_exact_fail},
            {"tk", r.tk_exact_fail},
            {"det_tau", r.dettau_exact_fail}}},
          {"persymmetric", r.persymmetric},
          {"det_matches", r.det_matches},
          {"rel_residual", {{"phi2", r.phi2_rel}, {"phi3", r.phi3_rel}, {"gamma", r.gamma_rel}, {"tk", r.tk_rel}}},
          {"conjugacy", r.conjugacy},
          {"conjugacy_double", r.conjugacy_double},
          {"skipped", r.skipped},
          {"failures", r.failures}};
}

constexpr double kResidualThreshold = 1e-8;

bool all_good(const solver::RootReport& r) {
  if (r.roots.size() != 8) return false;
  for (const auto& x : r.roots)
    if (!(x.rel_residual < kResidualThreshold)) return false;
  return true;
}

solver::RootReport run_solve(const solver::Octic& p, const resgen::ResolventTables& t, const std::string& precision,
                             const solver::IterationConfig& cfg) {
  if (precision == "extended") return solver::solve(p, solver::ExtendedTables(t), cfg);
  return solver::solve(p, solver::NumericTables(t), cfg);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  std::string s = ss.str();
  std::replace(s.begin(), s.end(), ';', ',');
  while (!s.empty() && (std::isspace(static_cast<unsigned char>(s.back())) || s.back() == ',')) s.pop_back();
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"octaflow: octic roots by S8-equivariant iteration"};
  app.require_subcommand(1);

  solver::IterationConfig it;
  std::string tables, precision = "double", coeffs, coeff_file, out;
  std::uint64_t seed = resgen::kDefaultSeed;
  int trials = 10;

  auto* solve = app.add_subcommand("solve", "find the eight roots of a monic octic");
  solve->add_option("--coeffs", coeffs, "a1..a8 of x^8 + a1 x^7 + ... + a8: 8 reals or 16 re,im values");
  solve->add_option("--file", coeff_file, "read the coefficients from a file");
  solve->add_option("--tables", tables, "tables file (default: OCTAFLOW_TABLES, then the built-in path)");
  solve->add_option("--precision", precision, "double or extended")->check(CLI::IsMember({"double", "extended"}));
  solve->add_option("--seed", it.seed, "start-point seed");
  solve->add_option("--tol", it.tol, "convergence tolerance (projective step)")->check(CLI::PositiveNumber);
  solve->add_option("--max-iter", it.max_iter, "iterations per run")->check(CLI::PositiveNumber);
  solve->add_option("--restarts", it.restarts, "runs per reduction")->check(CLI::PositiveNumber);

  auto* codegen = app.add_subcommand("codegen", "regenerate the resolvent tables");
  codegen->add_option("--out", out, "output path")->required();
  codegen->add_option("--seed", seed, "sampling seed");
  codegen->add_option("--trials", trials, "floating verification trials")->check(CLI::PositiveNumber);

  basin::RenderConfig bc;
  std::string tag = "line28", window;
  std::vector<std::string> attractors;
  auto* bas = app.add_subcommand("basin", "render a basin portrait of a restricted map (PPM)");
  bas->add_option("--tag", tag, "line28, L1_168, L1_210, L1_280, M1_280, L2_105, L2_56, L2_280, L2_420, L2_840");
  bas->add_option("--out", out, "PPM output path")->required();
  bas->add_option("--width", bc.width, "pixels")->check(CLI::PositiveNumber);
  bas->add_option("--height", bc.height, "pixels")->check(CLI::PositiveNumber);
  bas->add_option("--window", window, "re_min,re_max,im_min,im_max (planes: x then y)");
  bas->add_option("--max-iter", bc.max_iter, "iteration cap per pixel")->check(CLI::NonNegativeNumber);
  bas->add_option("--attractor", attractors, "homogeneous point, reals or re,im pairs; repeatable");
  bas->add_option("--threads", bc.threads, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  bas->add_flag("--computed", bc.computed, "restrict g4 through the chart instead of the closed form");

  std::string suite = "tables";
  int instances = 100;
  auto* ver = app.add_subcommand("verify", "run a verification suite");
  ver->add_option("--suite", suite, "tables or solver")->check(CLI::IsMember({"tables", "solver"}));
  ver->add_option("--tables", tables, "tables file");
  ver->add_option("--trials", trials, "tables: floating trials")->check(CLI::PositiveNumber);
  ver->add_option("--instances", instances, "solver: random octics")->check(CLI::PositiveNumber);
  ver->add_option("--precision", precision, "solver: double or extended")
      ->check(CLI::IsMember({"double", "extended"}));
  ver->add_option("--seed", seed, "sampling seed");
  ver->add_option("--tol", it.tol, "solver: convergence tolerance")->check(CLI::PositiveNumber);
  ver->add_option("--max-iter", it.max_iter, "solver: iterations per run")->check(CLI::PositiveNumber);
  ver->add_option("--restarts", it.restarts, "solver: runs per reduction")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "octaflow: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*solve) {
      if (coeffs.empty() == coeff_file.empty()) throw InputError("give exactly one of --coeffs and --file");
      const auto a = parse_complex(coeff_file.empty() ? coeffs : read_file(coeff_file), 8, "coefficients");
      solver::Octic p;
      std::copy(a.begin(), a.end(), p.a.begin());
      const auto t = load(tables);
      const auto rep = run_solve(p, t, precision, it);
      note("status " + rep.status + ", " + std::to_string(rep.dynamical_count()) + " dynamical");
      emit(report_json(rep));
      return all_good(rep) ? 0 : 1;
    }

    if (*codegen) {
      resgen::GenOptions opt;
      opt.seed = seed;
      opt.trials = trials;
      opt.log = note;
      const auto t = resgen::generate_tables(opt);
      const std::string tmp = out + ".tmp";
      resgen::save_tables(t, tmp);
      std::filesystem::rename(tmp, out);
      note("wrote " + out);
      emit({{"out", out}, {"seed", seed}, {"trials", trials}, {"samples", t.meta.sample_count}, {"verified", true}});
      return 0;
    }

    if (*bas) {
      try {
        bc.tag = s8::tag_from_name(tag);
      } catch (const DomainError& e) {
        throw InputError(e.what());
      }
      if (!window.empty()) {
        const auto w = parse_numbers(window, "window");
        if (w.size() != 4) throw InputError("window: expected 4 numbers");
        bc.window = {w[0], w[1], w[2], w[3]};
        if (!(w[1] > w[0]) || !(w[3] > w[2])) throw InputError("window is degenerate");
      }
      const size_t n = s8::tag_is_line(bc.tag) ? 2 : 3;
      for (const auto& s : attractors) {
        const auto v = parse_complex(s, n, "attractor");
        bc.attractors.push_back(Eigen::Map<const CVec>(v.data(), static_cast<Eigen::Index>(n)));
      }
      const auto img = basin::render(bc);
      basin::write_ppm(img, out);
      json at = json::array();
      for (const auto& a : img.attractors)
        at.push_back({{"period", a.orbit.size()}, {"point", vjson(a.orbit[0])}, {"color", a.color}});
      note("wrote " + out);
      emit({{"tag", s8::tag_name(bc.tag)},
            {"out", out},
            {"width", img.width},
            {"height", img.height},
            {"window", {bc.window.re_min, bc.window.re_max, bc.window.im_min, bc.window.im_max}},
            {"max_iter", bc.max_iter},
            {"attractors", at},
            {"unclassified", img.unclassified}});
      return 0;
    }

    if (*ver) {
      const auto t = load(tables);
      if (suite == "tables") {
        resgen::VerifyOptions vo;
        vo.trials = trials;
        vo.seed = seed;
        const auto r = resgen::verify_tables(t, vo);
        emit(verify_json(r));
        return r.ok() ? 0 : 1;
      }
      std::mt19937_64 g(seed);
      std::uniform_real_distribution<double> U(-1, 1);
      int all_dyn = 0, bad_residual = 0;
      json failures = json::array();
      solver::NumericTables nt(t);
      std::optional<solver::ExtendedTables> xt;
      if (precision == "extended") xt.emplace(t);
      for (int k = 0; k < instances; ++k) {
        solver::Octic p;
        for (auto& c : p.a) {
          do c = {U(g), U(g)};
          while (std::abs(c) > 1);
        }
        const auto r = xt ? solver::solve(p, *xt, it) : solver::solve(p, nt, it);
        if (r.all_dynamical()) ++all_dyn;
        if (!all_good(r)) ++bad_residual;
        if (!r.all_dynamical() || !all_good(r)) {
          json c = json::array();
          for (auto z : p.a) c.push_back(cjson(z));
          failures.push_back({{"instance", k}, {"coeffs", c}, {"report", report_json(r)}});
          note("instance " + std::to_string(k) + ": " + r.status + ", " + std::to_string(r.dynamical_count()) +
              " dynamical");
        }
      }
      emit({{"instances", instances},
            {"precision", precision},
            {"all_dynamical", all_dyn},
            {"residual_failures", bad_residual},
            {"failures", failures}});
      return bad_residual == 0 ? 0 : 1;
    }
  } catch (const InputError& e) {
    note(e.what());
    return 2;
  } catch (const TablesError& e) {
    note(e.what());
    return 3;
  } catch (const std::exception& e) {
    note(e.what());
    return 1;
  }
  return 0;
}
