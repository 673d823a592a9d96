#pragma once

#include <atomic>
#include <chrono>
#include <functional>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "monodromic/blocks.hpp"
#include "monodromic/core.hpp"
#include "monodromic/fourier.hpp"
#include "monodromic/generate.hpp"
#include "monodromic/gluing.hpp"
#include "monodromic/io.hpp"
#include "monodromic/mhm.hpp"

// Theorem-verification suites over seeded random data.  Each suite evaluates
// one family of identities on every generated gluing datum; cases run in
// parallel (each case owns its data) and reports merge by case index, so the
// output is deterministic.  Reports are machine-readable JSON with per-case
// results, wall time, and the counterexample document for every failure.

namespace monodromic {

struct CaseOutcome {
  bool pass = true;
  std::string detail;
};

struct SuiteResult {
  std::string name;
  int cases = 0;
  int failures = 0;
  bool passed = true;
  long long wall_ms = 0;
  Json report;
};

namespace detail {

inline void add_fail(CaseOutcome& out, const std::string& msg) {
  out.pass = false;
  if (!out.detail.empty()) out.detail += "; ";
  out.detail += msg;
}

inline void add_diag(CaseOutcome& out, const Diagnostics& diag, const std::string& label) {
  if (!diag.ok()) add_fail(out, label + ": " + diag.joined());
}

// --- one evaluator per suite -------------------------------------------------

inline CaseOutcome eval_roundtrip(const GluingDatum& g) {
  CaseOutcome out;
  RoundtripReport rep = roundtrip_check(g);
  if (!rep.gluing_restored || !rep.module_restored) add_fail(out, rep.issues.joined());
  return out;
}

inline CaseOutcome eval_vfilt(const GluingDatum& g) {
  CaseOutcome out;
  MonodromicMHM m = functor_g(g);
  Window win = expand_window(m.core, Rational(2));
  if (v_filtration(win) != v_filtration_oracle(win))
    add_fail(out, "canonical filtration oracle disagrees with the direct-sum formula");
  PropagatedWindow pw = propagate_filtration(m, Rational(3));
  add_diag(out, check_specializability(pw), "specializability");
  add_diag(out, check_park_identities(pw), "shift identities");
  return out;
}

inline CaseOutcome eval_arashi(const GluingDatum& g) {
  CaseOutcome out;
  auto check = [&out](const std::string& label, const CycleComponent& comp) {
    if (comp.mhs.dim == 0) return;
    add_diag(out, check_relative_monodromy(comp.nilp, comp.mhs.filt.W, comp.mhs.filt.W),
             label);
  };
  for (const auto& [alpha, comp] : g.psi) check("level " + rational_to_string(alpha), comp);
  check("vanishing part", g.phi);
  return out;
}

inline CaseOutcome eval_blocks(const GluingDatum& g) {
  CaseOutcome out;
  if (g.psi.empty()) return out;
  int m = 1;
  int r = 1;
  for (const auto& [alpha, comp] : g.psi) {
    m = static_cast<int>(std::lcm(static_cast<long>(m), to_long(den(alpha))));
    if (auto idx = nilpotency_index(comp.nilp)) r = std::max(r, *idx);
  }
  require_denominators(g.psi, m);
  // Behaviour below the nilpotency bound is unconstrained; the report's
  // issue list already flags every violation at or past the bound.
  StabilizationReport stab = stabilization_check(g.psi, r);
  add_diag(out, stab.issues, "stabilization");
  if (!stab.variants_agree) add_fail(out, "construction variants disagree");
  if (stab.l0 > r) add_fail(out, "probed rank is below the nilpotency bound");
  if (stab.stable_from > r)
    add_fail(out, "kernels and cokernels still moving at the probed rank");
  DirectComparison cmp = compare_with_direct(g.psi, r, m);
  add_diag(out, cmp.issues, "direct comparison");
  if (!cmp.isomorphic && cmp.issues.ok())
    add_fail(out, "construction does not match the direct module");
  if (!(psi_of(direct_module(g.psi)) == g.psi))
    add_fail(out, "boundary data not recovered from the direct module");
  return out;
}

inline CaseOutcome eval_fourier(const GluingDatum& g) {
  CaseOutcome out;
  MonodromicMHM m = functor_g(g);
  CoreData fc = fourier_core(m.core);
  if (fc.components().size() != m.core.components().size()) {
    add_fail(out, "transform changed the number of levels");
    return out;
  }
  for (const auto& [beta, comp] : m.core.components())
    if (fc.dim(Rational(-1) - beta) != comp.dim) {
      add_fail(out, "dimension pairing fails at level " + rational_to_string(beta));
      return out;
    }
  MonodromicMHM ff = fourier_mmhm(m);
  if (!(ff.core == fc)) add_fail(out, "gluing-level and component-level transforms differ");
  for (const auto& [alpha, pair] : m.filt) {
    auto it = ff.filt.find(Rational(-1) - alpha);
    if (it == ff.filt.end()) {
      add_fail(out, "no filtration at the reflected level of " + rational_to_string(alpha));
      continue;
    }
    Filtration want = alpha == Rational(-1) ? pair.F.shifted(-1) : pair.F;
    if (!(it->second.F == want))
      add_fail(out, "Hodge shift identity fails at level " + rational_to_string(alpha));
  }
  add_diag(out, fourier_core_agreement(m.core, Rational(2)), "window agreement");
  DoubleFourierReport rep = double_fourier_check(m);
  if (!rep.core_matches) {
    std::string notes;
    for (const std::string& n : rep.notes) notes += (notes.empty() ? "" : "; ") + n;
    add_fail(out, "double transform: " + notes);
  }
  return out;
}

inline CaseOutcome eval_dual(const GluingDatum& g) {
  CaseOutcome out;
  MonodromicMHM m = functor_g(g);
  add_diag(out, dual_agreement(m.core, Rational(2)), "duality");
  return out;
}

inline std::function<CaseOutcome(const GluingDatum&)> evaluator_for(const std::string& name) {
  if (name == "roundtrip") return eval_roundtrip;
  if (name == "vfilt") return eval_vfilt;
  if (name == "arashi") return eval_arashi;
  if (name == "blocks") return eval_blocks;
  if (name == "fourier") return eval_fourier;
  if (name == "dual") return eval_dual;
  throw SchemaError("suite: unknown suite '" + name + "'");
}

inline CaseOutcome guarded(const std::function<CaseOutcome(const GluingDatum&)>& eval,
                           const GluingDatum& g) {
  try {
    return eval(g);
  } catch (const std::exception& e) {
    CaseOutcome out;
    add_fail(out, std::string("exception: ") + e.what());
    return out;
  }
}

inline std::vector<CaseOutcome> run_cases(
    const std::vector<GluingDatum>& data,
    const std::function<CaseOutcome(const GluingDatum&)>& eval) {
  std::vector<CaseOutcome> out(data.size());
  unsigned workers = std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  if (data.size() < workers) workers = static_cast<unsigned>(data.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < data.size(); ++i) out[i] = guarded(eval, data[i]);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < data.size(); i = next.fetch_add(1))
        out[i] = guarded(eval, data[i]);
    });
  for (std::thread& th : pool) th.join();
  return out;
}

inline Json config_json(const GeneratorConfig& cfg) {
  Json dens = Json::array();
  for (int q : cfg.eigen_denominators) dens.push_back(q);
  return Json{{"case_count", cfg.case_count},
              {"eigen_denominators", std::move(dens)},
              {"max_dim", cfg.max_dim},
              {"max_weight_span", cfg.max_weight_span},
              {"seed", cfg.seed}};
}

inline SuiteResult run_single_suite(const std::string& name, const GeneratorConfig& cfg) {
  auto eval = evaluator_for(name);
  auto start = std::chrono::steady_clock::now();
  std::vector<GluingDatum> data = generate_gluings(cfg);
  std::vector<CaseOutcome> outcomes = run_cases(data, eval);

  SuiteResult res;
  res.name = name;
  res.cases = static_cast<int>(data.size());
  Json results = Json::array();
  Json failures = Json::array();
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    Json row{{"index", i}, {"pass", outcomes[i].pass}};
    if (!outcomes[i].pass) {
      row["detail"] = outcomes[i].detail;
      failures.push_back(Json{{"counterexample", Json::parse(emit_document(data[i]))},
                              {"detail", outcomes[i].detail},
                              {"index", i}});
      ++res.failures;
    }
    results.push_back(std::move(row));
  }
  res.passed = res.failures == 0;
  auto end = std::chrono::steady_clock::now();
  res.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(end - start).count();
  res.report = Json{{"cases", res.cases},   {"config", config_json(cfg)},
                    {"failures", failures}, {"name", name},
                    {"pass", res.passed},   {"results", results},
                    {"wall_ms", res.wall_ms}};
  return res;
}

}  // namespace detail

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"roundtrip", "vfilt", "arashi",
                                              "blocks",    "fourier", "dual"};
  return names;
}

inline SuiteResult run_suite(const std::string& name, const GeneratorConfig& cfg) {
  require_valid_generator_config(cfg);
  if (name != "all") return detail::run_single_suite(name, cfg);
  SuiteResult res;
  res.name = "all";
  auto start = std::chrono::steady_clock::now();
  Json suites = Json::array();
  for (const std::string& sub : suite_names()) {
    SuiteResult r = detail::run_single_suite(sub, cfg);
    res.cases += r.cases;
    res.failures += r.failures;
    suites.push_back(std::move(r.report));
  }
  res.passed = res.failures == 0;
  auto end = std::chrono::steady_clock::now();
  res.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(end - start).count();
  res.report = Json{{"cases", res.cases}, {"config", detail::config_json(cfg)},
                    {"name", "all"},      {"pass", res.passed},
                    {"suites", suites},   {"wall_ms", res.wall_ms}};
  return res;
}

}  // namespace monodromic
