#include "gaprel/cli.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "gaprel/error.hpp"
#include "gaprel/measures.hpp"
#include "gaprel/model.hpp"
#include "gaprel/ruelle.hpp"
#include "report_json.hpp"

namespace gaprel {

namespace {

using detail::Json;
using detail::real;

struct Outcome {
  Json report;
  int code = kExitPass;
};

[[noreturn]] void usage(const std::string& what) { throw Error(ErrorCode::Unsupported, what); }

class Session {
 public:
  Session(const CommandOptions& opt) : opt_(opt) {
    if (opt.model_path.empty()) usage("--model is required");
    file_ = load_model(opt.model_path);
    inst_ = instantiate(file_, opt.depth.value_or(file_.depth));
  }

  const ModelFile& file() const { return file_; }
  const ModelInstance& inst() const { return inst_; }
  const std::vector<std::string>& ids() const { return file_.ids; }
  std::size_t depth() const { return inst_.gap.depth(); }
  double tol() const { return opt_.tol.value_or(1e-9); }

  const CocycleTable& cocycle() {
    if (!cocycle_) cocycle_ = build_cocycle(inst_.gap, inst_.potential);
    return *cocycle_;
  }

  const Calculus& calc() {
    if (!calc_) calc_.emplace(inst_.gap, cocycle(), overrides_up_to(file_.overrides, depth()));
    return *calc_;
  }

  const Measure& measure(const std::optional<std::string>& name, const char* flag) const {
    if (!name) usage(std::string(flag) + " is required");
    auto it = file_.measures.find(*name);
    if (it == file_.measures.end()) usage("model has no measure named '" + *name + "'");
    return it->second;
  }

  std::optional<Measure> optional_measure(const std::optional<std::string>& name, const char* flag) const {
    if (!name) return std::nullopt;
    return measure(name, flag);
  }

  std::size_t level(std::optional<std::size_t> fallback = std::nullopt) const {
    if (!opt_.level) {
      if (fallback) return *fallback;
      usage("--level is required");
    }
    return parse_level(*opt_.level);
  }

  static std::size_t parse_level(const std::string& s) {
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) usage("--level must be a nonnegative integer, got '" + s + "'");
    return v;
  }

  Json header(const std::string& command) const {
    Json j;
    j["command"] = command;
    j["model"] = file_.name;
    j["depth"] = depth();
    j["requested_depth"] = opt_.depth.value_or(file_.depth);
    return j;
  }

  const SpaceModel& space(const std::string& command) const {
    if (!file_.space || file_.explicit_gap) usage(command + " needs a sigma-derived model");
    return *file_.space;
  }

  const CommandOptions& opt() const { return opt_; }

 private:
  const CommandOptions& opt_;
  ModelFile file_;
  ModelInstance inst_;
  std::optional<CocycleTable> cocycle_;
  std::optional<Calculus> calc_;
};

Outcome cmd_validate(Session& s) {
  Json j = s.header("validate");
  Json reports = Json::array();
  bool ok = true;
  auto add = [&](const ValidationReport& r) {
    ok = ok && r.ok();
    reports.push_back(detail::validation_json(r, s.ids()));
  };
  add(validate_gap(s.inst().gap));
  add(validate_potential(s.inst().gap, s.inst().potential));

  ValidationReport glue;
  glue.subject = "cocycle";
  Check gc{"gluing", true, {}};
  try {
    (void)s.cocycle();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::CocycleMismatch && e.code() != ErrorCode::MissingPotentialValue) throw;
    gc.passed = false;
    gc.witnesses.push_back({"c_n = c_m on R_n ∩ R_m", {}, {}, {}, {}, {}, e.what()});
  }
  glue.checks.push_back(std::move(gc));
  add(glue);

  if (s.file().space && !s.file().explicit_gap) {
    add(check_rd_witness_independence(*s.file().space, s.file().h, s.depth()));
  }
  j["reports"] = std::move(reports);
  j["verdict"] = ok;
  return {std::move(j), ok ? kExitPass : kExitFail};
}

Outcome cmd_classes(Session& s) {
  Json j = s.header("classes");
  const auto& g = s.inst().gap;
  Json levels = Json::array();
  const std::size_t lo = s.opt().level ? s.level() : 0;
  const std::size_t hi = s.opt().level ? s.level() : g.depth();
  if (hi > g.depth()) usage("--level exceeds the model depth");
  for (std::size_t n = lo; n <= hi; ++n) {
    Json lv;
    lv["level"] = n;
    lv["domain"] = detail::point_set(g.domain(n), s.ids());
    Json classes = Json::array();
    for (const auto& cls : g.relation(n).classes()) classes.push_back(detail::point_list(cls, s.ids()));
    lv["classes"] = std::move(classes);
    levels.push_back(std::move(lv));
  }
  j["levels"] = std::move(levels);
  Json uc = Json::array();
  const Partition up = union_partition(g);
  for (const auto& cls : up.classes()) uc.push_back(detail::point_list(cls, s.ids()));
  j["union_classes"] = std::move(uc);
  return {std::move(j), kExitPass};
}

Outcome cmd_zeta(Session& s) {
  Json j = s.header("zeta");
  const auto& g = s.inst().gap;
  const ZetaOverrides ov = overrides_up_to(s.file().overrides, g.depth());
  j["budget"] = s.opt().budget ? Json(*s.opt().budget) : Json(nullptr);
  const std::size_t lo = s.opt().level ? s.level() : 0;
  const std::size_t hi = s.opt().level ? s.level() : g.depth();
  if (hi > g.depth()) usage("--level exceeds the model depth");
  const ZetaProfile zp = zeta_profile(g, s.cocycle(), s.opt().budget, ov);
  bool resolved = true;
  Json levels = Json::array();
  for (std::size_t n = lo; n <= hi; ++n) {
    Json lv;
    lv["level"] = n;
    Json values = Json::object();
    Json unknown = Json::object();
    PointSet z(g.size());
    PointSet y(g.size());
    for (PointId x : g.domain(n).to_vector()) {
      const ZetaEntry& e = *zp.levels[n][x];
      switch (e.state) {
        case ZetaState::Finite: values[s.ids()[x]] = real(e.value); y.insert(x); break;
        case ZetaState::Infinite: values[s.ids()[x]] = "inf"; z.insert(x); break;
        case ZetaState::Unknown: unknown[s.ids()[x]] = real(e.value); break;
      }
    }
    lv["zeta"] = std::move(values);
    lv["unknown_lower_bounds"] = unknown;
    if (unknown.empty()) {
      lv["Z"] = detail::point_set(z, s.ids());
      lv["Y"] = detail::point_set(y, s.ids());
    } else {
      resolved = false;
    }
    levels.push_back(std::move(lv));
  }
  j["levels"] = std::move(levels);
  j["resolved"] = resolved;
  return {std::move(j), kExitPass};
}

Json partition_json(const PartitionXWZ& p, const std::vector<std::string>& ids) {
  Json j;
  Json v = Json::array();
  Json w = Json::array();
  for (std::size_t n = 0; n < p.V.size(); ++n) {
    v.push_back({{"level", n}, {"points", detail::point_set(p.V[n], ids)}});
    w.push_back({{"level", n}, {"points", detail::point_set(p.W[n], ids)}});
  }
  j["V"] = std::move(v);
  j["W"] = std::move(w);
  j["V_inf"] = detail::point_set(p.Vinf, ids);
  j["W_inf"] = detail::point_set(p.Winf, ids);
  j["Z"] = detail::point_set(p.Z, ids);
  j["checks"] = detail::validation_json(p.checks, ids);
  return j;
}

Outcome cmd_decompose(Session& s) {
  Json j = s.header("decompose");
  const PartitionXWZ p = partition_xwz(s.calc());
  j["partition"] = partition_json(p, s.ids());
  j["verdict"] = p.checks.ok();
  return {std::move(j), p.checks.ok() ? kExitPass : kExitFail};
}

Outcome verdict_outcome(Json j, const QiReport& r, const std::vector<std::string>& ids) {
  j["report"] = detail::qi_json(r, ids);
  j["verdict"] = r.verdict();
  return {std::move(j), r.verdict() ? kExitPass : kExitFail};
}

Outcome cmd_verify_qi(Session& s) {
  Json j = s.header("verify-qi");
  const Measure& mu = s.measure(s.opt().measure, "--measure");
  j["measure"] = *s.opt().measure;
  if (s.opt().level) {
    const std::size_t n = s.level();
    return verdict_outcome(std::move(j), check_main_result(s.calc(), mu, n, s.tol()), s.ids());
  }
  const QiReport main = check_main_for_q(s.calc(), mu, s.tol());
  Json per_level = Json::array();
  bool conj = true;
  for (std::size_t n = 0; n <= s.depth(); ++n) {
    const QiReport r = check_qi_direct(s.calc(), mu, n, s.tol());
    conj = conj && r.verdict();
    Json lv{{"level", n}, {"verdict", r.verdict()}};
    if (!r.verdict()) {
      Json ws = Json::array();
      for (const auto& w : r.witnesses) ws.push_back(detail::witness_json(w, s.ids()));
      lv["witnesses"] = std::move(ws);
    }
    per_level.push_back(std::move(lv));
  }
  if (conj != main.verdict()) {
    throw Error(ErrorCode::InconsistentVerdicts, "per-level quasi-invariance disagrees with Q*_n(mu) = 1_{U_n} mu");
  }
  j["per_level_direct"] = std::move(per_level);
  return verdict_outcome(std::move(j), main, s.ids());
}

Outcome cmd_verify_dlr(Session& s) {
  Json j = s.header("verify-dlr");
  const Measure& mu = s.measure(s.opt().measure, "--measure");
  j["measure"] = *s.opt().measure;
  return verdict_outcome(std::move(j), check_charac_dlr(s.calc(), mu, s.tol()), s.ids());
}

Outcome cmd_verify_conformal(Session& s) {
  Json j = s.header("verify-conformal");
  const SpaceModel& space = s.space("verify-conformal");
  const Measure& mu = s.measure(s.opt().measure, "--measure");
  j["measure"] = *s.opt().measure;
  const PointSet z = s.calc().Z_all();
  const QiReport conf = check_conformal(space, s.file().h, mu, s.depth(), s.tol(), &z);
  const bool dlr = check_main_for_q(s.calc(), mu, s.tol()).verdict();
  if (conf.verdict() && !dlr) {
    throw Error(ErrorCode::InconsistentVerdicts, "conformal measure fails the DLR check");
  }
  j["dlr_verdict"] = dlr;
  return verdict_outcome(std::move(j), conf, s.ids());
}

Outcome cmd_construct_qi(Session& s) {
  Json j = s.header("construct-qi");
  if (!s.opt().level) usage("--level is required (a level number or inf)");
  const Calculus& calc = s.calc();
  if (s.opt().nu) {
    if (*s.opt().level == "inf") usage("--nu needs a finite --level");
    const std::size_t n = s.level();
    const Measure mu = construct_qi_from_nu(calc, s.measure(s.opt().nu, "--nu"), n);
    const QiReport r = check_qi_direct(calc, mu, n, s.tol());
    j["method"] = "from_nu";
    j["level"] = n;
    j["nu"] = *s.opt().nu;
    j["measure"] = detail::measure_json(mu, s.ids());
    j["mass"] = real(mu.mass());
    j["check"] = detail::qi_json(r, s.ids());
    j["verdict"] = r.verdict();
    return {std::move(j), r.verdict() ? kExitPass : kExitFail};
  }
  const std::optional<Measure> seed = s.optional_measure(s.opt().seed, "--seed");
  if (seed) j["seed"] = *s.opt().seed;
  if (*s.opt().level == "inf") {
    const WinfConstruction w = construct_qi_on_winf(calc, seed, s.tol(), s.opt().max_iter.value_or(100000));
    const QiReport r = check_main_for_q(calc, w.mu, s.tol());
    j["method"] = "w_inf";
    j["measure"] = detail::measure_json(w.mu, s.ids());
    j["converged"] = w.converged;
    j["levels_used"] = w.levels_used;
    Json d = Json::array();
    for (double x : w.distances) d.push_back(real(x));
    j["distances"] = std::move(d);
    j["notes"] = w.notes;
    j["check"] = detail::qi_json(r, s.ids());
    j["verdict"] = w.converged && r.verdict();
    return {std::move(j), w.converged && r.verdict() ? kExitPass : kExitFail};
  }
  const std::size_t n = s.level();
  const Measure mu = construct_qi_on_wn(calc, n, seed);
  const QiReport r = check_charac_dlr(calc, mu, s.tol());
  j["method"] = "w_n";
  j["level"] = n;
  j["measure"] = detail::measure_json(mu, s.ids());
  j["check"] = detail::qi_json(r, s.ids());
  j["verdict"] = r.verdict();
  return {std::move(j), r.verdict() ? kExitPass : kExitFail};
}

Outcome cmd_ruelle_eigen(Session& s) {
  Json j = s.header("ruelle-eigen");
  if (!s.inst().transfer) usage("ruelle-eigen needs a sigma-derived or full-shift model");
  const TransferSystem& ts = *s.inst().transfer;
  EigenOptions eo;
  eo.tol = s.opt().tol.value_or(1e-10);
  eo.max_iter = s.opt().max_iter.value_or(100000);
  std::optional<Measure> start = s.optional_measure(s.opt().measure, "--measure");
  if (!start) start = s.optional_measure(s.opt().seed, "--seed");
  const EigenResult r = solve_eigenmeasure(ts, s.cocycle(), start, eo);
  j["tolerance"] = real(eo.tol);
  j["max_iter"] = eo.max_iter;
  j["eigen"] = detail::eigen_json(r, s.ids());

  const ReducibilityProbe p = probe_reducibility(ts, s.cocycle(), eo);
  j["reducibility"] = {{"reducible", p.reducible},
                       {"runs", p.runs},
                       {"converged_runs", p.converged_runs},
                       {"distinct_limits", p.distinct_limits}};

  int code = kExitPass;
  bool verdict = true;
  if (r.status == EigenStatus::NoConvergence) {
    code = kExitFail;
    verdict = false;
  } else if (r.status == EigenStatus::Converged) {
    const double dlr_tol = std::max(1e-8, 10.0 * eo.tol);
    const QiReport d = verify_eigen_dlr(ts, s.calc(), r.mu, r.lambda, dlr_tol);
    j["eigen_dlr"] = detail::qi_json(d, s.ids());
    if (!d.verdict()) {
      code = kExitFail;
      verdict = false;
    }
  }
  j["verdict"] = verdict;
  return {std::move(j), code};
}

Outcome cmd_export_matrix(Session& s) {
  Json j = s.header("export-matrix");
  const std::string name = s.opt().op.value_or("Q");
  const std::size_t n = s.level(std::size_t{1});
  if (n > s.depth()) usage("--level exceeds the model depth");
  DenseMatrix m;
  if (name == "L") {
    if (!s.inst().transfer) usage("operator L needs a sigma-derived or full-shift model");
    m = transfer_matrix(*s.inst().transfer, s.cocycle(), n);
    j["operator"] = "L_rho";
  } else {
    const auto kind = parse_operator_kind(name);
    if (!kind) usage("unknown operator '" + name + "' (expected F, E_rho, P_rho, Q or L)");
    m = dense_matrix(s.calc(), {*kind, n});
    j["operator"] = to_string(*kind);
  }
  j["level"] = n;
  j["rows"] = m.rows;
  j["cols"] = m.cols;
  j["ids"] = s.ids();
  j["convention"] = "entries[x][t] = T(1_t)(x); the dual acts by the transpose";
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows; ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols; ++c) row.push_back(real(m(r, c)));
    rows.push_back(std::move(row));
  }
  j["entries"] = std::move(rows);
  return {std::move(j), kExitPass};
}

const std::map<std::string, std::function<Outcome(Session&)>>& commands() {
  static const std::map<std::string, std::function<Outcome(Session&)>> table{
      {"validate", cmd_validate},
      {"classes", cmd_classes},
      {"zeta", cmd_zeta},
      {"decompose", cmd_decompose},
      {"verify-qi", cmd_verify_qi},
      {"verify-dlr", cmd_verify_dlr},
      {"verify-conformal", cmd_verify_conformal},
      {"construct-qi", cmd_construct_qi},
      {"ruelle-eigen", cmd_ruelle_eigen},
      {"export-matrix", cmd_export_matrix},
  };
  return table;
}

}  // namespace

int run_command(const std::string& command, const CommandOptions& opt, std::ostream& out, std::ostream& err) {
  auto it = commands().find(command);
  if (it == commands().end()) {
    err << "error: unknown command '" << command << "'\n";
    return kExitUsage;
  }
  Outcome result;
  try {
    Session session(opt);
    result = it->second(session);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  const std::string text = detail::dump(result.report);
  if (opt.output) {
    std::ofstream f(*opt.output, std::ios::binary);
    if (!f) {
      err << "error: cannot write " << *opt.output << "\n";
      return kExitUsage;
    }
    f << text;
  } else {
    out << text;
  }
  return result.code;
}

namespace {

const std::map<std::string, std::string>& descriptions() {
  static const std::map<std::string, std::string> table{
      {"validate", "check the GAP axioms, the potential and the cocycle gluing"},
      {"classes", "list the R_n classes per level and the union relation"},
      {"zeta", "partition function per level, with Z_n and Y_n"},
      {"decompose", "the Z / V_n / W_n / V_inf / W_inf partition"},
      {"verify-qi", "quasi-invariance of --measure (all levels, or the five-way check at --level)"},
      {"verify-dlr", "DLR characterization of --measure over the W-pieces"},
      {"verify-conformal", "conformality of --measure on the truncated Renault-Deaconu groupoid"},
      {"construct-qi", "build a quasi-invariant measure from --nu, on W_n, or on W_inf"},
      {"ruelle-eigen", "eigenmeasure of the dual Ruelle operator by power iteration"},
      {"export-matrix", "dense matrix of F, E_rho, P_rho, Q or L at --level"},
  };
  return table;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Verification and construction of quasi-invariant measures on GAP relations", "gaprel"};
  app.require_subcommand(1);
  CommandOptions opt;
  std::string chosen;
  for (const auto& [name, fn] : commands()) {
    CLI::App* sub = app.add_subcommand(name, descriptions().at(name));
    sub->add_option("--model", opt.model_path, "model JSON file")->required();
    sub->add_option("--depth", opt.depth, "truncation depth (default: the model's depth)");
    sub->add_option("--tol", opt.tol, "relative tolerance (default 1e-9; 1e-10 for ruelle-eigen)");
    sub->add_option("--max-iter", opt.max_iter, "iteration cap");
    sub->add_option("--budget", opt.budget, "class-enumeration budget for zeta");
    sub->add_option("--measure", opt.measure, "named measure from the model");
    sub->add_option("--level", opt.level, "level number, or inf for construct-qi");
    sub->add_option("--seed", opt.seed, "named seed measure");
    sub->add_option("--nu", opt.nu, "named measure nu for construct-qi");
    sub->add_option("--operator", opt.op, "F, E_rho, P_rho, Q or L for export-matrix");
    sub->add_option("--output", opt.output, "write the report here instead of stdout");
    sub->callback([&chosen, n = name]() { chosen = n; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitPass : kExitUsage;
  }
  return run_command(chosen, opt, out, err);
}

}  // namespace gaprel
