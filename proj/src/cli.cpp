#include "steckin/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>
#include <utility>

#include <CLI11.hpp>
#include <json.hpp>

#include "steckin/chains.hpp"
#include "steckin/criteria.hpp"
#include "steckin/error.hpp"
#include "steckin/format.hpp"
#include "steckin/matnorm.hpp"
#include "steckin/oracle.hpp"
#include "steckin/parallel.hpp"

namespace steckin::cli {

using detail::require;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class Stopwatch {
 public:
  long long ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

ReportRow make_row(const RunConfig& cfg, std::string id, std::size_t N) {
  ReportRow row;
  row.check_id = std::move(id);
  row.params = cfg.params;
  row.N = N;
  row.seed = cfg.seed;
  row.constant = kNaN;
  return row;
}

// Reverse families default to r = p and the main chains to the critical
// shift, the setting in which the p* threshold applies.
Params chain_params(const RunConfig& cfg) {
  Params P = cfg.params;
  if (!cfg.r_set) P.r = P.p;
  if (!cfg.a_set) P.a = criteria::critical_shift(P.p);
  return P;
}

double require_alpha(const RunConfig& cfg) {
  require(cfg.params.alpha.has_value(), "--alpha is required here");
  return *cfg.params.alpha;
}

void add_scan_rows(Report& rep, const RunConfig& cfg, const std::string& id,
                   const std::function<double(double)>& f, const ScanOptions& opts) {
  if (cfg.summary_only) return;
  for (std::size_t i = 0; i < cfg.grid.count; ++i) {
    const double x = cfg.grid.at(i);
    auto row = make_row(cfg, id + ":cell", 0);
    row.value = x;
    row.margin = (i == 0 && opts.exact_zero_at_lo) ? 0.0 : f(x);
    row.pass = margin_passes(row.margin, row.margin, opts.tol);
    rep.rows.push_back(row);
  }
}

Report scan_report(const RunConfig& cfg, const std::string& id,
                   const std::function<double(double)>& f, bool exact_zero) {
  Stopwatch sw;
  cfg.grid.validate();
  ScanOptions opts;
  opts.exact_zero_at_lo = exact_zero && cfg.grid.lo == 0.0;
  opts.jobs = cfg.jobs;
  Report rep;
  add_scan_rows(rep, cfg, id, f, opts);
  const auto res = scan_min(f, cfg.grid, opts);
  auto row = make_row(cfg, id, 0);
  row.value = res.argmin;
  row.margin = res.min_margin;
  row.pass = res.pass;
  row.runtime_ms = sw.ms();
  rep.rows.push_back(row);
  rep.pass = res.pass;
  return rep;
}

Report single_value(const RunConfig& cfg, const std::string& id, double value) {
  Report rep;
  auto row = make_row(cfg, id, 0);
  row.value = value;
  row.margin = value;
  row.pass = value >= 0.0;
  rep.rows.push_back(row);
  rep.pass = row.pass;
  return rep;
}

}  // namespace

Report cmd_criteria(const RunConfig& cfg) {
  const auto& P = cfg.params;
  const std::string& fam = cfg.family;
  const std::string id = "criteria:" + fam;
  if (fam == "lemma1") {
    Stopwatch sw;
    const GridSpec xg{0.0, 1.0, cfg.grid.count, 0};
    const GridSpec tg{0.505, 0.995, 199, 0};
    const auto res = criteria::scan_lemma1(xg, tg, cfg.jobs);
    Report rep;
    if (!cfg.summary_only) {
      // One row per t: the minimum over the x grid.
      for (std::size_t j = 0; j < tg.count; ++j) {
        const double t = tg.at(j);
        GridSpec row_grid = xg;
        ScanOptions o;
        o.exact_zero_at_lo = true;
        const auto rf = scan_min([t](double x) { return criteria::lemma1_f(x, t); }, row_grid, o);
        const auto rg = scan_min([t](double x) { return criteria::lemma1_g(x, t); }, row_grid, o);
        auto row = make_row(cfg, id + ":row", 0);
        row.value = t;
        row.margin = std::min(rf.min_margin, rg.min_margin);
        row.pass = rf.pass && rg.pass;
        rep.rows.push_back(row);
      }
    }
    for (auto [name, r2] : {std::pair{"f", res.f}, std::pair{"g", res.g}}) {
      auto row = make_row(cfg, id + ":" + name, 0);
      row.value = r2.argmin_y;
      row.margin = r2.min_margin;
      row.pass = r2.pass;
      row.runtime_ms = sw.ms();
      rep.rows.push_back(row);
    }
    auto row = make_row(cfg, id + ":g-monotone", 0);
    row.value = res.g_monotone ? 1.0 : 0.0;
    row.margin = row.value;
    row.pass = res.g_monotone;
    row.runtime_ms = sw.ms();
    rep.rows.push_back(row);
    rep.pass = res.pass();
    return rep;
  }
  if (fam == "phi45") {
    criteria::phi45(0.0, P.p, P.r, P.a);
    return scan_report(cfg, id, [&](double y) { return criteria::phi45(y, P.p, P.r, P.a); },
                       true);
  }
  if (fam == "f35") {
    const double al = require_alpha(cfg);
    criteria::f35(0.0, P.p, al);
    return scan_report(cfg, id, [&](double x) { return criteria::f35(x, P.p, al); }, true);
  }
  if (fam == "ineq32") {
    const double al = require_alpha(cfg);
    criteria::ineq32_margin(0.0, al, P.p);
    return scan_report(cfg, id, [&](double y) { return criteria::ineq32_margin(y, al, P.p); },
                       true);
  }
  if (fam == "h1h2") {
    const double al = require_alpha(cfg);
    if (P.p <= 2.0)
      return scan_report(cfg, id, [&](double y) { return -criteria::h1(y, al, P.p); }, false);
    return scan_report(cfg, id, [&](double y) { return -criteria::h2(y, al, P.p); }, false);
  }
  if (fam == "h36") return single_value(cfg, id, criteria::h36(require_alpha(cfg), P.p));
  if (fam == "crit14") return single_value(cfg, id, criteria::crit14(P.p));
  throw ParameterError("unknown criteria family '" + fam +
                       "' (lemma1, phi45, f35, h36, ineq32, h1h2, crit14)");
}

Report cmd_threshold(const RunConfig& cfg) {
  Stopwatch sw;
  const double p = cfg.params.p;
  criteria::Threshold th;
  double constant = kNaN;
  if (cfg.target == "p-star") {
    th = criteria::p_star(cfg.tol);
  } else if (cfg.target == "alpha0-sub-half") {
    th = criteria::alpha0_sub_half_bracket(p, cfg.tol);
  } else if (cfg.target == "alpha0-super-one") {
    const auto a0 = criteria::alpha0_super_one_detail(p, cfg.tol);
    // Re-derive the bracket of the binding root for the evidence rows.
    const bool sub2 = p <= 2.0;
    const double top = sub2 ? 1.0 + 1.0 / p : 0.5 * (1.0 + std::sqrt(1.0 + 8.0 / p));
    const bool use_h1_one = sub2 && a0.alpha2 <= a0.alpha1;
    auto margin = [p, sub2, use_h1_one](double a) {
      if (!sub2) return -criteria::h2(1.0, a, p);
      return -criteria::h1(use_h1_one ? 1.0 : 0.0, a, p);
    };
    th = criteria::first_failure_root(margin, 1.0, top, 1000, cfg.tol);
    constant = a0.alpha0;
  } else {
    throw ParameterError("unknown threshold target '" + cfg.target +
                         "' (p-star, alpha0-sub-half, alpha0-super-one)");
  }
  Report rep;
  const std::string id = "threshold:" + cfg.target;
  auto row = make_row(cfg, id, 0);
  row.value = th.value;
  row.constant = constant;
  row.margin = th.hi - th.lo;
  row.pass = th.f_lo >= 0.0 && th.f_hi < 0.0;
  row.runtime_ms = sw.ms();
  auto lo = make_row(cfg, id + ":lo", 0);
  lo.value = th.lo;
  lo.margin = th.f_lo;
  lo.pass = th.f_lo >= 0.0;
  auto hi = make_row(cfg, id + ":hi", 0);
  hi.value = th.hi;
  hi.margin = th.f_hi;
  hi.pass = th.f_hi < 0.0;
  rep.rows = {row, lo, hi};
  rep.pass = row.pass;
  return rep;
}

Report cmd_construct(const RunConfig& cfg) {
  Stopwatch sw;
  const std::size_t N = cfg.N.value_or(10000);
  const auto kind = chains::construction_from_string(cfg.construction);
  Params P = chain_params(cfg);
  chains::WeightChain chain;
  SequenceVerdict v;
  switch (kind) {
    case chains::Construction::main:
      chain = chains::build_b_chain(P.p, P.r, P.a, P.tuning(), N);
      v = chains::verify_induction_43(chain);
      break;
    case chains::Construction::nu:
      chain = chains::build_nu_chain(P.p, P.r, P.a, N);
      v = chains::verify_303(chain);
      break;
    case chains::Construction::section4:
      P = cfg.params;
      chain = chains::build_w_chain_sec4(P.p, require_alpha(cfg), N);
      v = chains::verify_35(chain);
      break;
    case chains::Construction::alternative:
      P = cfg.params;
      chain = chains::alternative_b_chain(P.p, N);
      v = chains::verify_alternative(chain);
      break;
  }
  Report rep;
  RunConfig echo = cfg;
  echo.params = kind == chains::Construction::alternative ? chain.params : P;
  const std::string id = "construct:" + cfg.construction;
  auto row = make_row(echo, id, N);
  row.value = static_cast<double>(v.first_failure);
  row.margin = v.scan.min_margin;
  row.pass = v.pass();
  row.runtime_ms = sw.ms();
  auto res = make_row(echo, id + ":residual", N);
  res.value = chain.identity_residual;
  res.constant = 1e-12;
  res.margin = 1e-12 - chain.identity_residual;
  res.pass = chain.identity_residual < 1e-12;
  rep.rows = {row, res};
  rep.pass = row.pass && res.pass;
  std::ostringstream csv;
  chains::write_chain_csv(csv, chain, v.slack);
  rep.chain_csv = csv.str();
  return rep;
}

Report cmd_oracle(const RunConfig& cfg) {
  Stopwatch sw;
  oracle::InequalityFamily fam;
  fam.kind = oracle::family_from_string(cfg.family);
  fam.params = cfg.params;
  if (!cfg.r_set) fam.params.r = fam.params.p;
  fam.N = cfg.N.value_or(200);
  require(cfg.sign == "plus" || cfg.sign == "minus", "--sign must be plus or minus");
  fam.sign = cfg.sign == "plus" ? oracle::MeanSign::plus : oracle::MeanSign::minus;
  fam.validate();
  RunConfig echo = cfg;
  echo.params = fam.params;
  const double c = fam.constant();
  const std::string id = "oracle:" + cfg.family;
  Report rep;

  if (cfg.counterexample) {
    const auto found = oracle::find_counterexample(fam, cfg.budget, cfg.seed);
    auto row = make_row(echo, id + ":counterexample", fam.N);
    row.constant = c;
    if (found) {
      row.value = oracle::ratio(fam, *found);
      row.margin = fam.reverse() ? row.value - c : c - row.value;
      row.pass = false;
      nlohmann::ordered_json j;
      j["family"] = cfg.family;
      j["N"] = fam.N;
      j["ratio"] = row.value;
      j["constant"] = c;
      std::vector<std::size_t> support;
      for (std::size_t i = 0; i < found->size(); ++i)
        if ((*found)[i] != 0.0) support.push_back(i + 1);
      if (support.size() == 1) j["unit_vector"] = support.front();
      j["vector_hash"] = oracle::vector_hash(*found);
      rep.certificate = j.dump(2);
    } else {
      row.value = kNaN;
      row.margin = kNaN;
      row.pass = true;
    }
    row.runtime_ms = sw.ms();
    rep.rows.push_back(row);
  }
  if (cfg.extremal_eps) {
    auto row = make_row(echo, id + ":extremal", fam.N);
    row.value = oracle::extremal_ratio(fam, *cfg.extremal_eps);
    row.constant = c;
    row.margin = fam.reverse() ? row.value - c : c - row.value;
    row.pass = !oracle::violates(fam, row.value);
    row.runtime_ms = sw.ms();
    rep.rows.push_back(row);
  }
  if (!cfg.counterexample && !cfg.extremal_eps) {
    auto row = make_row(echo, id, fam.N);
    row.constant = c;
    if (fam.reverse()) {
      oracle::MinimizeOptions opts;
      opts.seed = cfg.seed;
      opts.restarts = cfg.restarts;
      opts.jobs = cfg.jobs;
      const auto cert = oracle::minimize_ratio(fam, opts);
      row.check_id = id + ":minimize";
      row.value = cert.best_ratio;
      row.pass = cert.pass();
      rep.certificate = oracle::certificate_json(cert);
    } else {
      row.check_id = id + ":random";
      if (fam.kind == oracle::FamilyKind::dual) {
        const auto trials =
            oracle::dual_pair_trials(fam.params.p, fam.params.r, fam.N, cfg.samples, cfg.seed);
        double worst = 0.0;
        bool ok = true;
        for (const auto& t : trials) {
          worst = std::max(worst, t.dual_ratio);
          ok = ok && t.dual_ok && t.weighted_ok;
        }
        row.value = worst;
        row.pass = ok;
      } else {
        row.value = oracle::random_extreme_ratio(fam, cfg.samples, cfg.seed, cfg.jobs);
        row.pass = !oracle::violates(fam, row.value, cfg.tol);
      }
    }
    row.margin = fam.reverse() ? row.value - c : c - row.value;
    row.runtime_ms = sw.ms();
    rep.rows.push_back(row);
  }
  rep.pass = std::all_of(rep.rows.begin(), rep.rows.end(), [](const auto& r) { return r.pass; });
  return rep;
}

Report cmd_matnorm(const RunConfig& cfg) {
  Stopwatch sw;
  const std::size_t N = cfg.N.value_or(10000);
  const auto m = matnorm::make_matrix(cfg.generator, N);
  const double p = cfg.params.p;
  const std::string& chk = cfg.check;
  require(chk == "norm" || chk == "thm31" || chk == "cor1" || chk == "forward" || chk == "all",
          "--check must be norm, thm31, cor1, forward or all");
  Report rep;

  // Power weights alpha k^{alpha-1} / n^alpha use L = 1/alpha by default.
  double alpha_gen = 1.0;
  if (cfg.generator.rfind("power-weights(", 0) == 0 || cfg.generator.rfind("stolarsky(", 0) == 0)
    alpha_gen = std::stod(cfg.generator.substr(cfg.generator.find('(') + 1));
  const double L = cfg.L.value_or(1.0 / alpha_gen);

  if (chk == "norm" || chk == "all") {
    const auto est = matnorm::lp_norm_lower(m, p, cfg.iters, cfg.seed);
    auto row = make_row(cfg, "matnorm:norm:" + m.name, m.N());
    row.value = est.lower_bound;
    const double recheck = matnorm::norm_ratio(m, est.witness, p);
    const bool witness_ok = std::abs(recheck - est.lower_bound) <= 1e-10 * est.lower_bound;
    if (cfg.generator.rfind("csv:", 0) != 0) {
      const double ap = alpha_gen * p;
      row.constant = ap > 1.0 ? ap / (ap - 1.0) : kNaN;
    }
    row.margin = std::isnan(row.constant) ? kNaN : row.constant - row.value;
    row.pass = witness_ok && (std::isnan(row.margin) || row.margin >= -1e-9);
    row.runtime_ms = sw.ms();
    rep.rows.push_back(row);
  }
  auto condition = [&](const std::string& name, const SequenceVerdict& v) {
    if (cfg.per_n_rows) {
      for (std::size_t i = 0; i < v.slack.size(); ++i) {
        auto r = make_row(cfg, "matnorm:" + name + ":n", m.N());
        r.value = static_cast<double>(i + 1);
        r.margin = v.slack[i];
        r.pass = margin_passes(v.slack[i], v.slack[i]);
        rep.rows.push_back(r);
      }
    }
    auto row = make_row(cfg, "matnorm:" + name + ":" + m.name, m.N());
    row.params.a = cfg.params.a;
    row.value = static_cast<double>(v.first_failure);
    row.constant = std::pow(p / (p - L), p);
    row.margin = v.scan.min_margin;
    row.pass = v.pass();
    row.runtime_ms = sw.ms();
    rep.rows.push_back(row);
  };
  if (chk == "thm31" || chk == "all")
    condition("thm31", matnorm::check_thm31(m, p, L, cfg.params.a));
  if (chk == "cor1" || chk == "all")
    condition("cor1", matnorm::check_cor1(m, p, L, cfg.params.a));
  if (chk == "forward" || chk == "all") {
    const double al = cfg.params.alpha.value_or(alpha_gen);
    const auto f = matnorm::verify_forward_family_report(al, cfg.params.beta, p, m.N(),
                                                         cfg.samples, cfg.seed, cfg.jobs);
    auto row = make_row(cfg, "matnorm:forward", m.N());
    row.params.alpha = al;
    row.value = std::max({f.max_ratio_12, f.max_ratio_13, f.max_ratio_35});
    row.constant = f.constant;
    row.margin = f.constant - row.value;
    row.pass = f.pass();
    row.runtime_ms = sw.ms();
    rep.rows.push_back(row);
  }
  rep.pass = true;
  for (const auto& r : rep.rows)
    if (r.check_id.size() < 2 || r.check_id.substr(r.check_id.size() - 2) != ":n")
      rep.pass = rep.pass && r.pass;
  return rep;
}

namespace {

std::string opt_double(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

nlohmann::ordered_json number_or_null(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

}  // namespace

void write_csv(std::ostream& os, const Report& report) {
  os << kCsvHeader << '\n';
  for (const auto& r : report.rows) {
    os << r.check_id << ',' << format_double(r.params.p) << ',' << format_double(r.params.r)
       << ',' << opt_double(r.params.alpha) << ',' << format_double(r.params.beta) << ','
       << format_double(r.params.a) << ',' << r.N << ',' << r.seed << ','
       << format_double(r.value) << ',' << format_double(r.constant) << ','
       << format_double(r.margin) << ',' << (r.pass ? "true" : "false") << ','
       << r.runtime_ms << '\n';
  }
}

void write_json(std::ostream& os, const Report& report) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    nlohmann::ordered_json j;
    j["check_id"] = r.check_id;
    j["p"] = number_or_null(r.params.p);
    j["r"] = number_or_null(r.params.r);
    j["alpha"] = r.params.alpha ? number_or_null(*r.params.alpha) : nullptr;
    j["beta"] = number_or_null(r.params.beta);
    j["a"] = number_or_null(r.params.a);
    j["N"] = r.N;
    j["seed"] = r.seed;
    j["value"] = number_or_null(r.value);
    j["constant"] = number_or_null(r.constant);
    j["margin"] = number_or_null(r.margin);
    j["pass"] = r.pass;
    j["runtime_ms"] = r.runtime_ms;
    rows.push_back(std::move(j));
  }
  nlohmann::ordered_json doc;
  doc["pass"] = report.pass;
  doc["rows"] = std::move(rows);
  if (!report.certificate.empty())
    doc["certificate"] = nlohmann::ordered_json::parse(report.certificate);
  os << doc.dump(2) << '\n';
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical checks for reverse and forward Hardy-type inequalities", "steckin"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value configuration file");

  RunConfig cfg;
  double p = cfg.params.p, r = cfg.params.r, beta = cfg.params.beta, a = cfg.params.a;
  std::optional<double> alpha, alpha_opt;
  std::optional<std::size_t> N;
  std::string format = "csv";
  cfg.jobs = default_jobs();

  app.add_option("--p", p, "exponent p");
  auto* r_opt = app.add_option("--r", r, "weight exponent r (defaults to p)");
  app.add_option("--alpha", alpha, "power exponent alpha");
  app.add_option("--alpha-opt", alpha_opt, "tuning exponent of the main construction");
  app.add_option("--beta", beta, "Stolarsky mean index beta (inf allowed)");
  auto* a_opt = app.add_option("--a", a, "shift a");
  app.add_option("--N", N, "truncation length");
  app.add_option("--seed", cfg.seed, "random seed")->envname("STECKIN_SEED");
  app.add_option("--restarts", cfg.restarts, "minimizer restarts");
  app.add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", cfg.output_path, "output file (default stdout)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--grid-lo", cfg.grid.lo, "scan grid start");
  app.add_option("--grid-hi", cfg.grid.hi, "scan grid end");
  app.add_option("--grid-count", cfg.grid.count, "scan grid points");
  app.add_option("--refine", cfg.grid.max_refine_depth, "maximum refinement depth");
  app.add_option("--tol", cfg.tol, "root tolerance / random-trial tolerance");
  app.add_option("--family", cfg.family, "criterion or inequality family");
  app.add_option("--target", cfg.target, "threshold target");
  app.add_option("--construction", cfg.construction, "weight construction");
  app.add_option("--generator", cfg.generator, "matrix generator");
  app.add_option("--check", cfg.check, "matnorm check: norm, thm31, cor1, forward, all");
  app.add_option("--sign", cfg.sign, "mean-reverse index sign: plus or minus");
  app.add_flag("--counterexample", cfg.counterexample, "search for a counterexample");
  app.add_option("--extremal", cfg.extremal_eps, "evaluate the extremal family at eps");
  app.add_option("--L", cfg.L, "L of the matrix conditions (default 1/alpha)");
  app.add_option("--budget", cfg.budget, "counterexample evaluation budget");
  app.add_option("--iters", cfg.iters, "norm iterations");
  app.add_option("--samples", cfg.samples, "random trials");
  app.add_flag("--summary-only", cfg.summary_only, "omit per-cell rows");
  app.add_flag("--rows", cfg.per_n_rows, "emit per-n rows for matrix conditions");

  const std::pair<const char*, const char*> commands[] = {
      {"criteria", "grid scan of a criterion function"},
      {"threshold", "root of a validity boundary with bracket evidence"},
      {"construct", "build a weight chain and run its verifier"},
      {"oracle", "minimize, probe or break an inequality family"},
      {"matnorm", "norm bound and conditions for a factorable matrix"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? 0 : 2;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  cfg.params.p = p;
  cfg.params.r = r;
  cfg.params.alpha = alpha;
  cfg.params.alpha_opt = alpha_opt;
  cfg.params.beta = beta;
  cfg.params.a = a;
  cfg.r_set = r_opt->count() > 0;
  cfg.a_set = a_opt->count() > 0;
  cfg.N = N;
  cfg.format = format == "json" ? Format::json : Format::csv;

  Report rep;
  try {
    cfg.params.check_exclusive();
    if (cfg.command == "criteria") rep = cmd_criteria(cfg);
    else if (cfg.command == "threshold") rep = cmd_threshold(cfg);
    else if (cfg.command == "construct") rep = cmd_construct(cfg);
    else if (cfg.command == "oracle") rep = cmd_oracle(cfg);
    else rep = cmd_matnorm(cfg);
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const BracketError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const UndefinedRatioError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  std::ofstream file;
  if (!cfg.output_path.empty()) {
    file.open(cfg.output_path);
    if (!file) {
      err << "error: cannot open '" << cfg.output_path << "'\n";
      return 2;
    }
  }
  std::ostream& sink = cfg.output_path.empty() ? out : file;
  auto emit = [&](std::ostream& os) {
    if (cfg.format == Format::json) write_json(os, rep);
    else write_csv(os, rep);
  };
  if (!rep.chain_csv.empty()) {
    sink << rep.chain_csv;
    emit(err);
  } else {
    emit(sink);
    if (cfg.format == Format::csv && !rep.certificate.empty()) err << rep.certificate << '\n';
  }
  return rep.pass ? 0 : 1;
}

}  // namespace steckin::cli
