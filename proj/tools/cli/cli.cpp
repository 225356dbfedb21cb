#include "cli.hpp"

#include <algorithm>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "document.hpp"

#include "jensen/classic_bounds.hpp"
#include "jensen/oracle.hpp"
#include "jensen/refined_bounds.hpp"
#include "jensen/uniform_convex.hpp"

namespace jensen::cli {

namespace {

struct Globals {
  double tol_abs = 1e-10;
  double tol_rel = 1e-9;
  std::string format = "text";

  [[nodiscard]] Tolerance tolerance() const {
    if (!(tol_abs >= 0) || !(tol_rel >= 0)) throw InputError("--tol-abs and --tol-rel must be nonnegative");
    return {static_cast<Real>(tol_abs), static_cast<Real>(tol_rel)};
  }
};

Json header(std::string_view command, const Tolerance& tol) {
  Json doc;
  doc["tool"] = "jensen";
  doc["version"] = kVersion;
  doc["command"] = std::string(command);
  doc["tolerance"] = to_json(tol);
  return doc;
}

void emit(std::ostream& out, const Globals& g, const Json& doc) {
  if (g.format == "json") {
    write_json(out, doc);
  } else {
    write_text(out, doc);
  }
}

Instance load_instance(const std::string& path) {
  return parse_instance(parse_document(read_source(path), path), path);
}

Verdict combine(const Json& reports) {
  Verdict v = Verdict::Verified;
  for (const auto& r : reports) {
    if (r["verdict"] == "violated") v = worst(v, Verdict::Violated);
  }
  return v;
}

int exit_for(Verdict v) {
  switch (v) {
    case Verdict::Verified: return kVerified;
    case Verdict::Violated: return kViolated;
    case Verdict::Inadmissible: return kInvalid;
  }
  return kInvalid;
}

struct TwoPoints {
  Real a, b, p1, q1;
};

TwoPoints two_points(const Instance& inst) {
  if (inst.size() != 2) throw PreconditionError("this theorem needs exactly two points (n = 2)");
  const auto s = inst.sorted();
  if (!(s.x()[0] < s.x()[1])) throw PreconditionError("the two points must be distinct");
  return {s.x()[0], s.x()[1], s.p()[0], s.q()[0]};
}

Certificate obtain_certificate(const Instance& inst, bool no_certify) {
  if (!inst.phi()) throw InputError("field 'phi': a modulus is required for refinements");
  if (no_certify) return Certificate::assumed(inst.f(), *inst.phi(), inst.interval());
  auto cert = certify_uniform_convexity(inst.f(), *inst.phi(), inst.interval());
  if (!cert.passed) {
    throw PreconditionError("f = " + inst.f().describe() + " is not certified with Phi = " + inst.phi()->describe() +
                            " on [" + format_real(inst.interval().lo) + ", " + format_real(inst.interval().hi) +
                            "]: worst slack " + format_real(cert.worst_slack) + " at x = " +
                            format_real(cert.worst_x) + ", y = " + format_real(cert.worst_y) +
                            ", t = " + format_real(cert.worst_t) + " (pass --no-certify to trust it)");
  }
  return cert;
}

Json index_list(const std::vector<std::size_t>& idx) {
  Json a = Json::array();
  for (auto i : idx) a.push_back(i + 1);
  return a;
}

int cmd_eval(const std::string& file, const Globals& g, std::ostream& out) {
  const auto tol = g.tolerance();
  const auto inst = load_instance(file);
  Json doc = header("eval", tol);
  doc["instance"] = to_json(inst);
  Json values;
  values["J(p)"] = number(jensen_functional(inst.f(), inst.x(), inst.p()));
  values["J(q)"] = number(jensen_functional(inst.f(), inst.x(), inst.q()));
  values["xp"] = number(barycenter(inst.x(), inst.p()));
  values["xq"] = number(barycenter(inst.x(), inst.q()));
  values["H"] = number(midpoint_gap(inst.f(), inst.interval().lo, inst.interval().hi));
  doc["values"] = std::move(values);

  Json ratios;
  if (inst.q().strictly_positive()) {
    const auto c = ratio_extremes(inst.p(), inst.q());
    ratios["m"] = number(c.m);
    ratios["M"] = number(c.M);
    ratios["argmin"] = index_list(c.argmin);
    ratios["argmax"] = index_list(c.argmax);
  }
  try {
    const auto s = prefix_suffix_ratios(increasing_rearrangement(inst));
    ratios["m*"] = number(s.m_star);
    ratios["M*"] = number(s.M_star);
    Json prefix = Json::array(), suffix = Json::array();
    for (Real v : s.prefix) prefix.push_back(number(v));
    for (Real v : s.suffix) suffix.push_back(number(v));
    ratios["prefix"] = std::move(prefix);
    ratios["suffix"] = std::move(suffix);
  } catch (const PreconditionError& e) {
    ratios["note"] = std::string("prefix ratios unavailable: ") + e.what();
  }
  doc["ratios"] = std::move(ratios);
  emit(out, g, doc);
  return kVerified;
}

int cmd_bounds(const std::string& file, const std::string& theorem, const Globals& g, std::ostream& out) {
  const auto tol = g.tolerance();
  const auto inst = load_instance(file);
  const auto& iv = inst.interval();
  BoundReport report;
  if (theorem == "1") {
    report = ratio_sandwich(inst, tol);
  } else if (theorem == "2") {
    report = prefix_ratio_sandwich(inst, tol);
  } else if (theorem == "4") {
    report = endpoint_bound(inst.f(), iv.lo, iv.hi, inst.x(), inst.p(), tol);
  } else if (theorem == "5") {
    const auto tp = two_points(inst);
    report = two_point_sandwich(inst.f(), tp.a, tp.b, tp.p1, tol);
  } else {
    report = uniform_reference_bounds(inst.f(), inst.x(), inst.p(), tol);
    if (!(inst.q() == WeightVector::uniform(inst.size()))) {
      report.notes.push_back("q is ignored: the reference weights are uniform");
    }
  }
  Json doc = header("bounds", tol);
  doc["instance"] = to_json(inst);
  doc["reports"] = Json::array({to_json(report)});
  doc["verdict"] = std::string(to_string(report.verdict));
  emit(out, g, doc);
  return exit_for(report.verdict);
}

int cmd_refine(const std::string& file, const std::string& theorem, bool no_certify, const Globals& g,
               std::ostream& out) {
  const auto tol = g.tolerance();
  const auto inst = load_instance(file);
  const auto cert = obtain_certificate(inst, no_certify);
  Json reports = Json::array();
  if (theorem == "3") {
    reports.push_back(to_json(adjacent_chain_bound(inst, cert, tol)));
  } else if (theorem == "eq32") {
    reports.push_back(to_json(barycentric_modulus_bound(inst, cert, tol)));
  } else if (theorem == "7") {
    reports.push_back(to_json(lower_ratio_refinement(inst, cert, tol)));
    reports.push_back(to_json(upper_ratio_refinement(inst, cert, tol)));
    reports.push_back(to_json(upper_ratio_refinement_normalized(inst, cert, tol)));
    if (inst.size() == 2) {
      const auto tp = two_points(inst);
      const auto sp = two_point_ratio_refinements(inst.f(), cert, tp.a, tp.b, tp.p1, tp.q1, tol);
      for (const auto* r : {&sp.lower, &sp.upper, &sp.midpoint_lower, &sp.midpoint_upper}) {
        reports.push_back(to_json(*r));
      }
    }
  } else if (theorem == "8") {
    reports.push_back(to_json(merged_chain_refinement(inst.sorted(), cert, tol)));
  } else {
    require_admissible(inst, TheoremMode::RatioModulus);
    const auto tp = two_points(inst);
    reports.push_back(to_json(two_point_chain_refinement(inst.f(), cert, tp.a, tp.b, tp.p1, tp.q1, tol)));
  }
  const Verdict v = combine(reports);
  Json doc = header("refine", tol);
  doc["instance"] = to_json(inst);
  doc["certificate"] = to_json(cert);
  doc["reports"] = std::move(reports);
  doc["verdict"] = std::string(to_string(v));
  emit(out, g, doc);
  return exit_for(v);
}

struct CertifyOptions {
  std::string file;
  std::string f_kind;
  std::optional<double> f_exponent;
  double f_coefficient = 1;
  std::vector<double> interval;
  std::optional<double> coefficient;
  std::optional<double> exponent;
  std::vector<std::size_t> grid;
  bool estimate = false;
  bool gradient = false;
};

int cmd_certify(const CertifyOptions& o, const Globals& g, std::ostream& out) {
  const auto tol = g.tolerance();
  std::optional<FunctionSpec> f;
  std::optional<Interval> iv;
  std::optional<ModulusSpec> phi;

  if (!o.file.empty()) {
    if (!o.f_kind.empty()) throw InputError("give either an instance file or --f, not both");
    const auto doc = parse_document(read_source(o.file), o.file);
    try {
      if (!doc.is_object()) throw InputError("expected a JSON object at top level");
      for (const auto& [key, value] : doc.items()) {
        static const std::set<std::string> known{"x", "p", "q", "f", "phi", "interval"};
        if (!known.count(key)) throw InputError("field '" + key + "': unknown field");
      }
      if (!doc.contains("f")) throw InputError("field 'f': missing");
      f = parse_function(doc["f"], "f");
      if (doc.contains("interval")) {
        iv = parse_interval(doc["interval"], "interval");
      } else if (doc.contains("x") && doc["x"].is_array() && !doc["x"].empty()) {
        Real lo = 0, hi = 0;
        bool first = true;
        for (const auto& e : doc["x"]) {
          if (!e.is_number()) throw InputError("field 'x': expected numbers");
          const Real v = e.get<double>();
          lo = first ? v : std::min(lo, v);
          hi = first ? v : std::max(hi, v);
          first = false;
        }
        if (!(lo < hi)) throw InputError("field 'interval': missing, and x has a single distinct point");
        iv = Interval{lo, hi};
      }
      if (doc.contains("phi")) phi = parse_modulus(doc["phi"], "phi");
    } catch (const InputError& e) {
      throw InputError(o.file + ": " + e.what());
    }
  } else {
    if (o.f_kind.empty()) throw InputError("certify needs an instance file or --f");
    const auto kind = parse_function_kind(o.f_kind);
    if (!kind) throw InputError("--f: unknown function '" + o.f_kind + "'");
    std::optional<Real> e;
    if (o.f_exponent) e = *o.f_exponent;
    f = FunctionSpec::make(*kind, e, o.f_coefficient);
  }
  if (!o.interval.empty()) {
    if (!(o.interval[0] < o.interval[1])) throw InputError("--interval needs a < b");
    iv = Interval{o.interval[0], o.interval[1]};
  }
  if (!iv) throw InputError("no interval: give --interval a b or an 'interval' field");
  if (!f->domain().contains(*iv)) {
    throw InputError("interval [" + format_real(iv->lo) + ", " + format_real(iv->hi) + "] leaves the domain " +
                     f->domain().describe() + " of " + f->describe());
  }
  if (o.coefficient) {
    phi = ModulusSpec(*o.coefficient, o.exponent ? Real(*o.exponent) : (phi ? phi->exponent() : Real{2}));
  } else if (o.exponent && phi) {
    phi = ModulusSpec(phi->coefficient(), *o.exponent);
  }

  CertGrid grid;
  grid.tolerance = tol;
  if (!o.grid.empty()) {
    grid.x_points = o.grid[0];
    grid.y_points = o.grid[1];
    grid.t_points = o.grid[2];
  }
  grid.validate();

  Json doc = header("certify", tol);
  doc["f"] = to_json(*f);
  doc["interval"] = Json::array({number(iv->lo), number(iv->hi)});
  Verdict v = Verdict::Verified;
  if (phi) {
    const auto cert = certify_uniform_convexity(*f, *phi, *iv, grid);
    doc["certificate"] = to_json(cert);
    if (!cert.passed) v = Verdict::Violated;
    if (o.gradient) {
      const auto grad = gradient_inequality_check(*f, *phi, *iv, grid);
      doc["gradient"] = to_json(grad);
      if (!grad.passed) v = Verdict::Violated;
    }
  }
  if (o.estimate || !phi) {
    const Real r = o.exponent ? Real(*o.exponent) : (phi ? phi->exponent() : Real{2});
    Json est;
    est["exponent"] = number(r);
    est["coefficient"] = number(estimate_modulus_coefficient(*f, r, *iv, grid));
    if (r == 2) {
      const auto analytic = strong_convexity_modulus(*f, *iv);
      est["analytic_coefficient"] = number(analytic ? analytic->coefficient() : Real{0});
    }
    est["grid"] = Json::array({grid.x_points, grid.y_points, grid.t_points});
    doc["estimate"] = std::move(est);
  }
  doc["verdict"] = std::string(to_string(v));
  emit(out, g, doc);
  return exit_for(v);
}

std::vector<Check> parse_checks(const std::string& list) {
  std::vector<Check> out;
  auto add = [&out](Check c) {
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  };
  std::stringstream ss(list);
  std::string token;
  while (std::getline(ss, token, ',')) {
    token.erase(0, token.find_first_not_of(' '));
    token.erase(token.find_last_not_of(' ') + 1);
    if (token == "all") {
      for (auto c : all_checks()) add(c);
      continue;
    }
    if (!token.empty() && std::all_of(token.begin(), token.end(), ::isdigit)) token = "thm" + token;
    if (token == "thm7") {
      add(Check::LowerRatio);
      add(Check::UpperRatio);
      continue;
    }
    const auto c = parse_check(token);
    if (!c) {
      std::string known;
      for (auto k : all_checks()) known += (known.empty() ? "" : ", ") + std::string(tag(k));
      throw InputError("--theorems: unknown tag '" + token + "' (known: " + known + ", all)");
    }
    add(*c);
  }
  if (out.empty()) throw InputError("--theorems: empty theorem set");
  return out;
}

struct FuzzOptions {
  std::uint64_t seed = 0x5eed;
  std::size_t trials = 10000;
  std::string theorems = "all";
  std::string mode = "all";
  unsigned threads = 1;
  std::size_t n_min = 2;
  std::size_t n_max = 8;
  std::size_t witness_trials = 1000;
};

int cmd_fuzz(const FuzzOptions& o, const Globals& g, std::ostream& out) {
  const auto tol = g.tolerance();
  const auto checks = parse_checks(o.theorems);
  std::vector<WeightMode> modes;
  if (o.mode == "all") {
    modes = {WeightMode::NonnegSimplex, WeightMode::SignedPrefix, WeightMode::BoundedPositive};
  } else {
    modes = {*parse_weight_mode(o.mode)};
  }

  FuzzConfig cfg;
  cfg.seed = o.seed;
  cfg.trials = o.trials;
  cfg.n_min = o.n_min;
  cfg.n_max = o.n_max;
  cfg.tolerance = tol;
  cfg.threads = o.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : o.threads;
  cfg.validate();

  Json doc = header("fuzz", tol);
  doc["seed"] = o.seed;
  doc["trials"] = o.trials;
  doc["n_range"] = Json::array({o.n_min, o.n_max});
  Json tags = Json::array();
  for (auto c : checks) tags.push_back(std::string(tag(c)));
  doc["theorems"] = std::move(tags);

  std::size_t total = 0;
  Json campaigns = Json::array();
  for (auto mode : modes) {
    cfg.mode = mode;
    const auto summary = run_campaign(cfg, checks);
    total += summary.total_violations();
    Json c;
    c["mode"] = std::string(to_string(mode));
    Json stats = Json::array();
    for (const auto& s : summary.checks) {
      stats.push_back(Json{{"theorem", std::string(tag(s.check))},
                           {"evaluated", s.evaluated},
                           {"skipped", s.skipped},
                           {"violations", s.violations},
                           {"min_rel_slack", number(s.min_relative_slack)},
                           {"median_rel_slack", number(s.median_relative_slack)},
                           {"worst_slack", number(s.worst_slack)},
                           {"worst_index", s.worst_index}});
    }
    c["checks"] = std::move(stats);
    Json violations = Json::array();
    for (const auto& v : summary.violations) {
      violations.push_back(Json{{"theorem", std::string(tag(v.check))},
                                {"seed", summary.seed},
                                {"index", v.index},
                                {"slack", number(v.slack)},
                                {"bound", number(v.bound)},
                                {"detail", v.detail}});
    }
    c["violations"] = std::move(violations);
    campaigns.push_back(std::move(c));
  }
  doc["campaigns"] = std::move(campaigns);

  bool witnesses_ok = true;
  if (o.witness_trials > 0) {
    const auto w = equality_witness_suite(o.witness_trials, o.seed, tol);
    witnesses_ok = w.passed;
    doc["equality_residuals"] = Json{{"trials", w.trials},
                                     {"thm7-lower max", number(w.lower_ratio_max)},
                                     {"thm7-upper-normalized max", number(w.upper_normalized_max)},
                                     {"eq32 max", number(w.barycentric_max)},
                                     {"thm7 two-point max", number(w.two_point_specials_max)},
                                     {"thm9 max", number(w.two_point_chain_max)},
                                     {"thm3 n=2 max", number(w.adjacent_chain_n2_max)},
                                     {"thm8 n=2 max / tol", number(w.merged_chain_n2_max)},
                                     {"thm8 n=3 witness slack", number(w.merged_chain_n3_slack)},
                                     {"thm3 n=3 witness slack", number(w.adjacent_chain_n3_slack)},
                                     {"passed", w.passed}};
  }
  doc["total_violations"] = total;
  const Verdict v = (total == 0 && witnesses_ok) ? Verdict::Verified : Verdict::Violated;
  doc["verdict"] = std::string(to_string(v));
  emit(out, g, doc);
  return exit_for(v);
}

int cmd_compare(const std::string& file, bool no_certify, const Globals& g, std::ostream& out) {
  const auto tol = g.tolerance();
  const auto inst = load_instance(file);
  const auto cert = obtain_certificate(inst, no_certify);
  const auto ranking = tightness_ranking(inst, cert, tol);

  Json doc = header("compare", tol);
  doc["instance"] = to_json(inst);
  doc["certificate"] = to_json(cert);
  doc["J(p)"] = number(ranking.jp);
  Json rows = Json::array();
  Json tightest = Json::array();
  for (const auto& e : ranking.entries) {
    rows.push_back(Json{{"rank", e.rank},
                        {"theorem", e.tag},
                        {"rhs", number(e.rhs)},
                        {"offset", number(e.offset)},
                        {"implied", number(e.implied)}});
    if (e.rank == 1) tightest.push_back(e.tag);
  }
  doc["ranking"] = std::move(rows);
  doc["tightest"] = std::move(tightest);
  if (!ranking.skipped.empty()) doc["skipped"] = ranking.skipped;
  emit(out, g, doc);
  return kVerified;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Jensen functional bounds and refinements with numerical verification", "jensen"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--tol-abs", g.tol_abs, "Absolute slack tolerance")->capture_default_str();
  app.add_option("--tol-rel", g.tol_rel, "Relative slack tolerance (times the chain scale)")->capture_default_str();
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  std::string file;
  std::string theorem;
  bool no_certify = false;

  auto* eval = app.add_subcommand("eval", "Evaluate J(p), J(q), barycenters and ratio summaries");
  eval->add_option("file", file, "Instance file (JSON, '-' for stdin)")->required();

  auto* bounds = app.add_subcommand("bounds", "Two-sided ratio bounds");
  bounds->add_option("file", file, "Instance file")->required();
  bounds->add_option("--theorem", theorem, "Bound to check")->required()->check(CLI::IsMember({"1", "2", "4", "5", "6"}));

  auto* refine = app.add_subcommand("refine", "Uniform-convexity refinements (needs phi)");
  refine->add_option("file", file, "Instance file")->required();
  refine->add_option("--theorem", theorem, "Refinement to check")
      ->required()
      ->check(CLI::IsMember({"3", "7", "8", "9", "eq32"}));
  refine->add_flag("--no-certify", no_certify, "Trust (f, phi) without the grid certification");

  CertifyOptions co;
  auto* certify = app.add_subcommand("certify", "Grid-certify a modulus or estimate its coefficient");
  certify->add_option("file", co.file, "Instance file supplying f, phi and interval");
  certify->add_option("--f", co.f_kind, "Function kind (power, square, exp, xlogx, abspower)");
  certify->add_option("--f-exponent", co.f_exponent, "Exponent of power/abspower");
  certify->add_option("--f-coefficient", co.f_coefficient, "Positive multiple of f")->capture_default_str();
  certify->add_option("--interval", co.interval, "Interval a b")->expected(2);
  certify->add_option("--coefficient", co.coefficient, "Modulus coefficient c in Phi(d) = c d^r");
  certify->add_option("--exponent", co.exponent, "Modulus exponent r (default 2)");
  certify->add_option("--grid", co.grid, "Grid sizes X Y T (default 64 64 17)")->expected(3);
  certify->add_flag("--estimate", co.estimate, "Also estimate the largest certifiable coefficient");
  certify->add_flag("--gradient", co.gradient, "Also check the gradient form of the inequality");

  FuzzOptions fo;
  auto* fuzz = app.add_subcommand("fuzz", "Seeded randomized verification campaign");
  fuzz->add_option("--seed", fo.seed, "Campaign seed")->capture_default_str();
  fuzz->add_option("--trials", fo.trials, "Trials per weight mode")->capture_default_str();
  fuzz->add_option("--theorems", fo.theorems, "Comma-separated tags, e.g. thm1,thm7-lower,eq32 or all")
      ->capture_default_str();
  fuzz->add_option("--mode", fo.mode, "Weight mode")
      ->check(CLI::IsMember({"nonneg", "signed", "positive", "all"}))
      ->capture_default_str();
  fuzz->add_option("--threads", fo.threads, "Worker threads (0 = hardware)")->capture_default_str();
  fuzz->add_option("--n-min", fo.n_min, "Smallest n")->capture_default_str();
  fuzz->add_option("--n-max", fo.n_max, "Largest n")->capture_default_str();
  fuzz->add_option("--witness-trials", fo.witness_trials, "Equality-case instances (0 to skip)")
      ->capture_default_str();

  auto* compare = app.add_subcommand("compare", "Rank the lower refinements of J(p) on one instance");
  compare->add_option("file", file, "Instance file")->required();
  compare->add_flag("--no-certify", no_certify, "Trust (f, phi) without the grid certification");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kVerified : kInvalid;
  }

  std::string command;
  try {
    if (eval->parsed()) return cmd_eval(file, g, out);
    if (bounds->parsed()) return cmd_bounds(file, theorem, g, out);
    if (refine->parsed()) return cmd_refine(file, theorem, no_certify, g, out);
    if (certify->parsed()) return cmd_certify(co, g, out);
    if (fuzz->parsed()) return cmd_fuzz(fo, g, out);
    if (compare->parsed()) return cmd_compare(file, no_certify, g, out);
  } catch (const std::exception& e) {
    const char* kind = dynamic_cast<const PreconditionError*>(&e) ? "inadmissible" : "invalid input";
    err << "jensen: " << kind << ": " << e.what() << "\n";
    if (g.format == "json") {
      Json doc;
      doc["tool"] = "jensen";
      doc["version"] = kVersion;
      doc["verdict"] = "inadmissible";
      doc["error"] = e.what();
      write_json(out, doc);
    }
    return kInvalid;
  }
  return kInvalid;
}

}  // namespace jensen::cli
