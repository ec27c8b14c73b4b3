#include "primfield/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "primfield/constructions.hpp"
#include "primfield/counting.hpp"
#include "primfield/error.hpp"
#include "primfield/irreducible.hpp"
#include "primfield/primitive.hpp"

namespace primfield::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";

struct Config {
  std::uint64_t q = 2;
  std::string out;
  std::string format;
  int precision_bits = 128;
  std::uint64_t sieve_entries = std::uint64_t{1} << 27;
  std::uint64_t max_terms = std::uint64_t{1} << 24;
  double seconds = 0;
  std::uint64_t exact_bits = kDefaultExactBitBudget;
  std::string manifest;
  std::optional<std::uint64_t> seed;

  mpfr_prec_t precision() const { return static_cast<mpfr_prec_t>(precision_bits); }
  Deadline deadline() const { return seconds > 0 ? Deadline::after(std::chrono::duration<double>(seconds)) : Deadline{}; }
};

// Exit code plus the text destined for --out / stdout.
struct Outcome {
  int code = kExitOk;
  std::string text;
};

Json bracket(const Interval& v) { return Json{{"lo", v.lo_string()}, {"hi", v.hi_string()}}; }

Json rational(const Rational& r, bool with_exact = true) {
  const Interval v = Interval::from_rational(r);
  Json j;
  if (with_exact) j["exact"] = r.get_str();
  j["lo"] = v.lo_string();
  j["hi"] = v.hi_string();
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

PrimitiveSetHorizon load_set(const std::string& path, std::uint64_t q_flag, bool q_given) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open set file '" + path + "'");
  PrimitiveSetHorizon s = read_set(in);
  if (q_given && s.q() != q_flag) throw FieldMismatch();
  return s;
}

std::string set_text(const PrimitiveSetHorizon& s) {
  std::ostringstream o;
  write_set(o, s);
  return o.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot write '" + path + "'");
  f << text;
}

bool wants_csv(const Config& cfg, bool csv_default) {
  if (cfg.format.empty()) return csv_default;
  return cfg.format == "csv";
}

void json_only(const Config& cfg) {
  if (cfg.format == "csv") throw ParseError("this command only writes JSON");
}

std::vector<std::string> strip_manifest(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--manifest") {
      ++i;
      continue;
    }
    if (args[i].rfind("--manifest=", 0) == 0) continue;
    out.push_back(args[i]);
  }
  return out;
}

Json manifest_of(const Config& cfg, const std::vector<std::string>& command, const std::vector<std::string>& args) {
  Json m;
  m["tool"] = "primfield";
  m["version"] = kVersion;
  m["command"] = command;
  m["args"] = strip_manifest(args);
  m["q"] = cfg.q;
  m["format"] = cfg.format.empty() ? Json(nullptr) : Json(cfg.format);
  m["precision_bits"] = cfg.precision_bits;
  m["budgets"] = {{"sieve_entries", cfg.sieve_entries},
                  {"terms", cfg.max_terms},
                  {"seconds", cfg.seconds},
                  {"exact_bits", cfg.exact_bits}};
  m["seed"] = cfg.seed ? Json(*cfg.seed) : Json(nullptr);
  return m;
}

bool is_generator(const std::vector<std::string>& command) {
  return command.size() == 2 && command[0] == "set" && command[1] == "random";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Primitive sets and factor statistics over F_q[x]", "primfield"};
  app.require_subcommand(1);
  Config cfg;
  app.add_option("--q", cfg.q, "field size (prime for explicit arithmetic)")->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1} << 32));
  app.add_option("--out", cfg.out, "write results to this file instead of stdout");
  app.add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--precision-bits", cfg.precision_bits, "MPFR working precision")->check(CLI::Range(64, 65536));
  app.add_option("--budget-sieve", cfg.sieve_entries, "max sieve / enumeration entries")->check(CLI::PositiveNumber);
  app.add_option("--budget-terms", cfg.max_terms, "max t-sequence terms")->check(CLI::PositiveNumber);
  app.add_option("--budget-seconds", cfg.seconds, "soft wall-clock cap, 0 for none")->check(CLI::NonNegativeNumber);
  app.add_option("--budget-bits", cfg.exact_bits, "max bits of an exact Mertens rational")->check(CLI::PositiveNumber);
  app.add_option("--manifest", cfg.manifest, "write a replay manifest for this run");
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "seed for randomized generators");

  std::vector<std::string> command;
  std::function<Outcome()> action;
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help) {
    CLI::App* sub = parent->add_subcommand(name, help);
    sub->fallthrough();
    return sub;
  };
  auto group = [&](const std::string& name, const std::string& help) {
    CLI::App* g = app.add_subcommand(name, help);
    g->fallthrough();
    g->require_subcommand(1);
    return g;
  };
  auto bind = [&](CLI::App* sub, std::vector<std::string> path, std::function<Outcome()> fn) {
    sub->callback([&command, &action, path = std::move(path), fn = std::move(fn)] {
      command = path;
      action = fn;
    });
  };

  // irr
  CLI::App* irr = group("irr", "irreducible counts and ordering");
  int max_n = 0;
  std::string k_text;
  std::uint64_t k_min = 1000;
  std::uint64_t k_max = 1000000;
  double slack = 0.5;
  {
    CLI::App* c = leaf(irr, "count", "pi'_q(n) and pi_q(n) for n <= max-n");
    c->add_option("--max-n", max_n)->required()->check(CLI::Range(1, 100000));
    bind(c, {"irr", "count"}, [&] {
      Outcome o;
      const bool csv = wants_csv(cfg, true);
      Json rows = Json::array();
      std::ostringstream s;
      if (csv) s << "n,pi_prime,pi_cumulative\n";
      Integer cumulative = 0;
      for (int n = 1; n <= max_n; ++n) {
        const Integer p = pi_prime(cfg.q, n);
        cumulative += p;
        if (csv) {
          s << n << ',' << p.get_str() << ',' << cumulative.get_str() << '\n';
        } else {
          rows.push_back({{"n", n}, {"pi_prime", p.get_str()}, {"pi_cumulative", cumulative.get_str()}});
        }
      }
      o.text = csv ? s.str() : dump(Json{{"q", cfg.q}, {"rows", rows}});
      return o;
    });

    CLI::App* kth = leaf(irr, "kth", "the k-th irreducible in (degree, index) order");
    kth->add_option("--k", k_text)->required();
    bind(kth, {"irr", "kth"}, [&] {
      Outcome o;
      Integer k;
      if (k.set_str(k_text, 10) != 0 || k < 1) throw ParseError("--k needs a positive integer");
      const MonicPoly p = kth_irreducible(require_prime(cfg.q), k);
      if (cfg.format == "json") {
        o.text = dump(Json{{"q", cfg.q}, {"k", k.get_str()}, {"degree", p.degree()}, {"index", p.index()},
                           {"poly", p.to_text()}});
      } else {
        o.text = p.to_text() + "\n";
      }
      return o;
    });

    CLI::App* br = leaf(irr, "brackets", "check the two-sided degree bracket for the k-th irreducible");
    br->add_option("--kmin", k_min)->check(CLI::PositiveNumber);
    br->add_option("--kmax", k_max)->check(CLI::PositiveNumber);
    br->add_option("--slack", slack)->check(CLI::NonNegativeNumber);
    bind(br, {"irr", "brackets"}, [&] {
      json_only(cfg);
      if (k_min > k_max) throw ParseError("--kmin exceeds --kmax");
      const DegreeBracketReport r = check_degree_brackets(cfg.q, k_min, k_max, slack);
      Outcome o;
      o.text = dump(Json{{"q", cfg.q},
                         {"k_min", r.k_min},
                         {"k_max", r.k_max},
                         {"slack", r.slack},
                         {"violations", r.violations()},
                         {"lower_violations", r.lower_violations},
                         {"upper_violations", r.upper_violations},
                         {"worst_lower_margin", {{"value", r.worst_lower_margin}, {"k", r.worst_lower_k}}},
                         {"worst_upper_margin", {{"value", r.worst_upper_margin}, {"k", r.worst_upper_k}}},
                         {"empirical_threshold", r.empirical_threshold}});
      o.code = r.violations() == 0 ? kExitOk : kExitViolation;
      return o;
    });
  }

  // count
  CLI::App* count = group("count", "squarefree counts by number of factors");
  {
    CLI::App* t = leaf(count, "table", "exact table of Pi'_{q,k}(n)");
    t->add_option("--max-n", max_n)->required()->check(CLI::Range(1, 5000));
    bind(t, {"count", "table"}, [&] {
      const CountTable table = build_count_table(cfg.q, max_n, cfg.deadline());
      Outcome o;
      const bool csv = wants_csv(cfg, true);
      std::ostringstream s;
      Json rows = Json::array();
      if (csv) s << "n,k,count\n";
      for (int n = 0; n <= table.complete_through(); ++n) {
        for (int k = 0; k <= n; ++k) {
          if (csv) {
            s << n << ',' << k << ',' << table.at(n, k).get_str() << '\n';
          } else {
            rows.push_back({n, k, table.at(n, k).get_str()});
          }
        }
      }
      o.text = csv ? s.str()
                   : dump(Json{{"q", cfg.q}, {"max_n", max_n}, {"complete_through", table.complete_through()},
                               {"complete", table.complete()}, {"rows", rows}});
      if (!table.complete()) {
        err << "time budget reached; rows complete through n = " << table.complete_through() << "\n";
        o.code = kExitUsage;
      }
      return o;
    });
  }

  // verify
  CLI::App* verify = group("verify", "check inequalities exactly or with outward-rounded brackets");
  double x = 10;
  double alpha = 0.5;
  double beta = 1.5;
  std::string in_path;
  {
    CLI::App* hr = leaf(verify, "hr", "Hardy-Ramanujan bound for all 1 <= k <= n <= max-n");
    hr->add_option("--max-n", max_n)->required()->check(CLI::Range(1, 2000));
    bind(hr, {"verify", "hr"}, [&] {
      json_only(cfg);
      const Deadline deadline = cfg.deadline();
      const CountTable table = build_count_table(cfg.q, max_n, deadline);
      const HardyRamanujanReport r = verify_hr_bound(table, cfg.precision(), deadline);
      Json violations = Json::array();
      for (const auto& c : r.violations) violations.push_back({{"n", c.n}, {"k", c.k}, {"count", table.at(c.n, c.k).get_str()}});
      Json inconclusive = Json::array();
      for (const auto& c : r.inconclusive) inconclusive.push_back({{"n", c.n}, {"k", c.k}});
      Outcome o;
      o.text = dump(Json{{"q", cfg.q},
                         {"max_n", max_n},
                         {"checked", r.checked},
                         {"complete", r.complete && table.complete()},
                         {"violations", violations},
                         {"inconclusive", inconclusive},
                         {"max_ratio_approx", r.max_ratio},
                         {"max_ratio_cell", {{"n", r.max_ratio_cell.n}, {"k", r.max_ratio_cell.k}}}});
      if (!r.violations.empty()) {
        o.code = kExitViolation;
      } else if (!r.inconclusive.empty() || !r.complete || !table.complete()) {
        err << "not every cell was decided\n";
        o.code = kExitUsage;
      }
      return o;
    });

    CLI::App* rec = leaf(verify, "recurrence", "(k-1) Pi'_k(n) <= sum_{d<=n/2} pi'(d) Pi'_{k-1}(n-d)");
    rec->add_option("--max-n", max_n)->required()->check(CLI::Range(2, 2000));
    bind(rec, {"verify", "recurrence"}, [&] {
      json_only(cfg);
      const Deadline deadline = cfg.deadline();
      const CountTable table = build_count_table(cfg.q, max_n, deadline);
      const RecurrenceReport r = verify_recurrence_bound(table, deadline);
      Json violations = Json::array();
      for (const auto& v : r.violations) {
        violations.push_back({{"n", v.n}, {"k", v.k}, {"lhs", v.lhs.get_str()}, {"rhs", v.rhs.get_str()}});
      }
      Outcome o;
      o.text = dump(Json{{"q", cfg.q}, {"max_n", max_n}, {"checked", r.checked},
                         {"complete", r.complete && table.complete()}, {"violations", violations}});
      if (!r.violations.empty()) {
        o.code = kExitViolation;
      } else if (!r.complete || !table.complete()) {
        err << "time budget reached before every cell was checked\n";
        o.code = kExitUsage;
      }
      return o;
    });

    CLI::App* norton = leaf(verify, "norton", "Poisson tail inequalities at one x");
    norton->add_option("--x", x)->check(CLI::PositiveNumber);
    norton->add_option("--alpha", alpha)->check(CLI::Range(0.0, 1.0));
    norton->add_option("--beta", beta)->check(CLI::PositiveNumber);
    bind(norton, {"verify", "norton"}, [&] {
      json_only(cfg);
      const NortonCheck c = norton_check(x, alpha, beta, cfg.precision());
      Outcome o;
      o.text = dump(Json{{"x", x},
                         {"alpha", alpha},
                         {"beta", beta},
                         {"lower_tail", {{"lhs", bracket(c.low_lhs)}, {"rhs", bracket(c.low_rhs)}, {"holds", c.low_holds}}},
                         {"upper_tail",
                          {{"lhs", bracket(c.high_lhs)},
                           {"rhs", bracket(c.high_rhs)},
                           {"holds", c.high_holds},
                           {"rhs_with_beta", bracket(c.high_rhs_with_beta)},
                           {"holds_with_beta", c.high_holds_with_beta}}}});
      o.code = c.low_holds && c.high_holds ? kExitOk : kExitViolation;
      return o;
    });

    CLI::App* density = leaf(verify, "erdos-density", "sum of multiple densities of a primitive set is <= 1");
    density->add_option("--in", in_path)->required();
    bind(density, {"verify", "erdos-density"}, [&] {
      json_only(cfg);
      const PrimitiveSetHorizon s = load_set(in_path, cfg.q, app.count("--q") > 0);
      const FactorSieve sieve(s.q(), std::max(1, s.max_element_degree()), cfg.sieve_entries);
      const ErdosDensityReport r = verify_erdos_density_inequality(s, sieve);
      Json j{{"q", s.q()}, {"size", s.size()}, {"primitive", r.primitive}};
      if (r.counterexample) {
        j["counterexample"] = {r.counterexample->first.to_text(), r.counterexample->second.to_text()};
      } else {
        j["lhs"] = rational(r.lhs);
      }
      j["holds"] = r.holds;
      Outcome o;
      o.text = dump(j);
      o.code = r.primitive && r.holds ? kExitOk : kExitViolation;
      return o;
    });
  }

  // eval
  CLI::App* eval = group("eval", "certified brackets for constants");
  double z = 0;
  double eps = 1e-6;
  int n_value = 10;
  bool envelope = false;
  {
    CLI::App* g = leaf(eval, "g", "G(z) for 0 <= z <= 2");
    g->add_option("--z", z)->required();
    g->add_option("--eps", eps)->check(CLI::PositiveNumber);
    bind(g, {"eval", "g"}, [&] {
      json_only(cfg);
      const GEvaluation r = evaluate_G(cfg.q, z, eps, cfg.precision());
      Outcome o;
      o.text = dump(Json{{"q", cfg.q}, {"z", z}, {"eps", eps}, {"lo", r.value.lo_string()}, {"hi", r.value.hi_string()},
                         {"truncation_degree", r.truncation_degree}});
      return o;
    });

    CLI::App* m = leaf(eval, "mertens", "prod over deg p <= n of (1 - q^-deg p)");
    m->add_option("--n", n_value)->required()->check(CLI::Range(1, 100000));
    m->add_flag("--envelope", envelope, "also report min over n' <= n of e^gamma n' P(n') and e^gamma / min");
    bind(m, {"eval", "mertens"}, [&] {
      json_only(cfg);
      const MertensResult r = mertens_product(cfg.q, n_value, cfg.precision(), cfg.exact_bits);
      Json j{{"q", cfg.q},
             {"n", n_value},
             {"lo", r.product.lo_string()},
             {"hi", r.product.hi_string()},
             {"normalized", bracket(r.normalized)},
             {"exact", r.exact ? Json(r.exact->get_str()) : Json(nullptr)}};
      if (envelope) {
        const MertensEnvelope e = mertens_envelope(cfg.q, n_value, cfg.precision());
        j["envelope"] = {{"argmin", e.argmin},
                         {"min_normalized", bracket(e.min_normalized)},
                         {"empirical_constant", bracket(e.constant)},
                         {"scope", "n <= " + std::to_string(n_value)}};
      }
      Outcome o;
      o.text = dump(j);
      return o;
    });

    CLI::App* e = leaf(eval, "erdos-irr", "Erdos sum over the irreducibles, bracketed");
    e->add_option("--eps", eps)->check(CLI::PositiveNumber);
    bind(e, {"eval", "erdos-irr"}, [&] {
      json_only(cfg);
      const ErdosIrreducibleBracket r = erdos_sum_irreducibles(cfg.q, eps);
      const Interval lo = Interval::from_rational(r.bracket.lo);
      const Interval hi = Interval::from_rational(r.bracket.hi);
      Outcome o;
      o.text = dump(Json{{"q", cfg.q},
                         {"eps", eps},
                         {"truncation", r.truncation},
                         {"lo", lo.lo_string()},
                         {"hi", hi.hi_string()},
                         {"width", r.bracket.width().get_str()},
                         {"nested", true}});
      return o;
    });
  }

  // set
  CLI::App* set = group("set", "inspect or generate primitive sets");
  int up_to = -1;
  int tail_start = -1;
  int horizon = 0;
  double rate = 0.1;
  {
    CLI::App* check = leaf(set, "check", "certify primitivity");
    check->add_option("--in", in_path)->required();
    bind(check, {"set", "check"}, [&] {
      json_only(cfg);
      const PrimitiveSetHorizon s = load_set(in_path, cfg.q, app.count("--q") > 0);
      const PrimitivityCertificate& c = s.certificate();
      Json j{{"q", s.q()}, {"horizon", s.horizon()}, {"size", s.size()}, {"primitive", c.primitive}};
      j["counterexample"] = c.counterexample
                                ? Json::array({c.counterexample->first.to_text(), c.counterexample->second.to_text()})
                                : Json(nullptr);
      j["multiples_probed"] = c.multiples_probed;
      j["divisions_tested"] = c.divisions_tested;
      Outcome o;
      o.text = dump(j);
      o.code = c.primitive ? kExitOk : kExitViolation;
      return o;
    });

    CLI::App* sum = leaf(set, "erdos-sum", "sum of 1/(q^deg a deg a)");
    sum->add_option("--in", in_path)->required();
    bind(sum, {"set", "erdos-sum"}, [&] {
      json_only(cfg);
      const PrimitiveSetHorizon s = load_set(in_path, cfg.q, app.count("--q") > 0);
      Outcome o;
      o.text = dump(Json{{"q", s.q()}, {"size", s.size()}, {"erdos_sum", rational(erdos_sum(s))}});
      return o;
    });

    CLI::App* dens = leaf(set, "density", "A(n)/M_q(n) profile");
    dens->add_option("--in", in_path)->required();
    dens->add_option("--up-to", up_to);
    dens->add_option("--tail-start", tail_start);
    bind(dens, {"set", "density"}, [&] {
      const PrimitiveSetHorizon s = load_set(in_path, cfg.q, app.count("--q") > 0);
      const int top = up_to < 0 ? s.horizon() : up_to;
      const DensityProfile p =
          density_profile(s, top, tail_start < 0 ? std::nullopt : std::optional<int>(tail_start));
      Outcome o;
      if (wants_csv(cfg, false)) {
        std::ostringstream c;
        c << "n,A,M,ratio\n";
        for (int n = 0; n <= top; ++n) {
          c << n << ',' << s.count_up_to(n) << ',' << monic_count(s.q(), n).up_to_degree.get_str() << ','
            << p.ratio[static_cast<std::size_t>(n)].get_str() << '\n';
        }
        o.text = c.str();
      } else {
        Json rows = Json::array();
        for (int n = 0; n <= top; ++n) {
          rows.push_back({{"n", n},
                          {"A", s.count_up_to(n)},
                          {"ratio", p.ratio[static_cast<std::size_t>(n)].get_str()},
                          {"running_max", p.running_max[static_cast<std::size_t>(n)].get_str()}});
        }
        o.text = dump(Json{{"q", s.q()}, {"up_to", top}, {"rows", rows}, {"tail_start", p.tail_start},
                           {"tail_min", p.tail_min.get_str()}});
      }
      return o;
    });

    CLI::App* random = leaf(set, "random", "seeded greedy divisor-free sample");
    random->add_option("--horizon", horizon)->required()->check(CLI::Range(1, 40));
    random->add_option("--rate", rate)->check(CLI::Range(0.0, 1.0));
    bind(random, {"set", "random"}, [&] {
      if (!cfg.seed) throw ParseError("generator commands need --seed (or a manifest carrying one)");
      const FactorSieve sieve(require_prime(cfg.q), horizon, cfg.sieve_entries);
      const PrimitiveSetHorizon s = random_primitive_set(sieve.q(), horizon, *cfg.seed, rate, sieve);
      Outcome o;
      o.text = set_text(s);
      return o;
    });
  }

  // construct
  CLI::App* construct = group("construct", "explicit primitive-set constructions");
  std::string report_path;
  std::string growth = "powlog:eps=0.1";
  bool count_only = false;
  {
    CLI::App* bes = leaf(construct, "besicovitch", "levels of whole degrees minus earlier multiples");
    bes->add_option("--eps", eps)->required();
    bes->add_option("--horizon", horizon)->required()->check(CLI::Range(1, 30));
    bes->add_option("--report", report_path, "JSON report file");
    bind(bes, {"construct", "besicovitch"}, [&] {
      const BesicovitchResult r = besicovitch_construct(require_prime(cfg.q), eps, horizon, cfg.sieve_entries);
      const PrimitivityCertificate& cert = r.set.certificate();
      const FactorSieve sieve(r.q, horizon, cfg.sieve_entries);
      const ErdosDensityReport density = verify_erdos_density_inequality(r.set, sieve);
      Json levels = Json::array();
      for (const auto& l : r.levels) {
        Json lj{{"degree", l.degree},
                {"members", l.members},
                {"own_multiples_max", rational(l.own_multiples_max)},
                {"own_threshold", l.own_threshold.get_str()}};
        if (l.previous_multiples_max) {
          lj["previous_multiples_max"] = rational(*l.previous_multiples_max);
          lj["previous_threshold"] = l.previous_threshold->get_str();
        }
        lj["density_ratio"] = rational(l.density_ratio);
        lj["ratio_ok"] = l.ratio_ok;
        levels.push_back(lj);
      }
      const Json report{{"q", r.q},
                        {"epsilon", r.epsilon},
                        {"horizon", r.horizon},
                        {"certificate_scope", BesicovitchResult::certificate_scope},
                        {"levels", levels},
                        {"size", r.set.size()},
                        {"primitive", cert.primitive},
                        {"erdos_density", {{"lhs", rational(density.lhs)}, {"holds", density.holds}}}};
      if (!report_path.empty()) write_file(report_path, dump(report));
      Outcome o;
      o.text = set_text(r.set);
      o.code = cert.primitive && r.ratios_ok() && density.holds ? kExitOk : kExitViolation;
      return o;
    });

    CLI::App* mp = leaf(construct, "mp", "S = union of slices S_k pinned to t_k");
    mp->add_option("--L", growth, "growth function, e.g. powlog:eps=0.1 or iterlog:j=2,eps=0.1");
    mp->add_option("--horizon", horizon)->required()->check(CLI::Range(2, 62));
    mp->add_option("--report", report_path, "JSON report file");
    mp->add_flag("--count-only", count_only, "exact slice counts from the counting table; no explicit set");
    bind(mp, {"construct", "mp"}, [&] {
      const GrowthFunction L = GrowthFunction::parse(growth);
      TSequenceBudget budget;
      budget.max_terms = cfg.max_terms;
      budget.deadline = cfg.deadline();
      Json report{{"q", cfg.q}, {"L", L.to_string()}, {"horizon", horizon}};
      Outcome o;
      std::optional<MpConstruction> built;
      TSequence seq;
      if (count_only) {
        seq = build_t_sequence(cfg.q, L, 0, budget);
      } else {
        built = mp_construct(cfg.q, L, horizon, cfg.sieve_entries, budget);
        seq = built->sequence;
      }
      const auto counts = mp_counts_exact(seq, horizon);
      const MpDiagnostics diag = mp_diagnostics(seq, counts, horizon, cfg.precision());

      Json terms = Json::array();
      const std::uint64_t slices = counts.empty() ? 0 : counts.size() - 1;
      for (std::uint64_t k = 1; k <= std::max<std::uint64_t>(slices, 1); ++k) {
        const TTerm t = seq.term(k);
        Json tj{{"k", k}, {"rank", t.index}, {"degree", t.degree}};
        if (built && k <= built->t.size()) tj["poly"] = built->t[k - 1].to_text();
        terms.push_back(tj);
      }
      report["k0"] = seq.k0;
      report["certified_k0"] = built ? built->certified_k0 : seq.k0;
      report["y0"] = seq.y0;
      report["computed_through"] = seq.computed_through;
      report["partial_sum"] = rational(seq.partial_sum);
      report["tail_bound"] = rational(seq.tail_bound);
      report["certificate_holds"] = seq.certified();
      report["t_sequence"] = terms;
      Json s_prime = Json::array();
      for (int n = 1; n <= horizon; ++n) {
        Integer total = 0;
        Json per = Json::object();
        for (std::uint64_t k = 1; k <= slices; ++k) {
          const Integer& c = counts[k][static_cast<std::size_t>(n)];
          if (c != 0) per[std::to_string(k)] = c.get_str();
          total += c;
        }
        s_prime.push_back({{"n", n}, {"total", total.get_str()}, {"by_slice", per}});
      }
      report["S_prime_counts"] = s_prime;
      Json r_values = Json::array();
      for (const auto& row : diag.rows) {
        r_values.push_back({{"n", row.n},
                            {"R", bracket(row.r)},
                            {"B", row.b},
                            {"B_prime", row.b_prime},
                            {"ratio_B", row.ratio_b.get_str()},
                            {"ratio_B_prime", row.ratio_b_prime.get_str()}});
      }
      report["R_values"] = r_values;
      Json band = Json::object();
      if (diag.band_b) band["B"] = {{"min", rational(diag.band_b->lo)}, {"max", rational(diag.band_b->hi)}};
      if (diag.band_b_prime) {
        band["B_prime"] = {{"min", rational(diag.band_b_prime->lo)}, {"max", rational(diag.band_b_prime->hi)}};
      }
      report["sandwich_band"] = band;
      Json slice_rows = Json::array();
      for (const auto& sr : diag.slices) {
        slice_rows.push_back({{"n", sr.n},
                              {"k", sr.k},
                              {"count", sr.count.get_str()},
                              {"ratio_to_main_term", bracket(sr.ratio)},
                              {"spread", bracket(sr.spread)}});
      }
      report["slice_targets"] = slice_rows;
      report["spread_exceeded"] = diag.spread_exceeded;

      bool ok = seq.certified();
      if (built) {
        const PrimitivityCertificate& cert = built->set.certificate();
        const SliceCheck check = verify_mp_slices(*built);
        const ErdosDensityReport density = erdos_density_lhs(built->set.q(), mp_density_terms(*built));
        report["size"] = built->set.size();
        report["cofactor_degree"] = built->cofactor_degree;
        report["primitive"] = cert.primitive;
        if (cert.counterexample) {
          report["counterexample"] = {cert.counterexample->first.to_text(), cert.counterexample->second.to_text()};
        }
        report["slices_verified"] = check.ok();
        report["slice_failures"] = check.failures.size();
        report["erdos_density"] = {{"lhs", rational(density.lhs)}, {"holds", density.holds}};
        ok = ok && cert.primitive && check.ok() && density.holds;
      }
      if (built) {
        o.text = set_text(built->set);
        if (!report_path.empty()) write_file(report_path, dump(report));
      } else {
        o.text = dump(report);
        if (!report_path.empty()) write_file(report_path, o.text);
      }
      o.code = ok ? kExitOk : kExitViolation;
      return o;
    });
  }

  // replay
  std::string replay_path;
  std::string replay_out;
  CLI::App* replay = app.add_subcommand("replay", "rerun the command recorded in a manifest");
  replay->add_option("manifest", replay_path)->required();
  replay->add_option("--to", replay_out, "write results here instead of the recorded --out");
  bool replaying = false;
  replay->callback([&] { replaying = true; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (seed_opt->count() > 0) cfg.seed = seed_value;

  if (replaying) {
    try {
      std::ifstream in(replay_path);
      if (!in) throw ParseError("cannot open manifest '" + replay_path + "'");
      const Json m = Json::parse(in);
      const auto recorded = m.at("command").get<std::vector<std::string>>();
      if (is_generator(recorded) && m.at("seed").is_null()) {
        throw ParseError("manifest has no seed; generator commands refuse to run");
      }
      if (m.value("version", "") != kVersion) err << "note: manifest written by version " << m.value("version", "?") << "\n";
      std::vector<std::string> rerun = m.at("args").get<std::vector<std::string>>();
      if (!replay_out.empty()) {
        std::vector<std::string> adjusted;
        for (std::size_t i = 0; i < rerun.size(); ++i) {
          if (rerun[i] == "--out") {
            ++i;
            continue;
          }
          if (rerun[i].rfind("--out=", 0) == 0) continue;
          adjusted.push_back(rerun[i]);
        }
        adjusted.push_back("--out");
        adjusted.push_back(replay_out);
        rerun = std::move(adjusted);
      }
      return run(rerun, out, err);
    } catch (const nlohmann::json::exception& e) {
      err << "malformed manifest: " << e.what() << "\n";
      return kExitUsage;
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      return kExitUsage;
    }
  }

  try {
    if (!cfg.manifest.empty()) write_file(cfg.manifest, dump(manifest_of(cfg, command, args)));
    const Outcome o = action();
    if (cfg.out.empty()) {
      out << o.text;
    } else {
      write_file(cfg.out, o.text);
    }
    if (o.code == kExitViolation) err << "verification failed\n";
    return o.code;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::bad_alloc&) {
    err << "error: out of memory; lower the problem size or the budgets\n";
    return kExitUsage;
  }
}

}  // namespace primfield::cli
