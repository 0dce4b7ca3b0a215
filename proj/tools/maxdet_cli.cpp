// maxdet: sieve, gaps, resolve, bound, search, verify, lemmas, oracle, table1.
// JSON reports go to stdout (or --out), progress to stderr.

#include "maxdet/maxdet.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

using namespace maxdet;

namespace {

struct Options {
  std::uint64_t max = 65536;
  std::size_t trials = 256;
  std::uint64_t seed = 0;
  std::string method = "auto";
  bool slow = false;
  std::string out;
  std::string cache;
  bool no_cache = false;
  std::string format = "json";
};

// Successors of members near --max must be known for gap queries.
constexpr std::uint64_t headroom = 4096;

OrderSet load_orders(const Options& o) {
  const std::uint64_t limit = o.max + headroom;
  if (!o.cache.empty() && !o.no_cache && std::filesystem::exists(o.cache)) {
    try {
      OrderSet s = load_sieve_cache(o.cache);
      if (s.limit() >= limit) {
        std::clog << "sieve: loaded " << o.cache << " (limit " << s.limit() << ")\n";
        return s;
      }
      std::clog << "sieve: cache limit " << s.limit() << " too small, rebuilding\n";
    } catch (const std::exception& e) {
      std::clog << "sieve: ignoring cache: " << e.what() << "\n";
    }
  }
  OrderSet s = build_order_set(limit, RuleSet::defaults(), true);
  std::clog << "sieve: built " << s.size() << " orders up to " << limit << "\n";
  if (!o.cache.empty() && !o.no_cache) {
    save_sieve_cache(o.cache, s);
    std::clog << "sieve: wrote " << o.cache << "\n";
  }
  return s;
}

json rule_set_json(RuleSet r) {
  json a = json::array();
  for (Rule x : all_rules)
    if (r.has(x))
      a.push_back(rule_name(x));
  return a;
}

json header(const Options& o, std::uint64_t sieve_limit) {
  return json{{"version", version_string()},
              {"master_seed", o.seed},
              {"sieve_limit", sieve_limit},
              {"rule_set", rule_set_json(RuleSet::defaults())}};
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out);
  if (!(f << text))
    throw std::runtime_error("cannot write " + o.out);
  std::clog << "wrote " << o.out << "\n";
}

void emit(const Options& o, const json& j) { emit(o, j.dump(2) + "\n"); }

SearchConfig search_config(const Options& o) {
  SearchConfig cfg;
  cfg.trials = o.trials;
  cfg.master_seed = o.seed;
  return cfg;
}

std::optional<Recipe> plan_with_base(std::size_t h, Recipe::Base base) {
  for (unsigned j = 0; (h >> j) >= 2 && ((h >> j) << j) == h; ++j) {
    const std::size_t b = h >> j;
    if (base == Recipe::Base::paley1 && b >= 4 && (b - 1) % 4 == 3 && is_prime(b - 1))
      return Recipe{base, b - 1, j};
    if (base == Recipe::Base::paley2 && b % 2 == 0 && b / 2 >= 6 && (b / 2 - 1) % 4 == 1 && is_prime(b / 2 - 1))
      return Recipe{base, b / 2 - 1, j};
  }
  return std::nullopt;
}

std::size_t nearest_with_base(std::size_t h, Recipe::Base base) {
  for (std::size_t x = h; x-- > 1;)
    if (plan_with_base(x, base))
      return x;
  return 0;
}

/// Core recipe for n resolved to (h, d). Conference cores of order p + 1 <= n
/// are used when asked for, giving a border of width n - p - 1.
Recipe choose_recipe(const Resolution& r, const std::string& method) {
  if (method == "conference") {
    const auto c = plan_conference_at_most(r.n);
    if (!c)
      throw std::runtime_error("no conference matrix of order <= " + std::to_string(r.n));
    return *c;
  }
  if (method == "auto") {
    if (auto p = plan_hadamard(r.h))
      return *p;
    throw std::runtime_error("no Paley/Sylvester recipe realizes h = " + std::to_string(r.h) +
                             "; nearest realizable order is " + std::to_string(nearest_planned_below(r.h)) +
                             " (or use --method conference)");
  }
  const auto base = method == "paley1" ? Recipe::Base::paley1 : Recipe::Base::paley2;
  if (auto p = plan_with_base(r.h, base))
    return *p;
  throw std::runtime_error("no " + method + " recipe realizes h = " + std::to_string(r.h) +
                           "; nearest realizable order is " + std::to_string(nearest_with_base(r.h, base)));
}

json trial_json(const TrialResult& t) {
  return json{{"recipe", t.recipe},
              {"core_order", t.m},
              {"weight", t.k},
              {"width", t.d()},
              {"trial_index", t.trial_index},
              {"det_N", t.border.det_N.get_str()},
              {"ratio_log", t.ratio.sign == 0 ? json(nullptr) : json(t.ratio.log_abs)},
              {"ratio_decimal", decimal_string(t.ratio)}};
}

TrialResult run_search(const Options& o, const OrderSet& set, std::uint64_t n, Resolution& res, std::string& recipe) {
  res = resolve(n, set);
  const Recipe r = choose_recipe(res, o.method);
  recipe = r.str();
  const auto q = r.build();
  const std::size_t width = n - q.order();
  std::clog << "search: n = " << n << ", h = " << res.h << ", d = " << res.d << ", core " << recipe << ", width "
            << width << ", " << o.trials << " trials\n";
  return search(q, width, search_config(o));
}

int cmd_sieve(const Options& o, bool list) {
  const OrderSet set = load_orders(o);
  json j = header(o, set.limit());
  std::vector<std::uint64_t> members;
  for (auto x = set.next(0); x && *x <= o.max; x = set.next(*x))
    members.push_back(*x);
  j["max"] = o.max;
  j["count"] = members.size();
  j["largest"] = members.empty() ? 0 : members.back();
  const auto v = exceptional_orders(set, o.max);
  j["exceptional_orders"] = {{"count", v.size()}, {"largest", v.empty() ? json(nullptr) : json(v.back())}};
  if (list)
    j["orders"] = members;
  emit(o, j);
  return 0;
}

int cmd_gaps(const Options& o, const std::vector<std::uint64_t>& xs) {
  const OrderSet set = load_orders(o);
  json j = header(o, set.limit());
  json rows = json::array();
  for (auto x : xs.empty() ? std::vector<std::uint64_t>{o.max} : xs) {
    if (x > o.max)
      throw std::out_of_range("x = " + std::to_string(x) + " exceeds --max");
    const auto g = gap_function(x, set);
    rows.push_back({{"x", x}, {"gamma", g.gamma}, {"witness", {g.lower, g.upper}}});
  }
  j["gaps"] = rows;
  emit(o, j);
  return 0;
}

int cmd_resolve(const Options& o, const std::vector<std::uint64_t>& ns) {
  const OrderSet set = load_orders(o);
  json j = header(o, set.limit());
  json rows = json::array();
  for (auto n : ns) {
    const auto r = resolve(n, set);
    json row{{"n", n}, {"h", r.h}, {"d", r.d}, {"exceptional", 6 * r.d * r.d * r.d > r.h}};
    if (r.h >= 4) {
      json chain = explain_order(r.h, set);
      row["derivation"] = chain;
    }
    rows.push_back(row);
  }
  j["resolutions"] = rows;
  emit(o, j);
  return 0;
}

int cmd_bound(const Options& o, std::uint64_t n) {
  const OrderSet set = load_orders(o);
  if (n > o.max)
    throw std::out_of_range("n exceeds --max");
  Resolution res;
  std::string recipe;
  const auto report_only = evaluate_bounds(n, resolve(n, set).h, resolve(n, set).d);
  const TrialResult best = run_search(o, set, n, res, recipe);
  if (o.format == "csv") {
    emit(o, bound_report_to_csv(report_only));
    return 0;
  }
  json j = header(o, set.limit());
  j["n"] = n;
  j["h"] = res.h;
  j["d"] = res.d;
  j["report"] = bound_report_to_json(report_only);
  j["constructive"] = trial_json(best);
  j["constructive"]["trials"] = o.trials;
  const auto formula = report_only.best_dbar();
  const bool use_witness = !formula || best.ratio > *formula;
  const LogScalar top = use_witness ? best.ratio : *formula;
  j["best_dbar"] = {{"source", use_witness ? "constructive" : "formula"},
                    {"log", top.sign == 0 ? json(nullptr) : json(top.log_abs)},
                    {"decimal", decimal_string(top)}};
  emit(o, j);
  return 0;
}

int cmd_search(const Options& o, std::uint64_t n, const std::string& recipe_text, std::size_t width,
               const std::string& witness_path) {
  TrialResult best;
  json j;
  if (!recipe_text.empty()) {
    const auto q = Recipe::parse(recipe_text).build();
    std::clog << "search: core " << recipe_text << ", width " << width << ", " << o.trials << " trials\n";
    best = search(q, width, search_config(o));
    j = header(o, 0);
  } else {
    const OrderSet set = load_orders(o);
    Resolution res;
    std::string recipe;
    best = run_search(o, set, n, res, recipe);
    j = header(o, set.limit());
    j["h"] = res.h;
    j["d"] = res.d;
  }
  j["n"] = best.n();
  j["trials"] = o.trials;
  j["best"] = trial_json(best);
  if (!witness_path.empty()) {
    std::ofstream f(witness_path);
    if (!(f << witness_to_json(Witness::from_trial(best)).dump(2) << "\n"))
      throw std::runtime_error("cannot write " + witness_path);
    std::clog << "wrote witness " << witness_path << "\n";
  }
  emit(o, j);
  return 0;
}

int cmd_verify(const Options& o, const std::string& path) {
  std::ifstream f(path);
  if (!f)
    throw std::runtime_error("cannot open " + path);
  json raw;
  try {
    raw = json::parse(f);
  } catch (const json::exception& e) {
    throw witness_corrupt(std::string("witness is not JSON: ") + e.what());
  }
  const Witness w = witness_from_json(raw);
  const LogScalar r = verify_witness(w);
  json j{{"version", version_string()},
         {"master_seed", w.master_seed},
         {"file", path},
         {"n", w.n},
         {"recipe", w.recipe},
         {"verified", true},
         {"ratio_log", r.sign == 0 ? json(nullptr) : json(r.log_abs)},
         {"ratio_decimal", decimal_string(r)},
         {"direct_check", w.n <= 64}};
  emit(o, j);
  return 0;
}

int cmd_lemmas(const Options& o, bool inject) {
  CheckReport report = check_scalar_inequalities();
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < 20000; ++t) {
    const std::size_t d = 1 + t % 6;
    const double eps = unit(rng) / d;
    std::vector<double> a(d * d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t k = 0; k < d; ++k)
        a[i * d + k] = (i == k ? 1.0 : 0.0) - (unit(rng) < 0.5 ? -eps : eps);
    report["pert_identity_minus_e"].add(check_pert_bound(a, d, eps, PertLemma::identity_minus_e));
  }
  // Equality case det(I - eps J) = 1 - d eps; the injected check drops the tolerance below zero.
  const double eps = 0.2;
  std::vector<double> tight(9);
  for (std::size_t i = 0; i < 9; ++i)
    tight[i] = (i % 4 == 0 ? 1.0 : 0.0) - eps;
  report["pert_tight"].add(check_pert_bound(tight, 3, eps, PertLemma::identity_minus_e));
  if (inject)
    report["pert_tight_injected"].add(check_pert_bound(tight, 3, eps, PertLemma::identity_minus_e, -1e-9));
  for (std::size_t h : {4, 8}) {
    const auto q = plan_hadamard(h)->build();
    FiniteDistribution x;
    for_each_border(h, 1, [&](const SignMatrix& b) {
      x.values.push_back(gram_block(q, b, sign_completion(b, q))(0, 0).get_d() / std::pow(double(h), 1.5));
    });
    for (int k = 0; k < 100; ++k)
      report["mean_tail"].add(check_mean_tail(x, k / 100.0));
  }
  report["livinskyi_intervals"].add(livinskyi_intervals_cover());
  json j{{"version", version_string()}, {"master_seed", o.seed}, {"checks", check_report_to_json(report)}};
  j["all_passed"] = all_passed(report);
  emit(o, j);
  for (const auto& [name, c] : report)
    if (c.fail)
      std::clog << "lemmas: " << name << " has " << c.fail << " failures\n";
  return all_passed(report) ? 0 : 1;
}

int cmd_oracle(const Options& o, unsigned n) {
  if (n == 6 && !o.slow)
    throw std::runtime_error("oracle n = 6 enumerates 2^25 matrices; pass --slow");
  const std::int64_t v = maxdet_oracle(n, default_threads());
  const LogScalar r = normalized_ratio(LogScalar::from_integer(v), n);
  emit(o, json{{"version", version_string()}, {"n", n}, {"D", v}, {"Dbar_decimal", decimal_string(r)}});
  return 0;
}

int cmd_table1(const Options& o) {
  const OrderSet set = load_orders(o);
  json j = header(o, set.limit());
  json rows = json::array();
  bool ok = true;
  for (const auto& row : table1_rows) {
    json r{{"h", row.h}, {"h_next", row.h_next}, {"p", row.p}, {"method", method_name(row.method)}};
    const auto ds = exceptional_d(row.h, row.h_next);
    r["d"] = ds;
    const bool consecutive = row.h_next <= o.max + headroom && set.contains(row.h) && set.next(row.h) == row.h_next;
    r["consecutive_in_sieve"] = consecutive;
    if (row.h > table1_fast_ceiling && !o.slow) {
      r["status"] = "skipped";
      rows.push_back(r);
      continue;
    }
    const Recipe recipe = table1_recipe(row);
    std::clog << "table1: row " << row.h << " via " << recipe.str() << "\n";
    const auto core = recipe.build();
    json cases = json::array();
    bool row_ok = true;
    for (unsigned d : ds) {
      const auto c = run_table1_case(core, row, d, search_config(o));
      cases.push_back({{"n", c.n},
                       {"d", c.d},
                       {"width", c.width},
                       {"ratio_decimal", decimal_string(c.best.ratio)},
                       {"uniform_target", uniform_target(d)},
                       {"uniform_ok", c.uniform_ok},
                       {"strong_ok", c.strong_ok},
                       {"plain_ok", c.plain_ok}});
      row_ok = row_ok && c.uniform_ok;
    }
    r["cases"] = cases;
    r["status"] = row_ok ? "pass" : "fail";
    ok = ok && row_ok;
    rows.push_back(r);
  }
  j["trials"] = o.trials;
  j["rows"] = rows;
  emit(o, j);
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maximal determinant lower bounds via bordered Hadamard and conference matrices"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version_string());
  Options o;
  app.add_option("--max", o.max, "sieve limit")->capture_default_str();
  app.add_option("--trials", o.trials, "random border trials")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "master seed")->capture_default_str();
  app.add_option("--method", o.method, "core construction")
      ->capture_default_str()
      ->check(CLI::IsMember({"auto", "paley1", "paley2", "conference"}));
  app.add_flag("--slow", o.slow, "run slow cases");
  app.add_option("--out", o.out, "write the report here instead of stdout");
  app.add_option("--cache", o.cache, "sieve cache file");
  app.add_flag("--no-cache", o.no_cache, "rebuild the sieve, ignoring --cache");
  app.add_option("--format", o.format, "report format")->capture_default_str()->check(CLI::IsMember({"json", "csv"}));
  app.fallthrough();

  bool list = false;
  auto* sieve = app.add_subcommand("sieve", "known Hadamard orders up to --max");
  sieve->add_flag("--list", list, "include every order");

  std::vector<std::uint64_t> xs;
  auto* gaps = app.add_subcommand("gaps", "largest gap between consecutive orders up to x");
  gaps->add_option("x", xs, "bounds (default --max)");

  std::vector<std::uint64_t> ns;
  auto* res = app.add_subcommand("resolve", "largest known order h <= n");
  res->add_option("n", ns)->required();

  std::uint64_t n = 0;
  auto* bound = app.add_subcommand("bound", "formula bounds and a constructive witness at n");
  bound->add_option("n", n)->required()->check(CLI::PositiveNumber);

  std::uint64_t sn = 0;
  std::string recipe, witness;
  std::size_t width = 1;
  auto* srch = app.add_subcommand("search", "random border search");
  srch->add_option("n", sn, "order to resolve")->check(CLI::PositiveNumber);
  srch->add_option("--recipe", recipe, "core recipe, e.g. paley1(331);double");
  srch->add_option("--width", width, "border width with --recipe")->capture_default_str();
  srch->add_option("--witness", witness, "write the best witness here");

  std::string vpath;
  auto* verify = app.add_subcommand("verify", "recompute a witness");
  verify->add_option("file", vpath)->required();

  bool inject = false;
  auto* lemmas = app.add_subcommand("lemmas", "lemma and inequality checks");
  lemmas->add_flag("--inject", inject, "add a check that must fail");

  unsigned on = 0;
  auto* oracle = app.add_subcommand("oracle", "exhaustive D(n) for n <= 6");
  oracle->add_option("n", on)->required()->check(CLI::Range(1, 6));

  auto* table1 = app.add_subcommand("table1", "constructive checks for the exceptional intervals");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sieve)
      return cmd_sieve(o, list);
    if (*gaps)
      return cmd_gaps(o, xs);
    if (*res)
      return cmd_resolve(o, ns);
    if (*bound)
      return cmd_bound(o, n);
    if (*srch) {
      if (recipe.empty() && sn == 0)
        throw std::invalid_argument("search needs n or --recipe");
      return cmd_search(o, sn, recipe, width, witness);
    }
    if (*verify)
      return cmd_verify(o, vpath);
    if (*lemmas)
      return cmd_lemmas(o, inject);
    if (*oracle)
      return cmd_oracle(o, on);
    if (*table1)
      return cmd_table1(o);
  } catch (const witness_corrupt& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const consistency_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
