// Command line front end: structure checks, size comparisons, fact sweeps,
// diagram inference and formula cores, with optional JSON output.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "nmr/core_revision.hpp"
#include "nmr/enumerate.hpp"
#include "nmr/fact_verifiers.hpp"
#include "nmr/formula.hpp"
#include "nmr/inheritance.hpp"
#include "nmr/prefstruct.hpp"
#include "nmr/size_algebra.hpp"

using nlohmann::ordered_json;

namespace {

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::ostringstream out;
    out << std::cin.rdbuf();
    return out.str();
  }
  std::ifstream in(path);
  if (!in) throw nmr::Error(nmr::ErrorCode::UnknownName, "cannot open file '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// comma separated element names; "-" or "" is the empty set
nmr::Subset parse_set(const nmr::PreferentialStructure& s, const std::string& text) {
  if (text.empty() || text == "-") return 0;
  std::vector<std::string> names;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      if (!cur.empty()) names.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  if (!cur.empty()) names.push_back(cur);
  return s.subset(names);
}

ordered_json witness_json(const nmr::PreferentialStructure& s, const nmr::Witness& w) {
  ordered_json sets = ordered_json::object();
  for (const auto& [label, value] : w.sets) sets[label] = s.format_subset(value);
  ordered_json out;
  out["sets"] = std::move(sets);
  if (w.element) out["element"] = s.names()[*w.element];
  if (!w.note.empty()) out["note"] = w.note;
  return out;
}

std::string witness_text(const nmr::PreferentialStructure& s, const nmr::Witness& w) {
  std::string out;
  for (const auto& [label, value] : w.sets) {
    if (!out.empty()) out += ", ";
    out += label + " = " + s.format_subset(value);
  }
  if (w.element) out += ", element " + s.names()[*w.element];
  if (!w.note.empty()) out += " (" + w.note + ")";
  return out;
}

ordered_json structure_json(const nmr::PreferentialStructure& s) {
  ordered_json pairs = ordered_json::array();
  for (const auto& [winner, loser] : s.pairs())
    pairs.push_back(ordered_json::array({winner, loser}));
  ordered_json out;
  out["elements"] = s.names();
  out["pairs"] = std::move(pairs);
  return out;
}

void emit(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }

// ---------------------------------------------------------------- check --

int run_check(const std::string& file, bool json) {
  auto s = nmr::parse_structure(slurp(file));
  bool ranked = s.is_ranked();

  struct Row {
    const char* name;
    nmr::SizeVerdict verdict;
  };
  std::vector<Row> rows;
  // the condition checks quantify over subset pairs, keep that affordable
  bool conditions_checked = s.n() <= nmr::kMaxVerifyElements;
  if (conditions_checked)
    rows = {{"coh1", nmr::check_coh1(s)},   {"coh2", nmr::check_coh2(s)},
            {"muPR", nmr::check_muPR(s)},   {"muCUM", nmr::check_muCUM(s)},
            {"muEQ", nmr::check_muEQ(s)}};

  if (json) {
    ordered_json out = structure_json(s);
    out["transitive"] = s.is_transitive();
    out["smooth"] = s.is_smooth();
    out["ranked"] = ranked;
    if (ranked) {
      ordered_json ranks = ordered_json::object();
      for (int i = 0; i < s.n(); ++i) ranks[s.names()[i]] = s.rank_of(i);
      out["ranks"] = std::move(ranks);
    }
    if (conditions_checked) {
      ordered_json conds = ordered_json::object();
      for (const auto& r : rows) {
        ordered_json c;
        c["holds"] = r.verdict.holds;
        if (r.verdict.witness) c["witness"] = witness_json(s, *r.verdict.witness);
        conds[r.name] = std::move(c);
      }
      out["conditions"] = std::move(conds);
    }
    emit(out);
    return 0;
  }

  std::cout << "elements: " << s.n() << "\n";
  std::cout << "pairs:";
  for (const auto& [winner, loser] : s.pairs()) std::cout << " " << winner << ">" << loser;
  std::cout << "\n";
  std::cout << "transitive: " << (s.is_transitive() ? "yes" : "no") << "\n";
  std::cout << "smooth: " << (s.is_smooth() ? "yes" : "no") << "\n";
  std::cout << "ranked: " << (ranked ? "yes" : "no") << "\n";
  if (ranked) {
    std::cout << "ranks:";
    for (int i = 0; i < s.n(); ++i) std::cout << " " << s.names()[i] << "=" << s.rank_of(i);
    std::cout << "\n";
  }
  for (const auto& r : rows) {
    std::cout << r.name << ": " << (r.verdict.holds ? "holds" : "fails");
    if (r.verdict.witness) std::cout << "  [" << witness_text(s, *r.verdict.witness) << "]";
    std::cout << "\n";
  }
  return 0;
}

// ----------------------------------------------------------------- size --

int run_size(const std::string& file, const std::string& mode, const std::string& a_text,
             const std::string& b_text, const std::string& x_text, bool json) {
  auto s = nmr::parse_structure(slurp(file));
  nmr::Subset a = parse_set(s, a_text);

  ordered_json out;
  out["mode"] = mode;
  out["A"] = s.format_subset(a);
  std::string text;

  if (mode == "classify") {
    nmr::Subset x = x_text.empty() ? s.universe() : parse_set(s, x_text);
    auto cls = nmr::classify(s, x, a);
    out["X"] = s.format_subset(x);
    out["result"] = nmr::to_string(cls);
    text = std::string(nmr::to_string(cls)) + " in " + s.format_subset(x);
  } else if (mode == "degree") {
    nmr::Subset b = b_text.empty() ? s.universe() : parse_set(s, b_text);
    int deg = nmr::small_degree(s, a, b);
    out["B"] = s.format_subset(b);
    out["result"] = deg;
    text = "degree " + std::to_string(deg) + " in " + s.format_subset(b);
  } else {  // less | less_prime
    nmr::Subset b = parse_set(s, b_text);
    std::optional<nmr::Subset> x;
    if (!x_text.empty()) x = parse_set(s, x_text);
    bool holds = mode == "less" ? nmr::less(s, a, b, x) : nmr::less_prime(s, a, b, x);
    out["B"] = s.format_subset(b);
    out["X"] = s.format_subset(x ? *x : (a | b));
    out["result"] = holds;
    text = s.format_subset(a) + (holds ? " < " : " not < ") + s.format_subset(b) + " in " +
           s.format_subset(x ? *x : (a | b)) + (mode == "less_prime" ? " (weak)" : "");
  }

  if (json)
    emit(out);
  else
    std::cout << text << "\n";
  return 0;
}

// --------------------------------------------------------------- verify --

int run_verify(const std::string& facts_text, nmr::SweepOptions opt,
               const std::string& class_name, bool strict, bool json) {
  std::vector<nmr::FactId> facts;
  if (facts_text == "all" || facts_text.empty()) {
    facts = nmr::all_facts();
  } else {
    std::string cur;
    std::istringstream in(facts_text);
    while (std::getline(in, cur, ',')) {
      auto f = nmr::fact_from_string(cur);
      if (!f) throw nmr::Error(nmr::ErrorCode::UnknownName, "unknown fact '" + cur + "'");
      facts.push_back(*f);
    }
  }

  auto entries = nmr::run_fact_sweep(facts, opt);

  bool any_fail = false, any_off = false;
  for (const auto& e : entries) {
    if (e.fails > 0) any_fail = true;
    if (e.first_off_hypothesis) any_off = true;
  }
  bool ok = !any_fail && !(strict && any_off);

  if (json) {
    ordered_json out;
    ordered_json options;
    options["max_size"] = opt.exhaustive_max;
    options["samples"] = opt.samples;
    options["sample_max"] = opt.sample_max;
    options["ranked_samples"] = opt.ranked_samples;
    options["seed"] = opt.seed;
    options["class"] = class_name;
    options["strict"] = strict;
    out["options"] = std::move(options);
    ordered_json rows = ordered_json::array();
    for (const auto& e : entries) {
      ordered_json row;
      row["fact"] = nmr::to_string(e.fact);
      row["structures"] = e.structures;
      row["holds"] = e.holds;
      row["fails"] = e.fails;
      row["vacuous"] = e.vacuous;
      if (e.first_failure) {
        ordered_json f = structure_json(e.first_failure->structure);
        if (e.first_failure->verdict.witness)
          f["witness"] =
              witness_json(e.first_failure->structure, *e.first_failure->verdict.witness);
        row["first_failure"] = std::move(f);
      }
      if (e.first_off_hypothesis) {
        ordered_json f = structure_json(e.first_off_hypothesis->structure);
        if (e.first_off_hypothesis->verdict.witness)
          f["witness"] = witness_json(e.first_off_hypothesis->structure,
                                      *e.first_off_hypothesis->verdict.witness);
        row["first_off_hypothesis"] = std::move(f);
      }
      rows.push_back(std::move(row));
    }
    out["facts"] = std::move(rows);
    out["ok"] = ok;
    emit(out);
  } else {
    for (const auto& e : entries) {
      std::cout << nmr::to_string(e.fact) << ": " << e.holds << " hold, " << e.fails
                << " fail, " << e.vacuous << " off hypothesis (of " << e.structures << ")\n";
      if (e.first_failure && e.first_failure->verdict.witness)
        std::cout << "  first failure: "
                  << witness_text(e.first_failure->structure,
                                  *e.first_failure->verdict.witness)
                  << "\n";
      if (strict && e.first_off_hypothesis && e.first_off_hypothesis->verdict.witness)
        std::cout << "  off hypothesis: "
                  << witness_text(e.first_off_hypothesis->structure,
                                  *e.first_off_hypothesis->verdict.witness)
                  << "\n";
    }
    std::cout << (ok ? "ok" : "NOT OK") << "\n";
  }
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------- infer --

int run_infer(const std::string& file, const std::string& source, const std::string& target,
              bool explain_flag, bool no_split_propagation, bool json) {
  auto d = nmr::parse_diagram(slurp(file));
  int src = d.node(source);
  nmr::InferOptions opts;
  opts.split_cells_propagate = !no_split_propagation;
  auto r = nmr::infer(d, src, opts);

  std::vector<std::string> explain_lines;
  if (explain_flag) {
    if (target.empty())
      throw nmr::Error(nmr::ErrorCode::EmptyInput, "--explain needs --target");
    explain_lines = nmr::explain(d, src, d.node(target), opts);
  }

  if (json) {
    ordered_json out;
    out["source"] = source;
    ordered_json order = ordered_json::array();
    for (int i : r.order) order.push_back(d.nodes()[i]);
    out["order"] = std::move(order);
    ordered_json targets = ordered_json::array();
    for (const auto& t : r.targets) {
      if (!target.empty() && d.nodes()[t.node] != target) continue;
      ordered_json row;
      row["node"] = d.nodes()[t.node];
      row["status"] = nmr::to_string(t.status);
      row["in"] = t.in.str();
      row["out"] = t.out.str();
      row["unknown"] = t.unknown.str();
      targets.push_back(std::move(row));
    }
    out["targets"] = std::move(targets);
    ordered_json cells = ordered_json::array();
    for (const auto& c : r.cells) {
      ordered_json row;
      row["fraction"] = c.fraction().str();
      ordered_json membership = ordered_json::object();
      for (int i = 0; i < d.n(); ++i)
        membership[d.nodes()[i]] = nmr::to_string(c.membership[i]);
      row["membership"] = std::move(membership);
      cells.push_back(std::move(row));
    }
    out["cells"] = std::move(cells);
    if (explain_flag) out["explain"] = explain_lines;
    emit(out);
    return 0;
  }

  for (const auto& t : r.targets) {
    if (!target.empty() && d.nodes()[t.node] != target) continue;
    std::cout << d.nodes()[t.node] << ": " << nmr::to_string(t.status) << " (in " << t.in.str()
              << ", out " << t.out.str() << ", unknown " << t.unknown.str() << ")\n";
  }
  if (explain_flag) {
    std::cout << "--\n";
    for (const auto& line : explain_lines) std::cout << line << "\n";
  }
  return 0;
}

// ----------------------------------------------------------------- core --

int run_core(const std::string& vars_text, const std::string& formula_text, unsigned m,
             const std::string& method, bool json) {
  std::vector<std::string> vars;
  std::string cur;
  std::istringstream in(vars_text);
  while (std::getline(in, cur, ',')) {
    if (!cur.empty()) vars.push_back(cur);
  }
  auto f = nmr::parse_formula(formula_text, vars);
  int nv = static_cast<int>(vars.size());
  auto d = nmr::DistanceFn::hamming();

  ordered_json out;
  out["vars"] = vars;
  out["formula"] = formula_text;
  out["method"] = method;
  std::vector<std::string> text;

  if (method == "depth" || method == "both") {
    auto c = nmr::core_formula(*f, nv, m, d);
    out["m"] = m;
    out["core"] = nmr::to_dnf(c, vars);
    text.push_back("core (depth, m=" + std::to_string(m) + "): " + nmr::to_dnf(c, vars));
  }
  if (method == "peel" || method == "both") {
    auto r = nmr::peel_formula(*f, vars, d);
    out["layers"] = r.layer_dnf;
    out["peeled_core"] = r.core_dnf;
    for (std::size_t i = 0; i < r.layer_dnf.size(); ++i)
      text.push_back("layer " + std::to_string(i + 1) + ": " + r.layer_dnf[i]);
    text.push_back("core (peel): " + r.core_dnf);
  }

  if (json) {
    emit(out);
  } else {
    for (const auto& line : text) std::cout << line << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"preference structures, size relations, inheritance diagrams and theory cores"};
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "machine readable output");

  // check
  auto* check = app.add_subcommand("check", "inspect a structure file");
  std::string check_file;
  check->add_option("file", check_file, "structure file, - for stdin")->required();

  // size
  auto* size = app.add_subcommand("size", "size comparisons inside a structure");
  std::string size_file, size_mode = "classify", size_a, size_b, size_x;
  size->add_option("file", size_file, "structure file, - for stdin")->required();
  size->add_option("--mode", size_mode, "classify | less | less_prime | degree")
      ->check(CLI::IsMember({"classify", "less", "less_prime", "degree"}));
  size->add_option("-A", size_a, "first set, comma separated names (- for empty)")->required();
  size->add_option("-B", size_b, "second set");
  size->add_option("--X", size_x, "reference set (defaults: universe, or A union B)");

  // verify
  auto* verify = app.add_subcommand("verify", "sweep the documented facts over structures");
  std::string verify_facts = "all", verify_class = "all";
  nmr::SweepOptions sweep;
  bool strict = false;
  verify->add_option("--facts", verify_facts, "all or comma separated fact names");
  verify->add_option("--max-size", sweep.exhaustive_max, "exhaustive up to this many elements")
      ->check(CLI::Range(0, nmr::kMaxEnumerationElements));
  verify->add_option("--samples", sweep.samples, "random structures on top");
  verify->add_option("--sample-max", sweep.sample_max, "largest random structure")
      ->check(CLI::Range(1, nmr::kMaxVerifyElements));
  verify->add_option("--ranked-samples", sweep.ranked_samples, "random ranked structures");
  verify->add_option("--seed", sweep.seed, "sample seed");
  verify->add_option("--class", verify_class,
                     "all | smooth | nonsmooth | ranked | nonranked | transitive");
  verify->add_flag("--strict", strict, "fail on off-hypothesis counterexamples too");

  // infer
  auto* infer = app.add_subcommand("infer", "run a diagram from a source node");
  std::string infer_file, infer_source, infer_target;
  bool infer_explain = false, no_split_propagation = false;
  infer->add_option("file", infer_file, "diagram file, - for stdin")->required();
  infer->add_option("--source", infer_source, "source node")->required();
  infer->add_option("--target", infer_target, "report only this node");
  infer->add_flag("--explain", infer_explain, "derivation for --target in words");
  infer->add_flag("--no-split-propagation", no_split_propagation,
                  "split halves do not feed later arrows");

  // core
  auto* core = app.add_subcommand("core", "core of a formula's model set");
  std::string core_vars, core_formula_text, core_method = "depth";
  unsigned core_m = 1;
  core->add_option("--vars", core_vars, "comma separated variables, first is leftmost")
      ->required();
  core->add_option("--formula", core_formula_text, "! & | -> over the variables")->required();
  core->add_option("-m", core_m, "depth tolerance, keep m*depth(x) >= depth(X)")
      ->check(CLI::Range(1u, 1000000u));
  core->add_option("--method", core_method, "depth | peel | both")
      ->check(CLI::IsMember({"depth", "peel", "both"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (check->parsed()) return run_check(check_file, json);
    if (size->parsed()) return run_size(size_file, size_mode, size_a, size_b, size_x, json);
    if (verify->parsed()) {
      auto cls = nmr::structure_class_from_string(verify_class);
      if (!cls)
        throw nmr::Error(nmr::ErrorCode::UnknownName, "unknown class '" + verify_class + "'");
      sweep.cls = *cls;
      return run_verify(verify_facts, sweep, verify_class, strict, json);
    }
    if (infer->parsed())
      return run_infer(infer_file, infer_source, infer_target, infer_explain,
                       no_split_propagation, json);
    if (core->parsed()) return run_core(core_vars, core_formula_text, core_m, core_method, json);
  } catch (const nmr::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
