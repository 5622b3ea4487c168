#pragma once

// Command-line front end. Exit codes: 0 success, 1 verification mismatch,
// 2 parse or validation error, 3 resource budget exceeded.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kbpair/kbpair.hpp"

namespace kbpair::cli {

enum ExitCode : int { kOk = 0, kMismatch = 1, kInvalid = 2, kResource = 3 };

struct CliConfig {
  std::optional<Integer> modulus;
  std::size_t state_sum_cap = 24;
  bool json = false;
  int max_r = 8;
  std::uint64_t exact_budget = kDefaultExactCrossingBudget;
  unsigned threads = 0;
};

inline constexpr const char* kCapEnv = "KBPAIR_STATE_SUM_CAP";

// Ordered key/value output rendered either as `label = value` lines or as a
// flat JSON object with the same values.
class Record {
 public:
  void add(std::string label, std::string key, nlohmann::ordered_json value,
           std::string sep = " = ") {
    fields_.push_back({std::move(label), std::move(key), std::move(value), std::move(sep)});
  }

  void emit(std::ostream& out, bool json) const {
    if (json) {
      nlohmann::ordered_json doc = nlohmann::ordered_json::object();
      for (const auto& f : fields_) doc[f.key] = f.value;
      out << doc.dump(2) << "\n";
      return;
    }
    for (const auto& f : fields_) out << f.label << f.sep << render(f.value) << "\n";
  }

 private:
  static std::string render(const nlohmann::ordered_json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array()) {
      std::string s;
      for (const auto& x : v) s += (s.empty() ? "" : "\n") + render(x);
      return s;
    }
    return v.dump();
  }

  struct Field {
    std::string label;
    std::string key;
    nlohmann::ordered_json value;
    std::string sep;
  };
  std::vector<Field> fields_;
};

inline Integer parse_modulus(const std::string& text) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
    throw DomainError("modulus must be a positive integer, got '" + text + "'");
  Integer m(text);
  require_modulus(m);
  return m;
}

inline Closure parse_closure(const std::string& text) {
  if (text == "num") return Closure::Num;
  if (text == "den") return Closure::Den;
  throw DomainError("closure must be 'num' or 'den', got '" + text + "'");
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot read file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline StateSumOptions state_sum_options(const CliConfig& cfg) {
  return {cfg.state_sum_cap, cfg.threads};
}

inline std::string congruence_label(const Integer& m) {
  return "V ≡ 1 (mod " + m.get_str() + ")";
}

// ---------------------------------------------------------------------------
// Commands

inline int cmd_bracket(const std::string& text, const CliConfig& cfg, std::ostream& out) {
  const Expr e = parse_tangle(text);
  const std::uint64_t n = crossing_count(e);
  Record rec;
  BracketPair br;
  if (cfg.modulus) {
    br = eval_expr(e, EvalMode::modular(*cfg.modulus));
    rec.add("modulus", "modulus", cfg.modulus->get_str());
  } else {
    if (n > cfg.exact_budget)
      throw ResourceError(std::to_string(n) + " crossings exceeds the exact budget " +
                          std::to_string(cfg.exact_budget) + "; pass --mod");
    br = eval_expr(e);
  }
  rec.add("f", "f", format(br.f));
  rec.add("g", "g", format(br.g));
  rec.emit(out, cfg.json);
  return kOk;
}

inline int cmd_jones(const std::string& closure_text, const std::string& text,
                     const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  const Closure closure = parse_closure(closure_text);
  const Expr e = parse_tangle(text);
  const std::uint64_t n = crossing_count(e);
  const std::uint64_t comps = closure_components(connectivity(e), closure);
  if (comps > 1)
    err << "warning: closure has " << comps
        << " components; each is oriented by the first-strand convention\n";
  StructuralWrithe sw;
  const std::int64_t w = sw.closed(e, closure);

  const bool exact = n <= cfg.exact_budget;
  if (!exact && !cfg.modulus)
    throw ResourceError(std::to_string(n) + " crossings exceeds the exact budget " +
                        std::to_string(cfg.exact_budget) + "; pass --mod");
  const EvalMode mode = exact ? EvalMode::exact() : EvalMode::modular(*cfg.modulus);
  const BracketPair br = eval_expr(e, mode);
  const LaurentPoly bracket =
      mode.reduce(closure == Closure::Den ? den_closure(br) : num_closure(br));
  const LaurentPoly chi = mode.reduce(normalized_bracket(bracket, w));
  const QuarterLaurent v = jones_from_chi(chi);

  Record rec;
  rec.add("evaluation", "evaluation",
          exact ? std::string("exact") : "modulo " + cfg.modulus->get_str());
  rec.add("components", "components", comps);
  rec.add("writhe", "writhe", w);
  rec.add("chi", "chi", format(chi));
  rec.add("V", "V", format(v));
  if (cfg.modulus) {
    rec.add("modulus", "modulus", cfg.modulus->get_str());
    rec.add(congruence_label(*cfg.modulus), "V_congruent_to_1", congruent_to_one(v, *cfg.modulus),
            ": ");
  }
  rec.emit(out, cfg.json);
  return kOk;
}

inline int cmd_oracle(const std::string& text, const CliConfig& cfg, std::ostream& out) {
  const Expr e = parse_tangle(text);
  const std::uint64_t n = crossing_count(e);
  if (n > cfg.state_sum_cap)
    throw ResourceError(std::to_string(n) + " crossings exceeds cap " +
                        std::to_string(cfg.state_sum_cap));
  const BracketPair algebraic = eval_expr(e);
  const BracketPair state = state_sum_pair(expand(e), state_sum_options(cfg));
  const bool equal = algebraic == state;
  Record rec;
  rec.add("crossings", "crossings", n);
  rec.add("states", "states", std::uint64_t{1} << n);
  rec.add("algebraic f", "algebraic_f", format(algebraic.f));
  rec.add("algebraic g", "algebraic_g", format(algebraic.g));
  rec.add("state-sum f", "state_sum_f", format(state.f));
  rec.add("state-sum g", "state_sum_g", format(state.g));
  rec.add("verdict", "verdict", equal ? "equal" : "unequal");
  rec.emit(out, cfg.json);
  return equal ? kOk : kMismatch;
}

struct DiagramJones {
  std::uint64_t components = 0;
  std::int64_t writhe = 0;
  LaurentPoly chi;
  QuarterLaurent v;
};

inline DiagramJones jones_of_diagram(const LinkDiagram& d, const CliConfig& cfg) {
  DiagramJones out;
  out.components = component_count(d);
  out.writhe = writhe(d, OrientationConvention::FirstStrand);
  out.chi = normalized_bracket(state_sum_bracket(d, state_sum_options(cfg)), out.writhe);
  out.v = jones_from_chi(out.chi);
  return out;
}

inline int cmd_jones_pd(const std::string& path, const CliConfig& cfg, std::ostream& out,
                        std::ostream& err) {
  const LinkDiagram d = pd_read(read_file(path));
  const DiagramJones j = jones_of_diagram(d, cfg);
  if (j.components > 1)
    err << "warning: diagram has " << j.components
        << " components; each is oriented by the first-strand convention\n";
  Record rec;
  rec.add("crossings", "crossings", d.crossing_count());
  rec.add("components", "components", j.components);
  rec.add("writhe", "writhe", j.writhe);
  rec.add("chi", "chi", format(j.chi));
  rec.add("V", "V", format(j.v));
  if (cfg.modulus) {
    rec.add("modulus", "modulus", cfg.modulus->get_str());
    rec.add(congruence_label(*cfg.modulus), "V_congruent_to_1",
            congruent_to_one(j.v, *cfg.modulus), ": ");
  }
  rec.emit(out, cfg.json);
  return kOk;
}

inline int cmd_pd(const std::string& closure_text, const std::string& text, const CliConfig& cfg,
                  std::ostream& out) {
  const Closure closure = parse_closure(closure_text);
  const LinkDiagram d = close(expand(parse_tangle(text)), closure);
  const PdCode code = to_pd(d);
  if (cfg.json) {
    nlohmann::ordered_json doc;
    doc["pd"] = format_pd(code, true);
    out << doc.dump(2) << "\n";
  } else {
    out << format_pd(code) << "\n";
  }
  return kOk;
}

inline int cmd_census(const std::string& path, const CliConfig& cfg, std::ostream& out) {
  if (!cfg.modulus) throw DomainError("census needs --mod");
  const Integer& m = *cfg.modulus;
  const std::vector<CensusRecord> records = read_census(read_file(path));
  std::map<std::size_t, std::pair<std::uint64_t, std::uint64_t>> by_crossings;  // (matching, total)
  std::uint64_t matching = 0;
  for (const auto& rec : records) {
    const DiagramJones j = jones_of_diagram(rec.diagram, cfg);
    const bool hit = congruent_to_one(j.v, m);
    auto& slot = by_crossings[rec.diagram.crossing_count()];
    slot.first += hit ? 1 : 0;
    slot.second += 1;
    matching += hit ? 1 : 0;
  }
  if (cfg.json) {
    nlohmann::ordered_json doc;
    doc["records"] = records.size();
    doc["modulus"] = m.get_str();
    doc["matching"] = matching;
    doc["by_crossings"] = nlohmann::ordered_json::array();
    for (const auto& [c, counts] : by_crossings)
      doc["by_crossings"].push_back({{"crossings", c}, {"matching", counts.first},
                                     {"total", counts.second}});
    out << doc.dump(2) << "\n";
    return kOk;
  }
  out << records.size() << " records\n";
  out << "modulus = " << m.get_str() << "\n";
  out << "matching = " << matching << "\n";
  for (const auto& [c, counts] : by_crossings)
    out << "crossings " << c << ": " << counts.first << " of " << counts.second << " with "
        << congruence_label(m) << "\n";
  return kOk;
}

inline int emit_verification(const VerificationReport& rep, bool json, std::ostream& out) {
  if (json) {
    nlohmann::ordered_json doc;
    doc["claims"] = nlohmann::ordered_json::array();
    for (const auto& c : rep.claims)
      doc["claims"].push_back({{"id", c.id},
                               {"locus", c.locus},
                               {"status", c.pass ? "pass" : "fail"},
                               {"witness", c.witness}});
    doc["passed"] = rep.passed();
    doc["total"] = rep.claims.size();
    out << doc.dump(2) << "\n";
  } else {
    for (const auto& c : rep.claims)
      out << (c.pass ? "PASS " : "FAIL ") << c.id << " | " << c.locus << " | " << c.witness
          << "\n";
    out << "passed = " << rep.passed() << "/" << rep.claims.size() << "\n";
  }
  return rep.all_pass() ? kOk : kMismatch;
}

inline int cmd_verify(const CliConfig& cfg, std::ostream& out) {
  VerifyOptions opt;
  opt.max_r = cfg.max_r;
  return emit_verification(verify_claims(opt), cfg.json, out);
}

// ---------------------------------------------------------------------------

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kauffman bracket pairs of algebraic tangles and Jones polynomials mod m", "kbpair"};
  app.require_subcommand(1);

  CliConfig cfg;
  if (const char* env = std::getenv(kCapEnv)) {
    try {
      cfg.state_sum_cap = std::stoul(env);
    } catch (const std::exception&) {
      err << "error: " << kCapEnv << " must be a positive integer\n";
      return kInvalid;
    }
  }
  std::string output = "text";
  std::string modulus;
  std::string expr_text;
  std::string closure;
  std::string path;
  app.add_option("--output", output, "Output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  app.add_option("--threads", cfg.threads, "State-sum worker threads (0 = all cores)");

  auto add_mod = [&](CLI::App* sub, bool required = false) {
    auto* opt = sub->add_option("--mod", modulus, "Reduce coefficients modulo M (M >= 2)");
    if (required) opt->required();
  };
  auto add_cap = [&](CLI::App* sub) {
    sub->add_option("--cap", cfg.state_sum_cap, "Maximum crossings for state-sum enumeration")
        ->check(CLI::PositiveNumber);
  };
  auto add_budget = [&](CLI::App* sub) {
    sub->add_option("--exact-budget", cfg.exact_budget,
                    "Maximum crossings evaluated with exact coefficients")
        ->capture_default_str();
  };

  auto* bracket = app.add_subcommand("bracket", "Bracket pair [f; g] of a tangle expression");
  bracket->add_option("expr", expr_text, "Tangle expression")->required();
  add_mod(bracket);
  add_budget(bracket);

  auto* jones = app.add_subcommand("jones", "Jones polynomial of the num or den closure");
  jones->add_option("closure", closure, "num or den")->required();
  jones->add_option("expr", expr_text, "Tangle expression")->required();
  add_mod(jones);
  add_budget(jones);

  auto* verify = app.add_subcommand("verify-paper", "Re-derive every claim about T20, M_r and K_r");
  verify->add_option("--max-r", cfg.max_r, "Largest r checked exactly")
      ->check(CLI::Range(1, 12))
      ->capture_default_str();

  auto* oracle = app.add_subcommand("oracle", "Compare the algebra against the state sum");
  oracle->add_option("expr", expr_text, "Tangle expression")->required();
  add_cap(oracle);

  auto* census = app.add_subcommand("census", "Count PD records with V = 1 mod M");
  census->add_option("file", path, "File of PD[...] records")->required();
  add_mod(census, true);
  add_cap(census);

  auto* pd = app.add_subcommand("pd", "PD code of the num or den closure");
  pd->add_option("closure", closure, "num or den")->required();
  pd->add_option("expr", expr_text, "Tangle expression")->required();

  auto* jones_pd = app.add_subcommand("jones-pd", "Jones polynomial of a PD-code file");
  jones_pd->add_option("file", path, "PD file")->required();
  add_mod(jones_pd);
  add_cap(jones_pd);

  std::vector<std::string> owned = {"kbpair"};
  owned.insert(owned.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : owned) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  }

  try {
    cfg.json = output == "json";
    if (!modulus.empty()) cfg.modulus = parse_modulus(modulus);
    if (*bracket) return cmd_bracket(expr_text, cfg, out);
    if (*jones) return cmd_jones(closure, expr_text, cfg, out, err);
    if (*verify) return cmd_verify(cfg, out);
    if (*oracle) return cmd_oracle(expr_text, cfg, out);
    if (*census) return cmd_census(path, cfg, out);
    if (*pd) return cmd_pd(closure, expr_text, cfg, out);
    if (*jones_pd) return cmd_jones_pd(path, cfg, out, err);
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << "\n";
    return kResource;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kInvalid;
}

}  // namespace kbpair::cli
