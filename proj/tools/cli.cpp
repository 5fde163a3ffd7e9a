#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "caustic/caustic.hpp"
#include "caustic/invariants.hpp"
#include "caustic/parser.hpp"

namespace caustic::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kVersion = CAUSTIC_VERSION;

struct Inputs {
  std::string curve;
  std::string ext;
  std::vector<std::string> sources;
  std::string sources_list;
  std::string delta1 = "1";
  std::uint64_t seed = 1;
  bool json_out = false;
  std::string paths = "all";
  int max_trunc = 0;
  bool timing = false;
};

class Stopwatch {
 public:
  explicit Stopwatch(bool on) : on_(on) {}
  void lap(const std::string& stage) {
    auto now = std::chrono::steady_clock::now();
    laps_.emplace_back(stage, std::chrono::duration<double>(now - last_).count());
    last_ = now;
  }
  void print(std::ostream& err) const {
    if (!on_) return;
    for (const auto& [stage, s] : laps_) err << "timing " << stage << " " << s << " s\n";
  }

 private:
  bool on_;
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
  std::vector<std::pair<std::string, double>> laps_;
};

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Instance {
  PlaneCurve c;
  Vec3 S;
  const ContextPtr& context() const { return c.base(); }
  Instance restricted(const ContextPtr& k) const { return {c.restricted(k), lift_vec(S, k)}; }
};

ContextPtr base_context(const Inputs& in) {
  return in.ext.empty() ? Context::rationals() : parse_extension(in.ext);
}

PlaneCurve parse_curve(const Inputs& in, const ContextPtr& base) {
  if (in.curve.empty()) throw InputError("--curve is required");
  return PlaneCurve(parse_form(in.curve, in.ext.empty() ? nullptr : base), base);
}

std::vector<std::string> source_texts(const Inputs& in) {
  std::vector<std::string> out = in.sources;
  std::stringstream ss(in.sources_list);
  for (std::string item; std::getline(ss, item, ';');)
    if (item.find_first_not_of(" \t") != std::string::npos) out.push_back(item);
  return out;
}

Vec3 parse_source(const std::string& text, const Inputs& in, const ContextPtr& base) {
  Vec3 S = parse_point(text, in.ext.empty() ? nullptr : base);
  if (is_zero_vector(S)) throw InputError("source " + text + " is the zero vector");
  return S;
}

Vec3 single_source(const Inputs& in, const ContextPtr& base) {
  auto texts = source_texts(in);
  if (texts.size() != 1) throw InputError("exactly one --source is required");
  return parse_source(texts.front(), in, base);
}

ClassOptions class_options(const Inputs& in) {
  ClassOptions opt;
  opt.seed = in.seed;
  opt.cap_x = in.max_trunc;
  opt.theorem1 = in.paths == "all" || in.paths == "t1";
  opt.ledger = in.paths == "all" || in.paths == "ledger";
  opt.flemma = in.paths == "all" || in.paths == "flemma";
  if (in.delta1 == "estimate") {
    opt.delta1 = std::nullopt;
  } else {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(in.delta1, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != in.delta1.size() || v < 1) throw InputError("--delta1 expects a positive integer or 'estimate'");
    opt.delta1 = v;
  }
  return opt;
}

int cap_for(const Inputs& in, const PlaneCurve& c) { return in.max_trunc > 0 ? in.max_trunc : 64 * c.degree(); }

void require_nondegenerate(const PlaneCurve& c, const Vec3& S) {
  Degeneracy dg = degeneracy_check(c, lift_vec(S, c.base()));
  if (dg.degenerate) throw DegenerateError(dg.reason);
}

json optional_json(const std::optional<long>& v) { return v ? json(*v) : json(nullptr); }

json envelope(const Inputs& in, const std::string& command) {
  json j;
  j["version"] = kVersion;
  j["command"] = command;
  j["curve"] = in.curve;
  if (!in.ext.empty()) j["ext"] = in.ext;
  j["seed"] = in.seed;
  return j;
}

void put_terms(json& j, const Theorem1Terms& t) {
  j["g"] = t.g;
  j["f"] = t.f;
  j["f_prime"] = t.f_prime;
  j["g_prime"] = t.g_prime;
  j["q_prime"] = t.q_prime;
  j["mu_I"] = t.mu_I;
  j["mu_J"] = t.mu_J;
  j["mu_S"] = t.mu_S;
  j["c_prime"] = t.c_prime;
}

void put_report(json& j, const CausticClassReport& r) {
  j["d"] = r.d;
  put_terms(j, r.terms);
  j["dual_degree"] = r.dual_degree;
  j["mclass_theorem1"] = optional_json(r.mclass_theorem1);
  j["mclass_ledger"] = optional_json(r.mclass_ledger);
  j["mclass_flemma"] = optional_json(r.mclass_flemma);
  if (!r.flemma_note.empty()) j["flemma_note"] = r.flemma_note;
  j["mclass"] = r.mclass;
  j["delta1"] = r.delta1;
  j["delta1_estimated"] = r.delta1_estimated;
  j["class"] = r.class_value;
  if (r.bl) {
    j["bl"] = r.bl->value;
    j["bl_corrections"] = r.bl->corrections;
  }
  j["h_oracle_ok"] = r.h_oracle_ok;
  j["consistent"] = r.consistent;
  j["diagnostics"] = r.diagnostics;
}

std::string text_of_terms(const Theorem1Terms& t) {
  std::ostringstream os;
  os << "g = " << t.g << ", f = " << t.f << ", f' = " << t.f_prime << ", g' = " << t.g_prime
     << ", q' = " << t.q_prime << ", mu_I = " << t.mu_I << ", mu_J = " << t.mu_J << ", mu_S = " << t.mu_S
     << ", c' = " << t.c_prime;
  return os.str();
}

std::string text_of_report(const CausticClassReport& r) {
  auto path = [](const std::optional<long>& v) { return v ? std::to_string(*v) : std::string("skipped"); };
  std::ostringstream os;
  os << "degree " << r.d << ", dual degree " << r.dual_degree << "\n";
  os << "terms: " << text_of_terms(r.terms) << "\n";
  os << "mclass: theorem1 " << path(r.mclass_theorem1) << ", ledger " << path(r.mclass_ledger) << ", flemma "
     << path(r.mclass_flemma) << "\n";
  if (!r.flemma_note.empty()) os << "flemma note: " << r.flemma_note << "\n";
  os << "delta1 = " << r.delta1 << (r.delta1_estimated ? " (estimated)" : "") << "\n";
  os << "class = " << r.class_value << "\n";
  if (r.bl) os << "Brocard-Lemoyne bound = " << r.bl->value << ", correction sum " << r.bl->correction_sum() << "\n";
  os << "consistent: " << (r.consistent ? "yes" : "no") << "\n";
  return os.str();
}

// Runs fn once per factor of the declared extension; every factor must give the same answer.
json per_factor(const Instance& inst, const std::function<json(const Instance&)>& fn) {
  std::vector<json> parts = split_map(inst, fn);
  for (const auto& p : parts)
    if (p != parts.front()) {
      json j;
      j["factors"] = parts;
      return j;
    }
  return parts.front();
}

json branch_json(const BranchRecord& b) {
  json j;
  j["point"] = b.point;
  j["weight"] = b.weight;
  j["mu"] = b.mu;
  j["e"] = b.input.e;
  j["i_tangent"] = b.input.i;
  j["I_on_tangent"] = b.input.I_on_T;
  j["J_on_tangent"] = b.input.J_on_T;
  j["S_on_tangent"] = b.input.S_on_T;
  j["i_infinity"] = b.i_infinity;
  j["v"] = b.v;
  j["case"] = b.dispatch.index;
  j["h"] = b.dispatch.h;
  j["h_direct"] = b.h_direct;
  return j;
}

struct Result {
  json j;
  std::string text;
  std::vector<std::string> diagnostics;
  int code = kOk;
};

Result cmd_class(const Inputs& in, Stopwatch& sw) {
  ContextPtr base = base_context(in);
  PlaneCurve c = parse_curve(in, base);
  Vec3 S = single_source(in, base);
  ClassOptions opt = class_options(in);
  sw.lap("parse");
  CausticClassReport r = caustic_class(c, S, opt);
  sw.lap("class");
  Result res;
  res.j = envelope(in, "class");
  res.j["source"] = source_texts(in).front();
  put_report(res.j, r);
  res.text = text_of_report(r);
  res.diagnostics = r.diagnostics;
  if (!r.consistent) res.code = kInconsistent;
  return res;
}

Result cmd_terms(const Inputs& in, Stopwatch& sw) {
  ContextPtr base = base_context(in);
  PlaneCurve c = parse_curve(in, base);
  Vec3 S = single_source(in, base);
  sw.lap("parse");
  require_nondegenerate(c, S);
  Result res;
  res.j = envelope(in, "terms");
  res.j["source"] = source_texts(in).front();
  json body = per_factor({c, lift_vec(S, c.base())}, [&](const Instance& inst) {
    Rng rng(in.seed);
    CausticAnalysis a = analyze(inst.c, inst.S, rng, cap_for(in, inst.c));
    json j;
    put_terms(j, theorem1_terms(a));
    j["dual_degree"] = a.dual.polar;
    return j;
  });
  sw.lap("analysis");
  res.j.update(body);
  if (body.contains("g")) {
    std::ostringstream os;
    os << "g = " << body["g"] << ", f = " << body["f"] << ", f' = " << body["f_prime"] << ", g' = "
       << body["g_prime"] << ", q' = " << body["q_prime"] << ", mu_I = " << body["mu_I"] << ", mu_J = "
       << body["mu_J"] << ", mu_S = " << body["mu_S"] << ", c' = " << body["c_prime"] << "\n";
    os << "dual degree = " << body["dual_degree"] << "\n";
    res.text = os.str();
  } else {
    res.text = body.dump(2) + "\n";
  }
  return res;
}

Result cmd_base_points(const Inputs& in, Stopwatch& sw) {
  ContextPtr base = base_context(in);
  PlaneCurve c = parse_curve(in, base);
  Vec3 S = single_source(in, base);
  sw.lap("parse");
  require_nondegenerate(c, S);
  Result res;
  res.j = envelope(in, "base-points");
  res.j["source"] = source_texts(in).front();
  json body = per_factor({c, lift_vec(S, c.base())}, [&](const Instance& inst) {
    Rng rng(in.seed);
    json list = json::array();
    int total = 0;
    for (const auto& m : base_points(inst.c, inst.S, rng, cap_for(in, inst.c))) {
      list.push_back({{"point", m.to_string()}, {"size", m.size()}});
      total += m.size();
    }
    return json{{"base_points", list}, {"count", total}};
  });
  sw.lap("base points");
  res.j.update(body);
  std::ostringstream os;
  if (body.contains("base_points")) {
    for (const auto& p : body["base_points"])
      os << p["point"].get<std::string>() << "  (" << p["size"] << " point" << (p["size"] == 1 ? "" : "s")
         << ")\n";
    os << "count = " << body["count"] << "\n";
  } else {
    os << body.dump(2) << "\n";
  }
  res.text = os.str();
  return res;
}

Result cmd_branches(const Inputs& in, Stopwatch& sw) {
  ContextPtr base = base_context(in);
  PlaneCurve c = parse_curve(in, base);
  Vec3 S = single_source(in, base);
  sw.lap("parse");
  require_nondegenerate(c, S);
  Result res;
  res.j = envelope(in, "branches");
  res.j["source"] = source_texts(in).front();
  json body = per_factor({c, lift_vec(S, c.base())}, [&](const Instance& inst) {
    Rng rng(in.seed);
    CausticAnalysis a = analyze(inst.c, inst.S, rng, cap_for(in, inst.c));
    json list = json::array();
    for (const auto& b : a.branches) list.push_back(branch_json(b));
    return json{{"branches", list}};
  });
  sw.lap("analysis");
  res.j.update(body);
  std::ostringstream os;
  if (body.contains("branches")) {
    for (const auto& b : body["branches"])
      os << b["point"].get<std::string>() << ": weight " << b["weight"] << ", mu " << b["mu"] << ", e "
         << b["e"] << ", i(B,T) " << b["i_tangent"] << ", case " << b["case"] << ", h " << b["h"]
         << " (direct " << b["h_direct"] << ")\n";
  } else {
    os << body.dump(2) << "\n";
  }
  res.text = os.str();
  for (const auto& b : body.value("branches", json::array()))
    if (b["h"] != b["h_direct"]) res.code = kInconsistent;
  return res;
}

Result cmd_dual_degree(const Inputs& in, Stopwatch& sw) {
  ContextPtr base = base_context(in);
  PlaneCurve c = parse_curve(in, base);
  sw.lap("parse");
  Rng rng(in.seed);
  DualDegree dd = dual_degree(c, rng, cap_for(in, c));
  sw.lap("dual degree");
  Result res;
  res.j = envelope(in, "dual-degree");
  res.j["dual_degree_polar"] = dd.polar;
  res.j["dual_degree_ledger"] = dd.ledger;
  res.j["dual_degree"] = dd.polar;
  res.j["consistent"] = dd.agree();
  std::ostringstream os;
  os << "dual degree: polar count " << dd.polar << ", V ledger " << dd.ledger << "\n";
  res.text = os.str();
  if (!dd.agree()) res.code = kInconsistent;
  return res;
}

Result cmd_verify(const Inputs& in, Stopwatch& sw) {
  Inputs all = in;
  all.paths = "all";
  Result res = cmd_class(all, sw);
  res.j["command"] = "verify";
  ContextPtr base = base_context(in);
  PlaneCurve c = parse_curve(in, base);
  Vec3 S = single_source(in, base);
  std::vector<std::vector<InvariantCheck>> runs =
      split_map(Instance{c, lift_vec(S, c.base())}, [&](const Instance& inst) {
        return check_invariants(inst.c, inst.S, in.seed, 20, in.max_trunc);
      });
  sw.lap("invariants");
  json checks = json::array();
  bool all_ok = res.j["consistent"].get<bool>() && res.j["h_oracle_ok"].get<bool>();
  for (const auto& run : runs)
    for (const auto& chk : run) {
      checks.push_back({{"name", chk.name}, {"ok", chk.ok}, {"detail", chk.detail}});
      res.text += std::string(chk.ok ? "ok    " : "FAIL  ") + chk.name + (chk.ok ? "" : ": " + chk.detail) + "\n";
      all_ok = all_ok && chk.ok;
    }
  const bool agree = res.j["mclass_theorem1"] == res.j["mclass_ledger"] &&
                     res.j["mclass_ledger"] == res.j["mclass_flemma"];
  res.text += std::string(agree ? "ok    " : "FAIL  ") + "three mclass paths agree\n";
  all_ok = all_ok && agree;
  res.j["invariants"] = checks;
  res.j["verified"] = all_ok;
  if (!all_ok) res.code = kInconsistent;
  return res;
}

Result cmd_bl_compare(const Inputs& in, Stopwatch& sw) {
  Result res = cmd_class(in, sw);
  res.j["command"] = "bl-compare";
  if (!res.j.contains("bl")) throw InputError("bl-compare needs a finite source");
  const long bl = res.j["bl"].get<long>(), cls = res.j["class"].get<long>();
  res.j["difference"] = cls - bl;
  std::ostringstream os;
  os << "class = " << cls << ", Brocard-Lemoyne = " << bl << ", difference = " << cls - bl
     << ", correction terms = " << res.j["bl_corrections"].dump() << "\n";
  res.text = os.str();
  return res;
}

Result cmd_table(const Inputs& in, Stopwatch& sw) {
  ContextPtr base = base_context(in);
  PlaneCurve c = parse_curve(in, base);
  auto texts = source_texts(in);
  if (texts.empty()) throw InputError("table needs at least one source");
  std::vector<Vec3> sources;
  for (const auto& t : texts) sources.push_back(parse_source(t, in, base));
  ClassOptions opt = class_options(in);
  sw.lap("parse");
  Result res;
  res.j = envelope(in, "table");
  json rows = json::array();
  std::ostringstream os;
  os << "source | mclass | delta1 | class | consistent\n";
  for (std::size_t k = 0; k < sources.size(); ++k) {
    CausticClassReport r = caustic_class(c, sources[k], opt);
    json row;
    row["source"] = texts[k];
    put_report(row, r);
    rows.push_back(row);
    os << texts[k] << " | " << r.mclass << " | " << r.delta1 << " | " << r.class_value << " | "
       << (r.consistent ? "yes" : "no") << "\n";
    if (!r.consistent) res.code = kInconsistent;
    for (const auto& d : r.diagnostics) res.diagnostics.push_back(texts[k] + ": " + d);
  }
  sw.lap("table");
  res.j["rows"] = rows;
  res.text = os.str();
  return res;
}

void add_common(CLI::App* sub, Inputs& in, bool with_source) {
  sub->add_option("--curve", in.curve, "homogeneous form in x, y, z")->required();
  sub->add_option("--ext", in.ext, "modulus in t of the coefficient extension");
  if (with_source) {
    sub->add_option("--source", in.sources, "source point a:b:c (repeatable for table)");
    sub->add_option("--delta1", in.delta1, "degree of the reflected map: a positive integer or 'estimate'");
    sub->add_option("--paths", in.paths, "mclass paths to run")
        ->check(CLI::IsMember({"t1", "ledger", "flemma", "all"}));
  }
  sub->add_option("--seed", in.seed, "seed for every random draw");
  sub->add_flag("--json", in.json_out, "emit JSON");
  sub->add_option("--max-trunc", in.max_trunc, "Puiseux truncation cap in units of x (default 64 d)");
  sub->add_flag("--timing", in.timing, "print per-stage wall times to stderr");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Class of the caustic by reflection of a plane curve"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Inputs in;
  using Handler = Result (*)(const Inputs&, Stopwatch&);
  const std::vector<std::tuple<const char*, const char*, Handler, bool>> commands = {
      {"class", "class and mclass of the caustic with all diagnostics", cmd_class, true},
      {"terms", "the integers entering the closed formula", cmd_terms, true},
      {"base-points", "base points of the reflected map on the curve", cmd_base_points, true},
      {"branches", "branches with their h-values", cmd_branches, true},
      {"dual-degree", "class of the curve by two methods", cmd_dual_degree, false},
      {"verify", "all three paths and the invariant suite", cmd_verify, true},
      {"bl-compare", "compare with the Brocard-Lemoyne bound", cmd_bl_compare, true},
      {"table", "one row per source", cmd_table, true},
  };
  std::vector<std::pair<CLI::App*, Handler>> subs;
  for (const auto& [name, help, handler, with_source] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, in, with_source);
    if (std::string(name) == "table")
      sub->add_option("--sources", in.sources_list, "semicolon-separated list of sources");
    subs.emplace_back(sub, handler);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  Stopwatch sw(in.timing);
  try {
    Result res;
    for (const auto& [sub, handler] : subs)
      if (sub->parsed()) res = handler(in, sw);
    sw.print(err);
    for (const auto& d : res.diagnostics) err << "diagnostic: " << d << "\n";
    if (in.json_out)
      out << res.j.dump(2) << "\n";
    else
      out << res.text;
    return res.code;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kInputError;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const DegenerateError& e) {
    err << "degenerate configuration: " << e.what() << "\n";
    return kDegenerate;
  } catch (const InconsistentError& e) {
    err << "inconsistent: " << e.what() << "\n";
    return kInconsistent;
  } catch (const GenericityError& e) {
    err << "not certified: " << e.what() << "\n";
    return kInconsistent;
  } catch (const TruncationError& e) {
    err << "truncation cap reached (raise --max-trunc): " << e.what() << "\n";
    return kInconsistent;
  } catch (const std::exception& e) {
    err << "computation failed (the curve is assumed irreducible): " << e.what() << "\n";
    return kInconsistent;
  }
}

}  // namespace caustic::cli
