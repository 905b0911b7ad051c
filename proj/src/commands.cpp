#include "fusec/commands.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "fusec/eval.hpp"
#include "fusec/fusion.hpp"
#include "fusec/inputs.hpp"
#include "fusec/nest.hpp"
#include "fusec/paranat.hpp"
#include "fusec/syntax.hpp"
#include "fusec/typecheck.hpp"

namespace fusec {

using json = nlohmann::ordered_json;

namespace {

class Timer {
 public:
  explicit Timer(json& timings) : timings_(timings) {}

  template <typename F>
  auto phase(const std::string& name, F&& f) {
    auto start = std::chrono::steady_clock::now();
    struct Stop {
      Timer* self;
      std::string name;
      std::chrono::steady_clock::time_point start;
      ~Stop() {
        std::chrono::duration<double, std::milli> ms = std::chrono::steady_clock::now() - start;
        self->timings_[name] = ms.count();
      }
    } stop{this, name, start};
    return f();
  }

 private:
  json& timings_;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << data;
}

json base_report(const std::string& command) {
  json r;
  r["schema_version"] = kSchemaVersion;
  r["command"] = command;
  return r;
}

json input_json(const std::string& path, const std::string& source) {
  json j;
  j["path"] = path;
  j["digest"] = "fnv1a64:" + fnv1a_hex(source);
  return j;
}

json path_json(const TermPath& p) {
  json a = json::array();
  for (int i : p) a.push_back(i);
  return a;
}

json profile_json(const AllocationProfile& p) {
  json j;
  j["steps"] = p.steps;
  j["mu_cells"] = json::object();
  for (const auto& [k, v] : p.mu_cells) j["mu_cells"][k] = v;
  j["nu_observations"] = json::object();
  for (const auto& [k, v] : p.nu_observations) j["nu_observations"][k] = v;
  return j;
}

json error_json(const std::exception& e) {
  json j;
  if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
    j["kind"] = "ParseError";
    j["line"] = pe->pos().line;
    j["column"] = pe->pos().column;
  } else if (const auto* te = dynamic_cast<const TypeError*>(&e)) {
    j["kind"] = to_string(te->kind());
    j["declaration"] = te->decl();
    j["path"] = path_json(te->path());
    j["line"] = te->pos().line;
    j["column"] = te->pos().column;
  } else if (dynamic_cast<const PositivityError*>(&e)) {
    j["kind"] = "PositivityError";
  } else if (dynamic_cast<const FuelExhausted*>(&e)) {
    j["kind"] = "FuelExhausted";
  } else if (dynamic_cast<const SizeCapError*>(&e)) {
    j["kind"] = "SizeCap";
  } else if (dynamic_cast<const UnsupportedError*>(&e)) {
    j["kind"] = "Unsupported";
  } else if (dynamic_cast<const DecompositionError*>(&e)) {
    j["kind"] = "NotCurriedNormalForm";
  } else if (dynamic_cast<const NestShapeError*>(&e)) {
    j["kind"] = "NestShape";
  } else {
    j["kind"] = "Error";
  }
  j["message"] = e.what();
  return j;
}

CommandResult fail(json report, const std::exception& e, int code) {
  CommandResult r;
  report["ok"] = false;
  report["error"] = error_json(e);
  r.report = std::move(report);
  r.exit_code = code;
  r.output = std::string("error: ") + e.what() + "\n";
  return r;
}

// Loads and typechecks; fills the declaration list.
Program load_checked(const std::string& path, json& report, Timer& timer, std::string* source_out = nullptr) {
  std::string source = read_file(path);
  report["input"] = input_json(path, source);
  Program prog = timer.phase("parse", [&] { return parse_program(source); });
  auto types = timer.phase("typecheck", [&] { return typecheck_program(prog); });
  json decls = json::array();
  std::size_t ti = 0;
  for (std::size_t i = 0; i < prog.decls.size(); ++i) {
    const Decl& d = prog.decls[i];
    json e;
    e["name"] = d.name;
    switch (d.kind) {
      case DeclKind::Functor:
        e["kind"] = "functor";
        e["body"] = to_string(d.functor);
        break;
      case DeclKind::Alias:
        e["kind"] = "type";
        e["body"] = print_type(d.type, prog, i);
        break;
      case DeclKind::Term:
        e["kind"] = "def";
        e["type"] = print_type(types[ti++].type, prog, i);
        break;
    }
    decls.push_back(std::move(e));
  }
  report["declarations"] = std::move(decls);
  if (source_out) *source_out = std::move(source);
  return prog;
}

const Decl& require_term(const Program& prog, const std::string& name) {
  const Decl* d = prog.find_term(name);
  if (!d) throw Error("no term declaration named " + name);
  return *d;
}

void collect_mu_keys(const TypeExpr& t, std::set<std::string>& keys) {
  switch (t->kind) {
    case TypeKind::Mu:
    case TypeKind::Nu:
      keys.insert(t->functor->key);
      break;
    case TypeKind::Prod:
    case TypeKind::Sum:
    case TypeKind::Arrow:
      collect_mu_keys(t->left, keys);
      collect_mu_keys(t->right, keys);
      break;
    case TypeKind::Forall:
      collect_mu_keys(t->left, keys);
      break;
    default:
      break;
  }
}

std::uint64_t intermediate_cells(const AllocationProfile& p, const std::set<std::string>& boundary) {
  std::uint64_t n = 0;
  for (const auto& [k, v] : p.mu_cells)
    if (!boundary.count(k)) n += v;
  return n;
}

}  // namespace

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

CommandResult cmd_check(const std::string& path) {
  json report = base_report("check");
  json timings = json::object();
  Timer timer(timings);
  try {
    Program prog = load_checked(path, report, timer);
    report["ok"] = true;
    report["timings_ms"] = timings;
    CommandResult r;
    for (const auto& d : report["declarations"])
      if (d["kind"] == "def") r.output += d["name"].get<std::string>() + " : " + d["type"].get<std::string>() + "\n";
    r.report = std::move(report);
    return r;
  } catch (const std::exception& e) {
    report["timings_ms"] = timings;
    return fail(std::move(report), e, kExitInputError);
  }
}

CommandResult cmd_run(const std::string& path, const std::string& main, const std::optional<std::string>& input,
                      std::optional<std::uint64_t> fuel) {
  json report = base_report("run");
  json timings = json::object();
  Timer timer(timings);
  try {
    Program prog = load_checked(path, report, timer);
    const Decl& d = require_term(prog, main);
    std::uint64_t f = fuel ? *fuel : default_fuel();
    report["main"] = main;
    report["fuel"] = f;
    CommandResult r;
    Value result;
    AllocationProfile profile;
    try {
      if (d.type->kind == TypeKind::Arrow) {
        if (!input) throw Error(main + " takes an argument; pass --input");
        Value arg = parse_value(*input, d.type->left);
        report["input_value"] = print_value(arg);
        auto rr = timer.phase("eval", [&] { return run_with_profile(prog, main, arg, f); });
        result = rr.value;
        profile = rr.profile;
      } else {
        if (input) throw Error(main + " is not a function; drop --input");
        timer.phase("eval", [&] {
          with_large_stack([&] {
            Interpreter in(prog, f);
            result = in.global(main);
            profile = in.profile();
          });
          return 0;
        });
      }
    } catch (const FuelExhausted& e) {
      report["profile"] = profile_json(e.profile());
      report["timings_ms"] = timings;
      return fail(std::move(report), e, kExitRuntime);
    }
    std::string shown = is_first_order_value(result) ? print_value(result) : "<fun>";
    report["ok"] = true;
    report["value"] = shown;
    report["profile"] = profile_json(profile);
    report["timings_ms"] = timings;
    r.output = shown + "\n";
    r.report = std::move(report);
    return r;
  } catch (const std::exception& e) {
    report["timings_ms"] = timings;
    return fail(std::move(report), e, kExitInputError);
  }
}

CommandResult cmd_fuse(const FuseCommand& args) {
  json report = base_report("fuse");
  json timings = json::object();
  Timer timer(timings);
  CommandResult r;
  try {
    Program prog = load_checked(args.path, report, timer);
    ProgramFuseOptions opts;
    opts.abstract = args.abstract;
    ProgramFusion fused = timer.phase("fuse", [&] { return fuse_program(prog, opts); });
    std::string text = timer.phase("print", [&] { return print_program(fused.program); });

    // The printed program must read back and check with the same types.
    bool rechecked = timer.phase("recheck", [&] {
      Program again = parse_program(text);
      auto before = typecheck_program(prog);
      auto after = typecheck_program(again);
      for (const auto& b : before) {
        bool found = false;
        for (const auto& a : after)
          if (a.name == b.name) found = type_equal(a.type, b.type);
        if (!found) return false;
      }
      return true;
    });

    report["abstract"] = args.abstract;
    report["abstracted"] = fused.abstracted;
    json decls = json::array();
    for (const auto& df : fused.decls) {
      json d;
      d["name"] = df.name;
      d["types_match"] = df.types_match;
      d["iterations"] = df.report.iterations;
      d["converged"] = df.report.converged;
      json steps = json::array();
      for (const auto& s : df.report.steps) {
        json st;
        st["rule"] = to_string(s.rule);
        st["path"] = path_json(s.path);
        st["before"] = s.before;
        st["after"] = s.after;
        st["type_preserved"] = s.type_preserved;
        st["measure_before"] = s.measure_before;
        st["measure_after"] = s.measure_after;
        steps.push_back(std::move(st));
      }
      d["rewrites"] = std::move(steps);
      decls.push_back(std::move(d));
    }
    report["fusion"] = std::move(decls);
    json counts;
    counts["R1"] = fused.count(Rule::R1);
    counts["R2"] = fused.count(Rule::R2);
    counts["R3"] = fused.count(Rule::R3);
    report["rewrite_counts"] = counts;
    report["converged"] = fused.converged();
    report["rechecked"] = rechecked;
    report["warnings"] = fused.warnings;
    report["ok"] = rechecked;
    report["timings_ms"] = timings;

    if (args.out) write_file(*args.out, text);
    else r.output = text;
    for (const auto& w : fused.warnings) r.output += "-- warning: " + w + "\n";
    r.exit_code = rechecked ? kExitOk : kExitVerify;
    r.report = std::move(report);
    if (args.report) write_file(*args.report, r.report.dump(2) + "\n");
    return r;
  } catch (const std::exception& e) {
    report["timings_ms"] = timings;
    auto res = fail(std::move(report), e, kExitInputError);
    if (args.report) {
      try {
        write_file(*args.report, res.report.dump(2) + "\n");
      } catch (const std::exception&) {
      }
    }
    return res;
  }
}

CommandResult cmd_bench(const std::string& path, const std::string& orig, const std::string& fused,
                        const std::vector<std::size_t>& sizes, std::optional<std::uint64_t> fuel) {
  json report = base_report("bench");
  json timings = json::object();
  Timer timer(timings);
  try {
    Program prog = load_checked(path, report, timer);
    const Decl& a = require_term(prog, orig);
    const Decl& b = require_term(prog, fused);
    if (!type_equal(a.type, b.type)) throw Error(orig + " and " + fused + " have different types");
    if (a.type->kind != TypeKind::Arrow) throw Error(orig + " is not a function");
    std::set<std::string> boundary;
    collect_mu_keys(a.type, boundary);
    std::uint64_t f = fuel ? *fuel : default_fuel();
    report["main_pair"] = {orig, fused};
    json rows = json::array();
    CommandResult r;
    bool all_equal = true;
    std::optional<std::size_t> first_diff;
    timer.phase("runs", [&] {
      for (std::size_t n : sizes) {
        Value input = sized_value(a.type->left, n);
        json row;
        row["size"] = n;
        std::optional<RunResult> ra, rb;
        std::string ea, eb;
        try {
          ra = run_with_profile(prog, orig, input, f);
        } catch (const Error& e) {
          ea = e.what();
        }
        try {
          rb = run_with_profile(prog, fused, input, f);
        } catch (const Error& e) {
          eb = e.what();
        }
        bool eq = ra && rb && values_equal(ra->value, rb->value);
        row["equal"] = eq;
        row["orig"] = ra ? json(print_value(ra->value)) : json(nullptr);
        row["fused"] = rb ? json(print_value(rb->value)) : json(nullptr);
        if (!ea.empty()) row["orig_error"] = ea;
        if (!eb.empty()) row["fused_error"] = eb;
        if (ra) {
          row["orig_profile"] = profile_json(ra->profile);
          row["orig_intermediate_cells"] = intermediate_cells(ra->profile, boundary);
        }
        if (rb) {
          row["fused_profile"] = profile_json(rb->profile);
          row["fused_intermediate_cells"] = intermediate_cells(rb->profile, boundary);
        }
        char line[200];
        std::snprintf(line, sizeof line, "n=%-6zu %-5s cells %llu vs %llu, steps %llu vs %llu\n", n,
                      eq ? "equal" : "DIFF",
                      ra ? static_cast<unsigned long long>(intermediate_cells(ra->profile, boundary)) : 0ull,
                      rb ? static_cast<unsigned long long>(intermediate_cells(rb->profile, boundary)) : 0ull,
                      ra ? static_cast<unsigned long long>(ra->profile.steps) : 0ull,
                      rb ? static_cast<unsigned long long>(rb->profile.steps) : 0ull);
        r.output += line;
        rows.push_back(std::move(row));
        if (!eq && !first_diff) first_diff = n;
        all_equal = all_equal && eq;
      }
      return 0;
    });
    report["sizes"] = std::move(rows);
    report["all_equal"] = all_equal;
    if (first_diff) report["first_difference_at_size"] = *first_diff;
    report["ok"] = all_equal;
    report["timings_ms"] = timings;
    r.exit_code = all_equal ? kExitOk : kExitVerify;
    r.report = std::move(report);
    return r;
  } catch (const std::exception& e) {
    report["timings_ms"] = timings;
    return fail(std::move(report), e, kExitInputError);
  }
}

CommandResult cmd_paracheck(const std::optional<std::string>& path, const std::string& term,
                            std::size_t max_carrier) {
  json report = base_report("paracheck");
  json timings = json::object();
  Timer timer(timings);
  try {
    Program prog;
    if (path) prog = load_checked(*path, report, timer);
    report["term"] = term;
    report["max_carrier"] = max_carrier;
    SemanticFamily family;
    BifunctorExpr w;
    FunctorExpr v;
    const Decl* d = prog.find_term(term);
    if (!d && term == "bad_const") {
      w = bad_const_shape();
      v = fn::id();
      family = bad_const_family(max_carrier);
      report["polytype"] = "forall X. (X -> X) -> X";
    } else {
      if (!d) throw Error("no term declaration named " + term);
      if (d->type->kind != TypeKind::Forall) throw DecompositionError("NotCurriedNormalForm: " + term + " is not polymorphic");
      report["polytype"] = print_type(d->type, prog);
      auto shape = decompose_polytype(d->type->left, d->type->name);
      w = shape.W;
      v = shape.V;
      family = timer.phase("tabulate", [&] { return tabulate_family(prog, tm::var(term), shape, max_carrier); });
    }
    report["W"] = to_string(w);
    report["V"] = to_string(v);
    report["family"] = family.provenance;
    auto res = timer.phase("search", [&] { return check_paranatural(family, w, v, max_carrier); });
    report["maps_checked"] = res.maps_checked;
    report["pairs_checked"] = res.pairs_checked;
    CommandResult r;
    if (res.ok) {
      report["verdict"] = "Ok";
      r.output = term + ": Ok (" + std::to_string(res.pairs_checked) + " related pairs)\n";
    } else {
      const auto& c = *res.counterexample;
      json cj;
      cj["X"] = c.x;
      cj["Y"] = c.y;
      cj["u"] = c.u_text;
      cj["w"] = c.w_text;
      cj["w_prime"] = c.w_prime_text;
      cj["lhs"] = c.lhs_text;
      cj["rhs"] = c.rhs_text;
      cj["witness_verified"] = verify_witness(family, w, v, c);
      report["verdict"] = "Counterexample";
      report["counterexample"] = std::move(cj);
      r.output = term + ": counterexample at |X|=" + std::to_string(c.x) + ", |Y|=" + std::to_string(c.y) +
                 ", u=" + c.u_text + ", w=" + c.w_text + ", w'=" + c.w_prime_text + ": " + c.lhs_text +
                 " != " + c.rhs_text + "\n";
      r.exit_code = kExitVerify;
    }
    report["ok"] = res.ok;
    report["timings_ms"] = timings;
    r.report = std::move(report);
    return r;
  } catch (const std::exception& e) {
    report["timings_ms"] = timings;
    return fail(std::move(report), e, kExitInputError);
  }
}

CommandResult cmd_nest(const std::string& a, const std::string& b) {
  json report = base_report("nest");
  json timings = json::object();
  Timer timer(timings);
  try {
    NestVal na = timer.phase("parse_a", [&] { return parse_nest(a); });
    NestVal nb = timer.phase("parse_b", [&] { return parse_nest(b); });
    NestCounters counters;
    NestPairVal z = timer.phase("zipWN", [&] { return zipWN(na, nb, &counters); });
    std::uint64_t unfused = timer.phase("ssumN", [&] { return ssumN(z); });
    std::uint64_t before = pair_nodes_allocated();
    std::uint64_t fused = timer.phase("sumzipN", [&] { return sumzipN_fused(na, nb); });
    report["fused_pair_nodes"] = pair_nodes_allocated() - before;
    report["a"] = print_nest(na);
    report["b"] = print_nest(nb);
    report["zipped"] = print_nest(z);
    report["ssumN_zipWN"] = unfused;
    report["sumzipN"] = fused;
    report["intermediate_pair_nodes"] = counters.pair_nodes;
    report["ok"] = unfused == fused;
    report["timings_ms"] = timings;
    CommandResult r;
    r.output = print_nest(z) + "\n" + std::to_string(unfused) + " " + std::to_string(fused) + "\n";
    r.exit_code = unfused == fused ? kExitOk : kExitVerify;
    r.report = std::move(report);
    return r;
  } catch (const std::exception& e) {
    report["timings_ms"] = timings;
    return fail(std::move(report), e, kExitInputError);
  }
}

}  // namespace fusec
