#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "core.hpp"
#include "eval.hpp"
#include "oracle.hpp"
#include "statics.hpp"
#include "store.hpp"
#include "syntax.hpp"

namespace {

using namespace rowg;

constexpr int kExitOk = 0;
constexpr int kExitTypeError = 1;
constexpr int kExitBlame = 2;
constexpr int kExitParseError = 3;
constexpr int kExitFuel = 4;

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

long long fuel_default() {
  if (const char* env = std::getenv("ROWG_FUEL")) {
    try {
      return std::stoll(env);
    } catch (...) {
      std::cerr << "warning: ignoring unparsable ROWG_FUEL\n";
    }
  }
  return 100000;
}

nlohmann::ordered_json store_json(const NameStore& store) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& e : store.entries) {
    nlohmann::ordered_json entry;
    entry["name"] = "a" + std::to_string(e.id);
    entry["kind"] = kind_name(e.kind);
    entry["type"] = pretty(e.type);
    arr.push_back(entry);
  }
  return arr;
}

void emit_trace_line(bool json, long long step, const std::string& rule,
                     const std::string& term, const NameStore* store) {
  if (json) {
    nlohmann::ordered_json line = {{"step", step},
                                   {"rule", rule},
                                   {"store", store ? store_json(*store)
                                                   : nlohmann::ordered_json::array()},
                                   {"term", term}};
    std::cout << line.dump() << "\n";
  } else {
    std::cout << step << ": [" << rule << "] " << term << "\n";
  }
}

struct RunFlags {
  std::string file;
  std::string mode = "gradual";
  long long fuel = 0;  // 0: take the default/env value
  bool trace = false;
  bool json = false;
  bool check_steps = false;
  bool primed_conlift = false;
};

// Final line of a run: one JSON object in json mode, the bare result
// otherwise. Diagnostics stay on stderr either way.
void emit_outcome(bool json, nlohmann::ordered_json obj, const std::string& plain) {
  if (json)
    std::cout << obj.dump() << "\n";
  else if (!plain.empty())
    std::cout << plain << "\n";
}

int run_static(const TermPtr& program, const RunFlags& flags, long long fuel) {
  TermPtr desugared = desugar(program);
  if (flags.trace) emit_trace_line(flags.json, 0, "start", pretty(desugared), nullptr);
  StaticResult r = evaluate_static(
      program, fuel,
      flags.trace
          ? std::function<void(long long, const TermPtr&, const std::string&)>(
                [&](long long n, const TermPtr& t, const std::string& rule) {
                  emit_trace_line(flags.json, n, rule, pretty(t), nullptr);
                })
          : std::function<void(long long, const TermPtr&, const std::string&)>());
  switch (r.outcome) {
    case Outcome::Value:
      emit_outcome(flags.json,
                   {{"outcome", "value"}, {"term", pretty(r.term)}, {"steps", r.steps}},
                   pretty(r.term));
      return kExitOk;
    case Outcome::Fuel:
      emit_outcome(flags.json, {{"outcome", "fuel"}, {"steps", r.steps}}, "");
      std::cerr << "fuel exhausted after " << r.steps << " steps\n";
      return kExitFuel;
    default:
      emit_outcome(flags.json, {{"outcome", "stuck"}, {"term", pretty(r.term)}}, "");
      std::cerr << "stuck at: " << pretty(r.term) << "\n";
      return kExitTypeError;
  }
}

int run_core(const TermPtr& program, const RunFlags& flags, long long fuel) {
  Ctx ctx;
  Translation tr = translate(ctx, program);
  NameStore store;
  if (flags.trace) emit_trace_line(flags.json, 0, "start", pretty(tr.core), &store);
  EvalOptions opts;
  opts.fuel = fuel;
  opts.primed_conlift = flags.primed_conlift;
  if (flags.check_steps) opts.check_type = &tr.type;
  if (flags.trace)
    opts.on_step = [&](long long n, const Reduction& red, const NameStore& st) {
      emit_trace_line(flags.json, n, red.rule, pretty(red.term), &st);
    };
  EvalResult r = evaluate(store, tr.core, opts);
  switch (r.outcome) {
    case Outcome::Value:
      emit_outcome(flags.json,
                   {{"outcome", "value"},
                    {"term", pretty(r.term)},
                    {"steps", r.steps},
                    {"store", store_json(store)}},
                   pretty(r.term));
      return kExitOk;
    case Outcome::Blamed:
      emit_outcome(flags.json,
                   {{"outcome", "blame"},
                    {"blame", show_blame(*r.blame)},
                    {"steps", r.steps},
                    {"store", store_json(store)}},
                   "blame " + show_blame(*r.blame));
      return kExitBlame;
    case Outcome::Fuel:
      emit_outcome(flags.json, {{"outcome", "fuel"}, {"steps", r.steps}}, "");
      std::cerr << "fuel exhausted after " << r.steps << " steps\n";
      return kExitFuel;
    case Outcome::CheckFailed:
      emit_outcome(flags.json,
                   {{"outcome", "check-failed"}, {"message", r.message}}, "");
      std::cerr << "state re-typecheck failed: " << r.message << "\n";
      return kExitTypeError;
    default:
      emit_outcome(flags.json, {{"outcome", "stuck"}, {"term", pretty(r.term)}}, "");
      std::cerr << "stuck at: " << pretty(r.term) << "\n";
      return kExitTypeError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rowg: a gradually typed calculus with extensible rows"};
  app.require_subcommand(1);

  RunFlags flags;

  auto add_input = [&](CLI::App* cmd) {
    cmd->add_option("file", flags.file, "source file ('-' or omitted: stdin)");
    cmd->add_option("--mode", flags.mode, "language mode")
        ->check(CLI::IsMember({"static", "gradual"}));
  };

  CLI::App* check = app.add_subcommand("check", "typecheck and print the type");
  add_input(check);

  CLI::App* translate_cmd =
      app.add_subcommand("translate", "insert casts and print the target program");
  add_input(translate_cmd);

  CLI::App* run = app.add_subcommand("run", "evaluate and print the result");
  add_input(run);
  run->add_option("--fuel", flags.fuel, "step limit (default 100000 or ROWG_FUEL)");
  run->add_flag("--trace", flags.trace, "print every step");
  run->add_flag("--json", flags.json, "print trace lines as JSON objects");
  run->add_flag("--check-steps", flags.check_steps,
                "re-typecheck every machine state (type preservation check)");
  run->add_flag("--primed-conlift", flags.primed_conlift,
                "use the eager variant of lifting a concealed variant injection");

  CLI::App* trace = app.add_subcommand("trace", "evaluate, printing every step");
  add_input(trace);
  trace->add_option("--fuel", flags.fuel, "step limit (default 100000 or ROWG_FUEL)");
  trace->add_flag("--json", flags.json, "print trace lines as JSON objects");
  trace->add_flag("--check-steps", flags.check_steps,
                  "re-typecheck every machine state (type preservation check)");
  trace->add_flag("--primed-conlift", flags.primed_conlift,
                  "use the eager variant of lifting a concealed variant injection");

  int depth = 3;
  long long count = 10000;
  uint64_t seed = 1;
  CLI::App* props = app.add_subcommand("props", "run the property suites");
  props->add_option("--depth", depth, "row enumeration depth (fields per row)");
  props->add_option("--count", count, "programs per randomized suite");
  props->add_option("--seed", seed, "random seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (props->parsed()) {
      bool all_ok = true;
      for (const auto& p : run_all_props(depth, count, seed)) {
        if (p.ok) {
          std::cout << "PASS " << p.name << " (checked " << p.checked << ")\n";
        } else {
          all_ok = false;
          std::cout << "FAIL " << p.name << ": " << p.detail << "\n";
        }
      }
      return all_ok ? kExitOk : kExitTypeError;
    }

    TermPtr program;
    try {
      program = parse_program(read_input(flags.file));
    } catch (const ParseError& e) {
      std::cerr << "parse error: " << e.what() << "\n";
      return kExitParseError;
    }

    bool is_static = flags.mode == "static";
    try {
      if (check->parsed()) {
        Ctx ctx;
        TypePtr ty = is_static ? typecheck_static(ctx, program)
                               : typecheck_gradual(ctx, program);
        std::cout << pretty(ty) << "\n";
        return kExitOk;
      }
      if (translate_cmd->parsed()) {
        Ctx ctx;
        if (is_static) typecheck_static(ctx, program);
        Translation tr = translate(ctx, program);
        std::cout << pretty(tr.core) << "\n";
        return kExitOk;
      }
      // run or trace
      if (trace->parsed()) flags.trace = true;
      long long fuel = flags.fuel > 0 ? flags.fuel : fuel_default();
      if (is_static) {
        Ctx ctx;
        typecheck_static(ctx, program);
        return run_static(program, flags, fuel);
      }
      return run_core(program, flags, fuel);
    } catch (const TypeError& e) {
      std::cerr << "type error: " << e.what() << "\n";
      return kExitTypeError;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitTypeError;
  }
}
