#pragma once

// Small-step evaluation of the blame calculus: value recognition, the
// reduction-rule table (each reduct tagged with its rule name), stepping
// with name-store effects and single-step blame lifting, and a driver with
// fuel, tracing, and optional per-step re-typechecking. Also the evaluator
// for the static language.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ast.hpp"
#include "store.hpp"

namespace rowg {

bool is_value(const CorePtr& e);

// Ground types: base types, names, ? -> ?, [?], <?>.
bool ground_type(const TypePtr& a);
// The ground type a non-? type collapses to (none for quantifiers and rows).
std::optional<TypePtr> ground_of(const TypePtr& a);
// Ground rows: names, the empty row, and (l:?;?).
bool ground_row(const TypePtr& r);

// Splitting a record value at a label, searching past other fields.
std::optional<std::pair<CorePtr, CorePtr>> record_split_value(const CorePtr& v,
                                                              const std::string& l);
// Wrap e in embeddings for every field of `row`, outermost first.
CorePtr row_embed(const TypePtr& row, CorePtr e);
// Insert the field l:a into the variant value e underneath the fields of
// `row`, by case analysis on each of them.
CorePtr field_insert(const TypePtr& row, const std::string& l, const TypePtr& a, CorePtr e);

struct Reduction {
  CorePtr term;
  std::string rule;
};

// Every reduction rule whose guard matches e (store-free rules only; type
// instantiation lives in step). Exactly one should ever match a well-typed
// non-value state, and tests enforce that via this function.
std::vector<Reduction> reduce_all(const CorePtr& e, bool primed_conlift);
std::optional<Reduction> reduce(const CorePtr& e, bool primed_conlift);

// One machine step: descends to the redex, applies a reduction, instantiates
// quantifiers by allocating a fresh name (extending the store), and lifts
// blame out of any nonempty context in a single step.
std::optional<Reduction> step(NameStore& store, const CorePtr& e, bool primed_conlift);

enum class Outcome { Value, Blamed, Fuel, Stuck, CheckFailed };

struct EvalOptions {
  long long fuel = 100000;
  bool primed_conlift = false;
  // When set, every machine state is re-typechecked at this type.
  const TypePtr* check_type = nullptr;
  // Called after each step with the step index (from 1), the reduction, and
  // the store as it stands after the step.
  std::function<void(long long, const Reduction&, const NameStore&)> on_step;
};

struct EvalResult {
  Outcome outcome;
  CorePtr term;
  std::optional<BlameLabel> blame;
  long long steps = 0;
  std::string message;  // diagnostics for CheckFailed
};

EvalResult evaluate(NameStore& store, CorePtr e, const EvalOptions& opts);

// Static-language evaluation (no store, no blame).
bool is_value_static(const TermPtr& e);
std::optional<std::pair<TermPtr, std::string>> step_static(const TermPtr& e);

struct StaticResult {
  Outcome outcome;  // Value, Fuel, or Stuck
  TermPtr term;
  long long steps = 0;
};

StaticResult evaluate_static(TermPtr e, long long fuel = 100000,
                             const std::function<void(long long, const TermPtr&,
                                                      const std::string&)>& on_step = {});

}  // namespace rowg
