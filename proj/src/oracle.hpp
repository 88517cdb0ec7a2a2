#pragma once

// Reference implementations and randomized test drivers: a stratified type
// enumeration, equivalence by brute-force swap closure, consistent
// equivalence by composing the closure with consistency, a generator of
// well-typed surface programs, and the property suites the props command
// and the acceptance tests run.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ast.hpp"

namespace rowg {

struct EnumConfig {
  int max_row_depth = 3;                             // rows with up to this many fields
  std::vector<std::string> labels = {"l1", "l2", "l3"};
  std::vector<std::string> bases = {"Int", "Bool"};
  bool allow_dyn = true;
  bool allow_forall = true;
};

// All rows with up to cfg.max_row_depth fields drawn from base/? field types
// over cfg.labels (duplicates allowed), with empty and ? tails.
std::vector<TypePtr> enum_rows(const EnumConfig& cfg);
// The value-type slice: bases, ?, functions one level deep, records and
// variants over the two-field row slice, and a fixed family of quantified
// types.
std::vector<TypePtr> enum_types(const EnumConfig& cfg);

// Equivalence by closure under swapping adjacent distinct-label fields,
// anywhere inside the type. Exponential; for testing only.
bool equiv_bruteforce(const TypePtr& a, const TypePtr& b);
// Consistent equivalence as equivalence-closure on both sides composed with
// consistency, the relation the algorithmic version must match.
bool consistent_equiv_via_composition(const TypePtr& a, const TypePtr& b);

struct GenConfig {
  uint64_t seed = 1;
  int max_depth = 4;
  bool gradual = true;  // false: never emit ?, ascriptions only permute rows
};

// A well-typed surface program (closed) under the requested mode, or nullopt
// if this attempt fizzled (callers just advance the seed).
std::optional<TermPtr> gen_program(const GenConfig& cfg);

struct PropOutcome {
  std::string name;
  bool ok = false;
  long long checked = 0;
  std::string detail;  // first counterexample or failure summary
};

PropOutcome prop_equiv_matches_bruteforce(const EnumConfig& cfg);
PropOutcome prop_consistent_equiv_matches_composition(const EnumConfig& cfg);
PropOutcome prop_consistent_equiv_inversion(const EnumConfig& cfg);
PropOutcome prop_merge_sound(const EnumConfig& cfg);
PropOutcome prop_parse_pretty_roundtrip(long long count, uint64_t seed);
PropOutcome prop_unique_redex(long long count, uint64_t seed);
PropOutcome prop_gradual_soundness(long long count, uint64_t seed);
PropOutcome prop_static_conservativity(long long count, uint64_t seed);

// Everything above with default sizes; `quick` shrinks the workload for use
// under ctest.
std::vector<PropOutcome> run_all_props(int depth, long long count, uint64_t seed);

}  // namespace rowg
