#pragma once

// The store of runtime-generated type-and-row names: each name has a kind
// and the type it stands for. Names are allocated in order and never removed.

#include <optional>
#include <vector>

#include "ast.hpp"

namespace rowg {

struct NameStore {
  struct Entry {
    int id;
    Kind kind;
    TypePtr type;
  };
  std::vector<Entry> entries;

  int fresh(Kind k, TypePtr t) {
    int id = static_cast<int>(entries.size());
    entries.push_back(Entry{id, k, std::move(t)});
    return id;
  }
  const Entry* find(int id) const {
    if (id < 0 || id >= static_cast<int>(entries.size())) return nullptr;
    return &entries[static_cast<size_t>(id)];
  }
  size_t size() const { return entries.size(); }
};

}  // namespace rowg
