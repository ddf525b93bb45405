// Small builders shared by the unit tests.
#pragma once

#include "kt/kripke.hpp"
#include "kt/search.hpp"

#include <initializer_list>
#include <string>
#include <vector>

namespace fixture {

inline kt::Universe universe(std::initializer_list<const char*> members) {
    std::vector<kt::FormulaPtr> fs;
    for (const char* m : members) fs.push_back(kt::parse(m));
    return kt::Universe(fs);
}

inline kt::ClassSpec spec(int max_worlds, std::initializer_list<const char*> members,
                          unsigned numeral_bound = 4) {
    kt::ClassSpec s;
    s.max_worlds = max_worlds;
    s.universe = universe(members);
    s.numeral_bound = numeral_bound;
    return s;
}

/// w0 <= w1 with the given interpretations.
inline kt::KripkeStructure chain2(std::set<kt::Nat> bottom, std::set<kt::Nat> top) {
    kt::KripkeStructure M;
    M.worlds = {"w0", "w1"};
    M.up = {0b11, 0b10};
    M.interp = {std::move(bottom), std::move(top)};
    return M;
}

inline kt::KripkeStructure one_world(std::set<kt::Nat> I) {
    kt::KripkeStructure M;
    M.worlds = {"w0"};
    M.up = {0b1};
    M.interp = {std::move(I)};
    return M;
}

inline kt::Nat c(const char* f) { return kt::code(kt::parse(f)); }

}  // namespace fixture
