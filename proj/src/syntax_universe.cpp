#include "kt/syntax.hpp"

#include <sstream>

namespace kt {

Universe::Universe(std::vector<FormulaPtr> members) {
    for (auto& f : members) {
        Nat c = code(f);
        if (index_.count(c)) continue;
        index_.emplace(c, static_cast<int>(members_.size()));
        members_.push_back(f);
        codes_.push_back(std::move(c));
    }
    neg_index_.assign(members_.size(), -1);
    for (std::size_t i = 0; i < members_.size(); ++i)
        neg_index_[i] = index_of(code(neg(members_[i])));
}

int Universe::index_of(const Nat& c) const {
    auto it = index_.find(c);
    return it == index_.end() ? -1 : it->second;
}

bool Universe::negation_closed() const {
    for (std::size_t i = 0; i < size(); ++i) {
        if (neg_index_[i] >= 0) continue;
        FormulaPtr inner;
        if (is_neg(members_[i], &inner) && index_of(code(inner)) >= 0) continue;
        return false;
    }
    return true;
}

namespace {
struct Builder {
    std::vector<FormulaPtr> items;
    std::set<Nat> seen;
    void add(const FormulaPtr& f) {
        if (seen.insert(code(f)).second) items.push_back(f);
    }
};
}  // namespace

Universe enumerate_universe(const UniverseSpec& spec) {
    Builder b;
    for (const auto& a : spec.atoms) b.add(a);
    for (int d = 0; d < spec.depth; ++d) {
        const std::vector<FormulaPtr> prev = b.items;
        const std::size_t n = prev.size();
        if (spec.use_neg)
            for (std::size_t i = 0; i < n; ++i) b.add(neg(prev[i]));
        if (spec.use_and)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j) b.add(conj(prev[i], prev[j]));
        if (spec.use_or)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j) b.add(disj(prev[i], prev[j]));
        if (spec.use_imp)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (i != j) b.add(imp(prev[i], prev[j]));
    }
    if (spec.tr_closure) {
        const std::vector<FormulaPtr> prev = b.items;
        for (const auto& f : prev) b.add(tr(quote(f)));
    }
    if (spec.neg_closure) {
        const std::vector<FormulaPtr> prev = b.items;
        for (const auto& f : prev) {
            FormulaPtr inner;
            if (is_neg(f, &inner) && b.seen.count(code(inner))) continue;
            b.add(neg(f));
        }
    }
    for (const auto& f : spec.extra) b.add(f);
    return Universe(std::move(b.items));
}

namespace {
std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto z = s.find_last_not_of(" \t\r");
    return s.substr(a, z - a + 1);
}

FormulaPtr parse_sentence(const std::string& text, int line) {
    FormulaPtr f;
    try {
        f = parse(text);
    } catch (const ParseError& e) {
        throw std::invalid_argument("line " + std::to_string(line) + ": " + e.what());
    }
    if (!is_sentence(f))
        throw std::invalid_argument("line " + std::to_string(line) + ": not a sentence: " + text);
    return f;
}
}  // namespace

Universe load_universe(std::string_view text) {
    UniverseSpec spec;
    bool connectives_given = false;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (auto pct = raw.find('%'); pct != std::string::npos) raw.erase(pct);
        const std::string s = trim(raw);
        if (s.empty()) continue;
        const auto sp = s.find_first_of(" \t");
        const std::string key = s.substr(0, sp);
        const std::string rest = sp == std::string::npos ? "" : trim(s.substr(sp));
        auto bad = [&](const std::string& msg) {
            throw std::invalid_argument("line " + std::to_string(line) + ": " + msg);
        };
        if (key == "atom") {
            spec.atoms.push_back(parse_sentence(rest, line));
        } else if (key == "sentence") {
            spec.extra.push_back(parse_sentence(rest, line));
        } else if (key == "depth") {
            try {
                spec.depth = std::stoi(rest);
            } catch (const std::exception&) {
                bad("bad depth '" + rest + "'");
            }
            if (spec.depth < 0 || spec.depth > 3) bad("depth must be in 0..3");
        } else if (key == "connectives") {
            if (!connectives_given) {
                spec.use_neg = spec.use_and = spec.use_or = spec.use_imp = false;
                connectives_given = true;
            }
            std::istringstream cs(rest);
            std::string c;
            while (std::getline(cs, c, ',')) {
                c = trim(c);
                if (c == "neg") spec.use_neg = true;
                else if (c == "and") spec.use_and = true;
                else if (c == "or") spec.use_or = true;
                else if (c == "imp") spec.use_imp = true;
                else if (!c.empty()) bad("unknown connective '" + c + "'");
            }
        } else if (key == "close") {
            if (rest == "tr") spec.tr_closure = true;
            else if (rest == "neg") spec.neg_closure = true;
            else bad("unknown closure '" + rest + "'");
        } else {
            bad("unknown directive '" + key + "'");
        }
    }
    return enumerate_universe(spec);
}

}  // namespace kt
