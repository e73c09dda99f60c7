#include "distcheck/verify.hpp"

#include <algorithm>
#include <sstream>

#include "distcheck/core.hpp"
#include "distcheck/error.hpp"

namespace distcheck {

namespace {

Schema schema_with(const ConstraintSet& sigma, const Constraint& tau) {
  Schema schema = sigma.schema;
  auto note = [&schema](const RelAtom& a) {
    unsigned arity = static_cast<unsigned>(a.args.size());
    auto [it, fresh] = schema.emplace(a.rel, arity);
    if (!fresh && it->second != arity)
      throw Error(ErrorCode::ArityMismatch,
                  "relation " + a.rel + " used with two arities");
  };
  for (const Atom& a : body_of(tau)) note(a.rel);
  if (const auto* t = std::get_if<Dtgd>(&tau))
    for (const Atom& a : t->head) note(a.rel);
  return schema;
}

bool tau_violated(const DistributedInstance& d, const Constraint& tau,
                  const Schema& schema) {
  for (const Valuation& w :
       find_valuations(body_of(tau), comps_of(tau), d, schema)) {
    if (const auto* t = std::get_if<Dtgd>(&tau)) {
      if (!extend_to_head(w, t->head, d)) return true;
      continue;
    }
    const Degd& e = std::get<Degd>(tau);
    bool equal = e.sort == EqSort::Data
                     ? w.data.at(e.lhs) == w.data.at(e.rhs)
                     : w.node.at(e.lhs) == w.node.at(e.rhs);
    if (!equal) return true;
  }
  return false;
}

/// Enumerates every placement of `facts` onto at most max_nodes nodes,
/// canonicalized by non-increasing per-node fact fingerprints. Stops
/// when fn returns true.
template <typename Fn>
bool for_each_placement(const std::vector<Fact>& facts, unsigned max_nodes,
                        std::uint64_t cap, std::uint64_t& count, Fn&& fn) {
  if (facts.size() > 63)
    throw Error(ErrorCode::BudgetExceeded,
                "placement enumeration supports at most 63 facts");
  const unsigned combos = 1u << max_nodes;
  std::vector<unsigned> mask(facts.size(), 0);
  std::vector<std::uint64_t> print(max_nodes);
  for (;;) {
    if (++count > cap)
      throw Error(ErrorCode::BudgetExceeded,
                  "instance enumeration exceeded " + std::to_string(cap) +
                      " candidates");
    std::fill(print.begin(), print.end(), 0);
    for (std::size_t i = 0; i < mask.size(); ++i)
      for (unsigned n = 0; n < max_nodes; ++n)
        if (mask[i] >> n & 1) print[n] |= std::uint64_t(1) << i;
    bool canonical = true;
    for (unsigned n = 0; n + 1 < max_nodes && canonical; ++n)
      canonical = print[n] >= print[n + 1];
    if (canonical) {
      DistributedInstance d;
      for (const Fact& f : facts) d.add_global(f);
      for (unsigned n = 0; n < max_nodes; ++n)
        for (std::size_t i = 0; i < facts.size(); ++i)
          if (print[n] >> i & 1) d.local[n].insert(facts[i]);
      if (fn(d)) return true;
    }
    std::size_t i = mask.size();
    while (i > 0 && ++mask[i - 1] == combos) mask[--i] = 0;
    if (i == 0) break;
    if (mask.empty()) break;
  }
  return false;
}

void global_candidates(const std::vector<Fact>& space, std::size_t max_facts,
                       std::vector<Fact>& chosen, std::size_t from,
                       std::vector<std::vector<Fact>>& out) {
  out.push_back(chosen);
  if (chosen.size() == max_facts) return;
  for (std::size_t i = from; i < space.size(); ++i) {
    chosen.push_back(space[i]);
    global_candidates(space, max_facts, chosen, i + 1, out);
    chosen.pop_back();
  }
}

}  // namespace

std::optional<DistributedInstance> brute_force_refute(
    const ConstraintSet& sigma, const Constraint& tau,
    const std::vector<Value>& values, unsigned max_nodes,
    std::size_t max_facts, std::uint64_t cap) {
  if (max_nodes < 1)
    throw Error(ErrorCode::Usage, "at least one node is required");
  Schema schema = schema_with(sigma, tau);

  std::vector<Fact> space;
  for (const auto& [rel, arity] : schema) {
    std::vector<std::size_t> idx(arity, 0);
    for (;;) {
      Fact f{rel, {}};
      for (std::size_t i : idx) f.args.push_back(values[i]);
      space.push_back(std::move(f));
      std::size_t i = arity;
      while (i > 0 && ++idx[i - 1] == values.size()) idx[--i] = 0;
      if (i == 0 || arity == 0) break;
    }
  }

  std::set<std::string> needed;
  for (const Atom& a : body_of(tau)) needed.insert(a.rel.rel);

  std::vector<std::vector<Fact>> globals;
  std::vector<Fact> chosen;
  global_candidates(space, max_facts, chosen, 0, globals);

  std::uint64_t count = 0;
  std::optional<DistributedInstance> found;
  for (const std::vector<Fact>& g : globals) {
    std::set<std::string> present;
    for (const Fact& f : g) present.insert(f.rel);
    if (!std::includes(present.begin(), present.end(), needed.begin(),
                       needed.end()))
      continue;  // the conclusion's body cannot match at all
    bool stop = for_each_placement(
        g, max_nodes, cap, count, [&](const DistributedInstance& d) {
          if (!tau_violated(d, tau, schema)) return false;
          if (!model_check(d, sigma).empty()) return false;
          found = d;
          return true;
        });
    if (stop) break;
  }
  return found;
}

CertainResult certain_oracle(const Query& q, const FactSet& instance,
                             const ConstraintSet& sigma, unsigned max_nodes,
                             std::uint64_t cap) {
  std::vector<Fact> facts(instance.begin(), instance.end());
  std::uint64_t count = 0;
  CertainResult result;
  bool any = false;
  for_each_placement(facts, max_nodes, cap, count,
                     [&](const DistributedInstance& d) {
                       if (!model_check(d, sigma).empty()) return false;
                       FactSet naive = naive_eval(q, d);
                       if (!any) {
                         result.facts = std::move(naive);
                         any = true;
                       } else {
                         FactSet merged;
                         for (const Fact& f : result.facts)
                           if (naive.count(f)) merged.insert(f);
                         result.facts = std::move(merged);
                       }
                       return false;
                     });
  result.inconsistent = !any;
  if (result.inconsistent) result.facts.clear();
  return result;
}

// --- alternating Turing machines ---

void validate_atm(const Atm& m) {
  auto fail = [](const std::string& msg) {
    throw Error(ErrorCode::Syntax, "invalid machine: " + msg);
  };
  if (m.states == 0) fail("no states");
  if (m.alphabet.size() < 2) fail("alphabet needs both end markers");
  {
    std::set<char> seen(m.alphabet.begin(), m.alphabet.end());
    if (seen.size() != m.alphabet.size()) fail("duplicate alphabet symbol");
  }
  if (m.accepting.size() != m.states || m.universal.size() != m.states)
    fail("state flag vectors must cover every state");
  if (m.initial >= m.states) fail("initial state out of range");
  if (m.accepting[m.initial]) fail("initial state must be non-accepting");
  const unsigned t = static_cast<unsigned>(m.alphabet.size());
  for (unsigned j = 0; j < 2; ++j)
    for (unsigned q = 0; q < m.states; ++q)
      for (unsigned r = 0; r < t; ++r) {
        auto it = m.delta[j].find({q, r});
        if (it == m.delta[j].end())
          fail("missing transition delta_" + std::to_string(j + 1) +
               " for state " + std::to_string(q) + " on '" + m.alphabet[r] +
               "'");
        const AtmTransition& tr = it->second;
        if (tr.state >= m.states || tr.write >= t)
          fail("transition target out of range");
        if (r == 0 && (tr.write != 0 || !tr.right))
          fail("the left marker must be kept and the head moved right");
        if (r == t - 1 && (tr.write != t - 1 || tr.right))
          fail("the right marker must be kept and the head moved left");
        if (r != 0 && r != t - 1 && (tr.write == 0 || tr.write == t - 1))
          fail("end markers may not be written onto inner cells");
      }
}

Atm parse_atm(const std::string& text, const std::string& file) {
  Atm m;
  std::istringstream in(text);
  std::string line;
  unsigned lineno = 0;
  std::vector<unsigned> accepting, universal;
  auto err = [&](const std::string& msg) {
    throw Error(ErrorCode::Syntax, msg,
                SourceSpan{file, static_cast<int>(lineno), 1});
  };
  auto sym_index = [&](const std::string& tok) -> unsigned {
    if (tok.size() != 1 || m.alphabet.find(tok[0]) == std::string::npos)
      err("unknown alphabet symbol '" + tok + "'");
    return static_cast<unsigned>(m.alphabet.find(tok[0]));
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (kw == "states") {
      if (!(ls >> m.states)) err("expected a state count");
    } else if (kw == "initial") {
      if (!(ls >> m.initial)) err("expected a state");
    } else if (kw == "accepting" || kw == "universal") {
      unsigned q;
      auto& dst = kw == "accepting" ? accepting : universal;
      while (ls >> q) dst.push_back(q);
    } else if (kw == "alphabet") {
      if (!(ls >> m.alphabet)) err("expected an alphabet string");
    } else if (kw == "delta") {
      if (m.alphabet.empty()) err("alphabet must precede delta lines");
      unsigned j, q, q2;
      std::string a, a2, move;
      if (!(ls >> j >> q >> a >> q2 >> a2 >> move) || (j != 1 && j != 2) ||
          (move != "L" && move != "R"))
        err("expected: delta J Q A Q' A' M");
      AtmTransition tr{q2, sym_index(a2), move == "R"};
      if (!m.delta[j - 1].emplace(std::make_pair(q, sym_index(a)), tr).second)
        err("duplicate transition");
    } else {
      err("unknown directive '" + kw + "'");
    }
    std::string trailing;
    if (ls >> trailing) err("trailing input '" + trailing + "'");
  }
  m.accepting.assign(m.states, false);
  m.universal.assign(m.states, false);
  lineno = 0;
  for (unsigned q : accepting) {
    if (q >= m.states) err("accepting state out of range");
    m.accepting[q] = true;
  }
  for (unsigned q : universal) {
    if (q >= m.states) err("universal state out of range");
    m.universal[q] = true;
  }
  validate_atm(m);
  return m;
}

namespace {

std::vector<unsigned> word_indices(const Atm& m, const std::string& word) {
  std::vector<unsigned> w;
  for (char c : word) {
    auto pos = m.alphabet.find(c);
    if (pos == std::string::npos || pos == 0 || pos + 1 == m.alphabet.size())
      throw Error(ErrorCode::WordAlphabetMismatch,
                  std::string("word symbol '") + c +
                      "' is not an inner alphabet symbol");
    w.push_back(static_cast<unsigned>(pos));
  }
  return w;
}

}  // namespace

bool simulate_atm(const Atm& m, const std::string& word, std::uint64_t cap) {
  validate_atm(m);
  std::vector<unsigned> w = word_indices(m, word);
  const std::uint64_t n = w.size();
  const std::uint64_t t = m.alphabet.size();
  std::uint64_t tapes = 1;
  for (std::uint64_t i = 0; i < n; ++i) {
    if (tapes > cap / t)
      throw Error(ErrorCode::StateSpaceCap, "configuration space too large");
    tapes *= t;
  }
  std::uint64_t total = std::uint64_t(m.states) * (n + 2) * tapes;
  if (total > cap)
    throw Error(ErrorCode::StateSpaceCap, "configuration space too large");

  auto encode = [&](unsigned q, std::uint64_t p,
                    const std::vector<unsigned>& tape) {
    std::uint64_t code = (q * (n + 2)) + p;
    for (unsigned c : tape) code = code * t + c;
    return code;
  };

  // succ[cfg] holds the two successor configurations.
  std::vector<std::array<std::uint64_t, 2>> succ(total);
  std::vector<bool> acc(total, false);
  std::vector<unsigned> tape(n);
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t rest = code;
    for (std::uint64_t i = n; i > 0; --i) {
      tape[i - 1] = static_cast<unsigned>(rest % t);
      rest /= t;
    }
    std::uint64_t p = rest % (n + 2);
    unsigned q = static_cast<unsigned>(rest / (n + 2));
    unsigned read = p == 0 ? 0
                  : p == n + 1 ? static_cast<unsigned>(t - 1)
                               : tape[p - 1];
    acc[code] = m.accepting[q];
    for (unsigned j = 0; j < 2; ++j) {
      AtmTransition tr = m.delta[j].at({q, read});
      std::vector<unsigned> next_tape = tape;
      if (p >= 1 && p <= n) next_tape[p - 1] = tr.write;
      std::uint64_t np = tr.right ? p + 1 : p - 1;
      succ[code][j] = encode(tr.state, np, next_tape);
    }
  }

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::uint64_t code = 0; code < total; ++code) {
      if (acc[code]) continue;
      unsigned q = static_cast<unsigned>(code / ((n + 2) * tapes));
      bool now = m.universal[q] ? acc[succ[code][0]] && acc[succ[code][1]]
                                : acc[succ[code][0]] || acc[succ[code][1]];
      if (now) {
        acc[code] = true;
        changed = true;
      }
    }
  }
  return acc[encode(m.initial, 0, w)];
}

namespace {

struct AtmNames {
  unsigned n, t;

  Term x(unsigned i) const { return Term::variable("x" + std::to_string(i)); }
  Term y(unsigned r) const {  // alphabet index, 0-based
    return Term::variable("y" + std::to_string(r + 1));
  }
  Term z(unsigned i) const { return Term::variable("z" + std::to_string(i)); }

  std::string alph(unsigned r) const {
    return "Alph_" + std::to_string(r + 1);
  }
  std::string state(unsigned q) const { return "State_" + std::to_string(q); }

  std::vector<Atom> succ_chain() const {
    std::vector<Atom> out;
    for (unsigned i = 0; i <= n; ++i)
      out.push_back({{"Succ", {x(i), x(i + 1)}}, {}});
    return out;
  }

  /// The configuration atoms for state q, head position p, and the
  /// given inner tape terms, placed at node `at`.
  std::vector<Atom> config(unsigned q, unsigned p,
                           const std::vector<Term>& tape,
                           const std::string& at) const {
    NodeTerm node = NodeTerm::variable(at);
    std::vector<Atom> out;
    out.push_back({{state(q), {}}, node});
    out.push_back({{"Head", {x(p)}}, node});
    out.push_back({{"Sym", {x(0), y(0)}}, node});
    out.push_back({{"Sym", {x(n + 1), y(t - 1)}}, node});
    for (unsigned i = 1; i <= n; ++i)
      out.push_back({{"Sym", {x(i), tape[i - 1]}}, node});
    return out;
  }
};

Atom at_node(RelAtom a, const std::string& node) {
  return {std::move(a), NodeTerm::variable(node)};
}

}  // namespace

std::pair<ConstraintSet, Constraint> gen_atm_instance(
    const Atm& m, const std::string& word) {
  validate_atm(m);
  std::vector<unsigned> w = word_indices(m, word);
  AtmNames nm{static_cast<unsigned>(w.size()),
              static_cast<unsigned>(m.alphabet.size())};
  const unsigned n = nm.n, t = nm.t;

  ConstraintSet sigma;
  sigma.schema["Succ"] = 2;
  sigma.schema["Alph"] = 1;
  for (unsigned r = 0; r < t; ++r) sigma.schema[nm.alph(r)] = 1;
  sigma.schema["Sym"] = 2;
  for (unsigned q = 0; q < m.states; ++q) sigma.schema[nm.state(q)] = 0;
  sigma.schema["Head"] = 1;
  sigma.schema["Acc"] = 0;
  sigma.schema["Acc_1"] = 0;
  sigma.schema["Acc_2"] = 0;

  std::vector<Term> ztape;
  for (unsigned i = 1; i <= n; ++i) ztape.push_back(nm.z(i));

  // Configuration generators: one fresh node per state, head position,
  // and inner tape content.
  for (unsigned q = 0; q < m.states; ++q)
    for (unsigned p = 0; p <= n + 1; ++p) {
      Dtgd g;
      g.body = nm.succ_chain();
      g.body.push_back({{nm.alph(0), {nm.y(0)}}, {}});
      g.body.push_back({{nm.alph(t - 1), {nm.y(t - 1)}}, {}});
      for (const Term& zt : ztape) g.body.push_back({{"Alph", {zt}}, {}});
      g.head = nm.config(q, p, ztape, "k");
      if (m.accepting[q]) g.head.push_back(at_node({"Acc", {}}, "k"));
      sigma.items.push_back(std::move(g));
    }

  // Transition collectors: the predecessor configuration earns Acc_j
  // once its delta_j successor configuration is accepting.
  for (unsigned q = 0; q < m.states; ++q)
    for (unsigned p = 0; p <= n + 1; ++p)
      for (unsigned j = 0; j < 2; ++j) {
        unsigned read = p == 0 ? 0 : p == n + 1 ? t - 1 : 0;
        std::vector<unsigned> reads;
        if (p == 0 || p == n + 1)
          reads.push_back(read);
        else
          for (unsigned r = 1; r + 1 < t; ++r) reads.push_back(r);
        for (unsigned r : reads) {
          AtmTransition tr = m.delta[j].at({q, r});
          Dtgd c;
          c.body = nm.succ_chain();
          std::vector<Term> next_tape = ztape;
          if (p == 0 || p == n + 1) {
            c.body.push_back({{nm.alph(r), {nm.y(r)}}, {}});
          } else {
            Term read_t = ztape[p - 1];
            c.body.push_back({{nm.alph(r), {read_t}}, {}});
            if (tr.write != r) {
              Term write_t = Term::variable(read_t.var + "'");
              c.body.push_back({{nm.alph(tr.write), {write_t}}, {}});
              next_tape[p - 1] = write_t;
            }
          }
          unsigned np = tr.right ? p + 1 : p - 1;
          auto pred = nm.config(q, p, ztape, "k");
          auto succ = nm.config(tr.state, np, next_tape, "k'");
          c.body.insert(c.body.end(), pred.begin(), pred.end());
          c.body.insert(c.body.end(), succ.begin(), succ.end());
          c.body.push_back(at_node({"Acc", {}}, "k'"));
          c.head.push_back(at_node({"Acc_" + std::to_string(j + 1), {}}, "k"));
          sigma.items.push_back(std::move(c));
        }
      }

  // Acceptance: universal states need both branch certificates,
  // existential states either one.
  for (unsigned q = 0; q < m.states; ++q) {
    if (m.universal[q]) {
      Dtgd a;
      a.body = {at_node({nm.state(q), {}}, "k"), at_node({"Acc_1", {}}, "k"),
                at_node({"Acc_2", {}}, "k")};
      a.head = {at_node({"Acc", {}}, "k")};
      sigma.items.push_back(std::move(a));
    } else {
      for (unsigned j = 1; j <= 2; ++j) {
        Dtgd a;
        a.body = {at_node({nm.state(q), {}}, "k"),
                  at_node({"Acc_" + std::to_string(j), {}}, "k")};
        a.head = {at_node({"Acc", {}}, "k")};
        sigma.items.push_back(std::move(a));
      }
    }
  }

  Dtgd tau;
  tau.body = nm.succ_chain();
  for (unsigned r = 0; r < t; ++r) {
    tau.body.push_back({{nm.alph(r), {nm.y(r)}}, {}});
    tau.body.push_back({{"Alph", {nm.y(r)}}, {}});
  }
  std::vector<Term> initial_tape;
  for (unsigned wi : w) initial_tape.push_back(nm.y(wi));
  auto c0 = nm.config(m.initial, 0, initial_tape, "k");
  tau.body.insert(tau.body.end(), c0.begin(), c0.end());
  tau.head = {at_node({"Acc", {}}, "k")};

  return {std::move(sigma), Constraint(std::move(tau))};
}

}  // namespace distcheck
