#include "distcheck/pc.hpp"

#include <algorithm>
#include <deque>

#include "distcheck/core.hpp"
#include "distcheck/error.hpp"

namespace distcheck {

namespace {

std::vector<Atom> bare_atoms(const std::vector<RelAtom>& atoms) {
  std::vector<Atom> out;
  out.reserve(atoms.size());
  for (const RelAtom& a : atoms) out.push_back({a, {}});
  return out;
}

}  // namespace

FactSet eval_cq(const Query& q, const FactSet& facts) {
  DistributedInstance d;
  d.global = facts;
  FactSet out;
  for (const Valuation& v :
       find_valuations(bare_atoms(q.body), {}, d, {}))
    out.insert(v(q.head));
  return out;
}

FactSet naive_eval(const Query& q, const DistributedInstance& d) {
  FactSet out;
  for (const auto& [_, facts] : d.local) {
    FactSet part = eval_cq(q, facts);
    out.insert(part.begin(), part.end());
  }
  return out;
}

PcCheck pc_on_instance(const Query& q, const DistributedInstance& d) {
  FactSet full = eval_cq(q, d.global);
  FactSet naive = naive_eval(q, d);
  PcCheck check;
  for (const Fact& f : full)
    if (!naive.count(f)) check.missing.insert(f);
  check.correct = check.missing.empty();
  return check;
}

namespace {

std::set<std::string> query_vars(const Query& q) {
  std::set<std::string> vars;
  for (const RelAtom& a : q.body) {
    auto av = data_vars(a);
    vars.insert(av.begin(), av.end());
  }
  return vars;
}

std::string fresh_name(std::string base, std::set<std::string>& used) {
  while (used.count(base)) base += "'";
  used.insert(base);
  return base;
}

}  // namespace

Dtgd encode_pc(const Query& q) {
  std::set<std::string> head_vars = data_vars(q.head);
  std::set<std::string> used = query_vars(q);
  std::map<std::string, std::string> rename;
  for (const std::string& x : used)
    if (!head_vars.count(x)) rename.emplace(x, "");
  for (auto& [x, nx] : rename) nx = fresh_name(x + "'", used);
  std::string node = fresh_name("k", used);

  Dtgd out;
  out.body = bare_atoms(q.body);
  for (const RelAtom& a : q.body) {
    Atom h{a, NodeTerm::variable(node)};
    for (Term& t : h.rel.args)
      if (t.is_var())
        if (auto it = rename.find(t.var); it != rename.end()) t.var = it->second;
    out.head.push_back(std::move(h));
  }
  return out;
}

Dtgd encode_strong_pc(const Query& q) {
  std::set<std::string> used = query_vars(q);
  std::string node = fresh_name("k", used);
  Dtgd out;
  out.body = bare_atoms(q.body);
  for (const RelAtom& a : q.body)
    out.head.push_back({a, NodeTerm::variable(node)});
  return out;
}

ImplicationVerdict pc_wrt_constraints(const Query& q,
                                      const ConstraintSet& sigma, bool strong,
                                      const ImplicationOptions& opts) {
  Constraint tau = strong ? Constraint(encode_strong_pc(q))
                          : Constraint(encode_pc(q));
  return decide_implication(sigma, tau, opts);
}

namespace {

// One candidate distribution of the fixed global instance, refined
// until it satisfies sigma or dies.
struct Branch {
  DistributedInstance inst;
  NodeId next_fresh = 0;
};

/// Assignments of `vars` over `pool` under which every head fact lands
/// inside the fixed global instance.
void head_choices(const std::vector<std::string>& vars,
                  const std::vector<Value>& pool, const Dtgd& t,
                  const Valuation& base, const FactSet& global,
                  std::vector<Valuation>& out) {
  Valuation v = base;
  auto admissible = [&]() {
    for (const Atom& a : t.head)
      if (!global.count(v(a.rel))) return false;
    return true;
  };
  if (vars.empty()) {
    if (admissible()) out.push_back(v);
    return;
  }
  std::vector<std::size_t> idx(vars.size(), 0);
  if (pool.empty()) return;
  for (;;) {
    for (std::size_t i = 0; i < vars.size(); ++i) v.data[vars[i]] = pool[idx[i]];
    if (admissible()) out.push_back(v);
    std::size_t i = vars.size();
    while (i > 0 && ++idx[i - 1] == pool.size()) idx[--i] = 0;
    if (i == 0) break;
  }
}

}  // namespace

CertainResult certain_answers(const Query& q, const FactSet& instance,
                              const ConstraintSet& sigma, Domain domain) {
  for (const Value& c : constants_of(sigma)) check_domain(c, domain);
  Schema schema = sigma.schema;
  {
    DistributedInstance seed;
    seed.global = instance;
    schema = merge_schemas(schema, schema_of(seed));
  }
  std::set<Value> adom_set;
  for (const Fact& f : instance)
    adom_set.insert(f.args.begin(), f.args.end());
  std::vector<Value> pool(adom_set.begin(), adom_set.end());

  std::deque<Branch> queue;
  {
    Branch root;
    root.inst.global = instance;
    queue.push_back(std::move(root));
  }

  const std::size_t kBranchCap = 200000;
  std::size_t processed = 0;
  CertainResult result;
  bool any_completed = false;

  while (!queue.empty()) {
    if (++processed > kBranchCap)
      throw Error(ErrorCode::BudgetExceeded,
                  "certain-answer branch enumeration exceeded " +
                      std::to_string(kBranchCap) + " branches");
    Branch br = std::move(queue.front());
    queue.pop_front();

    bool dead = false;
    bool violated = true;
    std::size_t rounds = 0;
    while (violated && !dead) {
      if (++rounds > kBranchCap)
        throw Error(ErrorCode::Internal,
                    "certain-answer repair loop failed to converge");
      violated = false;
      for (const Constraint& c : sigma.items) {
        if (const auto* t = std::get_if<Dtgd>(&c)) {
          std::optional<Valuation> bad;
          for (const Valuation& w :
               find_valuations(t->body, t->comps, br.inst, schema))
            if (!extend_to_head(w, t->head, br.inst)) {
              bad = w;
              break;
            }
          if (!bad) continue;
          violated = true;
          // Repair: pick values for head-only data variables so that
          // every head fact stays inside the fixed global instance,
          // then place the facts (fresh node per existential node
          // variable). Several value choices fork the branch.
          std::set<std::string> body_dv = data_vars(t->body);
          std::vector<std::string> free_dv;
          for (const std::string& x : data_vars(t->head))
            if (!body_dv.count(x)) free_dv.push_back(x);
          std::vector<Valuation> choices;
          head_choices(free_dv, pool, *t, *bad, br.inst.global, choices);
          if (choices.empty()) {
            if (node_vars(t->head).empty())
              throw Error(ErrorCode::Consistency,
                          "constraint requires a global fact outside the "
                          "fixed instance");
            dead = true;
            break;
          }
          std::set<std::string> body_nv = node_vars(t->body);
          std::vector<Branch> children;
          for (const Valuation& choice : choices) {
            Branch child = br;
            Valuation w = choice;
            for (const std::string& k : node_vars(t->head))
              if (!body_nv.count(k)) w.node[k] = child.next_fresh++;
            bool bad_local = false;
            for (const Atom& a : t->head) {
              if (!a.at) continue;  // admissible choices are global already
              Fact f = w(a.rel);
              if (!child.inst.global.count(f)) {
                bad_local = true;
                break;
              }
              child.inst.local[w(*a.at)].insert(std::move(f));
            }
            if (!bad_local) children.push_back(std::move(child));
          }
          if (children.empty()) {
            dead = true;
            break;
          }
          br = std::move(children.front());
          for (std::size_t i = 1; i < children.size(); ++i)
            queue.push_back(std::move(children[i]));
          break;
        }
        const Degd& e = std::get<Degd>(c);
        std::optional<Valuation> bad;
        for (const Valuation& w :
             find_valuations(e.body, e.comps, br.inst, schema)) {
          bool equal = e.sort == EqSort::Data
                           ? w.data.at(e.lhs) == w.data.at(e.rhs)
                           : w.node.at(e.lhs) == w.node.at(e.rhs);
          if (!equal) {
            bad = w;
            break;
          }
        }
        if (!bad) continue;
        violated = true;
        if (e.sort == EqSort::Data) {
          // Values are pinned by the fixed global instance.
          dead = true;
          break;
        }
        NodeId a = bad->node.at(e.lhs), b = bad->node.at(e.rhs);
        NodeId keep = std::min(a, b), drop = std::max(a, b);
        br.inst.local[keep].insert(br.inst.local[drop].begin(),
                                   br.inst.local[drop].end());
        br.inst.local.erase(drop);
        break;
      }
    }
    if (dead) continue;
    FactSet naive = naive_eval(q, br.inst);
    if (!any_completed) {
      result.facts = std::move(naive);
      any_completed = true;
    } else {
      FactSet merged;
      for (const Fact& f : result.facts)
        if (naive.count(f)) merged.insert(f);
      result.facts = std::move(merged);
    }
    if (any_completed && result.facts.empty() && queue.empty()) break;
  }

  result.inconsistent = !any_completed;
  if (result.inconsistent) result.facts.clear();
  return result;
}

}  // namespace distcheck
