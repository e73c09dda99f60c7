#include "distcheck/chase.hpp"

#include <cstdlib>
#include <limits>

#include "distcheck/core.hpp"
#include "distcheck/error.hpp"

namespace distcheck {

NodeId ChaseState::find(NodeId k) const {
  auto it = node_repr.find(k);
  while (it != node_repr.end()) {
    k = it->second;
    it = node_repr.find(k);
  }
  return k;
}

Value ChaseState::resolve(const Value& v) const {
  Value cur = v;
  auto it = value_repr.find(cur);
  while (it != value_repr.end()) {
    cur = it->second;
    it = value_repr.find(cur);
  }
  return cur;
}

ChaseState make_state(const DistributedInstance& d) {
  ChaseState s;
  s.inst = d;
  for (const auto& [k, _] : d.local) s.next_fresh = std::max(s.next_fresh, k + 1);
  return s;
}

NodeId fresh_node(const ChaseState& s) {
  NodeId max_used = s.next_fresh;
  for (const auto& [k, _] : s.inst.local)
    max_used = std::max(max_used, k + 1);
  return max_used;
}

namespace {

bool holds_in(const DistributedInstance& d, const Atom& a,
              const Valuation& w) {
  Fact f = w(a.rel);
  if (!a.at) return d.global.count(f) > 0;
  auto it = d.local.find(w(*a.at));
  return it != d.local.end() && it->second.count(f) > 0;
}

bool body_holds(const Dtgd& s, const Valuation& w,
                const DistributedInstance& d) {
  for (const Atom& a : s.body)
    if (!holds_in(d, a, w)) return false;
  for (const CompAtom& c : s.comps) {
    Value l = w(c.lhs), r = w(c.rhs);
    if (!(c.op == CompOp::Lt ? l < r : l <= r)) return false;
  }
  return true;
}

/// Restriction of w to the body variables of s.
Valuation body_part(const Dtgd& s, const Valuation& w) {
  Valuation base;
  for (const std::string& x : data_vars(s.body)) base.data.emplace(x, w.data.at(x));
  for (const std::string& k : node_vars(s.body)) base.node.emplace(k, w.node.at(k));
  return base;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  if (b > std::numeric_limits<std::uint64_t>::max() - a)
    return std::numeric_limits<std::uint64_t>::max();
  return a + b;
}

std::uint64_t sat_pow(std::uint64_t base, std::size_t exp) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r = sat_mul(r, base);
  return r;
}

struct NormalizedConstraint {
  std::size_t origin;
  Constraint item;
  bool node_creating = false;
};

std::uint64_t default_budget(const DistributedInstance& d,
                             const std::vector<NormalizedConstraint>& parts,
                             const ConstraintSet& sigma) {
  std::uint64_t pool = d.adom().size() + constants_of(sigma).size();
  pool = std::max<std::uint64_t>(pool, 1);
  std::uint64_t nodes = d.local.size();
  for (const NormalizedConstraint& p : parts)
    if (p.node_creating)
      nodes = sat_add(nodes, sat_pow(pool, body_data_vars(p.item).size()));
  nodes = std::max<std::uint64_t>(nodes, 1);
  std::uint64_t budget = 0;
  for (const NormalizedConstraint& p : parts) {
    std::uint64_t fires = sat_pow(pool, body_data_vars(p.item).size());
    if (!p.node_creating) fires = sat_mul(fires, nodes);
    budget = sat_add(budget, fires);
  }
  return std::max<std::uint64_t>(budget, 16);
}

void substitute_value(FactSet& fs, const Value& from, const Value& to) {
  FactSet out;
  for (Fact f : fs) {
    for (Value& v : f.args)
      if (v == from) v = to;
    out.insert(std::move(f));
  }
  fs = std::move(out);
}

}  // namespace

bool applicable(const Dtgd& s, const Valuation& w, const ChaseState& state) {
  if (!body_holds(s, w, state.inst)) return false;
  auto head_nodes = node_vars(s.head);
  bool creating = false;
  std::string head_var;
  if (!head_nodes.empty()) {
    head_var = *head_nodes.begin();
    creating = node_vars(s.body).count(head_var) == 0;
  }
  if (creating && w(NodeTerm::variable(head_var)) != fresh_node(state))
    return false;
  // No extension of w over the head-only variables may already satisfy
  // the head.
  return !extend_to_head(body_part(s, w), s.head, state.inst).has_value();
}

ChaseState apply_step(const Dtgd& s, const Valuation& w, ChaseState state) {
  if (!applicable(s, w, state))
    throw Error(ErrorCode::NotApplicable, "chase step is not applicable");
  for (const Atom& a : s.head) {
    if (a.at)
      state.inst.add_local(w(*a.at), w(a.rel));
    else
      state.inst.add_global(w(a.rel));
  }
  for (const auto& [k, _] : state.inst.local)
    state.next_fresh = std::max(state.next_fresh, k + 1);
  ++state.steps;
  return state;
}

ChaseTrace run_chase(const DistributedInstance& d, const ConstraintSet& sigma,
                     const ChaseOptions& opts) {
  std::vector<NormalizedConstraint> parts;
  for (std::size_t i = 0; i < sigma.items.size(); ++i) {
    if (const auto* t = std::get_if<Dtgd>(&sigma.items[i])) {
      if (!is_data_full(*t))
        throw Error(ErrorCode::NotDataFull,
                    "chase requires data-full dtgds");
      for (Dtgd& part : normalize_heads(*t)) {
        NormalizedConstraint nc{i, {}, false};
        auto heads = node_vars(part.head);
        nc.node_creating =
            !heads.empty() && node_vars(part.body).count(*heads.begin()) == 0;
        nc.item = std::move(part);
        parts.push_back(std::move(nc));
      }
    } else {
      parts.push_back({i, sigma.items[i], false});
    }
  }

  std::uint64_t budget =
      opts.budget ? *opts.budget : default_budget(d, parts, sigma);
  if (const char* env = std::getenv("DISTCHECK_STEP_BUDGET"))
    budget = std::strtoull(env, nullptr, 10);

  ChaseTrace trace;
  trace.initial = d;
  trace.state = make_state(d);
  Schema schema = merge_schemas(sigma.schema, schema_of(d));

  auto charge = [&]() {
    if (++trace.state.steps > budget)
      throw Error(ErrorCode::Internal,
                  "chase step budget exceeded (" + std::to_string(budget) +
                      " steps); the chase should terminate well below it");
  };

  bool progressed = true;
  while (progressed) {
    progressed = false;
    for (std::size_t pi = 0; pi < parts.size() && !progressed; ++pi) {
      const NormalizedConstraint& part = parts[pi];
      if (const auto* t = std::get_if<Dtgd>(&part.item)) {
        auto vals =
            find_valuations(t->body, t->comps, trace.state.inst, schema);
        for (Valuation w : vals) {
          if (part.node_creating) {
            auto heads = node_vars(t->head);
            w.node[*heads.begin()] = fresh_node(trace.state);
          }
          if (!applicable(*t, w, trace.state)) continue;
          ChaseStep step;
          step.constraint = part.origin;
          step.val = w;
          for (const Atom& a : t->head)
            step.produced.emplace_back(
                a.at ? std::optional<NodeId>(w(*a.at)) : std::nullopt,
                w(a.rel));
          trace.state = apply_step(*t, w, trace.state);
          --trace.state.steps;  // apply_step counted it; charge() does too
          charge();
          trace.steps.push_back(std::move(step));
          progressed = true;
          break;
        }
      } else {
        const Degd& e = std::get<Degd>(part.item);
        auto vals = find_valuations(e.body, e.comps, trace.state.inst, schema);
        for (const Valuation& w : vals) {
          if (e.sort == EqSort::Node) {
            NodeId a = w.node.at(e.lhs), b = w.node.at(e.rhs);
            if (a == b) continue;
            if (opts.degd_nodes == DegdNodeSemantics::Fail) {
              trace.outcome = ChaseOutcome::Failed;
              trace.failed_constraint = part.origin;
              trace.failure_witness = w;
              return trace;
            }
            NodeId keep = std::min(a, b), drop = std::max(a, b);
            auto& locals = trace.state.inst.local;
            locals[keep].insert(locals[drop].begin(), locals[drop].end());
            locals.erase(drop);
            trace.state.node_repr[drop] = keep;
            charge();
            ChaseStep step;
            step.constraint = part.origin;
            step.val = w;
            step.node_merge = {keep, drop};
            trace.steps.push_back(std::move(step));
            progressed = true;
            break;
          }
          Value a = w.data.at(e.lhs), b = w.data.at(e.rhs);
          if (a == b) continue;
          bool pa = opts.protected_constants.count(a) > 0;
          bool pb = opts.protected_constants.count(b) > 0;
          if (opts.mode == ChaseMode::Strict || (pa && pb)) {
            trace.outcome = ChaseOutcome::Failed;
            trace.failed_constraint = part.origin;
            trace.failure_witness = w;
            return trace;
          }
          Value keep = pa ? a : pb ? b : std::min(a, b);
          Value drop = keep == a ? b : a;
          substitute_value(trace.state.inst.global, drop, keep);
          for (auto& [_, fs] : trace.state.inst.local)
            substitute_value(fs, drop, keep);
          trace.state.value_repr[drop] = keep;
          charge();
          ChaseStep step;
          step.constraint = part.origin;
          step.val = w;
          step.value_merge = {keep, drop};
          trace.steps.push_back(std::move(step));
          progressed = true;
          break;
        }
      }
    }
  }
  return trace;
}

DistributedInstance replay(const ChaseTrace& trace) {
  DistributedInstance d = trace.initial;
  for (const ChaseStep& step : trace.steps) {
    if (step.node_merge) {
      auto [keep, drop] = *step.node_merge;
      d.local[keep].insert(d.local[drop].begin(), d.local[drop].end());
      d.local.erase(drop);
      continue;
    }
    if (step.value_merge) {
      auto [keep, drop] = *step.value_merge;
      substitute_value(d.global, drop, keep);
      for (auto& [_, fs] : d.local) substitute_value(fs, drop, keep);
      continue;
    }
    for (const auto& [node, fact] : step.produced) {
      if (node)
        d.add_local(*node, fact);
      else
        d.add_global(fact);
    }
  }
  return d;
}

}  // namespace distcheck
