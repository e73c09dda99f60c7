#include "distcheck/implication.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

#include "distcheck/core.hpp"
#include "distcheck/error.hpp"

namespace distcheck {

namespace {

std::set<Value> all_constants(const ConstraintSet& sigma,
                              const Constraint& tau) {
  std::set<Value> cs = constants_of(sigma);
  auto ct = constants_of(tau);
  cs.insert(ct.begin(), ct.end());
  return cs;
}

std::size_t body_var_count(const Constraint& tau) {
  std::set<std::string> vars = body_data_vars(tau);
  auto cv = data_vars(comps_of(tau));
  vars.insert(cv.begin(), cv.end());
  return vars.size();
}

}  // namespace

std::vector<Value> build_domain(const ConstraintSet& sigma,
                                const Constraint& tau, Domain domain) {
  std::set<Value> consts = all_constants(sigma, tau);
  for (const Value& c : consts) check_domain(c, domain);
  long long m = static_cast<long long>(body_var_count(tau));

  std::set<Value> dom;
  if (consts.empty()) {
    for (long long j = 0; j < m; ++j) dom.insert(Value(j));
    return {dom.begin(), dom.end()};
  }
  std::vector<Value> cs(consts.begin(), consts.end());
  for (const Value& c : cs) dom.insert(c);
  const Value& lo = cs.front();
  const Value& hi = cs.back();
  for (long long j = 1; j <= m; ++j) {
    Value below = lo - Value(j);
    if (domain != Domain::Nat || below >= Value(0)) dom.insert(below);
    dom.insert(hi + Value(j));
  }
  for (std::size_t i = 0; i + 1 < cs.size(); ++i) {
    if (domain == Domain::Rat) {
      for (long long j = 1; j <= m; ++j)
        dom.insert(cs[i] + Value(j, m + 1) * (cs[i + 1] - cs[i]));
    } else {
      for (long long j = 1; j <= m; ++j) {
        Value v = cs[i] + Value(j);
        if (v < cs[i + 1]) dom.insert(v);
      }
    }
  }
  return {dom.begin(), dom.end()};
}

namespace {

/// Data and node variables of the relational body, in first occurrence
/// order.
void body_var_order(const std::vector<Atom>& rbody,
                    std::vector<std::string>& data,
                    std::vector<std::string>& node) {
  std::set<std::string> seen;
  for (const Atom& a : rbody) {
    for (const Term& t : a.rel.args)
      if (t.is_var() && seen.insert(t.var).second) data.push_back(t.var);
    if (a.at && a.at->is_var() && seen.insert("@" + a.at->var).second)
      node.push_back(a.at->var);
  }
}

bool comps_hold(const std::vector<CompAtom>& comps, const Valuation& v) {
  for (const CompAtom& c : comps) {
    Value l = v(c.lhs), r = v(c.rhs);
    if (!(c.op == CompOp::Lt ? l < r : l <= r)) return false;
  }
  return true;
}

DistributedInstance instantiate(const std::vector<Atom>& rbody,
                                const Valuation& v) {
  DistributedInstance d;
  for (const Atom& a : rbody) {
    if (a.at)
      d.add_local(v(*a.at), v(a.rel));
    else
      d.add_global(v(a.rel));
  }
  return d;
}

/// Calls fn for every comparison-satisfying valuation, in
/// lexicographic order over the value pool.
template <typename Fn>
void for_each_canonical(const Constraint& tau, const std::vector<Value>& dom,
                        Fn&& fn) {
  const std::vector<Atom>& rbody = body_of(tau);
  const std::vector<CompAtom>& comps = comps_of(tau);
  std::vector<std::string> data, node;
  body_var_order(rbody, data, node);
  Valuation v;
  for (std::size_t i = 0; i < node.size(); ++i)
    v.node.emplace(node[i], static_cast<NodeId>(i));
  if (data.empty()) {
    if (comps_hold(comps, v)) fn(v, instantiate(rbody, v));
    return;
  }
  if (dom.empty()) return;
  std::vector<std::size_t> idx(data.size(), 0);
  for (;;) {
    for (std::size_t i = 0; i < data.size(); ++i)
      v.data[data[i]] = dom[idx[i]];
    if (comps_hold(comps, v)) fn(v, instantiate(rbody, v));
    std::size_t i = data.size();
    while (i > 0 && ++idx[i - 1] == dom.size()) idx[--i] = 0;
    if (i == 0) break;
  }
}

bool constraint_violated(const DistributedInstance& d, const Constraint& tau,
                         const Valuation& w) {
  for (const Atom& a : body_of(tau)) {
    Fact f = w(a.rel);
    if (!a.at) {
      if (!d.global.count(f)) return false;
    } else {
      auto it = d.local.find(w(*a.at));
      if (it == d.local.end() || !it->second.count(f)) return false;
    }
  }
  if (!comps_hold(comps_of(tau), w)) return false;
  if (const auto* t = std::get_if<Dtgd>(&tau))
    return !extend_to_head(w, t->head, d).has_value();
  const Degd& e = std::get<Degd>(tau);
  return e.sort == EqSort::Data ? w.data.at(e.lhs) != w.data.at(e.rhs)
                                : w.node.at(e.lhs) != w.node.at(e.rhs);
}

Valuation resolve_valuation(const Valuation& v, const ChaseState& state) {
  Valuation out;
  for (const auto& [x, val] : v.data) out.data.emplace(x, state.resolve(val));
  for (const auto& [k, id] : v.node) out.node.emplace(k, state.find(id));
  return out;
}

void check_data_full(const ConstraintSet& sigma) {
  for (const Constraint& c : sigma.items)
    if (const auto* t = std::get_if<Dtgd>(&c))
      if (!is_data_full(*t)) {
        std::set<std::string> body = data_vars(t->body);
        std::string offending;
        for (const std::string& x : data_vars(t->head))
          if (!body.count(x)) {
            offending = x;
            break;
          }
        throw Error(ErrorCode::Fragment,
                    "implication requires data-full constraints; head "
                    "variable " +
                        offending + " does not occur in the body");
      }
}

bool comparison_free(const ConstraintSet& sigma, const Constraint& tau) {
  for (const Constraint& c : sigma.items)
    if (!comps_of(c).empty()) return false;
  return comps_of(tau).empty();
}

}  // namespace

std::vector<CanonicalDb> canonical_instances(const ConstraintSet& sigma,
                                             const Constraint& tau,
                                             Domain domain) {
  std::vector<Value> dom = build_domain(sigma, tau, domain);
  std::vector<CanonicalDb> out;
  for_each_canonical(tau, dom, [&](const Valuation& v,
                                   DistributedInstance db) {
    out.push_back({v, std::move(db)});
  });
  return out;
}

std::optional<Valuation> head_extension_exists(const Valuation& v,
                                               const Constraint& tau,
                                               const ChaseState& state) {
  Valuation base = resolve_valuation(v, state);
  if (const auto* t = std::get_if<Dtgd>(&tau))
    return extend_to_head(base, t->head, state.inst);
  const Degd& e = std::get<Degd>(tau);
  bool equal = e.sort == EqSort::Data
                   ? base.data.at(e.lhs) == base.data.at(e.rhs)
                   : base.node.at(e.lhs) == base.node.at(e.rhs);
  if (equal) return base;
  return std::nullopt;
}

namespace {

void verify_refutation(const DistributedInstance& model,
                       const ConstraintSet& sigma, const Constraint& tau,
                       const Valuation& witness) {
  ConstraintSet cs = sigma;
  if (!model_check(model, cs).empty())
    throw Error(ErrorCode::Internal,
                "refutation countermodel does not satisfy the premises");
  if (!constraint_violated(model, tau, witness))
    throw Error(ErrorCode::Internal,
                "refutation witness does not violate the conclusion");
}

}  // namespace

ImplicationVerdict decide_implication(const ConstraintSet& sigma,
                                      const Constraint& tau,
                                      const ImplicationOptions& opts) {
  check_data_full(sigma);
  std::vector<Value> dom = build_domain(sigma, tau, opts.domain);

  ImplicationVerdict verdict;

  if (comparison_free(sigma, tau)) {
    // One one-one canonical instance with the identifying chase
    // suffices; fresh values sit above every constant.
    verdict.stats.single_db_mode = true;
    std::set<Value> tau_consts = constants_of(tau);
    Value next = Value(0);
    std::set<Value> consts = all_constants(sigma, tau);
    if (!consts.empty()) next = *consts.rbegin() + Value(1);
    std::vector<std::string> data, node;
    body_var_order(body_of(tau), data, node);
    Valuation v;
    for (const std::string& x : data) {
      v.data.emplace(x, next);
      next = next + Value(1);
    }
    for (std::size_t i = 0; i < node.size(); ++i)
      v.node.emplace(node[i], static_cast<NodeId>(i));
    DistributedInstance db = instantiate(body_of(tau), v);
    ChaseOptions copts;
    copts.mode = ChaseMode::Identify;
    copts.degd_nodes = opts.degd_nodes;
    copts.protected_constants = tau_consts;
    ChaseTrace trace = run_chase(db, sigma, copts);
    verdict.stats.canonical_dbs = 1;
    verdict.stats.chase_steps = trace.state.steps;
    if (trace.outcome == ChaseOutcome::Failed) return verdict;
    if (head_extension_exists(v, tau, trace.state)) return verdict;
    verdict.holds = false;
    verdict.countermodel = trace.state.inst;
    verdict.witness = resolve_valuation(v, trace.state);
    verify_refutation(*verdict.countermodel, sigma, tau, *verdict.witness);
    return verdict;
  }

  std::vector<CanonicalDb> dbs = canonical_instances(sigma, tau, opts.domain);
  std::size_t total = dbs.size();
  std::vector<std::uint64_t> steps(total, 0);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> best{total};
  std::mutex result_mu;
  std::optional<DistributedInstance> counter;
  std::optional<Valuation> witness;
  std::exception_ptr error;

  auto work = [&]() {
    try {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= total || i >= best.load()) break;
        ChaseOptions copts;
        copts.mode = ChaseMode::Strict;
        copts.degd_nodes = opts.degd_nodes;
        ChaseTrace trace = run_chase(dbs[i].db, sigma, copts);
        steps[i] = trace.state.steps;
        if (trace.outcome == ChaseOutcome::Failed) continue;
        if (head_extension_exists(dbs[i].v, tau, trace.state)) continue;
        std::size_t prev = best.load();
        while (i < prev && !best.compare_exchange_weak(prev, i)) {
        }
        if (i <= best.load()) {
          std::lock_guard<std::mutex> lock(result_mu);
          if (i <= best.load()) {
            counter = trace.state.inst;
            witness = resolve_valuation(dbs[i].v, trace.state);
          }
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(result_mu);
      if (!error) error = std::current_exception();
      best.store(0);
    }
  };

  unsigned jobs = std::max(1u, opts.jobs);
  if (jobs == 1 || total <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  if (best.load() >= total) {
    verdict.stats.canonical_dbs = total;
    for (std::uint64_t s : steps) verdict.stats.chase_steps += s;
    return verdict;
  }
  std::size_t stop = best.load();
  verdict.stats.canonical_dbs = stop + 1;
  for (std::size_t i = 0; i <= stop; ++i)
    verdict.stats.chase_steps += steps[i];
  verdict.holds = false;
  verdict.countermodel = counter;
  verdict.witness = witness;
  verify_refutation(*verdict.countermodel, sigma, tau, *verdict.witness);
  return verdict;
}

}  // namespace distcheck
