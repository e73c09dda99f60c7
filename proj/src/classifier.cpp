#include "distcheck/classifier.hpp"

#include <algorithm>
#include <sstream>

#include "distcheck/core.hpp"
#include "distcheck/error.hpp"

namespace distcheck {

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::NodeCreating: return "node-creating";
    case Kind::DataCollecting: return "data-collecting";
    case Kind::GlobalDtgd: return "global-dtgd";
    case Kind::NodeIdentifying: return "node-identifying";
    case Kind::ValueIdentifying: return "value-identifying";
  }
  return "?";
}

const char* form_name(Form f) {
  switch (f) {
    case Form::Mixed: return "mixed";
    case Form::Global: return "global";
    case Form::Local: return "local";
    case Form::GlobalLocal: return "global-local";
    case Form::LocalGlobal: return "local-global";
  }
  return "?";
}

const char* type_code_name(TypeCode t) {
  switch (t) {
    case TypeCode::G1: return "G1";
    case TypeCode::G2: return "G2";
    case TypeCode::G3: return "G3";
    case TypeCode::G4: return "G4";
    case TypeCode::C1: return "C1";
    case TypeCode::C2: return "C2";
    case TypeCode::C3: return "C3";
    case TypeCode::E1: return "E1";
    case TypeCode::E2: return "E2";
    case TypeCode::E3: return "E3";
    case TypeCode::E4: return "E4";
  }
  return "?";
}

const char* verdict_name(ComplexityVerdict v) {
  switch (v) {
    case ComplexityVerdict::Undecidable: return "Undecidable";
    case ComplexityVerdict::Exptime: return "EXPTIME";
    case ComplexityVerdict::Pspace: return "PSPACE";
    case ComplexityVerdict::Pi2: return "Pi2";
  }
  return "?";
}

std::set<std::string> context(const std::string& node_var,
                              const std::vector<Atom>& atoms) {
  std::set<std::string> ctx;
  for (const Atom& a : atoms) {
    if (!a.at || !a.at->is_var() || a.at->var != node_var) continue;
    for (const Term& t : a.rel.args)
      if (t.is_var()) ctx.insert(t.var);
  }
  return ctx;
}

std::set<std::string> context_of(const std::string& node_var,
                                 const Constraint& c) {
  if (const auto* t = std::get_if<Dtgd>(&c)) {
    std::vector<Atom> atoms = t->body;
    atoms.insert(atoms.end(), t->head.begin(), t->head.end());
    return context(node_var, atoms);
  }
  return context(node_var, std::get<Degd>(c).body);
}

namespace {

/// All atoms distributed at one common node variable?
bool single_node(const std::vector<Atom>& atoms) {
  if (atoms.empty()) return false;
  std::optional<std::string> k;
  for (const Atom& a : atoms) {
    if (!a.at) return false;
    if (k && *k != a.at->var) return false;
    k = a.at->var;
  }
  return true;
}

bool all_bare(const std::vector<Atom>& atoms) {
  for (const Atom& a : atoms)
    if (a.at) return false;
  return true;
}

Form form_of(const std::vector<Atom>& body, const std::vector<Atom>& head) {
  if (all_bare(body) && all_bare(head)) return Form::Global;
  std::vector<Atom> all = body;
  all.insert(all.end(), head.begin(), head.end());
  if (single_node(all)) return Form::Local;
  if (all_bare(body) && single_node(head)) return Form::GlobalLocal;
  if (single_node(body) && all_bare(head)) return Form::LocalGlobal;
  return Form::Mixed;
}

Form form_of(const Degd& e) {
  if (all_bare(e.body)) return Form::Global;
  if (single_node(e.body)) return Form::Local;
  return Form::Mixed;
}

unsigned ctx_size(const std::string& v, const std::vector<Atom>& atoms) {
  return static_cast<unsigned>(context(v, atoms).size());
}

}  // namespace

KindTag classify_kind(const Constraint& c) {
  if (const auto* e = std::get_if<Degd>(&c)) {
    KindTag tag;
    tag.kind = e->sort == EqSort::Node ? Kind::NodeIdentifying
                                       : Kind::ValueIdentifying;
    tag.form = form_of(*e);
    return tag;
  }
  const Dtgd& t = std::get<Dtgd>(c);
  if (!is_data_full(t))
    throw Error(ErrorCode::NotDataFull,
                "dtgd has existentially quantified data variables");
  auto head_nodes = node_vars(t.head);
  if (head_nodes.size() > 1)
    throw Error(ErrorCode::NotApplicable,
                "dtgd head has more than one node variable; normalize first");
  KindTag tag;
  tag.form = form_of(t.body, t.head);
  if (head_nodes.empty()) {
    tag.kind = Kind::GlobalDtgd;
    return tag;
  }
  tag.head_var = *head_nodes.begin();
  tag.kind = node_vars(t.body).count(*tag.head_var) ? Kind::DataCollecting
                                                    : Kind::NodeCreating;
  return tag;
}

TypeTags type_tags(const Constraint& c, unsigned b) {
  TypeTags out;
  out.b = b;
  if (const auto* e = std::get_if<Degd>(&c)) {
    if (e->sort == EqSort::Data) return out;
    auto vars = node_vars(e->body);
    auto bounded = [&](const std::string& v) {
      return ctx_size(v, e->body) <= b;
    };
    if (bounded(e->lhs) && bounded(e->rhs)) out.codes.insert(TypeCode::E1);
    for (const auto& [head, mu] :
         {std::pair{e->lhs, e->rhs}, std::pair{e->rhs, e->lhs}}) {
      bool ok = bounded(mu);
      for (const std::string& v : vars)
        if (v != head && v != mu && !bounded(v)) ok = false;
      if (ok) {
        out.codes.insert(TypeCode::E2);
        out.e2_heads.push_back(head);
      }
    }
    unsigned unbounded = 0;
    for (const std::string& v : vars)
      if (!bounded(v)) ++unbounded;
    if (unbounded == 2) out.codes.insert(TypeCode::E3);
    if (unbounded == 3) out.codes.insert(TypeCode::E4);
    return out;
  }

  KindTag kind = classify_kind(c);
  if (kind.kind == Kind::GlobalDtgd) return out;
  const Dtgd& t = std::get<Dtgd>(c);
  std::vector<Atom> all = t.body;
  all.insert(all.end(), t.head.begin(), t.head.end());
  const std::string& head = *kind.head_var;
  auto body_vars = node_vars(t.body);
  unsigned unbounded = 0;
  for (const std::string& v : body_vars)
    if (ctx_size(v, all) > b) ++unbounded;
  if (!body_vars.count(head) && ctx_size(head, all) > b) ++unbounded;

  if (kind.kind == Kind::NodeCreating) {
    if (ctx_size(head, all) <= b) out.codes.insert(TypeCode::G1);
    bool all_body = true;
    for (const std::string& v : body_vars)
      if (ctx_size(v, all) > b) all_body = false;
    if (all_body) out.codes.insert(TypeCode::G2);
    unsigned body_unbounded = 0;
    for (const std::string& v : body_vars)
      if (ctx_size(v, t.body) > b) ++body_unbounded;
    if (ctx_size(head, t.body) > b && !body_vars.count(head))
      ++body_unbounded;
    if (body_unbounded == 1) out.codes.insert(TypeCode::G3);
    if (unbounded == 2) out.codes.insert(TypeCode::G4);
  } else {
    if (ctx_size(head, t.body) <= b) out.codes.insert(TypeCode::C1);
    bool others = true;
    for (const std::string& v : body_vars)
      if (v != head && ctx_size(v, all) > b) others = false;
    if (others) out.codes.insert(TypeCode::C2);
    if (unbounded == 2) out.codes.insert(TypeCode::C3);
  }
  return out;
}

namespace {

bool in_tbd(const std::set<TypeCode>& tags, Kind k) {
  if (k == Kind::GlobalDtgd) return true;
  if (k == Kind::NodeCreating)
    return tags.count(TypeCode::G1) || tags.count(TypeCode::G2);
  return tags.count(TypeCode::C1) || tags.count(TypeCode::C2);
}

bool in_tbg(const std::set<TypeCode>& tags, Kind k) {
  if (k != Kind::NodeCreating) return true;
  return tags.count(TypeCode::G1);
}

bool in_twbd(const std::set<TypeCode>& tags, Kind k) {
  return in_tbd(tags, k) ||
         (k == Kind::NodeCreating && tags.count(TypeCode::G3));
}

bool in_ebd(const std::set<TypeCode>& tags, Kind k) {
  if (k == Kind::ValueIdentifying) return true;
  return tags.count(TypeCode::E1) || tags.count(TypeCode::E2);
}

unsigned max_context(const Constraint& c) {
  unsigned m = 1;
  std::set<std::string> vars = node_vars(body_of(c));
  if (const auto* t = std::get_if<Dtgd>(&c)) {
    auto hv = node_vars(t->head);
    vars.insert(hv.begin(), hv.end());
  }
  for (const std::string& v : vars)
    m = std::max(m, static_cast<unsigned>(context_of(v, c).size()));
  return m;
}

}  // namespace

FragmentReport fragment_report(const ConstraintSet& cs,
                               std::optional<unsigned> b) {
  FragmentReport rep;
  for (const auto& [rel, ar] : cs.schema)
    rep.alpha = std::max(rep.alpha, ar);

  // Normalize dtgd heads, keeping provenance to the original index.
  std::vector<std::pair<std::size_t, Constraint>> normalized;
  for (std::size_t i = 0; i < cs.items.size(); ++i) {
    if (const auto* t = std::get_if<Dtgd>(&cs.items[i])) {
      rep.comparison_free &= t->comps.empty();
      if (!is_data_full(*t)) {
        rep.data_full = false;
        ConstraintReport cr;
        cr.origin = i;
        cr.normalized = *t;
        cr.data_full = false;
        rep.constraints.push_back(std::move(cr));
        continue;
      }
      for (Dtgd& part : normalize_heads(*t))
        normalized.emplace_back(i, std::move(part));
    } else {
      rep.comparison_free &= std::get<Degd>(cs.items[i]).comps.empty();
      normalized.emplace_back(i, cs.items[i]);
    }
  }

  unsigned cap = 1;
  for (const auto& [_, c] : normalized) cap = std::max(cap, max_context(c));

  // Minimal bound at which every constraint of the relevant kind
  // qualifies; membership is monotone in b, so scan upward.
  auto minimal = [&](auto member, bool degds_too) -> std::optional<unsigned> {
    for (unsigned bb = 1; bb <= cap; ++bb) {
      bool all = true;
      for (const auto& [_, c] : normalized) {
        bool is_degd = std::holds_alternative<Degd>(c);
        if (is_degd && !degds_too) continue;
        if (!is_degd && degds_too) continue;
        if (!member(type_tags(c, bb).codes, classify_kind(c).kind)) {
          all = false;
          break;
        }
      }
      if (all) return bb;
    }
    return std::nullopt;
  };

  if (rep.data_full) {
    rep.b_tbg = minimal(in_tbg, false);
    rep.b_tbd = minimal(in_tbd, false);
    rep.b_twbd = minimal(in_twbd, false);
    rep.b_ebd = minimal(in_ebd, true);
  }

  if (b) {
    rep.b_used = *b;
  } else {
    rep.b_used = 1;
    if (rep.b_ebd) {
      if (rep.b_tbg)
        rep.b_used = std::max(rep.b_used, *rep.b_tbg);
      else if (rep.b_tbd)
        rep.b_used = std::max({rep.b_used, *rep.b_tbd, *rep.b_ebd});
      else if (rep.b_twbd)
        rep.b_used = std::max({rep.b_used, *rep.b_twbd, *rep.b_ebd});
    } else if (rep.b_tbg) {
      rep.b_used = std::max(rep.b_used, *rep.b_tbg);
    }
  }

  for (const auto& [origin, c] : normalized) {
    ConstraintReport cr;
    cr.origin = origin;
    cr.normalized = c;
    cr.kind = classify_kind(c);
    cr.tags = type_tags(c, rep.b_used);
    rep.constraints.push_back(std::move(cr));
  }

  if (!rep.data_full) {
    rep.verdict = ComplexityVerdict::Undecidable;
    return rep;
  }

  auto qualifies_at = [&](auto member, bool degds_too, std::optional<unsigned> min_b) {
    if (!min_b) return false;
    if (!b) return true;
    (void)member;
    (void)degds_too;
    return *min_b <= *b;
  };

  bool ebd = qualifies_at(in_ebd, true, rep.b_ebd);
  if (qualifies_at(in_tbg, false, rep.b_tbg) ||
      (qualifies_at(in_tbd, false, rep.b_tbd) && ebd))
    rep.verdict = ComplexityVerdict::Pi2;
  else if (qualifies_at(in_twbd, false, rep.b_twbd) && ebd)
    rep.verdict = ComplexityVerdict::Pspace;
  else
    rep.verdict = ComplexityVerdict::Exptime;
  return rep;
}

std::string render(const FragmentReport& r) {
  std::ostringstream os;
  os << "data_full=" << (r.data_full ? "true" : "false") << "\n";
  os << "alpha=" << r.alpha << "\n";
  auto bound = [](const std::optional<unsigned>& b) {
    return b ? std::to_string(*b) : std::string("inf");
  };
  os << "b_tbg=" << bound(r.b_tbg) << "\n";
  os << "b_tbd=" << bound(r.b_tbd) << "\n";
  os << "b_twbd=" << bound(r.b_twbd) << "\n";
  os << "b_ebd=" << bound(r.b_ebd) << "\n";
  os << "b_used=" << r.b_used << "\n";
  os << "verdict=" << verdict_name(r.verdict);
  if (r.verdict == ComplexityVerdict::Pi2 && r.comparison_free) os << "/NP";
  os << "\n";
  for (std::size_t i = 0; i < r.constraints.size(); ++i) {
    const ConstraintReport& cr = r.constraints[i];
    os << "constraint " << i << ": origin=" << cr.origin;
    if (!cr.data_full) {
      os << " not-data-full\n";
      continue;
    }
    os << " kind=" << kind_name(cr.kind.kind)
       << " form=" << form_name(cr.kind.form);
    if (cr.kind.head_var) os << " head_var=" << *cr.kind.head_var;
    os << " tags={";
    bool first = true;
    for (TypeCode t : cr.tags.codes) {
      if (!first) os << ",";
      os << type_code_name(t);
      first = false;
    }
    os << "}\n";
  }
  return os.str();
}

}  // namespace distcheck
