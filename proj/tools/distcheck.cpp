// Command-line front end: classification, chase, implication,
// parallel-correctness, certain answers, scheme generation, hard
// instance generation, and query evaluation.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "distcheck/chase.hpp"
#include "distcheck/classifier.hpp"
#include "distcheck/core.hpp"
#include "distcheck/error.hpp"
#include "distcheck/implication.hpp"
#include "distcheck/parser.hpp"
#include "distcheck/pc.hpp"
#include "distcheck/schemes.hpp"
#include "distcheck/verify.hpp"

namespace {

using namespace distcheck;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::Usage, "cannot read file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

Domain parse_domain(const std::string& name) {
  if (name == "nat") return Domain::Nat;
  if (name == "int") return Domain::Int;
  if (name == "rat") return Domain::Rat;
  throw Error(ErrorCode::Usage, "unknown domain: " + name);
}

Constraint single_constraint(const ConstraintSet& cs, const std::string& path) {
  if (cs.items.size() != 1)
    throw Error(ErrorCode::Usage,
                path + " must contain exactly one constraint, found " +
                    std::to_string(cs.items.size()));
  return cs.items.front();
}

std::string render_valuation(const Valuation& v) {
  std::string out;
  for (const auto& [x, val] : v.data)
    out += (out.empty() ? "" : " ") + x + "=" + val.str();
  for (const auto& [k, id] : v.node)
    out += (out.empty() ? "" : " ") + k + "=@" + std::to_string(id);
  return out;
}

void parse_rel_arity(const std::string& spec, std::string& rel,
                     unsigned& arity) {
  auto slash = spec.find('/');
  if (slash == std::string::npos || slash == 0)
    throw Error(ErrorCode::Usage, "expected REL/ARITY, got: " + spec);
  rel = spec.substr(0, slash);
  try {
    arity = static_cast<unsigned>(std::stoul(spec.substr(slash + 1)));
  } catch (const std::exception&) {
    throw Error(ErrorCode::Usage, "bad arity in: " + spec);
  }
}

std::vector<std::pair<unsigned, unsigned>> parse_pairs(
    const std::string& spec) {
  std::vector<std::pair<unsigned, unsigned>> out;
  if (spec == "-") return out;
  std::istringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::Usage, "expected P=Q pairs, got: " + spec);
    try {
      out.emplace_back(std::stoul(item.substr(0, eq)),
                       std::stoul(item.substr(eq + 1)));
    } catch (const std::exception&) {
      throw Error(ErrorCode::Usage, "expected P=Q pairs, got: " + spec);
    }
  }
  return out;
}

struct Options {
  std::string domain = "rat";
  unsigned jobs = 1;
  bool stats = false;
  bool trace = false;
  std::string format = "plain";
  std::string degd_nodes = "merge";
};

int run(int argc, char** argv) {
  CLI::App app{"distribution constraint toolkit"};
  app.require_subcommand(1);
  Options opt;

  std::string sigma_path, tau_path, inst_path, query_path, word;
  std::optional<unsigned> bound;
  bool strong = false, naive = false;

  auto add_common = [&opt](CLI::App* cmd) {
    cmd->add_option("--domain", opt.domain, "value domain: nat, int, rat");
    cmd->add_option("--jobs", opt.jobs, "worker threads");
    cmd->add_flag("--stats", opt.stats, "print work counters");
    cmd->add_option("--format", opt.format, "output format: plain, kv");
  };

  auto* classify = app.add_subcommand("classify", "fragment report");
  classify->add_option("sigma", sigma_path)->required();
  classify->add_option("--b", bound, "judge membership at this bound");
  add_common(classify);

  auto* chase_cmd = app.add_subcommand("chase", "run the chase");
  chase_cmd->add_option("instance", inst_path)->required();
  chase_cmd->add_option("sigma", sigma_path)->required();
  chase_cmd->add_flag("--trace", opt.trace, "stream chase steps");
  chase_cmd->add_option("--degd-node-semantics", opt.degd_nodes,
                        "merge or fail");
  add_common(chase_cmd);

  auto* implies = app.add_subcommand("implies", "decide implication");
  implies->add_option("sigma", sigma_path)->required();
  implies->add_option("tau", tau_path)->required();
  implies->add_option("--degd-node-semantics", opt.degd_nodes,
                      "merge or fail");
  add_common(implies);

  auto* pc = app.add_subcommand("pc", "parallel-correctness of a query");
  pc->add_option("query", query_path)->required();
  pc->add_option("sigma", sigma_path)->required();
  pc->add_flag("--strong", strong, "strong parallel-correctness");
  add_common(pc);

  auto* certain = app.add_subcommand("certain", "certain answers");
  certain->add_option("query", query_path)->required();
  certain->add_option("instance", inst_path)->required();
  certain->add_option("sigma", sigma_path)->required();
  add_common(certain);

  auto* scheme = app.add_subcommand("scheme", "emit partitioning constraints");
  scheme->require_subcommand(1);
  std::vector<std::string> rels, keys_s, links, maps;
  std::string root, via;
  auto* nonskip = scheme->add_subcommand("nonskip", "non-skipping set");
  nonskip->add_option("rels", rels, "REL/ARITY...")->required();
  auto* hash = scheme->add_subcommand("hash", "hash partitioning");
  hash->add_option("rel", root, "REL/ARITY")->required();
  hash->add_option("--key", keys_s, "key position")->required();
  auto* range = scheme->add_subcommand("range", "range partitioning");
  range->add_option("rel", root, "REL/ARITY")->required();
  range->add_option("--key", keys_s, "key position")->required();
  range->add_option("--via", via, "range relation name")->required();
  auto* copart = scheme->add_subcommand("copart", "reference co-partitioning");
  copart->add_option("root", root, "REL/ARITY")->required();
  copart->add_option("--key", keys_s, "root key position")->required();
  copart->add_option("--link", links,
                     "REL/ARITY@PP=CP[,PP=CP...] chained in order");
  auto* hyper = scheme->add_subcommand("hypercube", "hypercube distribution");
  hyper->add_option("query", query_path)->required();
  hyper->add_option("--map", maps,
                    "per atom: POS=DIM[,POS=DIM...], or - for none")
      ->required();

  auto* hardgen = app.add_subcommand("hardgen", "machine-to-implication");
  std::string atm_path;
  hardgen->add_option("machine", atm_path)->required();
  hardgen->add_option("word", word)->required();

  auto* eval = app.add_subcommand("eval", "evaluate a query");
  eval->add_option("query", query_path)->required();
  eval->add_option("instance", inst_path)->required();
  eval->add_flag("--naive", naive, "union over nodes instead of global");
  add_common(eval);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  bool kv = opt.format == "kv";
  if (!kv && opt.format != "plain")
    throw Error(ErrorCode::Usage, "unknown format: " + opt.format);
  Domain domain = parse_domain(opt.domain);
  DegdNodeSemantics degd_nodes;
  if (opt.degd_nodes == "merge")
    degd_nodes = DegdNodeSemantics::Merge;
  else if (opt.degd_nodes == "fail")
    degd_nodes = DegdNodeSemantics::Fail;
  else
    throw Error(ErrorCode::Usage,
                "unknown degd node semantics: " + opt.degd_nodes);

  if (*classify) {
    auto cs = parse_constraints(read_file(sigma_path), sigma_path);
    std::cout << render(fragment_report(cs, bound));
    return 0;
  }

  if (*chase_cmd) {
    auto d = parse_instance(read_file(inst_path), inst_path);
    auto cs = parse_constraints(read_file(sigma_path), sigma_path);
    ChaseOptions copts;
    copts.degd_nodes = degd_nodes;
    ChaseTrace trace = run_chase(d, cs, copts);
    if (opt.trace)
      for (const ChaseStep& step : trace.steps) {
        std::cout << "step constraint=" << step.constraint;
        if (!step.val.data.empty() || !step.val.node.empty())
          std::cout << " " << render_valuation(step.val);
        if (step.node_merge)
          std::cout << " merge-node @" << step.node_merge->second << "->@"
                    << step.node_merge->first;
        if (step.value_merge)
          std::cout << " merge-value " << step.value_merge->second.str()
                    << "->" << step.value_merge->first.str();
        for (const auto& [node, f] : step.produced) {
          std::cout << " +" << render(f);
          if (node) std::cout << "@" << *node;
        }
        std::cout << "\n";
      }
    bool ok = trace.outcome == ChaseOutcome::Success;
    if (kv)
      std::cout << "outcome=" << (ok ? "success" : "failed")
                << "\nsteps=" << trace.state.steps << "\n";
    else
      std::cout << (ok ? "SUCCESS" : "FAILED") << "\n";
    if (opt.stats && !kv)
      std::cout << "steps=" << trace.state.steps << "\n";
    if (ok) std::cout << render(trace.state.inst);
    return ok ? 0 : 1;
  }

  if (*implies) {
    auto sigma = parse_constraints(read_file(sigma_path), sigma_path);
    auto taus = parse_constraints(read_file(tau_path), tau_path);
    Constraint tau = single_constraint(taus, tau_path);
    ImplicationOptions iopts{domain, opt.jobs, degd_nodes};
    ImplicationVerdict v = decide_implication(sigma, tau, iopts);
    if (kv) {
      std::cout << "verdict=" << (v.holds ? "holds" : "refuted") << "\n";
    } else {
      std::cout << (v.holds ? "HOLDS" : "REFUTED") << "\n";
    }
    if (opt.stats || kv)
      std::cout << "canonical_dbs=" << v.stats.canonical_dbs
                << "\nchase_steps=" << v.stats.chase_steps << "\nsingle_db="
                << (v.stats.single_db_mode ? "true" : "false") << "\n";
    if (!v.holds) {
      std::cout << "witness: " << render_valuation(*v.witness) << "\n";
      std::cout << render(*v.countermodel);
    }
    return v.holds ? 0 : 1;
  }

  if (*pc) {
    auto q = parse_query(read_file(query_path), query_path);
    auto sigma = parse_constraints(read_file(sigma_path), sigma_path);
    ImplicationOptions iopts{domain, opt.jobs, degd_nodes};
    ImplicationVerdict v = pc_wrt_constraints(q, sigma, strong, iopts);
    if (kv)
      std::cout << "verdict=" << (v.holds ? "parallel-correct" : "not-parallel-correct")
                << "\n";
    else
      std::cout << (v.holds ? "PARALLEL-CORRECT" : "NOT PARALLEL-CORRECT")
                << "\n";
    if (!v.holds) std::cout << render(*v.countermodel);
    return v.holds ? 0 : 1;
  }

  if (*certain) {
    auto q = parse_query(read_file(query_path), query_path);
    auto d = parse_instance(read_file(inst_path), inst_path);
    auto sigma = parse_constraints(read_file(sigma_path), sigma_path);
    CertainResult r = certain_answers(q, d.global, sigma, domain);
    if (r.inconsistent) {
      std::cout << "INCONSISTENT\n";
      return 1;
    }
    for (const Fact& f : r.facts) std::cout << render(f) << "\n";
    return 0;
  }

  if (*scheme) {
    ConstraintSet out;
    std::string rel;
    unsigned arity = 0;
    std::vector<unsigned> keys;
    for (const std::string& k : keys_s) {
      try {
        keys.push_back(static_cast<unsigned>(std::stoul(k)));
      } catch (const std::exception&) {
        throw Error(ErrorCode::Usage, "bad key position: " + k);
      }
    }
    if (*nonskip) {
      Schema schema;
      for (const std::string& r : rels) {
        parse_rel_arity(r, rel, arity);
        schema[rel] = arity;
      }
      out = gen_non_skipping(schema);
    } else if (*hash) {
      parse_rel_arity(root, rel, arity);
      out = gen_hash_partition(rel, arity, keys);
    } else if (*range) {
      parse_rel_arity(root, rel, arity);
      if (keys.size() != 1)
        throw Error(ErrorCode::Usage, "range needs exactly one key");
      out = gen_range_partition(rel, arity, keys.front(), via);
    } else if (*copart) {
      CoPartitionSpec spec;
      parse_rel_arity(root, spec.root_rel, spec.root_arity);
      spec.root_keys = keys;
      for (const std::string& l : links) {
        auto sep = l.find('@');
        if (sep == std::string::npos)
          throw Error(ErrorCode::Usage, "expected REL/ARITY@PP=CP: " + l);
        CoPartitionSpec::Link link;
        parse_rel_arity(l.substr(0, sep), link.rel, link.arity);
        link.join = parse_pairs(l.substr(sep + 1));
        spec.chain.push_back(std::move(link));
      }
      out = gen_copartition(spec);
    } else {
      HypercubeSpec spec;
      spec.q = parse_query(read_file(query_path), query_path);
      for (const std::string& mspec : maps)
        spec.dims_of.push_back(parse_pairs(mspec));
      out = gen_hypercube(spec);
    }
    std::cout << render(out);
    return 0;
  }

  if (*hardgen) {
    Atm m = parse_atm(read_file(atm_path), atm_path);
    auto [sigma, tau] = gen_atm_instance(m, word);
    std::cout << render(sigma);
    std::cout << "# conclusion\n";
    ConstraintSet conc;
    conc.items.push_back(tau);
    std::cout << render(conc);
    return 0;
  }

  if (*eval) {
    auto q = parse_query(read_file(query_path), query_path);
    auto d = parse_instance(read_file(inst_path), inst_path);
    FactSet facts = naive ? naive_eval(q, d) : eval_cq(q, d.global);
    for (const Fact& f : facts) std::cout << render(f) << "\n";
    return 0;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::Fragment:
      case ErrorCode::Consistency:
      case ErrorCode::NotDataFull:
        return 3;
      default:
        return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
