#include "distcheck/parser.hpp"

#include <cctype>
#include <sstream>

#include "distcheck/error.hpp"

namespace distcheck {

namespace {

enum class Tok {
  Ident,
  Number,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Comma,
  Dot,
  Arrow,   // ->
  LArrow,  // <-
  Lt,
  Le,
  Eq,
  At,
  Slash,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  long long number = 0;
  SourceSpan span;
};

class Lexer {
 public:
  Lexer(const std::string& text, std::string file)
      : text_(text), file_(std::move(file)) {}

  Token next() {
    skip_ws();
    Token t;
    t.span = {file_, line_, col_};
    if (pos_ >= text_.size()) return t;
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(
                                         text_[pos_])) ||
                                     text_[pos_] == '_' || text_[pos_] == '\''))
        advance();
      t.kind = Tok::Ident;
      t.text = text_.substr(start, pos_ - start);
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && pos_ + 1 < text_.size() &&
         std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
      std::size_t start = pos_;
      advance();
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_])))
        advance();
      t.kind = Tok::Number;
      t.text = text_.substr(start, pos_ - start);
      t.number = std::stoll(t.text);
      return t;
    }
    switch (c) {
      case '(': advance(); t.kind = Tok::LParen; return t;
      case ')': advance(); t.kind = Tok::RParen; return t;
      case '{': advance(); t.kind = Tok::LBrace; return t;
      case '}': advance(); t.kind = Tok::RBrace; return t;
      case ',': advance(); t.kind = Tok::Comma; return t;
      case '.': advance(); t.kind = Tok::Dot; return t;
      case '@': advance(); t.kind = Tok::At; return t;
      case '=': advance(); t.kind = Tok::Eq; return t;
      case '/': advance(); t.kind = Tok::Slash; return t;
      case '-':
        advance();
        if (pos_ < text_.size() && text_[pos_] == '>') {
          advance();
          t.kind = Tok::Arrow;
          return t;
        }
        throw Error(ErrorCode::Syntax, "stray '-'", t.span);
      case '<':
        advance();
        if (pos_ < text_.size() && text_[pos_] == '=') {
          advance();
          t.kind = Tok::Le;
          return t;
        }
        if (pos_ < text_.size() && text_[pos_] == '-') {
          advance();
          t.kind = Tok::LArrow;
          return t;
        }
        t.kind = Tok::Lt;
        return t;
      default:
        throw Error(ErrorCode::Syntax,
                    std::string("unexpected character '") + c + "'", t.span);
    }
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  const std::string& text_;
  std::string file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  Parser(const std::string& text, std::string file)
      : lex_(text, std::move(file)) {
    cur_ = lex_.next();
  }

  const Token& peek() const { return cur_; }

  Token eat() {
    Token t = cur_;
    cur_ = lex_.next();
    return t;
  }

  Token expect(Tok kind, const char* what) {
    if (cur_.kind != kind)
      throw Error(ErrorCode::Syntax,
                  std::string("expected ") + what + here(), cur_.span);
    return eat();
  }

  std::string here() const {
    if (cur_.kind == Tok::End) return ", got end of input";
    if (!cur_.text.empty()) return ", got '" + cur_.text + "'";
    return "";
  }

  /// A constant: integer or `p/q` rational.
  Value value() {
    Token num = expect(Tok::Number, "number");
    if (cur_.kind != Tok::Slash) return Value(num.number);
    eat();
    Token den = expect(Tok::Number, "denominator");
    if (den.number <= 0)
      throw Error(ErrorCode::Syntax, "denominator must be positive", den.span);
    return Value(num.number, den.number);
  }

  Term term() {
    if (cur_.kind == Tok::Ident) return Term::variable(eat().text);
    if (cur_.kind == Tok::Number) return Term::constant(value());
    throw Error(ErrorCode::Syntax, "expected term" + here(), cur_.span);
  }

 private:
  Lexer lex_;
  Token cur_;
};

void note_arity(Schema& schema, const RelAtom& a, const SourceSpan& span) {
  auto [it, fresh] = schema.emplace(a.rel, a.args.size());
  if (!fresh && it->second != a.args.size())
    throw Error(ErrorCode::ArityMismatch,
                "relation " + a.rel + " used with arities " +
                    std::to_string(it->second) + " and " +
                    std::to_string(a.args.size()),
                span);
}

/// One relation atom `NAME(term,...)` with optional `@node`.
Atom parse_atom(Parser& p, Schema& schema) {
  Token name = p.expect(Tok::Ident, "relation name");
  p.expect(Tok::LParen, "'('");
  Atom a{{name.text, {}}, {}};
  if (p.peek().kind != Tok::RParen) {
    a.rel.args.push_back(p.term());
    while (p.peek().kind == Tok::Comma) {
      p.eat();
      a.rel.args.push_back(p.term());
    }
  }
  p.expect(Tok::RParen, "')'");
  note_arity(schema, a.rel, name.span);
  if (p.peek().kind == Tok::At) {
    p.eat();
    Token node = p.expect(Tok::Ident, "node variable");
    a.at = NodeTerm::variable(node.text);
  }
  return a;
}

struct BodyItem {
  std::optional<Atom> atom;
  std::optional<CompAtom> comp;
  SourceSpan span;
};

/// Either a relation atom or a comparison. A bare identifier followed
/// by `(` starts an atom; anything else must be a comparison.
BodyItem parse_body_item(Parser& p, Schema& schema) {
  BodyItem item;
  item.span = p.peek().span;
  if (p.peek().kind == Tok::Ident) {
    // Could still be the left side of a comparison: peek past the name.
    Token name = p.eat();
    if (p.peek().kind == Tok::LParen) {
      p.eat();
      Atom a{{name.text, {}}, {}};
      if (p.peek().kind != Tok::RParen) {
        a.rel.args.push_back(p.term());
        while (p.peek().kind == Tok::Comma) {
          p.eat();
          a.rel.args.push_back(p.term());
        }
      }
      p.expect(Tok::RParen, "')'");
      note_arity(schema, a.rel, name.span);
      if (p.peek().kind == Tok::At) {
        p.eat();
        Token node = p.expect(Tok::Ident, "node variable");
        a.at = NodeTerm::variable(node.text);
      }
      item.atom = std::move(a);
      return item;
    }
    CompAtom c;
    c.lhs = Term::variable(name.text);
    if (p.peek().kind == Tok::Lt)
      c.op = CompOp::Lt;
    else if (p.peek().kind == Tok::Le)
      c.op = CompOp::Le;
    else
      throw Error(ErrorCode::Syntax, "expected '(' or comparison" + p.here(),
                  p.peek().span);
    p.eat();
    c.rhs = p.term();
    item.comp = c;
    return item;
  }
  CompAtom c;
  c.lhs = p.term();
  if (p.peek().kind == Tok::Lt)
    c.op = CompOp::Lt;
  else if (p.peek().kind == Tok::Le)
    c.op = CompOp::Le;
  else
    throw Error(ErrorCode::Syntax, "expected comparison" + p.here(),
                p.peek().span);
  p.eat();
  c.rhs = p.term();
  item.comp = c;
  return item;
}

void check_statement(const std::vector<Atom>& body,
                     const std::vector<CompAtom>& comps,
                     const std::vector<Atom>& head, const SourceSpan& span) {
  auto dvars = data_vars(body);
  auto hvars = data_vars(head);
  dvars.insert(hvars.begin(), hvars.end());
  auto nvars = node_vars(body);
  auto hn = node_vars(head);
  nvars.insert(hn.begin(), hn.end());
  for (const std::string& x : dvars)
    if (nvars.count(x))
      throw Error(ErrorCode::MixedEquality,
                  "variable " + x + " used both for data and nodes", span);
  auto body_dvars = data_vars(body);
  for (const std::string& x : data_vars(comps)) {
    if (nvars.count(x))
      throw Error(ErrorCode::Safety,
                  "node variable " + x + " in comparison", span);
    if (!body_dvars.count(x))
      throw Error(ErrorCode::Safety,
                  "comparison variable " + x + " not in body", span);
  }
}

}  // namespace

ConstraintSet parse_constraints(const std::string& text,
                                const std::string& file) {
  Parser p(text, file);
  ConstraintSet cs;
  while (p.peek().kind != Tok::End) {
    SourceSpan stmt_span = p.peek().span;
    std::vector<Atom> body;
    std::vector<CompAtom> comps;
    for (;;) {
      BodyItem item = parse_body_item(p, cs.schema);
      if (item.atom)
        body.push_back(std::move(*item.atom));
      else
        comps.push_back(*item.comp);
      if (p.peek().kind != Tok::Comma) break;
      p.eat();
    }
    p.expect(Tok::Arrow, "'->'");
    if (body.empty())
      throw Error(ErrorCode::Safety, "empty body", stmt_span);

    // Degd head: `x = y`. Needs two-token lookahead, so parse the first
    // head item and branch on what follows.
    Token first = p.expect(Tok::Ident, "head atom or variable");
    if (p.peek().kind == Tok::Eq) {
      p.eat();
      Token second = p.expect(Tok::Ident, "variable");
      p.expect(Tok::Dot, "'.'");
      check_statement(body, comps, {}, stmt_span);
      auto dvars = data_vars(body);
      auto nvars = node_vars(body);
      Degd e{body, comps, EqSort::Data, first.text, second.text};
      bool ld = dvars.count(first.text), ln = nvars.count(first.text);
      bool rd = dvars.count(second.text), rn = nvars.count(second.text);
      if (!(ld || ln))
        throw Error(ErrorCode::Safety,
                    "equality variable " + first.text + " not in body",
                    first.span);
      if (!(rd || rn))
        throw Error(ErrorCode::Safety,
                    "equality variable " + second.text + " not in body",
                    second.span);
      if (ln != rn)
        throw Error(ErrorCode::MixedEquality,
                    "equality mixes a node and a data variable", first.span);
      e.sort = ln ? EqSort::Node : EqSort::Data;
      cs.items.push_back(std::move(e));
      continue;
    }

    // Dtgd head: atom list starting with `first`.
    std::vector<Atom> head;
    p.expect(Tok::LParen, "'('");
    Atom a0{{first.text, {}}, {}};
    if (p.peek().kind != Tok::RParen) {
      a0.rel.args.push_back(p.term());
      while (p.peek().kind == Tok::Comma) {
        p.eat();
        a0.rel.args.push_back(p.term());
      }
    }
    p.expect(Tok::RParen, "')'");
    note_arity(cs.schema, a0.rel, first.span);
    if (p.peek().kind == Tok::At) {
      p.eat();
      Token node = p.expect(Tok::Ident, "node variable");
      a0.at = NodeTerm::variable(node.text);
    }
    head.push_back(std::move(a0));
    while (p.peek().kind == Tok::Comma) {
      p.eat();
      head.push_back(parse_atom(p, cs.schema));
    }
    p.expect(Tok::Dot, "'.'");
    check_statement(body, comps, head, stmt_span);
    cs.items.push_back(Dtgd{std::move(body), std::move(comps),
                            std::move(head)});
  }
  return cs;
}

namespace {

Fact parse_fact(Parser& p, Schema& schema) {
  Token name = p.expect(Tok::Ident, "relation name");
  p.expect(Tok::LParen, "'('");
  Fact f{name.text, {}};
  if (p.peek().kind != Tok::RParen) {
    f.args.push_back(p.value());
    while (p.peek().kind == Tok::Comma) {
      p.eat();
      f.args.push_back(p.value());
    }
  }
  p.expect(Tok::RParen, "')'");
  RelAtom ra{f.rel, {}};
  ra.args.resize(f.args.size());
  note_arity(schema, ra, name.span);
  return f;
}

}  // namespace

DistributedInstance parse_instance(const std::string& text,
                                   const std::string& file, bool strict) {
  Parser p(text, file);
  Schema schema;
  DistributedInstance d;
  Token g = p.expect(Tok::Ident, "'global'");
  if (g.text != "global")
    throw Error(ErrorCode::Syntax, "expected 'global'", g.span);
  p.expect(Tok::LBrace, "'{'");
  while (p.peek().kind != Tok::RBrace)
    d.global.insert(parse_fact(p, schema));
  p.eat();
  while (p.peek().kind != Tok::End) {
    Token l = p.expect(Tok::Ident, "'local'");
    if (l.text != "local")
      throw Error(ErrorCode::Syntax, "expected 'local'", l.span);
    if (p.peek().kind == Tok::LBrace) {
      // `local {}`: placeholder block for an instance with no nodes.
      p.eat();
      p.expect(Tok::RBrace, "'}'");
      continue;
    }
    Token id = p.expect(Tok::Number, "node id");
    if (id.number < 0)
      throw Error(ErrorCode::Syntax, "node id must be non-negative", id.span);
    NodeId k = static_cast<NodeId>(id.number);
    p.expect(Tok::LBrace, "'{'");
    FactSet& fs = d.local[k];
    while (p.peek().kind != Tok::RBrace) {
      Token at = p.peek();
      Fact f = parse_fact(p, schema);
      if (strict && !d.global.count(f))
        throw Error(ErrorCode::SubsetViolation,
                    "local fact " + render(f) + " missing from global",
                    at.span);
      d.global.insert(f);
      fs.insert(std::move(f));
    }
    p.eat();
  }
  return d;
}

Query parse_query(const std::string& text, const std::string& file) {
  Parser p(text, file);
  Token name = p.expect(Tok::Ident, "query head");
  p.expect(Tok::LParen, "'('");
  Query q;
  q.head.rel = name.text;
  if (p.peek().kind != Tok::RParen) {
    Token v = p.expect(Tok::Ident, "variable");
    q.head.args.push_back(Term::variable(v.text));
    while (p.peek().kind == Tok::Comma) {
      p.eat();
      v = p.expect(Tok::Ident, "variable");
      q.head.args.push_back(Term::variable(v.text));
    }
  }
  p.expect(Tok::RParen, "')'");
  p.expect(Tok::LArrow, "'<-'");
  for (;;) {
    Token rel = p.expect(Tok::Ident, "relation name");
    p.expect(Tok::LParen, "'('");
    RelAtom a{rel.text, {}};
    if (p.peek().kind != Tok::RParen) {
      a.args.push_back(p.term());
      while (p.peek().kind == Tok::Comma) {
        p.eat();
        a.args.push_back(p.term());
      }
    }
    p.expect(Tok::RParen, "')'");
    q.body.push_back(std::move(a));
    if (p.peek().kind != Tok::Comma) break;
    p.eat();
  }
  Token dot = p.expect(Tok::Dot, "'.'");
  std::set<std::string> bvars;
  for (const RelAtom& a : q.body) {
    auto vs = data_vars(a);
    bvars.insert(vs.begin(), vs.end());
  }
  for (const Term& t : q.head.args)
    if (!bvars.count(t.var))
      throw Error(ErrorCode::Safety,
                  "head variable " + t.var + " not in body", dot.span);
  if (p.peek().kind != Tok::End)
    throw Error(ErrorCode::Syntax, "trailing input after query",
                p.peek().span);
  return q;
}

namespace {

std::string render_term(const Term& t) {
  return t.is_var() ? t.var : t.con->str();
}

std::string render_rel(const RelAtom& a) {
  std::string out = a.rel + "(";
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) out += ",";
    out += render_term(a.args[i]);
  }
  return out + ")";
}

std::string render_atom(const Atom& a) {
  std::string out = render_rel(a.rel);
  if (a.at) out += "@" + (a.at->is_var() ? a.at->var
                                         : std::to_string(*a.at->id));
  return out;
}

std::string render_comp(const CompAtom& c) {
  return render_term(c.lhs) + (c.op == CompOp::Lt ? " < " : " <= ") +
         render_term(c.rhs);
}

void render_body(std::ostringstream& os, const std::vector<Atom>& body,
                 const std::vector<CompAtom>& comps) {
  bool first = true;
  for (const Atom& a : body) {
    if (!first) os << ", ";
    os << render_atom(a);
    first = false;
  }
  for (const CompAtom& c : comps) {
    if (!first) os << ", ";
    os << render_comp(c);
    first = false;
  }
}

}  // namespace

std::string render(const ConstraintSet& cs) {
  std::ostringstream os;
  for (const Constraint& c : cs.items) {
    if (const auto* t = std::get_if<Dtgd>(&c)) {
      render_body(os, t->body, t->comps);
      os << " -> ";
      for (std::size_t i = 0; i < t->head.size(); ++i) {
        if (i) os << ", ";
        os << render_atom(t->head[i]);
      }
    } else {
      const Degd& e = std::get<Degd>(c);
      render_body(os, e.body, e.comps);
      os << " -> " << e.lhs << " = " << e.rhs;
    }
    os << ".\n";
  }
  return os.str();
}

std::string render(const Fact& f) {
  std::string out = f.rel + "(";
  for (std::size_t i = 0; i < f.args.size(); ++i) {
    if (i) out += ",";
    out += f.args[i].str();
  }
  return out + ")";
}

std::string render(const DistributedInstance& d) {
  if (d.empty()) return "global {} local {}";
  std::ostringstream os;
  os << "global {\n";
  for (const Fact& f : d.global) os << "  " << render(f) << "\n";
  os << "}\n";
  if (d.local.empty()) {
    os << "local {}\n";
    return os.str();
  }
  for (const auto& [k, fs] : d.local) {
    os << "local " << k << " {\n";
    for (const Fact& f : fs) os << "  " << render(f) << "\n";
    os << "}\n";
  }
  return os.str();
}

std::string render(const Query& q) {
  std::ostringstream os;
  os << render_rel(q.head) << " <- ";
  for (std::size_t i = 0; i < q.body.size(); ++i) {
    if (i) os << ", ";
    os << render_rel(q.body[i]);
  }
  os << ".\n";
  return os.str();
}

}  // namespace distcheck
