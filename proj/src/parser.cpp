#include "instar/parser.hpp"

#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace instar {

std::string Diagnostic::text(std::string_view file) const {
  std::ostringstream os;
  if (!file.empty()) os << file << ':';
  os << line << ':' << col << ": ";
  if (warning) os << "warning: ";
  os << message;
  return os.str();
}

namespace {

enum class Tok {
  identifier,  // lowercase-leading
  variable,    // uppercase- or underscore-leading
  number,
  lparen, rparen, lbrace, rbrace, lbracket, rbracket,
  comma, dot, colon, amp,
  plus, minus, star, slash,
  rel_eq, rel_ne, rel_lt, rel_le, rel_gt, rel_ge,
  kw_on, kw_if, kw_do, kw_ignore, kw_prevent, kw_force, kw_expected,
  kw_fulfilled_if, kw_violated_if, kw_sanction_do,
  kw_not, kw_sat, kw_seteq, kw_in, kw_time, kw_true,
  kw_add, kw_del, kw_builtin, kw_rule,
  eof, bad,
};

struct Token {
  Tok type = Tok::eof;
  std::string text;
  Rational number;
  int line = 1, col = 1;
};

const std::map<std::string, Tok, std::less<>> kKeywords = {
    {"on", Tok::kw_on},       {"if", Tok::kw_if},         {"do", Tok::kw_do},
    {"ignore", Tok::kw_ignore}, {"prevent", Tok::kw_prevent}, {"force", Tok::kw_force},
    {"expected", Tok::kw_expected}, {"not", Tok::kw_not},  {"sat", Tok::kw_sat},
    {"seteq", Tok::kw_seteq}, {"in", Tok::kw_in},         {"time", Tok::kw_time},
    {"true", Tok::kw_true},   {"add", Tok::kw_add},       {"del", Tok::kw_del},
    {"builtin", Tok::kw_builtin}, {"rule", Tok::kw_rule},
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_space();
    Token t;
    t.line = line_;
    t.col = col_;
    if (pos_ >= text_.size()) {
      t.type = Tok::eof;
      return t;
    }
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) return lex_number(t);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return lex_word(t);
    advance();
    switch (c) {
      case '(': t.type = Tok::lparen; return t;
      case ')': t.type = Tok::rparen; return t;
      case '{': t.type = Tok::lbrace; return t;
      case '}': t.type = Tok::rbrace; return t;
      case '[': t.type = Tok::lbracket; return t;
      case ']': t.type = Tok::rbracket; return t;
      case ',': t.type = Tok::comma; return t;
      case '.': t.type = Tok::dot; return t;
      case ':': t.type = Tok::colon; return t;
      case '&': t.type = Tok::amp; return t;
      case '+': t.type = Tok::plus; return t;
      case '-': t.type = Tok::minus; return t;
      case '*': t.type = Tok::star; return t;
      case '/': t.type = Tok::slash; return t;
      case '=': t.type = Tok::rel_eq; return t;
      case '!':
        if (peek() == '=') {
          advance();
          t.type = Tok::rel_ne;
          return t;
        }
        t.type = Tok::bad;
        t.text = "!";
        return t;
      case '<':
        if (peek() == '=') {
          advance();
          t.type = Tok::rel_le;
          return t;
        }
        t.type = Tok::rel_lt;
        return t;
      case '>':
        if (peek() == '=') {
          advance();
          t.type = Tok::rel_ge;
          return t;
        }
        t.type = Tok::rel_gt;
        return t;
      default:
        t.type = Tok::bad;
        t.text = std::string(1, c);
        return t;
    }
  }

 private:
  char peek(size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  void advance() {
    if (pos_ >= text_.size()) return;
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    for (;;) {
      while (pos_ < text_.size() &&
             std::isspace(static_cast<unsigned char>(text_[pos_])))
        advance();
      if (pos_ < text_.size() && text_[pos_] == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
        continue;
      }
      return;
    }
  }

  Token lex_number(Token t) {
    std::string digits;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      digits += peek();
      advance();
    }
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      digits += '.';
      advance();
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        digits += peek();
        advance();
      }
    }
    auto value = parse_rational(digits);
    if (!value) {
      t.type = Tok::bad;
      t.text = digits;
      return t;
    }
    t.type = Tok::number;
    t.text = digits;
    t.number = *value;
    return t;
  }

  bool word_follows(std::string_view expect) const {
    size_t p = pos_;
    for (char c : expect) {
      if (p >= text_.size() || text_[p] != c) return false;
      ++p;
    }
    char after = p < text_.size() ? text_[p] : '\0';
    return !(std::isalnum(static_cast<unsigned char>(after)) || after == '_');
  }

  Token lex_word(Token t) {
    std::string word;
    while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') {
      word += peek();
      advance();
    }
    // Hyphenated keywords of the expectation-rule syntax.
    if (word == "fulfilled" && word_follows("-if")) {
      advance(); advance(); advance();
      t.type = Tok::kw_fulfilled_if;
      return t;
    }
    if (word == "violated" && word_follows("-if")) {
      advance(); advance(); advance();
      t.type = Tok::kw_violated_if;
      return t;
    }
    if (word == "sanction" && word_follows("-do")) {
      advance(); advance(); advance();
      t.type = Tok::kw_sanction_do;
      return t;
    }
    t.text = word;
    if (std::isupper(static_cast<unsigned char>(word[0])) || word[0] == '_') {
      t.type = Tok::variable;
      return t;
    }
    auto kw = kKeywords.find(word);
    t.type = kw == kKeywords.end() ? Tok::identifier : kw->second;
    return t;
  }

  std::string_view text_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

struct ParseError {
  Diagnostic diag;
};

constexpr int kMaxDepth = 400;

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) { shift(); }

  ParseResult program() {
    ParseResult result;
    RuleBase rb;
    std::map<std::string, std::pair<int, int>> seen_ids;
    bool failed = false;
    while (cur_.type != Tok::eof) {
      try {
        Token at = cur_;
        RuleEntry entry = clause();
        std::string key = entry.id.str();
        auto [it, fresh] = seen_ids.emplace(key, std::make_pair(at.line, at.col));
        if (!fresh) {
          failed = true;
          diagnostics_.push_back(Diagnostic{
              at.line, at.col, "duplicate rule id '" + key + "'", false});
        }
        rb.rules.push_back(std::move(entry));
      } catch (const ParseError& e) {
        failed = true;
        diagnostics_.push_back(e.diag);
        recover();
      }
    }
    check_arities(rb);
    result.diagnostics = std::move(diagnostics_);
    if (!failed) result.program = std::move(rb);
    return result;
  }

  Term single_term() {
    Term t = term();
    expect_eof();
    return t;
  }

  AtomicFormula single_formula() {
    AtomicFormula f = formula();
    expect_eof();
    return f;
  }

  ConstrainedFormula single_constrained_formula() {
    ConstrainedFormula cf = constrained_formula();
    expect_eof();
    return cf;
  }

  std::vector<Diagnostic> take_diagnostics() { return std::move(diagnostics_); }

 private:
  [[noreturn]] void fail(const std::string& message) {
    throw ParseError{Diagnostic{cur_.line, cur_.col, message, false}};
  }

  void shift() { cur_ = lexer_.next(); }

  bool accept(Tok type) {
    if (cur_.type != type) return false;
    shift();
    return true;
  }

  void expect(Tok type, const char* what) {
    if (!accept(type)) fail(std::string("expected ") + what);
  }

  void expect_eof() {
    if (cur_.type != Tok::eof) fail("trailing input");
  }

  void recover() {
    while (cur_.type != Tok::eof && cur_.type != Tok::dot) shift();
    accept(Tok::dot);
  }

  struct DepthGuard {
    Parser& p;
    explicit DepthGuard(Parser& parser) : p(parser) {
      if (++p.depth_ > kMaxDepth) p.fail("nesting too deep");
    }
    ~DepthGuard() { --p.depth_; }
  };

  RuleEntry clause() {
    expect(Tok::kw_rule, "'rule('");
    expect(Tok::lparen, "'('");
    AtomicFormula id = formula();
    expect(Tok::comma, "','");
    Rule body = rule_body();
    expect(Tok::rparen, "')'");
    expect(Tok::dot, "'.'");
    return RuleEntry{std::move(id), std::move(body)};
  }

  Rule rule_body() {
    DepthGuard guard(*this);
    Rule r;
    switch (cur_.type) {
      case Tok::kw_on: {
        shift();
        r.kind = Rule::Kind::eca;
        r.events = event_list(false, "event set of an on-rule");
        expect(Tok::kw_if, "'if'");
        r.condition = conditions();
        expect(Tok::kw_do, "'do'");
        r.actions = action_list();
        return r;
      }
      case Tok::kw_if: {
        shift();
        r.kind = Rule::Kind::if_then;
        r.condition = conditions();
        expect(Tok::kw_do, "'do'");
        r.actions = action_list();
        return r;
      }
      case Tok::kw_ignore: {
        shift();
        r.kind = Rule::Kind::ignore;
        r.events = event_list(false, "event set of an ignore-rule");
        expect(Tok::kw_if, "'if'");
        r.condition = conditions();
        return r;
      }
      case Tok::kw_prevent: {
        shift();
        r.kind = Rule::Kind::prevent;
        r.target = conditions();
        expect(Tok::kw_if, "'if'");
        r.condition = conditions();
        return r;
      }
      case Tok::kw_force: {
        shift();
        r.kind = Rule::Kind::force;
        r.forced_events = event_list(false, "forced event set");
        expect(Tok::kw_on, "'on'");
        r.events = event_list(true, "");
        expect(Tok::kw_if, "'if'");
        r.condition = conditions();
        expect(Tok::kw_do, "'do'");
        r.actions = action_list();
        return r;
      }
      case Tok::kw_expected: {
        shift();
        r.kind = Rule::Kind::expectation;
        r.expected_event = formula();
        expect(Tok::kw_on, "'on'");
        r.events = event_list(false, "event set of an expectation rule");
        expect(Tok::kw_if, "'if'");
        r.condition = conditions();
        expect(Tok::kw_fulfilled_if, "'fulfilled-if'");
        r.fulfilled_cond = conditions();
        expect(Tok::kw_violated_if, "'violated-if'");
        r.violated_cond = conditions();
        expect(Tok::kw_sanction_do, "'sanction-do'");
        r.sanction_actions = action_list();
        return r;
      }
      default:
        fail("expected a rule body (on/if/ignore/prevent/force/expected)");
    }
  }

  std::vector<AtomicFormula> event_list(bool allow_empty, const char* what) {
    if (cur_.type == Tok::lbracket) {
      Token at = cur_;
      shift();
      expect(Tok::rbracket, "']'");
      if (!allow_empty)
        throw ParseError{Diagnostic{at.line, at.col,
                                    std::string("empty ") + what + " is not allowed",
                                    false}};
      return {};
    }
    std::vector<AtomicFormula> events;
    events.push_back(formula());
    while (accept(Tok::comma)) events.push_back(formula());
    return events;
  }

  Condition conditions() {
    DepthGuard guard(*this);
    Condition first = condition();
    if (accept(Tok::amp)) return Condition::conj(std::move(first), conditions());
    return first;
  }

  Condition condition() {
    DepthGuard guard(*this);
    switch (cur_.type) {
      case Tok::kw_true:
        shift();
        return Condition::truth_value();
      case Tok::kw_not: {
        shift();
        expect(Tok::lparen, "'('");
        Condition inner = conditions();
        expect(Tok::rparen, "')'");
        return Condition::negation_of(std::move(inner));
      }
      case Tok::kw_sat: {
        shift();
        expect(Tok::lparen, "'('");
        auto cs = constraint_set();
        expect(Tok::rparen, "')'");
        return Condition::sat_of(std::move(cs));
      }
      case Tok::kw_seteq: {
        shift();
        expect(Tok::lparen, "'('");
        auto l = set_literal();
        expect(Tok::comma, "','");
        auto r = set_literal();
        expect(Tok::rparen, "')'");
        return Condition::set_eq_of(std::move(l), std::move(r));
      }
      case Tok::kw_time: {
        shift();
        expect(Tok::lparen, "'('");
        Term arg = term();
        expect(Tok::rparen, "')'");
        return Condition::time_of(std::move(arg));
      }
      case Tok::kw_builtin: {
        auto [name, args] = builtin_call();
        return Condition::builtin_of(std::move(name), std::move(args));
      }
      default: break;
    }
    Term t = term();
    if (auto op = relop()) {
      Term rhs = term();
      Constraint c{std::move(t), *op, std::move(rhs)};
      if (accept(Tok::kw_in)) return Condition::member_of(std::move(c), constraint_set());
      // A bare constraint is shorthand for a one-element sat set.
      return Condition::sat_of({std::move(c)});
    }
    auto f = AtomicFormula::from_term(t);
    if (!f) fail("expected a condition");
    ConstrainedFormula cf{std::move(*f), {}};
    if (accept(Tok::colon)) cf.constraints = constraint_set();
    return Condition::fact_of(std::move(cf));
  }

  std::optional<RelOp> relop() {
    switch (cur_.type) {
      case Tok::rel_eq: shift(); return RelOp::eq;
      case Tok::rel_ne: shift(); return RelOp::ne;
      case Tok::rel_lt: shift(); return RelOp::lt;
      case Tok::rel_le: shift(); return RelOp::le;
      case Tok::rel_gt: shift(); return RelOp::gt;
      case Tok::rel_ge: shift(); return RelOp::ge;
      default: return std::nullopt;
    }
  }

  std::vector<Constraint> constraint_set() {
    expect(Tok::lbrace, "'{'");
    std::vector<Constraint> cs;
    if (accept(Tok::rbrace)) return cs;
    cs.push_back(constraint());
    while (accept(Tok::comma)) cs.push_back(constraint());
    expect(Tok::rbrace, "'}'");
    return cs;
  }

  Constraint constraint() {
    Term lhs = term();
    auto op = relop();
    if (!op) fail("expected a relational operator");
    Term rhs = term();
    return Constraint{std::move(lhs), *op, std::move(rhs)};
  }

  std::vector<SetElem> set_literal() {
    expect(Tok::lbrace, "'{'");
    std::vector<SetElem> elems;
    if (accept(Tok::rbrace)) return elems;
    elems.push_back(set_elem());
    while (accept(Tok::comma)) elems.push_back(set_elem());
    expect(Tok::rbrace, "'}'");
    return elems;
  }

  SetElem set_elem() {
    Term t = term();
    if (auto op = relop()) {
      Term rhs = term();
      return Constraint{std::move(t), *op, std::move(rhs)};
    }
    return t;
  }

  std::pair<std::string, std::vector<Term>> builtin_call() {
    expect(Tok::kw_builtin, "'builtin'");
    expect(Tok::lparen, "'('");
    if (cur_.type != Tok::identifier) fail("expected a builtin name");
    std::string name = cur_.text;
    shift();
    std::vector<Term> args;
    while (accept(Tok::comma)) args.push_back(term());
    expect(Tok::rparen, "')'");
    return {std::move(name), std::move(args)};
  }

  std::vector<Action> action_list() {
    if (cur_.type == Tok::lbracket) {
      shift();
      expect(Tok::rbracket, "']'");
      return {};
    }
    std::vector<Action> actions;
    actions.push_back(action());
    while (accept(Tok::comma)) actions.push_back(action());
    return actions;
  }

  Action action() {
    DepthGuard guard(*this);
    if (cur_.type == Tok::kw_builtin) {
      auto [name, args] = builtin_call();
      return Action::builtin_of(std::move(name), std::move(args));
    }
    bool is_add = cur_.type == Tok::kw_add;
    if (!is_add && cur_.type != Tok::kw_del) fail("expected add, del or builtin");
    shift();
    expect(Tok::lparen, "'('");
    Action a = open_unit(is_add);
    expect(Tok::rparen, "')'");
    return a;
  }

  Action open_unit(bool is_add) {
    if (cur_.type == Tok::kw_rule) {
      shift();
      expect(Tok::lparen, "'('");
      Term id = term();
      expect(Tok::comma, "','");
      std::shared_ptr<const Rule> body;
      if (cur_.type == Tok::variable) {
        shift();  // wildcard body
      } else {
        body = std::make_shared<const Rule>(rule_body());
      }
      expect(Tok::rparen, "')'");
      if (is_add) {
        if (!body) fail("add of a rule needs a rule body");
        return Action::add_rule(std::move(id), Rule(*body));
      }
      return Action::del_rule(std::move(id), std::move(body));
    }
    ConstrainedFormula cf = constrained_formula();
    return is_add ? Action::add_fact(std::move(cf)) : Action::del_fact(std::move(cf));
  }

  ConstrainedFormula constrained_formula() {
    ConstrainedFormula cf{formula(), {}};
    if (accept(Tok::colon)) cf.constraints = constraint_set();
    return cf;
  }

  AtomicFormula formula() {
    Term t = term();
    auto f = AtomicFormula::from_term(t);
    if (!f) fail("expected an atomic formula");
    return std::move(*f);
  }

  Term term() { return addsub(); }

  Term addsub() {
    DepthGuard guard(*this);
    Term lhs = muldiv();
    for (;;) {
      if (accept(Tok::plus)) {
        lhs = Term::fn("+", {std::move(lhs), muldiv()});
      } else if (accept(Tok::minus)) {
        lhs = Term::fn("-", {std::move(lhs), muldiv()});
      } else {
        return lhs;
      }
    }
  }

  Term muldiv() {
    Term lhs = unary();
    for (;;) {
      if (accept(Tok::star)) {
        lhs = Term::fn("*", {std::move(lhs), unary()});
      } else if (accept(Tok::slash)) {
        Term rhs = unary();
        // A literal over a literal is rational syntax, folded on the spot.
        if (lhs.is_num() && rhs.is_num() && rhs.value() != 0) {
          lhs = Term::num(lhs.value() / rhs.value());
        } else {
          lhs = Term::fn("/", {std::move(lhs), std::move(rhs)});
        }
      } else {
        return lhs;
      }
    }
  }

  Term unary() {
    DepthGuard guard(*this);
    if (accept(Tok::minus)) {
      Term inner = unary();
      if (inner.is_num()) return Term::num(-inner.value());
      return Term::fn("-", {std::move(inner)});
    }
    return primary();
  }

  Term primary() {
    DepthGuard guard(*this);
    switch (cur_.type) {
      case Tok::number: {
        Term t = Term::num(cur_.number);
        shift();
        return t;
      }
      case Tok::variable: {
        std::string name = cur_.text;
        shift();
        if (name == "_") name = "_G" + std::to_string(++anon_counter_);
        return Term::var(std::move(name));
      }
      case Tok::identifier: {
        std::string name = cur_.text;
        shift();
        if (cur_.type != Tok::lparen) return Term::atom(std::move(name));
        shift();
        std::vector<Term> args;
        args.push_back(term());
        while (accept(Tok::comma)) args.push_back(term());
        expect(Tok::rparen, "')'");
        return Term::fn(std::move(name), std::move(args));
      }
      case Tok::lparen: {
        shift();
        Term t = term();
        expect(Tok::rparen, "')'");
        return t;
      }
      default:
        fail("expected a term");
    }
  }

  void note_arity(const AtomicFormula& f,
                  std::map<std::string, size_t>& arities,
                  std::set<std::string>& warned) {
    auto [it, fresh] = arities.emplace(f.predicate, f.args.size());
    if (!fresh && it->second != f.args.size() && warned.insert(f.predicate).second) {
      diagnostics_.push_back(Diagnostic{
          0, 0,
          "predicate '" + f.predicate + "' used with arities " +
              std::to_string(it->second) + " and " + std::to_string(f.args.size()),
          true});
    }
  }

  void walk_condition(const Condition& c, std::map<std::string, size_t>& arities,
                      std::set<std::string>& warned) {
    switch (c.kind) {
      case Condition::Kind::conjunction:
        walk_condition(*c.lhs, arities, warned);
        walk_condition(*c.rhs, arities, warned);
        break;
      case Condition::Kind::negation:
        walk_condition(*c.lhs, arities, warned);
        break;
      case Condition::Kind::fact:
        note_arity(c.formula.atom, arities, warned);
        break;
      default: break;
    }
  }

  void walk_rule(const Rule& r, std::map<std::string, size_t>& arities,
                 std::set<std::string>& warned) {
    for (const auto& e : r.events) note_arity(e, arities, warned);
    for (const auto& e : r.forced_events) note_arity(e, arities, warned);
    note_arity(r.expected_event, arities, warned);
    walk_condition(r.condition, arities, warned);
    walk_condition(r.target, arities, warned);
    walk_condition(r.fulfilled_cond, arities, warned);
    walk_condition(r.violated_cond, arities, warned);
    for (const auto* actions : {&r.actions, &r.sanction_actions}) {
      for (const auto& a : *actions) {
        if (a.kind == Action::Kind::builtin) continue;
        if (a.is_rule) {
          if (a.rule_body) walk_rule(*a.rule_body, arities, warned);
        } else {
          note_arity(a.fact.atom, arities, warned);
        }
      }
    }
  }

  void check_arities(const RuleBase& rb) {
    std::map<std::string, size_t> arities;
    std::set<std::string> warned;
    for (const auto& entry : rb.rules) {
      Rule placeholder = entry.rule;
      if (placeholder.kind != Rule::Kind::expectation)
        placeholder.expected_event = AtomicFormula{"", {}};
      walk_rule(placeholder, arities, warned);
    }
    arities.erase("");
  }

  Lexer lexer_;
  Token cur_;
  std::vector<Diagnostic> diagnostics_;
  int depth_ = 0;
  int anon_counter_ = 0;
};

}  // namespace

ParseResult parse_program(std::string_view text) {
  Parser parser(text);
  return parser.program();
}

std::string serialize(const RuleBase& rb) {
  std::ostringstream os;
  for (const auto& entry : rb.rules) os << entry.str() << ".\n";
  return os.str();
}

namespace {

AtomicFormula suffixed_id(const AtomicFormula& id, const char* suffix,
                          const std::set<std::string>& taken) {
  AtomicFormula out{id.predicate + suffix, id.args};
  int n = 1;
  while (taken.count(out.str()))
    out.predicate = id.predicate + suffix + "_" + std::to_string(++n);
  return out;
}

ConstrainedFormula expectation_fact(const AtomicFormula& event) {
  return ConstrainedFormula{AtomicFormula{"exp", {event.to_term()}}, {}};
}

}  // namespace

RuleBase desugar_expectations(const RuleBase& rb) {
  std::set<std::string> taken;
  for (const auto& entry : rb.rules) taken.insert(entry.id.str());

  RuleBase out;
  for (const auto& entry : rb.rules) {
    if (entry.rule.kind != Rule::Kind::expectation) {
      out.rules.push_back(entry);
      continue;
    }
    const Rule& exp = entry.rule;
    ConstrainedFormula marker = expectation_fact(exp.expected_event);

    Rule adder;
    adder.kind = Rule::Kind::eca;
    adder.events = exp.events;
    adder.condition = exp.condition;
    adder.actions = {Action::add_fact(marker)};

    Rule fulfil;
    fulfil.kind = Rule::Kind::if_then;
    fulfil.condition = Condition::conj(Condition::fact_of(marker), exp.fulfilled_cond);
    fulfil.actions = {Action::del_fact(marker)};

    Rule sanction;
    sanction.kind = Rule::Kind::if_then;
    sanction.condition = Condition::conj(Condition::fact_of(marker), exp.violated_cond);
    sanction.actions = {Action::del_fact(marker)};
    sanction.actions.insert(sanction.actions.end(), exp.sanction_actions.begin(),
                            exp.sanction_actions.end());

    for (auto&& [suffix, rule] :
         std::initializer_list<std::pair<const char*, Rule*>>{
             {"_add", &adder}, {"_fulfil", &fulfil}, {"_sanction", &sanction}}) {
      AtomicFormula id = suffixed_id(entry.id, suffix, taken);
      taken.insert(id.str());
      out.rules.push_back(RuleEntry{std::move(id), std::move(*rule)});
    }
  }
  return out;
}

namespace {

template <typename F>
auto parse_single(std::string_view text, std::string* error, F&& extract)
    -> std::optional<decltype(extract(std::declval<Parser&>()))> {
  Parser parser(text);
  try {
    return extract(parser);
  } catch (const ParseError& e) {
    if (error) *error = e.diag.text();
    return std::nullopt;
  }
}

}  // namespace

std::optional<Term> parse_term_text(std::string_view text, std::string* error) {
  return parse_single(text, error, [](Parser& p) { return p.single_term(); });
}

std::optional<AtomicFormula> parse_formula_text(std::string_view text,
                                                std::string* error) {
  return parse_single(text, error, [](Parser& p) { return p.single_formula(); });
}

std::optional<ConstrainedFormula> parse_constrained_formula_text(
    std::string_view text, std::string* error) {
  return parse_single(text, error,
                      [](Parser& p) { return p.single_constrained_formula(); });
}

}  // namespace instar
